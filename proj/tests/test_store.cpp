#include <doctest.h>

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <random>
#include <vector>

#include "hbsim/errors.hpp"
#include "hbsim/store.hpp"
#include "hbsim/time_util.hpp"

using namespace hbsim;

namespace {

SensingRecord record_at(std::int64_t t_ms, std::int64_t device = 1,
                        std::int64_t collector = 1) {
    SensingRecord r;
    r.utc_timestamp_ms = t_ms;
    r.partition_key = partition_key(t_ms);
    r.device_id = device;
    r.collector_id = collector;
    r.humidity_raw = 2570;
    r.temperature_raw = 2100;
    r.co2_ppm = 600;
    r.dust_pcs_per_l = 1400;
    r.air_quality_code = 307;
    r.vibration_count = 0;
    return r;
}

TelemetryStore one_device_store() {
    TelemetryStore store;
    store.add_building("Building 1");
    store.add_device("box-1", 1);
    return store;
}

std::filesystem::path temp_dir(const char* tag) {
    auto dir = std::filesystem::temp_directory_path() / "hbsim-test" / tag;
    std::filesystem::remove_all(dir);
    return dir;
}

} // namespace

TEST_CASE("partition key is the UTC day index, floor-divided before the epoch") {
    // Independent oracle: C++20 civil calendar.
    using namespace std::chrono;
    const auto apr5 = sys_days{year{2021} / April / day{5}}.time_since_epoch().count();
    CHECK(partition_key(1'617'580'800'000) == apr5);
    CHECK(apr5 == 18722);
    CHECK(partition_key(1'617'580'800'000 + kMsPerDay - 1) == 18722);
    CHECK(partition_key(0) == 0);
    CHECK(partition_key(-1) == -1);
    CHECK(partition_key(-kMsPerDay) == -1);
    CHECK(partition_key(-kMsPerDay - 1) == -2);
}

TEST_CASE("catalog enforces foreign keys and CSV-safe names") {
    TelemetryStore store;
    CHECK(store.add_building("Building 1") == 1);
    CHECK(store.add_building("Building 2") == 2);
    CHECK(store.add_device("box-1", 1) == 1);
    CHECK_THROWS_AS(store.add_device("box-x", 99), ForeignKeyViolation);
    CHECK_THROWS_AS(store.add_building("a,b"), ConfigError);
    CHECK_THROWS_AS(store.add_device("a\nb", 1), ConfigError);
}

TEST_CASE("insert assigns dense ids and rejects duplicates") {
    TelemetryStore store = one_device_store();
    CHECK(store.insert(record_at(1000)) == 1);
    CHECK(store.insert(record_at(2000)) == 2);
    CHECK(store.insert(record_at(3000)) == 3);
    CHECK_THROWS_AS(store.insert(record_at(2000)), DuplicateSample);
    CHECK_THROWS_AS(store.insert(record_at(500, 42)), ForeignKeyViolation);
    CHECK(store.size() == 3);
    // Same timestamp under a different collector is a distinct sample.
    SensingRecord other = record_at(2000, 1, 2);
    CHECK(store.insert(other) == 4);
}

TEST_CASE("insert_with_id keeps ids and validates the partition key") {
    TelemetryStore store = one_device_store();
    SensingRecord r = record_at(kMsPerDay + 1);
    r.id = 10;
    store.insert_with_id(r);
    CHECK_THROWS_AS(store.insert_with_id(r), DuplicateSample); // id reuse

    SensingRecord bad = record_at(5000);
    bad.id = 11;
    bad.partition_key = 99; // day index that does not match the timestamp
    CHECK_THROWS_AS(store.insert_with_id(bad), PartitionInconsistent);

    // The dense counter continues past the highest explicit id.
    CHECK(store.insert(record_at(9000)) == 11);
}

TEST_CASE("query_range is half-open and sorted") {
    TelemetryStore store = one_device_store();
    store.add_device("box-2", 1);
    // Insert out of order, across two days.
    store.insert(record_at(kMsPerDay + 300));
    store.insert(record_at(100));
    store.insert(record_at(kMsPerDay - 1));
    store.insert(record_at(200, 2)); // other device, must not leak in

    const auto rows = store.query_range(1, 100, kMsPerDay + 300);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].utc_timestamp_ms == 100);      // t0 inclusive
    CHECK(rows[1].utc_timestamp_ms == kMsPerDay - 1);
    // t1 exclusive: the kMsPerDay+300 row is out.

    const auto all = store.query_range(1, 0, 2 * kMsPerDay);
    REQUIRE(all.size() == 3);
    CHECK(all[0].utc_timestamp_ms < all[1].utc_timestamp_ms);
    CHECK(all[1].utc_timestamp_ms < all[2].utc_timestamp_ms);

    CHECK_THROWS_AS(store.query_range(42, 0, 1), UnknownDevice);
}

TEST_CASE("range queries touch only the day buckets they intersect") {
    TelemetryStore store = one_device_store();
    for (int day = 0; day < 10; ++day)
        store.insert(record_at(day * kMsPerDay + 12 * kMsPerHour));

    store.reset_partitions_scanned();
    (void)store.query_range(1, 3 * kMsPerDay, 5 * kMsPerDay);
    CHECK(store.partitions_scanned() == 2); // days 3 and 4 only

    store.reset_partitions_scanned();
    (void)store.query_range(1, 100 * kMsPerDay, 200 * kMsPerDay);
    CHECK(store.partitions_scanned() == 0); // nothing stored there

    // A one-ms slice of a single day opens exactly that day.
    store.reset_partitions_scanned();
    (void)store.query_range(1, 7 * kMsPerDay, 7 * kMsPerDay + 1);
    CHECK(store.partitions_scanned() == 1);
}

TEST_CASE("all_records is export-ordered") {
    TelemetryStore store = one_device_store();
    store.add_device("box-2", 1);
    store.insert(record_at(5000, 2));
    store.insert(record_at(1000, 1));
    store.insert(record_at(3000, 2));
    store.insert(record_at(2000, 1));

    const auto rows = store.all_records();
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].device_id == 1);
    CHECK(rows[0].utc_timestamp_ms == 1000);
    CHECK(rows[1].utc_timestamp_ms == 2000);
    CHECK(rows[2].device_id == 2);
    CHECK(rows[2].utc_timestamp_ms == 3000);
    CHECK(rows[3].utc_timestamp_ms == 5000);
}

TEST_CASE("save and load round-trip the whole store") {
    const auto dir = temp_dir("store-roundtrip");
    TelemetryStore store;
    store.add_building("Main hall");
    store.add_building("Annex");
    store.add_device("box-1", 1);
    store.add_device("box-2", 2);
    std::mt19937_64 gen(3);
    for (int i = 0; i < 500; ++i) {
        const auto device = 1 + static_cast<std::int64_t>(gen() % 2);
        SensingRecord r = record_at(static_cast<std::int64_t>(gen() % (10 * kMsPerDay)), device);
        r.humidity_raw = static_cast<std::int64_t>(gen() % 9900);
        try {
            store.insert(r);
        } catch (const DuplicateSample&) {
            // timestamp collision in the random draw — skip
        }
    }
    store.save(dir);

    TelemetryStore loaded = TelemetryStore::load(dir);
    CHECK(loaded.buildings() == store.buildings());
    CHECK(loaded.devices() == store.devices());
    CHECK(loaded.all_records() == store.all_records());
    CHECK(loaded.size() == store.size());

    // The id counter survives persistence: no id reuse after load.
    const auto next_original = store.insert(record_at(123'456'789));
    const auto next_loaded = loaded.insert(record_at(123'456'789));
    CHECK(next_original == next_loaded);
    std::filesystem::remove_all(dir);
}

TEST_CASE("load rejects a missing directory") {
    CHECK_THROWS_AS(TelemetryStore::load("/nonexistent/hbsim-store"), StorageError);
}
