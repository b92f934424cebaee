#include <doctest.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hbsim/csv_interop.hpp"
#include "hbsim/errors.hpp"
#include "hbsim/store.hpp"
#include "hbsim/time_util.hpp"

using namespace hbsim;

namespace {

namespace fs = std::filesystem;

SensingRecord record_at(std::int64_t t_ms, std::int64_t device = 1) {
    SensingRecord r;
    r.utc_timestamp_ms = t_ms;
    r.partition_key = partition_key(t_ms);
    r.device_id = device;
    r.collector_id = 1;
    r.humidity_raw = 2437;
    r.temperature_raw = 2130;
    r.co2_ppm = 493;
    r.dust_pcs_per_l = 1400;
    r.air_quality_code = 307;
    r.vibration_count = 0;
    return r;
}

fs::path temp_dir(const char* tag) {
    auto dir = fs::temp_directory_path() / "hbsim-test" / tag;
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& file) {
    std::ifstream is(file, std::ios::binary);
    REQUIRE(is);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

} // namespace

TEST_CASE("sharing headers are pinned verbatim") {
    CHECK(kBuildingsHeader == "Id,BuildingName");
    CHECK(kDevicesHeader == "Id,DeviceName,BuildingId");
    CHECK(kSensingHeader ==
          "Id,UtcTimestampMs,PartitionKey,DeviceId,CollectorId,Humidity,Temperature,CO2,Dust,"
          "AirQuality,Vibration");
}

TEST_CASE("sensing rows serialize in column order") {
    SensingRecord r = record_at(1'617'580'800'000);
    r.id = 7;
    CHECK(sensing_row(r) == "7,1617580800000,18722,1,1,2437,2130,493,1400,307,0");
    CHECK(parse_sensing_row(sensing_row(r)) == r);
}

TEST_CASE("row parser rejects structural and type errors") {
    CHECK_THROWS_AS(parse_sensing_row("1,2,3"), SchemaMismatch);
    CHECK_THROWS_AS(
        parse_sensing_row("7,1617580800000,18722,1,1,2437,2130,493,1400,307,0,99"),
        SchemaMismatch);
    CHECK_THROWS_AS(
        parse_sensing_row("7,1617580800000,18722,1,1,wet,2130,493,1400,307,0"), TypeError);
    CHECK_THROWS_AS(
        parse_sensing_row("7,1617580800000,18722,1,1,24.37,2130,493,1400,307,0"), TypeError);
    // PartitionKey 18721 does not match the timestamp's day (18722).
    CHECK_THROWS_AS(
        parse_sensing_row("7,1617580800000,18721,1,1,2437,2130,493,1400,307,0"),
        PartitionInconsistent);
}

TEST_CASE("sensing CSV writes LF lines and reads back CRLF-tolerantly") {
    std::vector<SensingRecord> rows;
    for (int i = 0; i < 3; ++i) {
        SensingRecord r = record_at(1000 + i * 500);
        r.id = i + 1;
        rows.push_back(r);
    }
    std::ostringstream os;
    write_sensing_csv(os, rows);
    const std::string text = os.str();
    CHECK(text.find('\r') == std::string::npos);
    CHECK(text.substr(0, std::string(kSensingHeader).size()) == kSensingHeader);

    const auto dir = temp_dir("csv-crlf");
    fs::create_directories(dir);
    {
        // Re-emit with CRLF endings, as a spreadsheet roundtrip would.
        std::ofstream out(dir / "sensing.csv", std::ios::binary);
        for (char c : text) {
            if (c == '\n') out << "\r\n";
            else out << c;
        }
    }
    const auto parsed = read_sensing_csv(dir / "sensing.csv");
    CHECK(parsed == rows);
    fs::remove_all(dir);
}

TEST_CASE("read_sensing_csv rejects a wrong header and a missing file") {
    const auto dir = temp_dir("csv-badheader");
    fs::create_directories(dir);
    {
        std::ofstream out(dir / "sensing.csv", std::ios::binary);
        out << "Id,Timestamp\n";
    }
    CHECK_THROWS_AS(read_sensing_csv(dir / "sensing.csv"), SchemaMismatch);
    CHECK_THROWS_AS(read_sensing_csv(dir / "nope.csv"), StorageError);
    fs::remove_all(dir);
}

TEST_CASE("export writes catalogs and sensing sorted regardless of insert order") {
    TelemetryStore store;
    store.add_building("Main hall");
    store.add_building("Annex");
    store.add_device("box-1", 1);
    store.add_device("box-2", 2);
    store.insert(record_at(9000, 2));
    store.insert(record_at(1000, 2));
    store.insert(record_at(5000, 1));
    store.insert(record_at(2000, 1));

    const auto dir = temp_dir("csv-sorted");
    export_store(store, dir);

    CHECK(slurp(dir / "buildings.csv") == "Id,BuildingName\n1,Main hall\n2,Annex\n");
    CHECK(slurp(dir / "devices.csv") == "Id,DeviceName,BuildingId\n1,box-1,1\n2,box-2,2\n");
    const auto rows = read_sensing_csv(dir / "sensing.csv");
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].device_id == 1);
    CHECK(rows[0].utc_timestamp_ms == 2000);
    CHECK(rows[1].utc_timestamp_ms == 5000);
    CHECK(rows[2].device_id == 2);
    CHECK(rows[2].utc_timestamp_ms == 1000);
    CHECK(rows[3].utc_timestamp_ms == 9000);
    fs::remove_all(dir);
}

TEST_CASE("export, import and re-export are byte-identical") {
    TelemetryStore store;
    store.add_building("Main hall");
    store.add_device("box-1", 1);
    store.add_device("box-2", 1);
    for (int i = 0; i < 200; ++i) {
        store.insert(record_at(i * 15000, 1 + (i % 2)));
    }

    const auto first = temp_dir("csv-rt1");
    const auto second = temp_dir("csv-rt2");
    export_store(store, first);
    TelemetryStore imported = import_store(first);
    export_store(imported, second);
    for (const char* name : {"buildings.csv", "devices.csv", "sensing.csv"}) {
        CHECK(slurp(first / name) == slurp(second / name));
    }
    CHECK(imported.all_records() == store.all_records());
    fs::remove_all(first);
    fs::remove_all(second);
}

TEST_CASE("import rejects inconsistent bundles") {
    // A sensing row for a device the devices file does not declare.
    const auto dir = temp_dir("csv-badfk");
    fs::create_directories(dir);
    {
        std::ofstream b(dir / "buildings.csv", std::ios::binary);
        b << kBuildingsHeader << "\n1,Main hall\n";
        std::ofstream d(dir / "devices.csv", std::ios::binary);
        d << kDevicesHeader << "\n1,box-1,1\n";
        std::ofstream s(dir / "sensing.csv", std::ios::binary);
        s << kSensingHeader << "\n1,1000,0,9,1,2437,2130,493,1400,307,0\n";
    }
    CHECK_THROWS_AS(import_store(dir), ForeignKeyViolation);

    // A device pointing at a building that does not exist.
    {
        std::ofstream d(dir / "devices.csv", std::ios::binary);
        d << kDevicesHeader << "\n1,box-1,5\n";
    }
    CHECK_THROWS_AS(import_store(dir), ForeignKeyViolation);

    // Duplicate sample in the sensing file.
    {
        std::ofstream d(dir / "devices.csv", std::ios::binary);
        d << kDevicesHeader << "\n1,box-1,1\n";
        std::ofstream s(dir / "sensing.csv", std::ios::binary);
        s << kSensingHeader << "\n1,1000,0,1,1,2437,2130,493,1400,307,0\n"
          << "2,1000,0,1,1,2437,2130,493,1400,307,0\n";
    }
    CHECK_THROWS_AS(import_store(dir), DuplicateSample);

    // Catalog row with the wrong field count.
    {
        std::ofstream b(dir / "buildings.csv", std::ios::binary);
        b << kBuildingsHeader << "\n1\n";
    }
    CHECK_THROWS_AS(import_store(dir), SchemaMismatch);
    fs::remove_all(dir);
}
