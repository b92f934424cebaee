#include "hbsim/store.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

#include "hbsim/csv_interop.hpp"
#include "hbsim/errors.hpp"
#include "hbsim/time_util.hpp"

namespace hbsim {

std::int64_t partition_key(std::int64_t utc_ms) {
    std::int64_t k = utc_ms / kMsPerDay;
    if (utc_ms % kMsPerDay < 0) --k;
    return k;
}

SensingRecord record_from_reading(const Reading& r) {
    SensingRecord rec;
    rec.utc_timestamp_ms = r.utc_timestamp_ms;
    rec.partition_key = partition_key(r.utc_timestamp_ms);
    rec.device_id = r.device_id;
    rec.collector_id = r.collector_id;
    rec.humidity_raw = r.humidity_raw;
    rec.temperature_raw = r.temperature_raw;
    rec.co2_ppm = r.co2_ppm;
    rec.dust_pcs_per_l = r.dust_pcs_per_l;
    rec.air_quality_code = r.air_quality_code;
    rec.vibration_count = r.vibration_count;
    return rec;
}

namespace {

void check_name(const std::string& name) {
    if (name.find(',') != std::string::npos || name.find('\n') != std::string::npos ||
        name.find('\r') != std::string::npos) {
        throw ConfigError("name \"" + name + "\" must not contain commas or line breaks");
    }
}

} // namespace

std::int64_t TelemetryStore::add_building(std::string name) {
    const std::int64_t id =
        buildings_.empty() ? 1 : buildings_.back().id + 1;
    add_building_with_id(id, std::move(name));
    return id;
}

void TelemetryStore::add_building_with_id(std::int64_t id, std::string name) {
    check_name(name);
    if (!building_ids_.insert(id).second) {
        throw DuplicateSample("building id " + std::to_string(id) + " already exists");
    }
    buildings_.push_back({id, std::move(name)});
}

std::int64_t TelemetryStore::add_device(std::string name, std::int64_t building_id) {
    const std::int64_t id = devices_.empty() ? 1 : devices_.back().id + 1;
    add_device_with_id(id, std::move(name), building_id);
    return id;
}

void TelemetryStore::add_device_with_id(std::int64_t id, std::string name,
                                        std::int64_t building_id) {
    check_name(name);
    if (!building_ids_.count(building_id)) {
        throw ForeignKeyViolation("device \"" + name + "\" references unknown building " +
                                  std::to_string(building_id));
    }
    if (!device_ids_.insert(id).second) {
        throw DuplicateSample("device id " + std::to_string(id) + " already exists");
    }
    devices_.push_back({id, std::move(name), building_id});
}

bool TelemetryStore::has_device(std::int64_t device_id) const {
    return device_ids_.count(device_id) != 0;
}

void TelemetryStore::check_insertable(const SensingRecord& r) const {
    if (!device_ids_.count(r.device_id)) {
        throw ForeignKeyViolation("sensing record references unknown device " +
                                  std::to_string(r.device_id));
    }
    const auto it = seen_.find({r.device_id, r.collector_id});
    if (it != seen_.end() && it->second.count(r.utc_timestamp_ms)) {
        throw DuplicateSample("duplicate sample for device " + std::to_string(r.device_id) +
                              ", collector " + std::to_string(r.collector_id) + " at t=" +
                              std::to_string(r.utc_timestamp_ms));
    }
}

std::int64_t TelemetryStore::insert(SensingRecord r) {
    check_insertable(r);
    r.id = next_record_id_++;
    r.partition_key = partition_key(r.utc_timestamp_ms);
    used_ids_.insert(r.id);
    seen_[{r.device_id, r.collector_id}].insert(r.utc_timestamp_ms);
    partitions_[r.partition_key].push_back(r);
    ++record_count_;
    return r.id;
}

void TelemetryStore::insert_with_id(const SensingRecord& r) {
    check_insertable(r);
    if (r.partition_key != partition_key(r.utc_timestamp_ms)) {
        throw PartitionInconsistent("record " + std::to_string(r.id) + " has partition key " +
                                    std::to_string(r.partition_key) + ", expected " +
                                    std::to_string(partition_key(r.utc_timestamp_ms)));
    }
    if (!used_ids_.insert(r.id).second) {
        throw DuplicateSample("record id " + std::to_string(r.id) + " already exists");
    }
    seen_[{r.device_id, r.collector_id}].insert(r.utc_timestamp_ms);
    partitions_[r.partition_key].push_back(r);
    ++record_count_;
    next_record_id_ = std::max(next_record_id_, r.id + 1);
}

std::vector<SensingRecord> TelemetryStore::query_range(std::int64_t device_id,
                                                       std::int64_t t0_ms,
                                                       std::int64_t t1_ms) const {
    if (!device_ids_.count(device_id)) {
        throw UnknownDevice("unknown device " + std::to_string(device_id));
    }
    std::vector<SensingRecord> out;
    if (t1_ms <= t0_ms) return out;
    const std::int64_t k0 = partition_key(t0_ms);
    const std::int64_t k1 = partition_key(t1_ms - 1);
    for (auto it = partitions_.lower_bound(k0); it != partitions_.end() && it->first <= k1;
         ++it) {
        ++partitions_scanned_;
        for (const SensingRecord& r : it->second) {
            if (r.device_id == device_id && r.utc_timestamp_ms >= t0_ms &&
                r.utc_timestamp_ms < t1_ms) {
                out.push_back(r);
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const SensingRecord& a, const SensingRecord& b) {
        return a.utc_timestamp_ms < b.utc_timestamp_ms;
    });
    return out;
}

std::vector<SensingRecord> TelemetryStore::all_records() const {
    std::vector<SensingRecord> out;
    out.reserve(record_count_);
    for (const auto& [key, bucket] : partitions_) {
        out.insert(out.end(), bucket.begin(), bucket.end());
    }
    std::sort(out.begin(), out.end(), [](const SensingRecord& a, const SensingRecord& b) {
        if (a.device_id != b.device_id) return a.device_id < b.device_id;
        return a.utc_timestamp_ms < b.utc_timestamp_ms;
    });
    return out;
}

void TelemetryStore::save(const std::filesystem::path& dir) const {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir / "partitions", ec);
    if (ec) throw StorageError("cannot create " + (dir / "partitions").string());

    nlohmann::json meta;
    meta["next_record_id"] = next_record_id_;
    meta["buildings"] = nlohmann::json::array();
    for (const Building& b : buildings_) {
        meta["buildings"].push_back({{"id", b.id}, {"name", b.name}});
    }
    meta["devices"] = nlohmann::json::array();
    for (const Device& d : devices_) {
        meta["devices"].push_back(
            {{"id", d.id}, {"name", d.name}, {"building_id", d.building_id}});
    }
    std::ofstream mf(dir / "meta.json", std::ios::binary);
    if (!mf) throw StorageError("cannot write " + (dir / "meta.json").string());
    mf << meta.dump(2) << '\n';

    for (const auto& [key, bucket] : partitions_) {
        std::vector<SensingRecord> rows = bucket;
        std::sort(rows.begin(), rows.end(),
                  [](const SensingRecord& a, const SensingRecord& b) { return a.id < b.id; });
        const fs::path file = dir / "partitions" / (std::to_string(key) + ".csv");
        std::ofstream pf(file, std::ios::binary);
        if (!pf) throw StorageError("cannot write " + file.string());
        write_sensing_csv(pf, rows);
    }
}

TelemetryStore TelemetryStore::load(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    std::ifstream mf(dir / "meta.json", std::ios::binary);
    if (!mf) throw StorageError("cannot read " + (dir / "meta.json").string());
    nlohmann::json meta;
    try {
        mf >> meta;
    } catch (const nlohmann::json::exception& e) {
        throw StorageError("malformed meta.json: " + std::string(e.what()));
    }

    TelemetryStore store;
    for (const auto& b : meta.at("buildings")) {
        store.add_building_with_id(b.at("id").get<std::int64_t>(),
                                   b.at("name").get<std::string>());
    }
    for (const auto& d : meta.at("devices")) {
        store.add_device_with_id(d.at("id").get<std::int64_t>(),
                                 d.at("name").get<std::string>(),
                                 d.at("building_id").get<std::int64_t>());
    }

    const fs::path pdir = dir / "partitions";
    std::vector<fs::path> files;
    if (fs::exists(pdir)) {
        for (const auto& entry : fs::directory_iterator(pdir)) {
            if (entry.path().extension() == ".csv") files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    for (const fs::path& file : files) {
        for (const SensingRecord& r : read_sensing_csv(file)) {
            store.insert_with_id(r);
        }
    }
    store.next_record_id_ =
        std::max(store.next_record_id_, meta.value("next_record_id", std::int64_t{1}));
    return store;
}

} // namespace hbsim
