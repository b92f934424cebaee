#include "hbsim/csv_interop.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "hbsim/errors.hpp"

namespace hbsim {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

std::int64_t to_int(std::string_view field, std::string_view column) {
    std::int64_t v = 0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || field.empty()) {
        throw TypeError("column " + std::string(column) + ": \"" + std::string(field) +
                        "\" is not an integer");
    }
    return v;
}

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

void check_header(const std::string& got, std::string_view want,
                  const std::filesystem::path& file) {
    if (got != want) {
        throw SchemaMismatch(file.string() + ": header \"" + got + "\" does not match \"" +
                             std::string(want) + "\"");
    }
}

std::ofstream open_out(const std::filesystem::path& file) {
    std::ofstream os(file, std::ios::binary); // binary keeps line endings LF everywhere
    if (!os) throw StorageError("cannot write " + file.string());
    return os;
}

std::ifstream open_in(const std::filesystem::path& file) {
    std::ifstream is(file, std::ios::binary);
    if (!is) throw StorageError("cannot read " + file.string());
    return is;
}

} // namespace

std::string sensing_row(const SensingRecord& r) {
    std::ostringstream os;
    os << r.id << ',' << r.utc_timestamp_ms << ',' << r.partition_key << ',' << r.device_id
       << ',' << r.collector_id << ',' << r.humidity_raw << ',' << r.temperature_raw << ','
       << r.co2_ppm << ',' << r.dust_pcs_per_l << ',' << r.air_quality_code << ','
       << r.vibration_count;
    return os.str();
}

SensingRecord parse_sensing_row(std::string_view line) {
    const auto fields = split_fields(line);
    if (fields.size() != 11) {
        throw SchemaMismatch("sensing row has " + std::to_string(fields.size()) +
                             " fields, expected 11");
    }
    SensingRecord r;
    r.id = to_int(fields[0], "Id");
    r.utc_timestamp_ms = to_int(fields[1], "UtcTimestampMs");
    r.partition_key = to_int(fields[2], "PartitionKey");
    r.device_id = to_int(fields[3], "DeviceId");
    r.collector_id = to_int(fields[4], "CollectorId");
    r.humidity_raw = to_int(fields[5], "Humidity");
    r.temperature_raw = to_int(fields[6], "Temperature");
    r.co2_ppm = to_int(fields[7], "CO2");
    r.dust_pcs_per_l = to_int(fields[8], "Dust");
    r.air_quality_code = to_int(fields[9], "AirQuality");
    r.vibration_count = to_int(fields[10], "Vibration");
    if (r.partition_key != partition_key(r.utc_timestamp_ms)) {
        throw PartitionInconsistent("row " + std::to_string(r.id) + ": PartitionKey " +
                                    std::to_string(r.partition_key) + " does not match " +
                                    std::to_string(partition_key(r.utc_timestamp_ms)));
    }
    return r;
}

void write_sensing_csv(std::ostream& os, const std::vector<SensingRecord>& rows) {
    os << kSensingHeader << '\n';
    for (const SensingRecord& r : rows) os << sensing_row(r) << '\n';
}

std::vector<SensingRecord> read_sensing_csv(const std::filesystem::path& file) {
    std::ifstream is = open_in(file);
    std::string line;
    if (!std::getline(is, line)) throw SchemaMismatch(file.string() + ": empty file");
    check_header(strip_cr(line), kSensingHeader, file);
    std::vector<SensingRecord> rows;
    while (std::getline(is, line)) {
        line = strip_cr(line);
        if (line.empty()) continue;
        rows.push_back(parse_sensing_row(line));
    }
    return rows;
}

void export_store(const TelemetryStore& store, const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw StorageError("cannot create " + dir.string());

    std::vector<Building> buildings = store.buildings();
    std::sort(buildings.begin(), buildings.end(),
              [](const Building& a, const Building& b) { return a.id < b.id; });
    std::vector<Device> devices = store.devices();
    std::sort(devices.begin(), devices.end(),
              [](const Device& a, const Device& b) { return a.id < b.id; });

    std::set<std::int64_t> building_ids;
    for (const Building& b : buildings) building_ids.insert(b.id);
    std::set<std::int64_t> device_ids;
    for (const Device& d : devices) {
        if (!building_ids.count(d.building_id)) {
            throw ForeignKeyViolation("device " + std::to_string(d.id) +
                                      " references unknown building " +
                                      std::to_string(d.building_id));
        }
        device_ids.insert(d.id);
    }

    std::ofstream bf = open_out(dir / "buildings.csv");
    bf << kBuildingsHeader << '\n';
    for (const Building& b : buildings) bf << b.id << ',' << b.name << '\n';

    std::ofstream df = open_out(dir / "devices.csv");
    df << kDevicesHeader << '\n';
    for (const Device& d : devices) df << d.id << ',' << d.name << ',' << d.building_id << '\n';

    std::ofstream sf = open_out(dir / "sensing.csv");
    const std::vector<SensingRecord> rows = store.all_records(); // (DeviceId, ts) order
    for (const SensingRecord& r : rows) {
        if (!device_ids.count(r.device_id)) {
            throw ForeignKeyViolation("sensing row " + std::to_string(r.id) +
                                      " references unknown device " +
                                      std::to_string(r.device_id));
        }
    }
    write_sensing_csv(sf, rows);
}

TelemetryStore import_store(const std::filesystem::path& dir) {
    TelemetryStore store;

    {
        std::ifstream is = open_in(dir / "buildings.csv");
        std::string line;
        if (!std::getline(is, line)) {
            throw SchemaMismatch((dir / "buildings.csv").string() + ": empty file");
        }
        check_header(strip_cr(line), kBuildingsHeader, dir / "buildings.csv");
        while (std::getline(is, line)) {
            line = strip_cr(line);
            if (line.empty()) continue;
            const auto fields = split_fields(line);
            if (fields.size() != 2) {
                throw SchemaMismatch("buildings row has " + std::to_string(fields.size()) +
                                     " fields, expected 2");
            }
            store.add_building_with_id(to_int(fields[0], "Id"), std::string(fields[1]));
        }
    }
    {
        std::ifstream is = open_in(dir / "devices.csv");
        std::string line;
        if (!std::getline(is, line)) {
            throw SchemaMismatch((dir / "devices.csv").string() + ": empty file");
        }
        check_header(strip_cr(line), kDevicesHeader, dir / "devices.csv");
        while (std::getline(is, line)) {
            line = strip_cr(line);
            if (line.empty()) continue;
            const auto fields = split_fields(line);
            if (fields.size() != 3) {
                throw SchemaMismatch("devices row has " + std::to_string(fields.size()) +
                                     " fields, expected 3");
            }
            store.add_device_with_id(to_int(fields[0], "Id"), std::string(fields[1]),
                                     to_int(fields[2], "BuildingId"));
        }
    }
    for (const SensingRecord& r : read_sensing_csv(dir / "sensing.csv")) {
        store.insert_with_id(r);
    }
    return store;
}

} // namespace hbsim
