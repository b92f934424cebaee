#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "hbsim/reading.hpp"

namespace hbsim {

struct Building {
    std::int64_t id = 0;
    std::string name;

    bool operator==(const Building&) const = default;
};

struct Device {
    std::int64_t id = 0;
    std::string name;
    std::int64_t building_id = 0;

    bool operator==(const Device&) const = default;
};

/// One persisted sensing row. Field meanings match Reading; partition_key is
/// the UTC day index used to bucket rows on disk.
struct SensingRecord {
    std::int64_t id = 0;
    std::int64_t utc_timestamp_ms = 0;
    std::int64_t partition_key = 0;
    std::int64_t device_id = 0;
    std::int64_t collector_id = 0;
    std::int64_t humidity_raw = 0;
    std::int64_t temperature_raw = 0;
    std::int64_t co2_ppm = 0;
    std::int64_t dust_pcs_per_l = 0;
    std::int64_t air_quality_code = 0;
    std::int64_t vibration_count = 0;

    bool operator==(const SensingRecord&) const = default;
};

/// Day index since 1970-01-01 UTC (floor division, safe for pre-epoch times).
std::int64_t partition_key(std::int64_t utc_ms);

/// Builds an id-less SensingRecord from a Reading (partition key included).
SensingRecord record_from_reading(const Reading& r);

/// Day-partitioned sensing store with a buildings/devices catalog.
///
/// Rows live in per-day buckets keyed by partition_key, so range queries only
/// touch the days they intersect (partitions_scanned() exposes that for
/// tests). Ids are assigned densely from 1 in insertion order. Writes are
/// single-threaded by design (the hub's consumer stage); const readers may run
/// concurrently once writing has stopped.
///
/// On-disk layout (save/load):
///   <dir>/meta.json          catalog + next record id
///   <dir>/partitions/<k>.csv one file per day bucket, sensing.csv columns
class TelemetryStore {
  public:
    std::int64_t add_building(std::string name);
    void add_building_with_id(std::int64_t id, std::string name);
    std::int64_t add_device(std::string name, std::int64_t building_id);
    void add_device_with_id(std::int64_t id, std::string name, std::int64_t building_id);

    /// Assigns the next dense id (returned), recomputes partition_key, and
    /// files the record. Throws ForeignKeyViolation for an unregistered
    /// device_id and DuplicateSample for a repeated
    /// (device_id, collector_id, utc_timestamp_ms).
    std::int64_t insert(SensingRecord r);

    /// Same checks as insert but keeps r.id (used by load and csv import).
    /// Also throws DuplicateSample when the id itself is already taken.
    void insert_with_id(const SensingRecord& r);

    /// Records with t0_ms <= timestamp < t1_ms for one device, ascending by
    /// timestamp. Throws UnknownDevice for an unregistered device_id.
    std::vector<SensingRecord> query_range(std::int64_t device_id, std::int64_t t0_ms,
                                           std::int64_t t1_ms) const;

    std::size_t size() const { return record_count_; }
    const std::vector<Building>& buildings() const { return buildings_; }
    const std::vector<Device>& devices() const { return devices_; }
    bool has_device(std::int64_t device_id) const;

    /// Every record, sorted by (device_id, utc_timestamp_ms) — export order.
    std::vector<SensingRecord> all_records() const;

    /// Number of day buckets opened by range queries since the last reset.
    /// Test instrumentation only — not synchronized across reader threads.
    std::uint64_t partitions_scanned() const { return partitions_scanned_; }
    void reset_partitions_scanned() { partitions_scanned_ = 0; }

    void save(const std::filesystem::path& dir) const;
    static TelemetryStore load(const std::filesystem::path& dir);

  private:
    void check_insertable(const SensingRecord& r) const;

    std::vector<Building> buildings_;
    std::vector<Device> devices_;
    std::set<std::int64_t> building_ids_;
    std::set<std::int64_t> device_ids_;
    std::map<std::int64_t, std::vector<SensingRecord>> partitions_;
    // duplicate guard: (device, collector) -> set of timestamps already filed
    std::map<std::pair<std::int64_t, std::int64_t>, std::set<std::int64_t>> seen_;
    std::set<std::int64_t> used_ids_;
    std::size_t record_count_ = 0;
    std::int64_t next_record_id_ = 1;
    mutable std::uint64_t partitions_scanned_ = 0;
};

} // namespace hbsim
