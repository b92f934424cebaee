#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "hbsim/store.hpp"

namespace hbsim {

// Data-sharing format: three CSV files, UTF-8, LF line endings, no quoting.
// Header rows are pinned verbatim; import rejects any deviation.
inline constexpr std::string_view kBuildingsHeader = "Id,BuildingName";
inline constexpr std::string_view kDevicesHeader = "Id,DeviceName,BuildingId";
inline constexpr std::string_view kSensingHeader =
    "Id,UtcTimestampMs,PartitionKey,DeviceId,CollectorId,Humidity,Temperature,CO2,Dust,"
    "AirQuality,Vibration";

/// One sensing row in file column order, no trailing newline.
std::string sensing_row(const SensingRecord& r);

/// Parses one sensing row. Wrong field count → SchemaMismatch; a field that
/// is not a plain integer → TypeError; PartitionKey not matching the
/// timestamp's day → PartitionInconsistent.
SensingRecord parse_sensing_row(std::string_view line);

/// Header plus one row per record, in the given order.
void write_sensing_csv(std::ostream& os, const std::vector<SensingRecord>& rows);

/// Reads a sensing CSV (header checked). Also used for trace replay.
std::vector<SensingRecord> read_sensing_csv(const std::filesystem::path& file);

/// Writes buildings.csv, devices.csv and sensing.csv into dir. Sensing rows
/// are sorted by (DeviceId, UtcTimestampMs); catalog rows by Id. Throws
/// ForeignKeyViolation if any reference fails to resolve.
void export_store(const TelemetryStore& store, const std::filesystem::path& dir);

/// Reads the three files back into a fresh store. Errors: SchemaMismatch
/// (bad header or field count), TypeError (non-integer numeric field),
/// PartitionInconsistent, ForeignKeyViolation, DuplicateSample.
TelemetryStore import_store(const std::filesystem::path& dir);

} // namespace hbsim
