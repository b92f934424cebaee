#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "hbsim/reading.hpp"

namespace hbsim {

/// Sequenced device-to-cloud envelope. Sequence numbers are per-device,
/// assigned gaplessly by the gateway at send time; gaps only ever appear
/// downstream, through channel drops.
struct TelemetryMessage {
    std::int64_t sequence = 0;
    Reading reading;
    std::int64_t sent_at_ms = 0;

    bool operator==(const TelemetryMessage&) const = default;
};

/// Wire format: one flat JSON object per message, keys
///   seq, sent_at_ms, device_id, collector_id, ts_ms,
///   humidity_raw, temperature_raw, co2_ppm, dust_pcs_per_l,
///   air_quality_code, vibration_count
/// all integers.
std::string encode_telemetry(const TelemetryMessage& msg);

/// Inverse of encode_telemetry. Throws ParseRejected on malformed JSON, a
/// missing or extra key, or a non-integer value.
TelemetryMessage parse_telemetry(std::string_view payload);

} // namespace hbsim
