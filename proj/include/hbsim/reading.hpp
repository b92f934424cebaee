#pragma once

#include <cstdint>
#include <string>

namespace hbsim {

/// Measurement envelope of the simulated sensor box. Generated values are
/// clamped into these ranges after noise is applied.
struct SensorSuite {
    static constexpr double kTempMinC = -40.0;
    static constexpr double kTempMaxC = 80.0;
    static constexpr double kRhMinPct = 5.0;
    static constexpr double kRhMaxPct = 99.0;
    static constexpr int kCo2MinPpm = 0;
    static constexpr int kCo2MaxPpm = 2000;
    static constexpr int kDustMinPcsPerL = 0;
    static constexpr int kDustMaxPcsPerL = 28000;
    static constexpr int kAqCodeMin = 0;
    static constexpr int kAqCodeMax = 1023;
};

/// Default sampling cadence of a collector: one reading every 15 s.
inline constexpr std::int64_t kDefaultSamplePeriodMs = 15'000;

/// One sample of the six environmental parameters, in the raw integer
/// encodings used on the wire and in the store. Humidity and temperature are
/// fixed-point hundredths (real value = raw / 100).
struct Reading {
    std::int64_t device_id = 0;
    std::int64_t collector_id = 0;
    std::int64_t utc_timestamp_ms = 0;
    std::int64_t humidity_raw = 0;    // RH% x 100
    std::int64_t temperature_raw = 0; // degC x 100
    std::int64_t co2_ppm = 0;
    std::int64_t dust_pcs_per_l = 0;
    std::int64_t air_quality_code = 0; // 0..1023
    std::int64_t vibration_count = 0;  // rising edges per sample window

    bool operator==(const Reading&) const = default;
};

/// Fixed-point encode for humidity/temperature: round-half-up(value * 100).
std::int64_t encode_raw(double value);

/// Inverse of encode_raw. |decode_raw(encode_raw(v)) - v| <= 0.005.
double decode_raw(std::int64_t raw);

/// Maps an analog air-quality voltage in [0, 5] V onto the 10-bit ADC code
/// 0..1023, rounding half-up. Throws OutOfRangeVoltage outside [0, 5].
std::int64_t aq_voltage_to_code(double volts);

/// Maps a low-pulse-occupancy ratio in [0, 1] onto a dust concentration in
/// pcs/L via the full-scale linear map ratio * 28000 (rounded half-up).
/// Throws OutOfRangeLpo outside [0, 1].
std::int64_t dust_from_lpo(double lpo_ratio);

/// True when every field of r lies inside the SensorSuite envelope.
bool in_ranges(const Reading& r);

} // namespace hbsim
