#include "hbsim/reading.hpp"

#include <cmath>

#include "hbsim/errors.hpp"
#include "hbsim/rng.hpp"

namespace hbsim {

std::int64_t encode_raw(double value) {
    return round_half_up(value * 100.0);
}

double decode_raw(std::int64_t raw) {
    return static_cast<double>(raw) / 100.0;
}

std::int64_t aq_voltage_to_code(double volts) {
    if (!(volts >= 0.0 && volts <= 5.0)) {
        throw OutOfRangeVoltage("air-quality voltage " + std::to_string(volts) +
                                " outside [0, 5] V");
    }
    return round_half_up(volts / 5.0 * 1023.0);
}

std::int64_t dust_from_lpo(double lpo_ratio) {
    if (!(lpo_ratio >= 0.0 && lpo_ratio <= 1.0)) {
        throw OutOfRangeLpo("LPO ratio " + std::to_string(lpo_ratio) + " outside [0, 1]");
    }
    return round_half_up(lpo_ratio * static_cast<double>(SensorSuite::kDustMaxPcsPerL));
}

bool in_ranges(const Reading& r) {
    const double rh = decode_raw(r.humidity_raw);
    const double temp = decode_raw(r.temperature_raw);
    return rh >= SensorSuite::kRhMinPct && rh <= SensorSuite::kRhMaxPct &&
           temp >= SensorSuite::kTempMinC && temp <= SensorSuite::kTempMaxC &&
           r.co2_ppm >= SensorSuite::kCo2MinPpm && r.co2_ppm <= SensorSuite::kCo2MaxPpm &&
           r.dust_pcs_per_l >= SensorSuite::kDustMinPcsPerL &&
           r.dust_pcs_per_l <= SensorSuite::kDustMaxPcsPerL &&
           r.air_quality_code >= SensorSuite::kAqCodeMin &&
           r.air_quality_code <= SensorSuite::kAqCodeMax && r.vibration_count >= 0;
}

} // namespace hbsim
