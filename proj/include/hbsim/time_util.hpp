#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace hbsim {

inline constexpr std::int64_t kMsPerSecond = 1000;
inline constexpr std::int64_t kMsPerMinute = 60 * kMsPerSecond;
inline constexpr std::int64_t kMsPerHour = 60 * kMsPerMinute;
inline constexpr std::int64_t kMsPerDay = 24 * kMsPerHour;

struct CivilDate {
    int year;
    int month; // 1..12
    int day;   // 1..31
};

/// Start of the UTC hour containing utc_ms (floor division, pre-epoch safe).
inline std::int64_t hour_start(std::int64_t utc_ms) {
    std::int64_t h = utc_ms / kMsPerHour;
    if (utc_ms % kMsPerHour < 0) --h;
    return h * kMsPerHour;
}

/// Days since 1970-01-01 for a proleptic-Gregorian civil date.
std::int64_t days_from_civil(int year, int month, int day);

/// Inverse of days_from_civil.
CivilDate civil_from_days(std::int64_t days);

/// "2021-04-05T13:00:00Z". Sub-second remainders are printed as ".mmm" only
/// when nonzero, so whole-second stamps stay compact.
std::string format_iso8601_utc(std::int64_t utc_ms);

/// Parses "YYYY-MM-DD", "YYYY-MM-DDTHH:MM:SS" or "...SSZ" (plus optional
/// ".mmm") as UTC milliseconds. Throws ConfigError on malformed input.
std::int64_t parse_iso8601_utc(std::string_view text);

/// Timezone spec for CLI window boundaries: "UTC", "CET" (+01:00 fixed),
/// "CEST" (+02:00 fixed), or "+HH:MM"/"-HH:MM". Returns the fixed offset in
/// milliseconds east of UTC. Throws ConfigError on anything else.
std::int64_t tz_offset_ms(std::string_view tz);

} // namespace hbsim
