#include "hbsim/time_util.hpp"

#include <cctype>
#include <cstdio>
#include <stdexcept>

#include "hbsim/errors.hpp"

namespace hbsim {

// Howard Hinnant's branchless civil-date algorithms (public domain).
std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);            // [0, 399]
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1; // [0, 365]
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;           // [0, 146096]
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

CivilDate civil_from_days(std::int64_t z) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);                // [0, 146096]
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;  // [0, 399]
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100); // [0, 365]
    const unsigned mp = (5 * doy + 2) / 153;                      // [0, 11]
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;              // [1, 31]
    const unsigned m = mp + (mp < 10 ? 3 : -9);                   // [1, 12]
    return {static_cast<int>(y + (m <= 2)), static_cast<int>(m), static_cast<int>(d)};
}

std::string format_iso8601_utc(std::int64_t utc_ms) {
    // floor division so pre-epoch stamps land in the right day
    std::int64_t days = utc_ms / kMsPerDay;
    std::int64_t rem = utc_ms % kMsPerDay;
    if (rem < 0) {
        rem += kMsPerDay;
        --days;
    }
    const CivilDate cd = civil_from_days(days);
    const int hh = static_cast<int>(rem / kMsPerHour);
    const int mm = static_cast<int>((rem / kMsPerMinute) % 60);
    const int ss = static_cast<int>((rem / kMsPerSecond) % 60);
    const int ms = static_cast<int>(rem % kMsPerSecond);
    char buf[40];
    if (ms != 0) {
        std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", cd.year, cd.month,
                      cd.day, hh, mm, ss, ms);
    } else {
        std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", cd.year, cd.month,
                      cd.day, hh, mm, ss);
    }
    return buf;
}

namespace {

bool parse_fixed_int(std::string_view s, std::size_t pos, std::size_t len, int& out) {
    if (pos + len > s.size()) return false;
    int v = 0;
    for (std::size_t i = pos; i < pos + len; ++i) {
        const char c = s[i];
        if (c < '0' || c > '9') return false;
        v = v * 10 + (c - '0');
    }
    out = v;
    return true;
}

[[noreturn]] void bad_timestamp(std::string_view text) {
    throw ConfigError("malformed timestamp: \"" + std::string(text) + "\"");
}

} // namespace

std::int64_t parse_iso8601_utc(std::string_view text) {
    int y = 0, mo = 0, d = 0;
    if (!parse_fixed_int(text, 0, 4, y) || text.size() < 10 || text[4] != '-' ||
        !parse_fixed_int(text, 5, 2, mo) || text[7] != '-' || !parse_fixed_int(text, 8, 2, d)) {
        bad_timestamp(text);
    }
    if (mo < 1 || mo > 12 || d < 1 || d > 31) bad_timestamp(text);
    std::int64_t ms = days_from_civil(y, mo, d) * kMsPerDay;
    if (text.size() == 10) return ms; // date only: midnight UTC

    int hh = 0, mm = 0, ss = 0;
    if (text[10] != 'T' || !parse_fixed_int(text, 11, 2, hh) || text.size() < 19 ||
        text[13] != ':' || !parse_fixed_int(text, 14, 2, mm) || text[16] != ':' ||
        !parse_fixed_int(text, 17, 2, ss)) {
        bad_timestamp(text);
    }
    if (hh > 23 || mm > 59 || ss > 59) bad_timestamp(text);
    ms += hh * kMsPerHour + mm * kMsPerMinute + ss * kMsPerSecond;

    std::size_t pos = 19;
    if (pos < text.size() && text[pos] == '.') {
        int frac = 0;
        if (!parse_fixed_int(text, pos + 1, 3, frac)) bad_timestamp(text);
        ms += frac;
        pos += 4;
    }
    if (pos < text.size()) {
        if (text[pos] != 'Z' || pos + 1 != text.size()) bad_timestamp(text);
    }
    return ms;
}

std::int64_t tz_offset_ms(std::string_view tz) {
    if (tz == "UTC" || tz == "utc" || tz == "Z") return 0;
    if (tz == "CET" || tz == "cet") return 1 * kMsPerHour;
    if (tz == "CEST" || tz == "cest") return 2 * kMsPerHour;
    if (tz.size() == 6 && (tz[0] == '+' || tz[0] == '-') && tz[3] == ':') {
        int hh = 0, mm = 0;
        if (parse_fixed_int(tz, 1, 2, hh) && parse_fixed_int(tz, 4, 2, mm) && hh <= 14 &&
            mm <= 59) {
            const std::int64_t off = hh * kMsPerHour + mm * kMsPerMinute;
            return tz[0] == '+' ? off : -off;
        }
    }
    throw ConfigError("unknown timezone \"" + std::string(tz) +
                      "\" (use UTC, CET, CEST or +HH:MM)");
}

} // namespace hbsim
