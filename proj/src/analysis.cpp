#include "hbsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "hbsim/errors.hpp"

namespace hbsim {

std::int64_t expected_samples(std::int64_t duration_s, std::int64_t period_s) {
    if (period_s <= 0) throw ConfigError("sampling period must be positive");
    if (duration_s < 0) throw ConfigError("duration must be non-negative");
    if (duration_s % period_s != 0) {
        throw MisalignedWindow("duration " + std::to_string(duration_s) +
                               " s is not a whole number of " + std::to_string(period_s) +
                               " s periods");
    }
    return duration_s / period_s;
}

LossReport loss_rate(std::int64_t expected, std::int64_t actual) {
    if (expected == 0) throw UndefinedRate("loss rate undefined for zero expected samples");
    if (expected < 0 || actual < 0) throw ConfigError("sample counts must be non-negative");
    if (actual > expected) {
        throw OvercountDetected("actual " + std::to_string(actual) + " exceeds expected " +
                                std::to_string(expected) + " (duplicate delivery?)");
    }
    LossReport r;
    r.expected = expected;
    r.actual = actual;
    r.lost = expected - actual;
    r.loss_rate_percent =
        static_cast<double>(r.lost) / static_cast<double>(expected) * 100.0;
    return r;
}

TimeSeries slice(const TimeSeries& s, TimeWindow window) {
    TimeSeries out(s.unit());
    for (const TimePoint& p : s.points()) {
        if (window.contains(p.utc_ms)) out.append(p.utc_ms, p.value);
    }
    return out;
}

namespace {

std::int64_t bucket_start(std::int64_t t, std::int64_t bucket_ms) {
    std::int64_t b = t / bucket_ms;
    if (t % bucket_ms < 0) --b;
    return b * bucket_ms;
}

double median_of(std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    if (n % 2 == 1) return v[n / 2];
    return (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

} // namespace

TimeSeries median_resample(const TimeSeries& s, std::int64_t bucket_ms) {
    if (bucket_ms <= 0) throw ConfigError("median bucket must be positive");
    TimeSeries out(s.unit());
    std::vector<double> bucket;
    std::int64_t current = 0;
    bool open = false;
    for (const TimePoint& p : s.points()) {
        const std::int64_t start = bucket_start(p.utc_ms, bucket_ms);
        if (open && start != current) {
            out.append(current, median_of(bucket));
            bucket.clear();
        }
        current = start;
        open = true;
        bucket.push_back(p.value);
    }
    if (open) out.append(current, median_of(bucket));
    return out;
}

TimeSeries uniform_resample(const TimeSeries& s, std::size_t target) {
    if (target == 0) throw ConfigError("resample target must be positive");
    const std::size_t n = s.size();
    if (n <= target) return s;
    TimeSeries out(s.unit());
    for (std::size_t k = 0; k < target; ++k) {
        const TimePoint& p = s[k * n / target];
        out.append(p.utc_ms, p.value);
    }
    return out;
}

double arithmetic_mean(const TimeSeries& s) {
    if (s.empty()) throw EmptySeries("arithmetic mean of an empty series");
    double sum = 0.0;
    for (const TimePoint& p : s.points()) sum += p.value;
    return sum / static_cast<double>(s.size());
}

TimeSeries centered_moving_average(const TimeSeries& s, TimeWindow period,
                                   std::int64_t window_ms) {
    if (s.empty()) throw EmptySeries("moving average of an empty series");
    if (window_ms <= 0) throw ConfigError("moving-average window must be positive");
    const std::int64_t half = window_ms / 2;

    const auto& pts = s.points();
    const auto at_or_after = [&pts](std::int64_t t) {
        return std::lower_bound(pts.begin(), pts.end(), t,
                                [](const TimePoint& p, std::int64_t v) { return p.utc_ms < v; });
    };

    TimeSeries out(s.unit());
    const auto first_in = at_or_after(period.start_ms);
    if (first_in == pts.end() || first_in->utc_ms >= period.end_ms) return out;
    auto last_in = at_or_after(period.end_ms);
    --last_in; // nonempty by the check above

    // Hard margin requirement: every analyzed point needs the full ±half
    // context present in the series. Report exactly what is missing.
    if (s.front_ms() > first_in->utc_ms - half) {
        const std::int64_t missing = s.front_ms() - (first_in->utc_ms - half);
        throw InsufficientContext(
            "series must start at or before " + format_iso8601_utc(first_in->utc_ms - half) +
            " but starts at " + format_iso8601_utc(s.front_ms()) + " (missing " +
            std::to_string(missing) + " ms of leading context)");
    }
    if (s.back_ms() < last_in->utc_ms + half) {
        const std::int64_t missing = (last_in->utc_ms + half) - s.back_ms();
        throw InsufficientContext(
            "series must end at or after " + format_iso8601_utc(last_in->utc_ms + half) +
            " but ends at " + format_iso8601_utc(s.back_ms()) + " (missing " +
            std::to_string(missing) + " ms of trailing context)");
    }

    std::vector<double> prefix(pts.size() + 1, 0.0);
    for (std::size_t i = 0; i < pts.size(); ++i) prefix[i + 1] = prefix[i] + pts[i].value;

    for (auto it = first_in; it <= last_in; ++it) {
        const auto lo = at_or_after(it->utc_ms - half);
        const auto hi = std::upper_bound(
            pts.begin(), pts.end(), it->utc_ms + half,
            [](std::int64_t v, const TimePoint& p) { return v < p.utc_ms; });
        const auto i0 = static_cast<std::size_t>(lo - pts.begin());
        const auto i1 = static_cast<std::size_t>(hi - pts.begin());
        out.append(it->utc_ms, (prefix[i1] - prefix[i0]) / static_cast<double>(i1 - i0));
    }
    return out;
}

TimeSeries fluctuations(const TimeSeries& s, const TimeSeries& cma) {
    TimeSeries out(s.unit());
    const auto& ref = cma.points();
    std::size_t j = 0;
    for (const TimePoint& p : s.points()) {
        while (j < ref.size() && ref[j].utc_ms < p.utc_ms) ++j;
        if (j == ref.size() || ref[j].utc_ms != p.utc_ms) {
            throw AlignmentError("moving average has no value at t=" +
                                 std::to_string(p.utc_ms));
        }
        out.append(p.utc_ms, p.value - ref[j].value);
    }
    return out;
}

PercentileBand percentile_band(const std::vector<double>& fluctuation_values) {
    if (fluctuation_values.empty()) {
        throw EmptySeries("percentiles of an empty fluctuation set");
    }
    std::vector<double> sorted = fluctuation_values;
    std::sort(sorted.begin(), sorted.end());
    const std::int64_t n = static_cast<std::int64_t>(sorted.size());
    // nearest-rank ⌈p·n⌉ in exact integer arithmetic: 0.07 and 0.93 are not
    // representable in binary, so ceil(0.07 * n) can come out one too high
    const std::int64_t rank7 = (7 * n + 99) / 100;
    const std::int64_t rank93 = (93 * n + 99) / 100;
    PercentileBand band;
    band.p7 = sorted[static_cast<std::size_t>(rank7 - 1)];
    band.p93 = sorted[static_cast<std::size_t>(rank93 - 1)];
    band.relaxed = std::abs(band.p7) < 10.0 && std::abs(band.p93) < 10.0;
    band.band_halfwidth = band.relaxed ? 10.0 : (band.p93 - band.p7) / 2.0;
    return band;
}

std::vector<TimePoint> flag_out_of_band(const TimeSeries& s, const TimeSeries& cma,
                                        const PercentileBand& band) {
    std::vector<TimePoint> out;
    const auto& ref = cma.points();
    std::size_t j = 0;
    for (const TimePoint& p : s.points()) {
        while (j < ref.size() && ref[j].utc_ms < p.utc_ms) ++j;
        if (j == ref.size() || ref[j].utc_ms != p.utc_ms) {
            throw AlignmentError("band has no value at t=" + std::to_string(p.utc_ms));
        }
        const double lower = ref[j].value + band.lower_offset();
        const double upper = ref[j].value + band.upper_offset();
        if (p.value < lower || p.value > upper) out.push_back(p);
    }
    return out;
}

FluctuationAnalysis analyze_fluctuations(const TimeSeries& rh_series, TimeWindow period,
                                         const FluctuationOptions& opt) {
    if (period.end_ms <= period.start_ms) {
        throw ConfigError("analysis window must satisfy start < end");
    }
    const TimeSeries medians = median_resample(rh_series, opt.median_bucket_ms);

    FluctuationAnalysis fa;
    fa.period = period;
    fa.cma = centered_moving_average(medians, period, opt.cma_window_ms);
    fa.median = slice(medians, period);
    if (fa.median.empty()) throw EmptySeries("no readings inside the analysis window");
    fa.mean = arithmetic_mean(fa.median);
    fa.fluctuations = fluctuations(fa.median, fa.cma);

    std::vector<double> values;
    values.reserve(fa.fluctuations.size());
    for (const TimePoint& p : fa.fluctuations.points()) values.push_back(p.value);
    fa.percentiles = percentile_band(values);

    fa.band.reserve(fa.cma.size());
    for (const TimePoint& p : fa.cma.points()) {
        fa.band.push_back({p.utc_ms, p.value + fa.percentiles.lower_offset(),
                           p.value + fa.percentiles.upper_offset()});
    }
    fa.out_of_band = flag_out_of_band(fa.median, fa.cma, fa.percentiles);
    return fa;
}

void write_chart_csv(std::ostream& os, const FluctuationAnalysis& fa) {
    os << "utc_ms,value,ma,lower,upper,flagged\n";
    std::size_t flag_idx = 0;
    char buf[160];
    for (std::size_t i = 0; i < fa.median.size(); ++i) {
        const TimePoint& p = fa.median[i];
        const bool flagged = flag_idx < fa.out_of_band.size() &&
                             fa.out_of_band[flag_idx].utc_ms == p.utc_ms;
        if (flagged) ++flag_idx;
        std::snprintf(buf, sizeof(buf), "%lld,%.10g,%.10g,%.10g,%.10g,%d\n",
                      static_cast<long long>(p.utc_ms), p.value, fa.cma[i].value,
                      fa.band[i].lower, fa.band[i].upper, flagged ? 1 : 0);
        os << buf;
    }
}

void write_analysis_report(std::ostream& os, const FluctuationAnalysis& fa) {
    char buf[256];
    os << "humidity fluctuation analysis\n";
    os << "  window: " << format_iso8601_utc(fa.period.start_ms) << " .. "
       << format_iso8601_utc(fa.period.end_ms) << " (half-open)\n";
    os << "  analyzed points: " << fa.median.size() << "\n";
    std::snprintf(buf, sizeof(buf), "  mean RH: %.1f %%\n", fa.mean);
    os << buf;
    std::snprintf(buf, sizeof(buf), "  fluctuation percentiles: 7th %.1f %%, 93rd %.1f %%\n",
                  fa.percentiles.p7, fa.percentiles.p93);
    os << buf;
    if (fa.percentiles.relaxed) {
        os << "  band: relaxed to +/-10 % around the seasonal average (both percentiles "
              "inside 10 %)\n";
    } else {
        std::snprintf(buf, sizeof(buf),
                      "  band: percentile bounds %.1f %% / %.1f %% around the seasonal "
                      "average (no relaxation)\n",
                      fa.percentiles.p7, fa.percentiles.p93);
        os << buf;
    }
    os << "  out-of-band points: " << fa.out_of_band.size() << "\n";
    for (const TimePoint& p : fa.out_of_band) {
        std::snprintf(buf, sizeof(buf), "    %s  %.2f %%\n",
                      format_iso8601_utc(p.utc_ms).c_str(), p.value);
        os << buf;
    }
}

std::string format_percent(double percent) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", percent);
    return buf;
}

} // namespace hbsim
