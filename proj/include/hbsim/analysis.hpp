#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "hbsim/time_util.hpp"
#include "hbsim/timeseries.hpp"

namespace hbsim {

/// Half-open analysis window [start_ms, end_ms).
struct TimeWindow {
    std::int64_t start_ms = 0;
    std::int64_t end_ms = 0;

    bool contains(std::int64_t t) const { return t >= start_ms && t < end_ms; }
};

struct LossReport {
    std::int64_t expected = 0;
    std::int64_t actual = 0;
    std::int64_t lost = 0;
    double loss_rate_percent = 0.0; // full precision; round only for display
};

/// Nearest-rank 7th/93rd percentiles of the fluctuation set, plus the band
/// they induce. When both percentiles sit strictly inside ±10 %RH the band
/// relaxes to a symmetric ±10; otherwise the bounds are the percentiles
/// themselves.
struct PercentileBand {
    double p7 = 0.0;
    double p93 = 0.0;
    bool relaxed = false;
    /// 10 when relaxed; (p93 − p7)/2 otherwise (descriptive — the exact
    /// bounds always come from lower_offset/upper_offset).
    double band_halfwidth = 0.0;

    double lower_offset() const { return relaxed ? -10.0 : p7; }
    double upper_offset() const { return relaxed ? 10.0 : p93; }
};

struct BandPoint {
    std::int64_t utc_ms = 0;
    double lower = 0.0;
    double upper = 0.0;
};

/// Full output of the humidity-fluctuation procedure over one window.
struct FluctuationAnalysis {
    TimeWindow period;
    double mean = 0.0;      // arithmetic mean of the analyzed (median) series
    TimeSeries median;      // 5-min median series restricted to the period
    TimeSeries cma;         // 30-day centered moving average, one per median point
    TimeSeries fluctuations; // median − cma
    PercentileBand percentiles;
    std::vector<BandPoint> band;        // cma + offsets, per analyzed point
    std::vector<TimePoint> out_of_band; // analyzed points strictly outside
};

struct FluctuationOptions {
    std::int64_t median_bucket_ms = 5 * kMsPerMinute;
    std::int64_t cma_window_ms = 30 * kMsPerDay;
};

/// duration_s / period_s. Throws ConfigError for period_s <= 0 and
/// MisalignedWindow when the duration is not a whole number of periods.
std::int64_t expected_samples(std::int64_t duration_s, std::int64_t period_s);

/// Loss accounting over an interval: lost = expected − actual,
/// rate = lost/expected × 100. Throws UndefinedRate for expected == 0 and
/// OvercountDetected for actual > expected (duplicate delivery signal).
LossReport loss_rate(std::int64_t expected, std::int64_t actual);

/// Points of s inside the window, unchanged.
TimeSeries slice(const TimeSeries& s, TimeWindow window);

/// Median per aligned bucket (bucket start = floor(t / bucket) × bucket);
/// even-sized buckets take the mean of the two middle values. Empty buckets
/// produce no point. Output timestamps are bucket starts.
TimeSeries median_resample(const TimeSeries& s, std::int64_t bucket_ms = 5 * kMsPerMinute);

/// Thins s to at most `target` points for display. At or below target the
/// series passes through unchanged; above it, point k of the output is
/// source point floor(k·n/target), which keeps exact spacing for exact
/// divisors (5760 → 720 is every 8th point, i.e. 2-minute spacing).
TimeSeries uniform_resample(const TimeSeries& s, std::size_t target = 720);

/// Σx/n. Throws EmptySeries on an empty series.
double arithmetic_mean(const TimeSeries& s);

/// For each point of s inside `period`, the mean of every point within
/// ±window/2 (inclusive). The series must cover the margins on both sides of
/// the period's analyzed points — otherwise InsufficientContext reports the
/// exact missing span. No silent truncation at the edges.
TimeSeries centered_moving_average(const TimeSeries& s, TimeWindow period,
                                   std::int64_t window_ms = 30 * kMsPerDay);

/// Pointwise s − cma. Every timestamp of s must appear in cma
/// (AlignmentError otherwise).
TimeSeries fluctuations(const TimeSeries& s, const TimeSeries& cma);

/// Nearest-rank percentiles (1-based index ⌈p·n⌉) and the relaxation rule.
/// Throws EmptySeries on an empty set.
PercentileBand percentile_band(const std::vector<double>& fluctuation_values);

/// Points of s strictly outside [cma + lower_offset, cma + upper_offset].
std::vector<TimePoint> flag_out_of_band(const TimeSeries& s, const TimeSeries& cma,
                                        const PercentileBand& band);

/// The whole procedure over a raw RH series: 5-min medians, mean, 30-day
/// CMA over the period, fluctuations, percentile band (with relaxation),
/// per-point band and out-of-band flags.
FluctuationAnalysis analyze_fluctuations(const TimeSeries& rh_series, TimeWindow period,
                                         const FluctuationOptions& opt = {});

/// Chart-ready CSV: utc_ms,value,ma,lower,upper,flagged (flagged is 0/1).
void write_chart_csv(std::ostream& os, const FluctuationAnalysis& fa);

/// Human-readable summary (mean, percentiles at 1 dp, band, flag count).
void write_analysis_report(std::ostream& os, const FluctuationAnalysis& fa);

/// "1.96" — percent value at 2 decimal places, the display convention for
/// loss rates.
std::string format_percent(double percent);

} // namespace hbsim
