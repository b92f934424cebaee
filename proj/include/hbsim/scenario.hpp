#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "hbsim/reading.hpp"
#include "hbsim/rng.hpp"

namespace hbsim {

enum class ScenarioKind { Constant, Sinusoid, TraceReplay };

/// Generative model for one continuous parameter: a baseline, a sinusoid
/// amplitude (used by the sinusoid kind, zero otherwise) and gaussian noise.
struct ParamSpec {
    double baseline = 0.0;
    double amplitude = 0.0;
    double noise_stddev = 0.0;
};

// Default noise widths: half the sensor's stated accuracy where one exists
// (0.5 degC / 2% RH / 200 ppm CO2); dust and air quality sensors state no
// accuracy, so their defaults are noiseless.
inline constexpr double kDefaultRhNoisePct = 1.0;
inline constexpr double kDefaultTempNoiseC = 0.25;
inline constexpr double kDefaultCo2NoisePpm = 100.0;
inline constexpr double kDefaultLpoNoise = 0.0;
inline constexpr double kDefaultAqNoiseV = 0.0;

/// Everything needed to generate a reading stream: one ParamSpec per
/// continuous parameter, a Poisson rate for vibration edges, the shared
/// sinusoid period, and the RNG seed. Identical (scenario, seed) pairs give
/// bit-identical streams. For trace replay, trace_path points at a sensing
/// CSV and the generative fields are ignored.
struct ClimateScenario {
    ScenarioKind kind = ScenarioKind::Constant;
    ParamSpec humidity_pct{25.7, 0.0, kDefaultRhNoisePct};
    ParamSpec temperature_c{21.0, 0.0, kDefaultTempNoiseC};
    ParamSpec co2_ppm{600.0, 0.0, kDefaultCo2NoisePpm};
    ParamSpec dust_lpo{0.05, 0.0, kDefaultLpoNoise};
    ParamSpec aq_volts{1.5, 0.0, kDefaultAqNoiseV};
    double vibration_rate = 0.0; // Poisson mean per sample window
    double period_s = 0.0;       // sinusoid period, shared by all parameters
    std::uint64_t seed = 1;
    std::string trace_path;
    std::int64_t trace_device_id = 0; // 0 = the only device in the trace

    /// Parses the documented JSON shape (kind, seed, period_s, per-parameter
    /// baseline/amplitude/noise_stddev, vibration_rate, trace). Unknown kind
    /// or inconsistent fields throw ConfigError.
    static ClimateScenario from_json_text(std::string_view text);
    /// from_json_text plus resolution of a relative trace path against the
    /// file's directory.
    static ClimateScenario from_json_file(const std::filesystem::path& file);
};

/// Stateless sampler over a scenario (the trace index is immutable after
/// construction), so one instance can serve many RNG streams in parallel.
///
/// Noise draw order per sample is fixed — humidity, temperature, CO2, dust
/// LPO, air-quality volts, vibration — and every gaussian is drawn even at
/// stddev 0, so adding noise to one parameter never shifts another's stream.
class ScenarioSampler {
  public:
    explicit ScenarioSampler(ClimateScenario scenario);

    /// One reading at virtual time t_ms. Generated values are clamped into
    /// the SensorSuite envelope after noise. Trace replay with no row at
    /// exactly t_ms throws MissingTraceData (and leaves rng untouched);
    /// device/collector ids come from the trace row there and are zero for
    /// generated kinds (the pipeline stamps them).
    Reading sample(std::int64_t t_ms, Rng& rng) const;

    const ClimateScenario& scenario() const { return scenario_; }

  private:
    double base_value(const ParamSpec& p, std::int64_t t_ms) const;

    ClimateScenario scenario_;
    std::map<std::int64_t, Reading> trace_; // TraceReplay only
};

} // namespace hbsim
