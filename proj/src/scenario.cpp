#include "hbsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

#include "hbsim/csv_interop.hpp"
#include "hbsim/errors.hpp"

namespace hbsim {

namespace {

ScenarioKind parse_kind(const std::string& s) {
    if (s == "constant") return ScenarioKind::Constant;
    if (s == "sinusoid") return ScenarioKind::Sinusoid;
    if (s == "trace-replay") return ScenarioKind::TraceReplay;
    throw ConfigError("unknown scenario kind \"" + s +
                      "\" (expected constant, sinusoid or trace-replay)");
}

void read_param(const nlohmann::json& j, const char* key, ParamSpec& p) {
    if (!j.contains(key)) return;
    const nlohmann::json& pj = j.at(key);
    if (!pj.is_object()) throw ConfigError(std::string("scenario key \"") + key +
                                           "\" must be an object");
    p.baseline = pj.value("baseline", p.baseline);
    p.amplitude = pj.value("amplitude", p.amplitude);
    p.noise_stddev = pj.value("noise_stddev", p.noise_stddev);
    if (p.noise_stddev < 0.0) {
        throw ConfigError(std::string("scenario key \"") + key + "\": negative noise_stddev");
    }
}

ClimateScenario scenario_from_json(const nlohmann::json& j) {
    ClimateScenario sc;
    sc.kind = parse_kind(j.value("kind", std::string("constant")));
    sc.seed = j.value("seed", sc.seed);
    sc.period_s = j.value("period_s", sc.period_s);
    read_param(j, "humidity", sc.humidity_pct);
    read_param(j, "temperature", sc.temperature_c);
    read_param(j, "co2", sc.co2_ppm);
    read_param(j, "dust_lpo", sc.dust_lpo);
    read_param(j, "aq_volts", sc.aq_volts);
    sc.vibration_rate = j.value("vibration_rate", sc.vibration_rate);
    if (sc.vibration_rate < 0.0) throw ConfigError("negative vibration_rate");
    if (j.contains("trace")) {
        const nlohmann::json& tj = j.at("trace");
        sc.trace_path = tj.value("path", std::string());
        sc.trace_device_id = tj.value("device_id", std::int64_t{0});
    }
    if (sc.kind == ScenarioKind::Sinusoid && sc.period_s <= 0.0) {
        throw ConfigError("sinusoid scenario requires period_s > 0");
    }
    if (sc.kind == ScenarioKind::TraceReplay && sc.trace_path.empty()) {
        throw ConfigError("trace-replay scenario requires trace.path");
    }
    return sc;
}

} // namespace

ClimateScenario ClimateScenario::from_json_text(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed scenario JSON: ") + e.what());
    }
    return scenario_from_json(j);
}

ClimateScenario ClimateScenario::from_json_file(const std::filesystem::path& file) {
    std::ifstream is(file);
    if (!is) throw ConfigError("cannot read scenario file " + file.string());
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("malformed scenario JSON in " + file.string() + ": " + e.what());
    }
    ClimateScenario sc = scenario_from_json(j);
    if (!sc.trace_path.empty() && std::filesystem::path(sc.trace_path).is_relative()) {
        sc.trace_path = (file.parent_path() / sc.trace_path).string();
    }
    return sc;
}

ScenarioSampler::ScenarioSampler(ClimateScenario scenario) : scenario_(std::move(scenario)) {
    if (scenario_.kind != ScenarioKind::TraceReplay) return;

    const std::vector<SensingRecord> rows = read_sensing_csv(scenario_.trace_path);
    std::int64_t want = scenario_.trace_device_id;
    if (want == 0) {
        std::set<std::int64_t> devices;
        for (const SensingRecord& r : rows) devices.insert(r.device_id);
        if (devices.size() > 1) {
            throw ConfigError("trace " + scenario_.trace_path + " holds " +
                              std::to_string(devices.size()) +
                              " devices; set trace.device_id to pick one");
        }
        if (!devices.empty()) want = *devices.begin();
    }
    for (const SensingRecord& r : rows) {
        if (r.device_id != want) continue;
        Reading rd;
        rd.device_id = r.device_id;
        rd.collector_id = r.collector_id;
        rd.utc_timestamp_ms = r.utc_timestamp_ms;
        rd.humidity_raw = r.humidity_raw;
        rd.temperature_raw = r.temperature_raw;
        rd.co2_ppm = r.co2_ppm;
        rd.dust_pcs_per_l = r.dust_pcs_per_l;
        rd.air_quality_code = r.air_quality_code;
        rd.vibration_count = r.vibration_count;
        trace_[r.utc_timestamp_ms] = rd;
    }
}

double ScenarioSampler::base_value(const ParamSpec& p, std::int64_t t_ms) const {
    if (scenario_.kind != ScenarioKind::Sinusoid || p.amplitude == 0.0) return p.baseline;
    const double t_s = static_cast<double>(t_ms) / 1000.0;
    return p.baseline + p.amplitude * std::sin(2.0 * M_PI * t_s / scenario_.period_s);
}

Reading ScenarioSampler::sample(std::int64_t t_ms, Rng& rng) const {
    if (scenario_.kind == ScenarioKind::TraceReplay) {
        const auto it = trace_.find(t_ms);
        if (it == trace_.end()) {
            throw MissingTraceData("trace has no reading at t=" + std::to_string(t_ms));
        }
        return it->second;
    }

    // Fixed draw order; see class comment.
    const double rh = rng.gaussian(base_value(scenario_.humidity_pct, t_ms),
                                   scenario_.humidity_pct.noise_stddev);
    const double temp = rng.gaussian(base_value(scenario_.temperature_c, t_ms),
                                     scenario_.temperature_c.noise_stddev);
    const double co2 = rng.gaussian(base_value(scenario_.co2_ppm, t_ms),
                                    scenario_.co2_ppm.noise_stddev);
    const double lpo = rng.gaussian(base_value(scenario_.dust_lpo, t_ms),
                                    scenario_.dust_lpo.noise_stddev);
    const double volts = rng.gaussian(base_value(scenario_.aq_volts, t_ms),
                                      scenario_.aq_volts.noise_stddev);
    const std::uint64_t vib = rng.poisson(scenario_.vibration_rate);

    Reading r;
    r.utc_timestamp_ms = t_ms;
    r.humidity_raw = encode_raw(std::clamp(rh, SensorSuite::kRhMinPct, SensorSuite::kRhMaxPct));
    r.temperature_raw =
        encode_raw(std::clamp(temp, SensorSuite::kTempMinC, SensorSuite::kTempMaxC));
    r.co2_ppm = round_half_up(std::clamp(co2, static_cast<double>(SensorSuite::kCo2MinPpm),
                                         static_cast<double>(SensorSuite::kCo2MaxPpm)));
    r.dust_pcs_per_l = dust_from_lpo(std::clamp(lpo, 0.0, 1.0));
    r.air_quality_code = aq_voltage_to_code(std::clamp(volts, 0.0, 5.0));
    r.vibration_count = static_cast<std::int64_t>(vib);
    return r;
}

} // namespace hbsim
