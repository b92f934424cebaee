#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "hbsim/hub.hpp"
#include "hbsim/scenario.hpp"
#include "hbsim/store.hpp"
#include "hbsim/time_util.hpp"

namespace hbsim {

/// 2021-04-05T00:00:00Z — the default virtual start of a run.
inline constexpr std::int64_t kDefaultStartMs = 1'617'580'800'000;

struct DeviceConfig {
    std::int64_t id = 0;
    std::string name;
    std::int64_t building_id = 0;
    std::int64_t collector_id = 1;
    double edge_drop_probability = -1.0; // < 0: use the run-level default
};

/// One structured config file drives a run; every scalar here can be
/// overridden by a CLI flag (flags win). See README for the JSON shape.
struct RunConfig {
    std::uint64_t seed = 1;
    std::int64_t start_ms = kDefaultStartMs;
    std::int64_t duration_s = kMsPerDay / 1000; // one day
    std::int64_t sample_period_ms = kDefaultSamplePeriodMs;
    std::int64_t watchdog_period_ms = 0; // 0: every sampling period
    std::int64_t stall_window_ms = 5 * kMsPerMinute;
    double edge_drop_probability = 0.0;
    ReliabilityTier tier = ReliabilityTier::shared(0.0);
    ClimateScenario scenario;
    std::vector<Building> buildings{{1, "Building 1"}};
    std::vector<DeviceConfig> devices{{1, "box-1", 1, 1, -1.0}};
    std::string out_dir;

    /// base_dir resolves relative paths found inside the config (scenario
    /// file, trace file, out_dir).
    static RunConfig from_json_text(std::string_view text,
                                    const std::filesystem::path& base_dir);
    static RunConfig from_json_file(const std::filesystem::path& file);

    /// Throws ConfigError on any inconsistency: empty topology, duplicate
    /// ids, dangling building references, probabilities outside [0, 1], or a
    /// duration that is not a whole number of sampling periods.
    void validate() const;

    std::int64_t end_ms() const { return start_ms + duration_s * kMsPerSecond; }
    std::int64_t expected_per_device() const {
        return duration_s * kMsPerSecond / sample_period_ms;
    }
};

struct SimulationResult {
    TelemetryStore store;
    LossLedger ledger;
    std::vector<HourlyMetrics> metrics;
    std::uint64_t restarts = 0;
    std::uint64_t events_executed = 0;
};

/// Runs the whole pipeline on the virtual clock: per-device gateways sample
/// the scenario, send sequenced telemetry through their lossy channels, the
/// hub ingests the wire payloads (encode → parse, as over a real link),
/// the consumer stage stores survivors, and the ledger is verified before
/// returning. Deterministic for a fixed config (per-device RNG streams are
/// derived from the master seed and device ids, so adding a device never
/// reshuffles the others).
SimulationResult run_simulation(const RunConfig& cfg);

/// Writers for the run artifacts. The text report carries per-device and
/// total loss rates plus the per-hop decomposition; with an sla tier it adds
/// the reconciliation between the contractual consumer bound and the
/// edge-dominated end-to-end rate.
void write_ledger_report(std::ostream& os, const LossLedger& ledger,
                         std::int64_t expected_per_device, const ReliabilityTier& tier);
void write_ledger_csv(std::ostream& os, const LossLedger& ledger,
                      std::int64_t expected_per_device);

/// Writes store/, ledger.txt, ledger.csv, metrics.csv and run.json under
/// out_dir (created if missing). Everything written is deterministic for a
/// fixed (config, seed).
void write_run_artifacts(const std::filesystem::path& out_dir, const RunConfig& cfg,
                         const SimulationResult& result);

} // namespace hbsim
