#include "hbsim/cli.hpp"

#include <charconv>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>

#include "hbsim/analysis.hpp"
#include "hbsim/csv_interop.hpp"
#include "hbsim/errors.hpp"
#include "hbsim/pipeline.hpp"
#include "hbsim/reading.hpp"
#include "hbsim/store.hpp"
#include "hbsim/time_util.hpp"
#include "hbsim/timeseries.hpp"

namespace hbsim {
namespace {

namespace fs = std::filesystem;

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

std::int64_t parse_count_field(std::string_view field, std::string_view what) {
    std::int64_t v = 0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last)
        throw TypeError(std::string(what) + " is not an integer: \"" + std::string(field) + "\"");
    return v;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateOpts {
    std::string config;
    std::uint64_t seed = 1;
    std::string start;
    std::int64_t duration_s = 0;
    std::int64_t sample_period_ms = 0;
    std::int64_t watchdog_period_ms = 0;
    std::int64_t stall_window_ms = 0;
    double edge_drop = 0.0;
    std::string tier;
    double consumer_drop = 0.0;
    std::string out;
};

void cmd_simulate(const SimulateOpts& o, const CLI::App& sub) {
    RunConfig cfg;
    if (!o.config.empty()) cfg = RunConfig::from_json_file(o.config);

    // Flags win over the config file, field by field.
    if (sub.count("--seed")) cfg.seed = o.seed;
    if (sub.count("--start")) cfg.start_ms = parse_iso8601_utc(o.start);
    if (sub.count("--duration-s")) cfg.duration_s = o.duration_s;
    if (sub.count("--sample-period-ms")) cfg.sample_period_ms = o.sample_period_ms;
    if (sub.count("--watchdog-period-ms")) cfg.watchdog_period_ms = o.watchdog_period_ms;
    if (sub.count("--stall-window-ms")) cfg.stall_window_ms = o.stall_window_ms;
    if (sub.count("--edge-drop")) cfg.edge_drop_probability = o.edge_drop;
    if (sub.count("--tier") || sub.count("--consumer-drop")) {
        std::string name = sub.count("--tier") ? o.tier : cfg.tier.name;
        double p = sub.count("--consumer-drop") ? o.consumer_drop
                                                : cfg.tier.consume_drop_probability;
        cfg.tier = ReliabilityTier::make(name, p);
    }
    if (sub.count("--out")) cfg.out_dir = o.out;
    if (cfg.out_dir.empty())
        throw ConfigError("no output directory: pass --out or set out_dir in the config");

    auto t0 = std::chrono::steady_clock::now();
    SimulationResult result = run_simulation(cfg);
    auto wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    write_run_artifacts(cfg.out_dir, cfg, result);

    // Everything on stdout is deterministic for a fixed config; the wall
    // time goes to stderr so output comparisons stay byte-stable.
    std::cout << "run: " << cfg.devices.size() << " device(s) x " << cfg.duration_s
              << " s at " << cfg.sample_period_ms << " ms period, seed " << cfg.seed << "\n";
    if (result.restarts > 0)
        std::cout << "watchdog restarts: " << result.restarts << "\n";
    write_ledger_report(std::cout, result.ledger, cfg.expected_per_device(), cfg.tier);
    std::cout << "artifacts: " << cfg.out_dir << "\n";
    char buf[64];
    std::snprintf(buf, sizeof buf, "wall time: %.2f s\n", wall);
    std::cerr << buf;
}

// ---------------------------------------------------------------------------
// analyze

struct AnalyzeOpts {
    std::string store;
    std::string from;
    std::string to;
    std::string tz = "UTC";
    std::int64_t device = 0;
    std::int64_t bucket_min = 5;
    std::int64_t window_days = 30;
    std::string out;
};

// A bound with a trailing 'Z' is UTC no matter what --tz says; anything
// else is wall time in the --tz zone.
std::int64_t window_bound(const std::string& text, std::int64_t tz_offset) {
    bool zulu = !text.empty() && text.back() == 'Z';
    std::int64_t utc = parse_iso8601_utc(text);
    return zulu ? utc : utc - tz_offset;
}

void cmd_analyze(const AnalyzeOpts& o, const CLI::App& sub) {
    TelemetryStore store = TelemetryStore::load(o.store);

    std::int64_t device = o.device;
    if (!sub.count("--device")) {
        if (store.devices().size() != 1)
            throw ConfigError("store has " + std::to_string(store.devices().size()) +
                              " devices; pick one with --device");
        device = store.devices().front().id;
    }

    std::int64_t offset = tz_offset_ms(o.tz);
    TimeWindow period{window_bound(o.from, offset), window_bound(o.to, offset)};
    if (period.end_ms <= period.start_ms) throw ConfigError("--to must be after --from");
    if (o.bucket_min <= 0) throw ConfigError("--bucket-min must be positive");
    if (o.window_days <= 0) throw ConfigError("--window-days must be positive");

    FluctuationOptions opt;
    opt.median_bucket_ms = o.bucket_min * kMsPerMinute;
    opt.cma_window_ms = o.window_days * kMsPerDay;

    // Fetch the period plus the margins the moving average needs; one extra
    // bucket on each side keeps the boundary medians intact.
    std::int64_t margin = opt.cma_window_ms / 2 + opt.median_bucket_ms;
    auto rows = store.query_range(device, period.start_ms - margin, period.end_ms + margin);

    TimeSeries rh("%RH");
    for (const auto& r : rows) rh.append(r.utc_timestamp_ms, decode_raw(r.humidity_raw));

    FluctuationAnalysis fa = analyze_fluctuations(rh, period, opt);
    write_analysis_report(std::cout, fa);

    if (!o.out.empty()) {
        fs::create_directories(o.out);
        std::ofstream rep(fs::path(o.out) / "analysis.txt", std::ios::binary);
        write_analysis_report(rep, fa);
        std::ofstream chart(fs::path(o.out) / "chart.csv", std::ios::binary);
        write_chart_csv(chart, fa);
        if (!rep || !chart) throw StorageError("cannot write analysis files under " + o.out);
        std::cout << "artifacts: " << o.out << "\n";
    }
}

// ---------------------------------------------------------------------------
// replay-table1

struct ReplayOpts {
    std::string fixture;
};

constexpr std::string_view kFixtureHeader = "Name,Expected,Actual";

void cmd_replay_table1(const ReplayOpts& o) {
    std::ifstream is(o.fixture, std::ios::binary);
    if (!is) throw ConfigError("cannot read fixture " + o.fixture);

    std::string line;
    if (!std::getline(is, line)) throw SchemaMismatch("fixture " + o.fixture + " is empty");
    strip_cr(line);
    if (line != kFixtureHeader)
        throw SchemaMismatch("fixture header must be \"" + std::string(kFixtureHeader) +
                             "\", got \"" + line + "\"");

    struct Row {
        std::string name;
        LossReport loss;
    };
    std::vector<Row> rows;
    std::int64_t total_expected = 0;
    std::int64_t total_actual = 0;
    while (std::getline(is, line)) {
        strip_cr(line);
        if (line.empty()) continue;
        auto c1 = line.find(',');
        auto c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos ||
            line.find(',', c2 + 1) != std::string::npos)
            throw SchemaMismatch("fixture row needs 3 fields: \"" + line + "\"");
        std::string_view view(line);
        std::int64_t expected = parse_count_field(view.substr(c1 + 1, c2 - c1 - 1), "Expected");
        std::int64_t actual = parse_count_field(view.substr(c2 + 1), "Actual");
        rows.push_back({line.substr(0, c1), loss_rate(expected, actual)});
        total_expected += expected;
        total_actual += actual;
    }
    if (rows.empty()) throw SchemaMismatch("fixture " + o.fixture + " has no data rows");
    rows.push_back({"total", loss_rate(total_expected, total_actual)});

    std::size_t name_w = std::string_view("device").size();
    for (const auto& r : rows) name_w = std::max(name_w, r.name.size());

    std::cout << std::left << std::setw(static_cast<int>(name_w)) << "device" << std::right
              << std::setw(12) << "expected" << std::setw(12) << "actual" << std::setw(10)
              << "lost" << std::setw(9) << "loss %" << "\n";
    for (const auto& r : rows) {
        std::cout << std::left << std::setw(static_cast<int>(name_w)) << r.name << std::right
                  << std::setw(12) << r.loss.expected << std::setw(12) << r.loss.actual
                  << std::setw(10) << r.loss.lost << std::setw(9)
                  << format_percent(r.loss.loss_rate_percent) << "\n";
    }
}

// ---------------------------------------------------------------------------
// export / import

struct ExportOpts {
    std::string store;
    std::string out;
};

void cmd_export(const ExportOpts& o) {
    TelemetryStore store = TelemetryStore::load(o.store);
    export_store(store, o.out);
    std::cout << "exported " << store.size() << " record(s), " << store.devices().size()
              << " device(s), " << store.buildings().size() << " building(s) to " << o.out
              << "\n";
}

struct ImportOpts {
    std::string in;
    std::string store;
};

void cmd_import(const ImportOpts& o) {
    TelemetryStore store = import_store(o.in);
    store.save(o.store);
    std::cout << "imported " << store.size() << " record(s), " << store.devices().size()
              << " device(s), " << store.buildings().size() << " building(s) into " << o.store
              << "\n";
}

// ---------------------------------------------------------------------------
// metrics

struct MetricsOpts {
    std::string run;
    bool summary = false;
};

constexpr std::string_view kMetricsHeader =
    "hour_start_iso8601,messages_received,functions_executed";

void cmd_metrics(const MetricsOpts& o) {
    fs::path file = fs::path(o.run) / "metrics.csv";
    std::ifstream is(file, std::ios::binary);
    if (!is) throw ConfigError("cannot read " + file.string());

    std::string line;
    if (!std::getline(is, line)) throw SchemaMismatch(file.string() + " is empty");
    strip_cr(line);
    if (line != kMetricsHeader)
        throw SchemaMismatch("metrics header must be \"" + std::string(kMetricsHeader) +
                             "\", got \"" + line + "\"");
    if (!o.summary) std::cout << line << "\n";

    std::uint64_t hours = 0;
    std::int64_t received = 0;
    std::int64_t executed = 0;
    while (std::getline(is, line)) {
        strip_cr(line);
        if (line.empty()) continue;
        auto c1 = line.find(',');
        auto c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos ||
            line.find(',', c2 + 1) != std::string::npos)
            throw SchemaMismatch("metrics row needs 3 fields: \"" + line + "\"");
        std::string_view view(line);
        received += parse_count_field(view.substr(c1 + 1, c2 - c1 - 1), "messages_received");
        executed += parse_count_field(view.substr(c2 + 1), "functions_executed");
        ++hours;
        if (!o.summary) std::cout << line << "\n";
    }
    if (o.summary)
        std::cout << hours << " hour(s): " << received << " received, " << executed
                  << " consumer executions\n";
}

// ---------------------------------------------------------------------------

void setup_simulate(CLI::App& app) {
    auto opts = std::make_shared<SimulateOpts>();
    auto* sub = app.add_subcommand("simulate", "Run the pipeline and write run artifacts");
    sub->add_option("--config", opts->config, "Run configuration JSON (see README)")
        ->check(CLI::ExistingFile);
    sub->add_option("--seed", opts->seed, "Master seed (default 1)");
    sub->add_option("--start", opts->start, "Virtual start, ISO 8601 UTC");
    sub->add_option("--duration-s", opts->duration_s, "Run length in seconds");
    sub->add_option("--sample-period-ms", opts->sample_period_ms,
                    "Sampling period (default 15000)");
    sub->add_option("--watchdog-period-ms", opts->watchdog_period_ms,
                    "Watchdog tick period (0: every sampling period)");
    sub->add_option("--stall-window-ms", opts->stall_window_ms,
                    "Silence the watchdog tolerates before restarting");
    sub->add_option("--edge-drop", opts->edge_drop, "Edge channel drop probability");
    sub->add_option("--tier", opts->tier, "Consumer tier: shared or sla");
    sub->add_option("--consumer-drop", opts->consumer_drop,
                    "Consumer drop probability (sla caps it at 0.0005)");
    sub->add_option("--out", opts->out, "Output directory for run artifacts");
    sub->callback([opts, sub]() { cmd_simulate(*opts, *sub); });
}

void setup_analyze(CLI::App& app) {
    auto opts = std::make_shared<AnalyzeOpts>();
    auto* sub = app.add_subcommand(
        "analyze", "Humidity-fluctuation analysis over a stored period");
    sub->add_option("--store", opts->store, "Store directory (from simulate or import)")
        ->required();
    sub->add_option("--from", opts->from, "Period start, ISO 8601")->required();
    sub->add_option("--to", opts->to, "Period end (exclusive), ISO 8601")->required();
    sub->add_option("--tz", opts->tz,
                    "Zone for window bounds without a trailing Z: UTC, CET, CEST or +HH:MM");
    sub->add_option("--device", opts->device, "Device id (default: the store's only device)");
    sub->add_option("--bucket-min", opts->bucket_min, "Median bucket in minutes (default 5)");
    sub->add_option("--window-days", opts->window_days,
                    "Moving-average window in days (default 30)");
    sub->add_option("--out", opts->out, "Also write analysis.txt and chart.csv here");
    sub->callback([opts, sub]() { cmd_analyze(*opts, *sub); });
}

void setup_replay_table1(CLI::App& app) {
    auto opts = std::make_shared<ReplayOpts>();
    auto* sub = app.add_subcommand(
        "replay-table1", "Loss table from a Name,Expected,Actual fixture");
    sub->add_option("--fixture", opts->fixture, "CSV fixture with per-device counts")
        ->required();
    sub->callback([opts]() { cmd_replay_table1(*opts); });
}

void setup_export(CLI::App& app) {
    auto opts = std::make_shared<ExportOpts>();
    auto* sub = app.add_subcommand("export", "Write a store as the three sharing CSVs");
    sub->add_option("--store", opts->store, "Store directory")->required();
    sub->add_option("--out", opts->out, "Target directory for the CSV bundle")->required();
    sub->callback([opts]() { cmd_export(*opts); });
}

void setup_import(CLI::App& app) {
    auto opts = std::make_shared<ImportOpts>();
    auto* sub = app.add_subcommand("import", "Rebuild a store from a sharing-CSV bundle");
    sub->add_option("--in", opts->in, "Directory holding the three CSVs")->required();
    sub->add_option("--store", opts->store, "Store directory to create")->required();
    sub->callback([opts]() { cmd_import(*opts); });
}

void setup_metrics(CLI::App& app) {
    auto opts = std::make_shared<MetricsOpts>();
    auto* sub = app.add_subcommand("metrics", "Print a run's hourly hub metrics");
    sub->add_option("--run", opts->run, "Run artifact directory (from simulate)")->required();
    sub->add_flag("--summary", opts->summary, "One-line totals instead of the full table");
    sub->callback([opts]() { cmd_metrics(*opts); });
}

// run_cli maps these to exit 1; everything else that goes wrong is a
// runtime failure (exit 2).
bool validation_failure(const Error& e) {
    return dynamic_cast<const ConfigError*>(&e) != nullptr ||
           dynamic_cast<const SchemaMismatch*>(&e) != nullptr ||
           dynamic_cast<const TypeError*>(&e) != nullptr ||
           dynamic_cast<const PartitionInconsistent*>(&e) != nullptr ||
           dynamic_cast<const UnknownDevice*>(&e) != nullptr;
}

} // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"building telemetry pipeline simulator and humidity-fluctuation analyzer"};
    app.require_subcommand(1);
    setup_simulate(app);
    setup_analyze(app);
    setup_replay_table1(app);
    setup_export(app);
    setup_import(app);
    setup_metrics(app);

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("hbsim");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e); // prints the requested help; exit 0
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e); // prints the parser's message to stderr
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return validation_failure(e) ? 1 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

} // namespace hbsim
