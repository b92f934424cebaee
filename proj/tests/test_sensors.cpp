#include <doctest.h>

#include <cmath>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include "hbsim/errors.hpp"
#include "hbsim/reading.hpp"
#include "hbsim/rng.hpp"
#include "hbsim/scenario.hpp"

using namespace hbsim;

TEST_CASE("uniform01 matches the documented engine mapping") {
    // Independent oracle: step a raw mt19937_64 (bit-exact per the standard)
    // and apply the 53-bit mapping by hand.
    Rng rng(42);
    std::mt19937_64 engine(42);
    for (int i = 0; i < 1000; ++i) {
        const double expect = static_cast<double>(engine() >> 11) * 0x1.0p-53;
        CHECK(rng.uniform01() == expect);
    }
}

TEST_CASE("uniform01 stays in [0, 1)") {
    Rng rng(7);
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.uniform01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("equal seeds give identical streams, different seeds diverge") {
    Rng a(123), b(123), c(124);
    bool all_equal = true;
    bool any_diff = false;
    for (int i = 0; i < 100; ++i) {
        const double va = a.uniform01();
        all_equal = all_equal && (va == b.uniform01());
        any_diff = any_diff || (va != c.uniform01());
    }
    CHECK(all_equal);
    CHECK(any_diff);
}

TEST_CASE("gaussian consumes exactly two engine steps, even at stddev zero") {
    // After one gaussian draw, rng must sit exactly two steps into the
    // stream: its next uniform01 equals the third value of a fresh stream.
    for (double stddev : {0.0, 1.0}) {
        Rng rng(99);
        Rng fresh(99);
        const double g = rng.gaussian(5.0, stddev);
        if (stddev == 0.0) CHECK(g == 5.0);
        fresh.uniform01();
        fresh.uniform01();
        CHECK(rng.uniform01() == fresh.uniform01());
    }
}

TEST_CASE("gaussian sample moments") {
    Rng rng(2024);
    const int n = 100000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = rng.gaussian(10.0, 2.0);
        sum += x;
        sumsq += x * x;
    }
    const double mean = sum / n;
    const double var = sumsq / n - mean * mean;
    // Standard error of the mean is 2/sqrt(n) ~ 0.0063; allow 5 sigma.
    CHECK(std::abs(mean - 10.0) < 0.032);
    CHECK(std::abs(std::sqrt(var) - 2.0) < 0.05);
}

TEST_CASE("poisson at rate zero returns zero but still advances the engine") {
    Rng rng(5);
    Rng fresh(5);
    CHECK(rng.poisson(0.0) == 0);
    fresh.uniform01(); // the one draw the rate-0 path consumes
    CHECK(rng.uniform01() == fresh.uniform01());
}

TEST_CASE("poisson sample mean near the rate") {
    Rng rng(31);
    const int n = 100000;
    std::uint64_t total = 0;
    for (int i = 0; i < n; ++i) total += rng.poisson(3.0);
    const double mean = static_cast<double>(total) / n;
    // SE = sqrt(3/n) ~ 0.0055; allow 5 sigma.
    CHECK(std::abs(mean - 3.0) < 0.028);
}

TEST_CASE("bernoulli endpoints and frequency") {
    Rng rng(8);
    for (int i = 0; i < 1000; ++i) {
        CHECK_FALSE(rng.bernoulli(0.0));
        CHECK(rng.bernoulli(1.0));
    }
    const int n = 100000;
    int hits = 0;
    for (int i = 0; i < n; ++i) hits += rng.bernoulli(0.3) ? 1 : 0;
    // Binomial SE = sqrt(0.3*0.7/n) ~ 0.00145; allow 5 sigma.
    CHECK(std::abs(hits / static_cast<double>(n) - 0.3) < 0.0073);
}

TEST_CASE("derive_stream is deterministic and spreads tags apart") {
    CHECK(Rng::derive_stream(1, 2) == Rng::derive_stream(1, 2));
    std::set<std::uint64_t> seen;
    for (std::uint64_t tag = 0; tag < 1000; ++tag) seen.insert(Rng::derive_stream(42, tag));
    CHECK(seen.size() == 1000); // no collisions across a realistic tag range
    CHECK(Rng::derive_stream(1, 2) != Rng::derive_stream(2, 1));
}

TEST_CASE("round_half_up rounds .5 toward positive infinity") {
    CHECK(round_half_up(2.5) == 3);
    CHECK(round_half_up(2.4) == 2);
    CHECK(round_half_up(-2.5) == -2);
    CHECK(round_half_up(-2.6) == -3);
    CHECK(round_half_up(0.0) == 0);
}

TEST_CASE("raw encoding is centi-units with half-up rounding") {
    CHECK(encode_raw(25.7) == 2570);
    CHECK(encode_raw(25.675) == 2568); // 2567.5 rounds up
    CHECK(encode_raw(-0.015) == -1);   // -1.5 rounds toward +inf
    CHECK(encode_raw(0.0) == 0);
}

TEST_CASE("decode inverts encode within half a centi-unit") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> dist(-40.0, 99.0);
    for (int i = 0; i < 10000; ++i) {
        const double v = dist(gen);
        CHECK(std::abs(decode_raw(encode_raw(v)) - v) <= 0.005 + 1e-12);
    }
}

TEST_CASE("air-quality code maps volts onto the 10-bit scale") {
    CHECK(aq_voltage_to_code(0.0) == 0);
    CHECK(aq_voltage_to_code(5.0) == 1023);
    CHECK(aq_voltage_to_code(1.5) == 307); // 1.5/5*1023 = 306.9
    CHECK(aq_voltage_to_code(2.5) == 512); // 511.5 rounds up
    CHECK_THROWS_AS(aq_voltage_to_code(-0.01), OutOfRangeVoltage);
    CHECK_THROWS_AS(aq_voltage_to_code(5.01), OutOfRangeVoltage);
}

TEST_CASE("dust count scales low-pulse occupancy") {
    CHECK(dust_from_lpo(0.0) == 0);
    CHECK(dust_from_lpo(1.0) == 28000);
    CHECK(dust_from_lpo(0.05) == 1400);
    CHECK_THROWS_AS(dust_from_lpo(-0.001), OutOfRangeLpo);
    CHECK_THROWS_AS(dust_from_lpo(1.001), OutOfRangeLpo);
}

TEST_CASE("in_ranges accepts the envelope and rejects escapes") {
    Reading r;
    r.humidity_raw = encode_raw(25.7);
    r.temperature_raw = encode_raw(21.0);
    r.co2_ppm = 600;
    r.dust_pcs_per_l = 1400;
    r.air_quality_code = 307;
    r.vibration_count = 3;
    CHECK(in_ranges(r));

    Reading bad = r;
    bad.humidity_raw = encode_raw(4.9); // below the 5% floor
    CHECK_FALSE(in_ranges(bad));
    bad = r;
    bad.co2_ppm = 2001;
    CHECK_FALSE(in_ranges(bad));
    bad = r;
    bad.air_quality_code = 1024;
    CHECK_FALSE(in_ranges(bad));
}

namespace {

ClimateScenario quiet_constant() {
    ClimateScenario sc;
    sc.kind = ScenarioKind::Constant;
    sc.humidity_pct = {25.7, 0.0, 0.0};
    sc.temperature_c = {21.0, 0.0, 0.0};
    sc.co2_ppm = {600.0, 0.0, 0.0};
    sc.dust_lpo = {0.05, 0.0, 0.0};
    sc.aq_volts = {1.5, 0.0, 0.0};
    sc.vibration_rate = 0.0;
    return sc;
}

} // namespace

TEST_CASE("noiseless constant scenario yields identical encoded readings") {
    ScenarioSampler sampler(quiet_constant());
    Rng rng(1);
    const Reading first = sampler.sample(0, rng);
    CHECK(first.humidity_raw == 2570);
    CHECK(first.temperature_raw == 2100);
    CHECK(first.co2_ppm == 600);
    CHECK(first.dust_pcs_per_l == 1400);
    CHECK(first.air_quality_code == 307);
    CHECK(first.vibration_count == 0);
    for (int k = 1; k <= 100; ++k) {
        Reading r = sampler.sample(k * 15000, rng);
        CHECK(r.humidity_raw == first.humidity_raw);
        CHECK(r.temperature_raw == first.temperature_raw);
        CHECK(r.co2_ppm == first.co2_ppm);
    }
}

TEST_CASE("same scenario and seed replay bit-identically") {
    ClimateScenario sc; // default noise levels on
    ScenarioSampler sampler(sc);
    Rng a(77), b(77);
    for (int k = 0; k < 500; ++k) {
        const std::int64_t t = k * 15000;
        CHECK(sampler.sample(t, a) == sampler.sample(t, b));
    }
}

TEST_CASE("adding noise to one parameter never shifts another's stream") {
    // Fixed draw order with gaussians consumed even at stddev 0: the CO2
    // stream (third draw) must be identical whether or not temperature
    // (second draw) is noisy.
    ClimateScenario quiet = quiet_constant();
    quiet.co2_ppm.noise_stddev = 50.0;
    ClimateScenario noisy = quiet;
    noisy.temperature_c.noise_stddev = 5.0;

    ScenarioSampler qs(quiet), ns(noisy);
    Rng ra(3), rb(3);
    for (int k = 0; k < 200; ++k) {
        const std::int64_t t = k * 15000;
        const Reading a = qs.sample(t, ra);
        const Reading b = ns.sample(t, rb);
        CHECK(a.humidity_raw == b.humidity_raw);
        CHECK(a.co2_ppm == b.co2_ppm);
        CHECK(a.dust_pcs_per_l == b.dust_pcs_per_l);
        CHECK(a.air_quality_code == b.air_quality_code);
    }
}

TEST_CASE("sinusoid traces the configured cycle") {
    ClimateScenario sc = quiet_constant();
    sc.kind = ScenarioKind::Sinusoid;
    sc.period_s = 3600.0;
    sc.humidity_pct = {50.0, 10.0, 0.0};
    ScenarioSampler sampler(sc);
    Rng rng(1);
    CHECK(sampler.sample(0, rng).humidity_raw == 5000);
    CHECK(sampler.sample(900 * 1000, rng).humidity_raw == 6000);  // quarter period: +A
    CHECK(sampler.sample(1800 * 1000, rng).humidity_raw == 5000); // half period
    CHECK(sampler.sample(2700 * 1000, rng).humidity_raw == 4000); // three quarters: -A
}

TEST_CASE("generated values clamp to the sensor envelope after noise") {
    ClimateScenario sc = quiet_constant();
    sc.kind = ScenarioKind::Sinusoid;
    sc.period_s = 3600.0;
    sc.humidity_pct = {90.0, 30.0, 0.0}; // peaks past the 99% ceiling
    sc.co2_ppm = {100.0, 300.0, 0.0};    // dips below zero
    ScenarioSampler sampler(sc);
    Rng rng(1);
    const Reading peak = sampler.sample(900 * 1000, rng);
    CHECK(peak.humidity_raw == 9900);
    const Reading trough = sampler.sample(2700 * 1000, rng);
    CHECK(trough.co2_ppm == 0);
    Rng noisy(2);
    ClimateScenario wild = quiet_constant();
    wild.humidity_pct = {99.0, 0.0, 30.0};
    ScenarioSampler ws(wild);
    for (int k = 0; k < 100000; ++k) {
        CHECK(in_ranges(ws.sample(k * 1000, noisy)));
    }
}

TEST_CASE("scenario JSON parsing round-trips the documented shape") {
    const char* text = R"({
        "kind": "sinusoid",
        "seed": 9,
        "period_s": 86400,
        "humidity": {"baseline": 45.0, "amplitude": 5.0, "noise_stddev": 0.5},
        "co2": {"baseline": 700.0},
        "vibration_rate": 0.25
    })";
    ClimateScenario sc = ClimateScenario::from_json_text(text);
    CHECK(sc.kind == ScenarioKind::Sinusoid);
    CHECK(sc.seed == 9);
    CHECK(sc.period_s == 86400.0);
    CHECK(sc.humidity_pct.baseline == 45.0);
    CHECK(sc.humidity_pct.amplitude == 5.0);
    CHECK(sc.humidity_pct.noise_stddev == 0.5);
    CHECK(sc.co2_ppm.baseline == 700.0);
    CHECK(sc.co2_ppm.noise_stddev == kDefaultCo2NoisePpm); // default kept
    CHECK(sc.vibration_rate == 0.25);
}

TEST_CASE("scenario JSON rejects bad input") {
    CHECK_THROWS_AS(ClimateScenario::from_json_text("{"), ConfigError);
    CHECK_THROWS_AS(ClimateScenario::from_json_text(R"({"kind": "banana"})"), ConfigError);
    // sinusoid without a positive period is unusable
    CHECK_THROWS_AS(ClimateScenario::from_json_text(R"({"kind": "sinusoid"})"), ConfigError);
    CHECK_THROWS_AS(
        ClimateScenario::from_json_text(R"({"kind": "sinusoid", "period_s": 0})"),
        ConfigError);
}
