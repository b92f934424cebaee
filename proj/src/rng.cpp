#include "hbsim/rng.hpp"

#include <cmath>

namespace hbsim {

double Rng::uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::gaussian(double mean, double stddev) {
    double u1 = uniform01();
    while (u1 == 0.0)
        u1 = uniform01();
    const double u2 = uniform01();
    const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    return mean + stddev * z;
}

std::uint64_t Rng::poisson(double rate) {
    const double limit = std::exp(-rate);
    std::uint64_t k = 0;
    double p = 1.0;
    do {
        ++k;
        p *= uniform01();
    } while (p > limit);
    return k - 1;
}

bool Rng::bernoulli(double p) {
    return uniform01() < p;
}

std::uint64_t Rng::derive_stream(std::uint64_t master, std::uint64_t tag) {
    // splitmix64 finalizer over master xor golden-ratio-scaled tag
    std::uint64_t z = master ^ (tag * 0x9E3779B97F4A7C15ull);
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::int64_t round_half_up(double x) {
    return static_cast<std::int64_t>(std::floor(x + 0.5));
}

} // namespace hbsim
