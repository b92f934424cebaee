#pragma once

#include <cstdint>
#include <random>

namespace hbsim {

/// Deterministic random stream.
///
/// The engine is std::mt19937_64, whose output sequence is specified bit-exactly
/// by the C++ standard. The value draws below deliberately avoid
/// std::*_distribution (their outputs differ between standard libraries):
///  - uniform01:  (engine() >> 11) * 2^-53, in [0, 1)
///  - gaussian:   Box-Muller, z = sqrt(-2 ln u1) * cos(2 pi u2), u1 in (0, 1);
///                two engine steps per value (u1 redrawn while zero)
///  - poisson:    Knuth multiplication method
///  - bernoulli:  uniform01() < p
///
/// Equal seeds give byte-identical draw sequences, which the simulator relies
/// on for reproducible runs.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1).
    double uniform01();

    /// Gaussian sample; stddev = 0 returns exactly `mean` (engine still advances).
    double gaussian(double mean, double stddev);

    /// Poisson-distributed count with the given rate (>= 0).
    std::uint64_t poisson(double rate);

    /// True with probability p. p = 0 never fires, p = 1 always fires.
    bool bernoulli(double p);

    /// Derives an independent stream seed from a master seed and a stream tag
    /// (splitmix64 finalizer). Used to give each device/channel its own stream.
    static std::uint64_t derive_stream(std::uint64_t master, std::uint64_t tag);

private:
    std::mt19937_64 engine_;
};

/// floor(x + 0.5): .5 fractions round toward +infinity. Used everywhere an
/// integer encoding is produced so encodings are identical across builds.
std::int64_t round_half_up(double x);

} // namespace hbsim
