#include "hbsim/channel.hpp"

#include "hbsim/errors.hpp"

namespace hbsim {

LossyChannel::LossyChannel(double drop_probability, std::uint64_t seed)
    : drop_probability_(drop_probability), rng_(seed) {
    if (!(drop_probability >= 0.0 && drop_probability <= 1.0)) {
        throw ConfigError("channel drop probability must lie in [0, 1]");
    }
}

bool LossyChannel::transmit() {
    ++sent_;
    if (rng_.bernoulli(drop_probability_)) {
        ++dropped_;
        return false;
    }
    ++delivered_;
    return true;
}

} // namespace hbsim
