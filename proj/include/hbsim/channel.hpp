#pragma once

#include <cstdint>

#include "hbsim/rng.hpp"

namespace hbsim {

/// Edge-to-cloud link that drops each message independently with a fixed
/// probability. Counters satisfy sent == delivered + dropped at all times.
class LossyChannel {
  public:
    LossyChannel(double drop_probability, std::uint64_t seed);

    /// One transmission attempt; true means the message got through.
    bool transmit();

    double drop_probability() const { return drop_probability_; }
    std::uint64_t sent() const { return sent_; }
    std::uint64_t delivered() const { return delivered_; }
    std::uint64_t dropped() const { return dropped_; }
    bool conserves() const { return sent_ == delivered_ + dropped_; }

  private:
    double drop_probability_;
    Rng rng_;
    std::uint64_t sent_ = 0;
    std::uint64_t delivered_ = 0;
    std::uint64_t dropped_ = 0;
};

} // namespace hbsim
