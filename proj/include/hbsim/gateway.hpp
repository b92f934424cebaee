#pragma once

#include <cstdint>
#include <functional>

#include "hbsim/channel.hpp"
#include "hbsim/rng.hpp"
#include "hbsim/scenario.hpp"
#include "hbsim/telemetry.hpp"
#include "hbsim/time_util.hpp"

namespace hbsim {

enum class PollOutcome { Delivered, Dropped, Stalled };
enum class WatchdogOutcome { Healthy, Restarted };

struct GatewayConfig {
    std::int64_t device_id = 0;
    std::int64_t collector_id = 0;
    std::uint64_t sample_seed = 1;
    std::uint64_t channel_seed = 1;
    double drop_probability = 0.0;
    std::int64_t stall_window_ms = 5 * kMsPerMinute;
    std::int64_t epoch_ms = 0; // run start; anchors the first watchdog grace period
};

/// Polls one collector on the virtual clock, wraps each reading into a
/// sequenced TelemetryMessage and fires it at the hub through a lossy
/// channel. Fire and forget: drops are counted, never retried.
///
/// The watchdog models the deployed boxes' hardware timer: if no poll has
/// succeeded within stall_window_ms it power-cycles the collector, which
/// clears an injected stall and logs one restart. The sequence counter
/// survives restarts (next sequence = last sent + 1).
class EdgeGateway {
  public:
    /// deliver receives every message the channel lets through, in send
    /// order. sampler must outlive the gateway.
    using DeliverFn = std::function<void(const TelemetryMessage&, std::int64_t now_ms)>;

    EdgeGateway(const GatewayConfig& cfg, const ScenarioSampler* sampler, DeliverFn deliver);

    /// One sampling instant: reads the collector, stamps ids, sends. While
    /// stalled the collector does not answer, so no message is produced.
    PollOutcome poll_and_send(std::int64_t now_ms);

    WatchdogOutcome watchdog_tick(std::int64_t now_ms);

    /// Makes polls fail for duration_ms starting at from_ms (test hook; a
    /// watchdog restart clears it early).
    void inject_stall(std::int64_t from_ms, std::int64_t duration_ms);

    std::int64_t device_id() const { return cfg_.device_id; }
    std::int64_t next_sequence() const { return next_sequence_; }
    std::uint64_t generated() const { return generated_; }
    std::uint64_t restarts() const { return restarts_; }
    const LossyChannel& channel() const { return channel_; }

  private:
    bool stalled_at(std::int64_t now_ms) const {
        return now_ms >= stall_from_ms_ && now_ms < stall_until_ms_;
    }

    GatewayConfig cfg_;
    const ScenarioSampler* sampler_;
    DeliverFn deliver_;
    Rng rng_;
    LossyChannel channel_;
    std::int64_t next_sequence_ = 1;
    std::uint64_t generated_ = 0;
    std::uint64_t restarts_ = 0;
    std::int64_t last_success_ms_;
    std::int64_t stall_from_ms_ = 0;
    std::int64_t stall_until_ms_ = 0;
};

} // namespace hbsim
