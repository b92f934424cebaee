#include "hbsim/gateway.hpp"

#include <utility>

namespace hbsim {

EdgeGateway::EdgeGateway(const GatewayConfig& cfg, const ScenarioSampler* sampler,
                         DeliverFn deliver)
    : cfg_(cfg),
      sampler_(sampler),
      deliver_(std::move(deliver)),
      rng_(cfg.sample_seed),
      channel_(cfg.drop_probability, cfg.channel_seed),
      last_success_ms_(cfg.epoch_ms) {}

PollOutcome EdgeGateway::poll_and_send(std::int64_t now_ms) {
    if (stalled_at(now_ms)) return PollOutcome::Stalled;

    Reading r = sampler_->sample(now_ms, rng_);
    r.device_id = cfg_.device_id;
    r.collector_id = cfg_.collector_id;
    ++generated_;
    // the poll itself succeeded; whether the channel then drops the message
    // is invisible to the watchdog (fire and forget)
    last_success_ms_ = now_ms;

    const TelemetryMessage msg{next_sequence_++, r, now_ms};
    if (!channel_.transmit()) return PollOutcome::Dropped;
    deliver_(msg, now_ms);
    return PollOutcome::Delivered;
}

WatchdogOutcome EdgeGateway::watchdog_tick(std::int64_t now_ms) {
    if (now_ms - last_success_ms_ <= cfg_.stall_window_ms) return WatchdogOutcome::Healthy;
    ++restarts_;
    stall_from_ms_ = stall_until_ms_ = 0; // power cycle unwedges the collector
    last_success_ms_ = now_ms;            // fresh grace period after restart
    return WatchdogOutcome::Restarted;
}

void EdgeGateway::inject_stall(std::int64_t from_ms, std::int64_t duration_ms) {
    stall_from_ms_ = from_ms;
    stall_until_ms_ = from_ms + duration_ms;
}

} // namespace hbsim
