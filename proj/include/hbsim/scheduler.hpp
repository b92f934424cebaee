#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <vector>

namespace hbsim {

/// Discrete-event virtual clock: events fire in (time, insertion) order, so
/// simulated weeks run in real-time seconds and every run is deterministic.
/// Handlers may schedule further events (including for the current instant).
class VirtualScheduler {
  public:
    using Handler = std::function<void(std::int64_t now_ms)>;

    /// Queues fn at virtual time t_ms. Scheduling into the past (before the
    /// currently executing event) is a logic error and asserts via Error.
    void schedule_at(std::int64_t t_ms, Handler fn);

    /// Runs every event with time < end_ms, then sets now() = end_ms.
    void run_until(std::int64_t end_ms);

    /// Drains the queue completely (useful for small scripted tests).
    void run_all();

    std::int64_t now() const { return now_ms_; }
    std::uint64_t executed() const { return executed_; }
    bool empty() const { return queue_.empty(); }

  private:
    struct Entry {
        std::int64_t t_ms;
        std::uint64_t seq;
        Handler fn;
    };
    struct Later {
        bool operator()(const Entry& a, const Entry& b) const {
            if (a.t_ms != b.t_ms) return a.t_ms > b.t_ms;
            return a.seq > b.seq;
        }
    };

    std::priority_queue<Entry, std::vector<Entry>, Later> queue_;
    std::int64_t now_ms_ = 0;
    std::uint64_t next_seq_ = 0;
    std::uint64_t executed_ = 0;
};

} // namespace hbsim
