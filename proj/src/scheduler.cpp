#include "hbsim/scheduler.hpp"

#include <utility>

#include "hbsim/errors.hpp"

namespace hbsim {

void VirtualScheduler::schedule_at(std::int64_t t_ms, Handler fn) {
    if (t_ms < now_ms_) {
        throw Error("cannot schedule event at t=" + std::to_string(t_ms) +
                    " before current virtual time " + std::to_string(now_ms_));
    }
    queue_.push({t_ms, next_seq_++, std::move(fn)});
}

void VirtualScheduler::run_until(std::int64_t end_ms) {
    while (!queue_.empty() && queue_.top().t_ms < end_ms) {
        // top() is const; moving out right before pop() is safe
        Entry e = std::move(const_cast<Entry&>(queue_.top()));
        queue_.pop();
        now_ms_ = e.t_ms;
        ++executed_;
        e.fn(now_ms_);
    }
    if (end_ms > now_ms_) now_ms_ = end_ms;
}

void VirtualScheduler::run_all() {
    while (!queue_.empty()) {
        Entry e = std::move(const_cast<Entry&>(queue_.top()));
        queue_.pop();
        now_ms_ = e.t_ms;
        ++executed_;
        e.fn(now_ms_);
    }
}

} // namespace hbsim
