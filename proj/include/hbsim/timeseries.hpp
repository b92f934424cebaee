#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hbsim/errors.hpp"

namespace hbsim {

struct TimePoint {
    std::int64_t utc_ms = 0;
    double value = 0.0;

    bool operator==(const TimePoint&) const = default;
};

/// Ordered (timestamp, value) series with strictly increasing timestamps.
/// Appending out of order throws AlignmentError, so the invariant holds by
/// construction everywhere a TimeSeries exists.
class TimeSeries {
  public:
    TimeSeries() = default;
    explicit TimeSeries(std::string unit) : unit_(std::move(unit)) {}

    void append(std::int64_t utc_ms, double value) {
        if (!points_.empty() && utc_ms <= points_.back().utc_ms) {
            throw AlignmentError("timestamps must be strictly increasing (" +
                                 std::to_string(utc_ms) + " after " +
                                 std::to_string(points_.back().utc_ms) + ")");
        }
        points_.push_back({utc_ms, value});
    }

    const std::vector<TimePoint>& points() const { return points_; }
    const TimePoint& operator[](std::size_t i) const { return points_[i]; }
    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }
    const std::string& unit() const { return unit_; }
    void set_unit(std::string unit) { unit_ = std::move(unit); }

    std::int64_t front_ms() const { return points_.front().utc_ms; }
    std::int64_t back_ms() const { return points_.back().utc_ms; }

    bool operator==(const TimeSeries& other) const { return points_ == other.points_; }

  private:
    std::vector<TimePoint> points_;
    std::string unit_;
};

} // namespace hbsim
