#pragma once

#include <cstdint>
#include <deque>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "hbsim/rng.hpp"
#include "hbsim/store.hpp"
#include "hbsim/telemetry.hpp"

namespace hbsim {

/// Ceiling on the consumer drop probability a contractual tier may claim.
inline constexpr double kSlaMaxDropProbability = 0.0005;

/// Reliability class of the consumer stage. The shared tier carries no
/// delivery guarantee (any probability); the sla tier must keep its drop
/// probability within kSlaMaxDropProbability.
struct ReliabilityTier {
    std::string name; // "shared" or "sla"
    double consume_drop_probability = 0.0;

    static ReliabilityTier shared(double drop_probability);
    static ReliabilityTier sla(double drop_probability);
    /// From config text; throws ConfigError for names other than shared/sla
    /// or an sla probability above the ceiling.
    static ReliabilityTier make(std::string_view name, double drop_probability);
};

struct HourlyMetrics {
    std::int64_t hour_start_ms = 0;
    std::uint64_t messages_received = 0;
    std::uint64_t functions_executed = 0;
};

/// Per-hop message counters. generated/sent come from the gateways,
/// hub_received/consumed/stored from the hub; losses are derived, never
/// counted independently, so conservation is structural.
struct LossCounts {
    std::uint64_t generated = 0;
    std::uint64_t sent = 0;
    std::uint64_t hub_received = 0;
    std::uint64_t consumed = 0;
    std::uint64_t stored = 0;

    std::uint64_t edge_loss() const { return sent - hub_received; }
    std::uint64_t consumer_loss() const { return hub_received - consumed; }
    std::uint64_t total_loss() const { return edge_loss() + consumer_loss(); }
};

/// Where the pipeline's messages went, per device and in total. Malformed
/// payloads count into total.hub_received (the hub did receive them) and
/// into parse_rejected, but belong to no device.
struct LossLedger {
    std::map<std::int64_t, LossCounts> per_device;
    LossCounts total;
    std::uint64_t parse_rejected = 0;

    /// Throws Error on any conservation violation: stored != consumed,
    /// a hop counter exceeding the one before it, or per-device counts not
    /// summing to the totals.
    void verify() const;
};

/// Central message hub plus the consumer stage behind it: ingests telemetry
/// payloads, buckets hourly metrics, fans events out to a consumer whose
/// reliability is the configured tier, and inserts parsed records into the
/// store. Single logical task; one instance per pipeline.
class CloudHub {
  public:
    enum class IngestStatus { Accepted, ParseRejected };

    CloudHub(ReliabilityTier tier, std::uint64_t consumer_seed);

    /// Wire-format entry point: parses the payload. A malformed payload is
    /// counted (total received + hourly metric + parse_rejected) and then
    /// goes nowhere — rejection is a terminal state, not a silent drop.
    IngestStatus ingest(std::string_view payload, std::int64_t now_ms);

    /// Trusted overload for tests that want hub behavior without paying for
    /// JSON encode/parse per message. Counts exactly like a parsed payload.
    IngestStatus ingest(const TelemetryMessage& msg, std::int64_t now_ms);

    /// Runs the consumer over every pending event, in arrival order. Each
    /// event is first subjected to the tier's drop draw; survivors execute
    /// the consumer function, which inserts into the store and bumps
    /// functions_executed in the event's arrival hour. Store failures
    /// propagate (losses must only ever come from modeled drops).
    void consume_pending(TelemetryStore& store);

    std::size_t pending() const { return inbox_.size(); }
    const ReliabilityTier& tier() const { return tier_; }

    std::uint64_t received_total() const { return received_total_; }
    std::uint64_t consumed_total() const { return consumed_total_; }
    std::uint64_t stored_total() const { return stored_total_; }
    std::uint64_t parse_rejected() const { return parse_rejected_; }

    /// Per-device (hub_received, consumed, stored) triples.
    struct DeviceCounts {
        std::uint64_t hub_received = 0;
        std::uint64_t consumed = 0;
        std::uint64_t stored = 0;
    };
    const std::map<std::int64_t, DeviceCounts>& device_counts() const { return devices_; }

    /// Hour buckets in ascending time order.
    std::vector<HourlyMetrics> hourly_metrics() const;

    /// CSV: hour_start_iso8601,messages_received,functions_executed
    void write_metrics_csv(std::ostream& os) const;

  private:
    struct Event {
        TelemetryMessage msg;
        std::int64_t arrived_ms;
    };

    IngestStatus accept(const TelemetryMessage& msg, std::int64_t now_ms);

    ReliabilityTier tier_;
    Rng consumer_rng_;
    std::deque<Event> inbox_;
    std::map<std::int64_t, DeviceCounts> devices_;
    std::map<std::int64_t, HourlyMetrics> hours_; // keyed by hour_start_ms
    std::uint64_t received_total_ = 0;
    std::uint64_t consumed_total_ = 0;
    std::uint64_t stored_total_ = 0;
    std::uint64_t parse_rejected_ = 0;
};

class EdgeGateway; // gateway.hpp

/// Assembles the loss ledger for a run from its gateways and hub. Valid at
/// any instant, not just run end (conservation is checked event by event in
/// the tests via repeated snapshots).
LossLedger snapshot_ledger(const std::vector<const EdgeGateway*>& gateways,
                           const CloudHub& hub);

} // namespace hbsim
