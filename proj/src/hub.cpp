#include "hbsim/hub.hpp"

#include <ostream>

#include "hbsim/errors.hpp"
#include "hbsim/gateway.hpp"
#include "hbsim/time_util.hpp"

namespace hbsim {

ReliabilityTier ReliabilityTier::shared(double drop_probability) {
    return make("shared", drop_probability);
}

ReliabilityTier ReliabilityTier::sla(double drop_probability) {
    return make("sla", drop_probability);
}

ReliabilityTier ReliabilityTier::make(std::string_view name, double drop_probability) {
    if (!(drop_probability >= 0.0 && drop_probability <= 1.0)) {
        throw ConfigError("consume drop probability must lie in [0, 1]");
    }
    if (name == "shared") return {"shared", drop_probability};
    if (name == "sla") {
        if (drop_probability > kSlaMaxDropProbability) {
            throw ConfigError("sla tier drop probability " + std::to_string(drop_probability) +
                              " exceeds the contractual ceiling " +
                              std::to_string(kSlaMaxDropProbability));
        }
        return {"sla", drop_probability};
    }
    throw ConfigError("unknown tier \"" + std::string(name) + "\" (expected shared or sla)");
}

void LossLedger::verify() const {
    const auto check = [](const LossCounts& c, const std::string& who) {
        if (c.stored != c.consumed) {
            throw Error(who + ": stored " + std::to_string(c.stored) + " != consumed " +
                        std::to_string(c.consumed));
        }
        if (c.consumed > c.hub_received || c.hub_received > c.sent || c.sent > c.generated) {
            throw Error(who + ": hop counters must not grow downstream (generated " +
                        std::to_string(c.generated) + ", sent " + std::to_string(c.sent) +
                        ", received " + std::to_string(c.hub_received) + ", consumed " +
                        std::to_string(c.consumed) + ")");
        }
    };
    check(total, "total");
    LossCounts sum;
    for (const auto& [device, counts] : per_device) {
        check(counts, "device " + std::to_string(device));
        sum.generated += counts.generated;
        sum.sent += counts.sent;
        sum.hub_received += counts.hub_received;
        sum.consumed += counts.consumed;
        sum.stored += counts.stored;
    }
    if (sum.generated != total.generated || sum.sent != total.sent ||
        sum.hub_received + parse_rejected != total.hub_received ||
        sum.consumed != total.consumed || sum.stored != total.stored) {
        throw Error("per-device counts do not sum to the ledger totals");
    }
    if (total.total_loss() != total.edge_loss() + total.consumer_loss()) {
        throw Error("loss decomposition does not add up"); // unreachable by construction
    }
}

CloudHub::CloudHub(ReliabilityTier tier, std::uint64_t consumer_seed)
    : tier_(std::move(tier)), consumer_rng_(consumer_seed) {}

CloudHub::IngestStatus CloudHub::ingest(std::string_view payload, std::int64_t now_ms) {
    TelemetryMessage msg;
    try {
        msg = parse_telemetry(payload);
    } catch (const ParseRejected&) {
        // received, counted, never enqueued
        ++received_total_;
        ++parse_rejected_;
        auto& bucket = hours_[hour_start(now_ms)];
        bucket.hour_start_ms = hour_start(now_ms);
        ++bucket.messages_received;
        return IngestStatus::ParseRejected;
    }
    return accept(msg, now_ms);
}

CloudHub::IngestStatus CloudHub::ingest(const TelemetryMessage& msg, std::int64_t now_ms) {
    return accept(msg, now_ms);
}

CloudHub::IngestStatus CloudHub::accept(const TelemetryMessage& msg, std::int64_t now_ms) {
    ++received_total_;
    ++devices_[msg.reading.device_id].hub_received;
    auto& bucket = hours_[hour_start(now_ms)];
    bucket.hour_start_ms = hour_start(now_ms);
    ++bucket.messages_received;
    inbox_.push_back({msg, now_ms});
    return IngestStatus::Accepted;
}

void CloudHub::consume_pending(TelemetryStore& store) {
    while (!inbox_.empty()) {
        const Event ev = inbox_.front();
        inbox_.pop_front();
        if (consumer_rng_.bernoulli(tier_.consume_drop_probability)) {
            continue; // event delivery failed; the function never ran
        }
        store.insert(record_from_reading(ev.msg.reading));
        auto& dev = devices_[ev.msg.reading.device_id];
        ++dev.consumed;
        ++dev.stored;
        ++consumed_total_;
        ++stored_total_;
        ++hours_[hour_start(ev.arrived_ms)].functions_executed;
    }
}

std::vector<HourlyMetrics> CloudHub::hourly_metrics() const {
    std::vector<HourlyMetrics> out;
    out.reserve(hours_.size());
    for (const auto& [start, bucket] : hours_) out.push_back(bucket);
    return out;
}

void CloudHub::write_metrics_csv(std::ostream& os) const {
    os << "hour_start_iso8601,messages_received,functions_executed\n";
    for (const auto& [start, bucket] : hours_) {
        os << format_iso8601_utc(start) << ',' << bucket.messages_received << ','
           << bucket.functions_executed << '\n';
    }
}

LossLedger snapshot_ledger(const std::vector<const EdgeGateway*>& gateways,
                           const CloudHub& hub) {
    LossLedger ledger;
    ledger.parse_rejected = hub.parse_rejected();
    for (const EdgeGateway* gw : gateways) {
        LossCounts& c = ledger.per_device[gw->device_id()];
        c.generated += gw->generated();
        c.sent += gw->channel().sent();
    }
    for (const auto& [device, counts] : hub.device_counts()) {
        LossCounts& c = ledger.per_device[device];
        c.hub_received = counts.hub_received;
        c.consumed = counts.consumed;
        c.stored = counts.stored;
    }
    for (const auto& [device, counts] : ledger.per_device) {
        ledger.total.generated += counts.generated;
        ledger.total.sent += counts.sent;
        ledger.total.hub_received += counts.hub_received;
        ledger.total.consumed += counts.consumed;
        ledger.total.stored += counts.stored;
    }
    ledger.total.hub_received += ledger.parse_rejected;
    return ledger;
}

} // namespace hbsim
