#include "swarmbench/comms.hpp"

#include <algorithm>
#include <cmath>

namespace swarmbench {

const char* message_kind_name(MessageKind kind) {
    switch (kind) {
        case MessageKind::plan: return "plan";
        case MessageKind::point: return "point";
        case MessageKind::state: return "state";
    }
    return "?";
}

void CommLedger::record_delivery(long deliver_tick, int sender, int recipient,
                                 MessageKind kind, int payload_bits) {
    log_.push_back({deliver_tick, sender, recipient, kind, payload_bits});
    total_bits_ += payload_bits;
    const EdgeKey edge{sender, recipient};
    edge_totals_[edge] += payload_bits;
    const long second = static_cast<long>(std::floor(deliver_tick * seconds_per_tick_));
    second_bins_[{edge, second}] += payload_bits;
}

void CommLedger::record_drop(long send_tick, int sender, int recipient) {
    dropped_.push_back({send_tick, sender, recipient});
}

std::map<EdgeKey, long> CommLedger::replay_edge_totals() const {
    std::map<EdgeKey, long> totals;
    for (const auto& rec : log_) totals[{rec.sender, rec.recipient}] += rec.payload_bits;
    return totals;
}

std::string CommLedger::export_log() const {
    std::string out;
    for (const auto& rec : log_) {
        out += std::to_string(rec.deliver_tick) + " " + std::to_string(rec.sender) + " " +
               std::to_string(rec.recipient) + " " + message_kind_name(rec.kind) + " " +
               std::to_string(rec.payload_bits) + "\n";
    }
    return out;
}

BandwidthSummary bandwidth_summary(const CommLedger& ledger, double duration_s) {
    BandwidthSummary s;
    s.duration_s = duration_s;
    s.total_bits = ledger.total_bits();
    if (duration_s > 0.0) s.average_total_bps = static_cast<double>(s.total_bits) / duration_s;
    for (const auto& [edge, bits] : ledger.edge_totals()) {
        EdgeBandwidth eb;
        eb.edge = edge;
        eb.average_bps = duration_s > 0.0 ? static_cast<double>(bits) / duration_s : 0.0;
        s.edges.push_back(eb);
    }
    for (const auto& [key, bits] : ledger.second_bins()) {
        for (auto& eb : s.edges) {
            if (eb.edge == key.first)
                eb.peak_bps = std::max(eb.peak_bps, static_cast<double>(bits));
        }
    }
    for (const auto& eb : s.edges) s.peak_edge_bps = std::max(s.peak_edge_bps, eb.peak_bps);
    return s;
}

void MessageBus::broadcast(const Message& msg, const WorldState& world, bool proximity_limited,
                           double comm_radius) {
    Vec2 sender_pos{};
    for (const auto& r : world.robots)
        if (r.id == msg.sender) sender_pos = r.position;
    for (int recipient : msg.recipients) {
        if (recipient == msg.sender) continue;
        if (proximity_limited) {
            Vec2 rec_pos{};
            bool found = false;
            for (const auto& r : world.robots) {
                if (r.id == recipient) {
                    rec_pos = r.position;
                    found = true;
                }
            }
            if (!found || distance(sender_pos, rec_pos) > comm_radius) {
                ledger_.record_drop(msg.send_tick, msg.sender, recipient);
                continue;
            }
        }
        queue_.push_back({DeliveredRecord{msg.send_tick + latency_ticks_, msg.sender, recipient,
                                          msg.kind, msg.payload_bits}});
    }
}

std::vector<DeliveredRecord> MessageBus::collect_due(long tick) {
    std::vector<DeliveredRecord> due;
    std::vector<Pending> rest;
    rest.reserve(queue_.size());
    for (const auto& p : queue_) {
        if (p.rec.deliver_tick <= tick) {
            due.push_back(p.rec);
        } else {
            rest.push_back(p);
        }
    }
    queue_ = std::move(rest);
    std::stable_sort(due.begin(), due.end(), [](const DeliveredRecord& a, const DeliveredRecord& b) {
        if (a.deliver_tick != b.deliver_tick) return a.deliver_tick < b.deliver_tick;
        if (a.sender != b.sender) return a.sender < b.sender;
        return a.recipient < b.recipient;
    });
    for (const auto& rec : due)
        ledger_.record_delivery(rec.deliver_tick, rec.sender, rec.recipient, rec.kind,
                                rec.payload_bits);
    return due;
}

} // namespace swarmbench
