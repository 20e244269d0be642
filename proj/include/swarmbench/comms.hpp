#pragma once

#include "swarmbench/world.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace swarmbench {

enum class MessageKind { plan, point, state };

const char* message_kind_name(MessageKind kind);

// Documented payload encodings (bits). Header is 16-bit sender id plus a
// 16-bit element count; every coordinate is a 64-bit float.
inline constexpr int kHeaderBits = 32;
inline constexpr int kFloatBits = 64;

inline constexpr int plan_payload_bits(int waypoints) {
    return kHeaderBits + 2 * kFloatBits * waypoints;
}
inline constexpr int kPointPayloadBits = kHeaderBits + 2 * kFloatBits; // 160
inline constexpr int kStatePayloadBits = kHeaderBits + 2 * kFloatBits; // 160

struct Message {
    int sender = 0;
    std::vector<int> recipients;
    MessageKind kind = MessageKind::state;
    int payload_bits = 0;
    long send_tick = 0;
};

struct DeliveredRecord {
    long deliver_tick = 0;
    int sender = 0;
    int recipient = 0;
    MessageKind kind = MessageKind::state;
    int payload_bits = 0;
};

struct DroppedRecord {
    long send_tick = 0;
    int sender = 0;
    int recipient = 0;
};

using EdgeKey = std::pair<int, int>; // sender -> recipient

class CommLedger {
public:
    explicit CommLedger(double seconds_per_tick = 0.1)
        : seconds_per_tick_(seconds_per_tick) {}

    void record_delivery(long deliver_tick, int sender, int recipient, MessageKind kind,
                         int payload_bits);
    void record_drop(long send_tick, int sender, int recipient);

    double seconds_per_tick() const { return seconds_per_tick_; }
    long total_bits() const { return total_bits_; }
    long message_count() const { return static_cast<long>(log_.size()); }
    const std::vector<DeliveredRecord>& log() const { return log_; }
    const std::vector<DroppedRecord>& dropped() const { return dropped_; }
    const std::map<EdgeKey, long>& edge_totals() const { return edge_totals_; }

    // Exact recomputation of the totals from the delivery log.
    std::map<EdgeKey, long> replay_edge_totals() const;

    // (edge, whole second) -> bits; drives the 1 s window peak.
    const std::map<std::pair<EdgeKey, long>, long>& second_bins() const { return second_bins_; }

    // Line-delimited export: tick sender recipient kind bits.
    std::string export_log() const;

private:
    double seconds_per_tick_;
    long total_bits_ = 0;
    std::vector<DeliveredRecord> log_;
    std::vector<DroppedRecord> dropped_;
    std::map<EdgeKey, long> edge_totals_;
    std::map<std::pair<EdgeKey, long>, long> second_bins_;
};

struct EdgeBandwidth {
    EdgeKey edge;
    double average_bps = 0.0;
    double peak_bps = 0.0;
};

struct BandwidthSummary {
    double duration_s = 0.0;
    long total_bits = 0;
    double peak_edge_bps = 0.0;    // max over edges of the per-edge peak
    double average_total_bps = 0.0;
    std::vector<EdgeBandwidth> edges;
};

// Per-edge average and peak over 1 s windows, plus system totals.
BandwidthSummary bandwidth_summary(const CommLedger& ledger, double duration_s);

// Round-synchronous bus: broadcasts are queued and become visible
// latency_ticks later. Delivery (not sending) charges the ledger.
class MessageBus {
public:
    MessageBus(double seconds_per_tick, int latency_ticks)
        : ledger_(seconds_per_tick), latency_ticks_(latency_ticks) {}

    // When proximity_limited, only recipients within comm_radius of the
    // sender at send time receive the message; the rest are logged dropped.
    void broadcast(const Message& msg, const WorldState& world, bool proximity_limited,
                   double comm_radius);

    // Messages whose delivery tick is <= tick, in deterministic order.
    std::vector<DeliveredRecord> collect_due(long tick);

    const CommLedger& ledger() const { return ledger_; }
    CommLedger& ledger_mutable() { return ledger_; }
    int latency_ticks() const { return latency_ticks_; }

private:
    struct Pending {
        DeliveredRecord rec;
    };
    CommLedger ledger_;
    int latency_ticks_;
    std::vector<Pending> queue_;
};

} // namespace swarmbench
