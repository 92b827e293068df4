#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "acklab/cc.hpp"
#include "acklab/scenario.hpp"

namespace acklab {

// Instantaneous step marking: CE iff the queue behind the departing packet
// exceeds the threshold. No filtering, no hysteresis.
inline bool step_mark(uint64_t queue_depth, uint64_t threshold)
{
    return queue_depth > threshold;
}

// Receiver-side ACK generation: one ACK per ack_ratio delivered packets,
// counted from the start of the connection, plus an immediate flush when a
// CE-marked packet arrives and ack_on_ce is set (the flush does not shift
// the ratio phase).
class AckGenerator {
public:
    AckGenerator(uint64_t ack_ratio, bool ack_on_ce)
        : ratio_(ack_ratio ? ack_ratio : 1), on_ce_(ack_on_ce)
    {
    }

    struct Out {
        uint64_t covered_pkts = 0;
        uint64_t ce_fb = 0;
        uint64_t latest_covered_seq = 0;
    };

    std::optional<Out> on_delivery(uint64_t seq, bool ce)
    {
        ++rcv_count_;
        ++pending_;
        pending_ce_ += ce ? 1 : 0;
        latest_ = seq;
        if ((on_ce_ && ce) || rcv_count_ % ratio_ == 0) {
            Out out{pending_, pending_ce_, latest_};
            pending_ = 0;
            pending_ce_ = 0;
            return out;
        }
        return std::nullopt;
    }

private:
    uint64_t ratio_;
    bool on_ce_;
    uint64_t rcv_count_ = 0;
    uint64_t pending_ = 0;
    uint64_t pending_ce_ = 0;
    uint64_t latest_ = 0;
};

// One sampled point of a flow's state. Rows are appended at every sample
// tick and at every congestion-window change.
struct MetricsRow {
    int64_t time_us = 0;
    uint32_t flow = 0;
    uint64_t cwnd = 0;
    uint64_t flight = 0;
    bool ewma_is_int = true;
    uint64_t ewma_raw_i = 0;
    double ewma_raw_f = 0.0;
    double ewma_down = 0.0;
    uint64_t acks = 0;
    uint64_t queue_pkts = 0;
    uint64_t cum_marks = 0;
    uint64_t cum_acks = 0;
    bool cwr = false;
    bool operator==(const MetricsRow&) const = default;
};

struct FlowSummary {
    uint64_t delivered = 0;
    uint64_t marks_fed_back = 0;
    uint64_t acks_received = 0;
    uint64_t final_cwnd = 0;
    uint64_t clamp_events = 0;
};

struct SummaryStats {
    int64_t step_time_us = -1; // congestion step t0; -1 when the scenario has none
    double round_us = 0.0;     // round length at the pre-step operating point
    int64_t first_fb_time_us = -1;
    uint64_t cwnd_at_first_fb = 0;
    uint64_t cwnd_settled = 0;
    double rounds_to_first_reduction = 0.0; // NaN when not measurable
    double rounds_to_50pct_reduction = 0.0;
    double mean_queue = 0.0;
    uint64_t max_queue = 0;
    double utilization = 0.0;
    double mean_marks_per_round_steady = 0.0;
    uint64_t drops = 0;
    uint64_t clamp_events = 0;
    std::vector<FlowSummary> flows;
};

struct RunResult {
    std::vector<MetricsRow> rows;
    SummaryStats summary;
};

// Deterministic single-queue simulation of the scenario: identical
// (scenario, seed) input yields identical output, row for row.
RunResult run_scenario(const Scenario& s, uint64_t seed);

} // namespace acklab
