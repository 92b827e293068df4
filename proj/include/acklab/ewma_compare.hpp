#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

namespace acklab {

// Scripted mark burst: ACK slots [slot, slot + len) of the given round
// carry one CE mark each.
struct MarkBurst {
    uint64_t round = 0;
    uint64_t slot = 0;
    uint64_t len = 1;
};

// Side-by-side toy run of the per-ACK and per-RTT moving averages with a
// constant window: per-packet ACKs, a fixed number of ACKs per round, and
// marks injected from a script. Neither engine drives cwnd. The per-ACK
// engine starts pre-initialized at zero so both averages begin from the
// same state.
struct EwmaCompareConfig {
    uint64_t gain_recip = 16;
    uint64_t acks_per_round = 20;
    uint64_t rounds = 12;
    int64_t rtt_us = 10000;
    std::vector<MarkBurst> bursts{{5, 4, 6}};
};

struct EwmaCompareRow {
    uint64_t ack_index = 0;
    uint64_t round = 0;
    uint64_t slot = 0;
    int64_t time_us = 0;
    uint64_t ce = 0;
    uint64_t av_up = 0;          // per-ACK engine, upscaled
    double perack_marks = 0.0;   // per-ACK engine, marks per round
    double perrtt_alpha = 0.0;   // per-RTT engine, marking fraction
    double perrtt_marks = 0.0;   // per-RTT engine, scaled to marks per round
};

std::vector<EwmaCompareRow> run_ewma_compare(const EwmaCompareConfig& cfg);

void emit_ewma_compare_csv(const std::vector<EwmaCompareRow>& rows, std::ostream& out);

} // namespace acklab
