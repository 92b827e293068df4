#pragma once

#include <cstdint>

#include "acklab/intdiv.hpp"

namespace acklab {

// Reciprocal gains are powers of two so scaling is a shift in kernel-style
// arithmetic; anything else is a config error.
inline bool valid_gain_recip(uint64_t g)
{
    return g == 2 || g == 4 || g == 8 || g == 16 || g == 32 || g == 64;
}

enum class InitPolicy {
    cwnd_times_g,   // first mark seeds the average as if the whole window were marked
    flight_times_g, // same but from the packets actually in flight
};

// Moving average of marks per round, updated on every ACK but upscaled by
// acks_ * G so it still smooths over G round trips regardless of the ACK
// rate. The decay division carries its remainder from call to call, so no
// residue is ever truncated away.
class PerAckEwma {
public:
    explicit PerAckEwma(uint64_t gain_recip);

    // Seed the average on the first CE-marked feedback of the connection.
    void init_on_first_mark(uint64_t cwnd, uint64_t flight, InitPolicy policy);

    // ce_fb: CE-marked packets fed back by this ACK; acks_per_round >= 1.
    void update(uint64_t ce_fb, uint64_t acks_per_round);

    uint64_t raw() const { return av_up_; }                           // marks/round, upscaled by G
    double marks_per_round() const { return double(av_up_) / double(g_); }
    uint64_t gain_recip() const { return g_; }
    bool initialized() const { return initialized_; }
    const CarryDiv& carry() const { return carry_; }

private:
    uint64_t av_up_ = 0;
    CarryDiv carry_;
    uint64_t g_;
    bool initialized_ = false;
};

enum class RttEwmaMode {
    dctcp_float,         // classic floating-point alpha
    dctcp_floor_15_1024, // alpha snaps to 0 below 15/1024; reductions floor it back up
    prague_upscaled,     // integer alpha upscaled by G on top of a 10-bit fraction
};

// Once-per-round moving average of the marking fraction, as the baselines
// keep it. The round boundary is detected by snapshotting the send sequence
// and waiting for the cumulative ACK to cross it.
class PerRttEwma {
public:
    PerRttEwma(RttEwmaMode mode, uint64_t gain_recip);

    // Accumulates this ACK's feedback and applies the once-per-round update
    // when snd_una crosses the current round-end snapshot.
    void on_ack(uint64_t covered_pkts, uint64_t ce_fb, uint64_t snd_una, uint64_t snd_next);

    // The round-boundary update itself. total_in_round == 0 means nothing
    // was acknowledged this round and the update is skipped.
    void on_round(uint64_t marked_in_round, uint64_t total_in_round);

    double alpha() const;               // marking fraction in [0, 1]
    double alpha_for_reduction() const; // floor mode never responds below 15/1024
    uint64_t alpha_up_raw() const { return alpha_up_; }
    RttEwmaMode mode() const { return mode_; }
    uint64_t gain_recip() const { return g_; }

    // Fixed-point scale of the prague form: F == 1 is stored as 1 << 10, so
    // alpha_up ranges over [0, G << 10]. Tests rely on this exact scaling.
    static constexpr uint64_t kFractionOne = 1024;
    static constexpr double kAlphaFloor = 15.0 / 1024.0;

private:
    RttEwmaMode mode_;
    uint64_t g_;
    double alpha_ = 0.0;
    uint64_t alpha_up_ = 0;
    uint64_t round_marked_ = 0;
    uint64_t round_total_ = 0;
    uint64_t round_end_seq_ = 0;
    bool round_armed_ = false;
};

} // namespace acklab
