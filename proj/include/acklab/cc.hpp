#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "acklab/ack_tracker.hpp"
#include "acklab/ewma.hpp"
#include "acklab/intdiv.hpp"

namespace acklab {

enum class Variant {
    proposed_aimd,   // per-ACK EWMA, spread-out MD, AI thinned by feedback
    stage_a,         // per-ACK EWMA but one-shot reduction + quiet CWR round
    dctcp_baseline,  // per-RTT alpha, one-shot alpha/2 reduction, AI paused in CWR
    prague_baseline, // per-RTT upscaled alpha, AI continues through CWR
    fixed_cwnd,      // congestion control disabled (diagnostic)
};

const char* variant_name(Variant v);
std::optional<Variant> variant_from_name(const std::string& name);

// Feedback carried by one ACK as seen by the sender.
struct AckEvent {
    uint64_t covered_pkts = 0;      // packets newly ACKed/SACKed
    uint64_t ce_fb = 0;             // CE-marked packets fed back on this ACK
    uint64_t snd_una = 0;           // cumulative ack point after this ACK
    uint64_t latest_covered_seq = 0;
    int64_t arrival_time_us = 0;
    bool has_stamp = false;         // send stamp of the latest covered packet
    uint64_t latest_stamp = 0;
};

struct CcConfig {
    Variant variant = Variant::proposed_aimd;
    uint64_t gain_recip = 16; // G
    uint64_t min_cwnd = 2;
    uint64_t init_cwnd = 2;
    InitPolicy ewma_init = InitPolicy::cwnd_times_g;
    bool alpha_floor = false; // dctcp_baseline only: respond no lower than 15/1024
    TrackerKind tracker = TrackerKind::alt1;
    uint64_t tracker_g2 = 32;
    uint64_t initial_acks = 1;
};

// One flow's congestion controller. Drive it with one call per ACK, in
// arrival order; it owns the acks_ tracker and the moving-average state.
// AI and MD share a single dual-remainder carry with a common denominator
// acks * G * 2, so interleaved increases and decreases never lose residue.
class CcController {
public:
    explicit CcController(const CcConfig& cfg);
    CcController(const CcConfig& cfg, std::unique_ptr<AckTracker> tracker);

    // snd_next: next sequence the sender would transmit (CWR round marker).
    // flight_after: packets in flight once this ACK's coverage is applied.
    void on_ack(const AckEvent& ack, uint64_t snd_next, uint64_t flight_after);

    uint64_t cwnd() const { return cwnd_; }
    bool in_cwr() const { return cwr_; }
    uint64_t cwr_round_end() const { return next_seq_; }
    uint64_t acks_per_round() const { return acks_; }
    uint64_t send_stamp() const { return tracker_->send_stamp(); }
    Variant variant() const { return cfg_.variant; }
    const CcConfig& config() const { return cfg_; }
    const DualCarry& cwnd_carry() const { return cwnd_carry_; }

    // Moving-average views for metrics: raw is integral except for the
    // floating-point dctcp modes; downscaled is marks-per-round for the
    // per-ACK variants and the marking fraction for the per-RTT ones.
    bool ewma_raw_is_integral() const;
    uint64_t ewma_raw_int() const;
    double ewma_raw_real() const;
    double ewma_downscaled() const;

    const PerAckEwma* perack() const { return perack_ ? &*perack_ : nullptr; }
    const PerRttEwma* perrtt() const { return perrtt_ ? &*perrtt_ : nullptr; }

    uint64_t clamp_events() const { return clamp_events_; }
    uint64_t total_md_decrease() const { return total_md_decrease_; }
    uint64_t total_ai_increase() const { return total_ai_increase_; }

    // Diagnostic hook for controlled-state experiments; the simulator never
    // calls this.
    void override_cwnd(uint64_t cwnd);

private:
    void on_ack_proposed(const AckEvent& ack, uint64_t snd_next, uint64_t flight_after);
    void on_ack_stage_a(const AckEvent& ack, uint64_t snd_next, uint64_t flight_after);
    void on_ack_per_rtt(const AckEvent& ack, uint64_t snd_next);
    void update_perack_ewma(const AckEvent& ack, uint64_t flight_after);
    void additive_increase();
    void decrease_cwnd(uint64_t amount);
    uint64_t baseline_reduction() const;

    CcConfig cfg_;
    std::unique_ptr<AckTracker> tracker_;
    std::optional<PerAckEwma> perack_;
    std::optional<PerRttEwma> perrtt_;
    uint64_t cwnd_;
    DualCarry cwnd_carry_;
    bool cwr_ = false;
    uint64_t next_seq_ = 0;
    uint64_t acks_;
    uint64_t g2x_; // G * 2, the shared AI deposit and denominator scale
    uint64_t clamp_events_ = 0;
    uint64_t total_md_decrease_ = 0;
    uint64_t total_ai_increase_ = 0;
};

} // namespace acklab
