#pragma once

#include <cstdint>
#include <memory>

namespace acklab {

// What one ACK tells the tracker. covered_pkts counts packets newly
// ACKed/SACKed; latest_stamp is the send-time counter stamp of the latest
// covered packet (absent for packets sent before any ACK was processed);
// flight_after is the in-flight count once this ACK's coverage is applied.
struct AckSample {
    uint64_t covered_pkts = 0;
    bool has_stamp = false;
    uint64_t latest_stamp = 0;
    uint64_t flight_after = 0;
};

// Estimator of acks_, the number of ACKs per round trip.
class AckTracker {
public:
    virtual ~AckTracker() = default;
    virtual uint64_t on_ack(const AckSample& s) = 0; // returns the fresh acks_
    virtual uint64_t acks_per_round() const = 0;
    // Stamp for a packet being sent now; only the cumulative-counter
    // tracker uses these, the others return 0.
    virtual uint64_t send_stamp() const { return 0; }
};

// Exact per-round count from a cumulative ACK counter: each packet is
// stamped with the counter value at send time, and on arrival of an ACK
// acks_ = counter_now - stamp(latest covered packet). Duplicate ACKs and
// ACKs covering only unstamped packets leave acks_ unchanged.
class Alt1Tracker final : public AckTracker {
public:
    explicit Alt1Tracker(uint64_t initial_acks);
    uint64_t on_ack(const AckSample& s) override;
    uint64_t acks_per_round() const override { return acks_; }
    uint64_t send_stamp() const override { return cum_acks_; }
    uint64_t cum_acks() const { return cum_acks_; }

private:
    uint64_t cum_acks_ = 0;
    uint64_t acks_;
};

// Stateless-per-packet alternative: an EWMA of packets covered per ACK
// (gain 1/G2, stored upscaled by G2) divided into the current flight.
// flight is biased up by cov_avg/2 before the division to avoid rounding
// bias; the result is floored at 1.
class Alt2Tracker final : public AckTracker {
public:
    Alt2Tracker(uint64_t g2, uint64_t initial_acks);
    uint64_t on_ack(const AckSample& s) override;
    uint64_t acks_per_round() const override { return acks_; }
    double cov_avg() const { return double(cov_fx_) / double(g2_); }
    uint64_t cov_fx() const { return cov_fx_; }

private:
    uint64_t g2_;
    uint64_t cov_fx_; // covered-per-ACK average, upscaled by G2
    uint64_t acks_;
};

// Pins acks_ to a constant; diagnostic harnesses use it to hold the
// per-round divisor still while probing the controller arithmetic.
class ConstantTracker final : public AckTracker {
public:
    explicit ConstantTracker(uint64_t acks) : acks_(acks ? acks : 1) {}
    uint64_t on_ack(const AckSample&) override { return acks_; }
    uint64_t acks_per_round() const override { return acks_; }

private:
    uint64_t acks_;
};

enum class TrackerKind { alt1, alt2 };

std::unique_ptr<AckTracker> make_tracker(TrackerKind kind, uint64_t g2, uint64_t initial_acks);

} // namespace acklab
