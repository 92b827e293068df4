#include "acklab/ewma.hpp"

#include <stdexcept>

namespace acklab {

PerAckEwma::PerAckEwma(uint64_t gain_recip)
    : g_(gain_recip)
{
    if (!valid_gain_recip(gain_recip))
        throw std::invalid_argument("PerAckEwma: G must be a power of two in [2, 64]");
}

void PerAckEwma::init_on_first_mark(uint64_t cwnd, uint64_t flight, InitPolicy policy)
{
    if (initialized_)
        throw std::logic_error("PerAckEwma: already initialized");
    av_up_ = (policy == InitPolicy::cwnd_times_g ? cwnd : flight) * g_;
    initialized_ = true;
}

void PerAckEwma::update(uint64_t ce_fb, uint64_t acks_per_round)
{
    if (acks_per_round == 0)
        throw std::invalid_argument("PerAckEwma: acks_per_round must be >= 1");
    if (ce_fb > 0 && !initialized_)
        throw std::logic_error("PerAckEwma: marked update before initialization");
    carry_ = div(checked_add(carry_.rem, av_up_), acks_per_round * g_);
    uint64_t next = checked_add(av_up_, ce_fb);
    // decrement saturates at 0
    av_up_ = next > carry_.quot ? next - carry_.quot : 0;
}

PerRttEwma::PerRttEwma(RttEwmaMode mode, uint64_t gain_recip)
    : mode_(mode), g_(gain_recip)
{
    if (!valid_gain_recip(gain_recip))
        throw std::invalid_argument("PerRttEwma: G must be a power of two in [2, 64]");
}

void PerRttEwma::on_ack(uint64_t covered_pkts, uint64_t ce_fb, uint64_t snd_una, uint64_t snd_next)
{
    if (!round_armed_) {
        round_end_seq_ = snd_next;
        round_armed_ = true;
    }
    round_total_ += covered_pkts;
    round_marked_ += ce_fb;
    if (snd_una >= round_end_seq_) {
        on_round(round_marked_, round_total_);
        round_marked_ = 0;
        round_total_ = 0;
        round_end_seq_ = snd_next;
    }
}

void PerRttEwma::on_round(uint64_t marked_in_round, uint64_t total_in_round)
{
    if (total_in_round == 0)
        return; // nothing acknowledged this round
    switch (mode_) {
    case RttEwmaMode::dctcp_float:
        alpha_ += (double(marked_in_round) / double(total_in_round) - alpha_) / double(g_);
        break;
    case RttEwmaMode::dctcp_floor_15_1024:
        alpha_ += (double(marked_in_round) / double(total_in_round) - alpha_) / double(g_);
        // below the floor the stored average snaps to zero and stays there
        // until a round of marking lifts it back over the threshold
        if (alpha_ < kAlphaFloor)
            alpha_ = 0.0;
        break;
    case RttEwmaMode::prague_upscaled: {
        uint64_t f_fx = marked_in_round * kFractionOne / total_in_round;
        alpha_up_ = alpha_up_ - alpha_up_ / g_ + f_fx;
        break;
    }
    }
}

double PerRttEwma::alpha() const
{
    if (mode_ == RttEwmaMode::prague_upscaled)
        return double(alpha_up_) / double(g_ * kFractionOne);
    return alpha_;
}

double PerRttEwma::alpha_for_reduction() const
{
    double a = alpha();
    if (mode_ == RttEwmaMode::dctcp_floor_15_1024 && a < kAlphaFloor)
        return kAlphaFloor;
    return a;
}

} // namespace acklab
