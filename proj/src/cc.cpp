#include "acklab/cc.hpp"

#include <cmath>
#include <stdexcept>

namespace acklab {

const char* variant_name(Variant v)
{
    switch (v) {
    case Variant::proposed_aimd:   return "proposed_aimd";
    case Variant::stage_a:         return "stage_a";
    case Variant::dctcp_baseline:  return "dctcp_baseline";
    case Variant::prague_baseline: return "prague_baseline";
    case Variant::fixed_cwnd:      return "fixed_cwnd";
    }
    return "?";
}

std::optional<Variant> variant_from_name(const std::string& name)
{
    for (Variant v : {Variant::proposed_aimd, Variant::stage_a, Variant::dctcp_baseline,
                      Variant::prague_baseline, Variant::fixed_cwnd})
        if (name == variant_name(v))
            return v;
    return std::nullopt;
}

CcController::CcController(const CcConfig& cfg)
    : CcController(cfg, make_tracker(cfg.tracker, cfg.tracker_g2, cfg.initial_acks))
{
}

CcController::CcController(const CcConfig& cfg, std::unique_ptr<AckTracker> tracker)
    : cfg_(cfg),
      tracker_(std::move(tracker)),
      cwnd_(cfg.init_cwnd),
      acks_(tracker_->acks_per_round()),
      g2x_(cfg.gain_recip * 2)
{
    if (!valid_gain_recip(cfg.gain_recip))
        throw std::invalid_argument("CcController: G must be a power of two in [2, 64]");
    if (cfg.min_cwnd == 0)
        throw std::invalid_argument("CcController: min_cwnd must be >= 1");
    if (cwnd_ < cfg.min_cwnd)
        cwnd_ = cfg.min_cwnd;
    switch (cfg.variant) {
    case Variant::proposed_aimd:
    case Variant::stage_a:
        perack_.emplace(cfg.gain_recip);
        break;
    case Variant::dctcp_baseline:
        perrtt_.emplace(cfg.alpha_floor ? RttEwmaMode::dctcp_floor_15_1024
                                        : RttEwmaMode::dctcp_float,
                        cfg.gain_recip);
        break;
    case Variant::prague_baseline:
        perrtt_.emplace(RttEwmaMode::prague_upscaled, cfg.gain_recip);
        break;
    case Variant::fixed_cwnd:
        break;
    }
}

void CcController::on_ack(const AckEvent& ack, uint64_t snd_next, uint64_t flight_after)
{
    AckSample sample;
    sample.covered_pkts = ack.covered_pkts;
    sample.has_stamp = ack.has_stamp;
    sample.latest_stamp = ack.latest_stamp;
    sample.flight_after = flight_after;
    acks_ = tracker_->on_ack(sample); // acks_ must be fresh before any use below

    switch (cfg_.variant) {
    case Variant::proposed_aimd:
        on_ack_proposed(ack, snd_next, flight_after);
        break;
    case Variant::stage_a:
        on_ack_stage_a(ack, snd_next, flight_after);
        break;
    case Variant::dctcp_baseline:
    case Variant::prague_baseline:
        on_ack_per_rtt(ack, snd_next);
        break;
    case Variant::fixed_cwnd:
        break; // window pinned, feedback ignored
    }
}

void CcController::update_perack_ewma(const AckEvent& ack, uint64_t flight_after)
{
    if (ack.ce_fb > 0 && !perack_->initialized())
        perack_->init_on_first_mark(cwnd_, flight_after, cfg_.ewma_init);
    perack_->update(ack.ce_fb, acks_);
}

void CcController::additive_increase()
{
    // one packet per round, spread as G*2 units into the shared denominator
    cwnd_carry_ = divu(checked_add(cwnd_carry_.rem[0], g2x_), acks_ * g2x_, 0);
    cwnd_ += cwnd_carry_.quot;
    total_ai_increase_ += cwnd_carry_.quot;
}

void CcController::decrease_cwnd(uint64_t amount)
{
    uint64_t room = cwnd_ - cfg_.min_cwnd;
    if (amount > room) {
        clamp_events_++;
        amount = room;
    }
    cwnd_ -= amount;
    total_md_decrease_ += amount;
}

void CcController::on_ack_proposed(const AckEvent& ack, uint64_t snd_next, uint64_t flight_after)
{
    update_perack_ewma(ack, flight_after);

    if (ack.ce_fb == 0) {
        additive_increase();
    } else if (!cwr_) {
        next_seq_ = snd_next; // reduction in progress until the ack point crosses this
        cwr_ = true;
    }

    if (cwr_) {
        if (ack.snd_una < next_seq_) {
            // spread-out multiplicative decrease, av_up/(2G) over the round
            cwnd_carry_ = divu(checked_add(cwnd_carry_.rem[1], perack_->raw()),
                               acks_ * g2x_, 1);
            decrease_cwnd(cwnd_carry_.quot);
        } else {
            cwr_ = false; // no update on the ACK that ends CWR state
        }
    }
}

void CcController::on_ack_stage_a(const AckEvent& ack, uint64_t snd_next, uint64_t flight_after)
{
    update_perack_ewma(ack, flight_after);

    if (ack.ce_fb == 0) {
        additive_increase();
    } else if (!cwr_) {
        decrease_cwnd(perack_->raw() / g2x_); // one shot of av_up/(2G)
        next_seq_ = snd_next;
        cwr_ = true; // suppress further response for a round
    }

    if (cwr_ && ack.snd_una >= next_seq_)
        cwr_ = false;
}

uint64_t CcController::baseline_reduction() const
{
    if (cfg_.variant == Variant::prague_baseline) {
        // integer path: cwnd * alpha_up / (2 * G * 2^10)
        uint64_t denom = 2 * cfg_.gain_recip * PerRttEwma::kFractionOne;
        return cwnd_ * perrtt_->alpha_up_raw() / denom;
    }
    return uint64_t(std::floor(perrtt_->alpha_for_reduction() / 2.0 * double(cwnd_)));
}

void CcController::on_ack_per_rtt(const AckEvent& ack, uint64_t snd_next)
{
    perrtt_->on_ack(ack.covered_pkts, ack.ce_fb, ack.snd_una, snd_next);

    if (cwr_ && ack.snd_una >= next_seq_)
        cwr_ = false;

    if (ack.ce_fb > 0 && !cwr_) {
        decrease_cwnd(baseline_reduction());
        next_seq_ = snd_next;
        cwr_ = true;
    }

    bool ai_allowed = cfg_.variant == Variant::prague_baseline || !cwr_;
    if (ai_allowed && ack.ce_fb == 0)
        additive_increase();
}

bool CcController::ewma_raw_is_integral() const
{
    if (perrtt_)
        return perrtt_->mode() == RttEwmaMode::prague_upscaled;
    return true;
}

uint64_t CcController::ewma_raw_int() const
{
    if (perack_)
        return perack_->raw();
    if (perrtt_ && perrtt_->mode() == RttEwmaMode::prague_upscaled)
        return perrtt_->alpha_up_raw();
    return 0;
}

double CcController::ewma_raw_real() const
{
    if (perack_)
        return double(perack_->raw());
    if (perrtt_)
        return perrtt_->mode() == RttEwmaMode::prague_upscaled
                   ? double(perrtt_->alpha_up_raw())
                   : perrtt_->alpha();
    return 0.0;
}

double CcController::ewma_downscaled() const
{
    if (perack_)
        return perack_->marks_per_round();
    if (perrtt_)
        return perrtt_->alpha();
    return 0.0;
}

void CcController::override_cwnd(uint64_t cwnd)
{
    cwnd_ = cwnd < cfg_.min_cwnd ? cfg_.min_cwnd : cwnd;
}

} // namespace acklab
