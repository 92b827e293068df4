#include "acklab/ack_tracker.hpp"

#include <stdexcept>

namespace acklab {

Alt1Tracker::Alt1Tracker(uint64_t initial_acks)
    : acks_(initial_acks ? initial_acks : 1)
{
}

uint64_t Alt1Tracker::on_ack(const AckSample& s)
{
    ++cum_acks_;
    if (s.covered_pkts > 0 && s.has_stamp) {
        uint64_t span = cum_acks_ - s.latest_stamp; // stamp predates this ACK, so span >= 1
        acks_ = span ? span : 1;
    }
    return acks_;
}

Alt2Tracker::Alt2Tracker(uint64_t g2, uint64_t initial_acks)
    : g2_(g2), cov_fx_(g2), acks_(initial_acks ? initial_acks : 1)
{
    if (g2 == 0)
        throw std::invalid_argument("Alt2Tracker: G2 must be >= 1");
    // cov_avg starts at one packet (one SMSS)
}

uint64_t Alt2Tracker::on_ack(const AckSample& s)
{
    cov_fx_ = cov_fx_ - cov_fx_ / g2_ + s.covered_pkts;
    if (cov_fx_ == 0)
        cov_fx_ = 1; // fixed-point epsilon, keeps the divisor alive
    uint64_t a = (s.flight_after * g2_ + cov_fx_ / 2) / cov_fx_;
    acks_ = a ? a : 1;
    return acks_;
}

std::unique_ptr<AckTracker> make_tracker(TrackerKind kind, uint64_t g2, uint64_t initial_acks)
{
    if (kind == TrackerKind::alt2)
        return std::make_unique<Alt2Tracker>(g2, initial_acks);
    return std::make_unique<Alt1Tracker>(initial_acks);
}

} // namespace acklab
