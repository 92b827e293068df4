#include "acklab/ewma_compare.hpp"

#include <cstdio>
#include <stdexcept>

#include "acklab/ewma.hpp"

namespace acklab {

std::vector<EwmaCompareRow> run_ewma_compare(const EwmaCompareConfig& cfg)
{
    if (cfg.acks_per_round == 0 || cfg.rounds == 0 || cfg.rtt_us <= 0)
        throw std::invalid_argument("run_ewma_compare: need acks, rounds and rtt >= 1");

    PerAckEwma perack(cfg.gain_recip);
    perack.init_on_first_mark(0, 0, InitPolicy::cwnd_times_g); // start flat at zero
    PerRttEwma perrtt(RttEwmaMode::dctcp_float, cfg.gain_recip);

    const uint64_t n = cfg.acks_per_round;
    std::vector<EwmaCompareRow> rows;
    rows.reserve(cfg.rounds * n);

    uint64_t seq = 0;
    for (uint64_t round = 0; round < cfg.rounds; ++round) {
        uint64_t round_end = seq + n;
        for (uint64_t slot = 0; slot < n; ++slot) {
            uint64_t ce = 0;
            for (const auto& b : cfg.bursts)
                if (b.round == round && slot >= b.slot && slot < b.slot + b.len)
                    ce = 1;
            perack.update(ce, n);
            // one covered packet per ACK; the round snapshot is the send
            // sequence one window ahead
            perrtt.on_ack(1, ce, seq + 1, round_end + slot + 1);
            ++seq;

            EwmaCompareRow r;
            r.ack_index = round * n + slot;
            r.round = round;
            r.slot = slot;
            r.time_us = int64_t(round) * cfg.rtt_us + int64_t(slot + 1) * cfg.rtt_us / int64_t(n);
            r.ce = ce;
            r.av_up = perack.raw();
            r.perack_marks = perack.marks_per_round();
            r.perrtt_alpha = perrtt.alpha();
            r.perrtt_marks = perrtt.alpha() * double(n);
            rows.push_back(r);
        }
    }
    return rows;
}

void emit_ewma_compare_csv(const std::vector<EwmaCompareRow>& rows, std::ostream& out)
{
    out << "ack_index,round,slot,time_us,ce,av_up,perack_marks,perrtt_alpha,perrtt_marks\n";
    char buf[192];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%llu,%llu,%llu,%lld,%llu,%llu,%.6g,%.6g,%.6g\n",
                      (unsigned long long)r.ack_index, (unsigned long long)r.round,
                      (unsigned long long)r.slot, (long long)r.time_us,
                      (unsigned long long)r.ce, (unsigned long long)r.av_up,
                      r.perack_marks, r.perrtt_alpha, r.perrtt_marks);
        out << buf;
    }
}

} // namespace acklab
