#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

namespace acklab {

// Effective per-round reciprocal gain of n per-ACK sub-reductions with
// reciprocal gain G: the G' such that one reduction by 1/G' equals n
// reductions by 1/(nG). Evaluated in the log domain, so it stays exact for
// very large n.
double effective_gain_numeric(double gain_recip, uint64_t n);

struct ClosedFormGain {
    double g_prime; // 2G^2 / (2G - 1)
    double delta;   // G / (2G - 1), the large-n gap G' - G
};

ClosedFormGain effective_gain_closed_form(double gain_recip);

struct GainTableRow {
    double gain_recip;
    uint64_t n;
    double g_prime;
    double delta; // g_prime - gain_recip
};

std::vector<GainTableRow> gain_table(const std::vector<double>& gain_recips,
                                     const std::vector<uint64_t>& n_values);

void emit_gain_table_csv(const std::vector<GainTableRow>& rows, std::ostream& out);

} // namespace acklab
