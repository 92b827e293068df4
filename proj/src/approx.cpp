#include "acklab/approx.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace acklab {

double effective_gain_numeric(double gain_recip, uint64_t n)
{
    if (!(gain_recip > 1.0))
        throw std::invalid_argument("effective_gain_numeric: G must be > 1");
    if (n < 1)
        throw std::invalid_argument("effective_gain_numeric: n must be >= 1");
    if (!(double(n) * gain_recip > 1.0))
        throw std::invalid_argument("effective_gain_numeric: nG must be > 1");
    if (n == 1)
        return gain_recip;
    // 1 - (1 - 1/(nG))^n, without cancellation
    double shrink = -std::expm1(double(n) * std::log1p(-1.0 / (double(n) * gain_recip)));
    return 1.0 / shrink;
}

ClosedFormGain effective_gain_closed_form(double gain_recip)
{
    if (!(gain_recip > 0.5))
        throw std::invalid_argument("effective_gain_closed_form: G must be > 0.5");
    double g = gain_recip;
    return ClosedFormGain{2.0 * g * g / (2.0 * g - 1.0), g / (2.0 * g - 1.0)};
}

std::vector<GainTableRow> gain_table(const std::vector<double>& gain_recips,
                                     const std::vector<uint64_t>& n_values)
{
    std::vector<GainTableRow> rows;
    rows.reserve(gain_recips.size() * n_values.size());
    for (double g : gain_recips)
        for (uint64_t n : n_values) {
            double gp = effective_gain_numeric(g, n);
            rows.push_back(GainTableRow{g, n, gp, gp - g});
        }
    return rows;
}

void emit_gain_table_csv(const std::vector<GainTableRow>& rows, std::ostream& out)
{
    out << "G,n,G_prime,delta\n";
    char buf[128];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.6g,%llu,%.8g,%.8g\n", r.gain_recip,
                      (unsigned long long)r.n, r.g_prime, r.delta);
        out << buf;
    }
}

} // namespace acklab
