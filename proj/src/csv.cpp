#include "acklab/csv.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace acklab {

namespace {

void format_real(std::ostream& out, double v)
{
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    out << buf;
}

} // namespace

void emit_csv(const std::vector<MetricsRow>& rows, std::ostream& out)
{
    out << kMetricsCsvHeader << "\n";
    for (const auto& r : rows) {
        out << r.time_us << ',' << r.flow << ',' << r.cwnd << ',' << r.flight << ',';
        if (r.ewma_is_int)
            out << r.ewma_raw_i;
        else
            format_real(out, r.ewma_raw_f);
        out << ',';
        format_real(out, r.ewma_down);
        out << ',' << r.acks << ',' << r.queue_pkts << ',' << r.cum_marks << ','
            << r.cum_acks << ',' << (r.cwr ? 1 : 0) << "\n";
    }
}

std::string csv_to_string(const std::vector<MetricsRow>& rows)
{
    std::ostringstream os;
    emit_csv(rows, os);
    return os.str();
}

void write_csv_file(const std::vector<MetricsRow>& rows, const std::string& path)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    emit_csv(rows, f);
    f.flush();
    if (!f)
        throw std::runtime_error("write failed for '" + path + "'");
}

} // namespace acklab
