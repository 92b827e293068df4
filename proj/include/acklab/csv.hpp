#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "acklab/netsim.hpp"

namespace acklab {

// Column order is part of the tool's contract; tests pin this string.
inline constexpr const char* kMetricsCsvHeader =
    "time_us,flow,cwnd,flight,ewma_raw,ewma_downscaled,acks_,queue_pkts,"
    "cum_marks,cum_acks,cwr";

// Integers verbatim, reals with 6 significant digits, LF line endings.
void emit_csv(const std::vector<MetricsRow>& rows, std::ostream& out);

std::string csv_to_string(const std::vector<MetricsRow>& rows);

// Writes via emit_csv; failures are reported with the file name.
void write_csv_file(const std::vector<MetricsRow>& rows, const std::string& path);

} // namespace acklab
