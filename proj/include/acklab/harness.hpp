#pragma once

#include <string>
#include <vector>

#include "acklab/netsim.hpp"
#include "acklab/scenario.hpp"

namespace acklab {

struct AbVariantResult {
    Variant variant;
    SummaryStats summary;
    std::vector<MetricsRow> rows;
};

// Comparison of one scenario run under several variants, everything else
// identical. lag_delta_rounds is the first variant's rounds-to-50%%
// reduction minus the last variant's, so the canonical
// `dctcp_baseline,proposed_aimd` order yields baseline minus proposed.
struct AbReport {
    std::vector<AbVariantResult> runs;
    double lag_delta_rounds = 0.0; // NaN when either end is unmeasurable
    bool valid = true;             // false when any run dropped packets
    // Lag gates, evaluated when the first variant is a per-RTT baseline
    // and the last is proposed_aimd.
    bool gates_applicable = false;
    bool gate_baseline_ge2 = false;
    bool gate_proposed_le1 = false;
    bool gate_delta_ge1 = false;
};

// Runs the scenario once per variant (every flow forced to that variant),
// same seed throughout.
AbReport run_ab(const Scenario& s, const std::vector<Variant>& variants, uint64_t seed);

std::string ab_report_text(const AbReport& report);
std::string ab_report_json(const AbReport& report, const std::string& scenario_name,
                           uint64_t seed);

std::string summary_text(const SummaryStats& s);

} // namespace acklab
