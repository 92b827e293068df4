#include "acklab/harness.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace acklab {

AbReport run_ab(const Scenario& s, const std::vector<Variant>& variants, uint64_t seed)
{
    if (variants.size() < 2)
        throw std::invalid_argument("run_ab: need at least two variants");

    AbReport report;
    for (Variant v : variants) {
        Scenario variant_scenario = s;
        for (auto& f : variant_scenario.flows)
            f.variant = v;
        AbVariantResult res;
        res.variant = v;
        RunResult run = run_scenario(variant_scenario, seed);
        res.summary = std::move(run.summary);
        res.rows = std::move(run.rows);
        if (res.summary.drops > 0)
            report.valid = false; // drops mean the scenario is misconfigured
        report.runs.push_back(std::move(res));
    }

    double first = report.runs.front().summary.rounds_to_50pct_reduction;
    double last = report.runs.back().summary.rounds_to_50pct_reduction;
    report.lag_delta_rounds = first - last;

    bool first_is_baseline = variants.front() == Variant::dctcp_baseline ||
                             variants.front() == Variant::prague_baseline;
    if (first_is_baseline && variants.back() == Variant::proposed_aimd &&
        std::isfinite(report.lag_delta_rounds)) {
        report.gates_applicable = true;
        report.gate_baseline_ge2 = first >= 2.0;
        report.gate_proposed_le1 = last <= 1.0;
        report.gate_delta_ge1 = report.lag_delta_rounds >= 1.0;
    }
    return report;
}

std::string summary_text(const SummaryStats& s)
{
    std::ostringstream os;
    os << "  mean_queue=" << s.mean_queue << " pkts, max_queue=" << s.max_queue
       << ", utilization=" << s.utilization << ", drops=" << s.drops << "\n";
    if (s.step_time_us >= 0) {
        os << "  step at t0=" << s.step_time_us << "us, round=" << s.round_us
           << "us, first_fb=" << s.first_fb_time_us
           << "us, cwnd_at_fb=" << s.cwnd_at_first_fb << ", settled=" << s.cwnd_settled
           << "\n";
        os << "  rounds_to_first_reduction=" << s.rounds_to_first_reduction
           << ", rounds_to_50pct=" << s.rounds_to_50pct_reduction << "\n";
    }
    if (std::isfinite(s.mean_marks_per_round_steady))
        os << "  mean_marks_per_round (steady) = " << s.mean_marks_per_round_steady << "\n";
    return os.str();
}

std::string ab_report_text(const AbReport& report)
{
    std::ostringstream os;
    for (const auto& r : report.runs) {
        os << variant_name(r.variant) << ":\n" << summary_text(r.summary);
    }
    os << "lag_delta_rounds = " << report.lag_delta_rounds << "\n";
    if (report.gates_applicable) {
        os << "gates: baseline>=2.0 " << (report.gate_baseline_ge2 ? "PASS" : "FAIL")
           << ", proposed<=1.0 " << (report.gate_proposed_le1 ? "PASS" : "FAIL")
           << ", delta>=1.0 " << (report.gate_delta_ge1 ? "PASS" : "FAIL") << "\n";
    }
    if (!report.valid)
        os << "WARNING: packets were dropped; the scenario is misconfigured and the "
              "report is not meaningful\n";
    return os.str();
}

namespace {

nlohmann::json finite_or_null(double v)
{
    if (std::isfinite(v))
        return v;
    return nullptr;
}

nlohmann::json summary_json(const SummaryStats& s)
{
    nlohmann::json j;
    j["step_time_us"] = s.step_time_us;
    j["round_us"] = finite_or_null(s.round_us);
    j["first_fb_time_us"] = s.first_fb_time_us;
    j["cwnd_at_first_fb"] = s.cwnd_at_first_fb;
    j["cwnd_settled"] = s.cwnd_settled;
    j["rounds_to_first_reduction"] = finite_or_null(s.rounds_to_first_reduction);
    j["rounds_to_50pct_reduction"] = finite_or_null(s.rounds_to_50pct_reduction);
    j["mean_queue"] = s.mean_queue;
    j["max_queue"] = s.max_queue;
    j["utilization"] = s.utilization;
    j["mean_marks_per_round_steady"] = finite_or_null(s.mean_marks_per_round_steady);
    j["drops"] = s.drops;
    j["clamp_events"] = s.clamp_events;
    return j;
}

} // namespace

std::string ab_report_json(const AbReport& report, const std::string& scenario_name,
                           uint64_t seed)
{
    nlohmann::json j;
    j["scenario"] = scenario_name;
    j["seed"] = seed;
    j["valid"] = report.valid;
    j["lag_delta_rounds"] = finite_or_null(report.lag_delta_rounds);
    nlohmann::json runs = nlohmann::json::array();
    for (const auto& r : report.runs) {
        nlohmann::json jr;
        jr["variant"] = variant_name(r.variant);
        jr["summary"] = summary_json(r.summary);
        runs.push_back(jr);
    }
    j["runs"] = runs;
    if (report.gates_applicable) {
        nlohmann::json g;
        g["baseline_rounds_ge_2"] = report.gate_baseline_ge2;
        g["proposed_rounds_le_1"] = report.gate_proposed_le1;
        g["lag_delta_ge_1"] = report.gate_delta_ge1;
        j["gates"] = g;
    }
    return j.dump(2) + "\n";
}

} // namespace acklab
