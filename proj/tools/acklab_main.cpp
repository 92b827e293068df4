#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "acklab/approx.hpp"
#include "acklab/csv.hpp"
#include "acklab/ewma_compare.hpp"
#include "acklab/harness.hpp"
#include "acklab/netsim.hpp"
#include "acklab/scenario.hpp"

namespace fs = std::filesystem;
using namespace acklab;

namespace {

constexpr const char* kVersion = "acklab 0.1.0";

std::string slurp(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw ScenarioError("cannot open scenario file '" + path + "'");
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

std::string stem_of(const std::string& path)
{
    return fs::path(path).stem().string();
}

std::vector<Variant> parse_variant_list(const std::string& csv)
{
    std::vector<Variant> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto v = variant_from_name(item);
        if (!v)
            throw ScenarioError("unknown variant '" + item + "'");
        out.push_back(*v);
    }
    return out;
}

void write_text_file(const std::string& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    f << text;
    if (!f)
        throw std::runtime_error("write failed for '" + path + "'");
}

struct RunArgs {
    std::string scenario_file;
    std::string variant;
    uint64_t seed = 1;
    std::string out_dir = ".";
};

int cmd_run(const RunArgs& a)
{
    Scenario s = parse_scenario(slurp(a.scenario_file));
    std::string suffix;
    if (!a.variant.empty()) {
        auto v = variant_from_name(a.variant);
        if (!v)
            throw ScenarioError("unknown variant '" + a.variant + "'");
        for (auto& f : s.flows)
            f.variant = *v;
        suffix = "." + a.variant;
    }
    RunResult res = run_scenario(s, a.seed);
    fs::path out = fs::path(a.out_dir) / (stem_of(a.scenario_file) + suffix + ".csv");
    write_csv_file(res.rows, out.string());
    std::cout << "wrote " << out.string() << " (" << res.rows.size() << " rows)\n";
    std::cout << summary_text(res.summary);
    if (res.summary.drops > 0) {
        std::cout << "WARNING: " << res.summary.drops
                  << " packets dropped; the scenario is misconfigured\n";
    }
    return 0;
}

struct AbArgs {
    std::string scenario_file;
    std::string variants;
    uint64_t seed = 1;
    std::string out_dir = ".";
};

int cmd_ab(const AbArgs& a)
{
    Scenario s = parse_scenario(slurp(a.scenario_file));
    std::vector<Variant> variants = parse_variant_list(a.variants);
    if (variants.size() < 2)
        throw ScenarioError("--variants needs at least two comma-separated names");
    AbReport report = run_ab(s, variants, a.seed);
    std::string stem = stem_of(a.scenario_file);
    for (const auto& r : report.runs) {
        fs::path out =
            fs::path(a.out_dir) / (stem + "." + variant_name(r.variant) + ".csv");
        write_csv_file(r.rows, out.string());
        std::cout << "wrote " << out.string() << "\n";
    }
    fs::path jpath = fs::path(a.out_dir) / (stem + ".ab.json");
    write_text_file(jpath.string(), ab_report_json(report, stem, a.seed));
    std::cout << "wrote " << jpath.string() << "\n";
    std::cout << ab_report_text(report);
    return 0;
}

struct Fig3Args {
    std::string out_file = "fig3.csv";
    uint64_t gain = 16;
    uint64_t acks = 20;
    uint64_t rounds = 12;
    int64_t rtt = 10000;
    std::vector<std::string> bursts;
};

int cmd_fig3(const Fig3Args& a)
{
    EwmaCompareConfig cfg;
    cfg.gain_recip = a.gain;
    cfg.acks_per_round = a.acks;
    cfg.rounds = a.rounds;
    cfg.rtt_us = a.rtt;
    if (!a.bursts.empty()) {
        cfg.bursts.clear();
        for (const auto& spec : a.bursts) {
            MarkBurst b;
            if (std::sscanf(spec.c_str(), "%llu:%llu:%llu", (unsigned long long*)&b.round,
                            (unsigned long long*)&b.slot,
                            (unsigned long long*)&b.len) != 3)
                throw ScenarioError("--burst needs the form round:slot:len, got '" + spec +
                                    "'");
            cfg.bursts.push_back(b);
        }
    }
    auto rows = run_ewma_compare(cfg);
    std::ofstream f(a.out_file, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot open '" + a.out_file + "' for writing");
    emit_ewma_compare_csv(rows, f);
    std::cout << "wrote " << a.out_file << " (" << rows.size() << " rows)\n";
    return 0;
}

struct Fig4Args {
    std::string out_file = "fig4.csv";
    std::vector<double> gains{2, 3, 4, 6, 8, 12, 16, 24, 32, 48, 64};
    std::vector<uint64_t> ns{1, 2, 4, 16, 64, 256, 1024, 10000, 1000000};
};

int cmd_fig4(const Fig4Args& a)
{
    auto rows = gain_table(a.gains, a.ns);
    std::ofstream f(a.out_file, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot open '" + a.out_file + "' for writing");
    emit_gain_table_csv(rows, f);
    std::cout << "wrote " << a.out_file << " (" << rows.size() << " rows)\n";
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Per-ACK congestion-control laboratory: deterministic packet-level "
                 "simulation of ACK-clocked EWMA AIMD against per-round baselines"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(0, 1);

    RunArgs run_args;
    auto* run = app.add_subcommand("run", "simulate one scenario and emit its CSV");
    run->add_option("scenario", run_args.scenario_file, "scenario file")->required();
    run->add_option("--variant", run_args.variant,
                    "override the congestion-control variant of every flow");
    run->add_option("--seed", run_args.seed, "jitter seed (default 1)");
    run->add_option("--out", run_args.out_dir, "output directory (default .)");

    AbArgs ab_args;
    auto* ab = app.add_subcommand(
        "ab", "run the same scenario under several variants and compare lag");
    ab->add_option("scenario", ab_args.scenario_file, "scenario file")->required();
    ab->add_option("--variants", ab_args.variants,
                   "comma-separated variant list; lag delta is first minus last")
        ->required();
    ab->add_option("--seed", ab_args.seed, "jitter seed (default 1)");
    ab->add_option("--out", ab_args.out_dir, "output directory (default .)");

    Fig3Args f3_args;
    auto* f3 = app.add_subcommand(
        "fig3", "fixed-window side-by-side trace of the two moving averages");
    f3->add_option("--out", f3_args.out_file, "output CSV (default fig3.csv)");
    f3->add_option("--gain", f3_args.gain, "reciprocal gain G (default 16)");
    f3->add_option("--acks", f3_args.acks, "ACKs per round (default 20)");
    f3->add_option("--rounds", f3_args.rounds, "rounds to simulate (default 12)");
    f3->add_option("--rtt", f3_args.rtt, "round-trip time in us (default 10000)");
    f3->add_option("--burst", f3_args.bursts,
                   "mark burst round:slot:len, repeatable (default 5:4:6)");

    Fig4Args f4_args;
    auto* f4 = app.add_subcommand(
        "fig4", "effective-gain table for per-ACK sub-reductions, as CSV");
    f4->add_option("--out", f4_args.out_file, "output CSV (default fig4.csv)");
    f4->add_option("--gains", f4_args.gains, "G values");
    f4->add_option("--n", f4_args.ns, "sub-reduction counts");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1; // all CLI misuse maps to the validation exit code
    }

    try {
        if (run->parsed())
            return cmd_run(run_args);
        if (ab->parsed())
            return cmd_ab(ab_args);
        if (f3->parsed())
            return cmd_fig3(f3_args);
        if (f4->parsed())
            return cmd_fig4(f4_args);
        std::cout << app.help();
        return 0;
    } catch (const ScenarioError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return 2;
    }
}
