#include "acklab/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace acklab {

uint64_t AppLimit::effective_window(uint64_t cwnd) const
{
    switch (kind) {
    case Kind::none:
        return cwnd;
    case Kind::fixed:
        return std::min(cwnd, fixed_pkts);
    case Kind::cwnd_frac: {
        uint64_t lim = cwnd * frac_num / frac_den;
        return std::min(cwnd, lim ? lim : 1); // keep at least one packet moving
    }
    }
    return cwnd;
}

uint64_t Scenario::bdp_pkts() const
{
    return link_rate_pps * uint64_t(base_rtt_us) / 1000000;
}

namespace {

[[noreturn]] void fail(int line, const std::string& msg)
{
    throw ScenarioError("line " + std::to_string(line) + ": " + msg);
}

std::string trim(const std::string& s)
{
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

uint64_t parse_u64(int line, const std::string& key, const std::string& v)
{
    uint64_t out = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || p != v.data() + v.size())
        fail(line, key + ": expected a nonnegative integer, got '" + v + "'");
    return out;
}

bool parse_bool(int line, const std::string& key, const std::string& v)
{
    if (v == "true" || v == "1")
        return true;
    if (v == "false" || v == "0")
        return false;
    fail(line, key + ": expected true/false, got '" + v + "'");
}

AppLimit parse_app_limit(int line, const std::string& v)
{
    AppLimit a;
    if (v == "none")
        return a;
    if (v.rfind("fixed:", 0) == 0) {
        a.kind = AppLimit::Kind::fixed;
        a.fixed_pkts = parse_u64(line, "app_limit", v.substr(6));
        if (a.fixed_pkts == 0)
            fail(line, "app_limit: fixed limit must be >= 1");
        return a;
    }
    if (v.rfind("cwnd_frac:", 0) == 0) {
        std::string frac = v.substr(10);
        size_t slash = frac.find('/');
        if (slash == std::string::npos)
            fail(line, "app_limit: cwnd_frac needs the form cwnd_frac:N/D");
        a.kind = AppLimit::Kind::cwnd_frac;
        a.frac_num = parse_u64(line, "app_limit", frac.substr(0, slash));
        a.frac_den = parse_u64(line, "app_limit", frac.substr(slash + 1));
        if (a.frac_num == 0 || a.frac_den == 0 || a.frac_num > a.frac_den)
            fail(line, "app_limit: cwnd_frac must satisfy 1 <= N <= D");
        return a;
    }
    fail(line, "app_limit: expected none, fixed:<pkts> or cwnd_frac:N/D, got '" + v + "'");
}

struct Seen {
    bool link_rate = false, base_rtt = false, mark_threshold = false, buffer_cap = false;
    bool duration = false, sample_interval = false;
};

} // namespace

Scenario parse_scenario(const std::string& text)
{
    Scenario s;
    Seen seen;
    enum class Section { global, flow, event } section = Section::global;
    FlowSpec* flow = nullptr;
    CapacityEvent* event = nullptr;

    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string l = raw;
        size_t hash = l.find_first_of("#;");
        if (hash != std::string::npos)
            l = l.substr(0, hash);
        l = trim(l);
        if (l.empty())
            continue;

        if (l.front() == '[') {
            if (l == "[flow]") {
                section = Section::flow;
                s.flows.emplace_back();
                flow = &s.flows.back();
            } else if (l == "[event]") {
                section = Section::event;
                s.events.emplace_back();
                event = &s.events.back();
            } else {
                fail(line, "unknown section '" + l + "' (expected [flow] or [event])");
            }
            continue;
        }

        size_t eq = l.find('=');
        if (eq == std::string::npos)
            fail(line, "expected 'key = value', got '" + l + "'");
        std::string key = trim(l.substr(0, eq));
        std::string val = trim(l.substr(eq + 1));
        if (key.empty() || val.empty())
            fail(line, "expected 'key = value', got '" + l + "'");

        if (key == "scale_reduction_by_cwnd_flight")
            fail(line, "scale_reduction_by_cwnd_flight is recognized but not implemented");

        if (section == Section::global) {
            if (key == "link_rate") {
                s.link_rate_pps = parse_u64(line, key, val);
                if (s.link_rate_pps == 0)
                    fail(line, "link_rate must be > 0");
                seen.link_rate = true;
            } else if (key == "base_rtt") {
                s.base_rtt_us = int64_t(parse_u64(line, key, val));
                if (s.base_rtt_us == 0)
                    fail(line, "base_rtt must be > 0");
                seen.base_rtt = true;
            } else if (key == "mark_threshold") {
                s.mark_threshold = parse_u64(line, key, val);
                if (s.mark_threshold == 0)
                    fail(line, "mark_threshold must be >= 1");
                seen.mark_threshold = true;
            } else if (key == "buffer_cap") {
                s.buffer_cap = parse_u64(line, key, val);
                if (s.buffer_cap == 0)
                    fail(line, "buffer_cap must be >= 1");
                seen.buffer_cap = true;
            } else if (key == "ack_ratio") {
                s.ack_ratio = parse_u64(line, key, val);
                if (s.ack_ratio == 0)
                    fail(line, "ack_ratio must be >= 1");
            } else if (key == "ack_on_ce") {
                s.ack_on_ce = parse_bool(line, key, val);
            } else if (key == "G") {
                s.gain_recip = parse_u64(line, key, val);
                if (!valid_gain_recip(s.gain_recip))
                    fail(line, "G must be a power of two in [2, 64]");
            } else if (key == "min_cwnd") {
                s.min_cwnd = parse_u64(line, key, val);
                if (s.min_cwnd == 0)
                    fail(line, "min_cwnd must be >= 1");
            } else if (key == "ewma_init") {
                if (val == "cwnd_G")
                    s.ewma_init = InitPolicy::cwnd_times_g;
                else if (val == "flight_G")
                    s.ewma_init = InitPolicy::flight_times_g;
                else
                    fail(line, "ewma_init: expected cwnd_G or flight_G, got '" + val + "'");
            } else if (key == "alpha_floor") {
                s.alpha_floor = parse_bool(line, key, val);
            } else if (key == "tracker") {
                if (val == "alt1")
                    s.tracker = TrackerKind::alt1;
                else if (val == "alt2")
                    s.tracker = TrackerKind::alt2;
                else
                    fail(line, "tracker: expected alt1 or alt2, got '" + val + "'");
            } else if (key == "G2") {
                s.tracker_g2 = parse_u64(line, key, val);
                if (s.tracker_g2 == 0)
                    fail(line, "G2 must be >= 1");
            } else if (key == "duration") {
                s.duration_us = int64_t(parse_u64(line, key, val));
                if (s.duration_us == 0)
                    fail(line, "duration must be > 0");
                seen.duration = true;
            } else if (key == "sample_interval") {
                s.sample_interval_us = int64_t(parse_u64(line, key, val));
                if (s.sample_interval_us == 0)
                    fail(line, "sample_interval must be > 0");
                seen.sample_interval = true;
            } else {
                fail(line, "unknown key '" + key + "'");
            }
        } else if (section == Section::flow) {
            if (key == "start_time") {
                flow->start_time_us = int64_t(parse_u64(line, key, val));
            } else if (key == "variant") {
                auto v = variant_from_name(val);
                if (!v)
                    fail(line, "unknown variant name '" + val +
                                   "' (expected proposed_aimd, stage_a, dctcp_baseline, "
                                   "prague_baseline or fixed_cwnd)");
                flow->variant = *v;
            } else if (key == "init_cwnd") {
                flow->init_cwnd = parse_u64(line, key, val);
                if (flow->init_cwnd == 0)
                    fail(line, "init_cwnd must be >= 1");
            } else if (key == "app_limit") {
                flow->app_limit = parse_app_limit(line, val);
            } else {
                fail(line, "unknown key '" + key + "' in [flow] section");
            }
        } else {
            if (key == "time") {
                event->time_us = int64_t(parse_u64(line, key, val));
            } else if (key == "link_rate") {
                event->link_rate_pps = parse_u64(line, key, val);
                if (event->link_rate_pps == 0)
                    fail(line, "event link_rate must be > 0");
            } else {
                fail(line, "unknown key '" + key + "' in [event] section");
            }
        }
    }

    if (!seen.link_rate)
        throw ScenarioError("missing link_rate");
    if (!seen.base_rtt)
        throw ScenarioError("missing base_rtt");
    if (s.flows.empty())
        throw ScenarioError("scenario needs at least one [flow] section");

    uint64_t bdp = s.bdp_pkts();
    if (!seen.mark_threshold)
        s.mark_threshold = std::max<uint64_t>(4, (17 * bdp + 99) / 100); // ceil(0.17 * BDP)
    if (!seen.buffer_cap)
        s.buffer_cap = std::max<uint64_t>(4 * s.mark_threshold, 2 * bdp);
    if (!seen.duration)
        s.duration_us = 2000000;
    if (!seen.sample_interval)
        s.sample_interval_us = std::max<int64_t>(100, s.base_rtt_us / 4);

    if (s.mark_threshold > s.buffer_cap)
        throw ScenarioError("mark_threshold must be <= buffer_cap");

    for (auto& f : s.flows) {
        if (f.init_cwnd == 0)
            f.init_cwnd = std::max<uint64_t>(s.min_cwnd, bdp);
        if (f.init_cwnd < s.min_cwnd)
            throw ScenarioError("init_cwnd must be >= min_cwnd");
        if (f.start_time_us >= s.duration_us)
            throw ScenarioError("flow start_time must be before the scenario ends");
    }
    for (const auto& e : s.events) {
        if (e.link_rate_pps == 0)
            throw ScenarioError("[event] sections need a link_rate");
        if (e.time_us >= s.duration_us)
            throw ScenarioError("event time must be before the scenario ends");
    }
    if (!std::is_sorted(s.events.begin(), s.events.end(),
                        [](const CapacityEvent& a, const CapacityEvent& b) {
                            return a.time_us < b.time_us;
                        }))
        throw ScenarioError("[event] sections must be sorted by time");

    return s;
}

namespace {

const char* app_limit_str(const AppLimit& a, std::string& buf)
{
    switch (a.kind) {
    case AppLimit::Kind::none:
        return "none";
    case AppLimit::Kind::fixed:
        buf = "fixed:" + std::to_string(a.fixed_pkts);
        return buf.c_str();
    case AppLimit::Kind::cwnd_frac:
        buf = "cwnd_frac:" + std::to_string(a.frac_num) + "/" + std::to_string(a.frac_den);
        return buf.c_str();
    }
    return "none";
}

} // namespace

std::string print_scenario(const Scenario& s)
{
    std::ostringstream out;
    out << "link_rate = " << s.link_rate_pps << "\n";
    out << "base_rtt = " << s.base_rtt_us << "\n";
    out << "mark_threshold = " << s.mark_threshold << "\n";
    out << "buffer_cap = " << s.buffer_cap << "\n";
    out << "ack_ratio = " << s.ack_ratio << "\n";
    out << "ack_on_ce = " << (s.ack_on_ce ? "true" : "false") << "\n";
    out << "G = " << s.gain_recip << "\n";
    out << "min_cwnd = " << s.min_cwnd << "\n";
    out << "ewma_init = "
        << (s.ewma_init == InitPolicy::cwnd_times_g ? "cwnd_G" : "flight_G") << "\n";
    out << "alpha_floor = " << (s.alpha_floor ? "true" : "false") << "\n";
    out << "tracker = " << (s.tracker == TrackerKind::alt1 ? "alt1" : "alt2") << "\n";
    out << "G2 = " << s.tracker_g2 << "\n";
    out << "duration = " << s.duration_us << "\n";
    out << "sample_interval = " << s.sample_interval_us << "\n";
    std::string buf;
    for (const auto& f : s.flows) {
        out << "[flow]\n";
        out << "start_time = " << f.start_time_us << "\n";
        out << "variant = " << variant_name(f.variant) << "\n";
        out << "init_cwnd = " << f.init_cwnd << "\n";
        out << "app_limit = " << app_limit_str(f.app_limit, buf) << "\n";
    }
    for (const auto& e : s.events) {
        out << "[event]\n";
        out << "time = " << e.time_us << "\n";
        out << "link_rate = " << e.link_rate_pps << "\n";
    }
    return out.str();
}

} // namespace acklab
