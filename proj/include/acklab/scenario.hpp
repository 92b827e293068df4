#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "acklab/ack_tracker.hpp"
#include "acklab/cc.hpp"
#include "acklab/ewma.hpp"

namespace acklab {

// Cap on packets a flow may keep outstanding, below its window.
struct AppLimit {
    enum class Kind { none, fixed, cwnd_frac } kind = Kind::none;
    uint64_t fixed_pkts = 0;
    uint64_t frac_num = 1;
    uint64_t frac_den = 1;

    uint64_t effective_window(uint64_t cwnd) const;
    bool operator==(const AppLimit&) const = default;
};

struct FlowSpec {
    int64_t start_time_us = 0;
    Variant variant = Variant::proposed_aimd;
    uint64_t init_cwnd = 0; // 0 until defaults are applied
    AppLimit app_limit;
    bool operator==(const FlowSpec&) const = default;
};

struct CapacityEvent {
    int64_t time_us = 0;
    uint64_t link_rate_pps = 0;
    bool operator==(const CapacityEvent&) const = default;
};

// A fully validated simulation setup. parse_scenario always returns one
// with every default filled in, so printing and re-parsing is lossless.
struct Scenario {
    uint64_t link_rate_pps = 0;
    int64_t base_rtt_us = 0;
    uint64_t mark_threshold = 0; // step-marking threshold K, packets
    uint64_t buffer_cap = 0;     // queue capacity, packets
    uint64_t ack_ratio = 1;      // packets per ACK
    bool ack_on_ce = false;      // CE receipt flushes an immediate ACK
    uint64_t gain_recip = 16;    // G
    uint64_t min_cwnd = 2;
    InitPolicy ewma_init = InitPolicy::cwnd_times_g;
    bool alpha_floor = false; // dctcp_baseline responds no lower than 15/1024
    TrackerKind tracker = TrackerKind::alt1;
    uint64_t tracker_g2 = 32;
    int64_t duration_us = 0;
    int64_t sample_interval_us = 0;
    std::vector<FlowSpec> flows;
    std::vector<CapacityEvent> events;

    uint64_t bdp_pkts() const;
    bool operator==(const Scenario&) const = default;
};

// Parse/validation failure; the message names the offending line when the
// error is tied to one.
class ScenarioError : public std::runtime_error {
public:
    explicit ScenarioError(const std::string& what) : std::runtime_error(what) {}
};

// Line-based `key = value` document with repeated [flow] and [event]
// sections. Unknown keys are hard errors. See README for the key table.
Scenario parse_scenario(const std::string& text);

std::string print_scenario(const Scenario& s);

} // namespace acklab
