#include "acklab/netsim.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <queue>
#include <stdexcept>

namespace acklab {

namespace {

uint64_t splitmix64(uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

int64_t serialization_us(uint64_t rate_pps)
{
    int64_t t = int64_t(std::llround(1e6 / double(rate_pps)));
    return t > 0 ? t : 1;
}

// Event ranks break timestamp ties; flow id then seq then a running serial
// break the rest, so the schedule never depends on heap internals.
enum class EvKind : uint8_t {
    capacity = 0,
    departure = 1,
    delivery = 2,
    ack = 3,
    flow_start = 4,
    sample = 5,
};

struct Event {
    int64_t time = 0;
    EvKind kind = EvKind::sample;
    uint32_t flow = 0;
    uint64_t seq = 0;
    uint64_t serial = 0;
    bool ce = false;       // delivery payload
    AckEvent ack;          // ack payload
    uint64_t new_rate = 0; // capacity payload
};

struct EventLater {
    bool operator()(const Event& a, const Event& b) const
    {
        auto key = [](const Event& e) {
            return std::tuple(e.time, uint8_t(e.kind), e.flow, e.seq, e.serial);
        };
        return key(a) > key(b);
    }
};

struct SenderPkt {
    uint64_t seq = 0;
    uint64_t stamp = 0; // 0 = sent before any ACK, no usable stamp
};

struct QueuedPkt {
    uint32_t flow = 0;
    uint64_t seq = 0;
};

struct FlowState {
    FlowSpec spec;
    std::unique_ptr<CcController> cc;
    std::unique_ptr<AckGenerator> ackgen;
    bool started = false;
    uint64_t snd_next = 0;
    uint64_t snd_una = 0;
    std::deque<SenderPkt> in_flight;
    uint64_t sent = 0;
    uint64_t delivered = 0;
    uint64_t cum_marks_fb = 0;
    uint64_t cum_acks = 0;
    uint64_t prev_cwnd = 0;
};

class Sim {
public:
    Sim(const Scenario& s, uint64_t seed) : sc_(s), seed_(seed) {}

    RunResult run();

private:
    void push(Event e)
    {
        e.serial = serial_++;
        pq_.push(e);
    }

    void settle_queue_integral(int64_t now)
    {
        q_integral_ += double(queue_.size()) * double(now - q_last_change_);
        q_last_change_ = now;
    }

    double queue_integral_at(int64_t t)
    {
        // queue length is constant between events, so settling at any time
        // up to the next event is exact
        return q_integral_ + double(queue_.size()) * double(t - q_last_change_);
    }

    void take_checkpoints(int64_t now);
    void check_conservation() const;
    void start_flow(uint32_t id, int64_t now);
    void release_sends(uint32_t id, int64_t now);
    void enqueue_packet(uint32_t flow, uint64_t seq, int64_t now);
    void on_departure(int64_t now);
    void on_delivery(const Event& ev);
    void on_ack(const Event& ev);
    void apply_capacity(uint64_t new_rate, int64_t now);
    void sample_all(int64_t now);
    void record_row(uint32_t id, int64_t now);
    void finish_summary();

    const Scenario& sc_;
    uint64_t seed_;
    std::priority_queue<Event, std::vector<Event>, EventLater> pq_;
    uint64_t serial_ = 0;
    std::vector<FlowState> flows_;
    std::deque<QueuedPkt> queue_;
    bool server_busy_ = false;
    int64_t tau_ = 0;
    int64_t d_data_ = 0; // propagation, queue to receiver
    int64_t d_ack_ = 0;  // propagation, receiver back to sender
    uint64_t in_prop_ = 0;
    uint64_t total_sent_ = 0;
    uint64_t total_delivered_ = 0;
    uint64_t total_dropped_ = 0;
    uint64_t max_queue_ = 0;
    double q_integral_ = 0.0;
    int64_t q_last_change_ = 0;
    double cap_pkts_ = 0.0;
    int64_t cap_seg_start_ = 0;
    // checkpoints around the congestion step and the steady-state window
    int64_t t0_ = -1;
    int64_t t_pre_ = -1;
    int64_t t_half_ = 0;
    double integ_at_pre_ = -1.0, integ_at_t0_ = -1.0, integ_at_half_ = -1.0;
    int64_t tau_before_t0_ = 0;
    uint64_t marks_at_half_ = 0;
    bool fb_captured_ = false;
    int64_t fb_time_ = -1;
    uint64_t cwnd_at_fb_ = 0;
    RunResult out_;
};

void Sim::take_checkpoints(int64_t now)
{
    if (t_pre_ >= 0 && integ_at_pre_ < 0 && now >= t_pre_)
        integ_at_pre_ = queue_integral_at(t_pre_);
    if (t0_ >= 0 && integ_at_t0_ < 0 && now >= t0_) {
        integ_at_t0_ = queue_integral_at(t0_);
        tau_before_t0_ = tau_;
    }
    if (integ_at_half_ < 0 && now >= t_half_) {
        integ_at_half_ = queue_integral_at(t_half_);
        marks_at_half_ = flows_.empty() ? 0 : flows_[0].cum_marks_fb;
    }
}

void Sim::check_conservation() const
{
    if (total_sent_ != total_dropped_ + queue_.size() + in_prop_ + total_delivered_)
        throw std::logic_error("netsim: packet conservation violated");
}

void Sim::record_row(uint32_t id, int64_t now)
{
    FlowState& f = flows_[id];
    MetricsRow r;
    r.time_us = now;
    r.flow = id;
    r.cwnd = f.cc->cwnd();
    r.flight = f.in_flight.size();
    r.ewma_is_int = f.cc->ewma_raw_is_integral();
    r.ewma_raw_i = f.cc->ewma_raw_int();
    r.ewma_raw_f = f.cc->ewma_raw_real();
    r.ewma_down = f.cc->ewma_downscaled();
    r.acks = f.cc->acks_per_round();
    r.queue_pkts = queue_.size();
    r.cum_marks = f.cum_marks_fb;
    r.cum_acks = f.cum_acks;
    r.cwr = f.cc->in_cwr();
    out_.rows.push_back(r);
}

void Sim::start_flow(uint32_t id, int64_t now)
{
    FlowState& f = flows_[id];
    f.started = true;
    f.prev_cwnd = f.cc->cwnd();
    release_sends(id, now);
    record_row(id, now);
}

void Sim::release_sends(uint32_t id, int64_t now)
{
    FlowState& f = flows_[id];
    uint64_t limit = f.spec.app_limit.effective_window(f.cc->cwnd());
    while (f.in_flight.size() < limit) {
        SenderPkt p;
        p.seq = f.snd_next++;
        p.stamp = f.cc->send_stamp(); // 0 until the first ACK has been processed
        f.in_flight.push_back(p);
        f.sent++;
        total_sent_++;
        enqueue_packet(id, p.seq, now);
    }
}

void Sim::enqueue_packet(uint32_t flow, uint64_t seq, int64_t now)
{
    if (queue_.size() >= sc_.buffer_cap) {
        total_dropped_++;
        out_.summary.drops++;
        return;
    }
    settle_queue_integral(now);
    queue_.push_back(QueuedPkt{flow, seq});
    max_queue_ = std::max<uint64_t>(max_queue_, queue_.size());
    if (!server_busy_) {
        server_busy_ = true;
        Event e;
        e.time = now + tau_;
        e.kind = EvKind::departure;
        push(e);
    }
}

void Sim::on_departure(int64_t now)
{
    settle_queue_integral(now);
    QueuedPkt pkt = queue_.front();
    queue_.pop_front();
    bool ce = step_mark(queue_.size(), sc_.mark_threshold);
    in_prop_++;

    if (!queue_.empty()) {
        Event next;
        next.time = now + tau_; // rate in effect at this service start
        next.kind = EvKind::departure;
        push(next);
    } else {
        server_busy_ = false;
    }

    Event del;
    del.time = now + d_data_;
    del.kind = EvKind::delivery;
    del.flow = pkt.flow;
    del.seq = pkt.seq;
    del.ce = ce;
    push(del);
}

void Sim::on_delivery(const Event& ev)
{
    FlowState& f = flows_[ev.flow];
    in_prop_--;
    f.delivered++;
    total_delivered_++;
    auto ackout = f.ackgen->on_delivery(ev.seq, ev.ce);
    if (!ackout)
        return;
    Event e;
    e.time = ev.time + d_ack_;
    e.kind = EvKind::ack;
    e.flow = ev.flow;
    e.seq = ackout->latest_covered_seq;
    e.ack.covered_pkts = ackout->covered_pkts;
    e.ack.ce_fb = ackout->ce_fb;
    e.ack.latest_covered_seq = ackout->latest_covered_seq;
    e.ack.snd_una = ackout->latest_covered_seq + 1;
    e.ack.arrival_time_us = e.time;
    push(e);
}

void Sim::on_ack(const Event& ev)
{
    FlowState& f = flows_[ev.flow];
    AckEvent ack = ev.ack;

    // cumulative coverage; a dropped packet below the ack point is flushed
    // here too, so flight stays coherent (the drop itself remains counted)
    SenderPkt latest{};
    bool popped = false;
    while (!f.in_flight.empty() && f.in_flight.front().seq <= ack.latest_covered_seq) {
        latest = f.in_flight.front();
        f.in_flight.pop_front();
        popped = true;
    }
    ack.has_stamp = popped && latest.stamp > 0;
    ack.latest_stamp = latest.stamp;
    f.snd_una = std::max(f.snd_una, ack.snd_una);
    f.cum_acks++;
    f.cum_marks_fb += ack.ce_fb;

    if (!fb_captured_ && ev.flow == 0 && t0_ >= 0 && ev.time >= t0_ && ack.ce_fb > 0) {
        fb_captured_ = true;
        fb_time_ = ev.time;
        cwnd_at_fb_ = f.cc->cwnd();
    }

    f.cc->on_ack(ack, f.snd_next, f.in_flight.size());
    release_sends(ev.flow, ev.time);
    if (f.cc->cwnd() != f.prev_cwnd) {
        f.prev_cwnd = f.cc->cwnd();
        record_row(ev.flow, ev.time);
    }
}

void Sim::apply_capacity(uint64_t new_rate, int64_t now)
{
    cap_pkts_ += double(now - cap_seg_start_) / double(tau_);
    cap_seg_start_ = now;
    tau_ = serialization_us(new_rate); // next service start picks this up
}

void Sim::sample_all(int64_t now)
{
    for (uint32_t id = 0; id < flows_.size(); ++id)
        if (flows_[id].started)
            record_row(id, now);
}

RunResult Sim::run()
{
    if (sc_.flows.empty())
        return std::move(out_); // nothing to schedule, empty series

    tau_ = serialization_us(sc_.link_rate_pps);
    d_data_ = sc_.base_rtt_us / 2;
    d_ack_ = sc_.base_rtt_us - d_data_;
    t_half_ = sc_.duration_us / 2;

    if (!sc_.events.empty())
        t0_ = sc_.events.front().time_us;
    else
        for (const auto& fs : sc_.flows)
            if (fs.start_time_us > 0 && (t0_ < 0 || fs.start_time_us < t0_))
                t0_ = fs.start_time_us;
    if (t0_ >= 0)
        t_pre_ = std::max<int64_t>(0, t0_ - 5 * sc_.base_rtt_us);
    tau_before_t0_ = tau_;

    flows_.reserve(sc_.flows.size());
    for (uint32_t id = 0; id < sc_.flows.size(); ++id) {
        const FlowSpec& spec = sc_.flows[id];
        FlowState f;
        f.spec = spec;
        CcConfig cfg;
        cfg.variant = spec.variant;
        cfg.gain_recip = sc_.gain_recip;
        cfg.min_cwnd = sc_.min_cwnd;
        cfg.init_cwnd = spec.init_cwnd;
        cfg.ewma_init = sc_.ewma_init;
        cfg.alpha_floor = sc_.alpha_floor;
        cfg.tracker = sc_.tracker;
        cfg.tracker_g2 = sc_.tracker_g2;
        cfg.initial_acks = std::max<uint64_t>(1, spec.init_cwnd / sc_.ack_ratio);
        f.cc = std::make_unique<CcController>(cfg);
        f.ackgen = std::make_unique<AckGenerator>(sc_.ack_ratio, sc_.ack_on_ce);
        flows_.push_back(std::move(f));

        // start-phase jitter, at most one serialization time
        int64_t jitter = int64_t(splitmix64(seed_ ^ (0x51D0F00DULL + id)) % uint64_t(tau_ + 1));
        Event e;
        e.time = spec.start_time_us + jitter;
        e.kind = EvKind::flow_start;
        e.flow = id;
        push(e);
    }

    for (const auto& ce : sc_.events) {
        Event e;
        e.time = ce.time_us;
        e.kind = EvKind::capacity;
        e.new_rate = ce.link_rate_pps;
        push(e);
    }
    for (int64_t t = 0; t <= sc_.duration_us; t += sc_.sample_interval_us) {
        Event e;
        e.time = t;
        e.kind = EvKind::sample;
        push(e);
    }

    while (!pq_.empty()) {
        Event ev = pq_.top();
        if (ev.time > sc_.duration_us)
            break;
        pq_.pop();
        take_checkpoints(ev.time);
        switch (ev.kind) {
        case EvKind::capacity:
            apply_capacity(ev.new_rate, ev.time);
            break;
        case EvKind::departure:
            on_departure(ev.time);
            break;
        case EvKind::delivery:
            on_delivery(ev);
            break;
        case EvKind::ack:
            on_ack(ev);
            break;
        case EvKind::flow_start:
            start_flow(ev.flow, ev.time);
            break;
        case EvKind::sample:
            sample_all(ev.time);
            break;
        }
        check_conservation();
    }

    take_checkpoints(sc_.duration_us);
    settle_queue_integral(sc_.duration_us);
    cap_pkts_ += double(sc_.duration_us - cap_seg_start_) / double(tau_);
    finish_summary();
    return std::move(out_);
}

void Sim::finish_summary()
{
    SummaryStats& sum = out_.summary;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    sum.step_time_us = t0_;
    sum.mean_queue = sc_.duration_us > 0 ? q_integral_ / double(sc_.duration_us) : 0.0;
    sum.max_queue = max_queue_;
    sum.utilization = cap_pkts_ > 0 ? double(total_delivered_) / cap_pkts_ : 0.0;

    for (const auto& f : flows_) {
        FlowSummary fs;
        fs.delivered = f.delivered;
        fs.marks_fed_back = f.cum_marks_fb;
        fs.acks_received = f.cum_acks;
        fs.final_cwnd = f.cc->cwnd();
        fs.clamp_events = f.cc->clamp_events();
        sum.clamp_events += fs.clamp_events;
        sum.flows.push_back(fs);
    }

    // steady-state marking of flow 0, measured over the last half of the run
    sum.mean_marks_per_round_steady = nan;
    if (!flows_.empty() && integ_at_half_ >= 0 && sc_.duration_us > t_half_) {
        double window = double(sc_.duration_us - t_half_);
        double mean_q = (q_integral_ - integ_at_half_) / window;
        double round = double(sc_.base_rtt_us) + (mean_q + 1.0) * double(tau_);
        double marks = double(flows_[0].cum_marks_fb - marks_at_half_);
        sum.mean_marks_per_round_steady = marks * round / window;
    }

    // lag metrics around the congestion step, for flow 0
    sum.rounds_to_first_reduction = nan;
    sum.rounds_to_50pct_reduction = nan;
    sum.first_fb_time_us = fb_time_;
    sum.cwnd_at_first_fb = cwnd_at_fb_;
    if (t0_ < 0 || !fb_captured_)
        return;

    double pre_window = double(t0_ - std::max<int64_t>(0, t0_ - 5 * sc_.base_rtt_us));
    double mean_q_pre = 0.0;
    if (pre_window > 0 && integ_at_pre_ >= 0 && integ_at_t0_ >= 0)
        mean_q_pre = (integ_at_t0_ - integ_at_pre_) / pre_window;
    double round = double(sc_.base_rtt_us) + (mean_q_pre + 1.0) * double(tau_before_t0_);
    sum.round_us = round;

    int64_t settle_t = fb_time_ + int64_t(std::llround(10.0 * round));
    uint64_t cwnd_settled = cwnd_at_fb_;
    for (const auto& r : out_.rows)
        if (r.flow == 0 && r.time_us <= settle_t)
            cwnd_settled = r.cwnd;
        else if (r.time_us > settle_t)
            break;
    sum.cwnd_settled = cwnd_settled;
    if (cwnd_settled >= cwnd_at_fb_)
        return; // no net reduction; lag is undefined for this run

    double total_red = double(cwnd_at_fb_ - cwnd_settled);
    double half_level = double(cwnd_at_fb_) - 0.5 * total_red;
    bool got_first = false, got_half = false;
    for (const auto& r : out_.rows) {
        if (r.flow != 0 || r.time_us < fb_time_)
            continue;
        if (!got_first && r.cwnd < cwnd_at_fb_) {
            got_first = true;
            sum.rounds_to_first_reduction = double(r.time_us - fb_time_) / round;
        }
        if (!got_half && double(r.cwnd) <= half_level) {
            got_half = true;
            sum.rounds_to_50pct_reduction = double(r.time_us - fb_time_) / round;
            break;
        }
    }
}

} // namespace

RunResult run_scenario(const Scenario& s, uint64_t seed)
{
    Sim sim(s, seed);
    return sim.run();
}

} // namespace acklab
