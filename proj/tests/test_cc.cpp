#include <doctest.h>

#include <cstdint>
#include <memory>
#include <vector>

#include "acklab/cc.hpp"

using namespace acklab;

namespace {

uint64_t splitmix64(uint64_t& x)
{
    x += 0x9E3779B97F4A7C15ULL;
    uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Per-packet-ACK script driver with a pinned acks_ value and a window that
// stays one flight ahead of the cumulative ack point.
struct Script {
    CcController cc;
    uint64_t una = 0;
    uint64_t flight;

    Script(const CcConfig& cfg, uint64_t flight_pkts, uint64_t acks)
        : cc(cfg, std::make_unique<ConstantTracker>(acks)), flight(flight_pkts)
    {
    }

    void ack(uint64_t ce)
    {
        AckEvent e;
        e.covered_pkts = 1;
        e.ce_fb = ce;
        e.latest_covered_seq = una;
        e.snd_una = ++una;
        cc.on_ack(e, una + flight, flight);
    }
};

CcConfig proposed_cfg(uint64_t init_cwnd)
{
    CcConfig cfg;
    cfg.variant = Variant::proposed_aimd;
    cfg.gain_recip = 16;
    cfg.init_cwnd = init_cwnd;
    return cfg;
}

} // namespace

TEST_CASE("markless rounds grow the window by exactly one packet")
{
    Script s(proposed_cfg(40), 40, 20);
    REQUIRE(s.cc.cwnd() == 40);
    for (int k = 0; k < 19; ++k)
        s.ack(0);
    CHECK(s.cc.cwnd() == 40); // 19 * 32 = 608 of 640 deposited, nothing released
    s.ack(0);
    CHECK(s.cc.cwnd() == 41); // the 20th deposit completes the round

    for (int round = 0; round < 99; ++round)
        for (int k = 0; k < 20; ++k)
            s.ack(0);
    CHECK(s.cc.cwnd() == 140); // 100 rounds, +100, residue never drifts
}

TEST_CASE("first marked ACK enters CWR and the decrease starts immediately")
{
    Script s(proposed_cfg(64), 64, 64);
    s.ack(1);
    CHECK(s.cc.in_cwr());
    CHECK(s.cc.cwr_round_end() == 1 + 64); // snd_next at the marked ACK
    // the EWMA seeds at cwnd*G = 1024; this ACK's decrease step consumed it
    CHECK(s.cc.perack()->raw() == 1024);
    CHECK(s.cc.cwnd_carry().rem[1] == 1024 % (64 * 32));
    CHECK(s.cc.total_ai_increase() == 0); // feedback thins the increase away

    // a full CWR round at this level removes about half the window
    for (int k = 0; k < 63; ++k)
        s.ack(0);
    CHECK(!s.cc.in_cwr()); // the ack point crossed the snapshot
    CHECK(s.cc.cwnd() >= 30);
    CHECK(s.cc.cwnd() <= 36);
}

TEST_CASE("marked ACK during CWR does MD but never AI")
{
    Script s(proposed_cfg(32), 32, 32);
    s.ack(1); // enter CWR
    uint64_t ai_before = s.cc.total_ai_increase();
    uint64_t rem1_before = s.cc.cwnd_carry().rem[1];
    s.ack(1); // tie case: feedback while reducing
    CHECK(s.cc.total_ai_increase() == ai_before);
    CHECK(s.cc.cwnd_carry().rem[1] != rem1_before); // the MD side moved
    CHECK(s.cc.in_cwr());
}

TEST_CASE("the ACK that ends CWR performs no decrease")
{
    Script s(proposed_cfg(8), 4, 4);
    s.ack(1); // enter CWR; next_seq = una + 4
    uint64_t md_steps_end = s.cc.total_md_decrease();
    for (int k = 0; k < 3; ++k)
        s.ack(0); // still inside the round: AI and MD both run
    CHECK(s.cc.in_cwr());
    md_steps_end = s.cc.total_md_decrease();
    uint64_t rem0_before = s.cc.cwnd_carry().rem[0];
    s.ack(0); // crosses next_seq
    CHECK(!s.cc.in_cwr());
    CHECK(s.cc.total_md_decrease() == md_steps_end); // no decrease on the exit ACK
    // but the increase side ran: the carry's last write was the AI deposit
    CHECK(s.cc.cwnd_carry().rem[0] == (rem0_before + 32) % 128);
}

TEST_CASE("CWR spans one round of ACKs")
{
    Script s(proposed_cfg(30), 30, 30);
    for (int k = 0; k < 30; ++k)
        s.ack(0); // settle
    s.ack(1);     // entry
    int in_cwr_acks = 1;
    while (s.cc.in_cwr()) {
        s.ack(0);
        if (s.cc.in_cwr())
            ++in_cwr_acks;
    }
    CHECK(in_cwr_acks >= 29);
    CHECK(in_cwr_acks <= 31);
}

TEST_CASE("cwnd never falls below the minimum")
{
    Script s(proposed_cfg(4), 4, 4);
    for (int k = 0; k < 200; ++k)
        s.ack(1); // relentless feedback
    CHECK(s.cc.cwnd() == 2);
    CHECK(s.cc.clamp_events() > 0);
}

TEST_CASE("stage_a reduces once and then holds for a round")
{
    CcConfig cfg;
    cfg.variant = Variant::stage_a;
    cfg.gain_recip = 16;
    cfg.init_cwnd = 4;
    Script s(cfg, 20, 20);
    // seed is cwnd*G = 64 and the marked update adds 1
    s.ack(1);
    CHECK(s.cc.cwnd() == 2); // one shot of floor(65/32) = 2
    CHECK(s.cc.in_cwr());
    uint64_t md_after_entry = s.cc.total_md_decrease();
    s.ack(1); // suppressed: no second reduction inside the round
    s.ack(1);
    CHECK(s.cc.total_md_decrease() == md_after_entry);
}

TEST_CASE("stage_a first-ever mark cuts the window in half")
{
    CcConfig cfg;
    cfg.variant = Variant::stage_a;
    cfg.gain_recip = 16;
    cfg.init_cwnd = 64;
    Script s(cfg, 64, 64);
    s.ack(1); // seed av = 64*16, decay releases exactly 1, ce adds it back
    CHECK(s.cc.cwnd() == 32);
}

TEST_CASE("dctcp baseline cuts by alpha/2 of the window, once per round")
{
    CcConfig cfg;
    cfg.variant = Variant::dctcp_baseline;
    cfg.gain_recip = 16;
    cfg.init_cwnd = 64;
    Script s(cfg, 10, 10);
    // round 1: fully marked; the immediate response is empty (alpha still 0)
    for (int k = 0; k < 10; ++k)
        s.ack(1);
    CHECK(s.cc.cwnd() == 64);
    CHECK(s.cc.in_cwr());
    // round 2 starts: alpha has picked up F=1 -> 1/16, and a fresh mark
    // right after CWR ends cuts floor(0.0625/2 * 64) = 2
    s.ack(1);
    CHECK(s.cc.perrtt()->alpha() == doctest::Approx(0.0625));
    CHECK(s.cc.cwnd() == 62);
}

TEST_CASE("floored baseline responds at 15/1024 even from a cold average")
{
    CcConfig cfg;
    cfg.variant = Variant::dctcp_baseline;
    cfg.alpha_floor = true;
    cfg.gain_recip = 16;
    cfg.init_cwnd = 1024;
    Script s(cfg, 16, 16);
    s.ack(1); // alpha is 0, but the floored response is floor(15/2048 * 1024) = 7
    CHECK(s.cc.cwnd() == 1024 - 7);
}

TEST_CASE("prague baseline keeps increasing through CWR, dctcp does not")
{
    for (Variant v : {Variant::dctcp_baseline, Variant::prague_baseline}) {
        CcConfig cfg;
        cfg.variant = v;
        cfg.gain_recip = 16;
        cfg.init_cwnd = 32;
        Script s(cfg, 16, 16);
        s.ack(1); // enter CWR
        REQUIRE(s.cc.in_cwr());
        uint64_t ai_before = s.cc.total_ai_increase();
        uint64_t rem0_before = s.cc.cwnd_carry().rem[0];
        for (int k = 0; k < 8; ++k)
            s.ack(0);
        bool increased = s.cc.total_ai_increase() > ai_before ||
                         s.cc.cwnd_carry().rem[0] != rem0_before;
        if (v == Variant::prague_baseline)
            CHECK(increased);
        else
            CHECK(!increased);
    }
}

TEST_CASE("stronger sustained feedback never shrinks the response")
{
    auto md_per_round = [](uint64_t marks) {
        CcConfig cfg = proposed_cfg(256);
        Script s(cfg, 32, 32);
        uint64_t md_at_warmup = 0;
        const int warmup = 100, measure = 300;
        for (int round = 0; round < warmup + measure; ++round) {
            if (round == warmup)
                md_at_warmup = s.cc.total_md_decrease();
            for (uint64_t k = 0; k < 32; ++k)
                s.ack(k < marks ? 1 : 0);
            s.cc.override_cwnd(256); // hold the operating point still
        }
        return double(s.cc.total_md_decrease() - md_at_warmup) / measure;
    };
    double prev = -1.0;
    for (uint64_t marks : {0, 1, 2, 4, 8, 16}) {
        double md = md_per_round(marks);
        CHECK(md >= prev - 1e-9);
        prev = md;
    }
}

TEST_CASE("app-limited flows respond in proportion to what they used")
{
    // both variants see the same per-packet mark pattern at flight = cwnd/4;
    // the proposed response scales with flight, the baseline with cwnd
    auto mean_md = [](Variant v) {
        CcConfig cfg;
        cfg.variant = v;
        cfg.gain_recip = 16;
        cfg.init_cwnd = 64;
        Script s(cfg, 16, 16); // flight pinned at cwnd/4
        uint64_t rng = 7;
        uint64_t md_at_warmup = 0;
        const int warmup = 500, measure = 2500;
        for (int round = 0; round < warmup + measure; ++round) {
            if (round == warmup)
                md_at_warmup = s.cc.total_md_decrease();
            for (int k = 0; k < 16; ++k)
                s.ack(splitmix64(rng) % 8 == 0 ? 1 : 0); // p = 1/8 per packet
            s.cc.override_cwnd(64);
        }
        return double(s.cc.total_md_decrease() - md_at_warmup) / measure;
    };
    double proposed = mean_md(Variant::proposed_aimd);
    double baseline = mean_md(Variant::dctcp_baseline);
    REQUIRE(baseline > 0.0);
    double ratio = proposed / baseline;
    CHECK(ratio >= 0.15);
    CHECK(ratio <= 0.35);
}

TEST_CASE("fixed-cwnd diagnostic variant ignores feedback")
{
    CcConfig cfg;
    cfg.variant = Variant::fixed_cwnd;
    cfg.init_cwnd = 10;
    Script s(cfg, 10, 10);
    for (int k = 0; k < 100; ++k)
        s.ack(k % 3 == 0 ? 1 : 0);
    CHECK(s.cc.cwnd() == 10);
}

TEST_CASE("variant names round-trip")
{
    for (Variant v : {Variant::proposed_aimd, Variant::stage_a, Variant::dctcp_baseline,
                      Variant::prague_baseline, Variant::fixed_cwnd})
        CHECK(variant_from_name(variant_name(v)) == v);
    CHECK(!variant_from_name("reno").has_value());
}
