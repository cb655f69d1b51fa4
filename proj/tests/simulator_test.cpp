#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "ehnet/simulator.hpp"
#include "test_support.hpp"

using namespace ehnet;
using ehnet::testing::canonical;

namespace {

// Draws that fail every Bernoulli event with probability < 1.
SlotDraws no_events() {
    SlotDraws u;
    u.fill(0.999999);
    return u;
}

}  // namespace

TEST(Step, CollisionConsumesEnergyAndMovesNothing) {
    const auto p = canonical();
    SimState s{2, 1, 1, 1, 0};
    auto u = no_events();
    u[kDrawSourceTx] = 0.0;
    u[kDrawRelayTx] = 0.0;
    u[kDrawSourceToDest] = 0.0;
    u[kDrawRelayToDest] = 0.0;
    auto [next, o] = step(s, p, Mode::Original, u);
    EXPECT_TRUE(o.collision);
    EXPECT_FALSE(o.s_to_d || o.s_to_r || o.r_to_d);
    EXPECT_EQ(next.q_s, 2u);
    EXPECT_EQ(next.q_r, 1u);
    EXPECT_EQ(next.b_s, 0u);
    EXPECT_EQ(next.b_r, 0u);
    EXPECT_EQ(next.slot, 1u);
}

TEST(Step, DirectDelivery) {
    SimState s{1, 0, 1, 5, 0};
    auto u = no_events();
    u[kDrawSourceTx] = 0.0;
    u[kDrawSourceToDest] = 0.1;
    auto [next, o] = step(s, canonical(), Mode::Original, u);
    EXPECT_TRUE(o.s_to_d);
    EXPECT_FALSE(o.s_to_r);
    EXPECT_EQ(next.q_s, 0u);
    EXPECT_EQ(next.b_s, 0u);
    EXPECT_EQ(next.b_r, 5u);
}

TEST(Step, RelayHandover) {
    SimState s{1, 0, 1, 5, 0};
    auto u = no_events();
    u[kDrawSourceTx] = 0.0;
    u[kDrawSourceToDest] = 0.9;  // D fails
    u[kDrawSourceToRelay] = 0.1;  // R decodes
    auto [next, o] = step(s, canonical(), Mode::Original, u);
    EXPECT_TRUE(o.s_to_r);
    EXPECT_FALSE(o.s_to_d);
    EXPECT_EQ(next.q_s, 0u);
    EXPECT_EQ(next.q_r, 1u);
}

TEST(Step, ActiveRelayOverhearsWhenItsCoinSaysNo) {
    SimState s{1, 3, 1, 3, 0};
    auto u = no_events();
    u[kDrawSourceTx] = 0.0;
    u[kDrawRelayTx] = 0.9;  // q_r = 0.5: relay stays silent
    u[kDrawSourceToDest] = 0.9;
    u[kDrawSourceToRelay] = 0.1;
    auto [next, o] = step(s, canonical(), Mode::Original, u);
    EXPECT_TRUE(o.s_to_r);
    EXPECT_EQ(next.q_r, 4u);
    EXPECT_EQ(next.b_r, 3u);  // reception is free
}

TEST(Step, NoEnergyNoTransmission) {
    SimState s{4, 0, 0, 0, 0};
    auto u = no_events();
    u[kDrawSourceTx] = 0.0;
    auto [next, o] = step(s, canonical(), Mode::Original, u);
    EXPECT_FALSE(o.s_transmitted);
    EXPECT_EQ(next.q_s, 4u);
}

TEST(Step, ArrivalsAndHarvestsLandAfterService) {
    auto p = canonical(0.5, 0.5);
    SimState s{0, 0, 0, 0, 0};
    SlotDraws u;
    u.fill(0.0);
    auto [next, o] = step(s, p, Mode::Original, u);
    EXPECT_FALSE(o.s_transmitted || o.r_transmitted);
    EXPECT_TRUE(o.s_pkt_arrival && o.r_pkt_arrival && o.s_harvest && o.r_harvest);
    EXPECT_EQ(next, (SimState{1, 1, 1, 1, 1}));
}

TEST(Step, DummyAndBacklogModes) {
    SimState s{0, 0, 1, 1, 0};
    auto u = no_events();
    u[kDrawSourceTx] = 0.0;
    u[kDrawSourceToDest] = 0.0;

    auto [n1, o1] = step(s, canonical(), Mode::Original, u);
    EXPECT_FALSE(o1.s_transmitted);

    auto [n2, o2] = step(s, canonical(), Mode::DomSource, u);
    EXPECT_TRUE(o2.s_transmitted && o2.s_dummy);
    EXPECT_FALSE(o2.s_to_d);  // dummies deliver nothing
    EXPECT_EQ(n2.b_s, 0u);

    auto [n3, o3] = step(s, canonical(), Mode::Saturated, u);
    EXPECT_TRUE(o3.s_transmitted && o3.s_injected && o3.s_to_d);
    EXPECT_FALSE(o3.s_dummy);
    EXPECT_EQ(n3.q_s, 0u);

    u = no_events();
    u[kDrawRelayTx] = 0.0;
    auto [n4, o4] = step(s, canonical(), Mode::DomRelay, u);
    EXPECT_TRUE(o4.r_transmitted && o4.r_dummy);
    EXPECT_EQ(n4.b_r, 0u);
}

TEST(Run, NoArrivalsMeansNoDepartures) {
    const auto st = run(canonical(), Mode::Original, 77, 10'000, 100);
    EXPECT_EQ(st.s_departures, 0u);
    EXPECT_EQ(st.r_departures, 0u);
    EXPECT_EQ(st.final_state.q_s, 0u);
    EXPECT_EQ(st.final_state.q_r, 0u);
    EXPECT_EQ(st.queue_trace.size(), 100u);
}

TEST(Run, FullEnergyAlwaysCollides) {
    auto p = canonical();
    p.delta_s = p.delta_r = p.q_s = p.q_r = 1.0;
    const auto st = run(p, Mode::Saturated, 1, 1000, 10);
    EXPECT_EQ(st.collisions, 999u);  // batteries are empty in slot 0
    EXPECT_EQ(st.s_departures + st.r_departures, 0u);
}

TEST(Run, Deterministic) {
    const auto p = canonical(0.15, 0.05);
    EXPECT_EQ(run(p, Mode::Original, 9, 50'000, 7), run(p, Mode::Original, 9, 50'000, 7));
    EXPECT_NE(run(p, Mode::Original, 9, 50'000, 7), run(p, Mode::Original, 10, 50'000, 7));
}

TEST(Run, RejectsBadArguments) {
    EXPECT_THROW(run(canonical(), Mode::Original, 1, 0, 1), std::invalid_argument);
    EXPECT_THROW(run(canonical(), Mode::Original, 1, 10, 0), std::invalid_argument);
}

TEST(Run, SaturatedThroughputMatchesClosedForm) {
    const auto e = empirical_rates(run(canonical(), Mode::Saturated, 2024, 1'000'000, 1000));
    EXPECT_NEAR(e.rates.mu_s, 0.245, 0.01);
    EXPECT_NEAR(e.rates.mu_r, 0.12, 0.01);
}

TEST(Run, SaturatedBatteryOccupancy) {
    auto p = canonical();
    p.delta_s = 0.3;
    p.q_s = 0.6;
    const auto e = empirical_rates(run(p, Mode::Saturated, 5, 1'000'000, 1000));
    EXPECT_NEAR(e.s_battery_fraction, 0.5, 0.005);
    EXPECT_NEAR(e.r_battery_fraction, 0.6, 0.005);  // delta_r/q_r = 0.3/0.5
}

TEST(Run, DomSourceBackloggedRelayServesAtSaturatedRate) {
    const auto e = empirical_rates(run(canonical(0.1, 1.0), Mode::DomSource, 6, 1'000'000, 1000));
    EXPECT_NEAR(e.rates.mu_r, 0.12, 0.01);
}

// Per-slot invariants over random parameters and all modes.
TEST(Run, SlotInvariantsHoldEverywhere) {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const Mode modes[] = {Mode::Original, Mode::DomSource, Mode::DomRelay, Mode::Saturated};
    for (int trial = 0; trial < 40; ++trial) {
        auto p = ehnet::testing::random_params(rng);
        p.lambda_s = u(rng);
        p.lambda_r = u(rng);
        const Mode mode = modes[trial % 4];

        bool ok = true;
        auto observer = [&](const SimState& before, const SlotOutcome& o) {
            if (o.s_to_r && o.r_transmitted) ok = false;  // half-duplex
            if (o.collision && (o.s_to_d || o.s_to_r || o.r_to_d)) ok = false;
            if (o.s_to_d && o.s_to_r) ok = false;
            if (o.s_transmitted && before.b_s == 0) ok = false;
            if (o.r_transmitted && before.b_r == 0) ok = false;
            if (o.s_dummy && mode != Mode::DomSource) ok = false;
            if (o.r_dummy && mode != Mode::DomRelay) ok = false;
        };
        const auto st = run(p, mode, trial, 20'000, 1, observer);
        EXPECT_TRUE(ok) << "trial " << trial;
        EXPECT_TRUE(conservation_holds(st));

        // Identities must hold at every slot boundary, not only at the end.
        SimStats partial;
        std::size_t checked = 0;
        run(p, mode, trial, 20'000, 1, [&](const SimState& before, const SlotOutcome& o) {
            if (!conservation_holds(partial, before)) ok = false;
            detail::accumulate(partial, before, o);
            ++checked;
        });
        EXPECT_TRUE(ok);
        EXPECT_EQ(checked, 20'000u);
    }
}

TEST(EmpiricalRates, Division) {
    SimStats st;
    st.slots = 100;
    st.s_departures = 24;
    EXPECT_DOUBLE_EQ(empirical_rates(st).rates.mu_s, 0.24);

    SimStats one;
    one.slots = 1;
    const auto e = empirical_rates(one);
    EXPECT_EQ(e.rates.mu_s, 0.0);
    EXPECT_EQ(e.rates.mu_r, 0.0);
    EXPECT_EQ(e.s_battery_fraction, 0.0);

    EXPECT_THROW(empirical_rates(SimStats{}), std::invalid_argument);
}

TEST(TraceCsv, HeaderAndStride) {
    std::ostringstream out;
    TraceCsvWriter w(out, 250);
    run(canonical(0.2, 0.1), Mode::Original, 3, 1000, 250, w);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "slot,q_s,q_r,b_s,b_r,s_tx,r_tx,collision,s_to_d,s_to_r,r_to_d");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    EXPECT_EQ(rows, 4);
    EXPECT_EQ(out.str().find("\r"), std::string::npos);
}
