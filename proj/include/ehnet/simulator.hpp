#pragma once

// Slotted-time Monte Carlo engine for the energy-harvesting source/relay
// network.

#include <array>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

#include "params.hpp"
#include "regions.hpp"
#include "rng.hpp"

namespace ehnet {

/// Original: no dummies. DomSource/DomRelay: that node transmits a dummy
/// packet when its queue is empty and its battery allows. Saturated: both
/// nodes always have a packet; an empty queue is refilled from an infinite
/// backlog ("injected" packets).
enum class Mode { Original, DomSource, DomRelay, Saturated };

inline std::string_view to_string(Mode m) {
    switch (m) {
        case Mode::Original: return "original";
        case Mode::DomSource: return "dom_source";
        case Mode::DomRelay: return "dom_relay";
        case Mode::Saturated: return "saturated";
    }
    return "unknown";
}

struct SimState {
    std::uint64_t q_s = 0;
    std::uint64_t q_r = 0;  // merged exogenous + relayed queue
    std::uint64_t b_s = 0;
    std::uint64_t b_r = 0;
    std::uint64_t slot = 0;

    friend bool operator==(const SimState&, const SimState&) = default;
};

struct SlotOutcome {
    bool s_transmitted = false;
    bool r_transmitted = false;
    bool s_dummy = false;
    bool r_dummy = false;
    bool s_injected = false;  // Saturated mode: transmitted packet came from the backlog
    bool r_injected = false;
    bool collision = false;
    bool s_to_d = false;
    bool s_to_r = false;
    bool r_to_d = false;
    bool s_pkt_arrival = false;
    bool r_pkt_arrival = false;
    bool s_harvest = false;
    bool r_harvest = false;

    friend bool operator==(const SlotOutcome&, const SlotOutcome&) = default;
};

/// Uniform draws consumed by one slot, always all nine, in this order.
enum DrawIndex : std::size_t {
    kDrawSourceTx = 0,
    kDrawRelayTx,
    kDrawSourceToDest,
    kDrawSourceToRelay,
    kDrawRelayToDest,
    kDrawSourcePacket,
    kDrawSourceHarvest,
    kDrawRelayPacket,
    kDrawRelayHarvest,
    kDrawsPerSlot
};

using SlotDraws = std::array<double, kDrawsPerSlot>;

/// Advances one slot:
///  1. eligibility from the slot-start state (battery >= 1 and a packet,
///     real, dummy or backlog),
///  2. independent access coins, one energy unit per transmission,
///  3. channel: collision if both transmit; a solo real source packet goes to
///     D w.p. p_sd, else to the relay queue w.p. p_sr, else stays; a solo
///     real relay packet goes to D w.p. p_rd; dummies move nothing,
///  4. exogenous packet arrivals and energy harvests (usable next slot).
inline std::pair<SimState, SlotOutcome> step(const SimState& state, const SystemParams& p,
                                             Mode mode, const SlotDraws& u) {
    SimState next = state;
    SlotOutcome o;

    const bool s_has = state.q_s > 0;
    const bool r_has = state.q_r > 0;
    const bool s_fill = mode == Mode::DomSource || mode == Mode::Saturated;
    const bool r_fill = mode == Mode::DomRelay || mode == Mode::Saturated;

    const bool s_eligible = state.b_s >= 1 && (s_has || s_fill);
    const bool r_eligible = state.b_r >= 1 && (r_has || r_fill);

    o.s_transmitted = s_eligible && u[kDrawSourceTx] < p.q_s;
    o.r_transmitted = r_eligible && u[kDrawRelayTx] < p.q_r;
    if (o.s_transmitted) {
        --next.b_s;
        o.s_dummy = !s_has && mode == Mode::DomSource;
        o.s_injected = !s_has && mode == Mode::Saturated;
    }
    if (o.r_transmitted) {
        --next.b_r;
        o.r_dummy = !r_has && mode == Mode::DomRelay;
        o.r_injected = !r_has && mode == Mode::Saturated;
    }

    o.collision = o.s_transmitted && o.r_transmitted;
    if (!o.collision) {
        if (o.s_transmitted && !o.s_dummy) {
            if (u[kDrawSourceToDest] < p.p_sd) {
                o.s_to_d = true;
            } else if (u[kDrawSourceToRelay] < p.p_sr) {
                o.s_to_r = true;
            }
            if ((o.s_to_d || o.s_to_r) && s_has) --next.q_s;
            if (o.s_to_r) ++next.q_r;
        } else if (o.r_transmitted && !o.r_dummy) {
            if (u[kDrawRelayToDest] < p.p_rd) {
                o.r_to_d = true;
                if (r_has) --next.q_r;
            }
        }
    }

    o.s_pkt_arrival = u[kDrawSourcePacket] < p.lambda_s;
    o.s_harvest = u[kDrawSourceHarvest] < p.delta_s;
    o.r_pkt_arrival = u[kDrawRelayPacket] < p.lambda_r;
    o.r_harvest = u[kDrawRelayHarvest] < p.delta_r;
    next.q_s += o.s_pkt_arrival;
    next.b_s += o.s_harvest;
    next.q_r += o.r_pkt_arrival;
    next.b_r += o.r_harvest;

    ++next.slot;
    return {next, o};
}

struct TracePoint {
    std::uint64_t slot = 0;
    std::uint64_t q_s = 0;
    std::uint64_t q_r = 0;

    friend bool operator==(const TracePoint&, const TracePoint&) = default;
};

struct SimStats {
    std::uint64_t slots = 0;
    std::uint64_t s_departures = 0;  // direct deliveries + handovers
    std::uint64_t r_departures = 0;
    std::uint64_t direct_deliveries = 0;
    std::uint64_t handovers = 0;
    std::uint64_t collisions = 0;
    std::uint64_t s_battery_nonempty_slots = 0;
    std::uint64_t r_battery_nonempty_slots = 0;
    std::uint64_t s_active_slots = 0;
    std::uint64_t r_active_slots = 0;
    std::uint64_t s_arrivals = 0;
    std::uint64_t r_arrivals = 0;
    std::uint64_t s_harvests = 0;
    std::uint64_t r_harvests = 0;
    std::uint64_t s_transmissions = 0;
    std::uint64_t r_transmissions = 0;
    std::uint64_t s_dummies = 0;
    std::uint64_t r_dummies = 0;
    std::uint64_t s_injected = 0;  // backlog packets that left S (Saturated mode)
    std::uint64_t r_injected = 0;
    SimState initial;
    SimState final_state;
    std::vector<TracePoint> queue_trace;  // slot-start queues every trace_stride slots

    friend bool operator==(const SimStats&, const SimStats&) = default;
};

namespace detail {

inline void accumulate(SimStats& st, const SimState& before, const SlotOutcome& o) {
    ++st.slots;
    st.s_battery_nonempty_slots += before.b_s > 0;
    st.r_battery_nonempty_slots += before.b_r > 0;
    st.s_active_slots += before.b_s > 0 && before.q_s > 0;
    st.r_active_slots += before.b_r > 0 && before.q_r > 0;
    st.s_transmissions += o.s_transmitted;
    st.r_transmissions += o.r_transmitted;
    st.s_dummies += o.s_dummy;
    st.r_dummies += o.r_dummy;
    st.collisions += o.collision;
    st.direct_deliveries += o.s_to_d;
    st.handovers += o.s_to_r;
    st.s_departures += o.s_to_d || o.s_to_r;
    st.r_departures += o.r_to_d;
    st.s_injected += (o.s_to_d || o.s_to_r) && o.s_injected;
    st.r_injected += o.r_to_d && o.r_injected;
    st.s_arrivals += o.s_pkt_arrival;
    st.r_arrivals += o.r_pkt_arrival;
    st.s_harvests += o.s_harvest;
    st.r_harvests += o.r_harvest;
}

}  // namespace detail

/// Packet and energy conservation against the counters; exact integer identities.
inline bool conservation_holds(const SimStats& st, const SimState& now) {
    const auto& a = st.initial;
    const bool source = a.q_s + st.s_arrivals + st.s_injected == now.q_s + st.s_departures;
    const bool relay =
        a.q_r + st.r_arrivals + st.handovers + st.r_injected == now.q_r + st.r_departures;
    const bool energy = a.b_s + st.s_harvests == now.b_s + st.s_transmissions &&
                        a.b_r + st.r_harvests == now.b_r + st.r_transmissions;
    const bool split = st.s_departures == st.direct_deliveries + st.handovers;
    return source && relay && energy && split;
}

inline bool conservation_holds(const SimStats& st) { return conservation_holds(st, st.final_state); }

struct NoObserver {
    void operator()(const SimState&, const SlotOutcome&) const {}
};

/// Runs n_slots from the empty state. The observer sees every slot as
/// (slot-start state, outcome).
template <class Observer = NoObserver>
SimStats run(const SystemParams& p, Mode mode, std::uint64_t seed, std::uint64_t n_slots,
             std::uint64_t trace_stride, Observer&& observer = {}) {
    if (n_slots < 1) throw std::invalid_argument("run: n_slots must be >= 1");
    if (trace_stride < 1) throw std::invalid_argument("run: trace_stride must be >= 1");

    UniformStream rng(seed);
    SimStats st;
    st.queue_trace.reserve(static_cast<std::size_t>(n_slots / trace_stride + 1));
    SimState state;
    SlotDraws u{};
    for (std::uint64_t t = 0; t < n_slots; ++t) {
        if (t % trace_stride == 0) st.queue_trace.push_back({state.slot, state.q_s, state.q_r});
        rng.fill(u);
        auto [next, outcome] = step(state, p, mode, u);
        detail::accumulate(st, state, outcome);
        observer(state, outcome);
        state = next;
    }
    st.final_state = state;
    return st;
}

struct EmpiricalRates {
    ServiceRates rates;
    double s_battery_fraction = 0.0;
    double r_battery_fraction = 0.0;
    double s_active_fraction = 0.0;
    double r_active_fraction = 0.0;
};

inline EmpiricalRates empirical_rates(const SimStats& st) {
    if (st.slots < 1) throw std::invalid_argument("empirical_rates: no slots");
    const double n = static_cast<double>(st.slots);
    EmpiricalRates e;
    e.rates.mu_s = static_cast<double>(st.s_departures) / n;
    e.rates.mu_r = static_cast<double>(st.r_departures) / n;
    e.s_battery_fraction = static_cast<double>(st.s_battery_nonempty_slots) / n;
    e.r_battery_fraction = static_cast<double>(st.r_battery_nonempty_slots) / n;
    e.s_active_fraction = static_cast<double>(st.s_active_slots) / n;
    e.r_active_fraction = static_cast<double>(st.r_active_slots) / n;
    return e;
}

/// Per-slot trace CSV, one row every `stride` slots. Queue and battery
/// columns are slot-start values; flags describe that slot.
class TraceCsvWriter {
public:
    TraceCsvWriter(std::ostream& os, std::uint64_t stride) : os_(&os), stride_(stride) {
        if (stride_ < 1) throw std::invalid_argument("TraceCsvWriter: stride must be >= 1");
        *os_ << "slot,q_s,q_r,b_s,b_r,s_tx,r_tx,collision,s_to_d,s_to_r,r_to_d\n";
    }

    void operator()(const SimState& s, const SlotOutcome& o) {
        if (s.slot % stride_ != 0) return;
        *os_ << s.slot << ',' << s.q_s << ',' << s.q_r << ',' << s.b_s << ',' << s.b_r << ','
             << int(o.s_transmitted) << ',' << int(o.r_transmitted) << ',' << int(o.collision)
             << ',' << int(o.s_to_d) << ',' << int(o.s_to_r) << ',' << int(o.r_to_d) << '\n';
    }

private:
    std::ostream* os_;
    std::uint64_t stride_;
};

}  // namespace ehnet
