#pragma once

// Drift-based stability classification of a simulated run.

#include <cstdint>
#include <stdexcept>
#include <string_view>

#include "simulator.hpp"

namespace ehnet {

enum class Verdict { Stable, Unstable, Indeterminate };

inline std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::Stable: return "stable";
        case Verdict::Unstable: return "unstable";
        case Verdict::Indeterminate: return "indeterminate";
    }
    return "unknown";
}

struct StabilityVerdict {
    Verdict tag = Verdict::Indeterminate;
    double drift_slope = 0.0;  // packets/slot, least squares of q_s + q_r on slot
    double mean_q_s = 0.0;
    double mean_q_r = 0.0;
};

struct ClassifierConfig {
    std::uint64_t n_slots = 1'000'000;
    std::uint64_t burn_in = 100'000;
    std::uint64_t stride = 1'000;
    double slope_lo = 1e-4;
    double slope_hi = 1e-3;
    double queue_cap = 1e4;
    Mode mode = Mode::Original;
};

inline void check(const ClassifierConfig& cfg) {
    if (!(cfg.slope_lo < cfg.slope_hi))
        throw std::invalid_argument("classifier: slope_lo must be below slope_hi");
    if (!(cfg.slope_hi > 0.0)) throw std::invalid_argument("classifier: slope_hi must be positive");
    if (cfg.n_slots < 1 || cfg.stride < 1)
        throw std::invalid_argument("classifier: n_slots and stride must be >= 1");
    if (cfg.burn_in >= cfg.n_slots)
        throw std::invalid_argument("classifier: burn_in must be below n_slots");
}

/// Verdict from an already completed run.
inline StabilityVerdict classify(const SimStats& st, const ClassifierConfig& cfg) {
    check(cfg);
    double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0, sqs = 0, sqr = 0;
    for (const auto& tp : st.queue_trace) {
        if (tp.slot < cfg.burn_in) continue;
        const double x = static_cast<double>(tp.slot);
        const double y = static_cast<double>(tp.q_s + tp.q_r);
        n += 1;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        sqs += static_cast<double>(tp.q_s);
        sqr += static_cast<double>(tp.q_r);
    }
    if (n < 2) throw std::invalid_argument("classifier: fewer than two samples after burn-in");

    StabilityVerdict v;
    // Centered form keeps the normal equations well conditioned at 1e6 slots.
    const double mx = sx / n, my = sy / n;
    const double var = sxx / n - mx * mx;
    const double cov = sxy / n - mx * my;
    v.drift_slope = var > 0 ? cov / var : 0.0;
    v.mean_q_s = sqs / n;
    v.mean_q_r = sqr / n;

    const double final_total = static_cast<double>(st.final_state.q_s + st.final_state.q_r);
    if (v.drift_slope < cfg.slope_lo && final_total < cfg.queue_cap) {
        v.tag = Verdict::Stable;
    } else if (v.drift_slope > cfg.slope_hi) {
        v.tag = Verdict::Unstable;
    } else {
        v.tag = Verdict::Indeterminate;
    }
    return v;
}

inline StabilityVerdict classify_stability(const SystemParams& p, std::uint64_t seed,
                                           const ClassifierConfig& cfg = {}) {
    check(cfg);
    return classify(run(p, cfg.mode, seed, cfg.n_slots, cfg.stride), cfg);
}

}  // namespace ehnet
