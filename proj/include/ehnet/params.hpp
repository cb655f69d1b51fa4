#pragma once

// Model parameters of the source/relay/destination network and the small
// value types shared by the analytics and the simulator.

#include <algorithm>
#include <string>
#include <string_view>
#include <vector>

namespace ehnet {

/// The nine probabilities/rates that fully describe the network.
/// Arrival and harvest processes are Bernoulli per slot, so every field is a
/// probability.
struct SystemParams {
    double lambda_s = 0.0;  ///< packet arrival rate at the source
    double lambda_r = 0.0;  ///< exogenous packet arrival rate at the relay
    double delta_s = 0.0;   ///< energy harvest rate at the source
    double delta_r = 0.0;   ///< energy harvest rate at the relay
    double q_s = 0.0;       ///< source access probability when active
    double q_r = 0.0;       ///< relay access probability when active
    double p_sd = 0.0;      ///< source -> destination decode probability
    double p_rd = 0.0;      ///< relay -> destination decode probability
    double p_sr = 0.0;      ///< source -> relay decode probability

    friend bool operator==(const SystemParams&, const SystemParams&) = default;
};

/// An arrival-rate pair (lambda_S, lambda_R).
struct RatePoint {
    double lambda_s = 0.0;
    double lambda_r = 0.0;

    friend bool operator==(const RatePoint&, const RatePoint&) = default;
};

/// Outer is always evaluated as the union of R1 and R2.
enum class RegionId { Inner, R1, R2, Outer };

inline std::string_view to_string(RegionId id) {
    switch (id) {
        case RegionId::Inner: return "inner";
        case RegionId::R1: return "r1";
        case RegionId::R2: return "r2";
        case RegionId::Outer: return "outer";
    }
    return "unknown";
}

struct Violation {
    std::string field;
    std::string message;
};

/// Empty result means the parameters are valid.
using ValidationResult = std::vector<Violation>;

namespace detail {
inline bool in_unit_interval(double v) { return v >= 0.0 && v <= 1.0; }  // false for NaN
}  // namespace detail

inline ValidationResult validate(const SystemParams& p) {
    ValidationResult out;
    const std::pair<const char*, double> fields[] = {
        {"lambda_s", p.lambda_s}, {"lambda_r", p.lambda_r}, {"delta_s", p.delta_s},
        {"delta_r", p.delta_r},   {"q_s", p.q_s},           {"q_r", p.q_r},
        {"p_sd", p.p_sd},         {"p_rd", p.p_rd},         {"p_sr", p.p_sr},
    };
    for (const auto& [name, value] : fields) {
        if (!detail::in_unit_interval(value)) {
            out.push_back({name, std::string(name) + " out of [0,1]"});
        }
    }
    // Strict: equal channels are rejected.
    if (!(p.p_rd > p.p_sd)) {
        out.push_back({"p_rd", "p_rd must exceed p_sd"});
    }
    return out;
}

inline bool is_valid(const SystemParams& p) { return validate(p).empty(); }

/// min(delta, q): the long-run transmission rate of a node whose packet
/// queue never empties (battery nonempty w.p. min(delta/q, 1), then
/// transmits w.p. q).
inline double min_energy_rate(double delta, double q) { return std::min(delta, q); }

}  // namespace ehnet
