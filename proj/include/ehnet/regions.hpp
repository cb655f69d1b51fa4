#pragma once

// Closed-form throughput and stability-region analytics.
//
// Notation used below: c = p_sd + (1 - p_sd) p_sr is the probability that a
// solo source transmission leaves the source queue, m_S = min(delta_S, q_S)
// and m_R = min(delta_R, q_R).

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "params.hpp"

namespace ehnet {

/// p_sd = p_sr = 0: no packet can ever leave the source.
class DegenerateChannelError : public std::domain_error {
public:
    DegenerateChannelError()
        : std::domain_error("degenerate channel: p_sd = 0 and p_sr = 0") {}
};

/// A closed-form quantity was requested outside the range where it is a probability.
class OutOfDomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct RelayLoad {
    double branch_prob = 0.0;      ///< Pr(relayed | left the source)
    double endogenous_rate = 0.0;  ///< handover rate into the relay
    double total_rate = 0.0;       ///< exogenous + endogenous
};

struct ServiceRates {
    double mu_s = 0.0;
    double mu_r = 0.0;
};

/// coeff_s * lambda_S + coeff_r * lambda_R < bound
struct HalfPlane {
    double coeff_s = 0.0;
    double coeff_r = 0.0;
    double bound = 0.0;

    bool holds(const RatePoint& x) const {
        return coeff_s * x.lambda_s + coeff_r * x.lambda_r < bound;
    }
};

inline double source_exit_prob(const SystemParams& p) {
    return p.p_sd + (1.0 - p.p_sd) * p.p_sr;
}

inline double relay_branch_prob(const SystemParams& p) {
    const double c = source_exit_prob(p);
    if (!(c > 0.0)) throw DegenerateChannelError();
    return (1.0 - p.p_sd) * p.p_sr / c;
}

inline RelayLoad relay_total_arrival(const SystemParams& p) {
    RelayLoad load;
    load.branch_prob = relay_branch_prob(p);
    load.endogenous_rate = load.branch_prob * p.lambda_s;
    load.total_rate = p.lambda_r + load.endogenous_rate;
    return load;
}

inline double relay_total_arrival(const SystemParams& p, const RatePoint& x) {
    return x.lambda_r + relay_branch_prob(p) * x.lambda_s;
}

inline double saturated_service_source(const SystemParams& p) {
    return min_energy_rate(p.delta_s, p.q_s) * (1.0 - min_energy_rate(p.delta_r, p.q_r)) *
           source_exit_prob(p);
}

inline double saturated_service_relay(const SystemParams& p) {
    return min_energy_rate(p.delta_r, p.q_r) * (1.0 - min_energy_rate(p.delta_s, p.q_s)) * p.p_rd;
}

/// Fraction of slots in which the relay is active when the source sends
/// dummy packets (first dominant system).
inline double dom1_relay_active_fraction(const SystemParams& p, const RatePoint& x) {
    const double denom = (1.0 - min_energy_rate(p.delta_s, p.q_s)) * p.q_r * p.p_rd;
    if (!(denom > 0.0)) throw OutOfDomainError("relay active fraction: zero denominator");
    const double frac = relay_total_arrival(p, x) / denom;
    if (frac > 1.0) throw OutOfDomainError("relay active fraction exceeds 1");
    return frac;
}

/// Fraction of slots in which the source is active when the relay sends
/// dummy packets (second dominant system).
inline double dom2_source_active_fraction(const SystemParams& p, const RatePoint& x) {
    const double denom =
        p.q_s * (1.0 - min_energy_rate(p.delta_r, p.q_r)) * source_exit_prob(p);
    if (!(denom > 0.0)) throw OutOfDomainError("source active fraction: zero denominator");
    const double frac = x.lambda_s / denom;
    if (frac > 1.0) throw OutOfDomainError("source active fraction exceeds 1");
    return frac;
}

/// Service rates in the first dominant system (source sends dummies).
/// mu_s is clamped at zero once the relay load exceeds what it can carry.
inline ServiceRates dom1_service_rates(const SystemParams& p, const RatePoint& x) {
    const double m_s = min_energy_rate(p.delta_s, p.q_s);
    const double c = source_exit_prob(p);
    ServiceRates out;
    out.mu_r = saturated_service_relay(p);
    const double denom = (1.0 - m_s) * p.p_rd;
    if (denom > 0.0) {
        out.mu_s = std::max(0.0, m_s * (1.0 - relay_total_arrival(p, x) / denom) * c);
    }
    return out;
}

/// Service rates in the second dominant system (relay sends dummies).
inline ServiceRates dom2_service_rates(const SystemParams& p, const RatePoint& x) {
    const double m_r = min_energy_rate(p.delta_r, p.q_r);
    const double c = source_exit_prob(p);
    if (!(c > 0.0)) throw DegenerateChannelError();
    ServiceRates out;
    out.mu_s = saturated_service_source(p);
    const double denom = (1.0 - m_r) * c;
    if (denom > 0.0) {
        out.mu_r = std::max(0.0, m_r * (1.0 - x.lambda_s / denom) * p.p_rd);
    }
    return out;
}

/// The two constraints that define Inner, R1 or R2, in the normalization of
/// the published inequalities. When m_S = 1 (for R1) or m_R = 1 (for R2) the
/// region is empty and its divided-out constraint is replaced by
/// lambda_S < 0 so every coefficient stays finite.
inline std::vector<HalfPlane> region_halfplanes(const SystemParams& p, RegionId region) {
    const double c = source_exit_prob(p);
    const double branch = relay_branch_prob(p);
    const double m_s = min_energy_rate(p.delta_s, p.q_s);
    const double m_r = min_energy_rate(p.delta_r, p.q_r);
    const double relayed = (1.0 - p.p_sd) * p.p_sr;

    switch (region) {
        case RegionId::Inner:
            return {{1.0, 0.0, saturated_service_source(p)},
                    {branch, 1.0, saturated_service_relay(p)}};
        case RegionId::R1: {
            const HalfPlane relay{branch, 1.0, saturated_service_relay(p)};
            const double denom = (1.0 - m_s) * p.p_rd;
            if (!(denom > 0.0)) return {{1.0, 0.0, 0.0}, relay};
            return {{1.0 + m_s * relayed / denom, m_s * c / denom, m_s * c}, relay};
        }
        case RegionId::R2: {
            const HalfPlane source{1.0, 0.0, saturated_service_source(p)};
            const double denom = (1.0 - m_r) * c;
            if (!(denom > 0.0)) return {{1.0, 0.0, 0.0}, source};
            return {{((1.0 - m_r) * relayed + m_r * p.p_rd) / denom, 1.0, m_r * p.p_rd}, source};
        }
        case RegionId::Outer:
            break;
    }
    throw std::invalid_argument("region_halfplanes: Outer has no single half-plane description");
}

inline bool region_contains(const SystemParams& p, RegionId region, const RatePoint& x) {
    if (region == RegionId::Outer) {
        return region_contains(p, RegionId::R1, x) || region_contains(p, RegionId::R2, x);
    }
    const auto planes = region_halfplanes(p, region);
    return std::all_of(planes.begin(), planes.end(),
                       [&](const HalfPlane& h) { return h.holds(x); });
}

namespace detail {

// Largest lambda_S with a nonempty section, and the upper lambda_R at a given
// lambda_S (negative when the section is empty).
struct Envelope {
    std::vector<HalfPlane> planes;

    double s_intercept() const {
        double s = std::numeric_limits<double>::infinity();
        for (const auto& h : planes) {
            if (h.coeff_s > 0.0) s = std::min(s, h.bound / h.coeff_s);
        }
        return s;
    }

    double upper_r(double s) const {
        double r = std::numeric_limits<double>::infinity();
        for (const auto& h : planes) {
            if (h.coeff_r > 0.0) {
                r = std::min(r, (h.bound - h.coeff_s * s) / h.coeff_r);
            } else if (!(h.coeff_s * s <= h.bound)) {
                return -1.0;
            }
        }
        return r;
    }

    bool degenerate() const {
        for (const auto& h : planes) {
            if (!(h.bound > 0.0)) return true;
        }
        return !(s_intercept() > 0.0) || !(upper_r(0.0) > 0.0);
    }
};

}  // namespace detail

/// Upper-right boundary of a region sampled at `resolution` evenly spaced
/// lambda_S values from 0 to the lambda_S-intercept. Every returned point is
/// a non-member; points are nudged outward by a few ulps where rounding
/// would otherwise place them inside.
inline std::vector<RatePoint> trace_boundary(const SystemParams& p, RegionId region,
                                             std::size_t resolution) {
    if (resolution < 2) throw std::invalid_argument("trace_boundary: resolution must be >= 2");

    std::vector<detail::Envelope> parts;
    if (region == RegionId::Outer) {
        parts.push_back({region_halfplanes(p, RegionId::R1)});
        parts.push_back({region_halfplanes(p, RegionId::R2)});
    } else {
        parts.push_back({region_halfplanes(p, region)});
    }
    std::erase_if(parts, [](const detail::Envelope& e) { return e.degenerate(); });

    const std::vector<RatePoint> origin(2, RatePoint{0.0, 0.0});
    if (parts.empty()) return origin;

    double s_max = 0.0;
    for (const auto& e : parts) s_max = std::max(s_max, e.s_intercept());

    std::vector<RatePoint> out;
    out.reserve(resolution);
    for (std::size_t k = 0; k < resolution; ++k) {
        const double s = (k + 1 == resolution)
                             ? s_max
                             : s_max * static_cast<double>(k) / static_cast<double>(resolution - 1);
        double r = 0.0;
        for (const auto& e : parts) {
            if (s <= e.s_intercept()) r = std::max(r, e.upper_r(s));
        }
        RatePoint x{s, std::max(0.0, r)};
        constexpr double inf = std::numeric_limits<double>::infinity();
        while (region_contains(p, region, x)) {
            if (x.lambda_s > 0.0) x.lambda_s = std::nextafter(x.lambda_s, inf);
            x.lambda_r = std::nextafter(x.lambda_r, inf);
        }
        out.push_back(x);
    }
    return out;
}

}  // namespace ehnet
