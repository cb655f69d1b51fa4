#pragma once

// Built-in acceptance suite: Monte Carlo checks of the closed forms, the
// inner/outer region claims, geometry properties, conservation and
// determinism. Shared by `ehnet accept` and the acceptance test binary.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "config.hpp"
#include "regions.hpp"
#include "simulator.hpp"
#include "stability.hpp"
#include "sweep.hpp"

namespace ehnet {

struct CheckResult {
    int id = 0;
    std::string name;
    double measured = 0.0;
    std::string tolerance;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct AcceptanceReport {
    std::vector<CheckResult> checks;

    bool passed() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return !checks.empty();
    }
};

/// Fluid-limit growth rate of Q_S + Q_R. A backlogged node transmits at
/// min(delta, q); a stable node transmits just enough to carry its load,
/// and success probabilities treat the two nodes' transmissions as
/// independent. Returns 0 when both queues are predicted stable.
inline double predicted_total_drift(const SystemParams& p, const RatePoint& x) {
    const double c = source_exit_prob(p);
    const double b = relay_branch_prob(p);
    const double m_s = min_energy_rate(p.delta_s, p.q_s);
    const double m_r = min_energy_rate(p.delta_r, p.q_r);
    const double sat_s = saturated_service_source(p);
    const double sat_r = saturated_service_relay(p);
    const double load_r = relay_total_arrival(p, x);

    if (x.lambda_s < sat_s) {
        // Source stable even against a backlogged relay.
        const double d_r = dom2_service_rates(p, x).mu_r;
        return std::max(0.0, load_r - d_r);
    }
    const double both = x.lambda_s + x.lambda_r - (1.0 - b) * sat_s - sat_r;
    if (x.lambda_r + b * sat_s >= sat_r) return std::max(0.0, both);

    // Backlogged source, relay carrying lambda_r plus the handed-over share.
    const double k = (1.0 - m_s) * p.p_rd;
    if (!(k > 0.0)) return std::max(0.0, both);
    const double d_s = m_s * c * (1.0 - x.lambda_r / k) / (1.0 + m_s * c * b / k);
    if (x.lambda_r + b * d_s < sat_r) return std::max(0.0, x.lambda_s - d_s);
    // Relay exactly at capacity.
    const double d_crit = b > 0.0 ? (sat_r - x.lambda_r) / b : sat_s;
    (void)m_r;
    return std::max(0.0, x.lambda_s - d_crit);
}

namespace detail {

inline std::string fmt(const char* f, double v) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

inline SystemParams at_point(SystemParams p, const RatePoint& x) {
    p.lambda_s = x.lambda_s;
    p.lambda_r = x.lambda_r;
    return p;
}

// Uniform point in [0,sx) x [0,sy) accepted by `keep`.
template <class Keep>
std::vector<RatePoint> sample_points(std::uint64_t seed, std::size_t count, double sx, double sy,
                                     Keep keep) {
    UniformStream rng(seed);
    std::vector<RatePoint> out;
    for (std::size_t tries = 0; out.size() < count && tries < 1'000'000; ++tries) {
        const RatePoint x{rng.next() * sx, rng.next() * sy};
        if (keep(x)) out.push_back(x);
    }
    return out;
}

inline RatePoint scaled(const RatePoint& x, double f) { return {x.lambda_s * f, x.lambda_r * f}; }

}  // namespace detail

struct AcceptanceOptions {
    unsigned jobs = 1;
    std::size_t region_points = 50;    // samples for the inner/outer checks
    std::size_t geometry_params = 1000;
    std::size_t geometry_grid = 50;
};

inline AcceptanceReport run_acceptance(const ExperimentConfig& cfg, const AcceptanceOptions& opt,
                                       std::ostream& log) {
    using clock = std::chrono::steady_clock;
    AcceptanceReport report;
    bool all_conserved = true;
    const SystemParams& base = cfg.params;
    ClassifierConfig sim = cfg.sim;
    sim.mode = Mode::Original;

    auto record = [&](CheckResult r) {
        log << (r.passed ? "[PASS] " : "[FAIL] ") << r.id << ' ' << r.name
            << ": measured=" << detail::fmt("%.6f", r.measured) << " tol=" << r.tolerance << " ("
            << detail::fmt("%.2f", r.seconds) << " s)";
        if (!r.detail.empty()) log << " -- " << r.detail;
        log << '\n';
        report.checks.push_back(std::move(r));
    };
    auto guarded = [&](int id, const char* name, const std::function<void(CheckResult&)>& body) {
        CheckResult r;
        r.id = id;
        r.name = name;
        const auto t0 = clock::now();
        try {
            body(r);
        } catch (const std::exception& e) {
            r.passed = false;
            r.detail = std::string("error: ") + e.what();
        }
        r.seconds = std::chrono::duration<double>(clock::now() - t0).count();
        const double limit = r.id == 1 ? 2.0 : r.id == 6 ? 10.0 : 0.0;
        if (limit > 0.0 && r.seconds >= limit) {
            r.passed = false;
            r.detail += " runtime exceeded " + detail::fmt("%.0f", limit) + " s";
        }
        record(std::move(r));
    };
    auto simulate = [&](const SystemParams& p, Mode mode, std::uint64_t seed) {
        SimStats st = run(p, mode, seed, sim.n_slots, sim.stride);
        all_conserved = all_conserved && conservation_holds(st);
        return st;
    };

    guarded(1, "battery occupancy (saturated, delta_s=0.3, q_s=0.6)", [&](CheckResult& r) {
        SystemParams p = base;
        p.delta_s = 0.3;
        p.q_s = 0.6;
        const double target = std::min(p.delta_s / p.q_s, 1.0);
        const auto e = empirical_rates(simulate(p, Mode::Saturated, cfg.base_seed));
        r.measured = e.s_battery_fraction;
        r.tolerance = "+-0.005 of " + detail::fmt("%.6f", target);
        r.passed = std::abs(r.measured - target) <= 0.005;
    });

    guarded(2, "saturated throughput", [&](CheckResult& r) {
        const auto e = empirical_rates(simulate(base, Mode::Saturated, cfg.base_seed + 1));
        const double ts = saturated_service_source(base), tr = saturated_service_relay(base);
        const double err = std::max(std::abs(e.rates.mu_s - ts), std::abs(e.rates.mu_r - tr));
        r.measured = err;
        r.tolerance = "max abs error <= 0.01";
        r.detail = "mu_s=" + detail::fmt("%.6f", e.rates.mu_s) + " vs " + detail::fmt("%.6f", ts) +
                   ", mu_r=" + detail::fmt("%.6f", e.rates.mu_r) + " vs " + detail::fmt("%.6f", tr);
        r.passed = err <= 0.01;
    });

    guarded(3, "dominant-system relay rate (dom_source)", [&](CheckResult& r) {
        const double tr = saturated_service_relay(base);
        const double b = relay_branch_prob(base);
        // Relay loaded to 95% of its dominant-system service rate.
        RatePoint x{0.4 * saturated_service_source(base), 0.0};
        x.lambda_r = 0.95 * tr - b * x.lambda_s;
        if (x.lambda_r < 0.0) {
            x.lambda_r = 0.0;
            x.lambda_s = b > 0.0 ? 0.95 * tr / b : 0.0;
        }
        const auto stable = empirical_rates(simulate(detail::at_point(base, x), Mode::DomSource,
                                                     cfg.base_seed + 2));
        // Same system with the relay backlogged: throughput equals the service rate.
        const auto backlogged = empirical_rates(simulate(
            detail::at_point(base, {x.lambda_s, 1.0}), Mode::DomSource, cfg.base_seed + 3));
        const double err = std::max(std::abs(stable.rates.mu_r - tr),
                                    std::abs(backlogged.rates.mu_r - tr));
        r.measured = err;
        r.tolerance = "max abs error <= 0.01 of " + detail::fmt("%.6f", tr);
        r.detail = "relay-stable point (" + detail::fmt("%.6f", x.lambda_s) + "," +
                   detail::fmt("%.6f", x.lambda_r) + ") mu_r=" +
                   detail::fmt("%.6f", stable.rates.mu_r) + ", backlogged mu_r=" +
                   detail::fmt("%.6f", backlogged.rates.mu_r);
        r.passed = err <= 0.01;
    });

    guarded(4, "inner bound sufficiency", [&](CheckResult& r) {
        const auto pts = detail::sample_points(
            splitmix64(cfg.base_seed ^ 4), opt.region_points, saturated_service_source(base),
            saturated_service_relay(base), [&](const RatePoint& x) {
                return region_contains(base, RegionId::Inner, detail::scaled(x, 1.05));
            });
        if (pts.size() < opt.region_points) throw std::runtime_error("inner region too small to sample");
        std::vector<Verdict> verdicts(pts.size());
        std::vector<char> ok(pts.size(), 1);
        parallel_for(pts.size(), opt.jobs, [&](std::size_t k) {
            SimStats st = run(detail::at_point(base, pts[k]), Mode::Original,
                              mix_seed(cfg.base_seed, 4, k), sim.n_slots, sim.stride);
            ok[k] = conservation_holds(st);
            verdicts[k] = classify(st, sim).tag;
        });
        std::size_t stable = 0, unstable = 0;
        for (std::size_t k = 0; k < pts.size(); ++k) {
            stable += verdicts[k] == Verdict::Stable;
            unstable += verdicts[k] == Verdict::Unstable;
            all_conserved = all_conserved && ok[k];
        }
        r.measured = double(stable) / double(pts.size());
        r.tolerance = "stable fraction >= 0.95 and zero unstable";
        r.detail = std::to_string(stable) + " stable, " + std::to_string(unstable) +
                   " unstable of " + std::to_string(pts.size());
        r.passed = r.measured >= 0.95 && unstable == 0;
    });

    guarded(5, "outer bound necessity", [&](CheckResult& r) {
        const auto outer = trace_boundary(base, RegionId::Outer, 2);
        const double sx = std::min(1.0, 2.0 * outer.back().lambda_s);
        const double sy = std::min(1.0, 2.0 * outer.front().lambda_r);
        const auto pts = detail::sample_points(
            splitmix64(cfg.base_seed ^ 5), opt.region_points, sx > 0 ? sx : 1.0,
            sy > 0 ? sy : 1.0, [&](const RatePoint& x) {
                return !region_contains(base, RegionId::Outer, detail::scaled(x, 1.0 / 1.05));
            });
        if (pts.size() < opt.region_points) throw std::runtime_error("could not sample outside points");
        std::vector<StabilityVerdict> verdicts(pts.size());
        std::vector<char> ok(pts.size(), 1);
        parallel_for(pts.size(), opt.jobs, [&](std::size_t k) {
            SimStats st = run(detail::at_point(base, pts[k]), Mode::Original,
                              mix_seed(cfg.base_seed, 5, k), sim.n_slots, sim.stride);
            ok[k] = conservation_holds(st);
            verdicts[k] = classify(st, sim);
        });
        std::size_t unstable = 0, drift_ok = 0;
        double worst = 0.0;
        for (std::size_t k = 0; k < pts.size(); ++k) {
            all_conserved = all_conserved && ok[k];
            unstable += verdicts[k].tag == Verdict::Unstable;
            const double pred = predicted_total_drift(base, pts[k]);
            const double rel = pred > 0 ? std::abs(verdicts[k].drift_slope - pred) / pred
                                        : std::numeric_limits<double>::infinity();
            worst = std::max(worst, rel);
            drift_ok += rel <= 0.2;
        }
        r.measured = worst;
        r.tolerance = "all unstable, drift within 20% of fluid prediction";
        r.detail = std::to_string(unstable) + "/" + std::to_string(pts.size()) + " unstable, " +
                   std::to_string(drift_ok) + "/" + std::to_string(pts.size()) +
                   " drift within tolerance (measured = worst relative drift error)";
        r.passed = unstable == pts.size() && drift_ok == pts.size();
    });

    guarded(6, "region geometry properties", [&](CheckResult& r) {
        UniformStream rng(splitmix64(cfg.base_seed ^ 6));
        std::size_t down = 0, nesting = 0, unions = 0, sampled = 0;
        const std::size_t n = opt.geometry_grid;
        const RegionId regions[] = {RegionId::Inner, RegionId::R1, RegionId::R2, RegionId::Outer};
        std::vector<char> member(n * n);
        while (sampled < opt.geometry_params) {
            SystemParams p;
            p.delta_s = rng.next();
            p.delta_r = rng.next();
            p.q_s = rng.next();
            p.q_r = rng.next();
            double a = rng.next(), c = rng.next();
            p.p_sd = std::min(a, c);
            p.p_rd = std::max(a, c);
            p.p_sr = rng.next();
            if (!is_valid(p) || !(source_exit_prob(p) > 0.0)) continue;
            ++sampled;

            const auto outer = trace_boundary(p, RegionId::Outer, 2);
            const double sx = outer.back().lambda_s > 0 ? 1.2 * outer.back().lambda_s : 1.0;
            const double sy = outer.front().lambda_r > 0 ? 1.2 * outer.front().lambda_r : 1.0;
            auto pt = [&](std::size_t i, std::size_t j) {
                return RatePoint{sx * double(i) / double(n - 1), sy * double(j) / double(n - 1)};
            };
            for (auto region : regions) {
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j)
                        member[i * n + j] = region_contains(p, region, pt(i, j));
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j) {
                        if (!member[i * n + j]) continue;
                        if (i > 0 && !member[(i - 1) * n + j]) ++down;
                        if (j > 0 && !member[i * n + j - 1]) ++down;
                    }
            }
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    const RatePoint x = pt(i, j);
                    const bool r1 = region_contains(p, RegionId::R1, x);
                    const bool r2 = region_contains(p, RegionId::R2, x);
                    const bool out = region_contains(p, RegionId::Outer, x);
                    unions += out != (r1 || r2);
                    if (region_contains(p, RegionId::Inner, detail::scaled(x, 1.0 + 1e-9)) && !out)
                        ++nesting;
                }
        }
        r.measured = double(down + nesting + unions);
        r.tolerance = "0 violations";
        r.detail = "down-closed " + std::to_string(down) + ", inner-in-outer " +
                   std::to_string(nesting) + ", outer=r1|r2 " + std::to_string(unions);
        r.passed = down == 0 && nesting == 0 && unions == 0;
    });

    // The dominance check reuses these sweeps, so they are conservation-checked here too.
    std::vector<SweepRow> original;
    std::vector<std::vector<SweepRow>> dominant;
    guarded(7, "conservation and determinism", [&](CheckResult& r) {
        ExperimentConfig c = cfg;
        c.sim = sim;
        original = run_sweep(c, 1);
        const auto parallel = run_sweep(c, std::max(2u, opt.jobs));
        for (Mode mode : {Mode::DomSource, Mode::DomRelay}) {
            c.sim.mode = mode;
            dominant.push_back(run_sweep(c, opt.jobs));
        }
        std::ostringstream a, b;
        write_sweep_csv(a, original);
        write_sweep_csv(b, parallel);
        for (const std::vector<SweepRow>* rows : std::initializer_list<const std::vector<SweepRow>*>{&original, &parallel, &dominant[0], &dominant[1]})
            for (const auto& row : *rows) all_conserved = all_conserved && row.conserved;
        const bool identical = a.str() == b.str();
        r.measured = identical ? 1.0 : 0.0;
        r.tolerance = "byte-identical CSV and exact conservation";
        r.detail = std::string("csv ") + (identical ? "identical" : "differs") +
                   ", conservation " + (all_conserved ? "exact on every run" : "VIOLATED");
        r.passed = identical && all_conserved;
    });

    guarded(8, "dominance direction", [&](CheckResult& r) {
        if (original.empty() || dominant.size() != 2)
            throw std::runtime_error("sweeps unavailable");
        std::size_t violations = 0, dom_stable = 0;
        for (const auto& rows : dominant) {
            for (std::size_t k = 0; k < rows.size(); ++k) {
                if (rows[k].verdict.tag != Verdict::Stable) continue;
                ++dom_stable;
                violations += original[k].verdict.tag != Verdict::Stable;
            }
        }
        r.measured = double(violations);
        r.tolerance = "0 violations";
        r.detail = std::to_string(dom_stable) + " dominant-stable grid points checked";
        r.passed = violations == 0;
    });

    return report;
}

}  // namespace ehnet
