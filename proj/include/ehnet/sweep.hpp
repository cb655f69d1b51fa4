#pragma once

// Grid stability sweeps and their CSV form.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "config.hpp"
#include "regions.hpp"
#include "stability.hpp"

namespace ehnet {

struct SweepRow {
    double lambda_s = 0.0;
    double lambda_r = 0.0;
    StabilityVerdict verdict;
    bool in_inner = false;
    bool in_r1 = false;
    bool in_r2 = false;
    bool in_outer = false;
    bool conserved = true;  // packet/energy identities held for the run
};

struct GridPoint {
    std::uint32_t row = 0;  // lambda_s index
    std::uint32_t col = 0;  // lambda_r index
    RatePoint rate;
};

/// Row-major over lambda_s then lambda_r. Each axis is max * k / steps for
/// k = 0 .. steps-1: the zero lines are included, the maxima are not.
inline std::vector<GridPoint> grid_points(const GridSpec& g) {
    std::vector<GridPoint> pts;
    pts.reserve(std::size_t(g.steps) * g.steps);
    for (std::uint32_t i = 0; i < g.steps; ++i) {
        for (std::uint32_t j = 0; j < g.steps; ++j) {
            pts.push_back({i, j, {g.lambda_s_max * i / g.steps, g.lambda_r_max * j / g.steps}});
        }
    }
    return pts;
}

/// Runs fn(index) for index in [0, n) on up to `jobs` threads. The first
/// exception is rethrown after all workers finish.
template <class Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn&& fn) {
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (jobs == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    std::vector<std::thread> workers;
    workers.reserve(jobs);
    for (unsigned w = 0; w < jobs; ++w) {
        workers.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < n;) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mu);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : workers) t.join();
    if (error) std::rethrow_exception(error);
}

inline SweepRow evaluate_point(const SystemParams& base, const RatePoint& x,
                               const ClassifierConfig& sim, std::uint64_t seed) {
    SystemParams p = base;
    p.lambda_s = x.lambda_s;
    p.lambda_r = x.lambda_r;
    check(sim);
    const SimStats st = run(p, sim.mode, seed, sim.n_slots, sim.stride);

    SweepRow row;
    row.lambda_s = x.lambda_s;
    row.lambda_r = x.lambda_r;
    row.verdict = classify(st, sim);
    row.conserved = conservation_holds(st);
    row.in_inner = region_contains(p, RegionId::Inner, x);
    row.in_r1 = region_contains(p, RegionId::R1, x);
    row.in_r2 = region_contains(p, RegionId::R2, x);
    row.in_outer = row.in_r1 || row.in_r2;
    return row;
}

/// One row per grid point, in grid order regardless of `jobs`.
inline std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg, unsigned jobs = 1) {
    const auto pts = grid_points(cfg.grid);
    std::vector<SweepRow> rows(pts.size());
    parallel_for(pts.size(), jobs, [&](std::size_t k) {
        const auto& g = pts[k];
        rows[k] = evaluate_point(cfg.params, g.rate, cfg.sim, mix_seed(cfg.base_seed, g.row, g.col));
    });
    return rows;
}

inline std::string format_fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    std::string out = buf;
    if (out == "-0.000000") out.erase(0, 1);
    return out;
}

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << "lambda_s,lambda_r,verdict,drift_slope,mean_q_s,mean_q_r,in_inner,in_r1,in_r2,in_outer\n";
    for (const auto& r : rows) {
        os << format_fixed6(r.lambda_s) << ',' << format_fixed6(r.lambda_r) << ','
           << to_string(r.verdict.tag) << ',' << format_fixed6(r.verdict.drift_slope) << ','
           << format_fixed6(r.verdict.mean_q_s) << ',' << format_fixed6(r.verdict.mean_q_r) << ','
           << int(r.in_inner) << ',' << int(r.in_r1) << ',' << int(r.in_r2) << ','
           << int(r.in_outer) << '\n';
    }
}

}  // namespace ehnet
