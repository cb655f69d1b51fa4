// ehnet: region analytics, simulation, stability sweeps and the acceptance
// suite for the energy-harvesting source/relay network.

#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "ehnet/acceptance.hpp"
#include "ehnet/config.hpp"
#include "ehnet/regions.hpp"
#include "ehnet/simulator.hpp"
#include "ehnet/stability.hpp"
#include "ehnet/svg.hpp"
#include "ehnet/sweep.hpp"

namespace {

ehnet::ExperimentConfig load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ehnet::parse_config(ss.str());
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    return out;
}

constexpr std::size_t kBoundaryResolution = 101;

int cmd_region(const ehnet::ExperimentConfig& cfg, const std::string& out_path) {
    using ehnet::RegionId;
    std::ostringstream csv;
    csv << "region,index,lambda_s,lambda_r\n";
    for (auto r : {RegionId::Inner, RegionId::R1, RegionId::R2, RegionId::Outer}) {
        const auto pts = ehnet::trace_boundary(cfg.params, r, kBoundaryResolution);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            csv << ehnet::to_string(r) << ',' << i << ',' << ehnet::format_fixed6(pts[i].lambda_s)
                << ',' << ehnet::format_fixed6(pts[i].lambda_r) << '\n';
        }
    }
    if (!out_path.empty()) {
        open_out(out_path) << csv.str();
    } else {
        std::cout << csv.str();
    }
    if (cfg.svg_out) ehnet::emit_region_svg(cfg.params, kBoundaryResolution, nullptr, *cfg.svg_out);
    return 0;
}

int cmd_simulate(const ehnet::ExperimentConfig& cfg, const std::string& trace_path) {
    ehnet::SimStats st;
    if (!trace_path.empty()) {
        auto out = open_out(trace_path);
        ehnet::TraceCsvWriter writer(out, cfg.sim.stride);
        st = ehnet::run(cfg.params, cfg.sim.mode, cfg.base_seed, cfg.sim.n_slots, cfg.sim.stride,
                        writer);
    } else {
        st = ehnet::run(cfg.params, cfg.sim.mode, cfg.base_seed, cfg.sim.n_slots, cfg.sim.stride);
    }
    const auto e = ehnet::empirical_rates(st);
    std::cout << "mode " << ehnet::to_string(cfg.sim.mode) << ", " << st.slots << " slots\n"
              << "mu_s " << ehnet::format_fixed6(e.rates.mu_s) << "\n"
              << "mu_r " << ehnet::format_fixed6(e.rates.mu_r) << "\n"
              << "battery_nonempty_s " << ehnet::format_fixed6(e.s_battery_fraction) << "\n"
              << "battery_nonempty_r " << ehnet::format_fixed6(e.r_battery_fraction) << "\n"
              << "active_s " << ehnet::format_fixed6(e.s_active_fraction) << "\n"
              << "active_r " << ehnet::format_fixed6(e.r_active_fraction) << "\n"
              << "final q_s=" << st.final_state.q_s << " q_r=" << st.final_state.q_r
              << " b_s=" << st.final_state.b_s << " b_r=" << st.final_state.b_r << "\n";
    if (cfg.sim.burn_in < cfg.sim.n_slots) {
        const auto v = ehnet::classify(st, cfg.sim);
        std::cout << "verdict " << ehnet::to_string(v.tag) << " drift_slope "
                  << ehnet::format_fixed6(v.drift_slope) << "\n";
    }
    const ehnet::RatePoint x = cfg.point();
    std::cout << "analytic inner=" << ehnet::region_contains(cfg.params, ehnet::RegionId::Inner, x)
              << " outer=" << ehnet::region_contains(cfg.params, ehnet::RegionId::Outer, x)
              << " mu_s_sat=" << ehnet::format_fixed6(ehnet::saturated_service_source(cfg.params))
              << " mu_r_sat=" << ehnet::format_fixed6(ehnet::saturated_service_relay(cfg.params))
              << "\n";
    return 0;
}

int cmd_sweep(const ehnet::ExperimentConfig& cfg, unsigned jobs) {
    const auto rows = ehnet::run_sweep(cfg, jobs);
    if (cfg.csv_out) {
        auto out = open_out(*cfg.csv_out);
        ehnet::write_sweep_csv(out, rows);
    } else {
        ehnet::write_sweep_csv(std::cout, rows);
    }
    if (cfg.svg_out) ehnet::emit_region_svg(cfg.params, kBoundaryResolution, &rows, *cfg.svg_out);
    return 0;
}

int cmd_accept(const ehnet::ExperimentConfig& cfg, unsigned jobs) {
    ehnet::AcceptanceOptions opt;
    opt.jobs = jobs;
    const auto report = ehnet::run_acceptance(cfg, opt, std::cout);
    std::cout << (report.passed() ? "ALL PASSED" : "FAILED") << "\n";
    return report.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Energy-harvesting relay network: stability regions and simulation"};
    app.require_subcommand(1);

    std::string config_path, out_path;
    std::uint64_t seed = 0;
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "Experiment config (key=value)")->required();
        sub->add_option("--seed", seed, "Override base_seed");
        sub->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
        sub->add_option("--out", out_path, "Output path");
    };
    auto* region = app.add_subcommand("region", "Analytic region boundaries to CSV/SVG");
    auto* simulate = app.add_subcommand("simulate", "Simulate one rate point; --out writes a trace CSV");
    auto* sweep = app.add_subcommand("sweep", "Grid stability sweep vs analytic regions");
    auto* accept = app.add_subcommand("accept", "Run the acceptance suite");
    for (auto* sub : {region, simulate, sweep, accept}) add_common(sub);

    CLI11_PARSE(app, argc, argv);

    try {
        auto cfg = load(config_path);
        for (auto* sub : {region, simulate, sweep, accept}) {
            if (sub->count("--seed")) cfg.base_seed = seed;
        }
        if (*region) return cmd_region(cfg, out_path);
        if (*simulate) return cmd_simulate(cfg, out_path);
        if (!out_path.empty()) cfg.csv_out = out_path;
        if (*sweep) return cmd_sweep(cfg, jobs);
        if (*accept) return cmd_accept(cfg, jobs);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
