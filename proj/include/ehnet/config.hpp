#pragma once

// Flat key=value experiment configuration.
//
//   # comment            whole-line or trailing comments
//   delta_s = 0.6        one pair per line, whitespace around '=' ignored
//
// Required: delta_s delta_r q_s q_r p_sd p_rd p_sr
// Optional (default): lambda_s (0), lambda_r (0), lambda_s_max (0.5),
//   lambda_r_max (0.5), steps (11), n_slots (1000000), burn_in (100000),
//   stride (1000), base_seed (1), mode (original), csv_out, svg_out

#include <charconv>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "params.hpp"
#include "stability.hpp"

namespace ehnet {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GridSpec {
    double lambda_s_max = 0.5;
    double lambda_r_max = 0.5;
    std::uint32_t steps = 11;
};

struct ExperimentConfig {
    SystemParams params;
    GridSpec grid;
    ClassifierConfig sim;  // sim.mode is the experiment mode
    std::uint64_t base_seed = 1;
    std::optional<std::string> csv_out;
    std::optional<std::string> svg_out;

    RatePoint point() const { return {params.lambda_s, params.lambda_r}; }
};

inline std::optional<Mode> parse_mode(std::string_view s) {
    if (s == "original") return Mode::Original;
    if (s == "dom_source") return Mode::DomSource;
    if (s == "dom_relay") return Mode::DomRelay;
    if (s == "saturated") return Mode::Saturated;
    return std::nullopt;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto ws = " \t\r";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

inline std::string at_line(int line, std::string_view msg) {
    return "line " + std::to_string(line) + ": " + std::string(msg);
}

template <class T>
T parse_number(std::string_view text, int line, std::string_view key) {
    T v{};
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end || text.empty()) {
        throw ConfigError(at_line(line, std::string(key) + ": invalid number '" +
                                            std::string(text) + "'"));
    }
    return v;
}

}  // namespace detail

inline ExperimentConfig parse_config(std::string_view text) {
    struct Entry {
        std::string value;
        int line;
    };
    std::map<std::string, Entry, std::less<>> entries;

    std::istringstream in{std::string(text)};
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string_view s = raw;
        if (auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
        s = detail::trim(s);
        if (s.empty()) continue;
        const auto eq = s.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(detail::at_line(line, "expected key=value"));
        const auto key = std::string(detail::trim(s.substr(0, eq)));
        const auto value = std::string(detail::trim(s.substr(eq + 1)));
        if (key.empty()) throw ConfigError(detail::at_line(line, "empty key"));
        if (!entries.emplace(key, Entry{value, line}).second)
            throw ConfigError(detail::at_line(line, "duplicate key '" + key + "'"));
    }
    if (entries.empty()) throw ConfigError("empty config");

    ExperimentConfig cfg;
    struct ProbKey {
        const char* name;
        double* field;
        bool required;
    };
    const ProbKey probs[] = {
        {"lambda_s", &cfg.params.lambda_s, false}, {"lambda_r", &cfg.params.lambda_r, false},
        {"delta_s", &cfg.params.delta_s, true},    {"delta_r", &cfg.params.delta_r, true},
        {"q_s", &cfg.params.q_s, true},            {"q_r", &cfg.params.q_r, true},
        {"p_sd", &cfg.params.p_sd, true},          {"p_rd", &cfg.params.p_rd, true},
        {"p_sr", &cfg.params.p_sr, true},
    };

    std::map<std::string, int, std::less<>> consumed;
    auto take = [&](std::string_view key) -> const Entry* {
        auto it = entries.find(key);
        if (it == entries.end()) return nullptr;
        consumed.emplace(it->first, it->second.line);
        return &it->second;
    };

    for (const auto& k : probs) {
        if (const Entry* e = take(k.name)) {
            *k.field = detail::parse_number<double>(e->value, e->line, k.name);
        } else if (k.required) {
            throw ConfigError(std::string("missing required key '") + k.name + "'");
        }
    }

    // Model-level violations, tagged with the line of the offending key.
    for (const auto& v : validate(cfg.params)) {
        throw ConfigError(detail::at_line(entries.at(v.field).line, v.message));
    }

    auto grid_max = [&](const char* key, double& field) {
        if (const Entry* e = take(key)) {
            field = detail::parse_number<double>(e->value, e->line, key);
            if (!(field > 0.0 && field <= 1.0))
                throw ConfigError(detail::at_line(e->line, std::string(key) + " out of (0,1]"));
        }
    };
    grid_max("lambda_s_max", cfg.grid.lambda_s_max);
    grid_max("lambda_r_max", cfg.grid.lambda_r_max);
    if (const Entry* e = take("steps")) {
        cfg.grid.steps = detail::parse_number<std::uint32_t>(e->value, e->line, "steps");
        if (cfg.grid.steps < 2) throw ConfigError(detail::at_line(e->line, "steps must be >= 2"));
    }

    auto count = [&](const char* key, std::uint64_t& field, std::uint64_t min) {
        if (const Entry* e = take(key)) {
            field = detail::parse_number<std::uint64_t>(e->value, e->line, key);
            if (field < min)
                throw ConfigError(detail::at_line(
                    e->line, std::string(key) + " must be >= " + std::to_string(min)));
        }
    };
    count("n_slots", cfg.sim.n_slots, 1);
    count("burn_in", cfg.sim.burn_in, 0);
    count("stride", cfg.sim.stride, 1);
    count("base_seed", cfg.base_seed, 0);

    if (const Entry* e = take("mode")) {
        auto m = parse_mode(e->value);
        if (!m) throw ConfigError(detail::at_line(e->line, "unknown mode '" + e->value + "'"));
        cfg.sim.mode = *m;
    }
    if (const Entry* e = take("csv_out")) cfg.csv_out = e->value;
    if (const Entry* e = take("svg_out")) cfg.svg_out = e->value;

    for (const auto& [key, e] : entries) {
        if (!consumed.contains(key))
            throw ConfigError(detail::at_line(e.line, "unknown key '" + key + "'"));
    }
    return cfg;
}

}  // namespace ehnet
