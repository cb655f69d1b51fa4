#include <gtest/gtest.h>

#include "ehnet/config.hpp"

using namespace ehnet;

namespace {

const char* kMinimal =
    "delta_s=0.6\n"
    "delta_r=0.3\n"
    "q_s=0.5\n"
    "q_r=0.5\n"
    "p_sd=0.4\n"
    "p_rd=0.8\n"
    "p_sr=0.5\n";

std::string error_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST(ParseConfig, MinimalDocumentFillsDefaults) {
    const auto c = parse_config(kMinimal);
    EXPECT_EQ(c.params.delta_s, 0.6);
    EXPECT_EQ(c.params.p_sr, 0.5);
    EXPECT_EQ(c.params.lambda_s, 0.0);
    EXPECT_EQ(c.sim.n_slots, 1'000'000u);
    EXPECT_EQ(c.sim.burn_in, 100'000u);
    EXPECT_EQ(c.sim.stride, 1'000u);
    EXPECT_EQ(c.sim.mode, Mode::Original);
    EXPECT_EQ(c.grid.steps, 11u);
    EXPECT_FALSE(c.csv_out.has_value());
}

TEST(ParseConfig, CommentsWhitespaceAndAllKeys) {
    const auto c = parse_config(std::string("# header\n") + kMinimal +
                                "  lambda_s = 0.1   # point\n"
                                "lambda_r=0.05\n\n"
                                "lambda_s_max=0.3\nlambda_r_max=0.2\nsteps=4\n"
                                "n_slots=5000\nburn_in=100\nstride=10\nbase_seed=18446744073709551615\n"
                                "mode=dom_relay\ncsv_out=out.csv\nsvg_out=plot.svg\n");
    EXPECT_EQ(c.point(), (RatePoint{0.1, 0.05}));
    EXPECT_EQ(c.grid.steps, 4u);
    EXPECT_EQ(c.sim.mode, Mode::DomRelay);
    EXPECT_EQ(c.base_seed, 18446744073709551615ull);
    EXPECT_EQ(*c.csv_out, "out.csv");
    EXPECT_EQ(*c.svg_out, "plot.svg");
}

TEST(ParseConfig, RangeViolationNamesLineAndConstraint) {
    std::string text = kMinimal;
    text.replace(text.find("q_s=0.5"), 7, "q_s=1.5");
    EXPECT_EQ(error_of(text), "line 3: q_s out of [0,1]");
}

TEST(ParseConfig, RelayAdvantageViolationSurfacedVerbatim) {
    std::string text = kMinimal;
    text.replace(text.find("p_rd=0.8"), 8, "p_rd=0.4");
    EXPECT_EQ(error_of(text), "line 6: p_rd must exceed p_sd");
}

TEST(ParseConfig, DuplicateUnknownAndMalformed) {
    EXPECT_NE(error_of(std::string(kMinimal) + "q_r=0.4\n").find("duplicate key"), std::string::npos);
    EXPECT_EQ(error_of(std::string(kMinimal) + "bogus=1\n"), "line 8: unknown key 'bogus'");
    EXPECT_EQ(error_of(std::string(kMinimal) + "steps\n"), "line 8: expected key=value");
    EXPECT_NE(error_of(std::string(kMinimal) + "n_slots=1e6\n").find("invalid number"),
              std::string::npos);
    EXPECT_NE(error_of(std::string(kMinimal) + "steps=1\n").find("steps must be >= 2"),
              std::string::npos);
    EXPECT_NE(error_of(std::string(kMinimal) + "lambda_s_max=0\n").find("out of (0,1]"),
              std::string::npos);
    EXPECT_NE(error_of(std::string(kMinimal) + "mode=fast\n").find("unknown mode"),
              std::string::npos);
    EXPECT_EQ(error_of("delta_s=0.6\n"), "missing required key 'delta_r'");
}

TEST(ParseConfig, EmptyDocumentIsAnError) {
    EXPECT_EQ(error_of(""), "empty config");
    EXPECT_EQ(error_of("# only a comment\n\n"), "empty config");
}
