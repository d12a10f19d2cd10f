#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "bubblesim/config.hpp"

using namespace bsim;

TEST(Presets, AllSevenExpandAndValidate) {
  ASSERT_EQ(preset_names().size(), 7u);
  for (const auto name : preset_names()) EXPECT_NO_THROW(validate(preset(name))) << name;
}

TEST(Presets, RoundTripThroughText) {
  for (const auto name : preset_names()) {
    const auto c = preset(name);
    EXPECT_EQ(parse_config(serialize_config(c)), c) << name;
  }
}

TEST(Presets, ScenarioValues) {
  const auto linear = preset("fig1-linear");
  ASSERT_TRUE(std::holds_alternative<ExogenousRisk>(linear.model));
  EXPECT_TRUE(std::holds_alternative<LinearCurve>(std::get<ExogenousRisk>(linear.model).curve));

  const auto arctan = preset("fig1-arctan");
  EXPECT_EQ(std::get<ArctanCurve>(std::get<ExogenousRisk>(arctan.model).curve).steepness, 10.0);

  EXPECT_EQ(preset("fig2-efficiency"), ScenarioConfig{});

  const auto shock = preset("fig3-shock");
  ASSERT_EQ(shock.shocks.size(), 1u);
  EXPECT_EQ(shock.shocks[0], (Shock{250, 75.0}));

  const auto fig4 = preset("fig4-bubble-nocrash");
  EXPECT_EQ(fig4.distributions.risk_threshold, (UniformRange{0.4, 0.8}));
  EXPECT_EQ(fig4.bands.panic, (PriceBand{-0.01, 0.01}));
  EXPECT_EQ(preset("fig5-alpha-sweep"), fig4);

  const auto fig6 = preset("fig6-crash");
  EXPECT_EQ(fig6.defaults.slope_weight, -5.0);
  EXPECT_EQ(fig6.bands.panic, (PriceBand{-0.05, 0.0}));
  EXPECT_EQ(fig6.distributions.risk_threshold, (UniformRange{0.4, 0.8}));
  for (const auto name : preset_names()) {
    EXPECT_EQ(preset(name).n_agents, 10);
    EXPECT_EQ(preset(name).rounds, 1000);
  }
}

TEST(Presets, UnknownNameThrows) { EXPECT_THROW(preset("nosuch"), UnknownPreset); }

TEST(ParseConfig, CommentsBlankLinesAndOverrides) {
  const auto c = parse_config(
      "# scenario\n"
      "\n"
      "rounds = 50   # short\n"
      "  alpha=1.2\n"
      "rounds = 60\n"
      "R_dist = uniform 0.4 0.8\n"
      "panic_band = -0.05 0\n"
      "seed = 18446744073709551615\n");
  EXPECT_EQ(c.rounds, 60);
  EXPECT_EQ(c.defaults.fool_factor, 1.2);
  EXPECT_EQ(c.distributions.risk_threshold, (UniformRange{0.4, 0.8}));
  EXPECT_EQ(c.bands.panic, (PriceBand{-0.05, 0.0}));
  EXPECT_EQ(c.seed, 18446744073709551615ull);
}

TEST(ParseConfig, ShocksAccumulateAndReset) {
  auto c = parse_config("shock = 100 120\nshock = 200 80\n");
  ASSERT_EQ(c.shocks.size(), 2u);
  EXPECT_EQ(c.shocks[1], (Shock{200, 80.0}));
  c = parse_config("shock = 100 120\nshock = none\nshock = 5 90\n");
  ASSERT_EQ(c.shocks.size(), 1u);
  EXPECT_EQ(c.shocks[0], (Shock{5, 90.0}));
}

TEST(ParseConfig, ModelKnobsIndependentOfLineOrder) {
  const auto a = parse_config("arctan_k = 4\nmodel = exogenous\nrisk_curve = arctan\n");
  const auto b = parse_config("model = exogenous\nrisk_curve = arctan\narctan_k = 4\n");
  EXPECT_EQ(a, b);
  EXPECT_EQ(std::get<ArctanCurve>(std::get<ExogenousRisk>(a.model).curve).steepness, 4.0);
  const auto s = parse_config("sigmoid_form = steepness\nsigmoid_a = 2\nslope_window = 5\n");
  EXPECT_EQ(std::get<EndogenousRisk>(s.model), (EndogenousRisk{2.0, 5, SigmoidForm::Steepness}));
}

TEST(ParseConfig, Errors) {
  EXPECT_THROW(parse_config("bogus = 1\n"), ConfigError);
  EXPECT_THROW(parse_config("rounds 10\n"), ConfigError);
  EXPECT_THROW(parse_config("rounds = ten\n"), ConfigError);
  EXPECT_THROW(parse_config("rounds = 10.5\n"), ConfigError);
  EXPECT_THROW(parse_config("alpha = 0.5\n"), ConfigError);
  EXPECT_THROW(parse_config("R_dist = uniform 0.8 0.4\n"), ConfigError);
  EXPECT_THROW(parse_config("R_dist = normal 0 1\n"), ConfigError);
  EXPECT_THROW(parse_config("shock = 200 80\nshock = 100 120\n"), ConfigError);
  EXPECT_THROW(parse_config("model = magic\n"), ConfigError);
  EXPECT_THROW(parse_config("panic_band = 0.1\n"), ConfigError);
  EXPECT_THROW(parse_config("clear_books_each_round = maybe\n"), ConfigError);
}

TEST(ParseConfig, BaseIsRespected) {
  const auto c = parse_config("rounds = 5\n", preset("fig6-crash"));
  EXPECT_EQ(c.rounds, 5);
  EXPECT_EQ(c.defaults.slope_weight, -5.0);
}

TEST(SerializeConfig, DoublesRoundTripExactly) {
  ScenarioConfig c;
  c.defaults.fool_factor = 1.0 + 1e-15;
  c.initial_price = 0.1 + 0.2;
  c.distributions.slope_weight = UniformRange{-7.123456789012345, -1.0 / 3.0};
  EXPECT_EQ(parse_config(serialize_config(c)), c);
}

TEST(LoadConfig, ReadsFileAndReportsMissing) {
  const auto path = std::filesystem::temp_directory_path() / "bsim_test_config.txt";
  {
    std::ofstream out(path);
    out << "rounds = 42\n";
  }
  EXPECT_EQ(load_config(path.string()).rounds, 42);
  std::filesystem::remove(path);
  EXPECT_THROW(load_config(path.string()), ConfigError);
}
