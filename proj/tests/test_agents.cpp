#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "bubblesim/agents.hpp"
#include "oracles.hpp"

using namespace bsim;

TEST(ExogenousRisk, LinearIsElapsedFraction) {
  EXPECT_EQ(exogenous_risk(0, 1000, LinearCurve{}), 0.0);
  EXPECT_EQ(exogenous_risk(500, 1000, LinearCurve{}), 0.5);
  EXPECT_EQ(exogenous_risk(1000, 1000, LinearCurve{}), 1.0);
  for (int t = 0; t <= 1000; t += 37) EXPECT_DOUBLE_EQ(exogenous_risk(t, 1000, LinearCurve{}), t / 1000.0);
}

TEST(ExogenousRisk, ArctanEndpointsAndMidpoint) {
  const ArctanCurve curve{10.0};
  EXPECT_NEAR(exogenous_risk(0, 1000, curve), 0.0, 1e-12);
  EXPECT_NEAR(exogenous_risk(500, 1000, curve), 0.5, 1e-12);
  EXPECT_NEAR(exogenous_risk(1000, 1000, curve), 1.0, 1e-12);
  // Odd symmetry about the midpoint and monotone growth.
  double prev = -1.0;
  for (int t = 0; t <= 1000; ++t) {
    const double r = exogenous_risk(t, 1000, curve);
    EXPECT_GT(r, prev);
    EXPECT_NEAR(r + exogenous_risk(1000 - t, 1000, curve), 1.0, 1e-12);
    prev = r;
  }
}

TEST(ExogenousRisk, PastHorizonThrows) {
  EXPECT_THROW(exogenous_risk(1001, 1000, LinearCurve{}), std::out_of_range);
}

TEST(PriceSlope, Examples) {
  const std::vector<double> rising{100, 101, 103, 106};
  EXPECT_DOUBLE_EQ(price_slope(rising), 2.0);
  const std::vector<double> flat{100, 100, 100, 100};
  EXPECT_EQ(price_slope(flat), 0.0);
  const std::vector<double> short_history{100, 101};
  EXPECT_EQ(price_slope(short_history), 0.0);
}

TEST(PriceSlope, ArithmeticProgressionGivesStep) {
  std::vector<double> series;
  for (int i = 0; i < 20; ++i) series.push_back(90.0 + 0.25 * i);
  for (int w = 1; w <= 10; ++w) EXPECT_NEAR(price_slope(series, w), 0.25, 1e-12) << "window " << w;
}

TEST(PriceSlope, OnlyTrailingWindowMatters) {
  std::vector<double> a{1, 2, 3, 100, 101, 103, 106};
  std::vector<double> b{500, 7, 100, 101, 103, 106};
  EXPECT_EQ(price_slope(a), price_slope(b));
}

TEST(EndogenousRisk, Examples) {
  const AgentParams p;  // v=1, w=-3, F=100
  EXPECT_DOUBLE_EQ(endogenous_risk(p, 1.0, 100.0, 0.0), 0.5);
  EXPECT_NEAR(endogenous_risk(p, 1.0, 100.2007, 0.0), 0.55, 1e-3);
  EXPECT_NEAR(endogenous_risk(p, 1.0, 100.0, 1.0), 1.0 / (1.0 + std::exp(3.0)), 1e-15);
}

TEST(EndogenousRisk, RisingPricesLowerRisk) {
  const AgentParams p;
  EXPECT_LT(endogenous_risk(p, 1.0, 105.0, 2.0), endogenous_risk(p, 1.0, 105.0, 0.0));
}

TEST(EndogenousRisk, StaysInOpenUnitIntervalForExtremeInputs) {
  AgentParams p;
  p.deviation_weight = 50;
  for (double price : {1e-6, 1.0, 1e6, 1e12}) {
    const double r = endogenous_risk(p, 1.0, price, 0.0);
    EXPECT_GE(r, 0.0);
    EXPECT_LE(r, 1.0);
    EXPECT_FALSE(std::isnan(r));
  }
}

TEST(EndogenousRisk, SteepnessFormScalesExponent) {
  const AgentParams p;
  const double x = 1.0 * (102.0 - 100.0) + (-3.0) * 0.5;
  EXPECT_NEAR(endogenous_risk(p, 2.0, 102.0, 0.5, SigmoidForm::Steepness), 1.0 / (1.0 + std::exp(-2.0 * x)), 1e-15);
  EXPECT_NEAR(endogenous_risk(p, 2.0, 102.0, 0.5, SigmoidForm::Shift), 1.0 / (1.0 + 2.0 * std::exp(-x)), 1e-15);
}

TEST(EndogenousRisk, MatchesClosedFormOnGrid) {
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j)
      for (int k = 0; k < 10; ++k) {
        AgentParams p;
        p.deviation_weight = 0.2 + 0.3 * i;
        p.slope_weight = -6.0 + 0.7 * j;
        const double a = 0.25 + 0.5 * k;
        const double price = 94.0 + 1.3 * i;
        const double slope = -2.0 + 0.45 * j;
        EXPECT_NEAR(endogenous_risk(p, a, price, slope),
                    oracle::risk_closed_form(p.deviation_weight, p.slope_weight, p.fundamental, a, price, slope), 1e-12);
      }
}

TEST(ClassifyRegime, Examples) {
  const AgentParams p;  // R=0.5, alpha=1.1
  EXPECT_EQ(classify_regime(0.3, p), Regime::Exuberant);
  EXPECT_EQ(classify_regime(0.52, p), Regime::Comfort);
  EXPECT_EQ(classify_regime(0.55, p), Regime::Panic);
  EXPECT_EQ(classify_regime(0.5, p), Regime::Comfort);
}

TEST(ClassifyRegime, AlphaOneHasNoComfortZone) {
  AgentParams p;
  p.fool_factor = 1.0;
  for (int i = 0; i <= 1000; ++i) EXPECT_NE(classify_regime(i / 1000.0, p), Regime::Comfort);
}

TEST(ClassifyRegime, MatchesThreeWayComparison) {
  for (double R : {0.1, 0.4, 0.5, 0.8, 1.0})
    for (double alpha : {1.0, 1.05, 1.1, 1.2, 2.0}) {
      AgentParams p;
      p.risk_threshold = R;
      p.fool_factor = alpha;
      for (int i = 0; i <= 2000; ++i) {
        const double r = i / 2000.0;
        EXPECT_EQ(static_cast<int>(classify_regime(r, p)), static_cast<int>(oracle::regime_by_comparison(r, R, alpha)));
      }
      EXPECT_EQ(classify_regime(alpha * R, p), Regime::Panic);
    }
}

TEST(RegimePolicy, TableValues) {
  const auto ex = regime_policy(Regime::Exuberant);
  EXPECT_EQ(ex.p_buy, 0.80);
  EXPECT_EQ(ex.p_sell, 0.10);
  EXPECT_EQ(ex.p_idle, 0.10);
  const auto co = regime_policy(Regime::Comfort);
  EXPECT_EQ(co.p_buy, 0.40);
  EXPECT_EQ(co.p_sell, 0.10);
  EXPECT_EQ(co.p_idle, 0.50);
  const auto pa = regime_policy(Regime::Panic);
  EXPECT_EQ(pa.p_buy, 0.05);
  EXPECT_EQ(pa.p_sell, 0.90);
  EXPECT_EQ(pa.p_idle, 0.05);
  EXPECT_EQ(pa.offer_band, (PriceBand{-0.05, 0.0}));
  EXPECT_EQ(ex.offer_band, (PriceBand{-0.01, 0.01}));
  for (auto r : {Regime::Exuberant, Regime::Comfort, Regime::Panic}) {
    const auto pol = regime_policy(r);
    EXPECT_NEAR(pol.p_buy + pol.p_sell + pol.p_idle, 1.0, 1e-15);
  }
}

TEST(RegimePolicy, UsesConfiguredBands) {
  PricingBands bands;
  bands.panic = {-0.02, 0.02};
  EXPECT_EQ(regime_policy(Regime::Panic, bands).offer_band, (PriceBand{-0.02, 0.02}));
}

TEST(SampleAction, DegeneratePolicy) {
  Rng rng(3);
  const RegimePolicy always_buy{1.0, 0.0, 0.0, {}};
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(sample_action(always_buy, rng), Action::Buy);
}

TEST(SampleAction, ExuberantFrequencies) {
  Rng rng(11);
  const auto pol = regime_policy(Regime::Exuberant);
  int buys = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) buys += sample_action(pol, rng) == Action::Buy;
  EXPECT_NEAR(buys / static_cast<double>(n), 0.80, 0.01);
}

TEST(SampleAction, SameSeedSameSequence) {
  Rng a(42), b(42);
  const auto pol = regime_policy(Regime::Comfort);
  for (int i = 0; i < 500; ++i) EXPECT_EQ(sample_action(pol, a), sample_action(pol, b));
}

TEST(SampleOfferPrice, SymmetricBandBounds) {
  Rng rng(5);
  const auto pol = regime_policy(Regime::Comfort);
  for (int i = 0; i < 10000; ++i) {
    const double p = sample_offer_price(100.0, pol, rng);
    EXPECT_GE(p, 99.0);
    EXPECT_LE(p, 101.0);
  }
}

TEST(SampleOfferPrice, PanicBandMean) {
  Rng rng(6);
  const auto pol = regime_policy(Regime::Panic);
  double sum = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double p = sample_offer_price(100.0, pol, rng);
    ASSERT_GE(p, 95.0);
    ASSERT_LE(p, 100.0);
    sum += p;
  }
  EXPECT_NEAR(sum / n, 97.5, 0.05);
}

TEST(SampleOfferPrice, ZeroBandIsPrevPrice) {
  Rng rng(7);
  const RegimePolicy pol{1, 0, 0, {0.0, 0.0}};
  EXPECT_EQ(sample_offer_price(123.25, pol, rng), 123.25);
}

TEST(Decide, ExogenousAtStartAlwaysBuys) {
  const RiskModel model = ExogenousRisk{LinearCurve{}};
  const AgentState rich{1e6, 5};
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const auto d = decide({}, rich, {100.0, 0.0, 0, 1000}, model, {}, rng);
    ASSERT_EQ(d.action, Action::Buy);
    EXPECT_EQ(d.risk, 0.0);
    EXPECT_EQ(d.regime, Regime::Comfort);
  }
}

TEST(Decide, ExogenousBuyFrequencyIsOneMinusRisk) {
  const RiskModel model = ExogenousRisk{LinearCurve{}};
  Rng rng(2);
  int buys = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) buys += decide({}, {1e6, 5}, {100.0, 0.0, 700, 1000}, model, {}, rng).action == Action::Buy;
  EXPECT_NEAR(buys / static_cast<double>(n), 0.3, 0.01);
}

TEST(Decide, EndogenousAtFundamentalIsComfort) {
  const RiskModel model = EndogenousRisk{};
  Rng rng(3);
  const auto d = decide({}, {1000, 5}, {100.0, 0.0, 10, 1000}, model, {}, rng);
  EXPECT_DOUBLE_EQ(d.risk, 0.5);
  EXPECT_EQ(d.regime, Regime::Comfort);
}

TEST(Decide, SellWithoutSharesBecomesIdle) {
  const RiskModel model = EndogenousRisk{};
  AgentParams panicky;
  panicky.risk_threshold = 0.01;  // always Panic at p = F
  Rng rng(4);
  int sells_seen = 0;
  for (int i = 0; i < 2000; ++i) {
    const auto d = decide(panicky, {1000, 0}, {100.0, 0.0, 10, 1000}, model, {}, rng);
    EXPECT_NE(d.action, Action::Sell);
    sells_seen += d.action == Action::Idle;
  }
  EXPECT_GT(sells_seen, 1700);
}

TEST(Decide, BuyAboveCashBecomesIdle) {
  const RiskModel model = ExogenousRisk{LinearCurve{}};
  Rng rng(5);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(decide({}, {50.0, 0}, {100.0, 0.0, 0, 10}, model, {}, rng).action, Action::Idle);
}

// Infeasible actions still consume both draws, so the stream position after a
// decision never depends on the agent's holdings.
TEST(Decide, DrawOrderIndependentOfFeasibility) {
  const RiskModel model = EndogenousRisk{};
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    Rng a(seed), b(seed), manual(seed);
    const MarketView view{100.0, 0.0, 10, 1000};
    decide({}, {1e6, 10}, view, model, {}, a);
    decide({}, {0.0, 0}, view, model, {}, b);
    const auto action = sample_action(regime_policy(Regime::Comfort), manual);
    if (action != Action::Idle) (void)sample_offer_price(100.0, regime_policy(Regime::Comfort), manual);
    const double next = manual.uniform();
    EXPECT_EQ(a.uniform(), next);
    EXPECT_EQ(b.uniform(), next);
  }
}

TEST(Validate, RejectsOutOfDomainParams) {
  AgentParams p;
  p.risk_threshold = 0.0;
  EXPECT_THROW(validate(p), std::invalid_argument);
  p = {};
  p.fool_factor = 0.9;
  EXPECT_THROW(validate(p), std::invalid_argument);
  EXPECT_NO_THROW(validate(AgentParams{}));
  EXPECT_THROW(validate(RiskModel{EndogenousRisk{0.0, 3, SigmoidForm::Shift}}), std::invalid_argument);
  EXPECT_THROW(validate(RiskModel{EndogenousRisk{1.0, 0, SigmoidForm::Shift}}), std::invalid_argument);
}
