#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <variant>

#include "bubblesim/market.hpp"
#include "bubblesim/rng.hpp"

namespace bsim {

/// Immutable behavioural parameters of one agent. `fundamental` is the
/// agent's estimate of the asset value and only changes through shocks.
struct AgentParams {
  double risk_threshold = 0.5;  // R, in (0, 1]
  double fool_factor = 1.1;     // alpha >= 1; the greater fool tolerates alpha * R
  double deviation_weight = 1.0;
  double slope_weight = -3.0;
  double fundamental = 100.0;

  friend bool operator==(const AgentParams&, const AgentParams&) = default;
};

/// Throws std::invalid_argument when a parameter is out of its domain.
void validate(const AgentParams& params);

struct LinearCurve {
  friend bool operator==(const LinearCurve&, const LinearCurve&) = default;
};
struct ArctanCurve {
  double steepness = 10.0;
  friend bool operator==(const ArctanCurve&, const ArctanCurve&) = default;
};
using RiskCurve = std::variant<LinearCurve, ArctanCurve>;

/// Risk grows with elapsed time over a finite horizon.
struct ExogenousRisk {
  RiskCurve curve = LinearCurve{};
  friend bool operator==(const ExogenousRisk&, const ExogenousRisk&) = default;
};

/// How the factor `a` enters the risk sigmoid 1 / (1 + ...):
/// Shift gives a * exp(-x), Steepness gives exp(-a * x).
enum class SigmoidForm : std::uint8_t { Shift, Steepness };

/// Risk is a sigmoid of the price-fundamental gap and the recent price slope.
struct EndogenousRisk {
  double sigmoid_factor = 1.0;
  int slope_window = 3;
  SigmoidForm form = SigmoidForm::Shift;
  friend bool operator==(const EndogenousRisk&, const EndogenousRisk&) = default;
};

using RiskModel = std::variant<ExogenousRisk, EndogenousRisk>;

void validate(const RiskModel& model);

enum class Regime : std::uint8_t { Exuberant, Comfort, Panic };

const char* to_string(Regime regime);

/// Relative bounds of the uniform perturbation applied to the anchor price.
struct PriceBand {
  double lo = -0.01;
  double hi = 0.01;
  friend bool operator==(const PriceBand&, const PriceBand&) = default;
};

struct PricingBands {
  PriceBand exuberant{-0.01, 0.01};
  PriceBand comfort{-0.01, 0.01};
  PriceBand panic{-0.05, 0.0};
  friend bool operator==(const PricingBands&, const PricingBands&) = default;
};

struct RegimePolicy {
  double p_buy = 0.0;
  double p_sell = 0.0;
  double p_idle = 1.0;
  PriceBand offer_band{};
};

enum class Action : std::uint8_t { Buy, Sell, Idle };

const char* to_string(Action action);

double exogenous_risk(std::int64_t t, std::int64_t horizon, const RiskCurve& curve);

/// Average one-step change over the trailing `window` steps of `history`
/// (the prices published before the current round). Zero during warm-up.
double price_slope(std::span<const double> history, int window = 3);

double endogenous_risk(const AgentParams& params, double sigmoid_factor, double price, double slope,
                       SigmoidForm form = SigmoidForm::Shift);

/// Exuberant below R, Comfort on [R, alpha*R), Panic from alpha*R up.
Regime classify_regime(double risk, const AgentParams& params);

RegimePolicy regime_policy(Regime regime, const PricingBands& bands = {});

Action sample_action(const RegimePolicy& policy, Rng& rng);

double sample_offer_price(double prev_price, const RegimePolicy& policy, Rng& rng);

struct MarketView {
  double prev_price = 100.0;
  double slope = 0.0;
  std::int64_t round = 1;
  std::int64_t horizon = 1;
};

struct Decision {
  Action action = Action::Idle;
  double price = 0.0;  // meaningful only for Buy and Sell
  double risk = 0.0;
  Regime regime = Regime::Comfort;
};

/// One agent's move for the round. Draws are consumed in a fixed order: the
/// action draw, then the price draw whenever Buy or Sell was sampled. An
/// action the agent cannot afford (cash below offer, no share to sell) is
/// downgraded to Idle after both draws.
Decision decide(const AgentParams& params, const AgentState& state, const MarketView& view,
                const RiskModel& model, const PricingBands& bands, Rng& rng);

}  // namespace bsim
