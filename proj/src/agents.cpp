#include "bubblesim/agents.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace bsim {

namespace {
constexpr double kExponentClamp = 500.0;
}

void validate(const AgentParams& params) {
  if (!(params.risk_threshold > 0.0 && params.risk_threshold <= 1.0))
    throw std::invalid_argument("risk threshold R must lie in (0, 1]");
  if (!(params.fool_factor >= 1.0)) throw std::invalid_argument("fool factor alpha must be >= 1");
  if (!(params.fundamental > 0.0)) throw std::invalid_argument("fundamental value F must be positive");
  if (!std::isfinite(params.deviation_weight) || !std::isfinite(params.slope_weight))
    throw std::invalid_argument("risk weights v and w must be finite");
}

void validate(const RiskModel& model) {
  if (const auto* exo = std::get_if<ExogenousRisk>(&model)) {
    if (const auto* arc = std::get_if<ArctanCurve>(&exo->curve); arc && !(arc->steepness > 0.0))
      throw std::invalid_argument("arctan steepness must be positive");
    return;
  }
  const auto& endo = std::get<EndogenousRisk>(model);
  if (!(endo.sigmoid_factor > 0.0)) throw std::invalid_argument("sigmoid factor a must be positive");
  if (endo.slope_window < 1) throw std::invalid_argument("slope window must be >= 1");
}

const char* to_string(Regime regime) {
  switch (regime) {
    case Regime::Exuberant: return "exuberant";
    case Regime::Comfort: return "comfort";
    case Regime::Panic: return "panic";
  }
  return "unknown";
}

const char* to_string(Action action) {
  switch (action) {
    case Action::Buy: return "buy";
    case Action::Sell: return "sell";
    case Action::Idle: return "idle";
  }
  return "unknown";
}

double exogenous_risk(std::int64_t t, std::int64_t horizon, const RiskCurve& curve) {
  if (horizon < 1) throw std::invalid_argument("risk horizon must be >= 1");
  if (t < 0 || t > horizon)
    throw std::out_of_range("round " + std::to_string(t) + " outside horizon [0, " + std::to_string(horizon) + "]");
  const double x = static_cast<double>(t) / static_cast<double>(horizon);
  if (std::holds_alternative<LinearCurve>(curve)) return x;

  const double k = std::get<ArctanCurve>(curve).steepness;
  if (t == 0) return 0.0;
  if (t == horizon) return 1.0;
  const double r = 0.5 + std::atan(k * (x - 0.5)) / (2.0 * std::atan(k / 2.0));
  return std::clamp(r, 0.0, 1.0);
}

double price_slope(std::span<const double> history, int window) {
  if (window < 1) throw std::invalid_argument("slope window must be >= 1");
  const auto w = static_cast<std::size_t>(window);
  if (history.size() < w + 1) return 0.0;
  const double last = history[history.size() - 1];
  const double first = history[history.size() - 1 - w];
  return (last - first) / static_cast<double>(window);
}

double endogenous_risk(const AgentParams& params, double sigmoid_factor, double price, double slope,
                       SigmoidForm form) {
  const double x = params.deviation_weight * (price - params.fundamental) + params.slope_weight * slope;
  if (form == SigmoidForm::Steepness) {
    const double clamped = std::clamp(sigmoid_factor * x, -kExponentClamp, kExponentClamp);
    return 1.0 / (1.0 + std::exp(-clamped));
  }
  const double clamped = std::clamp(x, -kExponentClamp, kExponentClamp);
  return 1.0 / (1.0 + sigmoid_factor * std::exp(-clamped));
}

Regime classify_regime(double risk, const AgentParams& params) {
  if (risk < params.risk_threshold) return Regime::Exuberant;
  if (risk < params.fool_factor * params.risk_threshold) return Regime::Comfort;
  return Regime::Panic;
}

RegimePolicy regime_policy(Regime regime, const PricingBands& bands) {
  switch (regime) {
    case Regime::Exuberant: return {0.80, 0.10, 0.10, bands.exuberant};
    case Regime::Comfort: return {0.40, 0.10, 0.50, bands.comfort};
    case Regime::Panic: return {0.05, 0.90, 0.05, bands.panic};
  }
  throw std::invalid_argument("unknown regime");
}

Action sample_action(const RegimePolicy& policy, Rng& rng) {
  const double u = rng.uniform();
  if (u < policy.p_buy) return Action::Buy;
  if (u < policy.p_buy + policy.p_sell) return Action::Sell;
  return Action::Idle;
}

double sample_offer_price(double prev_price, const RegimePolicy& policy, Rng& rng) {
  const double u = rng.uniform(policy.offer_band.lo, policy.offer_band.hi);
  return prev_price * (1.0 + u);
}

Decision decide(const AgentParams& params, const AgentState& state, const MarketView& view,
                const RiskModel& model, const PricingBands& bands, Rng& rng) {
  Decision d;
  RegimePolicy policy;
  if (std::holds_alternative<ExogenousRisk>(model)) {
    // Two outcomes only: buy with probability 1 - r, otherwise sell.
    d.risk = exogenous_risk(view.round, view.horizon, std::get<ExogenousRisk>(model).curve);
    d.regime = Regime::Comfort;
    policy = RegimePolicy{1.0 - d.risk, d.risk, 0.0, bands.comfort};
    d.action = rng.uniform() < policy.p_buy ? Action::Buy : Action::Sell;
  } else {
    const auto& endo = std::get<EndogenousRisk>(model);
    d.risk = endogenous_risk(params, endo.sigmoid_factor, view.prev_price, view.slope, endo.form);
    d.regime = classify_regime(d.risk, params);
    policy = regime_policy(d.regime, bands);
    d.action = sample_action(policy, rng);
  }

  if (d.action == Action::Idle) return d;
  d.price = sample_offer_price(view.prev_price, policy, rng);

  const bool feasible = d.action == Action::Buy ? state.cash >= d.price : state.shares >= 1;
  if (!feasible || !(d.price > 0.0)) {
    d.action = Action::Idle;
    d.price = 0.0;
  }
  return d;
}

}  // namespace bsim
