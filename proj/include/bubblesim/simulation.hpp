#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bubblesim/agents.hpp"
#include "bubblesim/market.hpp"
#include "bubblesim/rng.hpp"

namespace bsim {

class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct UniformRange {
  double lo = 0.0;
  double hi = 0.0;
  friend bool operator==(const UniformRange&, const UniformRange&) = default;
};

/// Per-field overrides of the agent template; a set field is drawn
/// uniformly for every agent at initialisation.
struct ParamDistributions {
  std::optional<UniformRange> risk_threshold;
  std::optional<UniformRange> fool_factor;
  std::optional<UniformRange> deviation_weight;
  std::optional<UniformRange> slope_weight;
  std::optional<UniformRange> fundamental;
  friend bool operator==(const ParamDistributions&, const ParamDistributions&) = default;
};

/// All agents switch their fundamental estimate to `fundamental` at `round`.
struct Shock {
  std::int64_t round = 0;
  double fundamental = 0.0;
  friend bool operator==(const Shock&, const Shock&) = default;
};

struct ScenarioConfig {
  int n_agents = 10;
  std::int64_t rounds = 1000;
  RiskModel model = EndogenousRisk{};
  AgentParams defaults{};
  ParamDistributions distributions{};
  double initial_cash = 1000.0;
  std::int64_t initial_shares_min = 0;
  std::int64_t initial_shares_max = 10;
  double initial_price = 100.0;
  std::vector<Shock> shocks;
  // Panic defaults to the symmetric band; the asymmetric one is opt-in.
  PricingBands bands{{-0.01, 0.01}, {-0.01, 0.01}, {-0.01, 0.01}};
  bool clear_books_each_round = false;
  bool check_invariants = false;
  std::uint64_t seed = 1;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Throws ConfigError describing the first violated constraint.
void validate(const ScenarioConfig& config);

struct RegimeCounts {
  int exuberant = 0;
  int comfort = 0;
  int panic = 0;
  friend bool operator==(const RegimeCounts&, const RegimeCounts&) = default;
};

struct RoundReport {
  std::int64_t round = 0;
  double avg_price = 0.0;
  std::vector<Trade> trades;
  int buy_offers = 0;
  int sell_offers = 0;
  int idles = 0;
  RegimeCounts regimes;
  friend bool operator==(const RoundReport&, const RoundReport&) = default;
};

/// Mutable state of one running simulation.
struct World {
  ScenarioConfig config;
  std::vector<AgentParams> params;
  std::vector<AgentState> states;
  OrderBook books;
  std::vector<double> prices;  // p(0) .. p(t)
  double total_cash = 0.0;
  std::int64_t total_shares = 0;
};

struct SimulationResult {
  ScenarioConfig config;  // echo, seed included
  std::vector<double> prices;
  std::vector<RoundReport> reports;
  std::vector<Trade> trades;
  std::vector<AgentParams> agent_params;
  std::vector<AgentState> initial_states;
  std::vector<AgentState> final_states;

  /// Common fundamental value in force at every round: the template F with shocks applied.
  std::vector<double> fundamental_schedule() const;
};

/// Random stream of one simulation, derived from its seed.
Rng make_rng(std::uint64_t seed);

World init_world(const ScenarioConfig& config, Rng& rng);

/// Sets every agent's fundamental estimate for shocks scheduled at round `t`.
void apply_shocks(World& world, std::int64_t t, std::span<const Shock> shocks);

/// Plays round `t` (1-based): fresh permutation, one decision and submission
/// per agent, then publishes p(t).
RoundReport run_round(World& world, std::int64_t t, Rng& rng);

/// Throws std::logic_error if cash/share totals drifted or a balance went negative.
void check_conservation(const World& world);

SimulationResult run_simulation(const ScenarioConfig& config);

/// One result per seed, in seed order; each equals run_simulation with that seed.
std::vector<SimulationResult> run_batch(const ScenarioConfig& config, std::span<const std::uint64_t> seeds);

/// Common fundamental for each round 0..rounds.
std::vector<double> fundamental_schedule(const ScenarioConfig& config);

}  // namespace bsim
