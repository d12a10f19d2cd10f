#include "bubblesim/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <thread>

namespace bsim {

namespace {

// Tags the per-simulation stream so a seed never collides with another use of the same number.
constexpr std::uint64_t kSimulationStream = 0x62756262'6c65'0001ULL;

void check_range(const std::optional<UniformRange>& range, const char* name, double min_lo, double max_hi) {
  if (!range) return;
  if (!(range->lo <= range->hi) || !std::isfinite(range->lo) || !std::isfinite(range->hi))
    throw ConfigError(std::string(name) + " distribution needs finite bounds with lo <= hi");
  if (range->lo < min_lo || range->hi > max_hi)
    throw ConfigError(std::string(name) + " distribution bounds fall outside the parameter domain");
}

void check_band(const PriceBand& band, const char* name) {
  if (!(band.lo <= band.hi)) throw ConfigError(std::string(name) + " band needs lo <= hi");
  if (!(band.lo > -1.0)) throw ConfigError(std::string(name) + " band lower bound must exceed -1");
}

double draw(const std::optional<UniformRange>& range, double fallback, Rng& rng) {
  return range ? rng.uniform(range->lo, range->hi) : fallback;
}

}  // namespace

void validate(const ScenarioConfig& c) {
  if (c.n_agents < 2) throw ConfigError("n_agents must be >= 2");
  if (c.rounds < 0) throw ConfigError("rounds must be >= 0");
  if (!(c.initial_cash > 0.0)) throw ConfigError("initial_cash must be positive");
  if (!(c.initial_price > 0.0)) throw ConfigError("initial_price must be positive");
  if (c.initial_shares_min < 0 || c.initial_shares_max < c.initial_shares_min)
    throw ConfigError("initial shares range must satisfy 0 <= min <= max");
  try {
    validate(c.defaults);
    validate(c.model);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const double inf = HUGE_VAL;
  check_range(c.distributions.risk_threshold, "R", 1e-300, 1.0);
  check_range(c.distributions.fool_factor, "alpha", 1.0, inf);
  check_range(c.distributions.deviation_weight, "v", -inf, inf);
  check_range(c.distributions.slope_weight, "w", -inf, inf);
  check_range(c.distributions.fundamental, "F", 1e-300, inf);
  if (c.distributions.risk_threshold && !(c.distributions.risk_threshold->lo > 0.0))
    throw ConfigError("R distribution must stay above 0");
  check_band(c.bands.exuberant, "exuberant");
  check_band(c.bands.comfort, "comfort");
  check_band(c.bands.panic, "panic");
  for (std::size_t i = 0; i < c.shocks.size(); ++i) {
    if (c.shocks[i].round < 0) throw ConfigError("shock round must be >= 0");
    if (!(c.shocks[i].fundamental > 0.0)) throw ConfigError("shock fundamental must be positive");
    if (i > 0 && c.shocks[i].round < c.shocks[i - 1].round) throw ConfigError("shocks must be sorted by round");
  }
}

std::vector<double> fundamental_schedule(const ScenarioConfig& config) {
  std::vector<double> f(static_cast<std::size_t>(config.rounds) + 1, config.defaults.fundamental);
  for (const auto& s : config.shocks) {
    for (auto t = std::max<std::int64_t>(s.round, 0); t <= config.rounds; ++t) f[static_cast<std::size_t>(t)] = s.fundamental;
  }
  return f;
}

std::vector<double> SimulationResult::fundamental_schedule() const { return bsim::fundamental_schedule(config); }

Rng make_rng(std::uint64_t seed) { return Rng(seed, kSimulationStream); }

World init_world(const ScenarioConfig& config, Rng& rng) {
  validate(config);
  World world;
  world.config = config;
  const auto n = static_cast<std::size_t>(config.n_agents);
  world.params.reserve(n);
  world.states.reserve(n);
  const auto& d = config.distributions;
  for (std::size_t i = 0; i < n; ++i) {
    AgentParams p = config.defaults;
    p.risk_threshold = draw(d.risk_threshold, p.risk_threshold, rng);
    p.fool_factor = draw(d.fool_factor, p.fool_factor, rng);
    p.deviation_weight = draw(d.deviation_weight, p.deviation_weight, rng);
    p.slope_weight = draw(d.slope_weight, p.slope_weight, rng);
    p.fundamental = draw(d.fundamental, p.fundamental, rng);
    AgentState s;
    s.cash = config.initial_cash;
    s.shares = rng.integer(config.initial_shares_min, config.initial_shares_max);
    world.params.push_back(p);
    world.states.push_back(s);
  }
  world.prices.reserve(static_cast<std::size_t>(config.rounds) + 1);
  world.prices.push_back(config.initial_price);
  for (const auto& s : world.states) {
    world.total_cash += s.cash;
    world.total_shares += s.shares;
  }
  return world;
}

void apply_shocks(World& world, std::int64_t t, std::span<const Shock> shocks) {
  for (const auto& shock : shocks) {
    if (shock.round != t) continue;
    for (auto& p : world.params) p.fundamental = shock.fundamental;
  }
}

RoundReport run_round(World& world, std::int64_t t, Rng& rng) {
  const auto& config = world.config;
  if (config.clear_books_each_round) world.books.clear();

  std::vector<AgentId> order(world.params.size());
  std::iota(order.begin(), order.end(), AgentId{0});
  rng.shuffle(std::span<AgentId>(order));

  int window = 3;
  if (const auto* endo = std::get_if<EndogenousRisk>(&config.model)) window = endo->slope_window;

  MarketView view;
  view.prev_price = world.prices.back();
  view.slope = price_slope(world.prices, window);
  view.round = t;
  view.horizon = config.rounds;

  RoundReport report;
  report.round = t;
  for (const AgentId id : order) {
    const Decision d = decide(world.params[id], world.states[id], view, config.model, config.bands, rng);
    switch (d.regime) {
      case Regime::Exuberant: ++report.regimes.exuberant; break;
      case Regime::Comfort: ++report.regimes.comfort; break;
      case Regime::Panic: ++report.regimes.panic; break;
    }
    if (d.action == Action::Idle) {
      ++report.idles;
      continue;
    }
    const Side side = d.action == Action::Buy ? Side::Buy : Side::Sell;
    ++(side == Side::Buy ? report.buy_offers : report.sell_offers);
    const auto outcome = submit_order(world.books, Order{id, side, d.price, t}, world.states);
    if (const auto* executed = std::get_if<Executed>(&outcome)) report.trades.push_back(executed->trade);
  }

  report.avg_price = round_average_price(report.trades, view.prev_price);
  world.prices.push_back(report.avg_price);
  if (config.check_invariants) check_conservation(world);
  return report;
}

void check_conservation(const World& world) {
  double cash = 0.0;
  std::int64_t shares = 0;
  for (const auto& s : world.states) {
    if (s.cash < 0.0 || s.shares < 0) throw std::logic_error("negative agent balance");
    cash += s.cash;
    shares += s.shares;
  }
  if (shares != world.total_shares) throw std::logic_error("share total drifted");
  if (std::abs(cash - world.total_cash) > 1e-6 * world.total_cash) throw std::logic_error("cash total drifted");
}

SimulationResult run_simulation(const ScenarioConfig& config) {
  Rng rng = make_rng(config.seed);
  World world = init_world(config, rng);

  SimulationResult result;
  result.config = config;
  result.initial_states = world.states;
  result.reports.reserve(static_cast<std::size_t>(config.rounds));

  apply_shocks(world, 0, config.shocks);
  for (std::int64_t t = 1; t <= config.rounds; ++t) {
    apply_shocks(world, t, config.shocks);
    result.reports.push_back(run_round(world, t, rng));
    const auto& trades = result.reports.back().trades;
    result.trades.insert(result.trades.end(), trades.begin(), trades.end());
  }

  result.prices = std::move(world.prices);
  result.agent_params = std::move(world.params);
  result.final_states = std::move(world.states);
  return result;
}

std::vector<SimulationResult> run_batch(const ScenarioConfig& config, std::span<const std::uint64_t> seeds) {
  validate(config);
  std::vector<SimulationResult> results(seeds.size());
  const std::size_t workers = std::max(1U, std::min<unsigned>(std::thread::hardware_concurrency(), 16U));

  // Each worker takes seeds with a fixed stride, so result placement never depends on timing.
  std::vector<std::future<void>> jobs;
  for (std::size_t w = 0; w < std::min(workers, seeds.size()); ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < seeds.size(); i += workers) {
        ScenarioConfig c = config;
        c.seed = seeds[i];
        results[i] = run_simulation(c);
      }
    }));
  }
  for (auto& j : jobs) j.get();
  return results;
}

}  // namespace bsim
