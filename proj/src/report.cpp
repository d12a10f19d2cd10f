#include "bubblesim/report.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "bubblesim/config.hpp"
#include "format.hpp"
#include "json.hpp"

namespace bsim {

using Json = nlohmann::ordered_json;

RunStats run_stats(const SimulationResult& result, const MetricsOptions& options) {
  RunStats stats;
  const auto& prices = result.prices;
  const auto fundamentals = result.fundamental_schedule();
  const auto last = static_cast<std::int64_t>(prices.size()) - 1;

  auto to = options.deviation_to < 0 ? last : std::min(options.deviation_to, last);
  auto from = std::clamp<std::int64_t>(options.deviation_from, 0, to);
  stats.series.mean_abs_rel_dev =
      deviation_stats(prices, fundamentals, static_cast<std::size_t>(from), static_cast<std::size_t>(to));

  stats.series.peak = peak_and_drawdown(prices);
  const auto window = std::clamp<std::int64_t>(options.osc_window, 1, last + 1);
  stats.series.osc_std = oscillation_magnitude(prices, static_cast<std::size_t>(window));

  for (const auto& shock : result.config.shocks) {
    if (shock.round > last) continue;
    ShockResponse r{shock.round, shock.fundamental,
                    convergence_time(prices, shock.round, shock.fundamental, options.convergence_tol,
                                     options.convergence_sustain)};
    stats.shocks.push_back(r);
  }
  if (!stats.shocks.empty()) stats.series.convergence_time = stats.shocks.front().converged_at;

  const auto& peak = stats.series.peak;
  stats.bubble = peak.price >= options.bubble_ratio * fundamentals[peak.round];
  stats.crash = stats.bubble && peak.max_drawdown >= options.crash_drawdown;
  return stats;
}

std::string series_csv(const SimulationResult& result) {
  std::string out = "round,avg_price,n_trades,buy_offers,sell_offers,idles,exuberant,comfort,panic\n";
  for (const auto& r : result.reports) {
    out += std::to_string(r.round) + ',' + detail::format_double(r.avg_price) + ',' + std::to_string(r.trades.size()) +
           ',' + std::to_string(r.buy_offers) + ',' + std::to_string(r.sell_offers) + ',' + std::to_string(r.idles) +
           ',' + std::to_string(r.regimes.exuberant) + ',' + std::to_string(r.regimes.comfort) + ',' +
           std::to_string(r.regimes.panic) + '\n';
  }
  return out;
}

void write_series_csv(const SimulationResult& result, const std::string& path) {
  detail::write_text_file(path, series_csv(result));
}

namespace {

// Config echo as a JSON object; the seed is reported per run instead.
Json config_json(const ScenarioConfig& config) {
  Json out = Json::object();
  Json shocks = Json::array();
  const auto text = serialize_config(config);
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto end = text.find('\n', pos);
    const auto line = text.substr(pos, end - pos);
    pos = end + 1;
    const auto eq = line.find(" = ");
    const auto key = line.substr(0, eq);
    const auto value = line.substr(eq + 3);
    if (key == "seed") continue;
    if (key == "shock") {
      shocks.push_back(value);
    } else {
      out[key] = value;
    }
  }
  out["shocks"] = shocks;
  return out;
}

Json optional_json(const std::optional<std::int64_t>& v) { return v ? Json(*v) : Json(nullptr); }

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

std::string summary_json(std::span<const LabeledResult> runs, const MetricsOptions& options) {
  if (runs.empty()) throw std::invalid_argument("summary needs at least one run");

  Json doc;
  doc["format"] = "bubblesim-summary";
  doc["version"] = 1;
  doc["metrics"] = {{"deviation_from", options.deviation_from},
                    {"deviation_to", options.deviation_to},
                    {"osc_window", options.osc_window},
                    {"crash_drawdown", options.crash_drawdown},
                    {"bubble_ratio", options.bubble_ratio},
                    {"convergence_tol", options.convergence_tol},
                    {"convergence_sustain", options.convergence_sustain}};

  Json seeds = Json::array();
  for (const auto& run : runs) seeds.push_back(run.result->config.seed);
  doc["seeds"] = seeds;

  struct Group {
    const ScenarioConfig* config = nullptr;
    std::vector<std::uint64_t> seeds;
    std::vector<RunStats> stats;
  };
  std::vector<std::string> order;
  std::map<std::string, Group> groups;

  Json records = Json::array();
  for (const auto& run : runs) {
    const auto& r = *run.result;
    const auto label = run.group.empty() ? std::string("all") : run.group;
    const auto stats = run_stats(r, options);

    auto [it, fresh] = groups.try_emplace(label);
    if (fresh) {
      order.push_back(label);
      it->second.config = &r.config;
    }
    it->second.seeds.push_back(r.config.seed);
    it->second.stats.push_back(stats);

    Json shocks = Json::array();
    for (const auto& s : stats.shocks)
      shocks.push_back({{"round", s.shock_round}, {"F", s.fundamental}, {"converged_at", optional_json(s.converged_at)}});
    records.push_back({{"group", label},
                       {"seed", r.config.seed},
                       {"rounds", r.config.rounds},
                       {"n_trades", r.trades.size()},
                       {"initial_price", r.prices.front()},
                       {"final_price", r.prices.back()},
                       {"mean_abs_rel_dev", stats.series.mean_abs_rel_dev},
                       {"peak_round", stats.series.peak.round},
                       {"peak_price", stats.series.peak.price},
                       {"max_drawdown", stats.series.peak.max_drawdown},
                       {"osc_std", stats.series.osc_std},
                       {"convergence_time", optional_json(stats.series.convergence_time)},
                       {"shocks", shocks},
                       {"bubble", stats.bubble},
                       {"crash", stats.crash}});
  }

  Json aggregates = Json::array();
  for (const auto& label : order) {
    const auto& g = groups.at(label);
    const auto n = static_cast<double>(g.stats.size());
    double osc = 0.0, drawdown = 0.0, bubbles = 0.0, crashes = 0.0;
    std::vector<double> devs;
    std::vector<double> converged;
    for (const auto& s : g.stats) {
      osc += s.series.osc_std;
      drawdown += s.series.peak.max_drawdown;
      bubbles += s.bubble ? 1.0 : 0.0;
      crashes += s.crash ? 1.0 : 0.0;
      devs.push_back(s.series.mean_abs_rel_dev);
      if (s.series.convergence_time) converged.push_back(static_cast<double>(*s.series.convergence_time));
    }
    aggregates.push_back({{"group", label},
                          {"n_runs", g.stats.size()},
                          {"seeds", g.seeds},
                          {"mean_osc_std", osc / n},
                          {"median_mean_abs_rel_dev", median(devs)},
                          {"mean_max_drawdown", drawdown / n},
                          {"bubble_fraction", bubbles / n},
                          {"crash_fraction", crashes / n},
                          {"converged_fraction", static_cast<double>(converged.size()) / n},
                          {"config", config_json(*g.config)}});
  }

  doc["aggregates"] = aggregates;
  doc["runs"] = records;
  return doc.dump(2) + "\n";
}

void write_summary(std::span<const LabeledResult> runs, const MetricsOptions& options, const std::string& path) {
  detail::write_text_file(path, summary_json(runs, options));
}

}  // namespace bsim
