#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bubblesim/metrics.hpp"
#include "bubblesim/simulation.hpp"

namespace bsim {

/// Windows and thresholds used when turning a run into SeriesStats.
struct MetricsOptions {
  std::int64_t deviation_from = 100;  // clamped into the series
  std::int64_t deviation_to = -1;     // negative: last round
  std::int64_t osc_window = 500;      // clamped to the series length
  double crash_drawdown = 0.20;
  double bubble_ratio = 1.10;  // peak / F at the peak round
  double convergence_tol = 0.05;
  std::int64_t convergence_sustain = 50;
};

struct ShockResponse {
  std::int64_t shock_round = 0;
  double fundamental = 0.0;
  std::optional<std::int64_t> converged_at;
};

struct RunStats {
  SeriesStats series;
  std::vector<ShockResponse> shocks;
  bool bubble = false;  // peak reached bubble_ratio * F
  bool crash = false;   // bubble followed by a fall of at least crash_drawdown
};

RunStats run_stats(const SimulationResult& result, const MetricsOptions& options = {});

/// `round,avg_price,n_trades,buy_offers,sell_offers,idles,exuberant,comfort,panic`
std::string series_csv(const SimulationResult& result);

/// Writes series_csv; on failure the partial file is removed and std::runtime_error thrown.
void write_series_csv(const SimulationResult& result, const std::string& path);

struct LabeledResult {
  const SimulationResult* result = nullptr;
  std::string group;  // aggregation key, e.g. "alpha=1.05"; empty means "all"
};

/// JSON summary: config echo, seeds, per-run stats, one aggregate per group.
std::string summary_json(std::span<const LabeledResult> runs, const MetricsOptions& options = {});

void write_summary(std::span<const LabeledResult> runs, const MetricsOptions& options, const std::string& path);

}  // namespace bsim
