#include "bubblesim/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace bsim {

double deviation_stats(std::span<const double> series, std::span<const double> fundamentals, std::size_t from,
                       std::size_t to) {
  if (from > to || to >= series.size()) throw std::invalid_argument("deviation window is empty or out of range");
  if (fundamentals.size() < series.size()) throw std::invalid_argument("fundamental schedule shorter than series");
  double sum = 0.0;
  for (std::size_t t = from; t <= to; ++t) sum += std::abs(series[t] - fundamentals[t]) / fundamentals[t];
  return sum / static_cast<double>(to - from + 1);
}

Peak peak_and_drawdown(std::span<const double> series) {
  if (series.empty()) throw std::invalid_argument("peak of an empty series");
  Peak peak;
  for (std::size_t t = 0; t < series.size(); ++t) {
    if (series[t] > series[peak.round]) peak.round = t;
  }
  peak.price = series[peak.round];
  for (std::size_t t = peak.round; t < series.size(); ++t) {
    const double fall = (peak.price - series[t]) / peak.price;
    if (fall > peak.max_drawdown) peak.max_drawdown = fall;
  }
  return peak;
}

double oscillation_magnitude(std::span<const double> series, std::size_t window) {
  if (window == 0 || window > series.size()) throw std::invalid_argument("oscillation window is empty or too long");
  const auto tail = series.last(window);
  double mean = 0.0;
  for (double p : tail) mean += p;
  mean /= static_cast<double>(window);
  double ss = 0.0;
  for (double p : tail) ss += (p - mean) * (p - mean);
  return std::sqrt(ss / static_cast<double>(window));
}

std::optional<std::int64_t> convergence_time(std::span<const double> series, std::int64_t shock_round, double target,
                                             double tol, std::int64_t sustain) {
  const auto n = static_cast<std::int64_t>(series.size());
  if (shock_round < 0 || shock_round >= n) throw std::invalid_argument("shock round outside the series");
  if (sustain < 1) sustain = 1;
  std::int64_t run = 0;
  for (std::int64_t s = shock_round; s < n; ++s) {
    const bool inside = std::abs(series[static_cast<std::size_t>(s)] - target) / target <= tol;
    run = inside ? run + 1 : 0;
    if (run == sustain) return s - sustain + 1;
  }
  return std::nullopt;
}

}  // namespace bsim
