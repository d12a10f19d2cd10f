#pragma once

#include <cstdint>
#include <optional>
#include <span>

namespace bsim {

struct Peak {
  std::size_t round = 0;
  double price = 0.0;
  double max_drawdown = 0.0;  // largest relative fall from the peak, in [0, 1]
};

struct SeriesStats {
  double mean_abs_rel_dev = 0.0;
  Peak peak;
  double osc_std = 0.0;
  std::optional<std::int64_t> convergence_time;
};

/// Mean of |p(t) - F(t)| / F(t) over rounds [from, to], inclusive.
/// `fundamentals` is indexed like `series`. Throws std::invalid_argument on
/// an empty or out-of-range window.
double deviation_stats(std::span<const double> series, std::span<const double> fundamentals, std::size_t from,
                       std::size_t to);

/// Global maximum (earliest on ties) and the deepest relative fall after it.
Peak peak_and_drawdown(std::span<const double> series);

/// Population standard deviation of the last `window` values.
double oscillation_magnitude(std::span<const double> series, std::size_t window);

/// First round t >= shock_round such that every p(s), s in [t, t + sustain),
/// is within `tol` (relative) of `target`. The whole sustain span must lie
/// inside the series.
std::optional<std::int64_t> convergence_time(std::span<const double> series, std::int64_t shock_round, double target,
                                             double tol, std::int64_t sustain);

}  // namespace bsim
