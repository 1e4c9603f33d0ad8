#include "infoverload/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "infoverload/errors.hpp"

namespace infoverload {

namespace {

void require_increasing(std::span<const double> grid, const char* field) {
  if (grid.empty()) throw ConfigError(field, "grid must not be empty");
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!std::isfinite(grid[k]) || grid[k] <= 0.0) {
      throw ConfigError(field, "grid values must be positive and finite");
    }
    if (k > 0 && !(grid[k] > grid[k - 1])) {
      throw ConfigError(field, "grid must be strictly increasing");
    }
  }
}

PhaseSeries phase_series(std::span<const Trader> traders,
                         std::span<const UnconstrainedOptimum> optima,
                         std::span<const double> i_max_grid, double theta) {
  PhaseSeries series;
  series.theta = theta;
  series.points.reserve(i_max_grid.size());
  for (double i_max : i_max_grid) {
    const auto outcome = run_market({i_max, theta, false}, traders, optima, false);
    series.points.push_back({i_max, outcome.fraction_informed, outcome.efficient});
  }

  for (std::size_t k = 1; k < series.points.size(); ++k) {
    const auto& prev = series.points[k - 1];
    const auto& cur = series.points[k];
    if (cur.fraction_informed > prev.fraction_informed || (cur.efficient && !prev.efficient)) {
      std::ostringstream os;
      os << "phase series is not monotone at i_max=" << cur.i_max;
      throw InvariantViolation(os.str());
    }
    if (prev.efficient) series.critical_imax = prev.i_max;
  }
  if (series.points.back().efficient) series.critical_imax = series.points.back().i_max;
  return series;
}

}  // namespace

UtilityCurve utility_curve(const Trader& trader, double i_max, std::size_t n_points) {
  if (n_points < 2) throw ConfigError("n_points", "a utility curve needs at least 2 points");
  require_information_level(i_max, "i_max");
  if (i_max <= 0.0) throw ParameterDomainError("i_max must be positive");

  UtilityCurve curve{trader, {}, 0};
  curve.points.reserve(n_points);
  for (std::size_t k = 0; k < n_points; ++k) {
    const double i = k + 1 == n_points ? i_max
                                       : i_max * static_cast<double>(k) /
                                             static_cast<double>(n_points - 1);
    curve.points.push_back({i, expected_utility(trader, i)});
    if (curve.points[k].expected_utility > curve.points[curve.argmax].expected_utility) {
      curve.argmax = k;
    }
  }
  return curve;
}

std::size_t first_difference_sign_changes(const UtilityCurve& curve) {
  std::size_t changes = 0;
  int last_sign = 0;
  for (std::size_t k = 1; k < curve.points.size(); ++k) {
    const double d = curve.points[k].expected_utility - curve.points[k - 1].expected_utility;
    const int sign = (d > 0.0) - (d < 0.0);
    if (sign == 0) continue;
    if (last_sign != 0 && sign != last_sign) ++changes;
    last_sign = sign;
  }
  return changes;
}

PhaseSeries sweep_imax(std::span<const Trader> traders, std::span<const double> i_max_grid,
                       double theta) {
  require_increasing(i_max_grid, "i_max_grid");
  if (traders.empty()) throw PreconditionError("sweep needs at least one trader");
  const auto optima = solve_optima(traders);
  return phase_series(traders, optima, i_max_grid, theta);
}

std::size_t required_informed_count(std::size_t n, double theta) {
  const auto total = static_cast<double>(n);
  auto m = static_cast<std::size_t>(std::ceil(theta * total));
  m = std::min(m, n);
  while (m > 0 && static_cast<double>(m - 1) / total >= theta) --m;
  while (m < n && static_cast<double>(m) / total < theta) ++m;
  return m;
}

CriticalLevel critical_imax_quantile(std::span<const Trader> traders, double theta) {
  const auto optima = solve_optima(traders);
  return critical_imax_quantile(optima, theta);
}

CriticalLevel critical_imax_quantile(std::span<const UnconstrainedOptimum> optima, double theta) {
  if (optima.empty()) throw PreconditionError("critical level needs at least one trader");
  if (!(theta > 0.0 && theta <= 1.0)) throw ConfigError("theta", "must lie in (0, 1]");
  const std::size_t m = required_informed_count(optima.size(), theta);

  // Unbounded optima sort above every finite level.
  std::vector<double> levels;
  levels.reserve(optima.size());
  for (const auto& o : optima) {
    levels.push_back(o.is_unbounded() ? std::numeric_limits<double>::infinity() : o.level());
  }
  std::nth_element(levels.begin(), levels.begin() + static_cast<std::ptrdiff_t>(m - 1),
                   levels.end(), std::greater<>());
  const double q = levels[m - 1];
  if (std::isinf(q)) return CriticalLevel::unbounded();
  if (q == 0.0) return CriticalLevel::absent();
  return CriticalLevel::finite(q);
}

PhaseDiagram sweep_2d(std::span<const Trader> traders, std::span<const double> i_max_grid,
                      std::span<const double> cost_multipliers, double theta) {
  require_increasing(i_max_grid, "i_max_grid");
  require_increasing(cost_multipliers, "cost_multipliers");
  if (traders.empty()) throw PreconditionError("sweep needs at least one trader");

  PhaseDiagram diagram;
  diagram.i_max_grid.assign(i_max_grid.begin(), i_max_grid.end());
  diagram.cost_multipliers.assign(cost_multipliers.begin(), cost_multipliers.end());

  std::vector<Trader> scaled(traders.begin(), traders.end());
  for (double m : cost_multipliers) {
    for (std::size_t k = 0; k < traders.size(); ++k) {
      scaled[k] = traders[k].with_cost(traders[k].cost().scaled(m));
    }
    const auto optima = solve_optima(scaled);
    diagram.rows.push_back(phase_series(scaled, optima, i_max_grid, theta));
  }

  constexpr double kNone = -std::numeric_limits<double>::infinity();
  for (std::size_t r = 1; r < diagram.rows.size(); ++r) {
    const double prev = diagram.rows[r - 1].critical_imax.value_or(kNone);
    const double cur = diagram.rows[r].critical_imax.value_or(kNone);
    if (cur > prev) {
      std::ostringstream os;
      os << "critical i_max grows with cost multiplier at " << cost_multipliers[r];
      throw InvariantViolation(os.str());
    }
  }
  return diagram;
}

std::vector<double> linear_grid(double start, double stop, std::size_t count) {
  if (count == 0) throw ConfigError("count", "grid needs at least one point");
  if (count == 1) return {start};
  std::vector<double> grid(count);
  for (std::size_t k = 0; k < count; ++k) {
    grid[k] = start + (stop - start) * static_cast<double>(k) / static_cast<double>(count - 1);
  }
  grid.back() = stop;
  return grid;
}

std::vector<double> geometric_grid(double start, double stop, std::size_t count) {
  if (!(start > 0.0) || !(stop > 0.0)) {
    throw ConfigError("start", "geometric grid bounds must be positive");
  }
  if (count == 0) throw ConfigError("count", "grid needs at least one point");
  if (count == 1) return {start};
  std::vector<double> grid(count);
  const double ratio = std::log(stop / start);
  for (std::size_t k = 0; k < count; ++k) {
    grid[k] = start * std::exp(ratio * static_cast<double>(k) / static_cast<double>(count - 1));
  }
  grid.front() = start;
  grid.back() = stop;
  return grid;
}

}  // namespace infoverload
