#pragma once

// Utility curves and efficiency phase diagrams over the available information
// i_max and the severity of elaboration costs.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "infoverload/agent.hpp"
#include "infoverload/market.hpp"

namespace infoverload {

struct UtilityPoint {
  double i = 0.0;
  double expected_utility = 0.0;
};

struct UtilityCurve {
  Trader trader;
  std::vector<UtilityPoint> points;
  std::size_t argmax = 0;  // index into points; ties go to the smallest i

  const UtilityPoint& peak() const { return points.at(argmax); }
};

/// E[U] on n_points uniform points over [0, i_max]. Throws ConfigError if
/// n_points < 2.
UtilityCurve utility_curve(const Trader& trader, double i_max, std::size_t n_points);

/// Number of sign changes in the first differences of the curve (zero
/// differences are skipped).
std::size_t first_difference_sign_changes(const UtilityCurve& curve);

struct PhasePoint {
  double i_max = 0.0;
  double fraction_informed = 0.0;
  bool efficient = false;
};

struct PhaseSeries {
  double theta = 0.0;
  std::vector<PhasePoint> points;
  /// Largest grid i_max at which the market is efficient.
  std::optional<double> critical_imax;
};

/// Runs the market at every grid value. Throws ConfigError for an empty or
/// non-increasing grid, InvariantViolation if the efficient verdicts are not a
/// prefix of the series.
PhaseSeries sweep_imax(std::span<const Trader> traders, std::span<const double> i_max_grid,
                       double theta);

/// Result of the closed-form critical level: the ceil(theta n)-th largest
/// unconstrained optimum.
struct CriticalLevel {
  enum class Kind { Absent, Finite, Unbounded };
  Kind kind = Kind::Absent;
  double level = 0.0;  // meaningful only for Finite

  static CriticalLevel absent() { return {Kind::Absent, 0.0}; }
  static CriticalLevel finite(double v) { return {Kind::Finite, v}; }
  static CriticalLevel unbounded() { return {Kind::Unbounded, 0.0}; }
};

/// Smallest count m with m / n >= theta, evaluated in the same floating-point
/// arithmetic as the market's verdict.
std::size_t required_informed_count(std::size_t n, double theta);

CriticalLevel critical_imax_quantile(std::span<const Trader> traders, double theta);
CriticalLevel critical_imax_quantile(std::span<const UnconstrainedOptimum> optima, double theta);

struct PhaseDiagram {
  std::vector<double> i_max_grid;
  std::vector<double> cost_multipliers;
  std::vector<PhaseSeries> rows;  // one per multiplier
};

/// For each multiplier, scales every trader's cost and sweeps i_max. Throws
/// InvariantViolation if a larger multiplier yields a larger critical i_max.
PhaseDiagram sweep_2d(std::span<const Trader> traders, std::span<const double> i_max_grid,
                      std::span<const double> cost_multipliers, double theta);

std::vector<double> linear_grid(double start, double stop, std::size_t count);
std::vector<double> geometric_grid(double start, double stop, std::size_t count);

}  // namespace infoverload
