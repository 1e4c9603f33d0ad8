#pragma once

// A single risk-neutral trader choosing how much information to process.
//
// Expected utility with elaboration cost:
//   E[U(i)] = lambda(i) W - (1 - lambda(i)) L - xi(i)
// Marginal utility g(i) = lambda'(i) (W + L) - xi'(i) is strictly decreasing
// for any non-Zero cost, so the constrained optimum on [0, i_max] is
// min(i_u, i_max) where g(i_u) = 0.

#include <string_view>

#include "infoverload/curves.hpp"

namespace infoverload {

class Trader {
 public:
  /// Throws ParameterDomainError unless gain and loss are positive and finite.
  Trader(double gain, double loss, SuccessCurve success, CostCurve cost);

  double gain() const noexcept { return gain_; }
  double loss() const noexcept { return loss_; }
  const SuccessCurve& success() const noexcept { return success_; }
  const CostCurve& cost() const noexcept { return cost_; }

  Trader with_cost(CostCurve cost) const { return {gain_, loss_, success_, cost}; }

  friend bool operator==(const Trader&, const Trader&) = default;

 private:
  double gain_;
  double loss_;
  SuccessCurve success_;
  CostCurve cost_;
};

/// Maximizer of E[U] over [0, infinity). Unbounded only for the Zero cost
/// family, where utility increases without limit in i.
class UnconstrainedOptimum {
 public:
  static UnconstrainedOptimum finite(double level) { return UnconstrainedOptimum(false, level); }
  static UnconstrainedOptimum unbounded() { return UnconstrainedOptimum(true, 0.0); }

  bool is_unbounded() const noexcept { return unbounded_; }
  /// Throws PreconditionError when unbounded.
  double level() const;
  /// True if a trader with this optimum uses all of `i_max`.
  bool covers(double i_max) const noexcept { return unbounded_ || level_ >= i_max; }

  friend bool operator==(const UnconstrainedOptimum&, const UnconstrainedOptimum&) = default;

 private:
  UnconstrainedOptimum(bool unbounded, double level) : unbounded_(unbounded), level_(level) {}

  bool unbounded_;
  double level_;
};

enum class Regime { CornerZero, Interior, FullyInformed };

std::string_view to_string(Regime regime) noexcept;

struct AgentOutcome {
  double i_star = 0.0;
  double u_star = 0.0;
  Regime regime = Regime::CornerZero;
  bool fully_informed = false;
};

/// lambda W - (1 - lambda) L. Throws ParameterDomainError if lambda is outside [0, 1].
double expected_return(double lambda, double gain, double loss);

double expected_utility(const Trader& trader, double i);
double marginal_utility(const Trader& trader, double i);

/// Bracket by doubling, then bisect to a width of 1e-9 (1 + i).
/// Throws NumericRangeError if no sign change is found before overflow.
UnconstrainedOptimum unconstrained_optimum(const Trader& trader);

AgentOutcome optimize_information(const Trader& trader, double i_max);
/// Same as above with a precomputed unconstrained optimum.
AgentOutcome optimize_information(const Trader& trader, double i_max,
                                  const UnconstrainedOptimum& optimum);

/// Brute-force argmax of expected_utility on {0, step, 2 step, ..., i_max}
/// (i_max always included). Ties go to the smallest i.
AgentOutcome grid_oracle(const Trader& trader, double i_max, double step);

}  // namespace infoverload
