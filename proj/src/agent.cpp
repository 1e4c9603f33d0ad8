#include "infoverload/agent.hpp"

#include <cmath>
#include <sstream>

#include "infoverload/errors.hpp"

namespace infoverload {

namespace {

constexpr double kRootTolerance = 1e-9;
constexpr int kMaxDoublings = 1100;

}  // namespace

Trader::Trader(double gain, double loss, SuccessCurve success, CostCurve cost)
    : gain_(gain), loss_(loss), success_(success), cost_(cost) {
  if (!std::isfinite(gain) || gain <= 0.0) {
    throw ParameterDomainError("gain W must be positive and finite");
  }
  if (!std::isfinite(loss) || loss <= 0.0) {
    throw ParameterDomainError("loss L must be positive and finite");
  }
}

double UnconstrainedOptimum::level() const {
  if (unbounded_) throw PreconditionError("unbounded optimum has no finite level");
  return level_;
}

std::string_view to_string(Regime regime) noexcept {
  switch (regime) {
    case Regime::CornerZero: return "corner_zero";
    case Regime::Interior: return "interior";
    case Regime::FullyInformed: return "fully_informed";
  }
  return "unknown";
}

double expected_return(double lambda, double gain, double loss) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    std::ostringstream os;
    os << "success probability must lie in [0, 1], got " << lambda;
    throw ParameterDomainError(os.str());
  }
  return lambda * gain - (1.0 - lambda) * loss;
}

double expected_utility(const Trader& trader, double i) {
  const double lambda = eval_success(trader.success(), i);
  return expected_return(lambda, trader.gain(), trader.loss()) - eval_cost(trader.cost(), i);
}

double marginal_utility(const Trader& trader, double i) {
  return eval_success_deriv(trader.success(), i) * (trader.gain() + trader.loss()) -
         eval_cost_deriv(trader.cost(), i);
}

UnconstrainedOptimum unconstrained_optimum(const Trader& trader) {
  if (trader.cost().is_zero()) return UnconstrainedOptimum::unbounded();

  auto g = [&](double i) {
    const double v = marginal_utility(trader, i);
    if (std::isnan(v)) {
      std::ostringstream os;
      os << "marginal utility is NaN at i=" << i;
      throw NumericRangeError(os.str());
    }
    return v;
  };

  if (g(0.0) <= 0.0) return UnconstrainedOptimum::finite(0.0);

  double lo = 0.0;
  double hi = 1.0;
  int doublings = 0;
  while (g(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi) || ++doublings > kMaxDoublings) {
      throw NumericRangeError("no sign change in marginal utility before overflow");
    }
  }
  while (hi - lo > kRootTolerance * (1.0 + lo)) {
    const double mid = lo + 0.5 * (hi - lo);
    if (g(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return UnconstrainedOptimum::finite(lo + 0.5 * (hi - lo));
}

AgentOutcome optimize_information(const Trader& trader, double i_max) {
  require_information_level(i_max, "i_max");
  return optimize_information(trader, i_max, unconstrained_optimum(trader));
}

AgentOutcome optimize_information(const Trader& trader, double i_max,
                                  const UnconstrainedOptimum& optimum) {
  require_information_level(i_max, "i_max");
  if (i_max <= 0.0) throw ParameterDomainError("i_max must be positive");

  AgentOutcome out;
  if (optimum.covers(i_max)) {
    out.i_star = i_max;
    out.regime = Regime::FullyInformed;
    out.fully_informed = true;
  } else {
    out.i_star = optimum.level();
    out.regime = out.i_star == 0.0 ? Regime::CornerZero : Regime::Interior;
  }
  out.u_star = expected_utility(trader, out.i_star);
  return out;
}

AgentOutcome grid_oracle(const Trader& trader, double i_max, double step) {
  require_information_level(i_max, "i_max");
  if (!std::isfinite(step) || step <= 0.0 || step > i_max) {
    throw ParameterDomainError("grid step must satisfy 0 < step <= i_max");
  }
  const auto n = static_cast<long long>(std::floor(i_max / step * (1.0 + 1e-12)));

  double best_i = 0.0;
  double best_u = expected_utility(trader, 0.0);
  auto visit = [&](double i) {
    const double u = expected_utility(trader, i);
    if (u > best_u) {
      best_u = u;
      best_i = i;
    }
  };
  for (long long k = 1; k < n; ++k) visit(static_cast<double>(k) * step);
  // The last multiple of step either is i_max (up to rounding) or falls short of it.
  const double last = static_cast<double>(n) * step;
  if (n >= 1 && i_max - last > 1e-12 * i_max) visit(last);
  visit(i_max);

  AgentOutcome out;
  out.i_star = best_i;
  out.u_star = best_u;
  if (best_i == 0.0) {
    out.regime = Regime::CornerZero;
  } else if (best_i == i_max) {
    out.regime = Regime::FullyInformed;
    out.fully_informed = true;
  } else {
    out.regime = Regime::Interior;
  }
  return out;
}

}  // namespace infoverload
