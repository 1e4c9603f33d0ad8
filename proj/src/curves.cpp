#include "infoverload/curves.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "infoverload/errors.hpp"

namespace infoverload {

namespace {

void require_positive(double value, const char* name) {
  if (!std::isfinite(value) || value <= 0.0) {
    std::ostringstream os;
    os << name << " must be a positive finite number, got " << value;
    throw ParameterDomainError(os.str());
  }
}

}  // namespace

std::string_view to_string(SuccessFamily family) noexcept {
  switch (family) {
    case SuccessFamily::ExpSaturating: return "exp_saturating";
    case SuccessFamily::Hyperbolic: return "hyperbolic";
  }
  return "unknown";
}

std::string_view to_string(CostFamily family) noexcept {
  switch (family) {
    case CostFamily::Power: return "power";
    case CostFamily::ExpGrowth: return "exp_growth";
    case CostFamily::Zero: return "zero";
  }
  return "unknown";
}

SuccessCurve SuccessCurve::exp_saturating(double rate) {
  require_positive(rate, "success rate a");
  return {SuccessFamily::ExpSaturating, rate};
}

SuccessCurve SuccessCurve::hyperbolic(double half_saturation) {
  require_positive(half_saturation, "half-saturation k");
  return {SuccessFamily::Hyperbolic, half_saturation};
}

CostCurve CostCurve::power(double scale, double exponent) {
  require_positive(scale, "cost scale c");
  if (!std::isfinite(exponent) || exponent <= 1.0) {
    std::ostringstream os;
    os << "power exponent p must exceed 1 for a strictly convex cost, got " << exponent;
    throw ParameterDomainError(os.str());
  }
  return {CostFamily::Power, scale, exponent};
}

CostCurve CostCurve::exp_growth(double scale, double rate) {
  require_positive(scale, "cost scale c");
  require_positive(rate, "cost growth rate b");
  return {CostFamily::ExpGrowth, scale, rate};
}

CostCurve CostCurve::scaled(double factor) const {
  require_positive(factor, "cost scale multiplier");
  switch (family_) {
    case CostFamily::Power: return power(scale_ * factor, shape_);
    case CostFamily::ExpGrowth: return exp_growth(scale_ * factor, shape_);
    case CostFamily::Zero: return *this;
  }
  return *this;
}

void require_information_level(double i, std::string_view what) {
  if (!std::isfinite(i) || i < 0.0) {
    std::ostringstream os;
    os << what << " must be finite and non-negative, got " << i;
    throw ParameterDomainError(os.str());
  }
}

double eval_success(const SuccessCurve& curve, double i) {
  require_information_level(i);
  const double p = curve.parameter();
  switch (curve.family()) {
    case SuccessFamily::ExpSaturating: return -std::expm1(-p * i);
    case SuccessFamily::Hyperbolic: return i / (i + p);
  }
  return 0.0;
}

double eval_success_deriv(const SuccessCurve& curve, double i) {
  require_information_level(i);
  const double p = curve.parameter();
  switch (curve.family()) {
    case SuccessFamily::ExpSaturating: return p * std::exp(-p * i);
    case SuccessFamily::Hyperbolic: return p / ((i + p) * (i + p));
  }
  return 0.0;
}

double eval_failure(const SuccessCurve& curve, double i) {
  require_information_level(i);
  const double p = curve.parameter();
  switch (curve.family()) {
    case SuccessFamily::ExpSaturating: return std::exp(-p * i);
    case SuccessFamily::Hyperbolic: return p / (i + p);
  }
  return 1.0;
}

double eval_cost(const CostCurve& curve, double i) {
  require_information_level(i);
  switch (curve.family()) {
    case CostFamily::Power: return curve.scale() * std::pow(i, curve.shape());
    case CostFamily::ExpGrowth: return curve.scale() * std::expm1(curve.shape() * i);
    case CostFamily::Zero: return 0.0;
  }
  return 0.0;
}

double eval_cost_deriv(const CostCurve& curve, double i) {
  require_information_level(i);
  const double c = curve.scale();
  const double s = curve.shape();
  switch (curve.family()) {
    case CostFamily::Power: return c * s * std::pow(i, s - 1.0);
    case CostFamily::ExpGrowth: return c * s * std::exp(s * i);
    case CostFamily::Zero: return 0.0;
  }
  return 0.0;
}

bool ValidationReport::passed() const noexcept {
  return std::none_of(checks.begin(), checks.end(),
                      [](const CurveCheck& c) { return c.status == CheckStatus::Fail; });
}

const CurveCheck* ValidationReport::find(std::string_view name) const noexcept {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

namespace {

constexpr int kProbePoints = 200;
constexpr double kProbeSpan = 1e-6;  // smallest probe = probe_max * kProbeSpan

std::vector<double> log_probe_grid(double probe_max) {
  std::vector<double> grid(kProbePoints);
  const double lo = std::log(probe_max * kProbeSpan);
  const double hi = std::log(probe_max);
  for (int k = 0; k < kProbePoints; ++k) {
    grid[k] = std::exp(lo + (hi - lo) * k / (kProbePoints - 1));
  }
  grid.back() = probe_max;
  return grid;
}

// Secant slopes between consecutive probes must be monotone (sign = -1 for
// concave, +1 for convex), up to the rounding noise of the function values.
template <typename F>
CurveCheck curvature_check(std::string name, const std::vector<double>& grid, F f, int sign) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  std::vector<double> values(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) values[k] = f(grid[k]);
  for (std::size_t k = 1; k + 1 < grid.size(); ++k) {
    const double dx0 = grid[k] - grid[k - 1];
    const double dx1 = grid[k + 1] - grid[k];
    const double s0 = (values[k] - values[k - 1]) / dx0;
    const double s1 = (values[k + 1] - values[k]) / dx1;
    const double noise = 8.0 * eps *
                         (std::abs(values[k - 1]) + std::abs(values[k]) + std::abs(values[k + 1])) /
                         std::min(dx0, dx1);
    if (sign * (s1 - s0) < -noise) {
      std::ostringstream os;
      os << "secant slope " << (sign < 0 ? "increases" : "decreases") << " near i=" << grid[k];
      return {std::move(name), CheckStatus::Fail, os.str()};
    }
  }
  return {std::move(name), CheckStatus::Pass, {}};
}

template <typename F>
CurveCheck positivity_check(std::string name, const std::vector<double>& grid, F f) {
  for (double x : grid) {
    if (!(f(x) > 0.0)) {
      std::ostringstream os;
      os << "non-positive derivative at i=" << x;
      return {std::move(name), CheckStatus::Fail, os.str()};
    }
  }
  return {std::move(name), CheckStatus::Pass, {}};
}

}  // namespace

ValidationReport validate_curves(const SuccessCurve& success, const CostCurve& cost,
                                 double probe_max) {
  if (!std::isfinite(probe_max) || probe_max <= 0.0) {
    throw ParameterDomainError("probe_max must be positive and finite");
  }
  const auto grid = log_probe_grid(probe_max);
  ValidationReport report;
  auto& checks = report.checks;

  checks.push_back({"success_zero_at_origin",
                    eval_success(success, 0.0) == 0.0 ? CheckStatus::Pass : CheckStatus::Fail,
                    {}});
  checks.push_back({"cost_zero_at_origin",
                    eval_cost(cost, 0.0) == 0.0 ? CheckStatus::Pass : CheckStatus::Fail, {}});
  checks.push_back(positivity_check("success_increasing", grid,
                                    [&](double x) { return eval_success_deriv(success, x); }));
  checks.push_back(curvature_check(
      "success_concave", grid, [&](double x) { return eval_success(success, x); }, -1));

  CurveCheck below_one{"success_below_one", CheckStatus::Pass, {}};
  for (double x : grid) {
    if (eval_success(success, x) > 1.0 || !(eval_failure(success, x) > 0.0)) {
      below_one.status = CheckStatus::Fail;
      below_one.detail = "success probability reaches 1 at i=" + std::to_string(x);
      break;
    }
  }
  checks.push_back(std::move(below_one));

  if (cost.is_zero()) {
    report.muthian_degenerate = true;
    checks.push_back({"cost_increasing", CheckStatus::Skipped, "Muthian degenerate"});
    checks.push_back({"cost_convex", CheckStatus::Skipped, "Muthian degenerate"});
  } else {
    checks.push_back(positivity_check("cost_increasing", grid,
                                      [&](double x) { return eval_cost_deriv(cost, x); }));
    checks.push_back(curvature_check(
        "cost_convex", grid, [&](double x) { return eval_cost(cost, x); }, +1));
  }
  return report;
}

}  // namespace infoverload
