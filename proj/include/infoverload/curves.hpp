#pragma once

// Parametric families for the subjective success probability lambda(i) and the
// elaboration cost xi(i). Both are immutable values with closed-form first
// derivatives.

#include <string>
#include <string_view>
#include <vector>

namespace infoverload {

enum class SuccessFamily { ExpSaturating, Hyperbolic };
enum class CostFamily { Power, ExpGrowth, Zero };

std::string_view to_string(SuccessFamily family) noexcept;
std::string_view to_string(CostFamily family) noexcept;

/// Increasing, strictly concave success probability with lambda(0) = 0 and
/// lambda -> 1 as i -> infinity.
///
///   ExpSaturating(a):  1 - exp(-a i)
///   Hyperbolic(k):     i / (i + k)
class SuccessCurve {
 public:
  static SuccessCurve exp_saturating(double rate);
  static SuccessCurve hyperbolic(double half_saturation);

  SuccessFamily family() const noexcept { return family_; }
  /// `a` for ExpSaturating, `k` for Hyperbolic.
  double parameter() const noexcept { return param_; }

  friend bool operator==(const SuccessCurve&, const SuccessCurve&) = default;

 private:
  SuccessCurve(SuccessFamily family, double param) : family_(family), param_(param) {}

  SuccessFamily family_;
  double param_;
};

/// Convex elaboration cost with xi(0) = 0.
///
///   Power(c, p):      c i^p            (p > 1)
///   ExpGrowth(c, b):  c (exp(b i) - 1)
///   Zero:             0                (degenerate, costless information)
class CostCurve {
 public:
  static CostCurve power(double scale, double exponent);
  static CostCurve exp_growth(double scale, double rate);
  static CostCurve zero() noexcept { return CostCurve(CostFamily::Zero, 0.0, 0.0); }

  CostFamily family() const noexcept { return family_; }
  bool is_zero() const noexcept { return family_ == CostFamily::Zero; }
  /// `c`; zero for the Zero family.
  double scale() const noexcept { return scale_; }
  /// `p` for Power, `b` for ExpGrowth, zero for the Zero family.
  double shape() const noexcept { return shape_; }

  /// Same family and shape with the scale multiplied by `factor` (> 0).
  CostCurve scaled(double factor) const;

  friend bool operator==(const CostCurve&, const CostCurve&) = default;

 private:
  CostCurve(CostFamily family, double scale, double shape)
      : family_(family), scale_(scale), shape_(shape) {}

  CostFamily family_;
  double scale_;
  double shape_;
};

double eval_success(const SuccessCurve& curve, double i);
double eval_success_deriv(const SuccessCurve& curve, double i);
/// 1 - lambda(i) in closed form. Stays positive where eval_success has
/// already rounded to 1.0.
double eval_failure(const SuccessCurve& curve, double i);

double eval_cost(const CostCurve& curve, double i);
double eval_cost_deriv(const CostCurve& curve, double i);

/// Throws ParameterDomainError unless `i` is finite and non-negative.
void require_information_level(double i, std::string_view what = "information level");

enum class CheckStatus { Pass, Fail, Skipped };

struct CurveCheck {
  std::string name;
  CheckStatus status;
  std::string detail;
};

struct ValidationReport {
  std::vector<CurveCheck> checks;
  bool muthian_degenerate = false;

  bool passed() const noexcept;
  const CurveCheck* find(std::string_view name) const noexcept;
};

/// Probes the sign and curvature constraints on a log-spaced grid over
/// (0, probe_max]. Failures are reported, never thrown.
ValidationReport validate_curves(const SuccessCurve& success, const CostCurve& cost,
                                 double probe_max);

}  // namespace infoverload
