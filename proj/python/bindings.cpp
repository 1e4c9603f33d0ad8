#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "infoverload/agent.hpp"
#include "infoverload/commands.hpp"
#include "infoverload/config.hpp"
#include "infoverload/curves.hpp"
#include "infoverload/errors.hpp"
#include "infoverload/market.hpp"
#include "infoverload/sweep.hpp"

namespace py = pybind11;
using namespace infoverload;

namespace {

std::optional<double> critical_value(const CriticalLevel& c) {
  if (c.kind == CriticalLevel::Kind::Finite) return c.level;
  if (c.kind == CriticalLevel::Kind::Unbounded) return std::numeric_limits<double>::infinity();
  return std::nullopt;
}

py::dict verdict_dict(const ConjectureVerdict& v) {
  py::dict d;
  d["name"] = v.name;
  d["passed"] = v.passed;
  d["detail"] = v.detail;
  d["counterexample"] = v.counterexample;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Information overload and market efficiency";
  m.attr("__version__") = std::string(kToolVersion);

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParameterDomainError>(m, "ParameterDomainError", PyExc_ValueError);
  py::register_exception<NumericRangeError>(m, "NumericRangeError", PyExc_ArithmeticError);
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<InvariantViolation>(m, "InvariantViolation", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::enum_<Regime>(m, "Regime")
      .value("CornerZero", Regime::CornerZero)
      .value("Interior", Regime::Interior)
      .value("FullyInformed", Regime::FullyInformed);

  py::class_<SuccessCurve>(m, "SuccessCurve")
      .def_static("exp_saturating", &SuccessCurve::exp_saturating, py::arg("rate"))
      .def_static("hyperbolic", &SuccessCurve::hyperbolic, py::arg("k"))
      .def_property_readonly("family", [](const SuccessCurve& c) { return std::string(to_string(c.family())); })
      .def_property_readonly("parameter", &SuccessCurve::parameter)
      .def("__call__", [](const SuccessCurve& c, double i) { return eval_success(c, i); })
      .def("derivative", [](const SuccessCurve& c, double i) { return eval_success_deriv(c, i); });

  py::class_<CostCurve>(m, "CostCurve")
      .def_static("power", &CostCurve::power, py::arg("c"), py::arg("p"))
      .def_static("exp_growth", &CostCurve::exp_growth, py::arg("c"), py::arg("b"))
      .def_static("zero", &CostCurve::zero)
      .def_property_readonly("family", [](const CostCurve& c) { return std::string(to_string(c.family())); })
      .def_property_readonly("scale", &CostCurve::scale)
      .def_property_readonly("shape", &CostCurve::shape)
      .def("scaled", &CostCurve::scaled, py::arg("factor"))
      .def("__call__", [](const CostCurve& c, double i) { return eval_cost(c, i); })
      .def("derivative", [](const CostCurve& c, double i) { return eval_cost_deriv(c, i); });

  m.def("validate_curves", [](const SuccessCurve& s, const CostCurve& c, double probe_max) {
    const auto report = validate_curves(s, c, probe_max);
    py::dict d;
    d["passed"] = report.passed();
    d["muthian_degenerate"] = report.muthian_degenerate;
    py::dict checks;
    for (const auto& check : report.checks) {
      const char* status = check.status == CheckStatus::Pass   ? "pass"
                           : check.status == CheckStatus::Fail ? "fail"
                                                               : "skipped";
      checks[py::str(check.name)] = py::make_tuple(status, check.detail);
    }
    d["checks"] = checks;
    return d;
  }, py::arg("success"), py::arg("cost"), py::arg("probe_max"));

  py::class_<Trader>(m, "Trader")
      .def(py::init<double, double, SuccessCurve, CostCurve>(), py::arg("gain"), py::arg("loss"),
           py::arg("success"), py::arg("cost"))
      .def_property_readonly("gain", &Trader::gain)
      .def_property_readonly("loss", &Trader::loss)
      .def_property_readonly("success", &Trader::success)
      .def_property_readonly("cost", &Trader::cost);

  py::class_<AgentOutcome>(m, "AgentOutcome")
      .def_readonly("i_star", &AgentOutcome::i_star)
      .def_readonly("u_star", &AgentOutcome::u_star)
      .def_readonly("regime", &AgentOutcome::regime)
      .def_readonly("fully_informed", &AgentOutcome::fully_informed);

  m.def("expected_return", &expected_return, py::arg("lam"), py::arg("gain"), py::arg("loss"));
  m.def("expected_utility", &expected_utility, py::arg("trader"), py::arg("i"));
  m.def("marginal_utility", &marginal_utility, py::arg("trader"), py::arg("i"));
  m.def("unconstrained_optimum", [](const Trader& t) -> double {
    const auto o = unconstrained_optimum(t);
    return o.is_unbounded() ? std::numeric_limits<double>::infinity() : o.level();
  }, py::arg("trader"), "Unconstrained optimum; inf when information is free.");
  m.def("optimize_information",
        py::overload_cast<const Trader&, double>(&optimize_information), py::arg("trader"),
        py::arg("i_max"));
  m.def("grid_oracle", &grid_oracle, py::arg("trader"), py::arg("i_max"), py::arg("step") = 1e-4);

  py::class_<MarketConfig>(m, "MarketConfig")
      .def(py::init([](double i_max, double theta, bool rule) { return MarketConfig{i_max, theta, rule}; }),
           py::arg("i_max"), py::arg("theta"), py::arg("participation_rule") = false)
      .def_readwrite("i_max", &MarketConfig::i_max)
      .def_readwrite("theta", &MarketConfig::theta)
      .def_readwrite("participation_rule", &MarketConfig::participation_rule);

  py::class_<MarketOutcome>(m, "MarketOutcome")
      .def_readonly("fraction_informed", &MarketOutcome::fraction_informed)
      .def_readonly("efficient", &MarketOutcome::efficient)
      .def_readonly("excluded", &MarketOutcome::excluded)
      .def_readonly("mean_utility", &MarketOutcome::mean_utility)
      .def_property_readonly("counts", [](const MarketOutcome& o) {
        py::dict d;
        d["corner_zero"] = o.counts.corner_zero;
        d["interior"] = o.counts.interior;
        d["fully_informed"] = o.counts.fully_informed;
        return d;
      })
      .def_property_readonly("i_star", [](const MarketOutcome& o) {
        std::vector<double> v;
        for (const auto& a : o.agents) v.push_back(a.outcome.i_star);
        return v;
      });

  m.def("run_market", [](const MarketConfig& c, const std::vector<Trader>& traders) {
    return run_market(c, traders);
  }, py::arg("config"), py::arg("traders"));

  m.def("check_conjecture1", [](const std::vector<Trader>& t, double i_max, double theta) {
    return verdict_dict(check_conjecture1(t, i_max, theta));
  }, py::arg("traders"), py::arg("i_max"), py::arg("theta"));
  m.def("check_conjecture2", [](const MarketConfig& ec, const std::vector<Trader>& et,
                                const MarketConfig& ic, const std::vector<Trader>& it) {
    return verdict_dict(check_conjecture2({ec, et}, {ic, it}).verdict);
  }, py::arg("efficient_config"), py::arg("efficient_traders"), py::arg("inefficient_config"),
        py::arg("inefficient_traders"));
  m.def("check_conjecture3", [](const std::vector<Trader>& t, double theta,
                                const std::vector<double>& schedule, double bound) {
    const auto v = check_conjecture3(t, theta, schedule, bound);
    auto d = verdict_dict(v.verdict);
    py::list points;
    for (const auto& p : v.points) {
      points.append(py::make_tuple(p.i_max, p.fraction_informed, p.efficient, p.full_information_utility));
    }
    d["points"] = points;
    return d;
  }, py::arg("traders"), py::arg("theta"), py::arg("schedule"), py::arg("utility_bound") = -1e6);

  m.def("utility_curve", [](const Trader& t, double i_max, std::size_t n) {
    const auto curve = utility_curve(t, i_max, n);
    std::vector<double> is, us;
    for (const auto& p : curve.points) {
      is.push_back(p.i);
      us.push_back(p.expected_utility);
    }
    return py::make_tuple(is, us, curve.argmax, first_difference_sign_changes(curve));
  }, py::arg("trader"), py::arg("i_max"), py::arg("n_points"),
        "Returns (i, expected_utility, argmax index, sign changes).");

  m.def("sweep_imax", [](const std::vector<Trader>& t, const std::vector<double>& grid, double theta) {
    const auto s = sweep_imax(t, grid, theta);
    std::vector<double> fraction;
    std::vector<bool> efficient;
    for (const auto& p : s.points) {
      fraction.push_back(p.fraction_informed);
      efficient.push_back(p.efficient);
    }
    return py::make_tuple(fraction, efficient, s.critical_imax);
  }, py::arg("traders"), py::arg("grid"), py::arg("theta"),
        "Returns (fraction_informed, efficient, critical i_max or None).");
  m.def("critical_imax_quantile", [](const std::vector<Trader>& t, double theta) {
    return critical_value(critical_imax_quantile(t, theta));
  }, py::arg("traders"), py::arg("theta"));
  m.def("required_informed_count", &required_informed_count, py::arg("n"), py::arg("theta"));
  m.def("linear_grid", &linear_grid, py::arg("start"), py::arg("stop"), py::arg("count"));
  m.def("geometric_grid", &geometric_grid, py::arg("start"), py::arg("stop"), py::arg("count"));

  m.def("simulate_muthian_returns", [](double r_of, double noise_sd, std::size_t n, std::uint64_t seed) {
    const auto s = simulate_muthian_returns({r_of, noise_sd}, n, seed);
    return py::make_tuple(s.draws, s.mean, s.sd);
  }, py::arg("r_of"), py::arg("noise_sd"), py::arg("n"), py::arg("seed"),
        "Returns (draws, mean, sd).");

  m.def("sample_population", [](const std::string& config_path) {
    return sample_population(parse_config(config_path).population);
  }, py::arg("config_path"), "Samples the population section of a config file.");

  m.def("run_command", [](const std::string& name, const std::string& config_path,
                          const std::string& out_dir, std::optional<std::uint64_t> seed) {
    auto config = parse_config(config_path);
    if (seed) config.apply_seed(*seed);
    const auto r = run_command(name, config, out_dir);
    return py::make_tuple(r.exit_code, r.files, r.summary);
  }, py::arg("name"), py::arg("config_path"), py::arg("out_dir"), py::arg("seed") = py::none(),
        "Runs a subcommand; returns (exit_code, files, summary).");
}
