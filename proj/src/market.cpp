#include "infoverload/market.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "infoverload/detail/parallel.hpp"
#include "infoverload/errors.hpp"

namespace infoverload {

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform in [0, 1) from the top 53 bits; identical on every platform.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double draw(std::mt19937_64& rng, const Interval& interval) {
  const double u = unit_uniform(rng);
  if (interval.degenerate()) return interval.lo;
  return interval.lo + (interval.hi - interval.lo) * u;
}

void validate_interval(const Interval& interval, const std::string& field, double floor = 0.0) {
  if (!std::isfinite(interval.lo) || !std::isfinite(interval.hi)) {
    throw ConfigError(field, "interval bounds must be finite");
  }
  if (interval.lo > interval.hi) {
    throw ConfigError(field, "degenerate interval: lower bound exceeds upper bound");
  }
  if (interval.lo <= floor) {
    std::ostringstream os;
    os << "lower bound must exceed " << floor;
    if (floor == 1.0) os << " (convex power cost requires p > 1)";
    throw ConfigError(field, os.str());
  }
}

}  // namespace

std::size_t PopulationSpec::n_agents() const noexcept {
  std::size_t n = 0;
  for (const auto& c : cohorts) n += c.n_agents;
  return n;
}

void PopulationSpec::validate() const {
  if (cohorts.empty()) throw ConfigError("cohorts", "at least one cohort is required");
  for (std::size_t k = 0; k < cohorts.size(); ++k) {
    const auto& c = cohorts[k];
    const std::string base = "cohorts[" + std::to_string(k) + "]";
    if (c.n_agents < 1) throw ConfigError(base + ".n_agents", "must be at least 1");
    validate_interval(c.gain, base + ".gain");
    validate_interval(c.loss, base + ".loss");
    validate_interval(c.success.param, base + ".success.param");
    if (c.cost.family != CostFamily::Zero) {
      validate_interval(c.cost.scale, base + ".cost.scale");
      validate_interval(c.cost.shape, base + ".cost.shape",
                        c.cost.family == CostFamily::Power ? 1.0 : 0.0);
    }
  }
}

void MarketConfig::validate() const {
  if (!std::isfinite(i_max) || i_max <= 0.0) {
    throw ConfigError("i_max", "must be positive and finite");
  }
  if (!(theta > 0.0 && theta <= 1.0)) throw ConfigError("theta", "must lie in (0, 1]");
}

std::uint64_t substream_seed(std::uint64_t master_seed, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(master_seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

std::vector<Trader> sample_population(const PopulationSpec& spec) {
  spec.validate();
  std::vector<Trader> traders;
  traders.reserve(spec.n_agents());
  std::uint64_t index = 0;
  for (const auto& cohort : spec.cohorts) {
    for (std::size_t k = 0; k < cohort.n_agents; ++k, ++index) {
      std::mt19937_64 rng(substream_seed(spec.master_seed, index));
      const double gain = draw(rng, cohort.gain);
      const double loss = draw(rng, cohort.loss);
      const double success_param = draw(rng, cohort.success.param);
      const double scale = draw(rng, cohort.cost.scale);
      const double shape = draw(rng, cohort.cost.shape);

      const auto success = cohort.success.family == SuccessFamily::ExpSaturating
                               ? SuccessCurve::exp_saturating(success_param)
                               : SuccessCurve::hyperbolic(success_param);
      CostCurve cost = CostCurve::zero();
      if (cohort.cost.family == CostFamily::Power) cost = CostCurve::power(scale, shape);
      if (cohort.cost.family == CostFamily::ExpGrowth) cost = CostCurve::exp_growth(scale, shape);
      traders.emplace_back(gain, loss, success, cost);
    }
  }
  return traders;
}

std::vector<UnconstrainedOptimum> solve_optima(std::span<const Trader> traders) {
  std::vector<UnconstrainedOptimum> optima(traders.size(), UnconstrainedOptimum::finite(0.0));
  detail::parallel_for(traders.size(), [&](std::size_t k) {
    try {
      optima[k] = unconstrained_optimum(traders[k]);
    } catch (const NumericRangeError& e) {
      throw NumericRangeError("agent " + std::to_string(k) + ": " + e.what());
    }
  });
  return optima;
}

MarketOutcome run_market(const MarketConfig& config, std::span<const Trader> traders,
                         bool keep_agents) {
  config.validate();
  const auto optima = solve_optima(traders);
  return run_market(config, traders, optima, keep_agents);
}

MarketOutcome run_market(const MarketConfig& config, std::span<const Trader> traders,
                         std::span<const UnconstrainedOptimum> optima, bool keep_agents) {
  config.validate();
  if (traders.empty()) throw PreconditionError("market needs at least one trader");
  if (optima.size() != traders.size()) {
    throw PreconditionError("one unconstrained optimum per trader is required");
  }

  std::vector<AgentRecord> records(traders.size());
  detail::parallel_for(traders.size(), [&](std::size_t k) {
    try {
      records[k].optimum = optima[k];
      records[k].outcome = optimize_information(traders[k], config.i_max, optima[k]);
    } catch (const Error& e) {
      throw NumericRangeError("agent " + std::to_string(k) + ": " + e.what());
    }
  });

  MarketOutcome out;
  std::size_t informed = 0;
  double utility_sum = 0.0;
  for (auto& r : records) {
    switch (r.outcome.regime) {
      case Regime::CornerZero: ++out.counts.corner_zero; break;
      case Regime::Interior: ++out.counts.interior; break;
      case Regime::FullyInformed: ++out.counts.fully_informed; break;
    }
    utility_sum += r.outcome.u_star;
    r.participant = !(config.participation_rule && r.outcome.u_star < 0.0);
    if (!r.participant) {
      ++out.excluded;
    } else if (r.outcome.fully_informed) {
      ++informed;
    }
  }
  const std::size_t denominator = records.size() - out.excluded;
  out.fraction_informed =
      denominator == 0 ? 0.0 : static_cast<double>(informed) / static_cast<double>(denominator);
  out.efficient = out.fraction_informed >= config.theta;
  out.mean_utility = utility_sum / static_cast<double>(records.size());
  if (keep_agents) out.agents = std::move(records);
  return out;
}

ConjectureVerdict check_conjecture1(std::span<const Trader> traders, double i_max, double theta) {
  for (std::size_t k = 0; k < traders.size(); ++k) {
    if (!traders[k].cost().is_zero()) {
      throw PreconditionError("conjecture 1 requires costless elaboration; agent " +
                              std::to_string(k) + " has a " +
                              std::string(to_string(traders[k].cost().family())) + " cost");
    }
  }
  MarketConfig config{i_max, theta, false};
  const auto outcome = run_market(config, traders);

  ConjectureVerdict v{"conjecture1", true, {}, std::nullopt};
  for (std::size_t k = 0; k < outcome.agents.size(); ++k) {
    const auto& a = outcome.agents[k].outcome;
    if (a.i_star != i_max || !a.fully_informed) {
      std::ostringstream os;
      os << "agent " << k << " chose i=" << a.i_star << " below i_max=" << i_max;
      v = {"conjecture1", false, os.str(), k};
      return v;
    }
  }
  if (!outcome.efficient) {
    v.passed = false;
    v.detail = "market classified inefficient although every agent is fully informed";
    return v;
  }
  std::ostringstream os;
  os << traders.size() << " Muthian agents all at i_max=" << i_max << "; efficient";
  v.detail = os.str();
  return v;
}

Conjecture2Verdict check_conjecture2(const MarketLeg& efficient_leg,
                                     const MarketLeg& inefficient_leg) {
  Conjecture2Verdict out;
  out.verdict.name = "conjecture2";
  if (efficient_leg.config.i_max != inefficient_leg.config.i_max) {
    out.verdict.detail = "misconfigured: legs must share the same i_max";
    return out;
  }
  out.efficient_outcome = run_market(efficient_leg.config, efficient_leg.traders);
  out.inefficient_outcome = run_market(inefficient_leg.config, inefficient_leg.traders);

  const auto& e = out.efficient_outcome;
  const auto& n = out.inefficient_outcome;
  out.efficient_leg_passed = e.efficient && e.counts.interior > 0;
  out.inefficient_leg_passed = !n.efficient && n.counts.interior > 0;
  out.verdict.passed = out.efficient_leg_passed && out.inefficient_leg_passed;

  std::ostringstream os;
  os << "efficient leg: fraction=" << e.fraction_informed << " theta=" << efficient_leg.config.theta
     << " interior=" << e.counts.interior << (out.efficient_leg_passed ? " ok" : " FAILED")
     << "; inefficient leg: fraction=" << n.fraction_informed
     << " theta=" << inefficient_leg.config.theta << " interior=" << n.counts.interior
     << (out.inefficient_leg_passed ? " ok" : " FAILED");
  if (!out.inefficient_leg_passed && n.efficient) {
    os << " (misconfigured: this population is efficient under its threshold)";
  }
  if (!out.verdict.passed && (e.counts.interior == 0 || n.counts.interior == 0)) {
    os << " (no overloaded interior agent in a leg)";
  }
  out.verdict.detail = os.str();
  return out;
}

Conjecture3Verdict check_conjecture3(std::span<const Trader> traders, double theta,
                                     std::span<const double> schedule, double divergence_bound) {
  for (std::size_t k = 0; k < traders.size(); ++k) {
    if (traders[k].cost().is_zero()) {
      throw PreconditionError("conjecture 3 requires a non-Zero cost; agent " +
                              std::to_string(k) + " is Muthian");
    }
  }
  if (schedule.size() < 10) {
    throw PreconditionError("conjecture 3 schedule needs at least 10 entries");
  }
  for (std::size_t k = 1; k < schedule.size(); ++k) {
    if (!(schedule[k] > schedule[k - 1])) {
      throw PreconditionError("conjecture 3 schedule must be strictly increasing");
    }
  }

  Conjecture3Verdict out;
  out.verdict.name = "conjecture3";
  const auto optima = solve_optima(traders);
  for (double i_max : schedule) {
    const auto outcome = run_market({i_max, theta, false}, traders, optima, false);
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& t : traders) best = std::max(best, expected_utility(t, i_max));
    out.points.push_back({i_max, outcome.fraction_informed, outcome.efficient, best});
  }

  const auto& pts = out.points;
  out.fraction_nonincreasing = true;
  for (std::size_t k = 1; k < pts.size(); ++k) {
    if (pts[k].fraction_informed > pts[k - 1].fraction_informed) out.fraction_nonincreasing = false;
  }
  out.reaches_zero = pts.back().fraction_informed == 0.0;

  // Eventually decreasing: a strictly decreasing tail of at least two points.
  std::size_t onset = pts.size() - 1;
  while (onset > 0 && pts[onset].full_information_utility < pts[onset - 1].full_information_utility) {
    --onset;
  }
  out.utility_diverges =
      onset < pts.size() - 1 && pts.back().full_information_utility < divergence_bound;

  out.stays_inefficient = true;
  bool crossed = false;
  for (const auto& p : pts) {
    crossed = crossed || p.fraction_informed < theta;
    if (crossed && p.efficient) out.stays_inefficient = false;
  }

  out.verdict.passed =
      out.fraction_nonincreasing && out.reaches_zero && out.utility_diverges && out.stays_inefficient;
  std::ostringstream os;
  os << "fraction non-increasing=" << (out.fraction_nonincreasing ? "yes" : "no")
     << "; final fraction=" << pts.back().fraction_informed
     << "; E[U(i_max)] at i_max=" << pts.back().i_max << " is "
     << pts.back().full_information_utility << " (bound " << divergence_bound
     << ", decreasing from i_max=" << pts[onset].i_max << ")"
     << "; inefficient after crossing=" << (out.stays_inefficient ? "yes" : "no");
  out.verdict.detail = os.str();
  return out;
}

ReturnSample simulate_muthian_returns(const ReturnModel& model, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw PreconditionError("return sample size must be at least 1");
  if (!std::isfinite(model.r_of)) throw ParameterDomainError("r_of must be finite");
  if (!std::isfinite(model.noise_sd) || model.noise_sd < 0.0) {
    throw ParameterDomainError("noise_sd must be finite and non-negative");
  }

  ReturnSample out;
  out.draws.resize(n, model.r_of);
  if (model.noise_sd > 0.0) {
    std::mt19937_64 rng(splitmix64(seed));
    std::normal_distribution<double> noise(0.0, model.noise_sd);
    for (auto& r : out.draws) r = model.r_of + noise(rng);
  }

  // shifted by the first draw so a constant sample has mean r_of and sd 0 exactly
  const double shift = out.draws.front();
  double sum = 0.0;
  for (double r : out.draws) sum += r - shift;
  const double dm = sum / static_cast<double>(n);
  out.mean = shift + dm;
  if (n > 1) {
    double ss = 0.0;
    for (double r : out.draws) ss += (r - shift - dm) * (r - shift - dm);
    out.sd = std::sqrt(ss / static_cast<double>(n - 1));
  }
  return out;
}

}  // namespace infoverload
