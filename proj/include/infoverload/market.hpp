#pragma once

// Heterogeneous trader populations and the structural efficiency verdict:
// a market is efficient when at least a fraction theta of its traders use all
// of the available information i_max.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "infoverload/agent.hpp"
#include "infoverload/curves.hpp"

namespace infoverload {

/// Closed interval [lo, hi] sampled uniformly; lo == hi is a fixed value.
struct Interval {
  double lo = 1.0;
  double hi = 1.0;

  static Interval point(double v) { return {v, v}; }
  bool degenerate() const noexcept { return lo == hi; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

struct SuccessSpec {
  SuccessFamily family = SuccessFamily::ExpSaturating;
  Interval param;  // a or k

  friend bool operator==(const SuccessSpec&, const SuccessSpec&) = default;
};

struct CostSpec {
  CostFamily family = CostFamily::Power;
  Interval scale;                     // c; ignored for Zero
  Interval shape = Interval::point(2.0);  // p or b; ignored for Zero

  friend bool operator==(const CostSpec&, const CostSpec&) = default;
};

/// A block of agents sharing the same parameter distributions.
struct Cohort {
  std::size_t n_agents = 1;
  Interval gain;
  Interval loss;
  SuccessSpec success;
  CostSpec cost;

  friend bool operator==(const Cohort&, const Cohort&) = default;
};

struct PopulationSpec {
  std::vector<Cohort> cohorts;
  std::uint64_t master_seed = 0;

  std::size_t n_agents() const noexcept;
  /// Throws ConfigError naming the offending field (e.g. `cohorts[1].cost.shape`).
  void validate() const;

  friend bool operator==(const PopulationSpec&, const PopulationSpec&) = default;
};

struct MarketConfig {
  double i_max = 1.0;
  double theta = 0.5;
  /// Exclude agents with negative optimal utility from the efficiency denominator.
  bool participation_rule = false;

  void validate() const;

  friend bool operator==(const MarketConfig&, const MarketConfig&) = default;
};

struct RegimeCounts {
  std::size_t corner_zero = 0;
  std::size_t interior = 0;
  std::size_t fully_informed = 0;

  std::size_t total() const noexcept { return corner_zero + interior + fully_informed; }
};

struct AgentRecord {
  UnconstrainedOptimum optimum = UnconstrainedOptimum::finite(0.0);
  AgentOutcome outcome;
  bool participant = true;
};

struct MarketOutcome {
  double fraction_informed = 0.0;
  bool efficient = false;
  RegimeCounts counts;
  /// Agents dropped by the participation rule (u_star < 0).
  std::size_t excluded = 0;
  double mean_utility = 0.0;
  std::vector<AgentRecord> agents;
};

/// Seed of agent `index`'s private random stream.
std::uint64_t substream_seed(std::uint64_t master_seed, std::uint64_t index) noexcept;

/// Agent k draws (W, L, success parameter, cost scale, cost shape) in that
/// order from substream_seed(master_seed, k).
std::vector<Trader> sample_population(const PopulationSpec& spec);

MarketOutcome run_market(const MarketConfig& config, std::span<const Trader> traders,
                         bool keep_agents = true);
/// Reuses precomputed unconstrained optima (one per trader).
MarketOutcome run_market(const MarketConfig& config, std::span<const Trader> traders,
                         std::span<const UnconstrainedOptimum> optima, bool keep_agents = true);

/// Unconstrained optimum of every trader; errors carry the agent index.
std::vector<UnconstrainedOptimum> solve_optima(std::span<const Trader> traders);

struct ConjectureVerdict {
  std::string name;
  bool passed = false;
  std::string detail;
  std::optional<std::size_t> counterexample;
};

/// Costless information: every agent must sit at i_max exactly and the market
/// must be efficient. Throws PreconditionError on any non-Zero cost trader.
ConjectureVerdict check_conjecture1(std::span<const Trader> traders, double i_max, double theta);

struct MarketLeg {
  MarketConfig config;
  std::vector<Trader> traders;
};

struct Conjecture2Verdict {
  ConjectureVerdict verdict;
  bool efficient_leg_passed = false;
  bool inefficient_leg_passed = false;
  MarketOutcome efficient_outcome;
  MarketOutcome inefficient_outcome;
};

/// Overload with free information can go either way: the first leg must be
/// efficient and the second inefficient, both under the same i_max and both
/// with at least one Interior agent.
Conjecture2Verdict check_conjecture2(const MarketLeg& efficient_leg,
                                     const MarketLeg& inefficient_leg);

struct Conjecture3Point {
  double i_max = 0.0;
  double fraction_informed = 0.0;
  bool efficient = false;
  /// max over agents of E[U(i_max)]: the best payoff of using everything.
  double full_information_utility = 0.0;
};

struct Conjecture3Verdict {
  ConjectureVerdict verdict;
  std::vector<Conjecture3Point> points;
  bool fraction_nonincreasing = false;
  bool reaches_zero = false;
  bool utility_diverges = false;
  bool stays_inefficient = false;
};

/// As i_max grows along `schedule`, nobody stays fully informed and the payoff
/// of full information falls below `divergence_bound`.
/// Throws PreconditionError on Zero-cost traders, a non-increasing schedule, or
/// fewer than 10 entries.
Conjecture3Verdict check_conjecture3(std::span<const Trader> traders, double theta,
                                     std::span<const double> schedule,
                                     double divergence_bound = -1e6);

struct ReturnModel {
  double r_of = 0.0;
  double noise_sd = 0.0;

  friend bool operator==(const ReturnModel&, const ReturnModel&) = default;
};

struct ReturnSample {
  std::vector<double> draws;
  double mean = 0.0;
  double sd = 0.0;
};

/// R = r_of + eps with Gaussian eps of standard deviation noise_sd.
ReturnSample simulate_muthian_returns(const ReturnModel& model, std::size_t n, std::uint64_t seed);

}  // namespace infoverload
