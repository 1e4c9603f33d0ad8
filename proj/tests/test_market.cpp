#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "infoverload/errors.hpp"
#include "infoverload/market.hpp"
#include "test_support.hpp"

using namespace infoverload;
using infoverload::testing::Gen;
using infoverload::testing::reference_mixed_population;
using infoverload::testing::reference_trader;

namespace {

Cohort point_cohort(std::size_t n, double c) {
  Cohort cohort;
  cohort.n_agents = n;
  cohort.gain = Interval::point(1.0);
  cohort.loss = Interval::point(1.0);
  cohort.success = {SuccessFamily::ExpSaturating, Interval::point(1.0)};
  cohort.cost = {CostFamily::Power, Interval::point(c), Interval::point(2.0)};
  return cohort;
}

PopulationSpec heterogeneous_spec(std::size_t n, std::uint64_t seed) {
  Cohort cohort = point_cohort(n, 0.0);
  cohort.gain = {0.5, 2.0};
  cohort.loss = {0.5, 2.0};
  cohort.success = {SuccessFamily::Hyperbolic, {0.5, 3.0}};
  cohort.cost = {CostFamily::ExpGrowth, {0.01, 1.0}, {0.1, 0.8}};
  return {{cohort}, seed};
}

}  // namespace

TEST_CASE("sample_population") {
  SUBCASE("fully degenerate intervals give the determined trader") {
    const auto traders = sample_population({{point_cohort(1, 0.1)}, 42});
    REQUIRE(traders.size() == 1);
    CHECK(traders[0] == reference_trader(0.1));
  }
  SUBCASE("same seed, same population") {
    const auto spec = heterogeneous_spec(300, 7);
    CHECK(sample_population(spec) == sample_population(spec));
    auto other = spec;
    other.master_seed = 8;
    CHECK_FALSE(sample_population(spec) == sample_population(other));
  }
  SUBCASE("agent k depends only on (seed, k)") {
    const auto small = sample_population(heterogeneous_spec(10, 3));
    const auto large = sample_population(heterogeneous_spec(50, 3));
    for (std::size_t k = 0; k < small.size(); ++k) CHECK(small[k] == large[k]);
  }
  SUBCASE("uniform cost scale has the analytic mean") {
    Cohort cohort = point_cohort(1000, 0.0);
    cohort.cost.scale = {0.01, 1.0};
    const auto traders = sample_population({{cohort}, 2024});
    double mean = 0.0;
    for (const auto& t : traders) {
      CHECK(t.cost().scale() >= 0.01);
      CHECK(t.cost().scale() <= 1.0);
      mean += t.cost().scale();
    }
    mean /= 1000.0;
    // (0.01 + 1) / 2, standard error 0.99 / sqrt(12 * 1000)
    CHECK(std::abs(mean - 0.505) <= 3.0 * 0.009037422198835241);
  }
  SUBCASE("invalid specs") {
    PopulationSpec bad{{point_cohort(5, 0.1)}, 0};
    bad.cohorts[0].gain = {2.0, 1.0};
    CHECK_THROWS_AS(sample_population(bad), ConfigError);
    try {
      sample_population(bad);
    } catch (const ConfigError& e) {
      CHECK(e.field() == "cohorts[0].gain");
    }

    PopulationSpec linear{{point_cohort(5, 0.1)}, 0};
    linear.cohorts[0].cost.shape = {1.0, 2.0};
    CHECK_THROWS_AS(linear.validate(), ConfigError);

    PopulationSpec empty{{}, 0};
    CHECK_THROWS_AS(empty.validate(), ConfigError);
    PopulationSpec zero_agents{{point_cohort(0, 0.1)}, 0};
    CHECK_THROWS_AS(zero_agents.validate(), ConfigError);
  }
}

TEST_CASE("run_market examples") {
  SUBCASE("all costless: fully informed and efficient") {
    Gen gen(1);
    std::vector<Trader> traders;
    for (int k = 0; k < 100; ++k) traders.push_back(gen.muthian_trader());
    const auto out = run_market({3.0, 1.0, false}, traders);
    CHECK(out.fraction_informed == 1.0);
    CHECK(out.efficient);
    CHECK(out.counts.fully_informed == 100);
  }
  SUBCASE("every optimum below i_max: nobody informed") {
    const std::vector<Trader> traders(20, reference_trader(0.1));
    const auto out = run_market({5.0, 0.5, false}, traders);
    CHECK(out.fraction_informed == 0.0);
    CHECK_FALSE(out.efficient);
    CHECK(out.counts.interior == 20);
  }
  SUBCASE("reference mixed population") {
    const auto traders = reference_mixed_population();
    const auto out = run_market({2.0, 0.4, false}, traders);
    CHECK(out.fraction_informed == 0.5);
    CHECK(out.efficient);
    CHECK(out.counts.fully_informed == 50);
    CHECK(out.counts.interior == 50);
    CHECK_FALSE(run_market({2.0, 0.6, false}, traders).efficient);
  }
  SUBCASE("keep_agents=false drops per-agent records") {
    const auto out = run_market({2.0, 0.4, false}, reference_mixed_population(), false);
    CHECK(out.agents.empty());
    CHECK(out.counts.total() == 100);
  }
  SUBCASE("invalid configs") {
    const std::vector<Trader> one{reference_trader()};
    CHECK_THROWS_AS(run_market({0.0, 0.5, false}, one), ConfigError);
    CHECK_THROWS_AS(run_market({1.0, 0.0, false}, one), ConfigError);
    CHECK_THROWS_AS(run_market({1.0, 1.5, false}, one), ConfigError);
    CHECK_THROWS_AS(run_market({1.0, 0.5, false}, std::vector<Trader>{}), PreconditionError);
  }
}

TEST_CASE("participation rule") {
  // Fully informed but losing money: lambda(1) W - (1 - lambda(1)) L < 0 for L = 10.
  const Trader loser(1.0, 10.0, SuccessCurve::exp_saturating(1.0), CostCurve::zero());
  const Trader winner(1.0, 1.0, SuccessCurve::exp_saturating(1.0), CostCurve::zero());
  const Trader overloaded = reference_trader(10.0);
  const std::vector<Trader> traders{loser, winner, overloaded};

  const auto plain = run_market({1.0, 0.5, false}, traders);
  CHECK(plain.excluded == 0);
  CHECK(plain.fraction_informed == doctest::Approx(2.0 / 3.0));

  const auto rule = run_market({1.0, 0.5, true}, traders);
  CHECK(rule.excluded == 2);  // loser and the overloaded agent (u_star < 0)
  CHECK_FALSE(rule.agents[0].participant);
  CHECK(rule.agents[1].participant);
  CHECK(rule.fraction_informed == 1.0);
  CHECK(rule.efficient);

  const std::vector<Trader> all_losers{loser, loser};
  const auto none = run_market({1.0, 0.5, true}, all_losers);
  CHECK(none.excluded == 2);
  CHECK(none.fraction_informed == 0.0);
  CHECK_FALSE(none.efficient);
}

TEST_CASE("property: verdict consistency and regime partition") {
  Gen gen(11);
  for (int trial = 0; trial < 100; ++trial) {
    const auto traders = gen.population(1 + gen.index(60));
    const MarketConfig config{gen.log_uniform(0.05, 50.0), gen.uniform(1e-3, 1.0), gen.coin()};
    const auto out = run_market(config, traders);
    REQUIRE(out.counts.total() == traders.size());
    REQUIRE(out.efficient == (out.fraction_informed >= config.theta));
    REQUIRE(out.fraction_informed >= 0.0);
    REQUIRE(out.fraction_informed <= 1.0);
  }
}

TEST_CASE("property: fraction informed is non-increasing in i_max") {
  Gen gen(12);
  for (int trial = 0; trial < 50; ++trial) {
    const auto traders = gen.population(40);
    std::vector<double> grid(30);
    for (auto& g : grid) g = gen.log_uniform(0.01, 100.0);
    std::sort(grid.begin(), grid.end());
    double prev = 2.0;
    for (double i_max : grid) {
      const double f = run_market({i_max, 0.5, false}, traders).fraction_informed;
      REQUIRE(f <= prev);
      prev = f;
    }
  }
}

TEST_CASE("property: outcomes are deterministic") {
  const auto spec = heterogeneous_spec(500, 99);
  const auto a = run_market({1.5, 0.3, false}, sample_population(spec));
  const auto b = run_market({1.5, 0.3, false}, sample_population(spec));
  REQUIRE(a.agents.size() == b.agents.size());
  for (std::size_t k = 0; k < a.agents.size(); ++k) {
    CHECK(a.agents[k].outcome.i_star == b.agents[k].outcome.i_star);
    CHECK(a.agents[k].outcome.u_star == b.agents[k].outcome.u_star);
  }
  CHECK(a.mean_utility == b.mean_utility);
}

TEST_CASE("conjecture 1") {
  Gen gen(21);
  std::vector<Trader> muthian;
  for (int k = 0; k < 200; ++k) muthian.push_back(gen.muthian_trader());
  const auto v = check_conjecture1(muthian, 4.0, 1.0);
  CHECK(v.passed);
  CHECK_FALSE(v.counterexample);

  const std::vector<Trader> single{muthian.front()};
  CHECK(check_conjecture1(single, 1e-9, 0.7).passed);

  auto injected = muthian;
  injected[17] = reference_trader();
  CHECK_THROWS_AS(check_conjecture1(injected, 4.0, 1.0), PreconditionError);
}

TEST_CASE("conjecture 2") {
  const auto mixed = reference_mixed_population();
  SUBCASE("reference legs") {
    const auto v = check_conjecture2({{2.0, 0.4, false}, mixed}, {{2.0, 0.6, false}, mixed});
    CHECK(v.verdict.passed);
    CHECK(v.efficient_leg_passed);
    CHECK(v.inefficient_leg_passed);
    CHECK(v.efficient_outcome.fraction_informed == 0.5);
    CHECK(v.inefficient_outcome.fraction_informed == 0.5);
    CHECK(v.efficient_outcome.counts.interior > 0);
  }
  SUBCASE("all low-cost population is not an inefficient leg") {
    const std::vector<Trader> cheap(20, reference_trader(0.001));
    const auto v = check_conjecture2({{2.0, 0.4, false}, mixed}, {{2.0, 0.6, false}, cheap});
    CHECK_FALSE(v.verdict.passed);
    CHECK(v.efficient_leg_passed);
    CHECK_FALSE(v.inefficient_leg_passed);
    CHECK(v.verdict.detail.find("misconfigured") != std::string::npos);
  }
  SUBCASE("legs must share i_max") {
    const auto v = check_conjecture2({{2.0, 0.4, false}, mixed}, {{3.0, 0.6, false}, mixed});
    CHECK_FALSE(v.verdict.passed);
    CHECK(v.verdict.detail.find("misconfigured") != std::string::npos);
  }
}

TEST_CASE("conjecture 3") {
  std::vector<double> schedule;
  for (int e = 0; e <= 14; ++e) schedule.push_back(std::ldexp(1.0, e));
  const std::vector<Trader> reference(100, reference_trader(0.01));

  const auto v = check_conjecture3(reference, 0.5, schedule);
  CHECK(v.verdict.passed);
  CHECK(v.fraction_nonincreasing);
  CHECK(v.reaches_zero);
  CHECK(v.utility_diverges);
  CHECK(v.stays_inefficient);
  // 1 - 2 e^{-16384} - 0.01 * 2^28
  CHECK(v.points.back().full_information_utility == doctest::Approx(-2684353.56).epsilon(1e-12));
  // i_u = 3.3856 for every agent: informed at 1 and 2, not from 4 on.
  CHECK(v.points[0].fraction_informed == 1.0);
  CHECK(v.points[1].fraction_informed == 1.0);
  for (std::size_t k = 2; k < v.points.size(); ++k) CHECK(v.points[k].fraction_informed == 0.0);

  CHECK_THROWS_AS(check_conjecture3(reference, 0.5, std::vector<double>{1.0}), PreconditionError);
  auto unsorted = schedule;
  std::swap(unsorted[3], unsorted[4]);
  CHECK_THROWS_AS(check_conjecture3(reference, 0.5, unsorted), PreconditionError);
  auto with_muthian = reference;
  with_muthian[0] = reference_trader().with_cost(CostCurve::zero());
  CHECK_THROWS_AS(check_conjecture3(with_muthian, 0.5, schedule), PreconditionError);
}

TEST_CASE("conjecture 3 fails when the bound is out of reach") {
  std::vector<double> schedule;
  for (int e = 0; e < 10; ++e) schedule.push_back(std::ldexp(1.0, e));
  const std::vector<Trader> reference(10, reference_trader(0.01));
  const auto v = check_conjecture3(reference, 0.5, schedule, -1e6);  // E[U(512)] ~ -2620
  CHECK_FALSE(v.verdict.passed);
  CHECK_FALSE(v.utility_diverges);
}

TEST_CASE("simulate_muthian_returns") {
  SUBCASE("no noise: every draw is the forecast") {
    const auto s = simulate_muthian_returns({0.07, 0.0}, 1000, 5);
    for (double r : s.draws) CHECK(r == 0.07);
    CHECK(s.sd == 0.0);
  }
  SUBCASE("sample mean recovers the forecast") {
    const auto s = simulate_muthian_returns({0.05, 0.2}, 1000000, 20240601);
    CHECK(std::abs(s.mean - 0.05) <= 8e-4);
    CHECK(s.sd == doctest::Approx(0.2).epsilon(0.01));
  }
  SUBCASE("seeded draws repeat") {
    const auto a = simulate_muthian_returns({0.0, 1.0}, 100, 9);
    const auto b = simulate_muthian_returns({0.0, 1.0}, 100, 9);
    const auto c = simulate_muthian_returns({0.0, 1.0}, 100, 10);
    CHECK(a.draws == b.draws);
    CHECK_FALSE(a.draws == c.draws);
  }
  SUBCASE("invalid inputs") {
    CHECK_THROWS_AS(simulate_muthian_returns({0.0, -1.0}, 10, 1), ParameterDomainError);
    CHECK_THROWS_AS(simulate_muthian_returns({0.0, 1.0}, 0, 1), PreconditionError);
  }
}
