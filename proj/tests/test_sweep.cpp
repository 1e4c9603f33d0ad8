#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "infoverload/errors.hpp"
#include "infoverload/sweep.hpp"
#include "test_support.hpp"

using namespace infoverload;
using infoverload::testing::Gen;
using infoverload::testing::reference_mixed_population;
using infoverload::testing::reference_trader;

TEST_CASE("utility_curve") {
  SUBCASE("costless: strictly increasing, peak at i_max") {
    const Trader muthian(1.0, 1.0, SuccessCurve::exp_saturating(1.0), CostCurve::zero());
    const auto curve = utility_curve(muthian, 10.0, 201);
    for (std::size_t k = 1; k < curve.points.size(); ++k) {
      CHECK(curve.points[k].expected_utility > curve.points[k - 1].expected_utility);
    }
    CHECK(curve.peak().i == 10.0);
    CHECK(first_difference_sign_changes(curve) == 0);
  }
  SUBCASE("reference trader rises then falls") {
    const auto curve = utility_curve(reference_trader(), 5.0, 501);
    CHECK(curve.points.front().i == 0.0);
    CHECK(curve.points.back().i == 5.0);
    // Grid argmax from tests/oracles/frozen_values.py.
    CHECK(curve.peak().i == doctest::Approx(1.75).epsilon(1e-12));
    CHECK(first_difference_sign_changes(curve) == 1);
  }
  SUBCASE("two points") {
    const auto curve = utility_curve(reference_trader(), 1.0, 2);
    REQUIRE(curve.points.size() == 2);
    CHECK(curve.peak().i == 1.0);
    CHECK(utility_curve(reference_trader(100.0), 1.0, 2).peak().i == 0.0);
  }
  SUBCASE("too few points") {
    CHECK_THROWS_AS(utility_curve(reference_trader(), 1.0, 1), ConfigError);
  }
}

TEST_CASE("property: utility curve rises then falls once") {
  Gen gen(31);
  int interior = 0;
  for (int k = 0; k < 300; ++k) {
    const auto t = gen.trader();
    const double i_max = gen.uniform(0.5, 20.0);
    const auto opt = optimize_information(t, i_max);
    const auto curve = utility_curve(t, i_max, 400);
    if (opt.regime != Regime::Interior) continue;
    // Optimum well inside the grid so the rise is resolved.
    const double dx = i_max / 399.0;
    if (opt.i_star < 2 * dx || opt.i_star > i_max - 2 * dx) continue;
    ++interior;
    REQUIRE(first_difference_sign_changes(curve) == 1);
  }
  CHECK(interior > 100);
}

TEST_CASE("required_informed_count") {
  CHECK(required_informed_count(200, 0.4) == 80);
  CHECK(required_informed_count(1000, 0.6) == 600);
  CHECK(required_informed_count(7, 1.0) == 7);
  CHECK(required_informed_count(3, 1e-9) == 1);
  Gen gen(4);
  for (int k = 0; k < 10000; ++k) {
    const std::size_t n = 1 + gen.index(500);
    const double theta = gen.uniform(1e-6, 1.0);
    const std::size_t m = required_informed_count(n, theta);
    REQUIRE(static_cast<double>(m) / static_cast<double>(n) >= theta);
    REQUIRE(static_cast<double>(m - 1) / static_cast<double>(n) < theta);
  }
}

TEST_CASE("critical_imax_quantile") {
  const std::vector<UnconstrainedOptimum> four{
      UnconstrainedOptimum::finite(1.0), UnconstrainedOptimum::finite(4.0),
      UnconstrainedOptimum::finite(2.0), UnconstrainedOptimum::finite(3.0)};
  const auto q = critical_imax_quantile(four, 0.5);
  CHECK(q.kind == CriticalLevel::Kind::Finite);
  CHECK(q.level == 3.0);
  CHECK(critical_imax_quantile(four, 1.0).level == 1.0);

  Gen gen(8);
  std::vector<Trader> muthian;
  for (int k = 0; k < 10; ++k) muthian.push_back(gen.muthian_trader());
  CHECK(critical_imax_quantile(muthian, 1.0).kind == CriticalLevel::Kind::Unbounded);

  std::vector<UnconstrainedOptimum> mixed = four;
  mixed.push_back(UnconstrainedOptimum::unbounded());
  CHECK(critical_imax_quantile(mixed, 0.2).kind == CriticalLevel::Kind::Unbounded);
  CHECK(critical_imax_quantile(mixed, 0.4).level == 4.0);

  const std::vector<UnconstrainedOptimum> zeros(3, UnconstrainedOptimum::finite(0.0));
  CHECK(critical_imax_quantile(zeros, 0.5).kind == CriticalLevel::Kind::Absent);
}

TEST_CASE("sweep_imax") {
  SUBCASE("costless population: efficient everywhere") {
    Gen gen(9);
    std::vector<Trader> muthian;
    for (int k = 0; k < 30; ++k) muthian.push_back(gen.muthian_trader());
    const auto grid = geometric_grid(0.01, 1000.0, 25);
    const auto series = sweep_imax(muthian, grid, 1.0);
    for (const auto& p : series.points) CHECK(p.efficient);
    REQUIRE(series.critical_imax);
    CHECK(*series.critical_imax == 1000.0);
  }
  SUBCASE("reference mixed population at theta 0.6") {
    const auto grid = linear_grid(0.05, 3.0, 60);
    const auto traders = reference_mixed_population();
    const auto series = sweep_imax(traders, grid, 0.6);
    // Only the first point (0.05 < i_u = 0.0913 of the costly half) is efficient.
    REQUIRE(series.critical_imax);
    CHECK(*series.critical_imax == 0.05);
    const auto q = critical_imax_quantile(traders, 0.6);
    CHECK(q.level == doctest::Approx(0.0912765271608623).epsilon(1e-8));
    CHECK(std::abs(q.level - *series.critical_imax) <= grid[1] - grid[0]);
  }
  SUBCASE("single agent flips at its optimum") {
    const std::vector<Trader> one{reference_trader()};
    const auto grid = linear_grid(0.01, 3.0, 300);
    const auto series = sweep_imax(one, grid, 1.0);
    REQUIRE(series.critical_imax);
    CHECK(*series.critical_imax <= 1.7455280027407);
    CHECK(1.7455280027407 - *series.critical_imax < grid[1] - grid[0]);
  }
  SUBCASE("grid validation") {
    const std::vector<Trader> one{reference_trader()};
    CHECK_THROWS_AS(sweep_imax(one, std::vector<double>{1.0, 0.5}, 0.5), ConfigError);
    CHECK_THROWS_AS(sweep_imax(one, std::vector<double>{}, 0.5), ConfigError);
    CHECK_THROWS_AS(sweep_imax(one, std::vector<double>{1.0, 1.0}, 0.5), ConfigError);
  }
}

TEST_CASE("property: sweep critical level matches the quantile oracle") {
  Gen gen(10);
  const auto grid = geometric_grid(0.01, 100.0, 80);
  for (int trial = 0; trial < 10; ++trial) {
    const auto traders = gen.population(200);
    const double theta = gen.uniform(0.05, 0.95);
    const auto series = sweep_imax(traders, grid, theta);
    const auto q = critical_imax_quantile(traders, theta);
    REQUIRE(q.kind != CriticalLevel::Kind::Unbounded);
    if (q.kind == CriticalLevel::Kind::Absent || q.level < grid.front()) {
      REQUIRE_FALSE(series.critical_imax);
      continue;
    }
    REQUIRE(series.critical_imax);
    const auto cell = std::upper_bound(grid.begin(), grid.end(), *series.critical_imax);
    const double width = cell == grid.end() ? 0.0 : *cell - *series.critical_imax;
    REQUIRE(*series.critical_imax <= q.level);
    REQUIRE(q.level - *series.critical_imax <= width);
  }
}

TEST_CASE("sweep_2d") {
  Gen gen(12);
  const auto traders = gen.population(80);
  const auto grid = geometric_grid(0.05, 4.0, 30);
  const std::vector<double> multipliers{1e-9, 0.5, 1.0, 2.0, 8.0};
  const auto diagram = sweep_2d(traders, grid, multipliers, 0.5);
  REQUIRE(diagram.rows.size() == multipliers.size());

  for (const auto& p : diagram.rows[0].points) CHECK(p.efficient);

  const auto direct = sweep_imax(traders, grid, 0.5);
  const auto& unit = diagram.rows[2];
  REQUIRE(unit.points.size() == direct.points.size());
  for (std::size_t k = 0; k < unit.points.size(); ++k) {
    CHECK(unit.points[k].fraction_informed == direct.points[k].fraction_informed);
    CHECK(unit.points[k].efficient == direct.points[k].efficient);
  }
  CHECK(unit.critical_imax == direct.critical_imax);

  for (std::size_t r = 1; r < diagram.rows.size(); ++r) {
    const double prev = diagram.rows[r - 1].critical_imax.value_or(-1.0);
    const double cur = diagram.rows[r].critical_imax.value_or(-1.0);
    CHECK(cur <= prev);
  }

  CHECK_THROWS_AS(sweep_2d(traders, grid, std::vector<double>{2.0, 1.0}, 0.5), ConfigError);
  CHECK_THROWS_AS(sweep_2d(traders, grid, std::vector<double>{0.0, 1.0}, 0.5), ConfigError);
}

TEST_CASE("grids") {
  const auto g = geometric_grid(1.0, 1000.0, 4);
  CHECK(g.front() == 1.0);
  CHECK(g[1] == doctest::Approx(10.0));
  CHECK(g.back() == 1000.0);
  const auto l = linear_grid(0.0, 1.0, 5);
  CHECK(l[2] == 0.5);
  CHECK(l.back() == 1.0);
  CHECK_THROWS_AS(geometric_grid(0.0, 1.0, 3), ConfigError);
}
