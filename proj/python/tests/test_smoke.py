import math
from pathlib import Path

import pytest

import infoverload as iv

CONFIGS = Path(__file__).resolve().parents[2] / "configs"


def reference(c=0.1):
    return iv.Trader(1.0, 1.0, iv.SuccessCurve.exp_saturating(1.0), iv.CostCurve.power(c, 2.0))


def test_curves():
    s = iv.SuccessCurve.exp_saturating(1.0)
    assert s(1.0) == pytest.approx(1 - math.exp(-1), rel=1e-15)
    assert s.derivative(0.0) == 1.0
    assert iv.CostCurve.zero()(5.0) == 0.0
    with pytest.raises(ValueError, match="convex"):
        iv.CostCurve.power(1.0, 1.0)
    report = iv.validate_curves(s, iv.CostCurve.zero(), 10.0)
    assert report["passed"] and report["muthian_degenerate"]


def test_optimizer_and_oracle():
    out = iv.optimize_information(reference(), 5.0)
    assert out.regime == iv.Regime.Interior
    assert out.i_star == pytest.approx(1.7455280027407, rel=1e-8)
    oracle = iv.grid_oracle(reference(), 5.0, 1e-4)
    assert abs(oracle.i_star - out.i_star) <= 1e-4
    assert iv.unconstrained_optimum(reference(10.0)) == pytest.approx(0.0912765271608623, rel=1e-8)
    free = iv.Trader(1.0, 1.0, iv.SuccessCurve.hyperbolic(1.0), iv.CostCurve.zero())
    assert math.isinf(iv.unconstrained_optimum(free))
    assert iv.optimize_information(free, 3.0).i_star == 3.0


def test_market_verdicts():
    traders = [reference(0.001)] * 50 + [reference(10.0)] * 50
    lo = iv.run_market(iv.MarketConfig(2.0, 0.4), traders)
    hi = iv.run_market(iv.MarketConfig(2.0, 0.6), traders)
    assert lo.fraction_informed == 0.5
    assert lo.efficient and not hi.efficient
    assert lo.counts["interior"] == 50
    v = iv.check_conjecture2(iv.MarketConfig(2.0, 0.4), traders, iv.MarketConfig(2.0, 0.6), traders)
    assert v["passed"]
    v3 = iv.check_conjecture3([reference(0.01)] * 10, 0.5, iv.geometric_grid(1.0, 16384.0, 15))
    assert v3["passed"]
    assert v3["points"][-1][1] == 0.0


def test_sweep_and_quantile():
    traders = [reference(0.001)] * 50 + [reference(10.0)] * 50
    fraction, efficient, critical = iv.sweep_imax(traders, iv.linear_grid(0.05, 3.0, 60), 0.6)
    assert critical == 0.05
    assert efficient[0] and not any(efficient[1:])
    assert iv.critical_imax_quantile(traders, 0.6) == pytest.approx(0.0912765271608623, rel=1e-8)
    i, u, argmax, changes = iv.utility_curve(reference(), 5.0, 5001)
    assert changes == 1
    assert abs(i[argmax] - 1.7455) <= 1e-3


def test_returns():
    draws, mean, sd = iv.simulate_muthian_returns(0.05, 0.2, 100000, 1)
    assert len(draws) == 100000
    assert abs(mean - 0.05) <= 4e-3
    assert sd == pytest.approx(0.2, rel=0.02)


def test_run_command(tmp_path):
    code, files, summary = iv.run_command("figure3", str(CONFIGS / "reference.json"), str(tmp_path))
    assert code == 0
    assert files == ["figure3.csv"]
    assert (tmp_path / "manifest.json").exists()
    with pytest.raises(ValueError):
        iv.run_command("returns", str(tmp_path / "missing.json"), str(tmp_path))
