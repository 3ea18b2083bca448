import math

import numpy as np
import pytest

from isoquant import (
    CES,
    Bundle,
    CobbDouglas,
    ComputationError,
    DomainError,
    FactorPrices,
    Leontief,
    Perturbed,
    ScanConfig,
    Unattainable,
    characterize,
    closed_form_cd_minimizer,
    condition_b_residual,
    estimate_beta_pointwise,
    labour_share_of_cost,
    reconstruct_output,
    share_scan,
)
from isoquant.characterization import bundle_grid, log_grid

from oracles import fd_gradient

BUNDLES = bundle_grid()


def test_labour_share_examples():
    assert labour_share_of_cost(FactorPrices(1, 1), Bundle(3, 3)) == 0.5
    b = closed_form_cd_minimizer(CobbDouglas(1, 1 / 3), FactorPrices(1, 2), 6)
    assert labour_share_of_cost(FactorPrices(1, 2), b) == pytest.approx(2 / 3, rel=1e-14)
    assert labour_share_of_cost(FactorPrices(3, 1), Bundle(5, 5)) == 0.75


def test_condition_b_examples():
    prices = FactorPrices(2.0, 0.5)
    assert condition_b_residual(prices, Bundle(0.3 * 4 * 0.7, 0.3), 0.7) == pytest.approx(0.0, abs=1e-15)
    pf = CobbDouglas(1.9, 0.45)
    b = closed_form_cd_minimizer(pf, prices, 3.0)
    assert abs(condition_b_residual(prices, b, pf.beta)) <= 1e-12
    assert condition_b_residual(FactorPrices(4, 1), Bundle(1.5, 0.75), 1.0) == pytest.approx(-1.0, rel=1e-15)
    with pytest.raises(DomainError):
        condition_b_residual(prices, b, 0.0)


def test_estimate_beta_cd():
    for b in BUNDLES:
        assert estimate_beta_pointwise(CobbDouglas(1, 0.5), b) == pytest.approx(1.0, rel=1e-14)
        assert estimate_beta_pointwise(CobbDouglas(2, 0.3), b) == pytest.approx(3 / 7, rel=1e-13)
        dK, dL = fd_gradient(CobbDouglas(2, 0.3).value, b.K, b.L)
        assert b.K * dK / (b.L * dL) == pytest.approx(3 / 7, rel=1e-8)


def test_estimate_beta_ces_varies():
    pf = CES(1, 0.5, -1)
    hi, lo = estimate_beta_pointwise(pf, Bundle(2, 1)), estimate_beta_pointwise(pf, Bundle(1, 2))
    # with rho = -1 the ratio is (L/K); from the oracle too
    for b, v in ((Bundle(2, 1), hi), (Bundle(1, 2), lo)):
        dK, dL = fd_gradient(pf.value, b.K, b.L)
        assert v == pytest.approx(b.K * dK / (b.L * dL), rel=1e-8)
    assert hi == pytest.approx(0.5, rel=1e-14)
    assert lo == pytest.approx(2.0, rel=1e-14)


@pytest.mark.parametrize(
    "pf, constant",
    [(CobbDouglas(1, 0.5), True), (CobbDouglas(2.5, 0.3), True), (CES(1, 0.5, -1), False),
     (CES(1.3, 0.4, -2), False), (CES(1, 0.5, 0.5), False)],
    ids=repr,
)
def test_beta_constancy_separates_degree_one_families(pf, constant):
    values = [estimate_beta_pointwise(pf, b) for b in BUNDLES]
    spread = max(values) - min(values)
    assert (spread <= 1e-8) is constant


def test_perturbed_has_constant_beta_but_fails_constant_returns():
    pf = Perturbed(CobbDouglas(2, 0.3), 0.5)
    values = [estimate_beta_pointwise(pf, b) for b in BUNDLES]
    assert max(values) - min(values) <= 1e-8
    assert not pf.constant_returns


def test_estimate_beta_guard():
    with pytest.raises(ComputationError):
        estimate_beta_pointwise(Leontief(), Bundle(1, 2))


def test_scan_config_validation():
    with pytest.raises(DomainError):
        ScanConfig((), (1,), (1,))
    with pytest.raises(DomainError):
        ScanConfig((1,), (-1,), (1,))
    with pytest.raises(DomainError):
        ScanConfig((1,), (1,), (1,), verdict_tolerance=0)


def test_default_grid():
    cfg = ScanConfig.default()
    assert cfg.size == 75
    assert cfg.w_grid == pytest.approx(tuple(np.geomspace(0.2, 5, 5)), rel=1e-15)
    assert cfg.q_grid == pytest.approx((1.0, math.sqrt(10), 10.0), rel=1e-15)


def test_jittered_grid_is_seeded():
    a = ScanConfig.default(jitter=0.1, seed=3)
    b = ScanConfig.default(jitter=0.1, seed=3)
    c = ScanConfig.default(jitter=0.1, seed=4)
    assert a == b
    assert a.w_grid != c.w_grid
    assert a.w_grid != ScanConfig.default().w_grid


def test_share_scan_cd():
    pf = CobbDouglas(2.5, 0.3)
    rep = share_scan(pf, ScanConfig.default())
    assert len(rep.entries) == 75
    assert rep.max_deviation <= 1e-8
    assert rep.beta_hat == pytest.approx(0.3 / 0.7, rel=1e-8)
    assert rep.constant_share
    assert all(0 < e.labour_share < 1 for e in rep.entries)
    assert rep.beta_hat == (1 - rep.mean_share) / rep.mean_share


def test_share_scan_order_is_grid_order():
    cfg = ScanConfig((1, 2), (3, 4), (5, 6))
    rep = share_scan(CobbDouglas(1, 0.5), cfg)
    assert [(e.w, e.r, e.q) for e in rep.entries] == list(cfg.points())


def test_share_scan_ces_counterexample():
    rep = share_scan(CES(1, 0.5, -1), ScanConfig((1, 4), (1,), (1,)))
    shares = [e.labour_share for e in rep.entries]
    assert shares == pytest.approx([0.5, 2 / 3], rel=1e-9)
    assert rep.max_deviation >= 0.08


def test_share_scan_leontief_counterexample():
    rep = share_scan(Leontief(), ScanConfig((1, 3), (1,), (1, 2)))
    for e in rep.entries:
        assert e.labour_share == pytest.approx(e.w / (e.w + e.r), rel=1e-9)
        assert e.minimizer.K == pytest.approx(e.q, rel=1e-9)
    assert rep.max_deviation >= 0.12


def test_share_scan_names_bad_grid_point():
    with pytest.raises(Unattainable, match="q=0.2"):
        share_scan(Perturbed(CobbDouglas(1, 0.5), 0.5), ScanConfig((1,), (1,), (1.0, 0.2)))


def test_share_scan_parallel_matches_serial():
    pf, cfg = CES(1.2, 0.4, -0.5), ScanConfig.default()
    assert share_scan(pf, cfg, workers=2) == share_scan(pf, cfg)


def test_characterize_cd():
    v = characterize(CobbDouglas(2.5, 0.3))
    assert v.is_cobb_douglas
    assert v.alpha_hat == pytest.approx(0.3, abs=1e-6)
    assert v.A_hat == pytest.approx(2.5, rel=1e-6)
    assert v.alpha_hat == v.beta_hat / (v.beta_hat + 1)
    assert not v.low_confidence


@pytest.mark.parametrize(
    "pf",
    [CES(1, 0.5, -1), CES(1, 0.5, -2), CES(1, 0.5, 0.5), Leontief(), Perturbed(CobbDouglas(2.5, 0.3), 0.5)],
    ids=repr,
)
def test_characterize_rejects(pf):
    v = characterize(pf)
    assert not v.is_cobb_douglas


def test_characterize_which_statistic_fails():
    ces = characterize(CES(1, 0.5, -1))
    assert ces.share_max_deviation > 0.08
    per = characterize(Perturbed(CobbDouglas(2.5, 0.3), 0.5))
    assert per.share_max_deviation <= 1e-8
    assert per.euler_max_residual > 1e-2
    assert per.A_max_deviation > 1e-2
    leo = characterize(Leontief())
    assert math.isinf(leo.euler_max_residual)
    assert any("not applicable" in n for n in leo.notes)


def test_characterize_single_point_low_confidence():
    v = characterize(CES(1, 0.5, -1), ScanConfig((1,), (1,), (1,)))
    assert v.low_confidence
    # one price point cannot tell CES from Cobb-Douglas
    assert v.share_max_deviation == 0.0


def test_verdict_respects_tolerance():
    pf = CES(1, 0.5, -1e-3)
    assert not characterize(pf).is_cobb_douglas
    assert characterize(pf, ScanConfig.default(verdict_tolerance=0.5)).is_cobb_douglas


def test_reconstruct_examples():
    anchor = (Bundle(2, 3), 4.2)
    assert reconstruct_output(0.8, anchor, Bundle(2, 3)) == 4.2
    assert reconstruct_output(1.0, (Bundle(1, 1), 1.0), Bundle(4, 1)) == pytest.approx(2.0, rel=1e-15)
    pf = CobbDouglas(2.5, 0.3)
    expected = pf.evaluate(Bundle(2, 7))
    assert expected == pytest.approx(2.5 * 2**0.3 * 7**0.7, rel=1e-15)
    assert reconstruct_output(3 / 7, (Bundle(1, 1), 2.5), Bundle(2, 7)) == pytest.approx(expected, rel=1e-12)


def test_reconstruct_solves_share_pdes():
    beta, anchor = 0.6, (Bundle(1.3, 0.4), 2.0)
    f = lambda K, L: reconstruct_output(beta, anchor, Bundle(K, L))
    for b in BUNDLES:
        y = f(b.K, b.L)
        dK, dL = fd_gradient(f, b.K, b.L)
        assert dL == pytest.approx(y / ((beta + 1) * b.L), rel=1e-8)
        assert dK == pytest.approx(beta * y / ((beta + 1) * b.K), rel=1e-8)


def test_reconstruct_validation():
    with pytest.raises(DomainError):
        reconstruct_output(0.0, (Bundle(1, 1), 1.0), Bundle(1, 2))
    with pytest.raises(DomainError):
        reconstruct_output(1.0, (Bundle(1, 1), -1.0), Bundle(1, 2))


def test_log_grid():
    assert log_grid(2, 2, 1) == (2.0,)
    with pytest.raises(DomainError):
        log_grid(0, 1, 3)
