"""Deciding whether a technology is Cobb-Douglas from its cost-minimizing behaviour.

A constant-returns technology is Cobb-Douglas exactly when the labour share
of cost at every least-cost bundle is one constant ``1/(1+beta)``,
equivalently when least-cost bundles satisfy ``K = L * (w/r) * beta``.  The
checks here discretize "for all prices and outputs" with finite grids.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .costmin import FactorPrices, minimize_cost
from .errors import ComputationError, DomainError, NotDifferentiable
from .production import Bundle, ProductionFunction, euler_residual


def log_grid(lo: float, hi: float, n: int) -> tuple[float, ...]:
    """``n`` log-spaced points from ``lo`` to ``hi`` inclusive."""
    if n < 1:
        raise DomainError(f"grid size must be at least 1, got {n!r}")
    if not (lo > 0 and hi > 0):
        raise DomainError(f"grid bounds must be positive, got {lo!r}, {hi!r}")
    if n == 1:
        return (float(lo),)
    return tuple(float(v) for v in np.geomspace(lo, hi, n))


def bundle_grid(lo: float = 0.1, hi: float = 10.0, n: int = 5) -> tuple[Bundle, ...]:
    axis = log_grid(lo, hi, n)
    return tuple(Bundle(K, L) for K in axis for L in axis)


def _check_grid(name: str, values: Sequence[float]) -> tuple[float, ...]:
    values = tuple(float(v) for v in values)
    if not values:
        raise DomainError(f"{name} must not be empty")
    for v in values:
        if not (v > 0.0 and math.isfinite(v)):
            raise DomainError(f"{name} entries must be positive, got {v!r}")
    return values


@dataclass(frozen=True)
class ScanConfig:
    """Price and output grids plus tolerances for a share scan.

    ``share_tolerance`` bounds what counts as numerically constant;
    ``verdict_tolerance`` is what :func:`characterize` compares deviations to.
    ``bundles`` is the grid used for the Euler-identity check.
    """

    w_grid: tuple[float, ...]
    r_grid: tuple[float, ...]
    q_grid: tuple[float, ...]
    share_tolerance: float = 1e-6
    verdict_tolerance: float = 1e-4
    bundles: tuple[Bundle, ...] = field(default_factory=bundle_grid)

    def __post_init__(self) -> None:
        for name in ("w_grid", "r_grid", "q_grid"):
            object.__setattr__(self, name, _check_grid(name, getattr(self, name)))
        for name in ("share_tolerance", "verdict_tolerance"):
            v = float(getattr(self, name))
            if not v > 0.0:
                raise DomainError(f"{name} must be positive, got {v!r}")
            object.__setattr__(self, name, v)
        object.__setattr__(self, "bundles", tuple(self.bundles))
        if not self.bundles:
            raise DomainError("bundles must not be empty")

    @classmethod
    def default(cls, jitter: float = 0.0, seed: int = 0, **kwargs) -> ScanConfig:
        """5x5x3 log grid over ``[0.2, 5]^2 x [1, 10]``.

        ``jitter`` perturbs every grid point by a factor ``exp(jitter * u)``
        with ``u`` uniform on ``[-0.5, 0.5]`` drawn from a generator seeded by
        ``seed``.
        """
        grids = [log_grid(0.2, 5.0, 5), log_grid(0.2, 5.0, 5), log_grid(1.0, 10.0, 3)]
        if jitter:
            rng = np.random.default_rng(seed)
            grids = [
                tuple(float(v * math.exp(jitter * u)) for v, u in zip(g, rng.uniform(-0.5, 0.5, len(g))))
                for g in grids
            ]
        return cls(*grids, **kwargs)

    @property
    def size(self) -> int:
        return len(self.w_grid) * len(self.r_grid) * len(self.q_grid)

    def points(self):
        """Grid points ``(w, r, q)`` in deterministic w-major order."""
        return product(self.w_grid, self.r_grid, self.q_grid)


@dataclass(frozen=True)
class ScanEntry:
    w: float
    r: float
    q: float
    minimizer: Bundle
    labour_share: float

    @property
    def prices(self) -> FactorPrices:
        return FactorPrices(self.w, self.r)


@dataclass(frozen=True)
class ShareScanReport:
    entries: tuple[ScanEntry, ...]
    mean_share: float
    max_deviation: float
    beta_hat: float
    share_tolerance: float = 1e-6

    @property
    def constant_share(self) -> bool:
        return self.max_deviation <= self.share_tolerance

    def condition_b_residuals(self, beta: float | None = None) -> list[float]:
        beta = self.beta_hat if beta is None else beta
        return [condition_b_residual(e.prices, e.minimizer, beta) for e in self.entries]


@dataclass(frozen=True)
class CharacterizationVerdict:
    is_cobb_douglas: bool
    alpha_hat: float
    A_hat: float
    beta_hat: float
    share_max_deviation: float
    A_max_deviation: float
    euler_max_residual: float
    tolerance: float
    #: fewer than two distinct price ratios cannot separate families
    low_confidence: bool = False
    notes: tuple[str, ...] = ()
    scan: ShareScanReport | None = field(default=None, compare=False, repr=False)


def labour_share_of_cost(prices: FactorPrices, b: Bundle) -> float:
    """``w*L / (w*L + r*K)``."""
    wL = prices.w * b.L
    return wL / (wL + prices.r * b.K)


def condition_b_residual(prices: FactorPrices, b: Bundle, beta: float) -> float:
    """Normalized gap ``(K - L*(w/r)*beta) / K`` from the Cobb-Douglas expansion path."""
    if not beta > 0.0:
        raise DomainError(f"beta must be positive, got {beta!r}")
    return (b.K - b.L * (prices.w / prices.r) * beta) / b.K


def estimate_beta_pointwise(pf: ProductionFunction, b: Bundle) -> float:
    """Ratio of output elasticities ``(K*Y_K) / (L*Y_L)`` at ``b``."""
    dK, dL = pf.gradient(b)
    labour = b.L * dL
    if not labour > 0.0:
        raise ComputationError(f"labour elasticity is not positive at {b!r}")
    return b.K * dK / labour


def _scan_point(args):
    pf, w, r, q = args
    res = minimize_cost(pf, FactorPrices(w, r), q)
    return ScanEntry(w, r, q, res.minimizer, res.labour_share)


def share_scan(pf: ProductionFunction, cfg: ScanConfig, workers: int | None = None) -> ShareScanReport:
    """Run :func:`minimize_cost` over every grid point and aggregate labour shares.

    With ``workers > 1`` the points are spread over a process pool; entries
    are always assembled in grid order.
    """
    tasks = [(pf, w, r, q) for w, r, q in cfg.points()]
    if workers and workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_scan_point, t) for t in tasks]
            entries = []
            for t, fut in zip(tasks, futures):
                entries.append(_collect(fut.result, t))
    else:
        entries = [_collect(lambda t=t: _scan_point(t), t) for t in tasks]
    shares = [e.labour_share for e in entries]
    mean = math.fsum(shares) / len(shares)
    dev = max(abs(s - mean) for s in shares)
    return ShareScanReport(tuple(entries), mean, dev, (1.0 - mean) / mean, cfg.share_tolerance)


def _collect(call, task):
    try:
        return call()
    except ComputationError as exc:
        _, w, r, q = task
        exc.args = (f"at grid point w={w!r}, r={r!r}, q={q!r}: {exc}",)
        raise


def characterize(
    pf: ProductionFunction, cfg: ScanConfig | None = None, workers: int | None = None
) -> CharacterizationVerdict:
    """Test the two conditions of the Cobb-Douglas characterization on grids.

    Condition one (constant returns) is checked through the Euler residual
    ``|Y - K*Y_K - L*Y_L| / Y`` on ``cfg.bundles``.  Condition two (a
    constant expansion path) through the share scan.  The scale is recovered
    as the mean of ``Y / (K**alpha_hat * L**(1-alpha_hat))`` over the grid
    minimizers; its largest relative departure from the mean is the third
    statistic.  All three must sit within ``cfg.verdict_tolerance``.
    """
    cfg = cfg or ScanConfig.default()
    notes: list[str] = []

    euler = 0.0
    try:
        for b in cfg.bundles:
            euler = max(euler, abs(euler_residual(pf, b)) / pf.evaluate(b))
    except NotDifferentiable as exc:
        euler = math.inf
        notes.append(f"Euler check not applicable: {exc}")

    scan = share_scan(pf, cfg, workers=workers)
    beta_hat = scan.beta_hat
    alpha_hat = beta_hat / (beta_hat + 1.0)
    scales = [
        pf.evaluate(e.minimizer) / (e.minimizer.K**alpha_hat * e.minimizer.L ** (1.0 - alpha_hat))
        for e in scan.entries
    ]
    A_hat = math.fsum(scales) / len(scales)
    A_dev = max(abs(s - A_hat) for s in scales) / A_hat

    tol = cfg.verdict_tolerance
    verdict = scan.max_deviation <= tol and A_dev <= tol and euler <= tol
    ratios = {w / r for w, r, _ in cfg.points()}
    low = len(ratios) < 2 or cfg.size < 2
    if low:
        notes.append("low confidence: the grid has a single price ratio")
    return CharacterizationVerdict(
        is_cobb_douglas=verdict,
        alpha_hat=alpha_hat,
        A_hat=A_hat,
        beta_hat=beta_hat,
        share_max_deviation=scan.max_deviation,
        A_max_deviation=A_dev,
        euler_max_residual=euler,
        tolerance=tol,
        low_confidence=low,
        notes=tuple(notes),
        scan=scan,
    )


def reconstruct_output(beta: float, anchor: tuple[Bundle, float], target: Bundle) -> float:
    """Output at ``target`` implied by share ratio ``beta`` and one observed point.

    Integrating ``dY/dL = Y / ((beta+1) L)`` and ``dY/dK = beta Y / ((beta+1) K)``
    from ``anchor = (bundle, Y0)`` gives ``Y0 * (K/K0)**alpha * (L/L0)**(1-alpha)``
    with ``alpha = beta / (beta + 1)``.
    """
    if not (beta > 0.0 and math.isfinite(beta)):
        raise DomainError(f"beta must be a finite positive number, got {beta!r}")
    b0, y0 = anchor
    if not (y0 > 0.0 and math.isfinite(y0)):
        raise DomainError(f"anchor output must be positive, got {y0!r}")
    if target == b0:
        return float(y0)
    alpha = beta / (beta + 1.0)
    return y0 * (target.K / b0.K) ** alpha * (target.L / b0.L) ** (1.0 - alpha)
