"""Profit of a price-taking firm with output price normalized to one.

For constant returns, profit is linear along every ray, so its supremum is
zero, infinite, or reached only by shutting down.  Which case holds is
decided by the sign of ``1 - unit cost``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from ._solvers import bisect_increasing
from .costmin import FactorPrices, minimize_cost
from .errors import ComputationError, DomainError, NoRoot
from .production import Bundle, ProductionFunction

R_BOUNDS = (1e-9, 1e9)

UNBOUNDED = "unbounded_profit"
SHUTDOWN = "shutdown"
ZERO_PROFIT = "zero_profit_ray"


@dataclass(frozen=True)
class ZeroProfitReport:
    gap: float
    classification: str
    tol: float
    unit_cost: float
    prices: FactorPrices


class BowleyCheck(NamedTuple):
    labour_share_of_output: float
    bundle: Bundle
    rental: float


def profit(pf: ProductionFunction, prices: FactorPrices, b: Bundle) -> float:
    return pf.evaluate(b) - prices.w * b.L - prices.r * b.K


def classify_gap(gap: float, tol: float) -> str:
    if gap > tol:
        return UNBOUNDED
    if gap < -tol:
        return SHUTDOWN
    return ZERO_PROFIT


def zero_profit_gap(pf: ProductionFunction, prices: FactorPrices, tol: float = 1e-8) -> ZeroProfitReport:
    """``1 - (least cost of one unit of output)`` and the profit regime it implies."""
    if not tol > 0.0:
        raise DomainError(f"tol must be positive, got {tol!r}")
    unit_cost = minimize_cost(pf, prices, 1.0).cost
    gap = 1.0 - unit_cost
    return ZeroProfitReport(gap, classify_gap(gap, tol), tol, unit_cost, prices)


def zero_profit_rental(pf: ProductionFunction, w: float, width: float = 1e-12) -> float:
    """Rental rate that puts ``(w, r)`` on the zero-profit locus.

    Unit cost rises with ``r``, so bisection in ``log r`` on ``[1e-9, 1e9]``
    converges unconditionally once a sign change is bracketed.
    """
    if not (w > 0.0 and math.isfinite(w)):
        raise DomainError(f"w must be a finite positive number, got {w!r}")

    def excess_cost(x: float) -> float:
        try:
            return minimize_cost(pf, FactorPrices(w, math.exp(x)), 1.0).cost - 1.0
        except ComputationError as exc:
            raise NoRoot(f"unit cost undefined at r={math.exp(x):.6g}: {exc}") from None

    lo, hi = math.log(R_BOUNDS[0]), math.log(R_BOUNDS[1])
    try:
        x = bisect_increasing(excess_cost, math.log(w), lo, hi, width=width)
    except NoRoot as exc:
        raise NoRoot(f"no zero-profit rental for w={w!r}: {exc}") from None
    return math.exp(x)


def bowley_share_check(pf: ProductionFunction, w: float) -> BowleyCheck:
    """Labour share of output at the unit-output point of the zero-profit ray.

    Both ``w*L`` and ``Y`` scale together along the ray, so the share does
    not depend on which point of the ray is used.
    """
    r = zero_profit_rental(pf, w)
    b = minimize_cost(pf, FactorPrices(w, r), 1.0).minimizer
    return BowleyCheck(w * b.L / pf.evaluate(b), b, r)
