"""Least-cost input bundles along an isoquant ``Y(K, L) = q``.

:func:`minimize_cost` works for any monotone technology by reducing the
problem to one dimension in ``log L``.  :func:`closed_form_cd_minimizer`
gives the exact Cobb-Douglas answer and is checked against it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ._solvers import minimize_log_space, solve_increasing
from .errors import DomainError, NoRoot, NotDifferentiable, Unattainable
from .production import Bundle, CobbDouglas, ProductionFunction

K_BOUNDS = (1e-12, 1e12)
L_BOUNDS = (1e-9, 1e9)
_LOG_K = (math.log(K_BOUNDS[0]), math.log(K_BOUNDS[1]))
_LOG_L = (math.log(L_BOUNDS[0]), math.log(L_BOUNDS[1]))


def _positive(name: str, value: float) -> float:
    value = float(value)
    if not (value > 0.0 and math.isfinite(value)):
        raise DomainError(f"{name} must be a finite positive number, got {value!r}")
    return value


@dataclass(frozen=True)
class FactorPrices:
    """Wage ``w`` per unit of labour and rental ``r`` per unit of capital."""

    w: float
    r: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "w", _positive("w", self.w))
        object.__setattr__(self, "r", _positive("r", self.r))

    def scaled(self, s: float) -> FactorPrices:
        return FactorPrices(s * self.w, s * self.r)


@dataclass(frozen=True)
class CostMinResult:
    """Outcome of a cost minimization.

    ``lagrange_lambda`` and ``stationarity_residual`` are ``None`` when the
    technology is not differentiable everywhere (Leontief); ``differentiable``
    records that.
    """

    minimizer: Bundle
    cost: float
    lagrange_lambda: float | None
    labour_share: float
    stationarity_residual: float | None
    feasibility_residual: float
    evaluations: int
    differentiable: bool = True


def isoquant_solve_K(
    pf: ProductionFunction, L: float, q: float, guess: float | None = None
) -> float:
    """Capital input that produces ``q`` together with labour ``L``.

    Solved in ``log K`` by geometric bracket expansion from ``guess``, then
    Newton steps safeguarded by bisection.  Raises :class:`Unattainable` when
    ``q`` is out of reach for ``K`` in ``[1e-12, 1e12]``.
    """
    L = _positive("L", L)
    q = _positive("q", q)
    log_q = math.log(q)
    value = pf.value
    grad = pf.analytic_gradient

    def F(u: float) -> float:
        y = value(math.exp(u), L)
        if y <= 0.0:
            return -math.inf
        return math.log(y) - log_q

    def dF(u: float) -> float | None:
        K = math.exp(u)
        try:
            g = grad(K, L)
        except NotDifferentiable:
            return None
        if g is None:
            return None
        y = value(K, L)
        return K * g[0] / y

    u0 = math.log(guess) if guess is not None and guess > 0.0 else log_q
    try:
        u = solve_increasing(F, u0, _LOG_K[0], _LOG_K[1], dF=dF)
    except NoRoot as exc:
        raise Unattainable(f"output {q!r} is unattainable at L={L!r}: {exc}") from None
    return math.exp(u)


def kkt_residuals(
    pf: ProductionFunction, prices: FactorPrices, b: Bundle, q: float
) -> tuple[float, float, float]:
    """First-order diagnostics ``(stationarity, feasibility, lambda)`` at ``b``.

    Stationarity is ``(w*Y_K - r*Y_L) / (w*Y_K + r*Y_L)`` and vanishes when
    ``w/r`` equals the marginal rate of technical substitution.
    """
    q = _positive("q", q)
    dK, dL = pf.gradient(b)
    w, r = prices.w, prices.r
    num = w * dK - r * dL
    den = w * dK + r * dL
    stationarity = num / den if den > 0.0 else math.inf
    feasibility = (pf.evaluate(b) - q) / q
    lam = w / dL if dL > 0.0 else math.inf
    return stationarity, feasibility, lam


def minimize_cost(pf: ProductionFunction, prices: FactorPrices, q: float) -> CostMinResult:
    """Cheapest bundle on the isoquant ``Y = q`` at factor prices ``prices``.

    Minimizes ``g(L) = w*L + r*K(L, q)`` over ``log L`` in ``[log 1e-9, log 1e9]``.
    """
    q = _positive("q", q)
    w, r = prices.w, prices.r
    solved: dict[float, float] = {}
    last_K = [q]
    calls = [0]

    def g(x: float) -> float:
        calls[0] += 1
        L = math.exp(x)
        try:
            K = isoquant_solve_K(pf, L, q, guess=last_K[0])
        except Unattainable:
            return math.inf
        solved[x] = K
        last_K[0] = K
        return w * L + r * K

    x, _ = minimize_log_space(g, math.log(q), _LOG_L[0], _LOG_L[1])
    L = math.exp(x)
    K = solved[x]
    b = Bundle(K, L)
    cost = w * L + r * K
    feasibility = (pf.value(K, L) - q) / q
    share = w * L / cost
    if pf.differentiable_everywhere:
        stationarity, _, lam = kkt_residuals(pf, prices, b, q)
        return CostMinResult(b, cost, lam, share, stationarity, feasibility, calls[0])
    return CostMinResult(b, cost, None, share, None, feasibility, calls[0], differentiable=False)


def closed_form_cd_minimizer(params: CobbDouglas, prices: FactorPrices, q: float) -> Bundle:
    """Exact least-cost bundle for Cobb-Douglas.

    ``L = (q/A) * (r/w)**alpha * beta**(-alpha)`` and ``K = L * (w/r) * beta``
    with ``beta = alpha / (1 - alpha)``.
    """
    q = _positive("q", q)
    A, alpha, beta = params.A, params.alpha, params.beta
    ratio = prices.w / prices.r
    L = (q / A) * (ratio * beta) ** (-alpha)
    K = L * ratio * beta
    y = params.value(K, L)
    if abs(y - q) > 1e-12 * q:
        raise ArithmeticError(f"closed-form bundle misses output: Y={y!r}, q={q!r}")
    return Bundle(K, L)
