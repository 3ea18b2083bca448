"""Two-input production technologies Y(K, L).

Every family is an immutable dataclass.  Numerics are restricted to the open
positive orthant; boundary points are rejected with :class:`DomainError`.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, fields

from .errors import DomainError, NotDifferentiable

# |rho| below this switches CES to its Cobb-Douglas limit
CES_LIMIT_THRESHOLD = 1e-6
FD_RELATIVE_STEP = 1e-6


def _require_positive(name: str, value: float) -> float:
    value = float(value)
    if not (value > 0.0 and math.isfinite(value)):
        raise DomainError(f"{name} must be a finite positive number, got {value!r}")
    return value


@dataclass(frozen=True)
class Bundle:
    """An input point (K, L) with both coordinates strictly positive."""

    K: float
    L: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "K", _require_positive("K", self.K))
        object.__setattr__(self, "L", _require_positive("L", self.L))

    def scaled(self, t: float) -> Bundle:
        return Bundle(t * self.K, t * self.L)


def central_difference_gradient(pf: ProductionFunction, b: Bundle) -> tuple[float, float]:
    """Central differences with relative step ``1e-6 * max(|x|, 1)`` per coordinate."""
    hK = FD_RELATIVE_STEP * max(abs(b.K), 1.0)
    hL = FD_RELATIVE_STEP * max(abs(b.L), 1.0)
    if hK >= b.K or hL >= b.L:
        # stencil would leave the orthant; shrink to stay inside
        hK = min(hK, 0.5 * b.K)
        hL = min(hL, 0.5 * b.L)
    f = pf.value
    dK = (f(b.K + hK, b.L) - f(b.K - hK, b.L)) / (2.0 * hK)
    dL = (f(b.K, b.L + hL) - f(b.K, b.L - hL)) / (2.0 * hL)
    return dK, dL


class ProductionFunction(ABC):
    """Abstract technology.

    Subclasses implement :meth:`value` on raw floats (no validation, used in
    inner solver loops) and may override :meth:`analytic_gradient`.  Without an
    analytic gradient, :meth:`gradient` falls back to central differences.
    """

    differentiable_everywhere: bool = True
    #: degree-1 homogeneous by construction
    constant_returns: bool = True
    family: str = "abstract"

    @abstractmethod
    def value(self, K: float, L: float) -> float:
        ...

    def analytic_gradient(self, K: float, L: float) -> tuple[float, float] | None:
        return None

    def evaluate(self, b: Bundle) -> float:
        return self.value(b.K, b.L)

    def gradient(self, b: Bundle) -> tuple[float, float]:
        """Return ``(dY/dK, dY/dL)`` at ``b``."""
        g = self.analytic_gradient(b.K, b.L)
        if g is None:
            g = central_difference_gradient(self, b)
        return g

    def params(self) -> dict[str, float]:
        return {f.name: getattr(self, f.name) for f in fields(self)}  # type: ignore[arg-type]


@dataclass(frozen=True)
class CobbDouglas(ProductionFunction):
    """``Y = A * K**alpha * L**(1 - alpha)``."""

    A: float = 1.0
    alpha: float = 0.5

    family = "cobb-douglas"

    def __post_init__(self) -> None:
        object.__setattr__(self, "A", _require_positive("A", self.A))
        alpha = float(self.alpha)
        if not 0.0 < alpha < 1.0:
            raise DomainError(f"alpha must satisfy 0 < alpha < 1, got {alpha!r}")
        object.__setattr__(self, "alpha", alpha)

    @property
    def beta(self) -> float:
        """Capital-to-labour share ratio ``alpha / (1 - alpha)``."""
        return self.alpha / (1.0 - self.alpha)

    def value(self, K: float, L: float) -> float:
        if K == L:
            return self.A * K
        return self.A * K**self.alpha * L ** (1.0 - self.alpha)

    def analytic_gradient(self, K: float, L: float) -> tuple[float, float]:
        y = self.value(K, L)
        return self.alpha * y / K, (1.0 - self.alpha) * y / L


@dataclass(frozen=True)
class CES(ProductionFunction):
    """``Y = A * (a*K**rho + (1-a)*L**rho)**(1/rho)`` with ``rho <= 1``, ``rho != 0``.

    The inner sum is formed through ``expm1``/``log1p`` so that small ``rho``
    keeps full precision; for ``|rho| < 1e-6`` the Cobb-Douglas limit
    ``A * K**a * L**(1-a)`` is used instead.
    """

    A: float = 1.0
    a: float = 0.5
    rho: float = -1.0

    family = "ces"

    def __post_init__(self) -> None:
        object.__setattr__(self, "A", _require_positive("A", self.A))
        a, rho = float(self.a), float(self.rho)
        if not 0.0 < a < 1.0:
            raise DomainError(f"a must satisfy 0 < a < 1, got {a!r}")
        if not (rho <= 1.0 and rho != 0.0 and math.isfinite(rho)):
            raise DomainError(f"rho must satisfy rho <= 1 and rho != 0, got {rho!r}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "rho", rho)

    @property
    def uses_limit(self) -> bool:
        return abs(self.rho) < CES_LIMIT_THRESHOLD

    def value(self, K: float, L: float) -> float:
        a, rho = self.a, self.rho
        lk, ll = math.log(K), math.log(L)
        if self.uses_limit:
            return self.A * math.exp(a * lk + (1.0 - a) * ll)
        zk, zl = rho * lk, rho * ll
        # shift by the larger exponent so nothing overflows
        m = max(zk, zl)
        inner = a * math.exp(zk - m) + (1.0 - a) * math.exp(zl - m)
        if abs(zk) < 0.5 and abs(zl) < 0.5:
            s = a * math.expm1(zk) + (1.0 - a) * math.expm1(zl)
            log_sum = math.log1p(s)
        else:
            log_sum = m + math.log(inner)
        return self.A * math.exp(log_sum / rho)

    def capital_weight(self, K: float, L: float) -> float:
        """``a*K**rho / (a*K**rho + (1-a)*L**rho)``, the elasticity of Y in K."""
        if self.uses_limit:
            return self.a
        z = self.rho * (math.log(L) - math.log(K))
        ratio = (1.0 - self.a) / self.a
        if z > 700.0:
            return 0.0
        return 1.0 / (1.0 + ratio * math.exp(z))

    def analytic_gradient(self, K: float, L: float) -> tuple[float, float]:
        y = self.value(K, L)
        sk = self.capital_weight(K, L)
        return y * sk / K, y * (1.0 - sk) / L


@dataclass(frozen=True)
class Leontief(ProductionFunction):
    """Fixed proportions ``Y = min(K / a_k, L / a_l)``; kinked on ``K/a_k == L/a_l``."""

    a_k: float = 1.0
    a_l: float = 1.0

    family = "leontief"
    differentiable_everywhere = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "a_k", _require_positive("a_k", self.a_k))
        object.__setattr__(self, "a_l", _require_positive("a_l", self.a_l))

    def value(self, K: float, L: float) -> float:
        return min(K / self.a_k, L / self.a_l)

    def analytic_gradient(self, K: float, L: float) -> tuple[float, float]:
        x, y = K / self.a_k, L / self.a_l
        if abs(x - y) <= 1e-12 * max(x, y):
            raise NotDifferentiable(f"Leontief kink at K={K!r}, L={L!r}")
        if x < y:
            return 1.0 / self.a_k, 0.0
        return 0.0, 1.0 / self.a_l


@dataclass(frozen=True)
class Perturbed(ProductionFunction):
    """Cobb-Douglas plus a constant, ``Y = base(K, L) + c``.

    For ``c > 0`` this breaks degree-1 homogeneity while leaving every
    cost-minimizing bundle a Cobb-Douglas one.
    """

    base: CobbDouglas = CobbDouglas()
    c: float = 0.0

    family = "perturbed"

    def __post_init__(self) -> None:
        if not isinstance(self.base, CobbDouglas):
            raise DomainError("Perturbed base must be a CobbDouglas technology")
        c = float(self.c)
        if not (c >= 0.0 and math.isfinite(c)):
            raise DomainError(f"c must be a finite nonnegative number, got {c!r}")
        object.__setattr__(self, "c", c)

    @property
    def constant_returns(self) -> bool:  # type: ignore[override]
        return self.c == 0.0

    def value(self, K: float, L: float) -> float:
        return self.base.value(K, L) + self.c

    def analytic_gradient(self, K: float, L: float) -> tuple[float, float]:
        return self.base.analytic_gradient(K, L)

    def params(self) -> dict[str, float]:
        return {"A": self.base.A, "alpha": self.base.alpha, "c": self.c}


# -- module-level operations -------------------------------------------------

def evaluate(pf: ProductionFunction, b: Bundle) -> float:
    return pf.evaluate(b)


def gradient(pf: ProductionFunction, b: Bundle) -> tuple[float, float]:
    return pf.gradient(b)


def euler_residual(pf: ProductionFunction, b: Bundle) -> float:
    """``Y - K*dY/dK - L*dY/dL``; zero for constant-returns technologies."""
    dK, dL = pf.gradient(b)
    return pf.evaluate(b) - b.K * dK - b.L * dL


def homogeneity_check(pf: ProductionFunction, b: Bundle, scales: Iterable[float]) -> float:
    """Largest ``|Y(tK, tL) - t*Y(K, L)| / (t*Y(K, L))`` over ``scales``."""
    y = pf.evaluate(b)
    worst = 0.0
    for t in scales:
        t = float(t)
        if not t > 0.0:
            raise DomainError(f"scale factors must be positive, got {t!r}")
        ty = t * y
        worst = max(worst, abs(pf.evaluate(b.scaled(t)) - ty) / ty)
    return worst


# -- construction from plain records -----------------------------------------

FAMILY_PARAMETERS: dict[str, tuple[str, ...]] = {
    "cobb-douglas": ("A", "alpha"),
    "ces": ("A", "a", "rho"),
    "leontief": ("a_k", "a_l"),
    "perturbed": ("A", "alpha", "c"),
}

_ALIASES = {"cobb_douglas": "cobb-douglas", "cd": "cobb-douglas", "cobbdouglas": "cobb-douglas"}


def make_family(name: str, params: Mapping[str, float] | None = None) -> ProductionFunction:
    """Build a technology from a family name and named numeric parameters.

    Unknown parameter names raise :class:`DomainError` naming the key.  Missing
    parameters take the dataclass defaults (``A=1``, unit Leontief
    coefficients, ``c=0``), except ``alpha`` and ``rho`` which are required.
    """
    key = name.strip().lower()
    key = _ALIASES.get(key, key)
    if key not in FAMILY_PARAMETERS:
        raise DomainError(
            f"unknown family {name!r}; expected one of {', '.join(FAMILY_PARAMETERS)}"
        )
    params = dict(params or {})
    allowed = FAMILY_PARAMETERS[key]
    for k in params:
        if k not in allowed:
            raise DomainError(f"unknown parameter {k!r} for family {key!r}")
    values = {k: float(v) for k, v in params.items()}
    required = {"cobb-douglas": ("alpha",), "ces": ("a", "rho"), "perturbed": ("alpha",)}
    for k in required.get(key, ()):
        if k not in values:
            raise DomainError(f"family {key!r} requires parameter {k!r}")
    if key == "cobb-douglas":
        return CobbDouglas(**values)
    if key == "ces":
        return CES(**values)
    if key == "leontief":
        return Leontief(**values)
    c = values.pop("c", 0.0)
    return Perturbed(CobbDouglas(**values), c)
