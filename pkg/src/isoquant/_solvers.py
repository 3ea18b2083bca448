"""Scalar root finding and minimization used by the cost and profit modules.

Both work on a bounded real interval (callers map positive quantities to log
space first).  Functions may return ``math.inf`` to mark infeasible points.
"""

from __future__ import annotations

import math
from collections.abc import Callable

from .errors import NoInteriorMinimum, NoRoot, Unattainable

GOLDEN = 0.5 * (3.0 - math.sqrt(5.0))  # 0.381966...
_EXPAND = 1.618033988749895


def solve_increasing(
    F: Callable[[float], float],
    x0: float,
    lo: float,
    hi: float,
    dF: Callable[[float], float | None] | None = None,
    xtol: float = 1e-14,
    step: float = 1.0,
    maxiter: int = 300,
) -> float:
    """Root of a nondecreasing ``F`` on ``[lo, hi]``.

    The bracket is found by geometric expansion from ``x0``; the root is then
    polished by Newton steps that fall back to bisection whenever the step
    leaves the bracket or stalls.  Where ``F`` is zero on an interval the
    left end is returned.
    """
    x0 = min(max(x0, lo), hi)
    f0 = F(x0)
    if f0 == 0.0 and not _zero_extends_left(F, x0, lo, xtol):
        return x0
    # find a, b with F(a) < 0 <= F(b)
    if f0 < 0.0:
        a, fa = x0, f0
        b, h = x0, step
        while True:
            if b >= hi:
                raise NoRoot(f"no sign change up to the upper bound {hi!r}")
            b = min(a + h, hi)
            fb = F(b)
            if fb >= 0.0:
                break
            a, fa, h = b, fb, h * _EXPAND
    else:
        b, fb = x0, f0
        a, h = x0, step
        while True:
            if a <= lo:
                raise NoRoot(f"no sign change down to the lower bound {lo!r}")
            a = max(b - h, lo)
            fa = F(a)
            if fa < 0.0:
                break
            b, fb, h = a, fa, h * _EXPAND

    # a holds F < 0, b holds F >= 0
    x, fx = (a, fa) if abs(fa) < abs(fb) else (b, fb)
    dx_old = dx = b - a
    for _ in range(maxiter):
        d = dF(x) if dF is not None else None
        newton = d is not None and d > 0.0 and math.isfinite(d)
        if newton:
            trial = x - fx / d
            newton = a < trial < b and abs(2.0 * fx) <= abs(dx_old * d)
        dx_old = dx
        if newton:
            dx = fx / d
            x = x - dx
        else:
            dx = 0.5 * (b - a)
            x = a + dx
        if abs(dx) <= xtol:
            return x
        fx = F(x)
        if fx < 0.0:
            a = x
        else:
            b = x
            if fx == 0.0 and not _zero_extends_left(F, x, a, xtol):
                return x
        if b - a <= xtol:
            return b
    return x


def _zero_extends_left(F: Callable[[float], float], x: float, lo: float, dist: float) -> bool:
    probe = x - dist
    return probe >= lo and F(probe) == 0.0


def bisect_increasing(
    F: Callable[[float], float],
    x0: float,
    lo: float,
    hi: float,
    width: float = 1e-12,
) -> float:
    """Plain bisection on a nondecreasing ``F`` after expanding a bracket from ``x0``."""
    return solve_increasing(F, x0, lo, hi, dF=None, xtol=width, step=1.0)


def _bracket(g, x0: float, g0: float, lo: float, hi: float, step: float):
    """Return ``(a, b, c), (ga, gb, gc)`` with ``gb <= min(ga, gc)``."""
    left, right = max(x0 - step, lo), min(x0 + step, hi)
    gl, gr = g(left), g(right)
    if g0 <= gl and g0 <= gr:
        return (left, x0, right), (gl, g0, gr)
    if gl < g0 and gl <= gr:
        direction = -1.0
        b, gb, c, gc = left, gl, x0, g0
    else:
        direction = 1.0
        b, gb, c, gc = right, gr, x0, g0
    h = step
    while True:
        bound = lo if direction < 0 else hi
        if b == bound:
            raise NoInteriorMinimum(
                f"cost keeps falling up to the search bound {math.exp(bound):.3g}"
            )
        h *= _EXPAND
        nxt = b + direction * h
        nxt = max(nxt, lo) if direction < 0 else min(nxt, hi)
        gn = g(nxt)
        if gn >= gb:
            a, ga = nxt, gn
            break
        c, gc, b, gb = b, gb, nxt, gn
    if a > c:
        a, c, ga, gc = c, a, gc, ga
    return (a, b, c), (ga, gb, gc)


def brent_minimize(g, a: float, b: float, c: float, gb: float, xtol: float, maxiter: int = 200):
    """Golden-section search with parabolic steps on the bracket ``a < b < c``."""
    x = w = v = b
    fx = fw = fv = gb
    d = e = 0.0
    for _ in range(maxiter):
        m = 0.5 * (a + c)
        tol1 = xtol + 1e-300
        tol2 = 2.0 * tol1
        if abs(x - m) <= tol2 - 0.5 * (c - a):
            break
        use_golden = True
        if abs(e) > tol1 and math.isfinite(fw) and math.isfinite(fv):
            r = (x - w) * (fx - fv)
            q = (x - v) * (fx - fw)
            p = (x - v) * q - (x - w) * r
            q = 2.0 * (q - r)
            if q > 0.0:
                p = -p
            q = abs(q)
            e_prev = e
            if abs(p) < abs(0.5 * q * e_prev) and p > q * (a - x) and p < q * (c - x):
                e = d
                d = p / q
                u = x + d
                if u - a < tol2 or c - u < tol2:
                    d = tol1 if m >= x else -tol1
                use_golden = False
        if use_golden:
            e = (a - x) if x >= m else (c - x)
            d = GOLDEN * e
        u = x + d if abs(d) >= tol1 else x + (tol1 if d > 0 else -tol1)
        fu = g(u)
        if fu <= fx:
            if u >= x:
                a = x
            else:
                c = x
            v, fv, w, fw, x, fx = w, fw, x, fx, u, fu
        else:
            if u < x:
                a = u
            else:
                c = u
            if fu <= fw or w == x:
                v, fv, w, fw = w, fw, u, fu
            elif fu <= fv or v == x or v == w:
                v, fv = u, fu
    return x, fx


def parabolic_polish(g, x: float, gx: float, h: float = 1e-4, rounds: int = 3):
    """Refine a smooth minimum with Newton steps on finite-difference derivatives.

    The slope comes from the five-point stencil and the curvature from the
    three-point one, both at spacing ``h``.  Steps with nonpositive
    curvature, infeasible stencil points, or a jump beyond ``10*h`` are
    skipped.  A step is kept unless ``g`` rises by more than ``1e-11*|g|``:
    near the optimum ``g`` is flat below its own evaluation noise, so only
    gross steps are detectable.
    """
    for _ in range(rounds):
        g1m, g1p = g(x - h), g(x + h)
        g2m, g2p = g(x - 2.0 * h), g(x + 2.0 * h)
        if not all(math.isfinite(v) for v in (g1m, g1p, g2m, g2p, gx)):
            break
        curv = (g1p - 2.0 * gx + g1m) / (h * h)
        if curv <= 0.0:
            break
        slope = (g2m - 8.0 * g1m + 8.0 * g1p - g2p) / (12.0 * h)
        shift = -slope / curv
        if abs(shift) > 10.0 * h:
            break
        xn = x + shift
        gn = g(xn)
        if gn > gx + 1e-11 * abs(gx):
            break
        x, gx = xn, gn
        if abs(shift) < 1e-13:
            break
    return x, gx


def minimize_log_space(
    g: Callable[[float], float],
    x0: float,
    lo: float,
    hi: float,
    xtol: float = 1e-10,
    step: float = 1.0,
) -> tuple[float, float]:
    """Minimize ``g`` over ``[lo, hi]`` starting near ``x0``; ``inf`` marks infeasible points."""
    x0 = min(max(x0, lo), hi)
    g0 = g(x0)
    if not math.isfinite(g0):
        x0, g0 = _find_feasible(g, x0, lo, hi, step)
    (a, b, c), (_, gb, _) = _bracket(g, x0, g0, lo, hi, step)
    x, gx = brent_minimize(g, a, b, c, gb, xtol)
    return parabolic_polish(g, x, gx)


def _find_feasible(g, x0: float, lo: float, hi: float, step: float):
    k = 1
    while True:
        left, right = x0 - k * step, x0 + k * step
        if left < lo and right > hi:
            raise Unattainable("no feasible point on the search bracket")
        for x in (left, right):
            if lo <= x <= hi:
                gx = g(x)
                if math.isfinite(gx):
                    return x, gx
        k += 1
