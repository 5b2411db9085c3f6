"""Scalar numerical kernels: root finding, Lambert W, Gamma(0, x), derivatives."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import DomainError, NonFinite, NoSignChange

_INV_E = math.exp(-1.0)
_EULER_GAMMA = 0.5772156649015328606


@dataclass(frozen=True)
class Bracket:
    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not (self.lo < self.hi):
            raise DomainError(f"bracket requires lo < hi, got [{self.lo}, {self.hi}]")


def find_root(f: Callable[[float], float], b: Bracket, tol: float) -> float:
    """Find a root of f inside the bracket.

    Bisection with secant acceleration; the bisection fallback guarantees
    convergence on piecewise-linear (kinked) functions. Stops when the bracket
    width falls below tol or an exact zero is hit.
    """
    if tol <= 0:
        raise DomainError("tol must be positive")
    lo, hi = b.lo, b.hi
    flo, fhi = f(lo), f(hi)
    if not (math.isfinite(flo) and math.isfinite(fhi)):
        raise NonFinite(f"f non-finite at bracket endpoints: f({lo})={flo}, f({hi})={fhi}")
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise NoSignChange(f"f({lo})={flo} and f({hi})={fhi} have the same sign")

    for _ in range(200):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        # secant proposal, used when it lands strictly inside the bracket
        denom = fhi - flo
        if denom != 0.0:
            sec = lo - flo * (hi - lo) / denom
            if lo + 0.25 * tol < sec < hi - 0.25 * tol:
                mid = sec
        # keep progress guaranteed: never let the step degenerate
        if not (lo < mid < hi):
            mid = 0.5 * (lo + hi)
        fmid = f(mid)
        if not math.isfinite(fmid):
            raise NonFinite(f"f({mid}) = {fmid}")
        if fmid == 0.0:
            return mid
        if (fmid > 0) == (flo > 0):
            # stall guard: if the secant point barely moved, bisect next round
            if mid - lo < 1e-3 * (hi - lo):
                mid2 = 0.5 * (mid + hi)
                fmid2 = f(mid2)
                if not math.isfinite(fmid2):
                    raise NonFinite(f"f({mid2}) = {fmid2}")
                if fmid2 == 0.0:
                    return mid2
                if (fmid2 > 0) == (flo > 0):
                    lo, flo = mid2, fmid2
                else:
                    lo, flo = mid, fmid
                    hi, fhi = mid2, fmid2
                continue
            lo, flo = mid, fmid
        else:
            if hi - mid < 1e-3 * (hi - lo):
                mid2 = 0.5 * (lo + mid)
                fmid2 = f(mid2)
                if not math.isfinite(fmid2):
                    raise NonFinite(f"f({mid2}) = {fmid2}")
                if fmid2 == 0.0:
                    return mid2
                if (fmid2 > 0) == (flo > 0):
                    lo, flo = mid2, fmid2
                    hi, fhi = mid, fmid
                else:
                    hi, fhi = mid2, fmid2
                continue
            hi, fhi = mid, fmid
    # linear interpolation across the final bracket
    return lo - flo * (hi - lo) / (fhi - flo) if fhi != flo else 0.5 * (lo + hi)


def _halley(x: float, w: float) -> float:
    for _ in range(100):
        ew = math.exp(w)
        r = w * ew - x
        if r == 0.0:
            return w
        denom = ew * (w + 1.0) - (w + 2.0) * r / (2.0 * w + 2.0)
        step = r / denom
        w_next = w - step
        if abs(step) <= 1e-13 * max(1.0, abs(w_next)):
            return w_next
        w = w_next
    return w


def lambert_w(branch: str, x: float) -> float:
    """Real Lambert W. branch is 'principal' (W0) or 'minus_one' (W-1)."""
    if branch not in ("principal", "minus_one"):
        raise DomainError(f"unknown branch {branch!r}")
    if not math.isfinite(x):
        raise DomainError(f"x must be finite, got {x}")
    q = x + _INV_E
    if branch == "principal":
        if q < -1e-15:
            raise DomainError(f"principal branch requires x >= -1/e, got {x}")
        if x == 0.0:
            return 0.0
        if q <= 0.0:
            return -1.0
        if x > 2.0:
            lx = math.log(x)
            w0 = lx - math.log(lx)
        elif x > -0.25:
            w0 = x / (1.0 + x) if x > -0.5 else x
        else:
            w0 = -1.0 + math.sqrt(2.0 * math.e * q)
        return _halley(x, w0)
    # minus_one branch
    if q < -1e-15 or x >= 0.0:
        raise DomainError(f"minus_one branch requires -1/e <= x < 0, got {x}")
    if q <= 0.0:
        return -1.0
    if x < -0.27:
        w0 = -1.0 - math.sqrt(2.0 * math.e * q)
    else:
        l1 = math.log(-x)
        l2 = math.log(-l1)
        w0 = l1 - l2 + l2 / l1
    w = _halley(x, w0)
    return min(w, -1.0)


def gamma_upper_zero(x: float) -> float:
    """Upper incomplete gamma at a=0: integral of exp(-t)/t from x to infinity (E1)."""
    if not (x > 0.0):
        raise DomainError(f"gamma_upper_zero requires x > 0, got {x}")
    if x < 1.0:
        # E1(x) = -gamma - ln x + sum_{k>=1} (-1)^{k+1} x^k / (k * k!)
        acc = -_EULER_GAMMA - math.log(x)
        term = 1.0
        for k in range(1, 200):
            term *= -x / k
            contrib = -term / k
            acc += contrib
            if abs(contrib) < 1e-18 * max(1.0, abs(acc)):
                break
        return acc
    # modified Lentz continued fraction: E1(x) = e^{-x} / (x + 1 - 1/(x + 3 - 4/(x + 5 - ...)))
    tiny = 1e-300
    b = x + 1.0
    f = b
    c = b
    d = 0.0
    for k in range(1, 300):
        a = -(k * k)
        b += 2.0
        d = b + a * d
        if d == 0.0:
            d = tiny
        c = b + a / c
        if c == 0.0:
            c = tiny
        d = 1.0 / d
        delta = c * d
        f *= delta
        if abs(delta - 1.0) < 1e-15:
            break
    return math.exp(-x) / f


def finite_diff(f: Callable[[float], float], x: float, h: float) -> float:
    """Central finite difference (f(x+h) - f(x-h)) / (2h)."""
    if h <= 0:
        raise DomainError("h must be positive")
    hi, lo = f(x + h), f(x - h)
    out = (hi - lo) / (2.0 * h)
    if not math.isfinite(out):
        raise NonFinite(f"finite_diff non-finite at x={x}, h={h}")
    return out
