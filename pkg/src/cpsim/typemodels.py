"""Agent value-distribution families and the two-part-payment utility geometry.

Every model exposes the same derived quantities:

- ``u(z)``        expected utility facing no-show penalty z (base payment 0)
- ``u2(pay)``     expected utility facing a two-part payment (z, y)
- ``utilization`` P(V >= -z), ties at v = -z count as using the resource
- ``revenue``     y + z * P(V < -z)
- ``zero_crossing`` the unique z0 >= 0 with u(z0) = 0 (the maximum acceptable
  penalty and the contingent-second-price bid)
- closed-form bids for the second-price, fixed-penalty and gamma-split
  mechanisms, plus the first-best payment.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import AssumptionViolated, DomainError
from .numerics import Bracket, find_root, lambert_w

# Repository-wide tolerances: value-space and probability-space.
VALUE_TOL = 1e-9
PROB_TOL = 1e-12


@dataclass(frozen=True)
class TwoPartPayment:
    """No-show penalty z plus base payment y (paid regardless of use)."""

    z: float
    y: float


class ValueModel:
    """Common derived quantities; subclasses supply the distribution."""

    # --- distribution primitives -------------------------------------------------
    def prob_below(self, x: float) -> float:
        """P(V < x), strict."""
        raise NotImplementedError

    def prob_at_least(self, x: float) -> float:
        """P(V >= x)."""
        raise NotImplementedError

    def partial_ev(self, x: float) -> float:
        """E[V * 1{V >= x}]."""
        raise NotImplementedError

    def ev_plus(self) -> float:
        """E[V+]."""
        return self.partial_ev(0.0)

    def ev(self) -> float:
        """E[V]; -inf when a never-show atom carries mass."""
        raise NotImplementedError

    def violations(self) -> list[str]:
        raise NotImplementedError

    # --- derived quantities ------------------------------------------------------
    def u(self, z: float) -> float:
        return self.partial_ev(-z) - z * self.prob_below(-z)

    def u2(self, pay: TwoPartPayment) -> float:
        return self.u(pay.z) - pay.y

    def utilization(self, z: float) -> float:
        return self.prob_at_least(-z)

    def revenue(self, pay: TwoPartPayment) -> float:
        return pay.y + pay.z * self.prob_below(-pay.z)

    def agent_welfare(self, z: float) -> float:
        """E[V * 1{V >= -z}]: value created when the agent faces penalty z."""
        return self.partial_ev(-z)

    def zero_crossing(self) -> float:
        raise NotImplementedError

    def zero_crossing_numeric(self, tol: float = 1e-12) -> float:
        """Root-finder route to z0, for cross-checking the closed forms."""
        self._require_valid()
        hi = 1.0
        for _ in range(200):
            if self.u(hi) < 0.0:
                break
            hi *= 2.0
        else:
            raise AssumptionViolated(["A3: u(z) > 0 for all probed z"])
        if self.u(0.0) == 0.0:
            return 0.0
        return find_root(self.u, Bracket(0.0, hi), tol * max(1.0, hi))

    def u_inverse(self, target: float) -> float:
        """The z with u(z) = target; u is strictly decreasing so this is unique."""
        raise NotImplementedError

    def bid_sp(self) -> float:
        self._require_valid()
        return self.ev_plus()

    def bid_spc(self, C: float, allow_negative: bool = False) -> float:
        if C < 0:
            raise DomainError("C must be >= 0")
        self._require_valid()
        v = self.u(C)
        return v if allow_negative else max(v, 0.0)

    def bid_gamma_csp(self, gamma: float) -> float:
        """Sum of coordinates of the crossing of y = gamma/(1-gamma) z with y = u(z)."""
        if not 0.0 <= gamma <= 1.0:
            raise DomainError("gamma must lie in [0, 1]")
        self._require_valid()
        if gamma == 0.0:
            return self.zero_crossing()
        if gamma == 1.0:
            return self.bid_sp()
        z_a = self._gamma_z(gamma)
        return z_a / (1.0 - gamma)

    def bid_gamma_csp_numeric(self, gamma: float) -> float:
        """Root-finder route to the gamma-split bid, for closed-form cross-checks."""
        if not 0.0 <= gamma <= 1.0:
            raise DomainError("gamma must lie in [0, 1]")
        self._require_valid()
        if gamma == 0.0:
            return self.zero_crossing_numeric()
        if gamma == 1.0:
            return self.ev_plus()
        return self._gamma_z(gamma) / (1.0 - gamma)

    def _gamma_z(self, gamma: float) -> float:
        """z-coordinate of the gamma-ray / zero-profit-curve crossing (root route)."""
        ratio = gamma / (1.0 - gamma)
        z0 = self.zero_crossing()
        if z0 == 0.0:
            return 0.0
        f = lambda z: self.u(z) - ratio * z
        # rounding in the closed-form z0 can leave u(z0) a hair above the ray
        hi = z0
        for _ in range(200):
            if f(hi) < 0.0:
                break
            hi = hi * 1.5 + 1e-12
        return find_root(f, Bracket(0.0, hi), 1e-12 * max(1.0, hi))

    def first_best(self) -> tuple[TwoPartPayment, float]:
        """Payment in IR∩ND with maximal penalty, plus utilization there.

        An unbounded penalty is reported as the +inf sentinel with y = 0;
        callers must branch on it.
        """
        raise NotImplementedError

    # --- plumbing ------------------------------------------------------------------
    def _require_valid(self) -> None:
        bad = self.violations()
        if bad:
            raise AssumptionViolated(bad)


@dataclass(frozen=True)
class WpModel(ValueModel):
    """Value w with show probability p; never shows (value -inf) otherwise."""

    w: float
    p: float

    def violations(self) -> list[str]:
        out = []
        if not (self.w > 0):
            out.append("domain: w must be > 0")
        if not (0.0 < self.p < 1.0):
            out.append("domain: p must lie in (0, 1)")
        if out:
            return out
        # A1 holds (wp > 0), A2 holds (finite w), A3 holds (E[V] = -inf).
        return out

    def prob_below(self, x: float) -> float:
        return (1.0 - self.p) + (self.p if self.w < x else 0.0)

    def prob_at_least(self, x: float) -> float:
        return self.p if self.w >= x else 0.0

    def partial_ev(self, x: float) -> float:
        return self.w * self.p if self.w >= x else 0.0

    def ev(self) -> float:
        return -math.inf

    def zero_crossing(self) -> float:
        self._require_valid()
        return self.w * self.p / (1.0 - self.p)

    def u_inverse(self, target: float) -> float:
        # u(z) = wp - (1-p) z for z >= -w; u(z) = -z above w
        z = (self.w * self.p - target) / (1.0 - self.p)
        return z if z >= -self.w else -target

    def bid_gamma_csp(self, gamma: float) -> float:
        if not 0.0 <= gamma <= 1.0:
            raise DomainError("gamma must lie in [0, 1]")
        self._require_valid()
        return self.w * self.p / (1.0 - self.p + gamma * self.p)

    def first_best(self) -> tuple[TwoPartPayment, float]:
        self._require_valid()
        return TwoPartPayment(math.inf, 0.0), self.p


@dataclass(frozen=True)
class UniformModel(ValueModel):
    """V ~ U[-a1, a2] with 0 < a2 < a1."""

    a1: float
    a2: float

    def violations(self) -> list[str]:
        out = []
        if not (self.a1 > 0):
            out.append("domain: a1 must be > 0")
        if not (0.0 < self.a2):
            out.append("A1: a2 must be > 0 (otherwise E[V+] = 0)")
        if not (self.a2 < self.a1):
            out.append("A3: requires a2 < a1 (otherwise E[V] >= 0)")
        return out

    def prob_below(self, x: float) -> float:
        if x <= -self.a1:
            return 0.0
        if x >= self.a2:
            return 1.0
        return (x + self.a1) / (self.a1 + self.a2)

    def prob_at_least(self, x: float) -> float:
        return 1.0 - self.prob_below(x)

    def partial_ev(self, x: float) -> float:
        x = max(x, -self.a1)
        if x >= self.a2:
            return 0.0
        return (self.a2 * self.a2 - x * x) / (2.0 * (self.a1 + self.a2))

    def ev(self) -> float:
        return 0.5 * (self.a2 - self.a1)

    def zero_crossing(self) -> float:
        self._require_valid()
        return self.a1 - math.sqrt(self.a1 * self.a1 - self.a2 * self.a2)

    def u_inverse(self, target: float) -> float:
        # quadratic segment: u(z) = (z^2 - 2 a1 z + a2^2) / (2 (a1 + a2)) on [-a2, a1]
        top = self.u(-self.a2)
        if target > top:
            return -target
        rad = self.a1 * self.a1 - self.a2 * self.a2 + 2.0 * (self.a1 + self.a2) * target
        return self.a1 - math.sqrt(max(rad, 0.0))

    def bid_gamma_csp(self, gamma: float) -> float:
        if not 0.0 <= gamma <= 1.0:
            raise DomainError("gamma must lie in [0, 1]")
        self._require_valid()
        if gamma == 0.0:
            return self.zero_crossing()
        if gamma == 1.0:
            return self.bid_sp()
        a1, a2 = self.a1, self.a2
        d = a1 * a1 - a2 * a2 + 2.0 * gamma * a1 * a2 + 2.0 * gamma * a2 * a2
        # rationalized form of (a1 + g*a2 - sqrt(d)) / (1-g)^2: stable at g -> 1
        return a2 * a2 / (a1 + gamma * a2 + math.sqrt(d))

    def first_best(self) -> tuple[TwoPartPayment, float]:
        self._require_valid()
        z = self.a2
        y = self.a2 * (self.a2 - self.a1) / (self.a1 + self.a2)
        return TwoPartPayment(z, y), 2.0 * self.a2 / (self.a1 + self.a2)


@dataclass(frozen=True)
class ExponentialModel(ValueModel):
    """V = w - O with O ~ Exp(lam); requires w * lam < 1 so E[V] < 0."""

    w: float
    lam: float

    def violations(self) -> list[str]:
        out = []
        if not (self.w > 0):
            out.append("domain: w must be > 0")
        if not (self.lam > 0):
            out.append("domain: lambda must be > 0")
        if out:
            return out
        if not (self.w * self.lam < 1.0):
            out.append("A3: requires w*lambda < 1 (E[V] = w - 1/lambda >= 0)")
        return out

    def prob_below(self, x: float) -> float:
        if x > self.w:
            return 1.0
        return math.exp(self.lam * (x - self.w))

    def prob_at_least(self, x: float) -> float:
        if x > self.w:
            return 0.0
        return 1.0 - math.exp(self.lam * (x - self.w))

    def partial_ev(self, x: float) -> float:
        if x > self.w:
            return 0.0
        # integral of v lam e^{lam (v - w)} over [x, w]
        t = math.exp(self.lam * (x - self.w))
        return self.w - x * t - (1.0 - t) / self.lam

    def ev(self) -> float:
        return self.w - 1.0 / self.lam

    def zero_crossing(self) -> float:
        self._require_valid()
        return -self.w - math.log(1.0 - self.w * self.lam) / self.lam

    def u_inverse(self, target: float) -> float:
        # u(z) = w + (e^{-lam (w+z)} - 1)/lam for z >= -w; -z above w
        if target > self.w:
            return -target
        arg = 1.0 + self.lam * (target - self.w)
        if arg <= 0.0:
            # only reachable through rounding at target == u(z0) boundaries
            return self.zero_crossing()
        return -self.w - math.log(arg) / self.lam

    def bid_gamma_csp(self, gamma: float) -> float:
        if not 0.0 <= gamma <= 1.0:
            raise DomainError("gamma must lie in [0, 1]")
        self._require_valid()
        if gamma == 0.0:
            return self.zero_crossing()
        if gamma == 1.0:
            return self.bid_sp()
        wl = self.w * self.lam
        exponent = -1.0 + (1.0 - wl) / gamma + math.log((1.0 - gamma) / gamma)
        if exponent > 700.0:  # e^x overflows; tiny gamma, bid is nearly z0
            return self._gamma_z(gamma) / (1.0 - gamma)
        arg = -math.exp(-1.0 + 1.0 / gamma - wl / gamma) * (gamma - 1.0) / gamma
        z_a = (wl - 1.0) * (1.0 - gamma) / (gamma * self.lam) + lambert_w("principal", arg) / self.lam
        return z_a / (1.0 - gamma)

    def first_best(self) -> tuple[TwoPartPayment, float]:
        self._require_valid()
        wl = self.w * self.lam
        z = -1.0 / self.lam - lambert_w("minus_one", math.exp(-1.0 + wl) * (wl - 1.0)) / self.lam
        return TwoPartPayment(z, self.u(z)), self.utilization(z)


@dataclass(frozen=True)
class DiscreteModel(ValueModel):
    """Finite atoms (v_k, p_k) plus probability mass q_inf of never showing."""

    atoms: tuple[tuple[float, float], ...]
    q_inf: float = 0.0

    def __init__(self, atoms, q_inf: float = 0.0):
        object.__setattr__(self, "atoms", tuple((float(v), float(p)) for v, p in atoms))
        object.__setattr__(self, "q_inf", float(q_inf))

    def violations(self) -> list[str]:
        out = []
        total = self.q_inf + sum(p for _, p in self.atoms)
        if abs(total - 1.0) > PROB_TOL * 10:
            out.append(f"domain: probabilities sum to {total}, not 1")
        if any(p < 0 for _, p in self.atoms) or self.q_inf < 0:
            out.append("domain: negative probability mass")
        if any(not math.isfinite(v) for v, _ in self.atoms):
            out.append("A2: atom values must be finite (never-show mass goes in q_inf)")
        if out:
            return out
        if not (self.ev_plus() > 0):
            out.append("A1: E[V+] must be > 0")
        if self.q_inf == 0.0 and sum(v * p for v, p in self.atoms) >= 0:
            out.append("A3: E[V] must be < 0")
        return out

    def prob_below(self, x: float) -> float:
        return self.q_inf + sum(p for v, p in self.atoms if v < x)

    def prob_at_least(self, x: float) -> float:
        return sum(p for v, p in self.atoms if v >= x)

    def partial_ev(self, x: float) -> float:
        return sum(v * p for v, p in self.atoms if v >= x)

    def ev(self) -> float:
        if self.q_inf > 0.0:
            return -math.inf
        return sum(v * p for v, p in self.atoms)

    def _kinks(self) -> list[float]:
        """Penalties where u(z) changes slope: z = -v for negative atoms."""
        return sorted({-v for v, _ in self.atoms if v < 0})

    def zero_crossing(self) -> float:
        """Exact segment-by-segment search over the piecewise-linear u."""
        self._require_valid()
        if self.u(0.0) == 0.0:
            return 0.0
        prev = 0.0
        for k in self._kinks():
            if self.u(k) <= 0.0:
                # linear on [prev, k] with slope utilization(prev) - 1
                slope = self.utilization(prev) - 1.0
                return prev - self.u(prev) / slope
            prev = k
        slope = self.utilization(prev) - 1.0
        if slope >= 0.0:
            raise AssumptionViolated(["A3: u(z) never crosses zero"])
        return prev - self.u(prev) / slope

    def u_inverse(self, target: float) -> float:
        prev = 0.0
        if target > self.u(0.0):
            # extend to negative z segment by segment (kinks at -v for v > 0)
            for k in sorted({-v for v, _ in self.atoms if v > 0}, reverse=True):
                if self.u(k) >= target:
                    slope = self.utilization(k) - 1.0
                    return k + (target - self.u(k)) / slope if slope != 0 else k
            return -target  # below every atom: u(z) = -z
        for k in self._kinks():
            if self.u(k) <= target:
                slope = self.utilization(prev) - 1.0
                return prev + (target - self.u(prev)) / slope
            prev = k
        slope = self.utilization(prev) - 1.0
        if slope >= 0.0:
            return prev
        return prev + (target - self.u(prev)) / slope

    def first_best(self) -> tuple[TwoPartPayment, float]:
        """Walk the penalty thresholds while agent welfare stays non-negative."""
        self._require_valid()
        aw = sum(v * p for v, p in self.atoms if v >= 0)
        neg = sorted(((v, p) for v, p in self.atoms if v < 0), key=lambda a: -a[0])
        for v, p in neg:
            if aw + v * p < 0.0:
                # supremum penalty -v is not attained (ties use the resource)
                t = -v
                z = t - 1e-9 * max(1.0, t)
                return TwoPartPayment(z, self.u(z)), self.utilization(z)
            aw += v * p
        return TwoPartPayment(math.inf, 0.0), 1.0 - self.q_inf


def validate(m: ValueModel) -> list[str]:
    """Violated assumption/domain tags; empty list means the model is OK."""
    return m.violations()


def model_to_dict(m: ValueModel) -> dict:
    if isinstance(m, WpModel):
        return {"type": "wp", "w": m.w, "p": m.p}
    if isinstance(m, UniformModel):
        return {"type": "uniform", "a1": m.a1, "a2": m.a2}
    if isinstance(m, ExponentialModel):
        return {"type": "exponential", "w": m.w, "lambda": m.lam}
    if isinstance(m, DiscreteModel):
        return {"type": "discrete", "atoms": [[v, p] for v, p in m.atoms], "q_inf": m.q_inf}
    raise DomainError(f"unknown model {m!r}")


def model_from_dict(d: dict) -> ValueModel:
    try:
        tag = d["type"]
        if tag == "wp":
            return WpModel(float(d["w"]), float(d["p"]))
        if tag == "uniform":
            return UniformModel(float(d["a1"]), float(d["a2"]))
        if tag == "exponential":
            return ExponentialModel(float(d["w"]), float(d["lambda"]))
        if tag == "discrete":
            return DiscreteModel(d["atoms"], float(d.get("q_inf", 0.0)))
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed model record {d!r}: {exc}") from exc
    raise DomainError(f"unknown model type {tag!r}")
