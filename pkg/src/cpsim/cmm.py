"""Contingent menu mechanisms: two-point menus indexed by a scalar alpha."""
from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import AssumptionViolated, DomainError, EmptyEconomy
from .economy import Economy
from .numerics import Bracket, find_root
from .typemodels import TwoPartPayment, ValueModel

TIE_TOL = 1e-9


@dataclass(frozen=True)
class CmmSpec:
    """Menu pi_alpha = {point(alpha, gamma1), point(q*alpha, gamma2)} where
    point(a, g) lies on the ray y = g/(1-g) z with z-coordinate a; g = 1 is the
    vertical-axis point (0, a). CmmSpec(q) is the {(q*alpha, 0), (0, alpha)} menu."""

    q: float
    gamma1: float = 1.0
    gamma2: float = 0.0

    def __post_init__(self):
        if not self.q > 0:
            raise DomainError("q must be > 0")
        for g in (self.gamma1, self.gamma2):
            if not 0.0 <= g <= 1.0:
                raise DomainError("gamma must lie in [0, 1]")


def menu_points(spec: CmmSpec, alpha: float) -> tuple[TwoPartPayment, TwoPartPayment]:
    def point(a: float, g: float) -> TwoPartPayment:
        if g == 1.0:
            return TwoPartPayment(0.0, a)
        return TwoPartPayment(a, g / (1.0 - g) * a)

    return point(alpha, spec.gamma1), point(spec.q * alpha, spec.gamma2)


def menu_utility(m: ValueModel, spec: CmmSpec, alpha: float) -> float:
    """Best utility available inside the alpha-indexed menu."""
    if alpha < 0:
        raise DomainError("alpha must be >= 0")
    return max(m.u2(pt) for pt in menu_points(spec, alpha))


def zero_crossing_menu(m: ValueModel, spec: CmmSpec) -> float:
    """The unique alpha where the menu's best utility hits zero."""
    bad = m.violations()
    if bad:
        raise AssumptionViolated(bad)
    f = lambda a: menu_utility(m, spec, a)
    if f(0.0) <= 0.0:
        return 0.0
    hi = 1.0
    for _ in range(200):
        if f(hi) < 0.0:
            break
        hi *= 2.0
    else:
        raise AssumptionViolated(["A3: menu utility never crosses zero"])
    return find_root(f, Bracket(0.0, hi), 1e-12 * max(1.0, hi))


def run_cmm(e: Economy, spec: CmmSpec, seed: int):
    """Allocate to the highest zero-crossing menu; the winner picks her favorite
    element of the runner-up's menu (ties toward the higher-penalty point)."""
    from .mech_single import Outcome  # shared outcome record

    if len(e) == 0:
        raise EmptyEconomy("no agents")
    rng = random.Random(seed)
    alphas = [zero_crossing_menu(m, spec) for m in e.agents]
    top = max(alphas)
    tied = [i for i, a in enumerate(alphas) if a >= top - TIE_TOL]
    winner = tied[0] if len(tied) == 1 else rng.choice(tied)
    rest = [a for i, a in enumerate(alphas) if i != winner]
    alpha2 = max(rest) if rest else 0.0
    model = e.agents[winner]
    pts = menu_points(spec, alpha2)
    pay = max(pts, key=lambda pt: (model.u2(pt), pt.z))
    utils = [0.0] * len(e)
    utils[winner] = model.u2(pay)
    return Outcome(winner, pay, model.utilization(pay.z), model.revenue(pay),
                   tuple(utils), tuple(alphas))
