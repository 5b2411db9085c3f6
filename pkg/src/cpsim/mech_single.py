"""Single-resource mechanisms run at their dominant-strategy equilibria."""
from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import DomainError, EmptyEconomy
from .economy import Economy
from .typemodels import TwoPartPayment, ValueModel

TIE_TOL = 1e-9


@dataclass(frozen=True)
class SP:
    """Second-price auction; winner pays the second bid up front."""


@dataclass(frozen=True)
class SPC:
    """Second price with a fixed no-show penalty C posted in advance."""

    C: float

    def __post_init__(self):
        if self.C < 0:
            raise DomainError("C must be >= 0")


@dataclass(frozen=True)
class CSP:
    """Contingent second price: second bid becomes the no-show penalty."""


@dataclass(frozen=True)
class CSPR:
    """CSP with a reserve penalty R."""

    R: float

    def __post_init__(self):
        if self.R < 0:
            raise DomainError("R must be >= 0")


@dataclass(frozen=True)
class GammaCSP:
    """Second bid split into penalty (1-gamma)b2 and base payment gamma*b2."""

    gamma: float

    def __post_init__(self):
        if not 0.0 <= self.gamma <= 1.0:
            raise DomainError("gamma must lie in [0, 1]")


@dataclass(frozen=True)
class RandomAlloc:
    """Uniformly random winner, zero payments."""


SingleMechanismSpec = SP | SPC | CSP | CSPR | GammaCSP | RandomAlloc


@dataclass(frozen=True)
class Outcome:
    winner: int | None
    payment: TwoPartPayment
    utilization: float
    expected_revenue: float
    agent_utilities: tuple[float, ...]
    bids: tuple[float, ...]


def dse_bid(mech: SingleMechanismSpec, m: ValueModel) -> float:
    """The dominant-strategy bid under each mechanism."""
    if isinstance(mech, SP):
        return m.bid_sp()
    if isinstance(mech, SPC):
        return m.bid_spc(mech.C, allow_negative=False)
    if isinstance(mech, (CSP, CSPR)):
        return m.zero_crossing()
    if isinstance(mech, GammaCSP):
        return m.bid_gamma_csp(mech.gamma)
    if isinstance(mech, RandomAlloc):
        return 0.0
    raise DomainError(f"unknown mechanism {mech!r}")


def _pick_winner(bids: list[float], rng: random.Random) -> int:
    top = max(bids)
    tied = [i for i, b in enumerate(bids) if b >= top - TIE_TOL]
    return tied[0] if len(tied) == 1 else rng.choice(tied)


def _second(bids: list[float], winner: int) -> float:
    rest = [b for i, b in enumerate(bids) if i != winner]
    return max(rest) if rest else 0.0


def _unallocated(e: Economy, bids: list[float]) -> Outcome:
    return Outcome(None, TwoPartPayment(0.0, 0.0), 0.0, 0.0,
                   (0.0,) * len(e), tuple(bids))


def run_single(mech: SingleMechanismSpec, e: Economy, seed: int) -> Outcome:
    """Run one mechanism on one economy; ties broken by the seeded generator."""
    if len(e) == 0:
        raise EmptyEconomy("no agents")
    rng = random.Random(seed)
    bids = [dse_bid(mech, m) for m in e.agents]

    if isinstance(mech, RandomAlloc):
        winner = rng.randrange(len(e))
        pay = TwoPartPayment(0.0, 0.0)
    elif isinstance(mech, SPC):
        if max(bids) <= 0.0:
            return _unallocated(e, bids)
        winner = _pick_winner(bids, rng)
        pay = TwoPartPayment(mech.C, _second(bids, winner))
    elif isinstance(mech, SP):
        winner = _pick_winner(bids, rng)
        pay = TwoPartPayment(0.0, _second(bids, winner))
    elif isinstance(mech, CSP):
        winner = _pick_winner(bids, rng)
        pay = TwoPartPayment(_second(bids, winner), 0.0)
    elif isinstance(mech, CSPR):
        if max(bids) < mech.R:
            return _unallocated(e, bids)
        winner = _pick_winner(bids, rng)
        pay = TwoPartPayment(max(_second(bids, winner), mech.R), 0.0)
    elif isinstance(mech, GammaCSP):
        winner = _pick_winner(bids, rng)
        b2 = _second(bids, winner)
        pay = TwoPartPayment((1.0 - mech.gamma) * b2, mech.gamma * b2)
    else:
        raise DomainError(f"unknown mechanism {mech!r}")

    model = e.agents[winner]
    utils = [0.0] * len(e)
    utils[winner] = model.u2(pay)
    return Outcome(winner, pay, model.utilization(pay.z), model.revenue(pay),
                   tuple(utils), tuple(bids))
