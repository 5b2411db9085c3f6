"""First-best and welfare benchmarks, reserve-gain formulas, DSIC prober."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, EmptyEconomy
from .economy import Economy, MultiEconomy
from .mech_multi import MultiOutcome, max_weight_assignment
from .mech_single import Outcome, _pick_winner, _second
from .numerics import gamma_upper_zero
from .typemodels import TwoPartPayment, ValueModel

import random


@dataclass(frozen=True)
class WelfareReport:
    agent_welfare: float
    utilization: float
    social_welfare: float
    C: float


def first_best_single(e: Economy) -> float:
    """Highest utilization any IR+ND payment can induce for some agent."""
    return max(m.first_best()[1] for m in e.agents)


def first_best_multi(me: MultiEconomy) -> float:
    """Max-weight assignment of per-pair first-best utilizations."""
    n, m = me.n_agents, len(me.resources)
    weights = [[me.models[i][j].first_best()[1] for j in range(m)] for i in range(n)]
    total, _ = max_weight_assignment(weights, m)
    return total


def agent_welfare(m: ValueModel, z: float) -> float:
    """E[V * 1{V >= -z}]."""
    return m.agent_welfare(z)


def welfare_report(m: ValueModel, C: float) -> WelfareReport:
    aw = m.agent_welfare(C)
    ut = m.utilization(C)
    return WelfareReport(aw, ut, aw + C * ut, C)


def run_spc_welfare(e: Economy, C: float) -> tuple[Outcome, WelfareReport]:
    """Welfare-optimal variant of the fixed-penalty second price: negative bids
    allowed and the max bidder is always allocated (the mechanism may run a
    deficit). Realized social welfare equals max_i bid_i + C."""
    if C < 0:
        raise DomainError("C must be >= 0")
    if len(e) == 0:
        raise EmptyEconomy("no agents")
    bids = [m.bid_spc(C, allow_negative=True) for m in e.agents]
    rng = random.Random(0)
    winner = _pick_winner(bids, rng)
    pay = TwoPartPayment(C, _second(bids, winner))
    model = e.agents[winner]
    utils = [0.0] * len(e)
    utils[winner] = model.u2(pay)
    out = Outcome(winner, pay, model.utilization(C), model.revenue(pay),
                  tuple(utils), tuple(bids))
    return out, welfare_report(model, C)


def analytic_reserve_gain(model_family: str, r: float, L: float = 1.0) -> float:
    """Expected utilization gain of a reserve penalty r over free allocation,
    single random agent. Families: 'exponential' (scale L) and 'uniform'."""
    if r == 0.0:
        return 0.0
    if r < 0.0:
        raise DomainError("r must be >= 0")
    if model_family == "exponential":
        if L <= 0:
            raise DomainError("L must be > 0")
        x = r / L
        return math.exp(-1.0) * (-1.0 + math.exp(-x) - x * gamma_upper_zero(x))
    if model_family == "uniform":
        if r > 0.5:
            raise DomainError("uniform family defined on r in (0, 1/2]")
        return r * (-r + math.log(2.0) + math.log(r))
    raise DomainError(f"unknown family {model_family!r}")


def numeric_reserve_gain(model_family: str, r: float, trials: int, seed: int,
                         L: float = 1.0) -> tuple[float, float]:
    """Monte-Carlo oracle for analytic_reserve_gain: mean and standard error."""
    if trials < 10_000:
        raise DomainError("trials must be >= 10000")
    if r < 0.0:
        raise DomainError("r must be >= 0")
    rng = np.random.default_rng(seed)
    if model_family == "exponential":
        eta = rng.uniform(0.0, L, trials)            # eta = 1/lambda
        eta[eta == 0.0] = L                          # measure-zero degenerate draw
        w = rng.uniform(0.0, eta)
        z0 = -w - eta * np.log1p(-w / eta)
        ut_free = 1.0 - np.exp(-w / eta)
        ut_r = np.where(z0 >= r, 1.0 - np.exp(-(w + r) / eta), 0.0)
    elif model_family == "uniform":
        a = rng.uniform(0.0, 1.0, trials)
        a[a == 0.0] = 1.0                             # measure-zero degenerate draw
        b = rng.uniform(0.0, a / 2.0)
        a1 = a - b                                    # V ~ U[-(a-b), b]
        z0 = a1 - np.sqrt(a1 * a1 - b * b)
        ut_free = b / a
        ut_r = np.where(z0 >= r, (r + b) / a, 0.0)
    else:
        raise DomainError(f"unknown family {model_family!r}")
    gain = ut_r - ut_free
    mean = float(np.mean(gain))
    stderr = float(np.std(gain, ddof=1) / math.sqrt(trials))
    return mean, stderr


def dsic_probe(run: Callable, e: Economy | MultiEconomy, i: int,
               alternates: Sequence) -> float:
    """Max utility gain agent i can get by misreporting her type.

    `run` maps an economy to an Outcome/MultiOutcome. For a single-resource
    Economy, alternates are ValueModels; for a MultiEconomy, alternates are
    per-resource model rows. Utilities are evaluated with the TRUE model under
    the misreported outcome.
    """
    if isinstance(e, Economy):
        true_model = e.agents[i]

        def utility(outcome: Outcome) -> float:
            if outcome.winner != i:
                return 0.0
            return true_model.u2(outcome.payment)

        def swap(alt) -> Economy:
            agents = list(e.agents)
            agents[i] = alt
            return Economy(agents)
    else:
        true_row = e.models[i]

        def utility(outcome: MultiOutcome) -> float:
            a = outcome.assignment.get(i)
            if a is None:
                return 0.0
            return true_row[e.resources.index(a)].u2(outcome.payments[i])

        def swap(alt) -> MultiEconomy:
            rows = list(e.models)
            rows[i] = tuple(alt)
            return MultiEconomy(e.resources, rows)

    truthful = utility(run(e))
    best = -math.inf
    for alt in alternates:
        best = max(best, utility(run(swap(alt))))
    return best - truthful
