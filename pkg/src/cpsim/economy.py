"""Agent collections and the zero-profit frontier geometry."""
from __future__ import annotations

from dataclasses import dataclass

from .errors import AssumptionViolated
from .typemodels import ValueModel


@dataclass(frozen=True)
class Economy:
    """Agents competing for a single resource; index = agent id."""

    agents: tuple[ValueModel, ...]

    def __init__(self, agents):
        object.__setattr__(self, "agents", tuple(agents))
        if not self.agents:
            raise AssumptionViolated(["domain: economy needs at least one agent"])
        bad = [f"agent {i}: {v}" for i, m in enumerate(self.agents) for v in m.violations()]
        if bad:
            raise AssumptionViolated(bad)

    def __len__(self) -> int:
        return len(self.agents)


@dataclass(frozen=True)
class MultiEconomy:
    """Agents x resources matrix of value models."""

    resources: tuple[str, ...]
    models: tuple[tuple[ValueModel, ...], ...]  # models[agent][resource index]

    def __init__(self, resources, models):
        object.__setattr__(self, "resources", tuple(resources))
        object.__setattr__(self, "models", tuple(tuple(row) for row in models))
        if not self.models or not self.resources:
            raise AssumptionViolated(["domain: needs at least one agent and one resource"])
        bad = []
        for i, row in enumerate(self.models):
            if len(row) != len(self.resources):
                raise AssumptionViolated([f"domain: agent {i} has {len(row)} models for "
                                          f"{len(self.resources)} resources"])
            for a, m in zip(self.resources, row):
                bad.extend(f"agent {i}, resource {a}: {v}" for v in m.violations())
        if bad:
            raise AssumptionViolated(bad)

    @property
    def n_agents(self) -> int:
        return len(self.models)

    def model(self, agent: int, resource: str) -> ValueModel:
        return self.models[agent][self.resources.index(resource)]


def frontier(e: Economy, z: float, k: int = 1) -> float:
    """k-th largest expected utility at penalty z (k=1 is the upper envelope)."""
    if not 1 <= k <= len(e.agents):
        raise IndexError(f"k={k} out of range for {len(e.agents)} agents")
    vals = sorted((m.u(z) for m in e.agents), reverse=True)
    return vals[k - 1]


def frontier_zero_crossing(e: Economy) -> float:
    """Penalty where the upper envelope hits zero: the largest agent zero-crossing."""
    return max(m.zero_crossing() for m in e.agents)


def p1p5_upper_bound(e: Economy) -> float:
    """Highest utilization achievable by any anonymous always-allocating
    deterministic DSIC+IR+ND mechanism: the best zero-crossing agent's
    utilization at the frontier zero-crossing. Ties over the max zero-crossing
    resolve to the agent with the highest utilization there."""
    z_n = frontier_zero_crossing(e)
    best = max(m.zero_crossing() for m in e.agents)
    tied = [m for m in e.agents if m.zero_crossing() >= best - 1e-9 * max(1.0, best)]
    return max(m.utilization(z_n) for m in tied)
