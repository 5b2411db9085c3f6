"""Multi-resource mechanisms: (m+1)th price, minimum-CE penalties, VCG, FCFS."""
from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import DomainError, EmptyEconomy, ScaleLimit
from .economy import Economy, MultiEconomy
from .typemodels import TwoPartPayment

TIE_TOL = 1e-9
MAX_RESOURCES = 6
MAX_BRUTE_RESOURCES = 3


@dataclass(frozen=True)
class MultiOutcome:
    assignment: dict[int, str | None]
    penalties: dict[str, float]
    payments: dict[int, TwoPartPayment]
    total_utilization: float
    per_agent_utilization: tuple[float, ...]
    expected_revenue: float
    agent_utilities: tuple[float, ...]


@dataclass(frozen=True)
class CePrices:
    penalties: dict[str, float]


def run_m_plus_1(e: Economy, m: int, seed: int) -> MultiOutcome:
    """m identical resources; winners face the (m+1)th highest zero-crossing bid."""
    if m < 1:
        raise DomainError("m must be >= 1")
    n = len(e)
    if n == 0:
        raise EmptyEconomy("no agents")
    rng = random.Random(seed)
    bids = [mod.zero_crossing() for mod in e.agents]
    idx = list(range(n))
    rng.shuffle(idx)  # uniform order among exact bid ties (stable sort below)
    order = sorted(idx, key=lambda i: -bids[i])
    z = bids[order[m]] if n > m else 0.0
    winners = order[: min(m, n)]
    resources = [f"r{k}" for k in range(m)]
    assignment: dict[int, str | None] = {i: None for i in range(n)}
    payments: dict[int, TwoPartPayment] = {}
    per_ut = [0.0] * n
    utils = [0.0] * n
    rev = 0.0
    for k, i in enumerate(winners):
        assignment[i] = resources[k]
        pay = TwoPartPayment(z, 0.0)
        payments[i] = pay
        per_ut[i] = e.agents[i].utilization(z)
        utils[i] = e.agents[i].u2(pay)
        rev += e.agents[i].revenue(pay)
    penalties = {r: z for r in resources}
    return MultiOutcome(assignment, penalties, payments, sum(per_ut), tuple(per_ut),
                        rev, tuple(utils))


def check_ce(me: MultiEconomy, p: CePrices, assignment: dict[int, str | None],
             tol: float = TIE_TOL) -> bool:
    """Certify a competitive equilibrium: agent-maximizing demand (ties broken to
    clear the market), injective allocation, unassigned resources priced zero."""
    used: set[str] = set()
    for i in range(me.n_agents):
        a = assignment.get(i)
        if a is not None:
            if a in used:
                return False
            used.add(a)
        utils = {r: me.model(i, r).u2(TwoPartPayment(p.penalties.get(r, 0.0), 0.0))
                 for r in me.resources}
        best = max(utils.values())
        if a is None:
            if best > tol:
                return False
        else:
            if utils[a] < best - tol or best < -tol:
                return False
    for r in me.resources:
        if r not in used and abs(p.penalties.get(r, 0.0)) > tol:
            return False
    return True


def _clear_market(demands: dict[int, list[int]], must: set[int],
                  priced: set[int]) -> dict[int, int | None] | None:
    """Deterministic search for an injective selection from demand sets.

    Agents in `must` need a resource from their demand set; others may also
    stay unassigned. Resources in `priced` must end up assigned. Returns the
    first solution in a fixed DFS order, or None.
    """
    agents = sorted(demands)

    def dfs(k: int, used: dict[int, int]) -> dict[int, int | None] | None:
        if k == len(agents):
            if priced - set(used):
                return None
            by_agent = {a: r for r, a in used.items()}
            return {i: by_agent.get(i) for i in agents}
        i = agents[k]
        for r in demands[i]:
            if r not in used:
                used[r] = i
                out = dfs(k + 1, used)
                if out is not None:
                    return out
                del used[r]
        if i not in must:
            return dfs(k + 1, used)
        return None

    return dfs(0, {})


def min_ce_prices(me: MultiEconomy) -> tuple[CePrices, dict[int, str | None]]:
    """Pointwise-minimal competitive-equilibrium penalties and a market-clearing
    agent-maximizing assignment, via recursion over sub-economies (drop one
    agent and one resource, price each pair at the smallest penalty keeping
    every other agent weakly at her sub-economy utility)."""
    n, m = me.n_agents, len(me.resources)
    if m > MAX_RESOURCES:
        raise ScaleLimit(f"{m} resources exceeds the exact bound {MAX_RESOURCES}")
    z0 = {(i, j): me.models[i][j].zero_crossing() for i in range(n) for j in range(m)}
    memo: dict[tuple, dict[int, float]] = {}

    def solve(agents: tuple[int, ...], res: tuple[int, ...]):
        """Returns (assignment agent->res index or None, utility per agent,
        pair price per assigned (agent, res))."""
        if len(res) == 1:
            j = res[0]
            order = sorted(agents, key=lambda i: (-z0[i, j], i))
            w = order[0]
            z = z0[order[1], j] if len(order) > 1 else 0.0
            uw = me.models[w][j].u(z)
            assign = {i: None for i in agents}
            util = {i: 0.0 for i in agents}
            if uw >= 0.0:
                assign[w] = j
                util[w] = uw
            return assign, util, {(w, j): z}
        if len(agents) == 1:
            i = agents[0]
            j = max(res, key=lambda r: (me.models[i][r].u(0.0), -r))
            return {i: j}, {i: me.models[i][j].u(0.0)}, {(i, j): 0.0}

        pairz: dict[tuple[int, int], float] = {}
        for i in agents:
            rest = tuple(a for a in agents if a != i)
            for j in res:
                sub_res = tuple(r for r in res if r != j)
                key = (rest, sub_res)
                if key in memo:
                    sub_util = memo[key]
                else:
                    _, sub_util, _ = solve(rest, sub_res)
                    memo[key] = sub_util
                q = max(me.models[k][j].u_inverse(sub_util[k]) for k in rest)
                pairz[(i, j)] = max(0.0, q)

        demands: dict[int, list[int]] = {}
        must: set[int] = set()
        best: dict[int, float] = {}
        for i in agents:
            vals = {j: me.models[i][j].u(pairz[(i, j)]) for j in res}
            b = max(vals.values())
            best[i] = b
            scale = TIE_TOL * max(1.0, abs(b))
            if b > scale:
                must.add(i)
                demands[i] = sorted(j for j in res if vals[j] >= b - scale)
            elif b >= -scale:
                demands[i] = sorted(j for j in res if vals[j] >= b - scale)
            else:
                demands[i] = []
        cleared = _clear_market(demands, must, priced=set())
        if cleared is None:
            raise DomainError("market-clearing search failed (unexpected)")
        assign = {i: cleared.get(i) for i in agents}
        util = {i: (me.models[i][assign[i]].u(pairz[(i, assign[i])])
                    if assign[i] is not None else 0.0) for i in agents}
        prices = {(i, assign[i]): pairz[(i, assign[i])]
                  for i in agents if assign[i] is not None}
        return assign, util, prices

    assign, _, prices = solve(tuple(range(n)), tuple(range(m)))
    penalties = {r: 0.0 for r in me.resources}
    for (i, j), z in prices.items():
        if assign.get(i) == j:
            penalties[me.resources[j]] = z
    assignment = {i: (me.resources[j] if j is not None else None)
                  for i, j in assign.items()}
    return CePrices(penalties), assignment


def brute_force_min_ce(me: MultiEconomy, grid_step: float, z_max: float) -> CePrices:
    """Exhaustive grid oracle for min_ce_prices.

    Scans penalty vectors with at most n_agents positive coordinates (unassigned
    resources must be priced zero) and returns the pointwise-minimal feasible
    grid point. Demand comparisons use a grid_step/2 tolerance because exact CE
    prices generically fall between grid points.
    """
    n, m = me.n_agents, len(me.resources)
    if m > MAX_BRUTE_RESOURCES:
        raise ScaleLimit(f"{m} resources exceeds the brute-force bound")
    if grid_step <= 0:
        raise DomainError("grid_step must be positive")
    steps = int(round(z_max / grid_step))
    grid = [k * grid_step for k in range(steps + 1)]
    tol = grid_step / 2.0
    # utility table: utab[i][j][g]
    utab = [[[me.models[i][j].u(g) for g in grid] for j in range(m)] for i in range(n)]

    def feasible(price_idx: tuple[int, ...]) -> bool:
        demands: dict[int, list[int]] = {}
        must: set[int] = set()
        for i in range(n):
            vals = [utab[i][j][price_idx[j]] for j in range(m)]
            b = max(vals)
            if b > tol:
                must.add(i)
                demands[i] = [j for j in range(m) if vals[j] >= b - tol]
            elif b >= -tol:
                demands[i] = [j for j in range(m) if vals[j] >= b - tol]
            else:
                demands[i] = []
        priced = {j for j in range(m) if price_idx[j] > 0}
        return _clear_market(demands, must, priced) is not None

    feasible_pts: list[tuple[int, ...]] = []

    def scan(prefix: tuple[int, ...], positives: int):
        if len(prefix) == m:
            if feasible(prefix):
                feasible_pts.append(prefix)
            return
        for g in range(steps + 1):
            pos = positives + (1 if g > 0 else 0)
            if pos > n:
                break
            scan(prefix + (g,), pos)

    scan((), 0)
    if not feasible_pts:
        raise DomainError("no CE grid point found; enlarge z_max or refine the grid")
    meet = tuple(min(pt[j] for pt in feasible_pts) for j in range(m))
    if meet in set(feasible_pts):
        best = meet
    else:
        best = min(feasible_pts, key=lambda pt: (sum(pt), pt))
    return CePrices({me.resources[j]: grid[best[j]] for j in range(m)})


def run_gcsp(me: MultiEconomy, seed: int) -> MultiOutcome:
    """Post the minimum-CE penalties; each agent takes her most preferred resource."""
    prices, assignment = min_ce_prices(me)
    n = me.n_agents
    payments: dict[int, TwoPartPayment] = {}
    per_ut = [0.0] * n
    utils = [0.0] * n
    rev = 0.0
    for i in range(n):
        a = assignment[i]
        if a is None:
            continue
        pay = TwoPartPayment(prices.penalties[a], 0.0)
        mod = me.model(i, a)
        payments[i] = pay
        per_ut[i] = mod.utilization(pay.z)
        utils[i] = mod.u2(pay)
        rev += mod.revenue(pay)
    return MultiOutcome(assignment, dict(prices.penalties), payments, sum(per_ut),
                        tuple(per_ut), rev, tuple(utils))


def max_weight_assignment(weights: list[list[float]], n_resources: int,
                          exclude: int | None = None) -> tuple[float, dict[int, int]]:
    """Best injective resource->agent map by total weight; zero-weight pairs are
    left unassigned. Returns (total, {resource index: agent}). Exhaustive over
    per-resource top candidates (sufficient for the optimum at unit demand)."""
    n = len(weights)
    agents = [i for i in range(n) if i != exclude]
    candidates: list[list[int]] = []
    for j in range(n_resources):
        ranked = sorted((i for i in agents if weights[i][j] > 0.0),
                        key=lambda i: (-weights[i][j], i))
        candidates.append(ranked[: n_resources + 1])

    best_total = 0.0
    best_map: dict[int, int] = {}

    def dfs(j: int, used: set[int], total: float, chosen: dict[int, int]):
        nonlocal best_total, best_map
        if j == n_resources:
            if total > best_total + 1e-15:
                best_total, best_map = total, dict(chosen)
            return
        dfs(j + 1, used, total, chosen)  # leave resource j unassigned
        for i in candidates[j]:
            if i not in used:
                used.add(i)
                chosen[j] = i
                dfs(j + 1, used, total + weights[i][j], chosen)
                del chosen[j]
                used.remove(i)

    dfs(0, set(), 0.0, {})
    return best_total, best_map


def run_vcg(me: MultiEconomy, C: float, seed: int) -> MultiOutcome:
    """VCG on expected-value bids with a posted penalty C on assigned agents."""
    if C < 0:
        raise DomainError("C must be >= 0")
    n, m = me.n_agents, len(me.resources)
    if m > MAX_RESOURCES:
        raise ScaleLimit(f"{m} resources exceeds the exact bound {MAX_RESOURCES}")
    bids = [[me.models[i][j].bid_spc(C, allow_negative=False) for j in range(m)]
            for i in range(n)]
    total, chosen = max_weight_assignment(bids, m)
    assignment: dict[int, str | None] = {i: None for i in range(n)}
    payments: dict[int, TwoPartPayment] = {}
    penalties = {r: 0.0 for r in me.resources}
    per_ut = [0.0] * n
    utils = [0.0] * n
    rev = 0.0
    for j, i in chosen.items():
        assignment[i] = me.resources[j]
        others_here = total - bids[i][j]
        without_i, _ = max_weight_assignment(bids, m, exclude=i)
        t_i = without_i - others_here
        pay = TwoPartPayment(C, t_i)
        payments[i] = pay
        penalties[me.resources[j]] = C
        mod = me.models[i][j]
        per_ut[i] = mod.utilization(C)
        utils[i] = mod.u2(pay)
        rev += mod.revenue(pay)
    return MultiOutcome(assignment, penalties, payments, sum(per_ut), tuple(per_ut),
                        rev, tuple(utils))


def run_fcfs(me: MultiEconomy, seed: int) -> MultiOutcome:
    """Random serial dictatorship: seeded order, free choice of the best
    remaining resource (ties to the lowest resource id)."""
    rng = random.Random(seed)
    n, m = me.n_agents, len(me.resources)
    order = list(range(n))
    rng.shuffle(order)
    taken: set[int] = set()
    assignment: dict[int, str | None] = {i: None for i in range(n)}
    payments: dict[int, TwoPartPayment] = {}
    per_ut = [0.0] * n
    utils = [0.0] * n
    for i in order:
        open_res = [j for j in range(m) if j not in taken]
        if not open_res:
            continue
        j = max(open_res, key=lambda r: (me.models[i][r].u(0.0), -r))
        if me.models[i][j].u(0.0) > 0.0:
            taken.add(j)
            assignment[i] = me.resources[j]
            payments[i] = TwoPartPayment(0.0, 0.0)
            per_ut[i] = me.models[i][j].utilization(0.0)
            utils[i] = me.models[i][j].u(0.0)
    penalties = {r: 0.0 for r in me.resources}
    return MultiOutcome(assignment, penalties, payments, sum(per_ut), tuple(per_ut),
                        0.0, tuple(utils))
