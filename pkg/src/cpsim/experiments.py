"""Profile samplers, sweep runners, pairwise comparisons, CSV emission."""
from __future__ import annotations

import csv
import hashlib
import io
import struct
import time
from dataclasses import dataclass

import numpy as np

from .benchmarks import first_best_multi, first_best_single
from .cmm import CmmSpec, run_cmm
from .economy import Economy, MultiEconomy, p1p5_upper_bound
from .errors import DomainError, MismatchedProfiles
from .mech_multi import run_fcfs, run_gcsp, run_m_plus_1, run_vcg
from .mech_single import CSP, CSPR, GammaCSP, RandomAlloc, SP, SPC, run_single
from .typemodels import ExponentialModel, UniformModel, ValueModel, WpModel

CSV_COLUMNS = ("profile_id", "seed", "mechanism", "param_name", "param_value",
               "n_agents", "n_resources", "winner", "utilization", "revenue",
               "runtime_ns")

STRICT_TOL = 1e-9


@dataclass(frozen=True)
class SamplerSpec:
    family: str                 # exponential | uniform | wp
    param: float                # L | a1_max | w_max
    n_agents: int
    n_resources: int = 1

    def __post_init__(self):
        if self.family not in ("exponential", "uniform", "wp"):
            raise DomainError(f"unknown family {self.family!r}")
        if self.param <= 0:
            raise DomainError("family scale parameter must be > 0")
        if self.n_agents < 1 or self.n_resources < 1:
            raise DomainError("n_agents and n_resources must be >= 1")


@dataclass(frozen=True)
class SweepRecord:
    profile_id: int
    seed: int
    mechanism: str
    param_name: str
    param_value: str
    n_agents: int
    n_resources: int
    winner: str
    utilization: float
    revenue: float
    runtime_ns: int

    def row(self) -> list[str]:
        return [str(self.profile_id), str(self.seed), self.mechanism,
                self.param_name, self.param_value, str(self.n_agents),
                str(self.n_resources), self.winner, repr(self.utilization),
                repr(self.revenue), str(self.runtime_ns)]


def derive_seed(base_seed: int, index: int) -> int:
    """Counter-mode hash so profile seeds shard without coordination."""
    digest = hashlib.blake2b(struct.pack("<QQ", base_seed & (2**64 - 1), index),
                             digest_size=8).digest()
    return int.from_bytes(digest, "little")


def _sample_model(family: str, param: float, rng: np.random.Generator) -> ValueModel:
    if family == "exponential":
        while True:
            inv_lam = rng.uniform(0.0, param)
            w = rng.uniform(0.0, inv_lam)
            if 0.0 < w < inv_lam:
                return ExponentialModel(w, 1.0 / inv_lam)
    if family == "uniform":
        while True:
            a1 = rng.uniform(0.0, param)
            a2 = rng.uniform(0.0, a1)
            if 0.0 < a2 < a1:
                return UniformModel(a1, a2)
    while True:  # wp
        w = rng.uniform(0.0, param)
        p = rng.uniform(0.0, 1.0)
        if w > 0.0 and 0.0 < p < 1.0:
            return WpModel(w, p)


def sample_profile(s: SamplerSpec, seed: int) -> Economy | MultiEconomy:
    rng = np.random.default_rng(seed)
    if s.n_resources == 1:
        return Economy([_sample_model(s.family, s.param, rng)
                        for _ in range(s.n_agents)])
    resources = [chr(ord("a") + j) for j in range(s.n_resources)]
    rows = [[_sample_model(s.family, s.param, rng) for _ in resources]
            for _ in range(s.n_agents)]
    return MultiEconomy(resources, rows)


def parse_mechanism(text: str) -> tuple[str, str, float | None]:
    """'spc:2' -> ('spc', 'C', 2.0); parameter-free tags get ('', None)."""
    name, _, arg = text.strip().lower().partition(":")
    params = {"spc": "C", "cspr": "R", "gammacsp": "gamma", "cmm": "q", "vcg": "C"}
    known = {"sp", "csp", "random", "fcfs", "gcsp", "vcg", "mplus1",
             "firstbest", "p1p5", "spc", "cspr", "gammacsp", "cmm"}
    if name not in known:
        raise DomainError(f"unknown mechanism {text!r}")
    if name in params:
        if arg:
            value = float(arg)
        elif name == "vcg":
            value = 0.0
        else:
            raise DomainError(f"mechanism {name!r} needs a parameter, e.g. {name}:1.0")
        return name, params[name], value
    if arg:
        raise DomainError(f"mechanism {name!r} takes no parameter")
    return name, "", None


def run_mechanism(mech: str, economy: Economy | MultiEconomy,
                  seed: int) -> tuple[str, float, float]:
    """Returns (winner string, utilization, expected revenue)."""
    name, _, value = parse_mechanism(mech)
    multi = isinstance(economy, MultiEconomy)
    if name in ("sp", "csp", "random", "spc", "cspr", "gammacsp", "cmm", "p1p5") and multi:
        raise DomainError(f"mechanism {name!r} needs a single-resource economy")
    if name in ("gcsp", "vcg", "fcfs") and not multi:
        raise DomainError(f"mechanism {name!r} needs a multi-resource economy")
    if name == "firstbest":
        return "", (first_best_multi(economy) if multi else first_best_single(economy)), 0.0
    if name == "p1p5":
        return "", p1p5_upper_bound(economy), 0.0
    if name == "mplus1":
        if multi:
            raise DomainError("mplus1 runs on identical resources (single-resource models)")
        out = run_m_plus_1(economy, 1, seed)
        return _fmt_assignment(out.assignment), out.total_utilization, out.expected_revenue
    if multi:
        runner = {"gcsp": lambda: run_gcsp(economy, seed),
                  "vcg": lambda: run_vcg(economy, value or 0.0, seed),
                  "fcfs": lambda: run_fcfs(economy, seed)}[name]
        out = runner()
        return _fmt_assignment(out.assignment), out.total_utilization, out.expected_revenue
    if name == "cmm":
        out = run_cmm(economy, CmmSpec(value), seed)
    else:
        spec = {"sp": SP(), "csp": CSP(), "random": RandomAlloc()}.get(name)
        if spec is None:
            spec = {"spc": SPC, "cspr": CSPR, "gammacsp": GammaCSP}[name](value)
        out = run_single(spec, economy, seed)
    winner = "" if out.winner is None else str(out.winner)
    return winner, out.utilization, out.expected_revenue


def _fmt_assignment(assignment: dict[int, str | None]) -> str:
    pairs = [f"{i}:{r}" for i, r in sorted(assignment.items()) if r is not None]
    return "|".join(pairs)


def run_sweep(s: SamplerSpec, mechanisms: list[str], n_profiles: int,
              base_seed: int, timings: bool = False) -> list[SweepRecord]:
    if n_profiles < 1:
        raise DomainError("n_profiles must be >= 1")
    records: list[SweepRecord] = []
    for idx in range(n_profiles):
        seed = derive_seed(base_seed, idx)
        economy = sample_profile(s, seed)
        for mech in mechanisms:
            name, pname, value = parse_mechanism(mech)
            start = time.perf_counter_ns() if timings else 0
            winner, ut, rev = run_mechanism(mech, economy, seed)
            elapsed = time.perf_counter_ns() - start if timings else 0
            records.append(SweepRecord(idx, seed, name, pname,
                                       "" if value is None else repr(value),
                                       s.n_agents, s.n_resources, winner, ut, rev,
                                       elapsed))
    return records


def write_csv(records: list[SweepRecord], fh) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for rec in records:
        writer.writerow(rec.row())


def csv_bytes(records: list[SweepRecord]) -> bytes:
    buf = io.StringIO()
    write_csv(records, buf)
    return buf.getvalue().encode()


def compare_mechanisms(records_a: list[SweepRecord], records_b: list[SweepRecord]
                       ) -> tuple[float, float, list[tuple[int, int, float, float]]]:
    """Profile-by-profile comparison: strict-win fractions plus paired rows
    (profile_id, seed, utilization_a, utilization_b)."""
    key_a = {(r.profile_id, r.seed): r for r in records_a}
    key_b = {(r.profile_id, r.seed): r for r in records_b}
    if key_a.keys() != key_b.keys():
        raise MismatchedProfiles("record sets cover different (profile, seed) pairs")
    paired = []
    a_strict = b_strict = 0
    for k in sorted(key_a):
        ua, ub = key_a[k].utilization, key_b[k].utilization
        paired.append((k[0], k[1], ua, ub))
        if ua > ub + STRICT_TOL:
            a_strict += 1
        elif ub > ua + STRICT_TOL:
            b_strict += 1
    n = len(paired)
    return a_strict / n, b_strict / n, paired


def mean_stderr(values: list[float]) -> tuple[float, float]:
    arr = np.asarray(values, dtype=float)
    if arr.size <= 1:
        return float(arr.mean()) if arr.size else 0.0, 0.0
    return float(arr.mean()), float(arr.std(ddof=1) / np.sqrt(arr.size))
