"""Render figures from sweep/compare/reserve CSV files.

Each figure kind is a pure function of one CSV file: the same input bytes
always produce the same output bytes (fixed style, no timestamps), so reruns
are reproducible.  Figures never recompute mechanism results; they only
aggregate what the CSV already contains.
"""
from __future__ import annotations

import csv
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

SWEEP_COLUMNS = ("profile_id", "seed", "mechanism", "param_name", "param_value",
                 "n_agents", "n_resources", "winner", "utilization", "revenue",
                 "runtime_ns")
COMPARE_COLUMNS = ("profile_id", "seed", "utilization_a", "utilization_b")
RESERVE_COLUMNS = ("r", "analytic_gain", "mc_gain", "mc_stderr")

KINDS = ("lines_vs_n", "scatter_pairwise", "reserve_curves", "fractions_vs_n")

STYLE = {
    "figure.figsize": (6.4, 4.2),
    "figure.dpi": 100,
    "savefig.dpi": 100,
    "font.family": "DejaVu Sans",
    "font.size": 10,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "svg.hashsalt": "sweepfig",
}


class SchemaError(ValueError):
    """The CSV is empty, malformed, or does not match the expected schema."""


@dataclass(frozen=True)
class FigureSpec:
    csv_path: str
    kind: str
    output_path: str

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise SchemaError(f"unknown figure kind {self.kind!r}; "
                              f"expected one of {', '.join(KINDS)}")


def read_rows(path: str, columns: tuple[str, ...]) -> list[dict[str, str]]:
    """Read a CSV and check its header and row shape against `columns`."""
    try:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise SchemaError(f"{path}: empty file") from None
            if tuple(header) != columns:
                raise SchemaError(f"{path}: header {header} does not match "
                                  f"expected columns {list(columns)}")
            rows = []
            for lineno, row in enumerate(reader, start=2):
                if len(row) != len(columns):
                    raise SchemaError(f"{path}:{lineno}: expected "
                                      f"{len(columns)} fields, got {len(row)}")
                rows.append(dict(zip(columns, row)))
    except OSError as exc:
        raise SchemaError(f"{path}: {exc}") from exc
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    return rows


def _float(row: dict[str, str], key: str, path: str) -> float:
    try:
        return float(row[key])
    except ValueError:
        raise SchemaError(f"{path}: column {key!r} has non-numeric value "
                          f"{row[key]!r}") from None


def _int(row: dict[str, str], key: str, path: str) -> int:
    try:
        return int(row[key])
    except ValueError:
        raise SchemaError(f"{path}: column {key!r} has non-integer value "
                          f"{row[key]!r}") from None


def mechanism_label(row: dict[str, str]) -> str:
    if row["param_name"]:
        return f"{row['mechanism']} ({row['param_name']}={row['param_value']})"
    return row["mechanism"]


# ------------------------------------------------------------------ figures

def _lines_vs_n(rows: list[dict[str, str]], ax, path: str) -> None:
    sums: dict[str, dict[int, list[float]]] = defaultdict(lambda: defaultdict(list))
    for row in rows:
        sums[mechanism_label(row)][_int(row, "n_agents", path)].append(
            _float(row, "utilization", path))
    for label in sorted(sums):
        ns = sorted(sums[label])
        means = [sum(sums[label][n]) / len(sums[label][n]) for n in ns]
        ax.plot(ns, means, marker="o", label=label)
    ax.set_xlabel("number of agents n")
    ax.set_ylabel("average utilization")
    ax.legend()


def _scatter_pairwise(rows: list[dict[str, str]], ax, path: str) -> None:
    xs = [_float(r, "utilization_a", path) for r in rows]
    ys = [_float(r, "utilization_b", path) for r in rows]
    lo = min(0.0, min(xs), min(ys))
    hi = max(1.0, max(xs), max(ys))
    ax.plot([lo, hi], [lo, hi], color="gray", linewidth=1, label="equal utilization")
    ax.scatter(xs, ys, s=12, alpha=0.6)
    ax.set_xlabel("utilization (mechanism a)")
    ax.set_ylabel("utilization (mechanism b)")
    ax.set_aspect("equal")
    ax.legend()


def _reserve_curves(rows: list[dict[str, str]], ax, path: str) -> None:
    rows = sorted(rows, key=lambda r: _float(r, "r", path))
    rs = [_float(r, "r", path) for r in rows]
    ax.plot(rs, [_float(r, "analytic_gain", path) for r in rows],
            label="analytic gain")
    ax.errorbar(rs, [_float(r, "mc_gain", path) for r in rows],
                yerr=[_float(r, "mc_stderr", path) for r in rows],
                fmt="o", markersize=3, capsize=2, label="Monte Carlo gain")
    ax.set_xlabel("reserve r")
    ax.set_ylabel("expected revenue gain")
    ax.legend()


def _fractions_vs_n(rows: list[dict[str, str]], ax, path: str) -> None:
    labels = sorted({mechanism_label(r) for r in rows})
    if len(labels) != 2:
        raise SchemaError(f"{path}: fractions_vs_n needs exactly two "
                          f"mechanisms, found {labels}")
    by_key: dict[tuple[str, str, int], dict[str, float]] = defaultdict(dict)
    for row in rows:
        key = (row["profile_id"], row["seed"], _int(row, "n_agents", path))
        by_key[key][mechanism_label(row)] = _float(row, "utilization", path)
    wins: dict[str, dict[int, int]] = {lab: defaultdict(int) for lab in labels}
    totals: dict[int, int] = defaultdict(int)
    a, b = labels
    for (_, _, n), vals in by_key.items():
        if set(vals) != set(labels):
            raise SchemaError(f"{path}: profiles are not paired across both "
                              f"mechanisms")
        totals[n] += 1
        if vals[a] > vals[b] + 1e-9:
            wins[a][n] += 1
        elif vals[b] > vals[a] + 1e-9:
            wins[b][n] += 1
    ns = sorted(totals)
    for label in labels:
        ax.plot(ns, [wins[label][n] / totals[n] for n in ns],
                marker="o", label=f"{label} strictly higher")
    ax.set_xlabel("number of agents n")
    ax.set_ylabel("fraction of profiles")
    ax.legend()


_RENDERERS = {
    "lines_vs_n": (SWEEP_COLUMNS, _lines_vs_n),
    "scatter_pairwise": (COMPARE_COLUMNS, _scatter_pairwise),
    "reserve_curves": (RESERVE_COLUMNS, _reserve_curves),
    "fractions_vs_n": (SWEEP_COLUMNS, _fractions_vs_n),
}

# metadata overrides that strip writer timestamps, keyed by file suffix
_METADATA = {".svg": {"Date": None}, ".pdf": {"CreationDate": None}, ".png": {}}


def render(spec: FigureSpec) -> str:
    """Render one figure and return the output path."""
    columns, draw = _RENDERERS[spec.kind]
    rows = read_rows(spec.csv_path, columns)
    suffix = Path(spec.output_path).suffix.lower()
    if suffix not in _METADATA:
        raise SchemaError(f"unsupported output format {suffix!r}; "
                          f"use one of {', '.join(sorted(_METADATA))}")
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        try:
            draw(rows, ax, spec.csv_path)
            ax.set_title(spec.kind.replace("_", " "))
            fig.savefig(spec.output_path, metadata=_METADATA[suffix])
        finally:
            plt.close(fig)
    return spec.output_path
