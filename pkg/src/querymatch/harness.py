"""Experiment harness: run algorithms on instances, check bounds, emit reports.

A grid run is instances × (algorithm, ℓ) cells.  Every cell gets a fresh
ledger, the exact optimum for comparison, the instance's extracted
parameters, and the algorithm's competitive bound under them; the report
records whether the realized ratio stays inside the bound (with a 1e-9
slack).  Misconfigured cells (say, an edge algorithm on an instance without
``sigma_e``) turn into error rows instead of aborting the grid.

Exit-code convention used by the CLI: 0 all bounds satisfied, 1 at least one
violation, 2 usage or configuration error.
"""

from __future__ import annotations

import csv
import io as _stringio
import math
import time
from dataclasses import dataclass
from typing import Any, Optional, Sequence

from .core import BipartiteInstance, Edge, QuerymatchError
from .oracle import QueryLedger
from .reference import exact_matching
from .discovery import run_algorithm
from .analysis import OrderParams, competitive_bound, extract_params

#: Slack added to the bound before comparing the realized ratio against it.
BOUND_TOL = 1e-9

#: Stable CSV schema, one row per report; see README for the column meanings.
CSV_COLUMNS = ("instance", "algorithm", "ell", "weight", "queries",
               "exact", "ratio", "bound", "bound_satisfied", "wall_time_s",
               "error")

EXIT_OK = 0
EXIT_BOUND_VIOLATION = 1
EXIT_CONFIG_ERROR = 2


@dataclass(frozen=True)
class RunReport:
    """One grid cell: what ran, what it found, and whether theory held."""

    instance: str
    algorithm: str
    ell: Optional[int]
    weight: float
    query_count: int
    matching: tuple[Edge, ...]
    exact_weight: Optional[float]
    ratio: Optional[float]
    params: Optional[OrderParams]
    bound: Optional[float]
    bound_satisfied: Optional[bool]
    wall_time: float
    error: Optional[str] = None


def realized_ratio(exact_weight: float, algo_weight: float) -> float:
    """w(exact) / w(algorithm); an empty optimum counts as a perfect 1.0."""
    if algo_weight > 0:
        return exact_weight / algo_weight
    return 1.0 if exact_weight == 0 else math.inf


def run_one(name: str, inst: BipartiteInstance, algo: str,
            ell: Optional[int] = None, *,
            exact_weight: Optional[float] = None) -> RunReport:
    """Run one cell; configuration problems come back as an error report."""
    start = time.perf_counter()
    try:
        ledger = QueryLedger(inst)
        result = run_algorithm(algo, inst, ledger, ell)
        if exact_weight is None:
            exact_weight = exact_matching(inst).total_weight
        params = extract_params(inst)
        bound = competitive_bound(algo, params, ell)
        ratio = realized_ratio(exact_weight, result.matching.total_weight)
        return RunReport(
            instance=name, algorithm=algo, ell=ell,
            weight=result.matching.total_weight,
            query_count=ledger.query_count,
            matching=result.matching.sorted_edges,
            exact_weight=exact_weight, ratio=ratio, params=params,
            bound=bound, bound_satisfied=bool(ratio <= bound + BOUND_TOL),
            wall_time=time.perf_counter() - start)
    except (QuerymatchError, ValueError) as exc:
        return RunReport(
            instance=name, algorithm=algo, ell=ell, weight=0.0, query_count=0,
            matching=(), exact_weight=None, ratio=None, params=None,
            bound=None, bound_satisfied=None,
            wall_time=time.perf_counter() - start, error=str(exc))


def run_experiment(instances: Sequence[tuple[str, BipartiteInstance]],
                   cells: Sequence[tuple[str, Optional[int]]]) -> list[RunReport]:
    """Evaluate the full grid in deterministic order (instances outer)."""
    reports = []
    for name, inst in instances:
        exact = None
        ok = True
        try:
            exact = exact_matching(inst).total_weight
        except (QuerymatchError, ValueError):
            ok = False
        for algo, ell in cells:
            if ok:
                reports.append(run_one(name, inst, algo, ell, exact_weight=exact))
            else:
                reports.append(run_one(name, inst, algo, ell))
    return reports


def grid_exit_code(reports: Sequence[RunReport]) -> int:
    """Map a grid outcome onto the CLI exit-code convention."""
    if any(r.error is not None for r in reports):
        return EXIT_CONFIG_ERROR
    if any(r.bound_satisfied is False for r in reports):
        return EXIT_BOUND_VIOLATION
    return EXIT_OK


def report_to_dict(report: RunReport) -> dict[str, Any]:
    """JSON-ready view of a report (edges 1-based, params flattened)."""
    doc: dict[str, Any] = {
        "instance": report.instance,
        "algorithm": report.algorithm,
        "ell": report.ell,
        "weight": report.weight,
        "queries": report.query_count,
        "matching": [[p + 1, c + 1] for p, c in report.matching],
        "exact": report.exact_weight,
        "ratio": report.ratio,
        "bound": report.bound,
        "bound_satisfied": report.bound_satisfied,
        "wall_time_s": report.wall_time,
    }
    if report.params is not None:
        doc["params"] = {
            "beta": report.params.beta,
            "gamma": report.params.gamma,
            "zeta": report.params.zeta,
            "beta_weak": list(report.params.beta_weak),
            "gamma_weak": list(report.params.gamma_weak),
            "zeta_weak": None if report.params.zeta_weak is None
                         else list(report.params.zeta_weak),
        }
    if report.error is not None:
        doc["error"] = report.error
    return doc


def reports_to_csv(reports: Sequence[RunReport]) -> str:
    """Render reports under the :data:`CSV_COLUMNS` schema."""
    buf = _stringio.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in reports:
        writer.writerow([
            r.instance, r.algorithm,
            "" if r.ell is None else r.ell,
            f"{r.weight:.9g}", r.query_count,
            "" if r.exact_weight is None else f"{r.exact_weight:.9g}",
            "" if r.ratio is None else f"{r.ratio:.9g}",
            "" if r.bound is None else f"{r.bound:.9g}",
            "" if r.bound_satisfied is None else str(r.bound_satisfied).lower(),
            f"{r.wall_time:.6f}",
            r.error or "",
        ])
    return buf.getvalue()


def strip_isolated(inst: BipartiteInstance) -> tuple[BipartiteInstance, tuple[Edge, ...]]:
    """Split off edges with no adjacent edge.

    Isolated edges belong in *every* maximal matching and need no weight
    queries, so algorithms run on the stripped core and the caller appends
    the isolated edges to whatever matching comes back.  Node counts and
    node orders are unchanged (the endpoints simply become isolated nodes);
    ``sigma_e`` is reindexed onto the surviving edges.
    """
    deg_p = [0] * inst.producer_count
    deg_c = [0] * inst.consumer_count
    for p, c in inst.edges:
        deg_p[p] += 1
        deg_c[c] += 1
    isolated = tuple(e for e in inst.edges if deg_p[e[0]] == 1 and deg_c[e[1]] == 1)
    if not isolated:
        return inst, ()
    keep = [i for i, e in enumerate(inst.edges) if deg_p[e[0]] > 1 or deg_c[e[1]] > 1]
    new_index = {old: new for new, old in enumerate(keep)}
    sigma_e = None
    if inst.sigma_e is not None:
        sigma_e = tuple(new_index[i] for i in inst.sigma_e if i in new_index)
    core = BipartiteInstance(
        producer_count=inst.producer_count,
        consumer_count=inst.consumer_count,
        edges=tuple(inst.edges[i] for i in keep),
        weights={inst.edges[i]: inst.weights[inst.edges[i]] for i in keep},
        sigma_p=inst.sigma_p,
        sigma_c=inst.sigma_c,
        sigma_e=sigma_e)
    return core, isolated
