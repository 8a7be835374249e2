"""Discovery algorithms: build a heavy matching while querying few weights.

All algorithms here see the instance *structure* (edges, orders, sizes) for
free but learn weights only through the :class:`~querymatch.oracle.QueryLedger`
passed in by the caller.  They never touch ``inst.weights`` — the test suite
runs them against an instance view whose weight attribute traps.

Shared conventions:

* node algorithms walk producers in ``sigma_p`` order and rank a producer's
  candidate consumers by ``sigma_c`` position; edge algorithms walk
  ``sigma_e``,
* candidate sets are truncated to the first ℓ+1 entries *before* deciding
  whether to query, so a single survivor is always taken query-free,
* weight ties are broken toward the smallest position in the relevant order
  (the first candidate encountered wins).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .core import (
    BipartiteInstance,
    Edge,
    Matching,
    MissingOrderError,
    require_ell,
)
from .oracle import QueryLedger, query_weight, settle
from .reference import _walk_path, optimal_path

#: A greedy path: edges in walk order, each with its queried weight.
PathStep = tuple[Edge, float]


@dataclass(frozen=True)
class DiscoveryResult:
    """Outcome of one discovery run: the matching plus its query ledger.

    ``path_log`` is filled by the path-based algorithm only: one entry per
    non-empty greedy path, recording the start producer, the path steps and
    the positions the path DP selected.
    """

    matching: Matching
    ledger: QueryLedger
    path_log: Optional[tuple[tuple[int, tuple[PathStep, ...], tuple[int, ...]], ...]] = None


#: Discovery algorithm names accepted by :func:`run_algorithm`.
ALGORITHMS = ("greedy_local", "naive_local", "l_greedy_local",
              "l_double_greedy", "naive_edge", "local_edge")

#: The subset of :data:`ALGORITHMS` that takes a window parameter ℓ.
WINDOWED = frozenset({"l_greedy_local", "l_double_greedy", "local_edge"})


def run_algorithm(algo: str, inst: BipartiteInstance, ledger: QueryLedger,
                  ell: Optional[int] = None) -> DiscoveryResult:
    """Run one discovery algorithm by name.

    Windowed algorithms require ``ell``; the others reject it, so a
    misconfigured experiment fails loudly instead of silently ignoring ℓ.
    """
    if algo not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algo!r}; pick one of {list(ALGORITHMS)}")
    if algo in WINDOWED:
        if ell is None:
            raise ValueError(f"{algo} needs the window parameter ell")
        if algo == "l_greedy_local":
            return l_greedy_local(inst, ell, ledger)
        if algo == "l_double_greedy":
            return l_double_greedy(inst, ell, ledger)
        return local_edge(inst, ell, ledger)
    if ell is not None:
        raise ValueError(f"{algo} takes no window parameter, but ell={ell} was given")
    if algo == "greedy_local":
        return greedy_local(inst, ledger)
    if algo == "naive_local":
        return naive_local(inst, ledger)
    return naive_edge(inst, ledger)


def _pick_max(inst: BipartiteInstance, ledger: QueryLedger,
              candidates: Sequence[Edge]) -> Edge:
    """Query every candidate edge and return the heaviest (first wins ties)."""
    best_edge = candidates[0]
    best_w = query_weight(ledger, inst, best_edge)
    for e in candidates[1:]:
        w = query_weight(ledger, inst, e)
        if w > best_w:
            best_edge, best_w = e, w
    return best_edge


def greedy_local(inst: BipartiteInstance, ledger: QueryLedger) -> DiscoveryResult:
    """Producer-by-producer greedy over the full available neighborhood.

    For each producer in ``sigma_p`` order, queries *all* currently available
    incident edges (none if only one remains) and keeps the heaviest.
    Queries at most ``m`` weights; 1+β-competitive under a β-strong P-order.
    """
    available_c = [True] * inst.consumer_count
    chosen: list[Edge] = []
    for p in inst.sigma_p:
        cands = [(p, c) for c in inst.producer_neighborhoods[p] if available_c[c]]
        if not cands:
            continue
        edge = cands[0] if len(cands) == 1 else _pick_max(inst, ledger, cands)
        chosen.append(edge)
        available_c[edge[1]] = False
    return DiscoveryResult(settle(ledger, inst, chosen), ledger)


def naive_local(inst: BipartiteInstance, ledger: QueryLedger) -> DiscoveryResult:
    """Zero-query baseline: each producer takes its first available neighbor.

    Never calls the oracle, so the ledger stays empty.  Optimal whenever
    β + γ ≤ 1, and max{1, β+γ}-competitive in general.
    """
    available_c = [True] * inst.consumer_count
    chosen: list[Edge] = []
    for p in inst.sigma_p:
        for c in inst.producer_neighborhoods[p]:
            if available_c[c]:
                chosen.append((p, c))
                available_c[c] = False
                break
    return DiscoveryResult(settle(ledger, inst, chosen), ledger)


def l_greedy_local(inst: BipartiteInstance, ell: int, ledger: QueryLedger) -> DiscoveryResult:
    """Greedy over a window: only the first ℓ+1 available neighbors compete.

    Interpolates between :func:`naive_local` (ℓ = 0, no queries) and
    :func:`greedy_local` (ℓ ≥ max degree − 1).  Queries at most (ℓ+1)·n
    weights.
    """
    require_ell(ell)
    available_c = [True] * inst.consumer_count
    chosen: list[Edge] = []
    for p in inst.sigma_p:
        cands = []
        for c in inst.producer_neighborhoods[p]:
            if available_c[c]:
                cands.append((p, c))
                if len(cands) == ell + 1:
                    break
        if not cands:
            continue
        edge = cands[0] if len(cands) == 1 else _pick_max(inst, ledger, cands)
        chosen.append(edge)
        available_c[edge[1]] = False
    return DiscoveryResult(settle(ledger, inst, chosen), ledger)


def greedy_path(inst: BipartiteInstance, start_producer: int,
                blocked: tuple[set[int], set[int]], ell: int,
                ledger: QueryLedger) -> list[PathStep]:
    """Grow a greedy alternating path from ``start_producer``.

    At each endpoint the candidate continuations are the first ℓ+1 available
    neighbors (by ``sigma_c`` position from a producer, ``sigma_p`` position
    from a consumer) that are not already on the path; the heaviest candidate
    edge extends the path.  Extension stops when no candidate remains.

    Every edge that joins the path has its weight queried — single-candidate
    steps included, because the path DP downstream needs all path weights.
    This keeps the per-edge cost at ℓ+1 or better.

    Parameters
    ----------
    blocked : (set of int, set of int)
        Globally unavailable producers and consumers; read-only here.

    Returns
    -------
    list of ((producer, consumer), weight)
        Path steps in walk order; empty if no extension from the start exists.
    """
    require_ell(ell)
    blocked_p, blocked_c = blocked
    on_path_p: set[int] = {start_producer}
    on_path_c: set[int] = set()
    path: list[PathStep] = []
    at_producer = True
    node = start_producer
    while True:
        cands: list[Edge] = []
        if at_producer:
            for c in inst.producer_neighborhoods[node]:
                if c not in blocked_c and c not in on_path_c:
                    cands.append((node, c))
                    if len(cands) == ell + 1:
                        break
        else:
            for p in inst.consumer_neighborhoods[node]:
                if p not in blocked_p and p not in on_path_p:
                    cands.append((p, node))
                    if len(cands) == ell + 1:
                        break
        if not cands:
            return path
        edge = cands[0] if len(cands) == 1 else _pick_max(inst, ledger, cands)
        path.append((edge, query_weight(ledger, inst, edge)))
        if at_producer:
            on_path_c.add(edge[1])
            node = edge[1]
        else:
            on_path_p.add(edge[0])
            node = edge[0]
        at_producer = not at_producer


def l_double_greedy(inst: BipartiteInstance, ell: int, ledger: QueryLedger) -> DiscoveryResult:
    """Grow greedy paths, then keep each path's optimal sub-matching.

    For each available producer in ``sigma_p`` order: build a greedy path
    (:func:`greedy_path`), solve the max-weight independent edge subset on it
    (:func:`~querymatch.reference.optimal_path`), commit those edges and block
    their endpoints.  The index only advances once the producer is blocked or
    yields an empty path, so a producer may seed several paths.  Queries at
    most 3(ℓ+1)·n weights.
    """
    require_ell(ell)
    blocked_p: set[int] = set()
    blocked_c: set[int] = set()
    chosen: list[Edge] = []
    log: list[tuple[int, tuple[PathStep, ...], tuple[int, ...]]] = []
    i = 0
    while i < inst.producer_count:
        p = inst.sigma_p[i]
        if p in blocked_p:
            i += 1
            continue
        path = greedy_path(inst, p, (blocked_p, blocked_c), ell, ledger)
        if not path:
            i += 1
            continue
        positions, _ = optimal_path([e for e, _ in path], [w for _, w in path])
        log.append((p, tuple(path), positions))
        for pos in positions:
            (ep, ec), _ = path[pos]
            chosen.append((ep, ec))
            blocked_p.add(ep)
            blocked_c.add(ec)
    return DiscoveryResult(settle(ledger, inst, chosen), ledger, tuple(log))


def naive_edge(inst: BipartiteInstance, ledger: QueryLedger) -> DiscoveryResult:
    """Zero-query edge-order baseline: scan ``sigma_e``, keep whatever fits.

    Requires an edge order; 2·max{1, ζ}-competitive under a ζ-strong E-order.

    Raises
    ------
    MissingOrderError
        If the instance has no ``sigma_e``.
    """
    if inst.sigma_e is None:
        raise MissingOrderError("naive_edge needs an edge order sigma_e")
    available_p = [True] * inst.producer_count
    available_c = [True] * inst.consumer_count
    chosen: list[Edge] = []
    for ei in inst.sigma_e:
        p, c = inst.edges[ei]
        if available_p[p] and available_c[c]:
            chosen.append((p, c))
            available_p[p] = False
            available_c[c] = False
    return DiscoveryResult(settle(ledger, inst, chosen), ledger)


def local_edge(inst: BipartiteInstance, ell: int, ledger: QueryLedger) -> DiscoveryResult:
    """Edge-order greedy with a look-ahead window.

    While the anchor edge (first still-available position) is available,
    collects up to ℓ+1 available edges among window positions i..i+ℓ+1,
    queries them when at least two compete, and commits the heaviest.  The
    anchor position only advances once its edge is unavailable, so one anchor
    can witness several commits.  Queries at most (ℓ+1)·⌈|V|/2⌉ weights.

    Raises
    ------
    MissingOrderError
        If the instance has no ``sigma_e``.
    """
    require_ell(ell)
    if inst.sigma_e is None:
        raise MissingOrderError("local_edge needs an edge order sigma_e")
    order = inst.sigma_e
    m = len(order)
    available_p = [True] * inst.producer_count
    available_c = [True] * inst.consumer_count

    def alive(ei: int) -> bool:
        p, c = inst.edges[ei]
        return available_p[p] and available_c[c]

    chosen: list[Edge] = []
    i = 0
    while i < m:
        if not alive(order[i]):
            i += 1
            continue
        cands = [inst.edges[order[j]]
                 for j in range(i, min(i + ell + 2, m)) if alive(order[j])]
        cands = cands[:ell + 1]
        edge = cands[0] if len(cands) == 1 else _pick_max(inst, ledger, cands)
        chosen.append(edge)
        available_p[edge[0]] = False
        available_c[edge[1]] = False
    return DiscoveryResult(settle(ledger, inst, chosen), ledger)


def path4_saver(inst: BipartiteInstance, path_edges: Sequence[Edge],
                ledger: QueryLedger) -> Matching:
    """2-approximate matching on a 4-edge path using only 3 queries.

    Always inspects the two middle edges; the comparison decides which outer
    edge is kept for free and which inner pair gets the third query:
    if w(e2) > w(e3) the result is {e4, argmax(e1, e2)}, otherwise
    {e1, argmax(e3, e4)}.  Argmax ties go to the earlier path edge.

    Raises
    ------
    ValueError
        If not given exactly four edges.
    MalformedPathError
        If the edges do not form a simple path.
    """
    if len(path_edges) != 4:
        raise ValueError(f"path4_saver needs exactly 4 path edges, got {len(path_edges)}")
    _walk_path(path_edges)
    e1, e2, e3, e4 = (tuple(e) for e in path_edges)
    w2 = query_weight(ledger, inst, e2)
    w3 = query_weight(ledger, inst, e3)
    if w2 > w3:
        w1 = query_weight(ledger, inst, e1)
        picked = {e4, e1 if w1 >= w2 else e2}
    else:
        w4 = query_weight(ledger, inst, e4)
        picked = {e1, e3 if w3 >= w4 else e4}
    return settle(ledger, inst, picked)
