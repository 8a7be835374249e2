"""Reference solvers: full-information baselines the discovery suite is judged against.

Everything here is allowed to read ``inst.weights`` directly.  When the
harness reports a query cost for these solvers it charges the full edge count
``m``, since an offline solver inspects every weight.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .core import (
    BipartiteInstance,
    Edge,
    MalformedPathError,
    Matching,
    SizeLimitError,
    make_matching,
)

#: Edge-count guard for the exhaustive matching enumerator.
BRUTE_FORCE_EDGE_LIMIT = 24


def exact_matching(inst: BipartiteInstance) -> Matching:
    """Maximum-weight matching, computed exactly.

    Solves the rectangular assignment problem on the dense profit matrix
    (missing pairs padded with profit 0) and drops padding pairs from the
    result.  Padding is sound because real weights are strictly positive: a
    zero-profit pair never displaces weight, and removing it from the
    assignment leaves a valid matching of equal total weight.
    """
    s, q = inst.producer_count, inst.consumer_count
    if s == 0 or q == 0 or not inst.edges:
        return Matching(frozenset(), 0.0)
    profit = np.zeros((s, q))
    for (p, c), w in inst.weights.items():
        profit[p, c] = w
    rows, cols = linear_sum_assignment(profit, maximize=True)
    chosen = [(int(p), int(c)) for p, c in zip(rows, cols) if inst.has_edge(int(p), int(c))]
    return make_matching(inst, chosen)


def brute_force_matching(inst: BipartiteInstance) -> Matching:
    """Maximum-weight matching by exhaustive search over all matchings.

    Independent of :func:`exact_matching` on purpose — the two cross-check
    each other.  Guarded to instances with at most
    :data:`BRUTE_FORCE_EDGE_LIMIT` edges.

    Raises
    ------
    SizeLimitError
        If the instance has more than the guarded number of edges.
    """
    m = inst.edge_count
    if m > BRUTE_FORCE_EDGE_LIMIT:
        raise SizeLimitError(
            f"brute_force_matching is limited to {BRUTE_FORCE_EDGE_LIMIT} edges, got {m}")
    edges = inst.edges
    weights = [inst.weight_of(p, c) for p, c in edges]

    best_weight = 0.0
    best: list[Edge] = []
    used_p: set[int] = set()
    used_c: set[int] = set()
    current: list[Edge] = []

    def extend(i: int, acc: float) -> None:
        nonlocal best_weight, best
        if acc > best_weight:
            best_weight = acc
            best = list(current)
        for j in range(i, m):
            p, c = edges[j]
            if p in used_p or c in used_c:
                continue
            used_p.add(p)
            used_c.add(c)
            current.append((p, c))
            extend(j + 1, acc + weights[j])
            current.pop()
            used_p.discard(p)
            used_c.discard(c)

    extend(0, 0.0)
    return make_matching(inst, best)


def classic_greedy(inst: BipartiteInstance) -> Matching:
    """Textbook offline greedy: scan edges by decreasing weight, keep what fits.

    Ties are broken lexicographically by the (producer, consumer) index pair,
    so the result is deterministic.  Inspects all ``m`` weights.
    """
    order = sorted(inst.edges, key=lambda e: (-inst.weight_of(*e), e[0], e[1]))
    used_p: set[int] = set()
    used_c: set[int] = set()
    chosen: list[Edge] = []
    for p, c in order:
        if p in used_p or c in used_c:
            continue
        chosen.append((p, c))
        used_p.add(p)
        used_c.add(c)
    return make_matching(inst, chosen)


def _walk_path(path_edges: Sequence[Edge]) -> None:
    """Validate that ``path_edges`` is a simple path in walk order.

    Endpoints are tagged by side, so a producer and a consumer with the same
    index never collide.  Raises :class:`MalformedPathError` otherwise.
    """
    k = len(path_edges)
    if k == 0:
        return
    tagged = [frozenset({("P", p), ("C", c)}) for p, c in path_edges]
    for e in tagged:
        if len(e) != 2:
            raise MalformedPathError("degenerate edge in path")
    if k == 1:
        return
    joint = tagged[0] & tagged[1]
    if len(joint) != 1:
        raise MalformedPathError("edges 0 and 1 do not share exactly one endpoint")
    (current,) = joint
    visited = set(tagged[0])
    for i in range(1, k):
        e = tagged[i]
        if current not in e:
            raise MalformedPathError(f"edge {i} does not continue the walk")
        (nxt,) = e - {current}
        if nxt in visited:
            raise MalformedPathError(f"edge {i} revisits a node; path is not simple")
        visited.add(nxt)
        current = nxt


def optimal_path(path_edges: Sequence[Edge], weights: Sequence[float]) -> tuple[tuple[int, ...], float]:
    """Maximum-weight independent edge subset of a simple path.

    Parameters
    ----------
    path_edges : sequence of (producer, consumer)
        Edges in walk order; consecutive edges must share exactly one
        endpoint and the walk must visit no node twice.
    weights : sequence of float
        Weight of each path edge, parallel to ``path_edges``.

    Returns
    -------
    (positions, total) : tuple
        Selected positions (indices into ``path_edges``, increasing) and
        their total weight.

    Notes
    -----
    Classic linear DP over suffixes with one sharpening: when taking and
    skipping an edge yield equal weight, the edge is *taken*, so the returned
    solution always prefers the earliest edge from the path's start.  That tie
    rule is relied on by the zero-slack lower-bound constructions.

    Raises
    ------
    MalformedPathError
        If the edge sequence is not a simple path.
    ValueError
        If the two sequences have different lengths.
    """
    if len(path_edges) != len(weights):
        raise ValueError(
            f"got {len(path_edges)} edges but {len(weights)} weights")
    _walk_path(path_edges)
    k = len(path_edges)
    # best[i] = (weight, positions) for the suffix starting at edge i
    best: list[tuple[float, tuple[int, ...]]] = [(0.0, ())] * (k + 2)
    for i in range(k - 1, -1, -1):
        take_w = weights[i] + best[i + 2][0]
        skip_w = best[i + 1][0]
        if take_w >= skip_w:
            best[i] = (take_w, (i,) + best[i + 2][1])
        else:
            best[i] = best[i + 1]
    return best[0][1], best[0][0]
