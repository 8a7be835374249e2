"""Order-parameter extraction, interval-based orders and competitive bounds.

Two ways to obtain order parameters:

* :func:`extract_params` reads the true weights and returns the *tightest*
  parameters the instance's orders satisfy — useful for benchmarking and for
  checking how good a given order actually is.
* :func:`certified_params` never reads a weight.  It assumes each weight is
  only known to lie in an interval and bounds every constrained ratio by
  ``hi(later) / lo(earlier)``, pairing edges by their ``sigma_e`` positions
  within each neighborhood.  The result is a guarantee available *before*
  any query is spent.

The weak parameter of level ℓ only constrains edge pairs separated by at
least ℓ intermediates (positions in between within the same neighborhood,
or in ``sigma_e`` for ζ).  Level 0 is the strong parameter.  Profiles are
stored densely up to the largest gap that occurs; beyond it the parameter
is 0 by convention (no constrained pairs).
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Callable, Iterable, Literal, Mapping, NamedTuple, Optional

from .core import (
    BipartiteInstance,
    Edge,
    MissingOrderError,
    require_ell,
)

Policy = Literal["optimistic", "centered", "pessimistic"]

#: Sort keys for interval-based edge orders (applied descending).
_POLICY_KEYS: dict[str, Callable[[tuple[float, float]], float]] = {
    "optimistic": lambda b: b[1],
    "centered": lambda b: 0.5 * (b[0] + b[1]),
    "pessimistic": lambda b: b[0],
}


class IntervalWeights:
    """Per-edge weight bounds ``lo(e) <= w(e) <= hi(e)``.

    Bounds must be positive and ordered; edges are ``(producer, consumer)``
    pairs.  The true weights never enter — this models what is known about
    an instance before querying.
    """

    def __init__(self, bounds: Mapping[Edge, tuple[float, float]]):
        clean: dict[Edge, tuple[float, float]] = {}
        for e, (lo, hi) in bounds.items():
            edge = (int(e[0]), int(e[1]))
            lo, hi = float(lo), float(hi)
            if not lo > 0:
                raise ValueError(f"interval for {edge} has non-positive lower bound {lo}")
            if hi < lo:
                raise ValueError(f"interval for {edge} is empty: [{lo}, {hi}]")
            clean[edge] = (lo, hi)
        self._bounds = clean

    def lo(self, edge: Edge) -> float:
        return self._bounds[edge][0]

    def hi(self, edge: Edge) -> float:
        return self._bounds[edge][1]

    def midpoint(self, edge: Edge) -> float:
        lo, hi = self._bounds[edge]
        return 0.5 * (lo + hi)

    def __contains__(self, edge: Edge) -> bool:
        return edge in self._bounds

    def __len__(self) -> int:
        return len(self._bounds)

    def items(self) -> Iterable[tuple[Edge, tuple[float, float]]]:
        return self._bounds.items()

    def admits(self, inst: BipartiteInstance) -> bool:
        """True if every true weight of ``inst`` lies inside its interval."""
        try:
            return all(self.lo(e) <= inst.weights[e] <= self.hi(e) for e in inst.edges)
        except KeyError:
            return False

    @classmethod
    def relative(cls, inst: BipartiteInstance, spread: float) -> "IntervalWeights":
        """Intervals ``[(1-spread)·w, (1+spread)·w]`` around the true weights."""
        if not 0 <= spread < 1:
            raise ValueError(f"spread must be in [0, 1), got {spread}")
        return cls({e: ((1 - spread) * w, (1 + spread) * w)
                    for e, w in inst.weights.items()})


@dataclass(frozen=True)
class OrderParams:
    """Strong and weak order parameters of one instance.

    ``beta_weak[l]`` is β_ℓ and so on; index 0 equals the strong parameter.
    ``zeta``/``zeta_weak`` are ``None`` when the instance has no edge order.
    Use :meth:`beta_l` / :meth:`gamma_l` / :meth:`zeta_l` instead of indexing
    — they return the conventional 0 beyond the recorded profile.
    """

    beta: float
    gamma: float
    zeta: Optional[float]
    beta_weak: tuple[float, ...]
    gamma_weak: tuple[float, ...]
    zeta_weak: Optional[tuple[float, ...]]

    def beta_l(self, ell: int) -> float:
        require_ell(ell)
        return self.beta_weak[ell] if ell < len(self.beta_weak) else 0.0

    def gamma_l(self, ell: int) -> float:
        require_ell(ell)
        return self.gamma_weak[ell] if ell < len(self.gamma_weak) else 0.0

    def zeta_l(self, ell: int) -> float:
        require_ell(ell)
        if self.zeta_weak is None:
            raise MissingOrderError("no edge order, so no zeta parameters")
        return self.zeta_weak[ell] if ell < len(self.zeta_weak) else 0.0


def _weak_profile(groups: Iterable[tuple[Edge, ...]],
                  num: Callable[[Edge], float],
                  den: Callable[[Edge], float]) -> tuple[float, ...]:
    """Max of ``num(later)/den(earlier)`` per intermediate-count level.

    Each group lists edges earliest-first; a pair at group positions a < b
    has b-a-1 intermediates.  Entry ℓ of the result is the max ratio over
    pairs with at least ℓ intermediates; the suffix-maximum structure makes
    the profile non-increasing.  No pairs at all yields ``(0.0,)``.
    """
    best_at_gap: dict[int, float] = {}
    for group in groups:
        for a in range(len(group)):
            d = den(group[a])
            for b in range(a + 1, len(group)):
                gap = b - a - 1
                ratio = num(group[b]) / d
                if ratio > best_at_gap.get(gap, 0.0):
                    best_at_gap[gap] = ratio
    if not best_at_gap:
        return (0.0,)
    profile = [0.0] * (max(best_at_gap) + 1)
    running = 0.0
    for gap in range(len(profile) - 1, -1, -1):
        running = max(running, best_at_gap.get(gap, 0.0))
        profile[gap] = running
    return tuple(profile)


def _node_groups(inst: BipartiteInstance) -> tuple[list[tuple[Edge, ...]],
                                                   list[tuple[Edge, ...]]]:
    """Edges of each consumer (sigma_p-sorted) and producer (sigma_c-sorted)."""
    per_consumer = [tuple((p, c) for p in ps)
                    for c, ps in enumerate(inst.consumer_neighborhoods)]
    per_producer = [tuple((p, c) for c in cs)
                    for p, cs in enumerate(inst.producer_neighborhoods)]
    return per_consumer, per_producer


def _sigma_e_groups(inst: BipartiteInstance) -> tuple[list[tuple[Edge, ...]],
                                                      list[tuple[Edge, ...]],
                                                      tuple[Edge, ...]]:
    """Node neighborhoods and the full edge list, all sorted by sigma_e."""
    epos = inst.e_position
    by_c: list[list[Edge]] = [[] for _ in range(inst.consumer_count)]
    by_p: list[list[Edge]] = [[] for _ in range(inst.producer_count)]
    for e in inst.edges:
        by_p[e[0]].append(e)
        by_c[e[1]].append(e)
    key = lambda e: epos[inst.edge_index[e]]
    per_consumer = [tuple(sorted(es, key=key)) for es in by_c]
    per_producer = [tuple(sorted(es, key=key)) for es in by_p]
    all_edges = tuple(inst.edges[i] for i in inst.sigma_e)
    return per_consumer, per_producer, all_edges


def extract_params(inst: BipartiteInstance) -> OrderParams:
    """Tightest parameters the instance's own orders satisfy.

    β ranges over producer pairs sharing a consumer (earlier producer in
    ``sigma_p`` in the denominator), γ over consumer pairs sharing a producer,
    ζ over all ``sigma_e`` pairs.  Reads true weights; never query-safe.
    """
    w = inst.weights.__getitem__
    per_consumer, per_producer = _node_groups(inst)
    beta_prof = _weak_profile(per_consumer, w, w)
    gamma_prof = _weak_profile(per_producer, w, w)
    if inst.sigma_e is None:
        zeta_prof = None
    else:
        zeta_prof = _weak_profile([tuple(inst.edges[i] for i in inst.sigma_e)], w, w)
    return OrderParams(
        beta=beta_prof[0],
        gamma=gamma_prof[0],
        zeta=None if zeta_prof is None else zeta_prof[0],
        beta_weak=beta_prof,
        gamma_weak=gamma_prof,
        zeta_weak=zeta_prof,
    )


def certified_params(inst: BipartiteInstance, intervals: IntervalWeights) -> OrderParams:
    """Parameters guaranteed by interval knowledge alone.

    Every constrained ratio is bounded by ``hi(later)/lo(earlier)``, where
    earlier/later refer to ``sigma_e`` position — both across all edges (ζ)
    and inside each node neighborhood (β, γ).  Whenever the true weights lie
    in their intervals, the true ratios cannot exceed these, so any
    competitive bound computed from them is a real guarantee.

    Raises
    ------
    MissingOrderError
        If the instance has no ``sigma_e``.
    ValueError
        If some edge has no interval.
    """
    if inst.sigma_e is None:
        raise MissingOrderError("certified parameters need an edge order sigma_e")
    missing = [e for e in inst.edges if e not in intervals]
    if missing:
        raise ValueError(f"no interval for edge(s) {missing[:3]}"
                         + ("..." if len(missing) > 3 else ""))
    per_consumer, per_producer, all_edges = _sigma_e_groups(inst)
    beta_prof = _weak_profile(per_consumer, intervals.hi, intervals.lo)
    gamma_prof = _weak_profile(per_producer, intervals.hi, intervals.lo)
    zeta_prof = _weak_profile([all_edges], intervals.hi, intervals.lo)
    return OrderParams(
        beta=beta_prof[0],
        gamma=gamma_prof[0],
        zeta=zeta_prof[0],
        beta_weak=beta_prof,
        gamma_weak=gamma_prof,
        zeta_weak=zeta_prof,
    )


def build_interval_order(inst: BipartiteInstance, intervals: IntervalWeights,
                         policy: Policy = "centered") -> BipartiteInstance:
    """Reorder an instance by its interval estimates.

    Edges are sorted descending by the policy's estimate — upper bound
    (``optimistic``), midpoint (``centered``) or lower bound
    (``pessimistic``) — with ties broken by original edge index.  That
    sequence becomes ``sigma_e``; ``sigma_p`` and ``sigma_c`` list nodes by
    first appearance along it, isolated nodes last in index order.  Weights
    are untouched, so the returned instance works with the same ledger
    machinery.
    """
    try:
        estimate = _POLICY_KEYS[policy]
    except KeyError:
        raise ValueError(f"unknown policy {policy!r}; pick one of "
                         f"{sorted(_POLICY_KEYS)}") from None
    missing = [e for e in inst.edges if e not in intervals]
    if missing:
        raise ValueError(f"no interval for edge(s) {missing[:3]}"
                         + ("..." if len(missing) > 3 else ""))
    order = sorted(range(inst.edge_count),
                   key=lambda i: (-estimate((intervals.lo(inst.edges[i]),
                                             intervals.hi(inst.edges[i]))), i))
    seen_p: list[int] = []
    seen_c: list[int] = []
    for i in order:
        p, c = inst.edges[i]
        if p not in seen_p:
            seen_p.append(p)
        if c not in seen_c:
            seen_c.append(c)
    seen_p.extend(p for p in range(inst.producer_count) if p not in seen_p)
    seen_c.extend(c for c in range(inst.consumer_count) if c not in seen_c)
    return dataclasses.replace(inst, sigma_p=tuple(seen_p), sigma_c=tuple(seen_c),
                               sigma_e=tuple(order))


class OverlapCounts(NamedTuple):
    """Interval overlap statistics: global, per-producer and per-consumer."""

    oc: int
    oc_p: int
    oc_c: int


def _max_overlap(edges: Iterable[Edge], intervals: IntervalWeights) -> int:
    """Max, over edges, of how many *other* listed intervals strictly overlap."""
    es = list(edges)
    best = 0
    for e in es:
        lo_e, hi_e = intervals.lo(e), intervals.hi(e)
        count = sum(1 for f in es
                    if f != e and intervals.lo(f) < hi_e and intervals.hi(f) > lo_e)
        if count > best:
            best = count
    return best


def overlap_counts(inst: BipartiteInstance, intervals: IntervalWeights) -> OverlapCounts:
    """Strict interval overlap counts.

    ``oc`` scans all edge pairs, ``oc_p``/``oc_c`` only pairs sharing a
    producer/consumer.  Two intervals overlap iff each one's interior reaches
    past the other's edge: lo(f) < hi(e) and hi(f) > lo(e); touching
    endpoints do not count.

    The point of these counts is the guarantee ζ_{oc} ≤ 1 (and γ_{oc_p} ≤ 1,
    β_{oc_c} ≤ 1) on the certified parameters of an order built by
    :func:`build_interval_order`.  It holds whenever every edge lying
    between an overlapping pair in the order overlaps one of the pair
    itself, which is the case for

    * relative intervals ``[(1−s)·w, (1+s)·w]`` under every policy, and
    * the ``optimistic`` and ``pessimistic`` policies on arbitrary intervals
      with non-empty interiors (lo < hi strictly for every edge).

    The ``centered`` policy on arbitrary asymmetric intervals can break it:
    an interval with a large midpoint may sit between an overlapping pair
    without overlapping either member, letting a heavy-tailed edge slip past
    the oc-window.  See the test suite for a four-edge witness.
    """
    missing = [e for e in inst.edges if e not in intervals]
    if missing:
        raise ValueError(f"no interval for edge(s) {missing[:3]}"
                         + ("..." if len(missing) > 3 else ""))
    oc = _max_overlap(inst.edges, intervals)
    by_p: list[list[Edge]] = [[] for _ in range(inst.producer_count)]
    by_c: list[list[Edge]] = [[] for _ in range(inst.consumer_count)]
    for e in inst.edges:
        by_p[e[0]].append(e)
        by_c[e[1]].append(e)
    oc_p = max((_max_overlap(es, intervals) for es in by_p), default=0)
    oc_c = max((_max_overlap(es, intervals) for es in by_c), default=0)
    return OverlapCounts(oc, oc_p, oc_c)


def competitive_bound(algo: str, params: OrderParams,
                      ell: Optional[int] = None) -> float:
    """Worst-case ratio w(optimal) / w(algorithm) promised for ``algo``.

    Window algorithms need ``ell``; edge algorithms need ζ parameters
    (an instance with ``sigma_e``).  The naive/greedy local bounds are

    * ``greedy_local``:    min(1+β, max{1, β+γ})
    * ``naive_local``:     max{1, β+γ}
    * ``l_greedy_local``:  min(max{1+β, β+γ_ℓ}, max{1, β+γ})
    * ``l_double_greedy``: 2·max{1, β_ℓ, γ_ℓ}
    * ``naive_edge``:      2·max{1, ζ}
    * ``local_edge``:      2·max{1, ζ_ℓ}
    """
    beta, gamma = params.beta, params.gamma

    def need_ell() -> int:
        if ell is None:
            raise ValueError(f"{algo} needs the window parameter ell")
        require_ell(ell)
        return ell

    def need_zeta() -> float:
        if params.zeta is None:
            raise MissingOrderError(f"{algo} bound needs zeta (no edge order)")
        return params.zeta

    if algo == "greedy_local":
        return min(1.0 + beta, max(1.0, beta + gamma))
    if algo == "naive_local":
        return max(1.0, beta + gamma)
    if algo == "l_greedy_local":
        g_l = params.gamma_l(need_ell())
        return min(max(1.0 + beta, beta + g_l), max(1.0, beta + gamma))
    if algo == "l_double_greedy":
        k = need_ell()
        return 2.0 * max(1.0, params.beta_l(k), params.gamma_l(k))
    if algo == "naive_edge":
        return 2.0 * max(1.0, need_zeta())
    if algo == "local_edge":
        return 2.0 * max(1.0, params.zeta_l(need_ell()))
    raise ValueError(f"unknown algorithm {algo!r}")
