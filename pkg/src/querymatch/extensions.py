"""One-to-many assignment and bipartite hypergraph matching (BHM).

A producer that may serve up to ``k`` consumers is modelled by making ``k``
copies of it and solving the ordinary one-to-one problem on the expanded
graph.  Copy ``j`` of producer ``p`` gets index ``p·k + j``, so
``copy // k`` recovers the original producer.

For group formation the objective is a *hyperedge* weight on
``{p} ∪ X`` (one producer, up to k−1 consumers) that need not be the sum of
the pairwise weights — only queryable pairwise weights exist.  As long as
every hyperedge's true weight stays within a band
``alpha1 ≤ w(e)/Σ pairs ≤ alpha2``, a matching algorithm with ratio r on the
expanded pair graph yields groups within ``r·alpha2/alpha1`` of the optimal
hyperedge packing.  The default hyperedge weight (max of the member pair
weights) satisfies the band with ``alpha1 = 1/(k−1)``, ``alpha2 = 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional

from .core import (
    BipartiteInstance,
    Edge,
    Matching,
    QuerymatchError,
    REL_TOL,
    SizeLimitError,
    check_instance,
)
from .discovery import DiscoveryResult, run_algorithm
from .analysis import extract_params, competitive_bound
from .oracle import QueryLedger

STRATEGIES = ("single_pass", "round_robin", "classic_greedy")

# Enumeration guards for brute_force_bhm.
BRUTE_FORCE_BHM_LIMITS = (4, 6, 3)  # max s, max q, max k


class AlphaBandError(QuerymatchError):
    """A hyperedge weight fell outside the declared alpha band."""


def _copy_edges(inst: BipartiteInstance, k: int) -> list[Edge]:
    return [(p * k + j, c) for p, c in inst.edges for j in range(k)]


def extend_p_order(sigma_p: tuple[int, ...], k: int, strategy: str,
                   inst: Optional[BipartiteInstance] = None) -> tuple[int, ...]:
    """Extend a producer order to the k-copy expansion.

    ``single_pass`` keeps all copies of a producer together (this preserves
    the order assumptions); ``round_robin`` cycles through the producers k
    times (it does not).  ``classic_greedy`` instead returns an *edge* order
    over the expanded edge list, sorted by decreasing true weight — an
    offline order for the edge-scan algorithms, which forces ζ ≥ 1 as soon
    as k ≥ 2 because every edge has equal-weight copies.  ``inst`` is only
    needed (and only consulted) for ``classic_greedy``.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if strategy == "single_pass":
        return tuple(p * k + j for p in sigma_p for j in range(k))
    if strategy == "round_robin":
        return tuple(p * k + j for j in range(k) for p in sigma_p)
    if strategy == "classic_greedy":
        if inst is None:
            raise ValueError("classic_greedy needs the instance for weight access")
        weights = [inst.weights[e] for e in inst.edges for _ in range(k)]
        return tuple(sorted(range(len(weights)), key=lambda i: (-weights[i], i)))
    raise ValueError(f"unknown strategy {strategy!r}; pick one of {list(STRATEGIES)}")


def expand_one_to_many(inst: BipartiteInstance, k: int,
                       strategy: str = "single_pass") -> BipartiteInstance:
    """Expand each producer into k copies inheriting its edges and weights.

    The expanded producer order comes from :func:`extend_p_order`.  An
    existing ``sigma_e`` is inherited with the copies of an edge placed
    consecutively; under ``classic_greedy`` the expanded ``sigma_e`` is the
    decreasing-weight order instead.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    edges = _copy_edges(inst, k)
    weights = {(p * k + j, c): w for (p, c), w in inst.weights.items()
               for j in range(k)}
    if strategy == "classic_greedy":
        sigma_p = extend_p_order(inst.sigma_p, k, "single_pass")
        sigma_e: Optional[tuple[int, ...]] = extend_p_order(
            inst.sigma_p, k, "classic_greedy", inst)
    else:
        sigma_p = extend_p_order(inst.sigma_p, k, strategy, inst)
        sigma_e = None
        if inst.sigma_e is not None:
            sigma_e = tuple(ei * k + j for ei in inst.sigma_e for j in range(k))
    return BipartiteInstance(
        producer_count=inst.producer_count * k,
        consumer_count=inst.consumer_count,
        edges=tuple(edges),
        weights=weights,
        sigma_p=sigma_p,
        sigma_c=inst.sigma_c,
        sigma_e=sigma_e,
    )


def contract_matching(matching: Matching | Iterable[Edge], k: int) -> dict[int, frozenset[int]]:
    """Merge copy producers back: original producer → set of matched consumers.

    Every group has at most ``k`` consumers because a producer only has k
    copies to match with.
    """
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    edges = matching.edges if isinstance(matching, Matching) else matching
    groups: dict[int, set[int]] = {}
    for copy_p, c in edges:
        groups.setdefault(copy_p // k, set()).add(c)
    return {p: frozenset(cs) for p, cs in groups.items()}


class HypergraphInstance:
    """Group-formation instance: pairwise weights plus a banded hyperedge weight.

    The implicit hyperedges are all ``{p} ∪ X`` with ``X`` a nonempty subset
    of p's pair-graph neighbors, ``|X| ≤ k−1``.  ``hyper_weights`` may list
    explicit weights keyed by ``(p, frozenset(X))``; missing entries (or a
    ``None`` table) default to the max of the member pair weights.

    ``alpha1``/``alpha2`` declare the band tying hyperedge weights to
    pairwise sums; :func:`solve_bhm` re-checks the band on every group it
    prices and raises :class:`AlphaBandError` when a weight escapes it.
    """

    def __init__(self, base: BipartiteInstance, k: int,
                 alpha1: Optional[float] = None, alpha2: Optional[float] = None,
                 hyper_weights: Optional[Mapping[tuple[int, frozenset[int]], float]] = None):
        if k < 2:
            raise ValueError(f"group size bound k must be >= 2, got {k}")
        if base.sigma_e is not None:
            # Copies would need an expanded edge order anyway; keep the base clean.
            raise ValueError("hypergraph base instance must not carry sigma_e")
        self.base = check_instance(base)
        self.k = int(k)
        self.alpha1 = 1.0 / (k - 1) if alpha1 is None else float(alpha1)
        self.alpha2 = 1.0 if alpha2 is None else float(alpha2)
        if not 0 < self.alpha1 <= self.alpha2:
            raise ValueError(f"need 0 < alpha1 <= alpha2, got ({self.alpha1}, {self.alpha2})")
        self.hyper_weights = None if hyper_weights is None else {
            (p, frozenset(xs)): float(w) for (p, xs), w in hyper_weights.items()}

    @property
    def producer_count(self) -> int:
        return self.base.producer_count

    @property
    def consumer_count(self) -> int:
        return self.base.consumer_count

    @property
    def pair_weights(self) -> Mapping[Edge, float]:
        return self.base.weights

    def hyper_weight(self, p: int, consumers: Iterable[int]) -> float:
        """True weight of the hyperedge ``{p} ∪ consumers``."""
        xs = frozenset(consumers)
        if not xs:
            raise ValueError("a hyperedge needs at least one consumer")
        if len(xs) > self.k - 1:
            raise ValueError(f"group {sorted(xs)} exceeds size bound k-1 = {self.k - 1}")
        for c in xs:
            if not self.base.has_edge(p, c):
                raise ValueError(f"({p}, {c}) is not a pair edge, so {{p}}∪X is not a hyperedge")
        if self.hyper_weights is not None:
            try:
                return self.hyper_weights[(p, xs)]
            except KeyError:
                pass
        return max(self.base.weights[(p, c)] for c in xs)

    def pair_sum(self, p: int, consumers: Iterable[int]) -> float:
        return sum(self.base.weights[(p, c)] for c in consumers)

    def check_band(self, p: int, consumers: Iterable[int]) -> float:
        """Return the hyperedge weight, raising if it escapes the alpha band."""
        xs = frozenset(consumers)
        w = self.hyper_weight(p, xs)
        s = self.pair_sum(p, xs)
        if not (self.alpha1 * s - REL_TOL * s <= w <= self.alpha2 * s + REL_TOL * s):
            raise AlphaBandError(
                f"hyperedge ({p}, {sorted(xs)}) has weight {w}, outside "
                f"[{self.alpha1}·{s}, {self.alpha2}·{s}]")
        return w


@dataclass(frozen=True)
class BhmResult:
    """Outcome of :func:`solve_bhm`: groups, their true total, and the guarantee."""

    groups: dict[int, frozenset[int]]
    total_weight: float
    certified_ratio: float
    inner: DiscoveryResult


def solve_bhm(h: HypergraphInstance, algo: str, ell: Optional[int] = None,
              strategy: str = "single_pass") -> BhmResult:
    """Form consumer groups by matching on the (k−1)-copy expansion.

    Runs ``algo`` (queries counted on pair weights via the inner ledger),
    contracts copies into groups, prices the groups with the true hyperedge
    weights, and certifies ``r·alpha2/alpha1`` where r is the algorithm's
    competitive bound under the expanded instance's extracted parameters.
    """
    expanded = expand_one_to_many(h.base, h.k - 1, strategy)
    ledger = QueryLedger(expanded)
    inner = run_algorithm(algo, expanded, ledger, ell)
    groups = contract_matching(inner.matching, h.k - 1)
    total = sum(h.check_band(p, xs) for p, xs in groups.items())
    r = competitive_bound(algo, extract_params(expanded), ell)
    return BhmResult(groups, total, r * h.alpha2 / h.alpha1, inner)


def brute_force_bhm(h: HypergraphInstance) -> tuple[dict[int, frozenset[int]], float]:
    """Optimal hyperedge packing by exhaustive consumer assignment.

    Walks every way of assigning each consumer to one adjacent producer (or
    none) with at most k−1 consumers per producer.  Guarded to s ≤ 4, q ≤ 6,
    k ≤ 3; the first-found assignment wins ties, so results are
    deterministic.
    """
    max_s, max_q, max_k = BRUTE_FORCE_BHM_LIMITS
    if h.producer_count > max_s or h.consumer_count > max_q or h.k > max_k:
        raise SizeLimitError(
            f"brute_force_bhm is limited to s <= {max_s}, q <= {max_q}, k <= {max_k}")
    options = [[p for p in range(h.producer_count) if h.base.has_edge(p, c)]
               for c in range(h.consumer_count)]
    best_weight = 0.0
    best_groups: dict[int, frozenset[int]] = {}
    assignment: dict[int, list[int]] = {}

    def total() -> float:
        return sum(h.hyper_weight(p, xs) for p, xs in assignment.items() if xs)

    def walk(c: int) -> None:
        nonlocal best_weight, best_groups
        if c == h.consumer_count:
            w = total()
            if w > best_weight + REL_TOL:
                best_weight = w
                best_groups = {p: frozenset(xs) for p, xs in assignment.items() if xs}
            return
        walk(c + 1)  # leave consumer c unmatched
        for p in options[c]:
            taken = assignment.setdefault(p, [])
            if len(taken) < h.k - 1:
                taken.append(c)
                walk(c + 1)
                taken.pop()

    walk(0)
    return best_groups, best_weight
