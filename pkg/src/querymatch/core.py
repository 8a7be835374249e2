"""Core data model for bipartite matching with hidden, queryable weights.

An instance is a bipartite graph over producers ``P`` (size ``s``) and
consumers ``C`` (size ``q``) with strictly positive edge weights.  The weights
are considered *hidden*: discovery algorithms may only learn them through a
query ledger (see :mod:`querymatch.oracle`), while reference solvers read them
directly.  Instances also carry heuristic orders: a producer order ``sigma_p``,
a consumer order ``sigma_c``, and optionally an edge order ``sigma_e``.  The
quality of those orders is what the analysis module quantifies.

Conventions used across the package:

* node and edge indices are 0-based internally (1-based only in files and CLI
  output),
* ``sigma_p[k]`` is the producer placed at position ``k`` (positions are what
  the algorithms consume); the same for ``sigma_c`` and ``sigma_e``,
* weights are ``float`` and compared with relative tolerance :data:`REL_TOL`,
* instances and matchings are immutable; algorithm state is kept local.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Optional

#: Relative tolerance for weight comparisons throughout the package.
REL_TOL = 1e-9

Edge = tuple[int, int]


class QuerymatchError(Exception):
    """Base class for all package-specific errors."""


class InvalidInstanceError(QuerymatchError):
    """Raised when an instance fails validation.

    Carries the full violation list on the ``violations`` attribute.
    """

    def __init__(self, violations: list["Violation"]):
        self.violations = violations
        summary = "; ".join(v.code for v in violations)
        super().__init__(f"invalid instance: {summary}")


class UnknownEdgeError(QuerymatchError):
    """Raised when a weight is requested for a pair that is not an edge."""


class MissingOrderError(QuerymatchError):
    """Raised when an algorithm or analysis needs an order the instance lacks."""


class SizeLimitError(QuerymatchError):
    """Raised when a brute-force routine is asked to exceed its size guard."""


class MalformedPathError(QuerymatchError):
    """Raised when an edge sequence does not form a simple path."""


@dataclass(frozen=True)
class Violation:
    """One validation finding: a stable ``code`` plus a human-readable message."""

    code: str
    message: str

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return f"{self.code}: {self.message}"


@dataclass(frozen=True)
class BipartiteInstance:
    """Immutable bipartite instance with hidden weights and heuristic orders.

    Parameters
    ----------
    producer_count, consumer_count : int
        Sizes of the two node sides (``s`` and ``q``).
    edges : tuple of (int, int)
        Distinct producer/consumer pairs, 0-based.  The tuple order is the
        *original* edge indexing used by ``sigma_e`` and by file round-trips.
    weights : mapping (int, int) -> float
        Strictly positive weight for every edge (and nothing else).
    sigma_p, sigma_c : tuple of int
        Permutations of ``range(producer_count)`` / ``range(consumer_count)``;
        ``sigma_p[k]`` is the producer at position ``k``.
    sigma_e : tuple of int, optional
        Permutation of ``range(len(edges))`` giving the heuristic edge order;
        absent for instances that only carry node orders.

    Notes
    -----
    Construction is cheap and does not validate; call
    :func:`validate_instance` (loaders and generators do) to get a violation
    list.  Isolated edges are kept as-is — stripping them is an explicit
    harness operation, never an implicit one.
    """

    producer_count: int
    consumer_count: int
    edges: tuple[Edge, ...]
    weights: Mapping[Edge, float]
    sigma_p: tuple[int, ...]
    sigma_c: tuple[int, ...]
    sigma_e: Optional[tuple[int, ...]] = None

    # -- derived structure (cached; instances are frozen) -------------------

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def max_matching_size(self) -> int:
        """Trivial upper bound ``n = min(s, q)`` on any matching size."""
        return min(self.producer_count, self.consumer_count)

    @cached_property
    def edge_index(self) -> Mapping[Edge, int]:
        """Original index of every edge (position in ``self.edges``)."""
        return {e: i for i, e in enumerate(self.edges)}

    @cached_property
    def p_position(self) -> tuple[int, ...]:
        """Position of each producer in ``sigma_p`` (inverse permutation)."""
        pos = [0] * self.producer_count
        for k, p in enumerate(self.sigma_p):
            pos[p] = k
        return tuple(pos)

    @cached_property
    def c_position(self) -> tuple[int, ...]:
        pos = [0] * self.consumer_count
        for k, c in enumerate(self.sigma_c):
            pos[c] = k
        return tuple(pos)

    @cached_property
    def e_position(self) -> tuple[int, ...]:
        """Position of each edge (by original index) in ``sigma_e``."""
        if self.sigma_e is None:
            raise MissingOrderError("instance has no edge order sigma_e")
        pos = [0] * self.edge_count
        for k, e in enumerate(self.sigma_e):
            pos[e] = k
        return tuple(pos)

    @cached_property
    def producer_neighborhoods(self) -> tuple[tuple[int, ...], ...]:
        """For each producer, its consumer neighbors sorted by sigma_c position."""
        adj: list[list[int]] = [[] for _ in range(self.producer_count)]
        for p, c in self.edges:
            adj[p].append(c)
        cpos = self.c_position
        return tuple(tuple(sorted(cs, key=lambda c: cpos[c])) for cs in adj)

    @cached_property
    def consumer_neighborhoods(self) -> tuple[tuple[int, ...], ...]:
        """For each consumer, its producer neighbors sorted by sigma_p position."""
        adj: list[list[int]] = [[] for _ in range(self.consumer_count)]
        for p, c in self.edges:
            adj[c].append(p)
        ppos = self.p_position
        return tuple(tuple(sorted(ps, key=lambda p: ppos[p])) for ps in adj)

    def has_edge(self, p: int, c: int) -> bool:
        return (p, c) in self.edge_index

    def weight_of(self, p: int, c: int) -> float:
        """Direct weight lookup — for reference solvers and reporting only.

        Discovery algorithms must go through a
        :class:`querymatch.oracle.QueryLedger` instead.
        """
        try:
            return self.weights[(p, c)]
        except KeyError:
            raise UnknownEdgeError(f"({p}, {c}) is not an edge of this instance") from None


@dataclass(frozen=True)
class Matching:
    """A set of pairwise node-disjoint edges with its total weight.

    ``total_weight`` is stored for convenience but always recomputable from
    the instance via :func:`matching_weight`; the two agree to :data:`REL_TOL`.
    """

    edges: frozenset[Edge]
    total_weight: float

    @property
    def sorted_edges(self) -> tuple[Edge, ...]:
        """Deterministic edge listing (sorted lexicographically)."""
        return tuple(sorted(self.edges))

    def __len__(self) -> int:
        return len(self.edges)


def make_matching(inst: BipartiteInstance, edges: Iterable[Edge]) -> Matching:
    """Build a :class:`Matching`, checking disjointness and edge existence.

    Raises
    ------
    UnknownEdgeError
        If some pair is not an edge of ``inst``.
    ValueError
        If two edges share an endpoint.
    """
    edge_set = frozenset((int(p), int(c)) for p, c in edges)
    seen_p: set[int] = set()
    seen_c: set[int] = set()
    for p, c in sorted(edge_set):
        if p in seen_p or c in seen_c:
            raise ValueError(f"edges are not disjoint at ({p}, {c})")
        seen_p.add(p)
        seen_c.add(c)
    return Matching(edge_set, matching_weight(inst, edge_set))


def matching_weight(inst: BipartiteInstance, edges: Iterable[Edge]) -> float:
    """Sum of the true weights of ``edges`` (reference-side computation)."""
    return sum(inst.weight_of(p, c) for p, c in edges)


def require_ell(ell: int) -> int:
    """Validate an ℓ parameter (nonnegative integer) and return it."""
    if isinstance(ell, bool) or not isinstance(ell, int):
        raise ValueError(f"ell must be a nonnegative integer, got {ell!r}")
    if ell < 0:
        raise ValueError(f"ell must be >= 0, got {ell}")
    return ell


def _check_permutation(order: Iterable[int], size: int, code: str, label: str,
                       out: list[Violation]) -> None:
    seq = list(order)
    if sorted(seq) != list(range(size)):
        out.append(Violation(code, f"{label} is not a permutation of range({size}): {seq}"))


def validate_instance(inst: BipartiteInstance) -> list[Violation]:
    """Check all instance invariants and return the violation list.

    An empty list means the instance is valid.  Checks, in order: endpoint
    ranges, duplicate edges, the weight map covering exactly the edge set,
    strict weight positivity, and that each provided order is a permutation of
    the right index range.

    This is intentionally a report rather than an exception so callers (file
    loaders, generators, the CLI) can decide how to surface problems; use
    :class:`InvalidInstanceError` to raise with the list attached.
    """
    out: list[Violation] = []
    s, q = inst.producer_count, inst.consumer_count
    if s < 0 or q < 0:
        out.append(Violation("bad-size", f"negative side size (s={s}, q={q})"))
        return out

    seen: set[Edge] = set()
    for p, c in inst.edges:
        if not (0 <= p < s and 0 <= c < q):
            out.append(Violation("bad-endpoint", f"edge ({p}, {c}) out of range (s={s}, q={q})"))
        if (p, c) in seen:
            out.append(Violation("duplicate-edge", f"edge ({p}, {c}) listed twice"))
        seen.add((p, c))

    for e in inst.edges:
        if e not in inst.weights:
            out.append(Violation("missing-weight", f"edge {e} has no weight"))
        else:
            w = inst.weights[e]
            if not (w > 0):
                out.append(Violation("weight-not-positive", f"edge {e} has weight {w!r}"))
    for e in inst.weights:
        if e not in seen:
            out.append(Violation("extra-weight", f"weight given for non-edge {e}"))

    _check_permutation(inst.sigma_p, s, "sigma-p-not-permutation", "sigma_p", out)
    _check_permutation(inst.sigma_c, q, "sigma-c-not-permutation", "sigma_c", out)
    if inst.sigma_e is not None:
        _check_permutation(inst.sigma_e, inst.edge_count, "sigma-e-not-permutation", "sigma_e", out)
    return out


def check_instance(inst: BipartiteInstance) -> BipartiteInstance:
    """Validate ``inst`` and return it, raising :class:`InvalidInstanceError` on failure."""
    violations = validate_instance(inst)
    if violations:
        raise InvalidInstanceError(violations)
    return inst
