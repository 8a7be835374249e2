"""Query ledger: the only path from a discovery algorithm to an edge weight.

Query complexity is counted as *first inspections*: asking for the same edge
twice costs one query.  Every discovery run owns exactly one ledger, passed in
explicitly, and nothing else writes to it.  Reference solvers bypass the
ledger entirely (they are allowed to read ``inst.weights``); the harness
reports their cost as the full edge count ``m``.
"""

from __future__ import annotations

from typing import Iterable

from .core import BipartiteInstance, Edge, Matching, UnknownEdgeError


class QueryLedger:
    """Records which edge weights a discovery run has inspected.

    The ledger captures the instance's weight map at construction time, so
    algorithms can run against a view of the instance that hides ``weights``
    while the ledger still answers queries.

    Attributes
    ----------
    queried : set of edge
        Edges inspected at least once.
    trace : list of (edge, weight)
        First inspections, in order.
    """

    def __init__(self, inst: BipartiteInstance):
        self._weights = dict(inst.weights)
        self.queried: set[Edge] = set()
        self.trace: list[tuple[Edge, float]] = []

    @property
    def query_count(self) -> int:
        """Number of distinct edges inspected (always ``len(self.queried)``)."""
        return len(self.queried)

    def query(self, edge: Edge) -> float:
        """Return the weight of ``edge``, recording a first inspection.

        Raises
        ------
        UnknownEdgeError
            If ``edge`` is not an edge of the ledger's instance.
        """
        edge = (edge[0], edge[1])
        try:
            w = self._weights[edge]
        except KeyError:
            raise UnknownEdgeError(f"{edge} is not an edge of this instance") from None
        if edge not in self.queried:
            self.queried.add(edge)
            self.trace.append((edge, w))
        return w


def query_weight(ledger: QueryLedger, inst: BipartiteInstance, edge: Edge) -> float:
    """Query one edge weight through the ledger.

    ``inst`` is consulted only for edge membership — the weight itself comes
    from the ledger, which is what lets tests run algorithms against
    weight-hiding instance views.
    """
    if not inst.has_edge(*edge):
        raise UnknownEdgeError(f"{edge} is not an edge of this instance")
    return ledger.query(edge)


def ledger_report(ledger: QueryLedger) -> tuple[int, tuple[tuple[Edge, float], ...]]:
    """Snapshot of a ledger: ``(query_count, trace)`` with an immutable trace copy."""
    return ledger.query_count, tuple(ledger.trace)


def settle(ledger: QueryLedger, inst: BipartiteInstance, edges: Iterable[Edge]) -> Matching:
    """Price a finished edge selection — evaluator-side, not a query.

    An algorithm's output is the edge *set*; its total weight is something
    the evaluator (who knows all weights) reports afterwards.  Settling
    therefore reads the ledger's captured weight map without recording any
    inspection, and ``ledger.query_count`` is unchanged.  The selection is
    validated the same way :func:`querymatch.core.make_matching` validates:
    all edges must exist and be pairwise disjoint.
    """
    chosen: list[Edge] = []
    seen: set[Edge] = set()
    used_p: set[int] = set()
    used_c: set[int] = set()
    for edge in edges:
        edge = (edge[0], edge[1])
        if edge in seen:
            continue
        if not inst.has_edge(*edge):
            raise UnknownEdgeError(f"{edge} is not an edge of this instance")
        p, c = edge
        if p in used_p or c in used_c:
            raise ValueError(f"edges are not disjoint at {edge}")
        seen.add(edge)
        used_p.add(p)
        used_c.add(c)
        chosen.append(edge)
    total = sum(ledger._weights[e] for e in chosen)
    return Matching(frozenset(chosen), total)
