"""Instance files: one JSON document per instance, 1-based on disk.

In code everything is 0-based; on disk producers and consumers are numbered
from 1 (matching the usual p_1, c_1 drawing convention) and ``sigma_e``
entries are 1-based positions into the ``edges`` array.  Emission is
canonical — sorted keys, two-space indent, one trailing newline, shortest
round-trip float repr — so regenerating the same instance yields a
byte-identical file.

Optional blocks carry interval weight knowledge (``intervals``) and the
group-formation extension (``hypergraph`` with k, the alpha band, and an
optional explicit hyperedge weight table).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Optional

from .core import BipartiteInstance, check_instance
from .analysis import IntervalWeights
from .extensions import HypergraphInstance

FORMAT_NAME = "querymatch-instance"
FORMAT_VERSION = 1


class InstanceFormatError(ValueError):
    """The document is not a valid instance file."""


@dataclass(frozen=True)
class LoadedInstance:
    """One parsed instance file: the instance plus its optional blocks."""

    instance: BipartiteInstance
    intervals: Optional[IntervalWeights] = None
    hypergraph: Optional[HypergraphInstance] = None


def instance_to_dict(inst: BipartiteInstance,
                     intervals: Optional[IntervalWeights] = None,
                     hypergraph: Optional[HypergraphInstance] = None) -> dict[str, Any]:
    """Serializable document for an instance (1-based indices)."""
    doc: dict[str, Any] = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "producers": inst.producer_count,
        "consumers": inst.consumer_count,
        "edges": [{"p": p + 1, "c": c + 1, "w": inst.weights[(p, c)]}
                  for p, c in inst.edges],
        "sigma_p": [p + 1 for p in inst.sigma_p],
        "sigma_c": [c + 1 for c in inst.sigma_c],
    }
    if inst.sigma_e is not None:
        doc["sigma_e"] = [e + 1 for e in inst.sigma_e]
    if intervals is not None:
        missing = [e for e in inst.edges if e not in intervals]
        if missing:
            raise InstanceFormatError(f"intervals missing for edge(s) {missing[:3]}")
        doc["intervals"] = [
            {"p": p + 1, "c": c + 1,
             "lo": intervals.lo((p, c)), "hi": intervals.hi((p, c))}
            for p, c in inst.edges]
    if hypergraph is not None:
        block: dict[str, Any] = {
            "k": hypergraph.k,
            "alpha1": hypergraph.alpha1,
            "alpha2": hypergraph.alpha2,
        }
        if hypergraph.hyper_weights is not None:
            block["hyper_weights"] = sorted(
                ({"p": p + 1, "cs": sorted(c + 1 for c in xs), "w": w}
                 for (p, xs), w in hypergraph.hyper_weights.items()),
                key=lambda row: (row["p"], row["cs"]))
        doc["hypergraph"] = block
    return doc


def emit_canonical(doc: dict[str, Any]) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _field(doc: dict[str, Any], key: str, kind: type) -> Any:
    try:
        value = doc[key]
    except KeyError:
        raise InstanceFormatError(f"missing field {key!r}") from None
    if not isinstance(value, kind) or isinstance(value, bool):
        raise InstanceFormatError(f"field {key!r} should be {kind.__name__}, "
                                  f"got {type(value).__name__}")
    return value


def instance_from_dict(doc: dict[str, Any]) -> LoadedInstance:
    """Parse a document produced by :func:`instance_to_dict` (or by hand)."""
    if not isinstance(doc, dict):
        raise InstanceFormatError("instance document must be a single object")
    if doc.get("format") != FORMAT_NAME:
        raise InstanceFormatError(f"not a {FORMAT_NAME} document")
    if doc.get("version") != FORMAT_VERSION:
        raise InstanceFormatError(f"unsupported version {doc.get('version')!r}")
    s = _field(doc, "producers", int)
    q = _field(doc, "consumers", int)
    rows = _field(doc, "edges", list)
    edges = []
    weights = {}
    for row in rows:
        try:
            e = (row["p"] - 1, row["c"] - 1)
            weights[e] = float(row["w"])
        except (KeyError, TypeError) as exc:
            raise InstanceFormatError(f"malformed edge row {row!r} ({exc!r})") from None
        edges.append(e)
    sigma_e = None
    if "sigma_e" in doc:
        sigma_e = tuple(e - 1 for e in _field(doc, "sigma_e", list))
    inst = check_instance(BipartiteInstance(
        producer_count=s,
        consumer_count=q,
        edges=tuple(edges),
        weights=weights,
        sigma_p=tuple(p - 1 for p in _field(doc, "sigma_p", list)),
        sigma_c=tuple(c - 1 for c in _field(doc, "sigma_c", list)),
        sigma_e=sigma_e,
    ))
    intervals = None
    if "intervals" in doc:
        intervals = IntervalWeights({
            (row["p"] - 1, row["c"] - 1): (row["lo"], row["hi"])
            for row in _field(doc, "intervals", list)})
    hypergraph = None
    if "hypergraph" in doc:
        block = _field(doc, "hypergraph", dict)
        table = None
        if "hyper_weights" in block:
            table = {(row["p"] - 1, frozenset(c - 1 for c in row["cs"])): row["w"]
                     for row in block["hyper_weights"]}
        base = inst if inst.sigma_e is None else BipartiteInstance(
            producer_count=s, consumer_count=q, edges=inst.edges,
            weights=inst.weights, sigma_p=inst.sigma_p, sigma_c=inst.sigma_c)
        hypergraph = HypergraphInstance(
            base, _field(block, "k", int),
            alpha1=block.get("alpha1"), alpha2=block.get("alpha2"),
            hyper_weights=table)
    return LoadedInstance(inst, intervals, hypergraph)


def save_instance(path: str, inst: BipartiteInstance,
                  intervals: Optional[IntervalWeights] = None,
                  hypergraph: Optional[HypergraphInstance] = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(emit_canonical(instance_to_dict(inst, intervals, hypergraph)))


def load_instance(path: str) -> LoadedInstance:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InstanceFormatError(f"{path}: not valid JSON ({exc})") from None
    try:
        return instance_from_dict(doc)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InstanceFormatError):
            raise
        raise InstanceFormatError(f"{path}: malformed instance file ({exc})") from None
