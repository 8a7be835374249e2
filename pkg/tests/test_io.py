"""File format: canonical JSON, 1-based indices, robust parsing."""

from __future__ import annotations

import dataclasses
import json

import pytest
from hypothesis import given

from querymatch import (
    FORMAT_NAME,
    FORMAT_VERSION,
    HypergraphInstance,
    InstanceFormatError,
    IntervalWeights,
    InvalidInstanceError,
    emit_canonical,
    gen_random_hypergraph,
    instance_from_dict,
    instance_to_dict,
    load_instance,
    save_instance,
)

from .conftest import PROPERTY_SETTINGS, instances, interval_instances


def _roundtrip(inst, intervals=None, hypergraph=None):
    doc = json.loads(emit_canonical(instance_to_dict(inst, intervals, hypergraph)))
    return instance_from_dict(doc)


def test_roundtrip_plain(fig1):
    loaded = _roundtrip(fig1)
    assert loaded.instance == fig1
    assert loaded.intervals is None
    assert loaded.hypergraph is None


def test_roundtrip_with_order_and_intervals(fig2_oriented):
    inst, intervals = fig2_oriented
    loaded = _roundtrip(inst, intervals)
    assert loaded.instance == inst
    assert loaded.intervals is not None
    for e in inst.edges:
        assert loaded.intervals.lo(e) == intervals.lo(e)
        assert loaded.intervals.hi(e) == intervals.hi(e)


def test_roundtrip_hypergraph_with_table():
    h = gen_random_hypergraph(13, 2, 3, k=3)
    some_edge = h.base.edges[0]
    table = {(some_edge[0], frozenset({some_edge[1]})):
             h.base.weights[some_edge]}
    rich = HypergraphInstance(h.base, 3, alpha1=0.4, alpha2=0.9,
                              hyper_weights=table)
    loaded = _roundtrip(h.base, hypergraph=rich)
    assert loaded.hypergraph is not None
    assert loaded.hypergraph.k == 3
    assert loaded.hypergraph.alpha1 == 0.4
    assert loaded.hypergraph.alpha2 == 0.9
    assert loaded.hypergraph.hyper_weights == rich.hyper_weights
    assert loaded.hypergraph.base == h.base


def test_canonical_emission_properties(fig1):
    text = emit_canonical(instance_to_dict(fig1))
    assert text.endswith("\n") and not text.endswith("\n\n")
    doc = json.loads(text)
    assert list(doc) == sorted(doc)
    # canonical means emit(parse(emit(x))) == emit(x)
    assert emit_canonical(json.loads(text)) == text


def test_on_disk_indices_are_one_based(fig1):
    doc = instance_to_dict(fig1)
    assert doc["format"] == FORMAT_NAME
    assert doc["version"] == FORMAT_VERSION
    assert doc["producers"] == 3
    assert doc["consumers"] == 4
    assert doc["edges"][0] == {"p": 1, "c": 1, "w": 7.0}
    assert doc["sigma_p"] == [1, 2, 3]
    assert min(row["p"] for row in doc["edges"]) == 1


def test_save_and_load_files(tmp_path, fig2_oriented):
    inst, intervals = fig2_oriented
    path = tmp_path / "example.json"
    save_instance(str(path), inst, intervals)
    loaded = load_instance(str(path))
    assert loaded.instance == inst
    # byte-identical re-emission
    again = tmp_path / "again.json"
    save_instance(str(again), loaded.instance, loaded.intervals)
    assert path.read_bytes() == again.read_bytes()


def test_load_rejects_bad_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(InstanceFormatError):
        load_instance(str(path))


def test_load_missing_file_raises_oserror(tmp_path):
    with pytest.raises(OSError):
        load_instance(str(tmp_path / "nope.json"))


@pytest.mark.parametrize("mutate", [
    lambda d: d.pop("format"),
    lambda d: d.update(format="other-format"),
    lambda d: d.update(version=99),
    lambda d: d.pop("producers"),
    lambda d: d.pop("edges"),
    lambda d: d.pop("sigma_p"),
    lambda d: d.update(producers="three"),
    lambda d: d.update(producers=True),  # bool is not an int here
    lambda d: d.update(edges={"p": 1}),
    lambda d: d["edges"][0].pop("w"),
])
def test_malformed_documents_raise_format_errors(fig1, mutate):
    doc = instance_to_dict(fig1)
    mutate(doc)
    with pytest.raises(InstanceFormatError):
        instance_from_dict(doc)


def test_semantically_invalid_document_raises_invalid_instance(fig1, tmp_path):
    doc = instance_to_dict(fig1)
    doc["edges"].append(dict(doc["edges"][0]))  # duplicate edge
    path = tmp_path / "dupe.json"
    path.write_text(emit_canonical(doc), encoding="utf-8")
    with pytest.raises(InvalidInstanceError):
        load_instance(str(path))


def test_interval_serialization_requires_full_coverage(fig1):
    partial = IntervalWeights({fig1.edges[0]: (1.0, 2.0)})
    with pytest.raises(InstanceFormatError):
        instance_to_dict(fig1, intervals=partial)


@given(instances())
@PROPERTY_SETTINGS
def test_roundtrip_any_generated_instance(inst):
    loaded = _roundtrip(inst)
    assert loaded.instance == inst


@given(interval_instances())
@PROPERTY_SETTINGS
def test_roundtrip_any_interval_instance(pair):
    inst, intervals = pair
    loaded = _roundtrip(inst, intervals)
    assert loaded.instance == inst
    assert all(loaded.intervals.lo(e) == intervals.lo(e)
               and loaded.intervals.hi(e) == intervals.hi(e)
               for e in inst.edges)


def test_hypergraph_base_rebuilt_without_sigma_e(fig1):
    # a document can carry both sigma_e and a hypergraph block; the
    # hypergraph base must drop the edge order to stay valid
    oriented = dataclasses.replace(fig1, sigma_e=tuple(range(fig1.edge_count)))
    plain = dataclasses.replace(fig1)
    h = HypergraphInstance(plain, 2)
    doc = instance_to_dict(oriented, hypergraph=h)
    loaded = instance_from_dict(doc)
    assert loaded.instance.sigma_e == oriented.sigma_e
    assert loaded.hypergraph.base.sigma_e is None
