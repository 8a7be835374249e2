"""Shared fixtures and strategies for the querymatch test suite."""

from __future__ import annotations

import dataclasses

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from querymatch import (
    BipartiteInstance,
    IntervalWeights,
    build_interval_order,
    gen_figure,
    gen_random,
)

PROPERTY_SETTINGS = settings(
    max_examples=120,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)


class NoPeeking(dict):
    """Weight mapping that raises on any direct value access.

    Structure reads (membership, iteration over keys, len) still work, and
    ``dict(view)`` still copies — that is what lets a ledger capture the
    weights while the algorithm under test sees only this view.
    """

    def _trip(self, *args, **kwargs):
        raise AssertionError("algorithm read inst.weights directly instead of querying")

    __getitem__ = _trip
    get = _trip
    items = _trip
    values = _trip
    pop = _trip
    popitem = _trip
    setdefault = _trip


def trap_view(inst: BipartiteInstance) -> BipartiteInstance:
    """The same instance with its weight mapping replaced by a tripwire."""
    return dataclasses.replace(inst, weights=NoPeeking(inst.weights))


@pytest.fixture
def fig1() -> BipartiteInstance:
    return gen_figure("fig1")


@pytest.fixture
def fig2_oriented() -> tuple[BipartiteInstance, IntervalWeights]:
    """The worked example with ±30% intervals and the centered edge order."""
    inst = gen_figure("fig2")
    intervals = IntervalWeights.relative(inst, 0.3)
    return build_interval_order(inst, intervals, "centered"), intervals


# ---------------------------------------------------------------------------
# Random-instance strategies.  Instances are produced through the seeded
# generator, so every drawn example is valid by construction and shrinks to
# smaller seeds/sizes.

@st.composite
def instances(draw, max_side: int = 8, order_models=("random", "weight_sorted")):
    seed = draw(st.integers(0, 2**32 - 1))
    s = draw(st.integers(1, max_side))
    q = draw(st.integers(1, max_side))
    density = draw(st.sampled_from([0.3, 0.6, 1.0]))
    order_model = draw(st.sampled_from(order_models))
    inst, _ = gen_random(seed, s, q, density, "uniform", order_model)
    return inst


@st.composite
def interval_instances(draw, max_side: int = 7):
    """(instance, intervals) pairs where the orders come from the intervals."""
    seed = draw(st.integers(0, 2**32 - 1))
    s = draw(st.integers(1, max_side))
    q = draw(st.integers(1, max_side))
    density = draw(st.sampled_from([0.5, 1.0]))
    spread = draw(st.sampled_from([0.0, 0.1, 0.3, 0.5]))
    policy = draw(st.sampled_from(["optimistic", "centered", "pessimistic"]))
    inst, intervals = gen_random(seed, s, q, density, "uniform", "interval",
                                 interval_spread=spread, policy=policy)
    return inst, intervals
