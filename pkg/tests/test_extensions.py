"""One-to-many matching: copy expansion, alpha bands, group formation."""

from __future__ import annotations

import dataclasses

import pytest
from hypothesis import given
from hypothesis import strategies as st

from querymatch import (
    AlphaBandError,
    BipartiteInstance,
    HypergraphInstance,
    QueryLedger,
    SizeLimitError,
    brute_force_bhm,
    brute_force_matching,
    contract_matching,
    expand_one_to_many,
    extend_p_order,
    extract_params,
    gen_random,
    gen_random_hypergraph,
    make_matching,
    run_algorithm,
    solve_bhm,
)

from .conftest import PROPERTY_SETTINGS


def _two_producer_instance(w0=10.0, w1=5.0):
    """p0 sees both consumers, p1 sees c0; handy for order-damage checks."""
    return BipartiteInstance(
        producer_count=2, consumer_count=2,
        edges=((0, 0), (0, 1), (1, 0)),
        weights={(0, 0): w0, (0, 1): w1, (1, 0): 2.0},
        sigma_p=(0, 1), sigma_c=(0, 1),
    )


# --- producer order extension --------------------------------------------------

def test_extend_p_order_single_pass_keeps_copies_together():
    assert extend_p_order((1, 0), 3, "single_pass") == (3, 4, 5, 0, 1, 2)
    assert extend_p_order((0, 1), 1, "single_pass") == (0, 1)


def test_extend_p_order_round_robin_interleaves():
    assert extend_p_order((1, 0), 2, "round_robin") == (2, 0, 3, 1)


def test_extend_p_order_classic_greedy_is_an_edge_order():
    inst = _two_producer_instance()
    order = extend_p_order(inst.sigma_p, 2, "classic_greedy", inst)
    # expanded edge list: copies of (0,0) w10, (0,1) w5, (1,0) w2
    assert order == (0, 1, 2, 3, 4, 5)
    flipped = _two_producer_instance(w0=1.0)
    assert extend_p_order(flipped.sigma_p, 2, "classic_greedy", flipped) == (2, 3, 4, 5, 0, 1)


def test_extend_p_order_errors():
    with pytest.raises(ValueError):
        extend_p_order((0,), 0, "single_pass")
    with pytest.raises(ValueError):
        extend_p_order((0,), 2, "classic_greedy")  # instance missing
    with pytest.raises(ValueError):
        extend_p_order((0,), 2, "shuffle")


# --- expansion -------------------------------------------------------------------

def test_expand_duplicates_edges_and_weights():
    inst = _two_producer_instance()
    big = expand_one_to_many(inst, 2)
    assert big.producer_count == 4
    assert big.consumer_count == 2
    assert big.edge_count == 6
    for (p, c), w in inst.weights.items():
        for j in range(2):
            assert big.weights[(p * 2 + j, c)] == w
    assert big.sigma_c == inst.sigma_c
    assert big.sigma_p == (0, 1, 2, 3)
    assert big.sigma_e is None


def test_expand_k1_is_identity_up_to_field_copies():
    inst = _two_producer_instance()
    same = expand_one_to_many(inst, 1)
    assert same.edges == inst.edges
    assert same.weights == inst.weights
    assert same.sigma_p == inst.sigma_p


def test_expand_inherits_sigma_e_copywise():
    inst = gen_random(7, 3, 3, 1.0, "uniform", "random")[0]
    assert inst.sigma_e is not None
    big = expand_one_to_many(inst, 2)
    expect = tuple(ei * 2 + j for ei in inst.sigma_e for j in range(2))
    assert big.sigma_e == expect


def test_expand_classic_greedy_builds_weight_order():
    inst = _two_producer_instance()
    big = expand_one_to_many(inst, 2, "classic_greedy")
    assert big.sigma_e == (0, 1, 2, 3, 4, 5)
    ws = [big.weights[big.edges[i]] for i in big.sigma_e]
    assert ws == sorted(ws, reverse=True)
    # copies force an equal-weight pair, so ζ reaches 1 exactly
    assert extract_params(big).zeta == 1.0


@given(st.integers(0, 2**32 - 1), st.integers(2, 3))
@PROPERTY_SETTINGS
def test_single_pass_preserves_the_order_story(seed, k):
    inst, _ = gen_random(seed, 4, 5, 0.8, "uniform", "random")
    base = extract_params(inst)
    big = expand_one_to_many(inst, k, "single_pass")
    expanded = extract_params(big)
    # copy pairs tie at ratio 1; everything else reproduces the base ratios
    assert expanded.beta == pytest.approx(max(1.0, base.beta))
    assert expanded.gamma == pytest.approx(base.gamma)


def test_round_robin_can_damage_beta():
    inst = _two_producer_instance(w0=10.0, w1=5.0)
    # consumer c0 sees p0 (w10) before p1 (w2): beta = 1/5 on the base
    single = extract_params(expand_one_to_many(inst, 2, "single_pass"))
    robin = extract_params(expand_one_to_many(inst, 2, "round_robin"))
    assert single.beta == pytest.approx(1.0)
    assert robin.beta > single.beta
    # under round_robin, copy 2 of p0 ranks behind copy 1 of p1 at c0:
    # the w10 duplicate follows the w2 edge, giving beta = 5
    assert robin.beta == pytest.approx(5.0)


# --- contraction -----------------------------------------------------------------

def test_contract_matching_groups_by_original_producer():
    inst = _two_producer_instance()
    big = expand_one_to_many(inst, 2)
    m = make_matching(big, [(0, 0), (1, 1)])  # both copies of p0
    assert contract_matching(m, 2) == {0: frozenset({0, 1})}
    assert contract_matching([(2, 0)], 2) == {1: frozenset({0})}
    assert contract_matching([], 2) == {}
    with pytest.raises(ValueError):
        contract_matching([], 0)


# --- hypergraph instances ----------------------------------------------------------

def test_hypergraph_validation():
    inst = _two_producer_instance()
    with pytest.raises(ValueError):
        HypergraphInstance(inst, 1)
    ordered = gen_random(3, 2, 2, 1.0, "uniform", "random")[0]
    assert ordered.sigma_e is not None
    with pytest.raises(ValueError):
        HypergraphInstance(ordered, 3)
    with pytest.raises(ValueError):
        HypergraphInstance(inst, 3, alpha1=0.0)
    with pytest.raises(ValueError):
        HypergraphInstance(inst, 3, alpha1=2.0, alpha2=1.0)


def test_hypergraph_alpha_defaults():
    inst = _two_producer_instance()
    h = HypergraphInstance(inst, 3)
    assert h.alpha1 == 0.5
    assert h.alpha2 == 1.0
    assert h.k == 3
    assert h.producer_count == 2
    assert h.consumer_count == 2


def test_hyper_weight_defaults_to_max_of_pairs():
    inst = _two_producer_instance(w0=10.0, w1=5.0)
    h = HypergraphInstance(inst, 3)
    assert h.hyper_weight(0, {0}) == 10.0
    assert h.hyper_weight(0, {0, 1}) == 10.0
    assert h.pair_sum(0, {0, 1}) == 15.0


def test_hyper_weight_argument_errors():
    inst = _two_producer_instance()
    h = HypergraphInstance(inst, 3)
    with pytest.raises(ValueError):
        h.hyper_weight(0, set())
    with pytest.raises(ValueError):
        h.hyper_weight(0, {0, 1, 2})  # beyond k-1 even if edges existed
    with pytest.raises(ValueError):
        h.hyper_weight(1, {1})  # (1,1) is not a pair edge


def test_explicit_hyper_weight_table_with_fallback():
    inst = _two_producer_instance(w0=10.0, w1=5.0)
    table = {(0, frozenset({0, 1})): 12.0}
    h = HypergraphInstance(inst, 3, alpha1=0.5, alpha2=1.0, hyper_weights=table)
    assert h.hyper_weight(0, {0, 1}) == 12.0   # listed
    assert h.hyper_weight(0, {0}) == 10.0      # falls back to max-of-pairs
    assert h.check_band(0, {0, 1}) == 12.0     # 0.5*15 <= 12 <= 1*15


def test_check_band_raises_outside_the_band():
    inst = _two_producer_instance(w0=10.0, w1=5.0)
    table = {(0, frozenset({0, 1})): 100.0}
    h = HypergraphInstance(inst, 3, hyper_weights=table)
    with pytest.raises(AlphaBandError):
        h.check_band(0, {0, 1})
    low = HypergraphInstance(inst, 3, hyper_weights={(0, frozenset({0, 1})): 1.0})
    with pytest.raises(AlphaBandError):
        low.check_band(0, {0, 1})


# --- solving ------------------------------------------------------------------------

def test_solve_bhm_k2_reduces_to_plain_matching():
    inst = _two_producer_instance()
    h = HypergraphInstance(inst, 2)  # groups of size 1, expansion factor 1
    result = solve_bhm(h, "greedy_local")
    plain = run_algorithm("greedy_local", inst, QueryLedger(inst))
    assert result.groups == {p: frozenset({c}) for p, c in plain.matching.edges}
    assert result.total_weight == pytest.approx(plain.matching.total_weight)
    # alpha1 = alpha2 = 1 at k=2, so the guarantee is the inner bound itself
    assert result.certified_ratio >= 1.0


def test_solve_bhm_surfaces_band_violations():
    inst = BipartiteInstance(
        producer_count=1, consumer_count=2, edges=((0, 0), (0, 1)),
        weights={(0, 0): 4.0, (0, 1): 4.0},
        sigma_p=(0,), sigma_c=(0, 1),
    )
    table = {(0, frozenset({0, 1})): 100.0 * 8.0}
    h = HypergraphInstance(inst, 3, hyper_weights=table)
    with pytest.raises(AlphaBandError):
        solve_bhm(h, "greedy_local")


def test_solve_bhm_windowed_algorithms_take_ell():
    inst = _two_producer_instance()
    h = HypergraphInstance(inst, 3)
    result = solve_bhm(h, "l_greedy_local", ell=2)
    for p, xs in result.groups.items():
        assert 1 <= len(xs) <= 2
    assert result.inner.ledger.query_count <= 3 * 4  # (ell+1)*n on the expansion


# --- brute force ---------------------------------------------------------------------

def test_brute_force_bhm_size_guard():
    inst, _ = gen_random(11, 5, 5, 1.0, "uniform", "random")
    base = dataclasses.replace(inst, sigma_e=None)
    h = HypergraphInstance(base, 3)
    with pytest.raises(SizeLimitError):
        brute_force_bhm(h)


def test_brute_force_bhm_respects_group_bound():
    inst = BipartiteInstance(
        producer_count=1, consumer_count=3,
        edges=((0, 0), (0, 1), (0, 2)),
        weights={(0, 0): 3.0, (0, 1): 2.0, (0, 2): 1.0},
        sigma_p=(0,), sigma_c=(0, 1, 2),
    )
    h = HypergraphInstance(inst, 3)  # groups of at most 2 consumers
    groups, total = brute_force_bhm(h)
    assert all(len(xs) <= 2 for xs in groups.values())
    # best single group is max-of-pairs = 3.0 however it is chosen
    assert total == pytest.approx(3.0)


@given(st.integers(0, 2**32 - 1))
@PROPERTY_SETTINGS
def test_brute_force_bhm_k2_equals_plain_brute_force(seed):
    inst, _ = gen_random(seed, 3, 4, 0.7, "uniform", "random")
    base = dataclasses.replace(inst, sigma_e=None)
    if base.edge_count == 0:
        return
    h = HypergraphInstance(base, 2)
    _, total = brute_force_bhm(h)
    assert total == pytest.approx(brute_force_matching(base).total_weight)


@given(st.integers(0, 2**32 - 1))
@PROPERTY_SETTINGS
def test_bhm_transfer_guarantee(seed):
    h = gen_random_hypergraph(seed, 3, 4, k=3)
    if h.base.edge_count == 0:
        return
    result = solve_bhm(h, "l_greedy_local", ell=h.k - 1)
    _, best_total = brute_force_bhm(h)
    assert best_total <= result.certified_ratio * result.total_weight + 1e-9
