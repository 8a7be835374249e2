"""Instance generators: named gadgets and seeded random instances.

The gadget family (``beta``, ``gamma``, ``weak_c``, ``double``) exists to
*attain* the worst-case ratios: each one makes a specific algorithm commit to
a cheap edge while the optimum uses the edges the algorithm never saw or
already lost.  ``fig1`` is the small worked example used throughout the test
suite; ``star`` and ``p4`` are the query-lower-bound props.

Random generation is deterministic per seed.  The PRNG is CPython's
``random.Random`` (Mersenne Twister, MT19937), and every permutation is drawn
with the explicit modern Fisher–Yates pass implemented here (descending i,
``j = rng.randrange(i + 1)``), so a seed reproduces the same instance on any
platform.  Draw order is fixed: node orders, then edge coin flips, then
weights, then the edge order.
"""

from __future__ import annotations

import dataclasses
import random
from typing import Optional

from .core import BipartiteInstance, Edge, check_instance, require_ell
from .analysis import IntervalWeights, Policy, build_interval_order
from .extensions import HypergraphInstance

FIGURES = ("fig1", "fig2", "beta", "gamma", "weak_c", "double", "star", "p4")
WEIGHT_MODELS = ("uniform", "decaying")
ORDER_MODELS = ("random", "weight_sorted", "interval")

# Decaying-weight model internals: position k in an order scales weights by
# (DECAY * cap)^k with a noise factor in [DECAY, 1).  Any cap <= 1 then keeps
# every same-neighborhood ratio strictly below the cap:
#   ratio <= (DECAY*cap)^1 * (1/DECAY) = cap, with strict noise inequality.
_DECAY = 0.96


def _identity_instance(s: int, q: int, edges: list[tuple[int, int, float]],
                       sigma_e: Optional[tuple[int, ...]] = None) -> BipartiteInstance:
    """Instance with identity node orders from (p, c, w) triples."""
    return check_instance(BipartiteInstance(
        producer_count=s,
        consumer_count=q,
        edges=tuple((p, c) for p, c, _ in edges),
        weights={(p, c): float(w) for p, c, w in edges},
        sigma_p=tuple(range(s)),
        sigma_c=tuple(range(q)),
        sigma_e=sigma_e,
    ))


def _require_positive(**values: float) -> None:
    for name, v in values.items():
        if not v > 0:
            raise ValueError(f"{name} must be positive, got {v}")


def _fig1() -> BipartiteInstance:
    return _identity_instance(3, 4, [
        (0, 0, 7.0), (0, 1, 8.0), (0, 2, 9.0),
        (1, 0, 1.0), (1, 2, 8.0), (1, 3, 3.0),
        (2, 1, 4.0), (2, 3, 7.0),
    ])


def _beta_gadget(beta: float) -> BipartiteInstance:
    """Ties trick the full-neighborhood greedy: it settles for weight 1.

    p1 queries both its edges, sees the tie, takes c1 — blocking p2's only
    (heavy) edge.  Optimal pairs p1 with c2 instead, for 1 + beta total.
    """
    _require_positive(beta=beta)
    return _identity_instance(2, 2, [
        (0, 0, 1.0), (0, 1, 1.0), (1, 0, beta),
    ])


def _gamma_gadget(beta: float, gamma: float) -> BipartiteInstance:
    """The query-free scan takes (p1,c1)=1 and loses beta + gamma."""
    _require_positive(beta=beta, gamma=gamma)
    return _identity_instance(2, 2, [
        (0, 0, 1.0), (0, 1, gamma), (1, 0, beta),
    ])


def _weak_c_gadget(ell: int, beta: float, gamma_l: float) -> BipartiteInstance:
    """ℓ cheap middle consumers push the heavy edge outside the query window.

    p1's neighborhood is c1 (weight 1), ℓ middles (0.5 each), then the
    gamma_l edge at position ℓ+2 that a window of ℓ+1 can never see; p2 only
    offers beta at c1.
    """
    require_ell(ell)
    _require_positive(beta=beta, gamma_l=gamma_l)
    edges = [(0, 0, 1.0)]
    edges += [(0, j, 0.5) for j in range(1, ell + 1)]
    edges += [(0, ell + 1, gamma_l), (1, 0, beta)]
    return _identity_instance(2, ell + 2, edges)


def _double_gadget(ell: int, beta_l: float, gamma_l: float, eps: float) -> BipartiteInstance:
    """Two interleaved windows hide both heavy edges from the path builder.

    A producer-side star at p1 and a consumer-side star at c1 share the
    center edge (p1,c1) = 1+eps.  Each star has ℓ middles at 0.5 and its
    heavy edge ((1+eps)·gamma_l at c_{ℓ+2}, beta_l at p_{ℓ+3}) parked just
    beyond the window, so the greedy path sees only the center and commits
    weight 1+eps against an optimum of beta_l + (1+eps)·gamma_l.

    The optimum equals that sum only when beta_l >= 1 (otherwise the unit
    path edge at c1 outweighs the parked beta_l edge); the realized ratio
    is (beta_l + (1+eps)·gamma_l)/(1+eps) exactly in that regime.

    eps = 0 is allowed: the take-on-tie rule of the path DP keeps the center
    selected even then.
    """
    require_ell(ell)
    _require_positive(beta_l=beta_l, gamma_l=gamma_l)
    if eps < 0:
        raise ValueError(f"eps must be >= 0, got {eps}")
    center = 1.0 + eps
    edges = [(0, 0, center)]
    edges += [(0, j, 0.5) for j in range(1, ell + 1)]          # p1's middles
    edges += [(0, ell + 1, center * gamma_l)]                  # p1's far heavy edge
    edges += [(1, 0, 1.0)]
    edges += [(i, 0, 0.5) for i in range(2, ell + 2)]          # c1's middles
    edges += [(ell + 2, 0, beta_l)]                            # c1's far heavy edge
    return _identity_instance(ell + 3, ell + 2, edges)


def _star_gadget(m: int) -> BipartiteInstance:
    """One producer, m unit edges except a heavy last one — querying all m is
    the only way to find it."""
    if m < 2:
        raise ValueError(f"star needs m >= 2 edges, got {m}")
    edges = [(0, j, 1.0) for j in range(m - 1)] + [(0, m - 1, float(m))]
    return _identity_instance(1, m, edges)


def _p4_gadget(weights: tuple[float, float, float, float]) -> BipartiteInstance:
    """A 4-edge path p1-c1-p2-c2-p3 with the given weights, sigma_e in path order."""
    ws = tuple(float(w) for w in weights)
    if len(ws) != 4:
        raise ValueError(f"p4 needs exactly 4 weights, got {len(ws)}")
    _require_positive(**{f"w{i+1}": w for i, w in enumerate(ws)})
    edges = [(0, 0, ws[0]), (1, 0, ws[1]), (1, 1, ws[2]), (2, 1, ws[3])]
    return _identity_instance(3, 2, edges, sigma_e=(0, 1, 2, 3))


def gen_figure(figure: str, *, beta: Optional[float] = None,
               gamma: Optional[float] = None, gamma_l: Optional[float] = None,
               beta_l: Optional[float] = None, ell: Optional[int] = None,
               eps: float = 0.0, m: Optional[int] = None,
               weights: Optional[tuple[float, ...]] = None) -> BipartiteInstance:
    """Build one of the named instances; see :data:`FIGURES`.

    ``fig1``/``fig2`` take no parameters (the 3×4 worked example and its
    alias).  ``beta`` needs beta; ``gamma`` needs beta and gamma; ``weak_c``
    needs ell, beta, gamma_l; ``double`` needs ell, beta_l, gamma_l and an
    optional eps; ``star`` needs m; ``p4`` needs 4 weights.
    """
    def need(**kw):
        missing = [k for k, v in kw.items() if v is None]
        if missing:
            raise ValueError(f"gen_figure({figure!r}) needs parameter(s): {missing}")
        return [v for v in kw.values()]

    if figure in ("fig1", "fig2"):
        return _fig1()
    if figure == "beta":
        (b,) = need(beta=beta)
        return _beta_gadget(b)
    if figure == "gamma":
        b, g = need(beta=beta, gamma=gamma)
        return _gamma_gadget(b, g)
    if figure == "weak_c":
        k, b, g = need(ell=ell, beta=beta, gamma_l=gamma_l)
        return _weak_c_gadget(k, b, g)
    if figure == "double":
        k, b, g = need(ell=ell, beta_l=beta_l, gamma_l=gamma_l)
        return _double_gadget(k, b, g, eps)
    if figure == "star":
        (edges,) = need(m=m)
        return _star_gadget(edges)
    if figure == "p4":
        (ws,) = need(weights=weights)
        return _p4_gadget(tuple(ws))
    raise ValueError(f"unknown figure {figure!r}; pick one of {list(FIGURES)}")


def fisher_yates(rng: random.Random, n: int) -> tuple[int, ...]:
    """Random permutation of range(n): descending modern Fisher–Yates."""
    items = list(range(n))
    for i in range(n - 1, 0, -1):
        j = rng.randrange(i + 1)
        items[i], items[j] = items[j], items[i]
    return tuple(items)


def _positions(order: tuple[int, ...]) -> list[int]:
    pos = [0] * len(order)
    for k, x in enumerate(order):
        pos[x] = k
    return pos


def gen_random(seed: int, s: int, q: int, density: float = 1.0,
               weight_model: str = "uniform", order_model: str = "random",
               *, weight_lo: float = 1.0, weight_hi: float = 10.0,
               beta_cap: float = 1.0, gamma_cap: float = 1.0,
               interval_spread: Optional[float] = None,
               policy: Policy = "centered",
               ) -> tuple[BipartiteInstance, Optional[IntervalWeights]]:
    """Seeded random instance, optionally with interval weight knowledge.

    Weight models: ``uniform`` draws from [weight_lo, weight_hi);
    ``decaying`` scales weights down along the node orders so the extracted
    β/γ stay strictly below ``beta_cap``/``gamma_cap`` (caps must be in
    (0, 1]).  Order models: ``random`` permutes everything, ``weight_sorted``
    orders nodes by their heaviest incident edge and edges by weight, and
    ``interval`` derives all orders from ±spread intervals around the true
    weights via :func:`querymatch.analysis.build_interval_order` (spread
    defaults to 0.3).  Intervals are also returned for the other order
    models whenever ``interval_spread`` is given.
    """
    if s < 1 or q < 1:
        raise ValueError(f"need s, q >= 1, got {s}x{q}")
    if not 0 < density <= 1:
        raise ValueError(f"density must be in (0, 1], got {density}")
    if weight_model not in WEIGHT_MODELS:
        raise ValueError(f"unknown weight model {weight_model!r}")
    if order_model not in ORDER_MODELS:
        raise ValueError(f"unknown order model {order_model!r}")
    if weight_model == "uniform" and not 0 < weight_lo <= weight_hi:
        raise ValueError(f"need 0 < weight_lo <= weight_hi, got [{weight_lo}, {weight_hi})")
    if weight_model == "decaying" and not (0 < beta_cap <= 1 and 0 < gamma_cap <= 1):
        raise ValueError("decaying weights need caps in (0, 1], got "
                         f"beta_cap={beta_cap}, gamma_cap={gamma_cap}")
    spread = interval_spread
    if order_model == "interval" and spread is None:
        spread = 0.3
    if spread is not None and not 0 <= spread < 1:
        raise ValueError(f"interval spread must be in [0, 1), got {spread}")

    rng = random.Random(seed)
    if order_model == "random":
        sigma_p, sigma_c = fisher_yates(rng, s), fisher_yates(rng, q)
    else:
        sigma_p, sigma_c = tuple(range(s)), tuple(range(q))

    edges: list[Edge] = [(p, c) for p in range(s) for c in range(q)
                         if rng.random() < density]

    p_pos, c_pos = _positions(sigma_p), _positions(sigma_c)
    weights: dict[Edge, float] = {}
    for p, c in edges:
        if weight_model == "uniform":
            weights[(p, c)] = rng.uniform(weight_lo, weight_hi)
        else:
            noise = rng.uniform(_DECAY, 1.0)
            weights[(p, c)] = ((_DECAY * beta_cap) ** p_pos[p]
                               * (_DECAY * gamma_cap) ** c_pos[c] * noise)

    if order_model == "random":
        sigma_e: Optional[tuple[int, ...]] = fisher_yates(rng, len(edges))
    elif order_model == "weight_sorted":
        heaviest_p = [max((weights[e] for e in edges if e[0] == p), default=0.0)
                      for p in range(s)]
        heaviest_c = [max((weights[e] for e in edges if e[1] == c), default=0.0)
                      for c in range(q)]
        sigma_p = tuple(sorted(range(s), key=lambda p: (-heaviest_p[p], p)))
        sigma_c = tuple(sorted(range(q), key=lambda c: (-heaviest_c[c], c)))
        sigma_e = tuple(sorted(range(len(edges)),
                               key=lambda i: (-weights[edges[i]], i)))
    else:
        sigma_e = None  # replaced below by the interval-induced order

    inst = check_instance(BipartiteInstance(
        producer_count=s, consumer_count=q, edges=tuple(edges), weights=weights,
        sigma_p=sigma_p, sigma_c=sigma_c, sigma_e=sigma_e))

    intervals = None if spread is None else IntervalWeights.relative(inst, spread)
    if order_model == "interval":
        inst = build_interval_order(inst, intervals, policy)
    return inst, intervals


def gen_random_hypergraph(seed: int, s: int, q: int, k: int = 3,
                          density: float = 1.0, weight_lo: float = 1.0,
                          weight_hi: float = 10.0) -> HypergraphInstance:
    """Seeded group-formation instance with the default max-of-pairs weight.

    The pair graph is drawn like :func:`gen_random` (uniform weights, random
    node orders, no edge order); the hyperedge weight stays the implicit
    max-of-member-pairs, which satisfies the alpha band (1/(k−1), 1) by
    construction.
    """
    base, _ = gen_random(seed, s, q, density, "uniform", "random",
                         weight_lo=weight_lo, weight_hi=weight_hi)
    base = dataclasses.replace(base, sigma_e=None)
    return HypergraphInstance(base, k)
