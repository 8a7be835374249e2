"""Command-line interface: gen, run, analyze, bench, bhm.

Exit codes follow the harness convention: 0 when every checked bound holds,
1 when a run violates its bound (or a BHM transfer check fails), 2 for
usage and configuration errors (bad flags, malformed files, missing orders).
"""

from __future__ import annotations

import json
import sys
from typing import Optional

import click

from .core import QuerymatchError
from .oracle import QueryLedger
from .analysis import certified_params, extract_params, overlap_counts
from .discovery import ALGORITHMS, WINDOWED
from .extensions import brute_force_bhm, solve_bhm, STRATEGIES
from .generators import FIGURES, ORDER_MODELS, WEIGHT_MODELS, gen_figure, gen_random, gen_random_hypergraph
from .harness import (
    EXIT_BOUND_VIOLATION,
    EXIT_CONFIG_ERROR,
    grid_exit_code,
    report_to_dict,
    reports_to_csv,
    run_experiment,
    run_one,
)
from .io import InstanceFormatError, LoadedInstance, emit_canonical, instance_to_dict, load_instance

_FORMATS = click.Choice(["structured", "csv"])
_GEN_KINDS = list(FIGURES) + ["random", "hyper"]


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(EXIT_CONFIG_ERROR)


def _load(path: str) -> LoadedInstance:
    try:
        return load_instance(path)
    except (OSError, InstanceFormatError, QuerymatchError) as exc:
        _fail(str(exc))


def _write(text: str, out: Optional[str]) -> None:
    if out is None or out == "-":
        click.echo(text, nl=False)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _structured(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


@click.group()
@click.version_option(package_name="querymatch")
def main() -> None:
    """Weight-discovery algorithms for ordered assignment instances."""


@main.command()
@click.argument("kind", type=click.Choice(_GEN_KINDS))
@click.option("--out", "-o", default="-", help="Output file ('-' for stdout).")
@click.option("--seed", type=int, default=0, show_default=True,
              help="PRNG seed (random/hyper).")
@click.option("--producers", "-s", type=int, default=5, show_default=True)
@click.option("--consumers", "-q", type=int, default=5, show_default=True)
@click.option("--density", type=float, default=1.0, show_default=True)
@click.option("--weights", type=click.Choice(list(WEIGHT_MODELS)), default="uniform",
              show_default=True, help="Weight model (random).")
@click.option("--orders", type=click.Choice(list(ORDER_MODELS)), default="random",
              show_default=True, help="Order model (random).")
@click.option("--weight-lo", type=float, default=1.0, show_default=True)
@click.option("--weight-hi", type=float, default=10.0, show_default=True)
@click.option("--beta-cap", type=float, default=1.0, show_default=True,
              help="Decaying-model cap on extracted beta.")
@click.option("--gamma-cap", type=float, default=1.0, show_default=True,
              help="Decaying-model cap on extracted gamma.")
@click.option("--spread", type=float, default=None,
              help="Emit ±spread intervals around the true weights.")
@click.option("--policy", type=click.Choice(["optimistic", "centered", "pessimistic"]),
              default="centered", show_default=True,
              help="Interval-order policy (orders=interval).")
@click.option("--k", type=int, default=3, show_default=True, help="Group size bound (hyper).")
@click.option("--beta", type=float, default=None, help="Figure parameter β.")
@click.option("--gamma", type=float, default=None, help="Figure parameter γ.")
@click.option("--beta-l", type=float, default=None, help="Figure parameter β_ℓ.")
@click.option("--gamma-l", type=float, default=None, help="Figure parameter γ_ℓ.")
@click.option("--ell", type=int, default=None, help="Figure window parameter ℓ.")
@click.option("--eps", type=float, default=0.0, show_default=True,
              help="Tie-breaking margin for the double figure.")
@click.option("--m", type=int, default=None, help="Star size.")
@click.option("--p4-weights", default=None, help="Four comma-separated path weights.")
def gen(kind, out, seed, producers, consumers, density, weights, orders,
        weight_lo, weight_hi, beta_cap, gamma_cap, spread, policy, k,
        beta, gamma, beta_l, gamma_l, ell, eps, m, p4_weights) -> None:
    """Generate an instance file: a named figure, 'random', or 'hyper'."""
    try:
        if kind == "random":
            inst, intervals = gen_random(
                seed, producers, consumers, density, weights, orders,
                weight_lo=weight_lo, weight_hi=weight_hi,
                beta_cap=beta_cap, gamma_cap=gamma_cap,
                interval_spread=spread, policy=policy)
            doc = instance_to_dict(inst, intervals)
        elif kind == "hyper":
            h = gen_random_hypergraph(seed, producers, consumers, k, density,
                                      weight_lo=weight_lo, weight_hi=weight_hi)
            doc = instance_to_dict(h.base, hypergraph=h)
        else:
            ws = None
            if p4_weights is not None:
                ws = tuple(float(x) for x in p4_weights.split(","))
            inst = gen_figure(kind, beta=beta, gamma=gamma, gamma_l=gamma_l,
                              beta_l=beta_l, ell=ell, eps=eps, m=m, weights=ws)
            doc = instance_to_dict(inst)
    except (QuerymatchError, ValueError) as exc:
        _fail(str(exc))
    _write(emit_canonical(doc), out)


@main.command()
@click.option("--instance", "-i", required=True, type=click.Path(), help="Instance file.")
@click.option("--algo", "-a", required=True, type=click.Choice(list(ALGORITHMS)))
@click.option("--ell", "-l", type=int, default=None, help="Window parameter ℓ.")
@click.option("--format", "fmt", type=_FORMATS, default="structured", show_default=True)
@click.option("--out", "-o", default="-", help="Output file ('-' for stdout).")
def run(instance, algo, ell, fmt, out) -> None:
    """Run one algorithm on one instance and check its bound."""
    loaded = _load(instance)
    report = run_one(instance, loaded.instance, algo, ell)
    if report.error is not None:
        _fail(report.error)
    text = (reports_to_csv([report]) if fmt == "csv"
            else _structured(report_to_dict(report)))
    _write(text, out)
    sys.exit(grid_exit_code([report]))


@main.command()
@click.option("--instance", "-i", required=True, type=click.Path(), help="Instance file.")
@click.option("--policy", type=click.Choice(["optimistic", "centered", "pessimistic"]),
              default="centered", show_default=True,
              help="Order policy when certifying without a stored sigma_e.")
@click.option("--format", "fmt", type=_FORMATS, default="structured", show_default=True)
@click.option("--out", "-o", default="-", help="Output file ('-' for stdout).")
def analyze(instance, policy, fmt, out) -> None:
    """Extract order parameters (and certify them when intervals exist)."""
    loaded = _load(instance)
    inst = loaded.instance
    params = extract_params(inst)
    doc = {
        "instance": instance,
        "extracted": {
            "beta": params.beta, "gamma": params.gamma, "zeta": params.zeta,
            "beta_weak": list(params.beta_weak),
            "gamma_weak": list(params.gamma_weak),
            "zeta_weak": None if params.zeta_weak is None else list(params.zeta_weak),
        },
    }
    if loaded.intervals is not None:
        try:
            from .analysis import build_interval_order
            oriented = inst if inst.sigma_e is not None else \
                build_interval_order(inst, loaded.intervals, policy)
            cert = certified_params(oriented, loaded.intervals)
            oc = overlap_counts(oriented, loaded.intervals)
        except (QuerymatchError, ValueError) as exc:
            _fail(str(exc))
        doc["certified"] = {
            "beta": cert.beta, "gamma": cert.gamma, "zeta": cert.zeta,
            "beta_weak": list(cert.beta_weak),
            "gamma_weak": list(cert.gamma_weak),
            "zeta_weak": list(cert.zeta_weak),
        }
        doc["overlap_counts"] = {"oc": oc.oc, "oc_p": oc.oc_p, "oc_c": oc.oc_c}
    if fmt == "csv":
        lines = ["section,parameter,value"]
        for section in ("extracted", "certified"):
            for key, value in doc.get(section, {}).items():
                lines.append(f"{section},{key},{value}")
        if "overlap_counts" in doc:
            for key, value in doc["overlap_counts"].items():
                lines.append(f"overlap_counts,{key},{value}")
        _write("\n".join(lines) + "\n", out)
    else:
        _write(_structured(doc), out)


@main.command()
@click.option("--instance", "-i", "paths", required=True, multiple=True,
              type=click.Path(), help="Instance file (repeatable).")
@click.option("--algo", "-a", "algos", multiple=True,
              type=click.Choice(list(ALGORITHMS)),
              help="Algorithm (repeatable; default: all six).")
@click.option("--ell", "-l", "ells", multiple=True, type=int,
              help="Window value for windowed algorithms (repeatable; default 0 1 2).")
@click.option("--format", "fmt", type=_FORMATS, default="csv", show_default=True)
@click.option("--out", "-o", default="-", help="Output file ('-' for stdout).")
def bench(paths, algos, ells, fmt, out) -> None:
    """Run an instances × algorithms grid and report every bound check."""
    instances = [(path, _load(path).instance) for path in paths]
    algos = algos or ALGORITHMS
    ells = ells or (0, 1, 2)
    cells = []
    for algo in algos:
        if algo in WINDOWED:
            cells.extend((algo, ell) for ell in ells)
        else:
            cells.append((algo, None))
    reports = run_experiment(instances, cells)
    text = (reports_to_csv(reports) if fmt == "csv"
            else _structured([report_to_dict(r) for r in reports]))
    _write(text, out)
    sys.exit(grid_exit_code(reports))


@main.command()
@click.option("--instance", "-i", required=True, type=click.Path(),
              help="Instance file with a hypergraph block.")
@click.option("--algo", "-a", default="l_greedy_local", show_default=True,
              type=click.Choice(list(ALGORITHMS)))
@click.option("--ell", "-l", type=int, default=None,
              help="Window parameter ℓ (default k−1 for windowed algorithms).")
@click.option("--strategy", type=click.Choice(list(STRATEGIES)),
              default="single_pass", show_default=True)
@click.option("--brute/--no-brute", default=False,
              help="Also brute-force the optimum and verify the transfer bound.")
@click.option("--format", "fmt", type=_FORMATS, default="structured", show_default=True)
@click.option("--out", "-o", default="-", help="Output file ('-' for stdout).")
def bhm(instance, algo, ell, strategy, brute, fmt, out) -> None:
    """Form consumer groups on a hypergraph instance via the copy reduction."""
    loaded = _load(instance)
    if loaded.hypergraph is None:
        _fail(f"{instance} has no hypergraph block")
    h = loaded.hypergraph
    if ell is None and algo in WINDOWED:
        ell = h.k - 1
    try:
        result = solve_bhm(h, algo, ell, strategy)
    except (QuerymatchError, ValueError) as exc:
        _fail(str(exc))
    doc = {
        "instance": instance,
        "algorithm": algo,
        "ell": ell,
        "k": h.k,
        "groups": {str(p + 1): sorted(c + 1 for c in xs)
                   for p, xs in sorted(result.groups.items())},
        "total_weight": result.total_weight,
        "certified_ratio": result.certified_ratio,
        "queries": result.inner.ledger.query_count,
    }
    exit_code = 0
    if brute:
        try:
            _, best = brute_force_bhm(h)
        except (QuerymatchError, ValueError) as exc:
            _fail(str(exc))
        doc["brute_force_weight"] = best
        transfer_ok = best <= result.certified_ratio * result.total_weight + 1e-9
        doc["transfer_bound_satisfied"] = transfer_ok
        if not transfer_ok:
            exit_code = EXIT_BOUND_VIOLATION
    if fmt == "csv":
        lines = ["field,value"]
        for key, value in doc.items():
            if key == "groups":
                value = ";".join(f"{p}:{'+'.join(map(str, cs))}"
                                 for p, cs in value.items())
            lines.append(f"{key},{value}")
        _write("\n".join(lines) + "\n", out)
    else:
        _write(_structured(doc), out)
    sys.exit(exit_code)


if __name__ == "__main__":
    main()
