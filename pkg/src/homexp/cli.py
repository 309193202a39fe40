"""Command line entry point: ``homexp <subcommand> ...``.

Reports go to standard output, preceded by ``#`` header lines recording the
version, numeric mode, seed, budget and any estimator certificates
(``--quiet`` drops the header).  Errors go to standard error as one JSON
object per line.  Exit codes: 0 success, 1 usage, 2 precondition violation
or bad input, 3 budget exceeded, 4 internal consistency failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from .cavity import CavityConfig, local_estimate_ln_t, locality_constant
from .cluster import DEFAULT_B, expansion_constants, truncated_ln_t
from .config import get_budget, parse_budget, use_budget
from .enumeration import KINDS, enumerate_family, spanning_tree_count
from .exceptions import InternalConsistencyError, PreconditionError, ResourceError
from .graph import SimpleGraph, WeightedGraph, complement_weights, interaction_norm
from .grids import GRID_KINDS, convergence_experiment, grid_ln_hom
from .homcount import hom_count, log_density, z_value
from .inversion import inversion_system, recover_counts, subgraph_copies
from .invariants import chromatic_polynomial, crapo_invariant, weighted_crapo, weighted_tree_sum
from .io import read_any, read_graph, read_vector, read_weighted_graph
from .localstats import histogram, local_distance
from .polymer import mayer_log_stab, stab_polynomial

EXIT_USAGE, EXIT_PRECONDITION, EXIT_RESOURCE, EXIT_INTERNAL = 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def fmt(x) -> str:
    """Deterministic text for ints, Fractions and floats."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, np.integer):
        x = int(x)
    elif isinstance(x, np.floating):
        x = float(x)
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, float):
        if math.isinf(x):
            return "-inf" if x < 0 else "inf"
        return repr(x)
    return str(x)


class Report:
    def __init__(self, args, command: str):
        self.args = args
        self.header = [
            f"homexp {__version__}",
            f"command: {command}",
            f"mode: {'exact' if args.exact else 'float'}",
            f"seed: {args.seed}",
            f"threads: {args.threads}",
            "budget: " + ",".join(f"{k}={v}" for k, v in vars(get_budget()).items()),
        ]
        self.rows: list = []
        self.columns = None

    def note(self, key: str, value) -> None:
        self.header.append(f"{key}: {fmt(value)}")

    def row(self, *values) -> None:
        self.rows.append([fmt(v) for v in values])

    def render(self) -> str:
        out = io.StringIO()
        if not self.args.quiet:
            for line in self.header:
                out.write(f"# {line}\n")
        if self.args.format == "csv":
            w = csv.writer(out, lineterminator="\n")
            if self.columns:
                w.writerow(self.columns)
            w.writerows(self.rows)
        else:
            if self.columns and not self.args.quiet:
                out.write("# columns: " + " ".join(self.columns) + "\n")
            for r in self.rows:
                out.write(" ".join(r) + "\n")
        return out.getvalue()


# -- helpers -----------------------------------------------------------------------
def _graph(path) -> SimpleGraph:
    return read_graph(path)


def _target(args, path) -> WeightedGraph:
    return read_weighted_graph(path, exact=args.exact)


# -- subcommands -------------------------------------------------------------------
def cmd_hom(args, rep):
    F = _graph(args.F)
    rep.row(hom_count(F, read_any(args.G, exact=args.exact), method=args.method))


def cmd_z(args, rep):
    rep.row(z_value(_graph(args.G), _target(args, args.H)))


def cmd_chrom(args, rep):
    P = chromatic_polynomial(_graph(args.graph))
    if args.at is not None:
        rep.row(P(args.at))
        return
    rep.note("polynomial", str(P))
    rep.columns = [f"y^{i}" for i in range(P.degree + 1)]
    rep.row(*P.coefficients)


def cmd_crapo(args, rep):
    G = read_any(args.graph, exact=args.exact)
    rep.row(weighted_crapo(G) if isinstance(G, WeightedGraph) else crapo_invariant(G))


def cmd_treesum(args, rep):
    G = read_any(args.graph, exact=args.exact)
    rep.row(weighted_tree_sum(G) if isinstance(G, WeightedGraph) else spanning_tree_count(G))


def cmd_enum(args, rep):
    G = _graph(args.graph)
    fam = enumerate_family(G, args.kind, args.max_nodes)
    rep.note("kind", fam.kind)
    rep.note("members", len(fam.members))
    if args.count:
        rep.row(len(fam.members))
        return
    # induced kinds are determined by their node set; the others also list their edges
    with_edges = fam.kind != "CInd"
    rep.columns = ["nodes", "edges"] if with_edges else ["nodes"]
    for s in sorted(fam.members, key=lambda s: (len(s.nodes), sorted(s.nodes), sorted(s.edges))):
        nodes = " ".join(map(str, sorted(s.nodes)))
        if with_edges:
            edges = " ".join(f"{u}-{v}" for u, v in sorted(s.edges))
            if args.format == "csv":
                rep.row(nodes, edges)
            else:
                rep.row(f"{nodes} | {edges}")
        else:
            rep.row(nodes)


def _activities(args, G):
    x = read_vector(args.x, exact=args.exact)
    if len(x) != G.node_count:
        raise PreconditionError(f"vector file has {len(x)} entries, graph has {G.node_count} nodes")
    return x


def cmd_stab(args, rep):
    G = _graph(args.graph)
    rep.row(stab_polynomial(G, _activities(args, G)))


def cmd_mayer(args, rep):
    G = _graph(args.graph)
    res = mayer_log_stab(G, _activities(args, G), args.mmax, method=args.method)
    rep.note("certified", res.valid)
    rep.note("error_radius", res.error_radius)
    rep.columns = ["value", "error_radius", "certified"]
    rep.row(res.value, res.error_radius, res.valid)


def cmd_lnt(args, rep):
    G = _graph(args.G)
    H = _target(args, args.H)
    if args.method == "cluster":
        res = truncated_ln_t(G, H, args.k, args.b, args.D)
        for key in ("K", "epsilon", "c_bar", "D", "k", "m_max"):
            rep.note(key, res.details[key])
        rep.note("valid", res.valid)
        rep.note("error_radius", res.error_radius)
        rep.columns = ["value", "error_radius", "valid"]
        rep.row(res.value, res.error_radius, res.valid)
    elif args.method == "cavity":
        cfg = CavityConfig(args.r, args.samples, args.seed, args.D, args.exact_orderings)
        res = local_estimate_ln_t(G, H, cfg)
        for key in ("kappa", "locality", "monte_carlo", "D", "r"):
            rep.note(key, res.details[key])
        rep.note("error_radius", res.error_radius)
        rep.columns = ["value", "error_radius", "kappa"]
        rep.row(res.value, res.error_radius, res.details["kappa"])
    else:
        rep.columns = ["value"]
        rep.row(log_density(G, H) / G.node_count)


def cmd_balls(args, rep):
    h = histogram(_graph(args.graph), args.r)
    rep.columns = ["encoding", "frequency"]
    for B, freq in h.items():
        rep.row(B.hex(), freq if args.exact else float(freq))


def cmd_ldist(args, rep):
    d = local_distance(_graph(args.g1), _graph(args.g2), args.r)
    rep.row(d if args.exact else float(d))


def cmd_invert(args, rep):
    G = _graph(args.G)
    delta = None if args.delta is None else (Fraction(args.delta) if args.exact else float(args.delta))
    system = inversion_system(args.m, args.q, delta=delta, method=args.method)
    res = recover_counts(G, system)
    rep.note("condition", system.condition)
    rep.note("residual_scale", res.residual_scale)
    rep.columns = ["F_i", "recovered", "exact", "abs_error"]
    for F, name, est in zip(system.family.members, system.family.names(), res.estimates):
        exact = subgraph_copies(F, G)
        rep.row(name, est, exact, abs(est - exact))


def cmd_grid(args, rep):
    H = _target(args, args.H)
    rep.columns = ["ln_hom_per_node"]
    rep.row(grid_ln_hom(args.kind, args.n, args.m, H))


def _sizes(text: str, m: int | None):
    out = []
    for part in text.split(","):
        part = part.strip().lower()
        if "x" in part:
            a, b = part.split("x")
            out.append((int(a), int(b)))
        elif m is not None:
            out.append((int(part), m))
        else:
            out.append(int(part))
    return out


def cmd_gridconv(args, rep):
    H = _target(args, args.H)
    res = convergence_experiment(args.kind, H, _sizes(args.sizes, args.m))
    rep.note("monotone", res.monotone)
    for w in res.warnings:
        rep.note("warning", w)
        print(json.dumps({"warning": w}), file=sys.stderr)
    args.format = "csv"
    rep.columns = ["n", "m", "value", "delta"]
    for r in res.rows:
        rep.row(r.n, r.m, r.value, "" if math.isnan(r.delta) else r.delta)


def cmd_check(args, rep):
    H = _target(args, args.H)
    c = expansion_constants(args.D, H, args.b)
    kappa = locality_constant(H, args.D)
    rep.columns = ["quantity", "value"]
    rep.row("c_bar", float(interaction_norm(complement_weights(H))))
    rep.row("kappa", kappa)
    rep.row("K", c.K)
    rep.row("epsilon", c.epsilon)
    rep.row("cluster_threshold", c.threshold)
    rep.row("cluster_valid", c.valid)
    rep.row("cavity_valid", kappa < 1)


# -- parser ------------------------------------------------------------------------
def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--exact", action="store_true", help="rational arithmetic where supported")
    common.add_argument("--seed", type=int, default=0, help="seed for every random choice (default 0)")
    common.add_argument("--format", choices=("plain", "csv"), default="plain")
    common.add_argument("--quiet", action="store_true", help="omit the '#' report header")
    common.add_argument("--threads", type=int, default=1, help="worker budget (recorded; work runs serially)")
    common.add_argument("--budget", default=None, help="caps, e.g. 'maps=1e6,enum=1e5' (overrides HOMEXP_BUDGET)")

    p = _Parser(prog="homexp", description="Homomorphism partition functions on bounded-degree graphs.")
    p.add_argument("--version", action="version", version=f"homexp {__version__}")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, func, help_text):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        sp.set_defaults(func=func)
        return sp

    sp = add("hom", cmd_hom, "hom(F, G) for a simple or weighted G")
    sp.add_argument("-F", required=True)
    sp.add_argument("-G", required=True)
    sp.add_argument("--method", choices=("elimination", "brute"), default="elimination")

    sp = add("z", cmd_z, "alternating connected-spanning density sum z(G, H)")
    sp.add_argument("-G", required=True)
    sp.add_argument("-H", required=True)

    sp = add("chrom", cmd_chrom, "chromatic polynomial")
    sp.add_argument("graph")
    sp.add_argument("--at", type=int, default=None, help="evaluate at this integer")

    sp = add("crapo", cmd_crapo, "Crapo invariant (weighted for wgraph files)")
    sp.add_argument("graph")

    sp = add("treesum", cmd_treesum, "spanning-tree count or weighted tree sum")
    sp.add_argument("graph")

    sp = add("enum", cmd_enum, "enumerate a subgraph family")
    sp.add_argument("graph")
    sp.add_argument("--kind", required=True, type=str, help="one of " + ", ".join(KINDS))
    sp.add_argument("--max-nodes", type=int, required=True)
    sp.add_argument("--count", action="store_true", help="print only the number of members")

    sp = add("stab", cmd_stab, "multivariate stable-set polynomial")
    sp.add_argument("graph")
    sp.add_argument("--x", required=True, help="activity vector file")

    sp = add("mayer", cmd_mayer, "truncated Mayer series of ln stab with tail radius")
    sp.add_argument("graph")
    sp.add_argument("--x", required=True, help="activity vector file")
    sp.add_argument("--mmax", type=int, required=True)
    sp.add_argument("--method", choices=("series", "terms"), default="series")

    sp = add("lnt", cmd_lnt, "per-node ln t(G, H)")
    sp.add_argument("-G", required=True)
    sp.add_argument("-H", required=True)
    sp.add_argument("--method", choices=("cluster", "cavity", "exact"), default="cluster")
    sp.add_argument("-k", type=int, default=4, help="largest type size (cluster)")
    sp.add_argument("-b", type=float, default=DEFAULT_B, help="Dobrushin weight scale (cluster)")
    sp.add_argument("-r", type=int, default=3, help="ball radius (cavity)")
    sp.add_argument("--samples", type=int, default=200, help="orderings per ball class (cavity)")
    sp.add_argument("--exact-orderings", action="store_true", help="enumerate orderings (cavity)")
    sp.add_argument("-D", type=int, default=None, help="degree bound (default: max degree of G)")

    sp = add("balls", cmd_balls, "radius-r ball histogram")
    sp.add_argument("graph")
    sp.add_argument("-r", type=int, required=True)

    sp = add("ldist", cmd_ldist, "local distance between two graphs")
    sp.add_argument("g1")
    sp.add_argument("g2")
    sp.add_argument("-r", type=int, required=True)

    sp = add("invert", cmd_invert, "recover subgraph counts from partition functions")
    sp.add_argument("-m", type=int, required=True)
    sp.add_argument("-q", type=int, required=True)
    sp.add_argument("-G", required=True)
    sp.add_argument("--delta", default=None, help="replace zero weights by 1 - delta")
    sp.add_argument("--method", choices=("series", "exact"), default="series")

    sp = add("grid", cmd_grid, "ln hom per node of a grid")
    sp.add_argument("--kind", choices=GRID_KINDS, required=True)
    sp.add_argument("-n", type=int, required=True)
    sp.add_argument("-m", type=int, required=True)
    sp.add_argument("-H", required=True)

    sp = add("gridconv", cmd_gridconv, "convergence table (CSV) over grid sizes")
    sp.add_argument("--kind", choices=GRID_KINDS, required=True)
    sp.add_argument("-H", required=True)
    sp.add_argument("--sizes", required=True, help="comma list: N, or NxM")
    sp.add_argument("-m", type=int, default=None, help="fixed column length for plain N entries")

    sp = add("check", cmd_check, "expansion and locality conditions for H at degree D")
    sp.add_argument("-H", required=True)
    sp.add_argument("-D", type=int, required=True)
    sp.add_argument("-b", type=float, default=DEFAULT_B)
    return p


def _error(kind: str, message: str, code: int, **extra) -> int:
    print(json.dumps({"error": kind, "message": message, "exit_code": code, **extra}), file=sys.stderr)
    return code


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        return _error("usage", str(exc), EXIT_USAGE)
    if getattr(args, "func", None) is None:
        parser.print_usage(sys.stderr)
        return _error("usage", "a subcommand is required", EXIT_USAGE)
    try:
        budget = parse_budget(args.budget, get_budget()) if args.budget else get_budget()
        with use_budget(budget):
            rep = Report(args, args.command)
            args.func(args, rep)
            sys.stdout.write(rep.render())
    except ResourceError as exc:
        return _error("resource", str(exc), EXIT_RESOURCE, cap=exc.cap_name, limit=exc.cap)
    except InternalConsistencyError as exc:
        return _error("internal", str(exc), EXIT_INTERNAL)
    except (PreconditionError, ValueError, OSError) as exc:
        return _error("precondition", str(exc), EXIT_PRECONDITION)
    return 0


if __name__ == "__main__":
    sys.exit(main())
