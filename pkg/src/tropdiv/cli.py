"""Command-line interface.

JSON results go to stdout, a short human summary to stderr.  Exit codes:
0 success, 1 domain error (valid inputs, impossible request), 2 validation
error (malformed inputs).  Rationals are lowest-terms strings and divisors
sorted lists, so outputs diff stably; `--manifest` records inputs, seed and
an output digest so a run can be reproduced byte for byte.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from fractions import Fraction

from . import __version__
from .breakdiv import break_representative, enumerate_integral_break_divisors, is_universally_reduced, simple_break_rank_law
from .chain import ChainOfLoops, adjoint_tableau, classify_divisor, count_cells, enumerate_cells, is_generic, rank_consistency
from .divisors import Divisor, canonical_divisor, chip_fire, weighted_canonical
from .fixtures import registry, run_fixtures
from .graphs import GraphError, MetricGraph
from .io import (
    divisor_from_json,
    divisor_to_json,
    frac_str,
    graph_to_json,
    load_graph,
    parse_divisor_arg,
    parse_frac,
    plfunction_from_json,
    plfunction_to_json,
    point_from_json,
    point_to_json,
)
from .jacobian import abel_jacobi, jacobian_structure, period_gram, spanning_tree_count, tree_polynomial, zhang_measure
from .rank import (
    brill_noether_rank,
    clifford_index,
    gonality,
    is_weierstrass_point,
    midpoint_grid,
    rank,
    riemann_roch_check,
    weighted_rank,
)
from .reduction import PreconditionError, dhar_unburnt, is_equivalent, reduce_divisor


class _DomainError(Exception):
    pass


def _sha256_file(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        h.update(fh.read())
    return h.hexdigest()


def _load_divisor(spec: str, g: MetricGraph) -> Divisor:
    if spec.startswith("@"):
        with open(spec[1:]) as fh:
            return divisor_from_json(json.load(fh), g)
    return parse_divisor_arg(spec, g)


def _parse_point(spec: str, g: MetricGraph):
    if "@" in spec:
        eid, _, off = spec.partition("@")
        return g.point_on(eid, parse_frac(off))
    return g.point(spec)


def _grid(name: str, g: MetricGraph):
    if name == "vertices":
        return [g.point(v) for v in g.model.vertices]
    if name == "midpoints":
        return midpoint_grid(g)
    raise GraphError(f"unknown grid {name!r}; use vertices or midpoints")


def _point_str(p) -> str:
    return p.where if p.kind == "v" else f"{p.where}@{frac_str(p.offset)}"


def _divisor_str(d: Divisor) -> str:
    host = d.host
    order = host.point_sort_key if isinstance(host, MetricGraph) else (
        lambda p: host.vertex_index(p.where))
    items = sorted(d.items(), key=lambda kv: order(kv[0]))
    return ",".join(f"{_point_str(p)}:{n}" for p, n in items) or "0"


# ---------------------------------------------------------------------------
# subcommand handlers: each returns (payload dict, summary string)
# ---------------------------------------------------------------------------


def cmd_genus(args):
    g = load_graph(args.graph)
    out = {"genus": g.genus(), "weighted_genus": g.weighted_genus()}
    return out, f"genus {out['genus']} (weighted {out['weighted_genus']})"


def cmd_canonical(args):
    g = load_graph(args.graph)
    K = weighted_canonical(g) if args.weighted else canonical_divisor(g)
    return {"divisor": divisor_to_json(K), "degree": K.degree()}, f"degree {K.degree()}"


def cmd_reduce(args):
    g = load_graph(args.graph)
    d = _load_divisor(args.divisor, g)
    q = _parse_point(args.at, g)
    red, w = reduce_divisor(g, d, q)
    payload = {
        "reduced": divisor_to_json(red),
        "witness": plfunction_to_json(w) if hasattr(w, "values") else {"vertex_function": w},
    }
    return payload, f"reduced: {_divisor_str(red)}"


def cmd_equiv(args):
    g = load_graph(args.graph)
    d1 = _load_divisor(args.divisor, g)
    d2 = _load_divisor(args.divisor2, g)
    eq = is_equivalent(d1, d2)
    return {"equivalent": eq}, "equivalent" if eq else "not equivalent"


def cmd_fire(args):
    g = load_graph(args.graph)
    d = _load_divisor(args.divisor, g)
    fire_set = [v.strip() for v in args.set.split(",") if v.strip()]
    out = chip_fire(g, d, fire_set)
    return {"divisor": divisor_to_json(out)}, f"fired: {_divisor_str(out)}"


def cmd_dhar(args):
    g = load_graph(args.graph)
    d = _load_divisor(args.divisor, g)
    q = _parse_point(args.at, g)
    unburnt = dhar_unburnt(g, d, q)
    pts = sorted(unburnt, key=g.point_sort_key)
    return (
        {"unburnt": [point_to_json(p) for p in pts], "reduced": not pts},
        f"{len(pts)} unburnt point(s)",
    )


def cmd_rank(args):
    g = load_graph(args.graph)
    d = _load_divisor(args.divisor, g)
    host = g.model if args.finite else g
    dd = Divisor(host, {p.where: n for p, n in d.items()}) if args.finite else d
    res = rank(host, dd, witnesses=args.witnesses)
    payload = {"rank": res.rank}
    if res.failing is not None:
        payload["failing"] = divisor_to_json(res.failing)
    if res.witnesses is not None:
        payload["witnesses"] = [
            {"E": divisor_to_json(e), "effective": divisor_to_json(w)} for e, w in res.witnesses
        ]
    return payload, f"rank {res.rank}"


def cmd_rr_check(args):
    g = load_graph(args.graph)
    d = _load_divisor(args.divisor, g)
    ok = riemann_roch_check(g, d)
    return {"holds": ok}, "Riemann-Roch holds" if ok else "RIEMANN-ROCH VIOLATED (bug)"


def cmd_cliff(args):
    g = load_graph(args.graph)
    out = clifford_index(g, _grid(args.grid, g))
    if out is None:
        return {"clifford_index": None, "grid": args.grid}, "no qualifying divisor on this grid"
    val, wit = out
    return (
        {"clifford_index": val, "witness": divisor_to_json(wit), "grid": args.grid},
        f"Clifford index {val} (grid {args.grid})",
    )


def cmd_gonality(args):
    g = load_graph(args.graph)
    out = gonality(g, args.max_degree, _grid(args.grid, g))
    if out is None:
        return (
            {"gonality": None, "max_degree": args.max_degree, "grid": args.grid},
            f"exceeds bound {args.max_degree} on grid {args.grid}",
        )
    deg, wit = out
    return (
        {"gonality": deg, "witness": divisor_to_json(wit), "grid": args.grid},
        f"gonality {deg} (grid {args.grid})",
    )


def cmd_bn_rank(args):
    g = load_graph(args.graph).model
    w = brill_noether_rank(g, args.r, args.d)
    return {"w": w, "r": args.r, "d": args.d}, f"w^{args.r}_{args.d} = {w} (vertex-supported)"


def cmd_weierstrass(args):
    g = load_graph(args.graph)
    if g.genus() < 2:
        raise _DomainError("Weierstrass points need genus >= 2")
    p = _parse_point(args.point, g)
    ok = is_weierstrass_point(g, p)
    return {"weierstrass": ok}, ("is" if ok else "is not") + " a Weierstrass point"


def cmd_jacobian(args):
    g = load_graph(args.graph).model
    j = jacobian_structure(g)
    return (
        {"invariant_factors": list(j.invariant_factors), "order": j.order},
        f"Jac = {j}",
    )


def cmd_trees(args):
    g = load_graph(args.graph).model
    n = spanning_tree_count(g)
    return {"spanning_trees": n}, f"{n} spanning trees (determinant = enumeration)"


def cmd_period_gram(args):
    g = load_graph(args.graph)
    lat = period_gram(g)
    gram = [[frac_str(x) for x in row] for row in lat.gram]
    det = lat.determinant() if lat.gram else Fraction(1)
    payload = {
        "tree_edges": [g.model.edges[k][0] for k in lat.tree],
        "gram": gram,
        "det": frac_str(det),
        "tree_polynomial": frac_str(tree_polynomial(g)),
    }
    return payload, f"genus {g.genus()}, det {frac_str(det)}"


def cmd_abel_jacobi(args):
    g = load_graph(args.graph)
    d = _load_divisor(args.divisor, g)
    if d.degree() != 0:
        raise _DomainError("abel-jacobi needs a degree-0 divisor")
    img = abel_jacobi(g, _parse_point(args.base, g), d)
    payload = {
        "pairing": [frac_str(x) for x in img.pairing],
        "basis_coords": [frac_str(x) for x in img.basis_coords],
        "torus": [frac_str(x) for x in img.torus],
        "in_lattice": img.in_lattice,
    }
    return payload, "principal (lattice point)" if img.in_lattice else "nonzero class"


def cmd_zhang(args):
    g = load_graph(args.graph)
    mu = zhang_measure(g)
    payload = {
        "edge_mass": {e: frac_str(m) for e, m in sorted(mu.edge_mass.items())},
        "atoms": {v: frac_str(a) for v, a in sorted(mu.atoms.items())},
        "total": frac_str(mu.total_mass()),
    }
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write("edge,mass,density\n")
            for e in sorted(mu.edge_mass):
                fh.write(f"{e},{frac_str(mu.edge_mass[e])},{frac_str(mu.density(e))}\n")
            for v in sorted(mu.atoms):
                fh.write(f"atom:{v},{frac_str(mu.atoms[v])},\n")
    return payload, f"total mass {frac_str(mu.total_mass())}"


def cmd_break(args):
    g = load_graph(args.graph)
    model = g.model
    if args.action == "enumerate":
        bd = sorted(enumerate_integral_break_divisors(model, g), key=lambda d: d.key())
        return (
            {"count": len(bd), "divisors": [divisor_to_json(b) for b in bd]},
            f"{len(bd)} integral break divisors",
        )
    if args.action == "rep":
        d = _load_divisor(args.divisor, g)
        dd = Divisor(model, {p.where: n for p, n in d.items()})
        rep, trees = break_representative(model, dd, g)
        return (
            {
                "representative": divisor_to_json(rep),
                "cells": [[model.edges[k][0] for k in t] for t in trees],
            },
            f"representative {_divisor_str(rep)} in {len(trees)} closed cell(s)",
        )
    if args.action == "check":
        d = _load_divisor(args.divisor, g)
        ur = is_universally_reduced(g, d)
        payload = {"universally_reduced": ur}
        if ur:
            payload["rank_law"] = simple_break_rank_law(g, d)
        return payload, ("universally reduced" if ur else "not universally reduced")
    raise GraphError(f"unknown break action {args.action!r}")


def cmd_chain(args):
    c = ChainOfLoops(args.g)
    if args.action == "count":
        n = count_cells(c, args.r, args.d)
        return {"cells": n, "g": args.g, "r": args.r, "d": args.d}, f"{n} cells"
    cells = enumerate_cells(c, args.r, args.d)
    if args.action == "cells":
        payload = {
            "generic": is_generic(c),
            "cells": [
                {
                    "tableau": [list(row) for row in cell.tableau],
                    "dimension": cell.dimension,
                    "positions": [
                        {"loop": k + 1, "state": s[0], **({"ccw": frac_str(s[1])} if s[0] == "fixed" else {})}
                        for k, s in enumerate(cell.positions)
                    ],
                }
                for cell in cells
            ],
        }
        return payload, f"{len(cells)} cells, dimension rho = {cells[0].dimension if cells else 0}"
    if args.action == "sample":
        if not 0 <= args.cell < len(cells):
            raise _DomainError(f"cell index out of range (0..{len(cells) - 1})")
        cell = cells[args.cell]
        d = cell.sample(args.index)
        ok = rank_consistency(c, cell, d)
        return (
            {
                "divisor": divisor_to_json(d),
                "rank_is_r": ok,
                "tableau": [list(row) for row in cell.tableau],
            },
            f"sampled cell {args.cell}: rank {'==' if ok else '!='} {args.r}",
        )
    if args.action == "adjoint":
        if not 0 <= args.cell < len(cells):
            raise _DomainError(f"cell index out of range (0..{len(cells) - 1})")
        cell = cells[args.cell]
        tt = adjoint_tableau(c, cell)
        K = canonical_divisor(c.graph)
        residual = K - cell.sample(args.index)
        matches = classify_divisor(c, residual) == tt if cell.dimension == 0 else None
        payload = {"transpose": [list(r) for r in tt]}
        if matches is not None:
            payload["residual_in_transpose_cell"] = matches
        return payload, "adjoint tableau computed"
    raise GraphError(f"unknown chain action {args.action!r}")


def cmd_tropdep(args):
    g = load_graph(args.graph)
    with open(args.functions) as fh:
        data = json.load(fh)
    from .functions import verify_tropical_dependence

    fs = [plfunction_from_json(rec, g) for rec in data]
    bs = [parse_frac(x) for x in args.shifts.split(",")] if args.shifts else [0] * len(fs)
    dep = verify_tropical_dependence(fs, bs)
    return {"tropically_dependent": dep}, (
        "dependent (minimum attained twice everywhere)" if dep else "not dependent for these shifts"
    )


def cmd_examples(args):
    reg = registry()
    if args.list:
        payload = {fid: f.description for fid, f in reg.items()}
        return {"fixtures": payload}, f"{len(reg)} fixtures"
    only = args.only.split(",") if args.only else None
    try:
        results = run_fixtures(only)
    except KeyError as exc:
        raise GraphError(str(exc)) from None
    payload = {
        "results": [{"id": fid, "passed": ok, **({"error": msg} if msg else {})} for fid, ok, msg in results]
    }
    failed = [fid for fid, ok, _ in results if not ok]
    payload["passed"] = len(results) - len(failed)
    payload["failed"] = failed
    summary = f"{payload['passed']}/{len(results)} fixtures passed"
    if failed:
        raise _FixtureFailure(payload, summary + f"; FAILED: {', '.join(failed)}")
    return payload, summary


class _FixtureFailure(Exception):
    def __init__(self, payload, summary):
        self.payload = payload
        self.summary = summary


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tropdiv", description=__doc__)
    ap.add_argument("--seed", type=int, default=0, help="seed recorded in the manifest")
    ap.add_argument("--manifest", help="write a reproduction manifest to this file")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, **kw):
        p = sub.add_parser(name, **kw)
        p.set_defaults(fn=fn)
        return p

    def with_graph(p):
        p.add_argument("--graph", required=True, help="graph JSON file")
        return p

    with_graph(add("genus", cmd_genus, help="genus of a graph"))
    p = with_graph(add("canonical", cmd_canonical, help="canonical divisor"))
    p.add_argument("--weighted", action="store_true")
    p = with_graph(add("reduce", cmd_reduce, help="q-reduced representative"))
    p.add_argument("--divisor", required=True)
    p.add_argument("--at", required=True, help="base point (vertex or e@off)")
    p = with_graph(add("equiv", cmd_equiv, help="linear equivalence test"))
    p.add_argument("--divisor", required=True)
    p.add_argument("--divisor2", required=True)
    p = with_graph(add("fire", cmd_fire, help="fire a vertex set once"))
    p.add_argument("--divisor", required=True)
    p.add_argument("--set", required=True, help="comma-separated vertices")
    p = with_graph(add("dhar", cmd_dhar, help="unburnt set of Dhar's algorithm"))
    p.add_argument("--divisor", required=True)
    p.add_argument("--at", required=True)
    p = with_graph(add("rank", cmd_rank, help="divisor rank"))
    p.add_argument("--divisor", required=True)
    p.add_argument("--finite", action="store_true", help="Baker-Norine rank on the model")
    p.add_argument("--witnesses", action="store_true")
    p = with_graph(add("rr-check", cmd_rr_check, help="Riemann-Roch identity"))
    p.add_argument("--divisor", required=True)
    p = with_graph(add("cliff", cmd_cliff, help="Clifford index (grid search)"))
    p.add_argument("--grid", default="vertices", choices=["vertices", "midpoints"])
    p = with_graph(add("gonality", cmd_gonality, help="gonality (grid search)"))
    p.add_argument("--max-degree", type=int, required=True)
    p.add_argument("--grid", default="vertices", choices=["vertices", "midpoints"])
    p = with_graph(add("bn-rank", cmd_bn_rank, help="Brill-Noether rank (finite)"))
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p = with_graph(add("weierstrass", cmd_weierstrass, help="Weierstrass point test"))
    p.add_argument("--point", required=True)
    with_graph(add("jacobian", cmd_jacobian, help="sandpile group structure"))
    with_graph(add("trees", cmd_trees, help="spanning tree count, two ways"))
    with_graph(add("period-gram", cmd_period_gram, help="cycle Gram matrix"))
    p = with_graph(add("abel-jacobi", cmd_abel_jacobi, help="tropical Abel-Jacobi image"))
    p.add_argument("--base", required=True)
    p.add_argument("--divisor", required=True)
    p = with_graph(add("zhang", cmd_zhang, help="Zhang measure"))
    p.add_argument("--csv", help="also write edge masses as CSV")
    p = with_graph(add("break", cmd_break, help="break divisors"))
    p.add_argument("action", choices=["enumerate", "rep", "check"])
    p.add_argument("--divisor")
    p = add("chain", cmd_chain, help="generic chain of loops cells")
    p.add_argument("action", choices=["cells", "count", "sample", "adjoint"])
    p.add_argument("--g", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--cell", type=int, default=0)
    p.add_argument("--index", type=int, default=0)
    p = with_graph(add("tropdep", cmd_tropdep, help="tropical dependence verifier"))
    p.add_argument("--functions", required=True, help="JSON file: list of PL functions")
    p.add_argument("--shifts", help="comma-separated rationals")
    p = add("examples", cmd_examples, help="run the worked-example fixtures")
    p.add_argument("--only", help="comma-separated fixture ids")
    p.add_argument("--list", action="store_true")

    return ap


def _emit(args, payload: dict, summary: str) -> str:
    text = json.dumps(payload, indent=2, sort_keys=True)
    sys.stdout.write(text + "\n")
    sys.stderr.write(summary + "\n")
    if args.manifest:
        inputs = {}
        for attr in ("graph", "functions"):
            path = getattr(args, attr, None)
            if path:
                inputs[path] = _sha256_file(path)
        for attr in ("divisor", "divisor2"):
            spec = getattr(args, attr, None)
            if spec and spec.startswith("@"):
                inputs[spec[1:]] = _sha256_file(spec[1:])
        manifest = {
            "tool": "tropdiv",
            "version": __version__,
            "command": args.command,
            "argv": sys.argv[1:],
            "inputs": inputs,
            "seed": args.seed,
            "output_sha256": hashlib.sha256(text.encode()).hexdigest(),
        }
        with open(args.manifest, "w") as fh:
            json.dump(manifest, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return text


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        payload, summary = args.fn(args)
    except _FixtureFailure as exc:
        _emit(args, exc.payload, exc.summary)
        return 1
    except (_DomainError, PreconditionError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    except (GraphError, OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        sys.stderr.write(f"invalid input: {exc}\n")
        return 2
    _emit(args, payload, summary)
    return 0


if __name__ == "__main__":
    sys.exit(main())
