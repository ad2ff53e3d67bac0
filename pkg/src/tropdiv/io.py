"""JSON formats for graphs, divisors and PL functions.

Graph format:
    {"vertices": [{"id": "v1", "weight": 0}, ...],
     "edges": [{"id": "e1", "ends": ["v1", "v2"], "length": "3/2"}, ...]}
Lengths are lowest-terms "p/q" strings (or "n"); weight is optional and
defaults to 0; a missing length defaults to 1.

Divisor format:
    {"chips": [{"at": "v1", "n": 2},
               {"at": {"edge": "e1", "offset": "1/3"}, "n": -1}]}

PLFunction format:
    {"values": [{"at": ..., "value": "p/q"}, ...]}  (same "at" forms)
"""

from __future__ import annotations

import json
from fractions import Fraction

from .divisors import Divisor
from .functions import PLFunction
from .graphs import FiniteGraph, GraphError, GraphPoint, MetricGraph


def frac_str(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_frac(s) -> Fraction:
    try:
        return Fraction(str(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise GraphError(f"bad rational {s!r}: {exc}") from None


def graph_to_json(g: MetricGraph) -> dict:
    verts = []
    for v in g.model.vertices:
        rec = {"id": v}
        if g.weight(v):
            rec["weight"] = g.weight(v)
        verts.append(rec)
    edges = [
        {"id": eid, "ends": [u, v], "length": frac_str(g.lengths[eid])}
        for eid, u, v in g.model.edges
    ]
    return {"vertices": verts, "edges": edges}


def graph_from_json(data: dict) -> MetricGraph:
    try:
        vrecs = data["vertices"]
        erecs = data["edges"]
    except (KeyError, TypeError):
        raise GraphError("graph JSON needs 'vertices' and 'edges' lists") from None
    vertices = []
    weights = {}
    for k, rec in enumerate(vrecs):
        if "id" not in rec:
            raise GraphError(f"vertex #{k} has no 'id'")
        vertices.append(str(rec["id"]))
        if rec.get("weight"):
            weights[str(rec["id"])] = int(rec["weight"])
    edges = []
    lengths = {}
    for k, rec in enumerate(erecs):
        if "id" not in rec or "ends" not in rec or len(rec["ends"]) != 2:
            raise GraphError(f"edge #{k} needs 'id' and a 2-element 'ends'")
        eid = str(rec["id"])
        edges.append((eid, str(rec["ends"][0]), str(rec["ends"][1])))
        lengths[eid] = parse_frac(rec.get("length", 1))
    return MetricGraph(FiniteGraph(vertices, edges), lengths, weights)


def load_graph(path: str) -> MetricGraph:
    with open(path) as fh:
        return graph_from_json(json.load(fh))


def point_to_json(p: GraphPoint):
    if p.kind == "v":
        return p.where
    return {"edge": p.where, "offset": frac_str(p.offset)}


def point_from_json(data, g: MetricGraph) -> GraphPoint:
    if isinstance(data, str):
        return g.point(data)
    try:
        return g.point_on(str(data["edge"]), parse_frac(data["offset"]))
    except (KeyError, TypeError):
        raise GraphError(f"bad point {data!r}: use a vertex id or {{'edge','offset'}}") from None


def divisor_to_json(d: Divisor) -> dict:
    host = d.host
    order = host.point_sort_key if isinstance(host, MetricGraph) else (
        lambda p: host.vertex_index(p.where)
    )
    chips = [
        {"at": point_to_json(p), "n": n}
        for p, n in sorted(d.items(), key=lambda kv: order(kv[0]))
    ]
    return {"chips": chips}


def divisor_from_json(data: dict, g: MetricGraph) -> Divisor:
    if "chips" not in data:
        raise GraphError("divisor JSON needs a 'chips' list")
    acc: dict[GraphPoint, int] = {}
    for rec in data["chips"]:
        p = point_from_json(rec["at"], g)
        acc[p] = acc.get(p, 0) + int(rec["n"])
    return Divisor(g, acc)


def parse_divisor_arg(text: str, g: MetricGraph) -> Divisor:
    """Compact CLI form: 'v1:1,v2:-2,e1@1/3:1' (':n' defaults to 1)."""
    acc: dict[GraphPoint, int] = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        at, _, num = part.partition(":")
        n = int(num) if num else 1
        if "@" in at:
            eid, _, off = at.partition("@")
            p = g.point_on(eid, parse_frac(off))
        else:
            p = g.point(at)
        acc[p] = acc.get(p, 0) + n
    return Divisor(g, acc)


def plfunction_to_json(f: PLFunction) -> dict:
    order = f.host.point_sort_key
    pts = sorted(f.values, key=order)
    return {"values": [{"at": point_to_json(p), "value": frac_str(f.values[p])} for p in pts]}


def plfunction_from_json(data: dict, g: MetricGraph) -> PLFunction:
    if "values" not in data:
        raise GraphError("PL function JSON needs a 'values' list")
    vals = {point_from_json(rec["at"], g): parse_frac(rec["value"]) for rec in data["values"]}
    return PLFunction(g, vals)
