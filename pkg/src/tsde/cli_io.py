"""Text formats: graph strings, open-graph files, fixtures and JSON schemas."""
from __future__ import annotations

import json
import re
from importlib import resources
from pathlib import Path

from .graph_core import ColouredGraph, DisconnectedGraph, canonical_form, components

__all__ = ["GraphSyntaxError", "parse_graph", "render_graph", "render_class",
           "load_schema", "validate", "fixture_dir", "load_fixtures"]


class GraphSyntaxError(ValueError):
    def __init__(self, msg, offset):
        super().__init__(f"{msg} (at byte {offset})")
        self.offset = offset


_HEAD = re.compile(r"g\{D=(\d+),k=(\d+)\}\[")


def _render_one(g):
    body = "|".join(",".join(str(v) for v in p) for p in g.tau)
    return f"g{{D={g.D},k={g.k}}}[{body}]"


def _order_key(g):
    return (g.k, _render_one(g))


def render_graph(g):
    """Render a graph; disconnected inputs become canonical components joined by ``+``.

    >>> render_graph(ColouredGraph(3, 1, ((1,), (1,), (1,))))
    'g{D=3,k=1}[1|1|1]'
    """
    if isinstance(g, DisconnectedGraph):
        comps = sorted((canonical_form(c) for c in g.components), key=_order_key)
        if not comps:
            return _render_one(ColouredGraph(g.D, 0, ((),) * g.D))
        return "+".join(_render_one(c) for c in comps)
    return _render_one(g)


def render_class(g):
    """Canonical string of the isomorphism class of ``g`` (components split)."""
    if isinstance(g, ColouredGraph):
        if g.k == 0:
            return _render_one(g)
        g = components(g)
    return render_graph(g)


def _parse_one(text, pos):
    m = _HEAD.match(text, pos)
    if not m:
        raise GraphSyntaxError("expected 'g{D=<D>,k=<k>}['", pos)
    D, k = int(m.group(1)), int(m.group(2))
    pos = m.end()
    end = text.find("]", pos)
    if end < 0:
        raise GraphSyntaxError("missing ']'", len(text))
    parts = text[pos:end].split("|")
    if len(parts) != D:
        raise GraphSyntaxError(f"expected {D} permutations, found {len(parts)}", pos)
    tau, off = [], pos
    for c, part in enumerate(parts, 1):
        try:
            imgs = [int(v) for v in part.split(",")] if part else []
        except ValueError:
            raise GraphSyntaxError(f"colour {c}: non-integer image", off) from None
        if sorted(imgs) != list(range(1, k + 1)):
            raise GraphSyntaxError(f"colour {c}: {imgs} is not a bijection of 1..{k}", off)
        tau.append(tuple(imgs))
        off += len(part) + 1
    return ColouredGraph(D, k, tuple(tau)), end + 1


def parse_graph(text):
    """Parse ``g{D=..,k=..}[..|..]`` possibly joined by ``+``.

    A single component gives a ColouredGraph, several give a DisconnectedGraph
    with whites numbered component by component.
    """
    text = text.strip()
    graphs, pos = [], 0
    while True:
        g, pos = _parse_one(text, pos)
        graphs.append(g)
        if pos == len(text):
            break
        if text[pos] != "+":
            raise GraphSyntaxError("expected '+' or end of input", pos)
        pos += 1
    if len(graphs) == 1:
        return graphs[0]
    if len({g.D for g in graphs}) != 1:
        raise GraphSyntaxError("components of different rank", 0)
    order = [(n, j) for n, g in enumerate(graphs) for j in range(1, g.k + 1)]
    return DisconnectedGraph(tuple(graphs), tuple(order), graphs[0].D)


# -- schemas and fixtures ----------------------------------------------------

def load_schema(name):
    with resources.files("tsde.schemas").joinpath(f"{name}.schema.json").open() as fh:
        return json.load(fh)


def validate(payload, name):
    import jsonschema
    jsonschema.validate(payload, load_schema(name))


def fixture_dir():
    return Path(str(resources.files("tsde.fixtures"))) / "paper"


def load_fixtures(kind=None):
    out = []
    for p in sorted(fixture_dir().glob("*.json")):
        data = json.loads(p.read_text())
        if kind is None or data.get("kind") == kind:
            data["_path"] = str(p)
            out.append(data)
    return out
