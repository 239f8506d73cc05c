"""Open (D+1)-coloured graphs, the boundary map and Feynman-graph membership."""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field

from .cli_io import render_class
from .graph_core import (ColouredGraph, DisconnectedGraph, bar, canonical_form,
                         components, empty_graph, inverse, is_connected)

__all__ = ["OpenGraph", "ModelVertexSet", "melonic_quartic", "simple_v1_model", "vertex_V",
           "boundary", "is_feynman", "cone", "realize_boundary", "parse_open", "render_open"]


@dataclass(frozen=True)
class OpenGraph:
    """Internal part ``tau`` (D permutations of 1..n) plus colour-0 data.

    ``zero_w[i-1]`` is ``("b", j)`` or ``("ext", e)`` for internal white ``i``;
    ``zero_b[j-1]`` likewise with ``("w", i)``.  External legs are labelled
    ``1..2m``; a leg glued to an internal white is a black boundary vertex.
    """
    D: int
    n: int
    tau: tuple
    zero_w: tuple
    zero_b: tuple

    def __post_init__(self):
        tau = tuple(tuple(p) for p in self.tau)
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "zero_w", tuple(tuple(z) for z in self.zero_w))
        object.__setattr__(self, "zero_b", tuple(tuple(z) for z in self.zero_b))
        if len(tau) != self.D or any(sorted(p) != list(range(1, self.n + 1)) for p in tau):
            raise ValueError("internal colours must be bijections of 1..n")
        for i, z in enumerate(self.zero_w, 1):
            if z[0] == "b" and self.zero_b[z[1] - 1] != ("w", i):
                raise ValueError(f"colour-0 edge at w{i} is not symmetric")
        legs = self.legs()
        if sorted(legs) != list(range(1, len(legs) + 1)):
            raise ValueError("external legs must be labelled 1..2m")
        if sum(1 for v in legs.values() if v[0] == "w") * 2 != len(legs):
            raise ValueError("white-type and black-type legs must be equinumerous")

    def legs(self):
        """Leg label -> internal vertex it is glued to."""
        out = {}
        for i, z in enumerate(self.zero_w, 1):
            if z[0] == "ext":
                out[z[1]] = ("w", i)
        for j, z in enumerate(self.zero_b, 1):
            if z[0] == "ext":
                out[z[1]] = ("b", j)
        return out

    def internal(self):
        return ColouredGraph(self.D, self.n, self.tau)


@dataclass(frozen=True)
class ModelVertexSet:
    D: int
    vertices: tuple = field(default_factory=tuple)

    def __post_init__(self):
        keys = [canonical_form(v) for v in self.vertices]
        if len(set(keys)) != len(keys):
            raise ValueError("interaction vertices must be pairwise non-isomorphic")


def vertex_V(D, a):
    """Melonic quartic vertex: colour ``a`` crosses, the rest run parallel."""
    return ColouredGraph(D, 2, tuple((2, 1) if c == a else (1, 2) for c in range(1, D + 1)))


def melonic_quartic(D):
    return ModelVertexSet(D, tuple(vertex_V(D, a) for a in range(1, D + 1)))


def simple_v1_model():
    return ModelVertexSet(3, (vertex_V(3, 1),))


def boundary(g):
    """Closed boundary graph read off the (0a)-bicoloured paths between legs."""
    legs = g.legs()
    # boundary whites: legs glued to internal blacks; blacks: legs glued to whites
    whites = sorted(e for e, v in legs.items() if v[0] == "b")
    blacks = sorted(e for e, v in legs.items() if v[0] == "w")
    if not whites:
        return DisconnectedGraph((), (), g.D)
    bpos = {e: i + 1 for i, e in enumerate(blacks)}
    inv = [inverse(p) for p in g.tau]
    tau = []
    for a in range(g.D):
        row = []
        for e in whites:
            b = legs[e][1]
            for _ in range(2 * g.n + 2):
                w = inv[a][b - 1]
                z = g.zero_w[w - 1]
                if z[0] == "ext":
                    row.append(bpos[z[1]])
                    break
                b = z[1]
            else:
                raise ValueError(f"(0,{a + 1})-path from leg {e} does not end at a leg")
        tau.append(tuple(row))
    return components(ColouredGraph(g.D, len(whites), tuple(tau)))


def is_feynman(g, model):
    """Every component of the amputated, 0-deleted graph lies in the vertex set."""
    if g.n == 0:
        return False
    allowed = {canonical_form(v) for v in model.vertices}
    parts = components(g.internal())
    return all(canonical_form(c) in allowed for c in parts.components)


def cone(B):
    """One leg on every vertex of a copy of ``bar(B)``, so that ``boundary(cone(B)) = B``."""
    if isinstance(B, DisconnectedGraph):
        B = B.to_graph()
    inner = bar(B)
    k = B.k
    # internal black j of inner is white j of B: its leg is a boundary white, label j
    zero_b = tuple(("ext", j) for j in range(1, k + 1))
    zero_w = tuple(("ext", k + i) for i in range(1, k + 1))
    return OpenGraph(B.D, k, inner.tau, zero_w, zero_b)


# -- realisation by bounded search ------------------------------------------------

def _free_union(vertices):
    D = vertices[0].D
    tau = [[] for _ in range(D)]
    off = 0
    for v in vertices:
        for c in range(D):
            tau[c].extend(off + x for x in v.tau[c])
        off += v.k
    return [tuple(t) for t in tau], off


def _join(tau, n, D, pairs):
    """Open graph on ``tau`` with 0-edges ``w_i - b_j`` for ``(i, j)`` in pairs, legs elsewhere."""
    zero_w = [None] * n
    zero_b = [None] * n
    for i, j in pairs:
        zero_w[i - 1] = ("b", j)
        zero_b[j - 1] = ("w", i)
    label = 1
    for j in range(1, n + 1):
        if zero_b[j - 1] is None:
            zero_b[j - 1] = ("ext", label)
            label += 1
    for i in range(1, n + 1):
        if zero_w[i - 1] is None:
            zero_w[i - 1] = ("ext", label)
            label += 1
    return OpenGraph(D, n, tau, zero_w, zero_b)


def _connected_open(g):
    parent = {}

    def find(x):
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        parent[find(x)] = find(y)

    for c in range(g.D):
        for i in range(1, g.n + 1):
            union(("w", i), ("b", g.tau[c][i - 1]))
    for i, z in enumerate(g.zero_w, 1):
        if z[0] == "b":
            union(("w", i), ("b", z[1]))
    return len({find(("w", i)) for i in range(1, g.n + 1)}) == 1


def realize_boundary(B, model, max_vertices=4):
    """Search small Feynman graphs of ``model`` whose boundary is ``B``; None if none found.

    Candidates are disjoint unions of up to ``max_vertices`` interaction
    vertices with some white/black slots joined by propagators.
    """
    target = render_class(B)
    k = B.k
    verts = list(model.vertices)
    for nv in range(1, max_vertices + 1):
        for combo in itertools.combinations_with_replacement(range(len(verts)), nv):
            tau, n = _free_union([verts[i] for i in combo])
            joins = n - k
            if joins < 0:
                continue
            for ws in itertools.combinations(range(1, n + 1), joins):
                for bs in itertools.permutations(range(1, n + 1), joins):
                    g = _join(tau, n, model.D, list(zip(ws, bs)))
                    if not _connected_open(g):
                        continue
                    if render_class(boundary(g)) == target:
                        return g
    return None


# -- text format ---------------------------------------------------------------------

def render_open(g):
    legs = g.legs()
    lines = [f"open{{D={g.D},n={g.n},legs={len(legs)}}}"]
    for c in range(g.D):
        for i in range(1, g.n + 1):
            lines.append(f"{c + 1} w{i} b{g.tau[c][i - 1]}")
    for i, z in enumerate(g.zero_w, 1):
        dst = f"b{z[1]}" if z[0] == "b" else f"ext{z[1]}"
        lines.append(f"0 w{i} {dst}")
    for j, z in enumerate(g.zero_b, 1):
        if z[0] == "ext":
            lines.append(f"0 ext{z[1]} b{j}")
    return "\n".join(lines) + "\n"


_HDR = re.compile(r"open\{D=(\d+),n=(\d+),legs=(\d+)\}")
_VID = re.compile(r"(w|b|ext)(\d+)$")


def parse_open(text):
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    m = _HDR.fullmatch(lines[0]) if lines else None
    if not m:
        raise ValueError("expected header open{D=..,n=..,legs=..}")
    D, n, nlegs = (int(x) for x in m.groups())
    tau = [[None] * n for _ in range(D)]
    zero_w, zero_b = [None] * n, [None] * n
    for ln_no, ln in enumerate(lines[1:], 2):
        parts = ln.split()
        if len(parts) != 3:
            raise ValueError(f"line {ln_no}: expected 'colour src dst'")
        c = int(parts[0])
        ends = []
        for tok in parts[1:]:
            mm = _VID.match(tok)
            if not mm:
                raise ValueError(f"line {ln_no}: bad vertex id {tok!r}")
            ends.append((mm.group(1), int(mm.group(2))))
        kinds = {e[0] for e in ends}
        if c == 0:
            w = next((e for e in ends if e[0] == "w"), None)
            b = next((e for e in ends if e[0] == "b"), None)
            x = next((e for e in ends if e[0] == "ext"), None)
            if w and b:
                zero_w[w[1] - 1] = ("b", b[1])
                zero_b[b[1] - 1] = ("w", w[1])
            elif w and x:
                zero_w[w[1] - 1] = ("ext", x[1])
            elif b and x:
                zero_b[b[1] - 1] = ("ext", x[1])
            else:
                raise ValueError(f"line {ln_no}: invalid colour-0 edge")
        else:
            if kinds != {"w", "b"}:
                raise ValueError(f"line {ln_no}: colour {c} edges join w and b")
            w = next(e for e in ends if e[0] == "w")
            b = next(e for e in ends if e[0] == "b")
            tau[c - 1][w[1] - 1] = b[1]
    if any(v is None for row in tau for v in row) or None in zero_w or None in zero_b:
        raise ValueError("every internal vertex needs one edge of each colour 0..D")
    g = OpenGraph(D, n, tuple(tuple(r) for r in tau), tuple(zero_w), tuple(zero_b))
    if len(g.legs()) != nlegs:
        raise ValueError(f"header announces {nlegs} legs, found {len(g.legs())}")
    return g
