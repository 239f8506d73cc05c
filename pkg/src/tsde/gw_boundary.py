"""Boundary graphs of the complex Gurau-Witten model at small sizes.

A boundary vertex is a triangle carrying a colour ``A`` in
``O = {0,1,2,3, ~0,~1,~2,~3}``; ``p(A)`` forgets the bar.  A vertex with
``p(A) = a`` has one half-edge for each bicolour ``{a, i}``, ``i != a``.
Edges join half-edges with equal bicolour; when both ends have the same
projected colour they must be conjugate (``A = ~B``).

Colours are encoded as ``(a, bar)`` with ``bar`` in ``{0, 1}``.
"""
from __future__ import annotations

import itertools
import json
from collections import Counter
from dataclasses import dataclass

__all__ = ["GwGraph", "enumerate_gw_boundaries", "admissible_edge", "check_gw", "family",
           "conjugate", "render_gw", "gw_census"]

COLOURS = tuple((a, b) for b in (0, 1) for a in range(4))
PAIRS = tuple(itertools.combinations(range(4), 2))


def colour_str(A):
    return ("~" if A[1] else "") + str(A[0])


def admissible_edge(A, B, label):
    """Whether colours ``A``, ``B`` may be joined by an edge with bicolour ``label``."""
    a, b = A[0], B[0]
    label = tuple(sorted(label))
    if a == b:
        return A[1] != B[1] and a in label
    return label == tuple(sorted((a, b)))


@dataclass(frozen=True)
class GwGraph:
    """``colours[v]`` for each vertex; ``edges`` sorted ``(u, v, label)`` with ``u <= v``."""
    colours: tuple
    edges: tuple

    @property
    def size(self):
        return len(self.colours)

    def kappa(self):
        return Counter(self.colours)

    def components(self):
        parent = list(range(self.size))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x
        for u, v, _ in self.edges:
            parent[find(u)] = find(v)
        return len({find(v) for v in range(self.size)})

    def is_connected(self):
        return self.components() == 1


def check_gw(g: GwGraph):
    """Re-verify the edge and degree rules from scratch; returns a list of problems."""
    bad = []
    seen = Counter()
    for u, v, lab in g.edges:
        if u == v:
            bad.append(f"loop at {u}")
        if not admissible_edge(g.colours[u], g.colours[v], lab):
            bad.append(f"edge {u}-{v} {lab} not admissible")
        seen[(u, lab)] += 1
        seen[(v, lab)] += 1
    for v, A in enumerate(g.colours):
        for i in range(4):
            if i == A[0]:
                continue
            lab = tuple(sorted((A[0], i)))
            if seen[(v, lab)] != 1:
                bad.append(f"vertex {v} has {seen[(v, lab)]} edges of bicolour {lab}")
    return bad


def _canonical(colours, edges):
    n = len(colours)
    best = None
    # only colour-preserving relabellings that sort vertices by colour
    order = sorted(range(n), key=lambda v: colours[v])
    groups = [list(grp) for _, grp in itertools.groupby(order, key=lambda v: colours[v])]
    for choice in itertools.product(*(itertools.permutations(grp) for grp in groups)):
        perm = {}
        for v in itertools.chain.from_iterable(choice):
            perm[v] = len(perm)
        new = tuple(sorted((min(perm[u], perm[v]), max(perm[u], perm[v]), lab)
                           for u, v, lab in edges))
        if best is None or new < best:
            best = new
    cols = tuple(sorted(colours))
    return GwGraph(cols, best)


def _matchings(items, ok):
    """Perfect matchings of ``items`` using only pairs accepted by ``ok``."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for j, other in enumerate(rest):
        if ok(first, other):
            for m in _matchings(rest[:j] + rest[j + 1:], ok):
                yield [(first, other)] + m


def _graphs_for(colours):
    # half-edges grouped by bicolour
    per_label = []
    for lab in PAIRS:
        ends = [v for v, A in enumerate(colours) if A[0] in lab]
        per_label.append((lab, ends))
    options = []
    for lab, ends in per_label:
        if len(ends) % 2:
            return
        ok = lambda u, v, lab=lab: admissible_edge(colours[u], colours[v], lab)
        opts = list(_matchings(ends, ok))
        if not opts:
            return
        options.append([[(min(u, v), max(u, v), lab) for u, v in m] for m in opts])
    for pick in itertools.product(*options):
        yield [e for part in pick for e in part]


def enumerate_gw_boundaries(points, connected=None):
    """All boundary graphs with ``points`` vertices, one per isomorphism class.

    ``connected=True``/``False`` filters; the default keeps both.  Only
    ``points`` in {2, 4} is supported.
    """
    if points not in (2, 4):
        raise ValueError(f"GW boundary census supports 2 or 4 points, got {points}")
    found = set()
    for cols in itertools.combinations_with_replacement(COLOURS, points):
        for edges in _graphs_for(cols):
            g = _canonical(cols, edges)
            if connected is not None and g.is_connected() != connected:
                continue
            found.add(g)
    return sorted(found, key=lambda g: (not g.is_connected(), g.colours, g.edges))


def conjugate(g: GwGraph):
    cols = tuple((a, 1 - b) for a, b in g.colours)
    return _canonical(cols, g.edges)


def family(g: GwGraph):
    """Name of the family a 2- or 4-point graph belongs to."""
    kap = g.kappa()
    proj = Counter(a for a, _ in g.colours)
    if g.size == 2:
        return "two-point"
    if len(proj) == 1:
        return "unbroken" if g.is_connected() else "broken"
    if len(proj) == 2 and all(kap[(a, 0)] == kap[(a, 1)] == 1 for a in proj):
        return "mixed" if g.is_connected() else "mixed-disconnected"
    if len(proj) == 4:
        bars = {b for _, b in g.colours}
        return "exceptional" if len(bars) == 1 else "exceptional-mixed-bars"
    return "other"


def render_gw(g: GwGraph):
    cols = ",".join(colour_str(A) for A in g.colours)
    edges = ",".join(f"{u}-{v}:{lab[0]}{lab[1]}" for u, v, lab in g.edges)
    return f"gw[{cols}|{edges}]"


def gw_census(points):
    rows = []
    for g in enumerate_gw_boundaries(points):
        rows.append({"graph": render_gw(g), "connected": g.is_connected(), "family": family(g),
                     "kappa": {colour_str(A): n for A, n in sorted(g.kappa().items())}})
    return {"points": points, "count": len(rows),
            "families": dict(sorted(Counter(r["family"] for r in rows).items())), "classes": rows}


if __name__ == "__main__":  # pragma: no cover
    print(json.dumps(gw_census(4)["families"], indent=1))
