"""Isomorphism classes of closed coloured graphs and census tables.

Gauge-fixing ``tau[1] = id`` leaves ``(tau[2], .., tau[D])`` up to
simultaneous conjugation; orbits are swept by the kernels in ``_kernels``.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

from . import _kernels
from .cli_io import render_class, render_graph
from .graph_core import (ColouredGraph, DisconnectedGraph, GraphClass, aut_order,
                         aut_order_disconnected, canonical_form, disjoint_union,
                         gurau_degree, identity, is_connected)

__all__ = ["BudgetExceeded", "budget", "orbit_reps", "enumerate_connected", "enumerate_all",
           "burnside_count", "census", "CensusRow", "colour_orbit_size"]

DEFAULT_BUDGET = 10 ** 7


class BudgetExceeded(RuntimeError):
    pass


def budget():
    return int(os.environ.get("TSDE_BUDGET", DEFAULT_BUDGET))


def _check_budget(D, k):
    need = factorial(k) ** max(D - 1, 0)
    if need > budget():
        raise BudgetExceeded(f"enumeration of D={D}, k={k} needs a budget of {need} tuples "
                             f"(current {budget()}; raise TSDE_BUDGET)")


@lru_cache(maxsize=64)
def orbit_reps(D, k, which=None):
    """All classes with 2k vertices as ``(ColouredGraph, aut_order)``, connected or not."""
    if D < 1 or k < 1:
        raise ValueError("need D >= 1 and k >= 1")
    _check_budget(D, k)
    P, conj = _kernels.perm_tables(k)
    n, m = len(P), D - 1
    codes, stabs = _kernels.orbits(conj, m, which)
    out = []
    ident = identity(k)
    for code, st in zip(codes.tolist(), stabs.tolist()):
        digits = _kernels.decode(code, n, m)
        tau = (ident,) + tuple(tuple(int(v) + 1 for v in P[d]) for d in digits)
        out.append((ColouredGraph(D, k, tau), int(st)))
    return tuple(out)


def burnside_count(D, k):
    """``(1/k!) sum_pi |C(pi)|^(D-1)``, with centraliser sizes from cycle types."""
    total = 0
    for pi in itertools.permutations(range(k)):
        lengths, seen = {}, set()
        for i in range(k):
            if i in seen:
                continue
            ln, j = 0, i
            while j not in seen:
                seen.add(j)
                j = pi[j]
                ln += 1
            lengths[ln] = lengths.get(ln, 0) + 1
        cent = 1
        for ln, mult in lengths.items():
            cent *= ln ** mult * factorial(mult)
        total += cent ** (D - 1)
    return Fraction(total, factorial(k))


def _degree_or_none(g):
    return gurau_degree(g) if g.D >= 2 else Fraction(0)


def enumerate_connected(D, k, which=None):
    """One GraphClass per connected class with 2k vertices, sorted by canonical string."""
    if D < 2:
        raise ValueError("need D >= 2")
    out = []
    for g, st in orbit_reps(D, k, which):
        if is_connected(g):
            out.append(GraphClass(g, st, True, _degree_or_none(g)))
    out.sort(key=lambda c: render_graph(c.canonical))
    return out


def _multisets(k, D):
    """Multisets of connected classes with sizes summing to k (as tuples of graphs)."""
    pools = {j: [c.canonical for c in enumerate_connected(D, j)] for j in range(1, k + 1)}
    items = [(j, i) for j in range(1, k + 1) for i in range(len(pools[j]))]

    def rec(start, left):
        if left == 0:
            yield ()
            return
        for n in range(start, len(items)):
            j, i = items[n]
            if j <= left:
                for rest in rec(n, left - j):
                    yield (pools[j][i],) + rest

    return rec(0, k)


def enumerate_all(D, k):
    """All classes with 2k vertices, assembled as multisets of connected classes.

    Returns ``(DisconnectedGraph, aut_order)`` pairs; a connected class is a
    one-component DisconnectedGraph.
    """
    out = []
    for combo in _multisets(k, D):
        g = disjoint_union(*combo)
        out.append((g, aut_order_disconnected(g)))
    out.sort(key=lambda t: render_graph(t[0]))
    return out


def colour_orbit_size(g):
    """Size of the orbit of the class of ``g`` under permutations of the colours."""
    seen = set()
    for perm in itertools.permutations(range(g.D)):
        h = ColouredGraph(g.D, g.k, tuple(g.tau[c] for c in perm))
        seen.add(render_class(h))
    return len(seen)


@dataclass(frozen=True)
class CensusRow:
    rank: int
    vertices: int
    cls: str
    connected: bool
    aut_order: int
    degree: Fraction
    colour_orbit: int

    def as_dict(self):
        d = float(self.degree) if self.degree.denominator != 1 else int(self.degree)
        return {"rank": self.rank, "vertices": self.vertices, "class": self.cls,
                "connected": self.connected, "aut_order": self.aut_order,
                "degree": d, "colour_orbit": self.colour_orbit}


def census(D, k_max, connected_only=False, which=None):
    """Census table for ``k = 1..k_max``; disconnected rows carry summed degrees."""
    rows = []
    for k in range(1, k_max + 1):
        if connected_only:
            for c in enumerate_connected(D, k, which):
                rows.append(CensusRow(D, 2 * k, render_graph(c.canonical), True, c.aut_order,
                                      c.degree, colour_orbit_size(c.canonical)))
        else:
            for g, st in orbit_reps(D, k, which):
                from .graph_core import components
                parts = components(g)
                deg = sum((_degree_or_none(c) for c in parts.components), Fraction(0))
                rows.append(CensusRow(D, 2 * k, render_class(g), len(parts.components) == 1,
                                      st, deg, colour_orbit_size(g)))
    rows.sort(key=lambda r: (r.vertices, r.cls))
    return rows
