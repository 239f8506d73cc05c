"""Graph derivatives, pullbacks, the Delta contraction and the pairing."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .graph_core import (ColouredGraph, DisconnectedGraph, canonical_labelling, compose,
                         edge_remove, inverse, xi_of)
from .symbolic import Term, labelled_rep, normalise_factor

__all__ = ["CorrelationSymbol", "graph_derivative", "pullback", "delta_contract", "pairing",
           "Fragment", "isomorphisms", "y_vector"]


def _as_graph(g):
    return g.to_graph() if isinstance(g, DisconnectedGraph) else g


def isomorphisms(g, h):
    """White maps ``pi`` (white i of g -> white pi(i) of h) extending to coloured isomorphisms."""
    g, h = _as_graph(g), _as_graph(h)
    if g.D != h.D or g.k != h.k:
        return []
    cg, pg = canonical_labelling(g)
    ch, ph = canonical_labelling(h)
    if cg != ch:
        return []
    h0 = inverse(ph[0])
    return sorted({compose(h0, p) for p in pg})


def graph_derivative(Q, C):
    """Slot bijections realising ``dQ(Y)/dC(X) != 0``; empty when Q and C differ."""
    return isomorphisms(Q, C)


@dataclass(frozen=True)
class CorrelationSymbol:
    """``G_graph`` read at a modified argument matrix.

    ``substitutions`` replace entries of the input matrix, as
    ``(column, colour, atom)``; slot i then reads column ``arg_perm^-1(i)``.
    """
    graph: object
    arg_perm: tuple
    substitutions: tuple = ()

    def __post_init__(self):
        if len(self.arg_perm) != self.graph.k:
            raise ValueError("arg_perm must act on exactly k(graph) slots")
        keys = [(s, c) for s, c, _ in self.substitutions]
        if len(set(keys)) != len(keys):
            raise ValueError("at most one substitution per (slot, colour)")

    def read(self, cols):
        """Arguments of G for input columns ``cols`` (one D-vector per white)."""
        cols = [list(v) for v in cols]
        for alpha, c, atom in self.substitutions:
            cols[alpha - 1][c - 1] = atom
        pinv = inverse(self.arg_perm)
        return tuple(tuple(cols[pinv[s] - 1]) for s in range(len(cols)))

    def args(self, var="x"):
        D = self.graph.D
        return self.read([[(var, c, a) for c in range(1, D + 1)]
                          for a in range(1, self.graph.k + 1)])


def pullback(sigma, f):
    """``(sigma^* f)(X) = f(x^{sigma^-1(1)}, ..)``.

    This is a right action: ``pullback(s, pullback(t, f)) == pullback(compose(t, s), f)``.
    """
    sinv = inverse(sigma)
    perm = compose(f.arg_perm, sigma)
    subs = tuple(sorted((sinv[a - 1], c, atom) for a, c, atom in f.substitutions))
    return CorrelationSymbol(f.graph, perm, subs)


def y_vector(D, j):
    return tuple(("y", c, j) for c in range(1, D + 1))


@dataclass
class Fragment:
    """``Delta_{s_a,r} G_source`` paired with the J-cycle of the labelled target."""
    source: ColouredGraph
    colour: int
    r: int
    target: ColouredGraph
    common: frozenset
    args: tuple          # arguments of G_source in target variables y^j and s_a, dummies q
    weight: Fraction = Fraction(1)
    meta: dict = field(default_factory=dict)

    @property
    def dummies(self):
        return sorted({a for v in self.args for a in v if a[0] == "q"})


def delta_contract(B, a, r, G=None, weight=Fraction(1)):
    """``Delta_{s_a,r}`` applied to ``G_B``; ``G`` may carry a pullback of B's slots.

    The removed white gets ``z`` with ``z_a = s_a``, a dummy for every other
    colour common to the removed edge pair, and ``y^{kappa(xi)}_i`` otherwise.
    """
    B = _as_graph(B)
    if not 1 <= r <= B.k:
        raise ValueError(f"white index {r} outside 1..{B.k}")
    target, common, reindex = edge_remove(B, a, r)
    D = B.D
    z = []
    for i in range(1, D + 1):
        if i == a:
            z.append(("s", a))
        elif i in common:
            z.append(("q", i, i))
        else:
            z.append(("y", i, reindex[xi_of(B, a, r, i)]))
    cols = [tuple(z) if xi == r else y_vector(D, reindex[xi]) for xi in range(1, B.k + 1)]
    slots = G.read(cols) if G is not None else tuple(cols)
    return Fragment(B, a, r, target, common, tuple(slots), weight)


def pairing(B, a, G=None, weight=Fraction(1)):
    """``<<G_B, B>>_{s_a}``: one fragment per white vertex."""
    B = _as_graph(B)
    return [delta_contract(B, a, r, G, weight) for r in range(1, B.k + 1)]


def fragment_term(frag, onto, pi, var="y"):
    """Coefficient term of ``J(onto)`` from a fragment, through the isomorphism
    ``pi`` of the labelled target onto ``onto``; target variables renamed to ``var``."""
    def f(atom):
        if atom[0] == "y":
            return (var, atom[1], pi[atom[2] - 1])
        return atom
    args = tuple(tuple(f(a) for a in v) for v in frag.args)
    text, nargs = normalise_factor(frag.source, args)
    return Term(frag.weight, 0, (), ((text, nargs),), dict(frag.meta))
