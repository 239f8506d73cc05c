"""Closed coloured graphs encoded as tuples of permutations.

A rank-D graph with 2k vertices is stored as ``tau``: D permutations of
``{1..k}`` (1-based), ``tau[c][i-1]`` being the black vertex joined to the
white vertex ``i`` by the edge of colour ``c+1``.

Relabelling by ``(sigma, pi)`` (blacks, whites) acts as
``tau[c] -> sigma o tau[c] o pi^-1``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

import numpy as np

__all__ = [
    "Perm", "ColouredGraph", "DisconnectedGraph", "GraphClass", "MomentumMatrix",
    "compose", "inverse", "identity", "empty_graph",
    "canonical_form", "canonical_labelling", "is_isomorphic", "aut_group",
    "aut_order", "aut_order_disconnected", "gurau_degree", "jackets", "bar",
    "relabel", "sigma_swap", "edge_remove", "momentum_map", "components",
    "is_connected", "graph_class", "disjoint_union", "recolour",
]

Perm = tuple  # 1-based image tuple


def identity(k):
    return tuple(range(1, k + 1))


def compose(p, q):
    """``(p o q)(i) = p(q(i))``."""
    return tuple(p[j - 1] for j in q)


def inverse(p):
    out = [0] * len(p)
    for i, j in enumerate(p, 1):
        out[j - 1] = i
    return tuple(out)


def _is_bijection(p, k):
    return len(p) == k and sorted(p) == list(range(1, k + 1))


@dataclass(frozen=True)
class ColouredGraph:
    D: int
    k: int
    tau: tuple

    def __post_init__(self):
        tau = tuple(tuple(int(v) for v in p) for p in self.tau)
        object.__setattr__(self, "tau", tau)
        if len(tau) != self.D:
            raise ValueError(f"expected {self.D} permutations, got {len(tau)}")
        for c, p in enumerate(tau, 1):
            if not _is_bijection(p, self.k):
                raise ValueError(f"colour {c}: {p} is not a bijection of 1..{self.k}")

    def __repr__(self):
        from .cli_io import render_graph
        return render_graph(self)

    def rho(self):
        """Left-normalised tuple ``tau[0]^-1 o tau[c]`` (independent of black labels)."""
        t0 = inverse(self.tau[0])
        return tuple(compose(t0, p) for p in self.tau)

    def black_normalised(self):
        """Same graph with blacks relabelled so that ``tau[0]`` is the identity."""
        return ColouredGraph(self.D, self.k, self.rho())


def empty_graph(D):
    """The k = 0 sentinel, unit for the disjoint union."""
    return ColouredGraph(D, 0, ((),) * D)


def relabel(g, sigma, pi):
    pinv = inverse(pi)
    return ColouredGraph(g.D, g.k, tuple(compose(sigma, compose(p, pinv)) for p in g.tau))


# -- canonical forms --------------------------------------------------------

@lru_cache(maxsize=16)
def _perm_table(k):
    P = np.array(list(itertools.permutations(range(k))), dtype=np.int64).reshape(-1, k)
    return P, np.argsort(P, axis=1)


@lru_cache(maxsize=200_000)
def canonical_labelling(g):
    """Return ``(canonical graph, pis)``; ``pis`` lists every white relabelling
    ``pi`` (1-based tuples) sending ``g`` onto the canonical graph."""
    if g.k == 0:
        return g, [()]
    if g.k > 9:
        raise ValueError("canonical form implemented for k <= 9")
    rho = np.array(g.rho(), dtype=np.int64) - 1          # D x k
    P, Pinv = _perm_table(g.k)
    # conj[n, c, i] = P[n, rho[c, Pinv[n, i]]]
    idx = rho[:, Pinv].transpose(1, 0, 2)                 # n x D x k
    conj = np.take_along_axis(np.broadcast_to(P[:, None, :], idx.shape), idx, axis=2)
    flat = conj.reshape(len(P), -1)
    order = np.lexsort(flat.T[::-1])
    best = flat[order[0]]
    hits = np.nonzero((flat == best).all(axis=1))[0]
    tau = tuple(tuple(int(v) + 1 for v in row) for row in best.reshape(g.D, g.k))
    pis = sorted(tuple(int(v) + 1 for v in P[n]) for n in hits)
    return ColouredGraph(g.D, g.k, tau), pis


def canonical_form(g):
    """Lexicographically least relabelling of ``g``.

    >>> canonical_form(ColouredGraph(3, 2, ((2, 1), (1, 2), (1, 2)))).tau
    ((1, 2), (2, 1), (2, 1))
    """
    return canonical_labelling(g)[0]


def is_isomorphic(g1, g2):
    if g1.D != g2.D:
        raise ValueError("graphs of different rank")
    if g1.k != g2.k:
        return False
    return canonical_form(g1) == canonical_form(g2)


@lru_cache(maxsize=100_000)
def aut_group(g):
    """White permutations ``pi`` with ``tau[c] o pi o tau[c]^-1`` colour independent."""
    if g.k == 0:
        return [()]
    out = []
    for pi in itertools.permutations(range(1, g.k + 1)):
        induced = {compose(t, compose(pi, inverse(t))) for t in g.tau}
        if len(induced) == 1:
            out.append(pi)
    return out


def aut_order(g):
    """Order of the coloured automorphism group (fast path through the canonical labelling)."""
    return len(canonical_labelling(g)[1])


# -- connectivity ------------------------------------------------------------

def _white_components(g):
    parent = list(range(g.k))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    # whites sharing a black vertex lie in one component
    for c in range(1, g.D):
        inv0 = inverse(g.tau[0])
        for i in range(g.k):
            j = inv0[g.tau[c][i] - 1] - 1
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)
    groups = {}
    for i in range(g.k):
        groups.setdefault(find(i), []).append(i + 1)
    return sorted(groups.values())


def is_connected(g):
    return g.k >= 1 and len(_white_components(g)) == 1


@dataclass(frozen=True)
class DisconnectedGraph:
    components: tuple
    white_order: tuple  # global white i -> (component index, local white index), 0/1-based
    rank: int = 0

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        object.__setattr__(self, "white_order", tuple(tuple(p) for p in self.white_order))
        ranks = {c.D for c in self.components}
        if len(ranks) > 1:
            raise ValueError("components of different rank")
        if ranks:
            object.__setattr__(self, "rank", ranks.pop())
        want = sorted((n, j) for n, c in enumerate(self.components) for j in range(1, c.k + 1))
        if sorted(self.white_order) != want:
            raise ValueError("white_order is not a bijection onto component whites")

    @property
    def D(self):
        return self.rank

    @property
    def k(self):
        return len(self.white_order)

    def __repr__(self):
        from .cli_io import render_graph
        return render_graph(self)

    def component_whites(self):
        """Global white indices (1-based) of each component, in local order."""
        out = [[0] * c.k for c in self.components]
        for gi, (n, j) in enumerate(self.white_order, 1):
            out[n][j - 1] = gi
        return out

    def to_graph(self):
        """Merge into a single (possibly disconnected) ColouredGraph."""
        D = self.D
        tau = [[0] * self.k for _ in range(D)]
        offset, offs = 0, []
        for c in self.components:
            offs.append(offset)
            offset += c.k
        for gi, (n, j) in enumerate(self.white_order, 1):
            comp = self.components[n]
            for col in range(D):
                tau[col][gi - 1] = offs[n] + comp.tau[col][j - 1]
        return ColouredGraph(D, self.k, tau)


def components(g):
    """Split ``g`` into connected pieces; component order by smallest global white,
    local whites in increasing global order, local blacks in increasing global order."""
    comps, order = [], [None] * g.k
    for n, whites in enumerate(_white_components(g)):
        blacks = sorted({g.tau[c][w - 1] for w in whites for c in range(g.D)})
        bpos = {b: i + 1 for i, b in enumerate(blacks)}
        tau = tuple(tuple(bpos[g.tau[c][w - 1]] for w in whites) for c in range(g.D))
        comps.append(ColouredGraph(g.D, len(whites), tau))
        for j, w in enumerate(whites, 1):
            order[w - 1] = (n, j)
    return DisconnectedGraph(tuple(comps), tuple(order), g.D)


def disjoint_union(*graphs):
    """Concatenate graphs, whites numbered in argument order."""
    comps, order = [], []
    D = graphs[0].D if graphs else 0
    for g in graphs:
        if g.k == 0:
            continue
        n = len(comps)
        comps.append(g)
        order.extend((n, j) for j in range(1, g.k + 1))
    return DisconnectedGraph(tuple(comps), tuple(order), D)


def aut_order_disconnected(g):
    """``prod_t m_t! * |Aut(t)|^m_t`` over isomorphism types of components."""
    comps = g.components if isinstance(g, DisconnectedGraph) else components(g).components
    mult = {}
    for c in comps:
        key = canonical_form(c)
        mult[key] = mult.get(key, 0) + 1
    out = 1
    for t, m in mult.items():
        out *= factorial(m) * aut_order(t) ** m
    return out


# -- degree ----------------------------------------------------------------

def jackets(D):
    """Cyclic colour orders (0-based) up to rotation and reversal."""
    if D < 2:
        return []
    if D == 2:
        return [(0, 1)]
    out = []
    for rest in itertools.permutations(range(1, D)):
        if rest[0] < rest[-1]:
            out.append((0,) + rest)
    return out


def _n_cycles(p):
    seen, n = set(), 0
    for i in range(1, len(p) + 1):
        if i in seen:
            continue
        n += 1
        while i not in seen:
            seen.add(i)
            i = p[i - 1]
    return n


def faces(g, i, j):
    """Number of bicoloured (i, j) cycles, colours 0-based."""
    return _n_cycles(compose(inverse(g.tau[i]), g.tau[j]))


def gurau_degree(g):
    """Sum of jacket genera of a connected graph."""
    if not is_connected(g):
        raise ValueError("degree is defined per connected component")
    total = Fraction(0)
    for J in jackets(g.D):
        F = sum(faces(g, J[n], J[(n + 1) % len(J)]) for n in range(len(J)))
        if g.D == 2:
            F = 2 * faces(g, 0, 1)
        chi = 2 * g.k - g.k * g.D + F
        total += Fraction(2 - chi, 2)
    return total


# -- structural operators ------------------------------------------------------

def bar(g):
    """Exchange white and black roles."""
    return ColouredGraph(g.D, g.k, tuple(inverse(p) for p in g.tau))


def recolour(g, perm):
    """Permute edge colours: the old colour ``c`` becomes ``perm[c-1]``."""
    if isinstance(g, DisconnectedGraph):
        return DisconnectedGraph(tuple(recolour(c, perm) for c in g.components), g.white_order, g.D)
    tau = [None] * g.D
    for c, p in enumerate(g.tau):
        tau[perm[c] - 1] = p
    return ColouredGraph(g.D, g.k, tuple(tau))


def sigma_swap(g, a, v1, v2, kind="black"):
    """Exchange the colour-``a`` edges at two same-coloured vertices (1-based)."""
    if kind not in ("white", "black"):
        raise ValueError("vertices must be both white or both black")
    if v1 == v2:
        raise ValueError("v1 and v2 must differ")
    tau = [list(p) for p in g.tau]
    t = tau[a - 1]
    if kind == "white":
        t[v1 - 1], t[v2 - 1] = t[v2 - 1], t[v1 - 1]
    else:
        i1, i2 = t.index(v1), t.index(v2)
        t[i1], t[i2] = v2, v1
    return components(ColouredGraph(g.D, g.k, tau))


def kappa(r, xi):
    return xi if xi < r else xi - 1


def edge_remove(g, a, r):
    """``g`` minus the colour-``a`` edge at white ``r``.

    Returns ``(graph, common_colours, reindex)`` with colours 1-based and
    ``reindex`` the map old white -> new white.
    """
    if not 1 <= r <= g.k:
        raise ValueError(f"white index {r} outside 1..{g.k}")
    w = g.tau[a - 1][r - 1]
    common = frozenset(c + 1 for c in range(g.D) if g.tau[c][r - 1] == w)
    reindex = {xi: kappa(r, xi) for xi in range(1, g.k + 1) if xi != r}
    if g.k == 1:
        return empty_graph(g.D), common, reindex
    tau = []
    for c in range(g.D):
        row = [0] * (g.k - 1)
        for xi in range(1, g.k + 1):
            if xi == r:
                continue
            b = g.tau[c][xi - 1]
            if b == w:
                b = g.tau[c][r - 1]
            row[reindex[xi] - 1] = b if b < w else b - 1
        tau.append(tuple(row))
    return ColouredGraph(g.D, g.k - 1, tuple(tau)), common, reindex


def xi_of(g, a, r, i):
    """White vertex joined by colour ``i`` to the black end of ``e_a^r``."""
    w = g.tau[a - 1][r - 1]
    return g.tau[i - 1].index(w) + 1


# -- momenta -----------------------------------------------------------------

@dataclass(frozen=True)
class MomentumMatrix:
    D: int
    k: int
    entries: tuple  # entries[c][alpha], 0-based storage

    def __post_init__(self):
        ent = tuple(tuple(row) for row in self.entries)
        object.__setattr__(self, "entries", ent)
        if len(ent) != self.D or any(len(r) != self.k for r in ent):
            raise ValueError("shape mismatch")

    def in_F(self):
        """All entries of each colour row pairwise distinct."""
        return all(len(set(row)) == len(row) for row in self.entries)

    def column(self, alpha):
        return tuple(row[alpha - 1] for row in self.entries)


def momentum_map(g, X):
    """``Y[a][tau_a(alpha)] = X[a][alpha]``."""
    if (X.D, X.k) != (g.D, g.k):
        raise ValueError("momentum matrix does not match graph")
    Y = [[None] * g.k for _ in range(g.D)]
    for a in range(g.D):
        for alpha in range(g.k):
            Y[a][g.tau[a][alpha] - 1] = X.entries[a][alpha]
    return MomentumMatrix(g.D, g.k, Y)


# -- classes -----------------------------------------------------------------

@dataclass(frozen=True)
class GraphClass:
    canonical: ColouredGraph
    aut_order: int
    connected: bool
    degree: Fraction | None


def graph_class(g):
    c = canonical_form(g)
    conn = is_connected(c)
    return GraphClass(c, aut_order(c) if conn else aut_order_disconnected(c),
                      conn, gurau_degree(c) if conn else None)
