"""Symbolic terms: momentum atoms, correlation-function factors, normal forms.

Atoms are small tuples::

    ("x", c, alpha)   entry of colour c of the external white momentum alpha
    ("y", c, j)       same, for the white variables of a Y-term coefficient
    ("s", c)          the external scalar s_c
    ("q", c, n)       summed dummy of colour c

A momentum vector is a D-tuple of atoms.  A factor ``(graph, args)`` stands
for ``G_graph(args[0], .., args[k-1])`` with ``graph`` a labelled
representative (see :func:`labelled_rep`).
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .cli_io import parse_graph, render_graph
from .graph_core import (ColouredGraph, DisconnectedGraph, canonical_form,
                         canonical_labelling, components, compose, inverse)

__all__ = ["Term", "labelled_rep", "normalise_factor", "normalise_term", "combine",
           "atom_str", "parse_atom", "term_to_json", "term_from_json", "term_key",
           "relabel_columns", "substitute"]


# -- atoms -----------------------------------------------------------------

def atom_str(a):
    kind = a[0]
    if kind == "x":
        return f"x^{a[2]}_{a[1]}"
    if kind == "y":
        return f"y^{a[2]}_{a[1]}"
    if kind == "s":
        return f"s_{a[1]}"
    if kind == "q":
        return f"q{a[1]}_{a[2]}"
    raise ValueError(f"unknown atom {a!r}")


_ATOM = re.compile(r"(?:(x|y)\^(\d+)_(\d+)|s_(\d+)|q(\d+)_(\d+))$")


def parse_atom(text):
    m = _ATOM.match(text.strip())
    if not m:
        raise ValueError(f"bad momentum atom {text!r}")
    if m.group(1):
        return (m.group(1), int(m.group(3)), int(m.group(2)))
    if m.group(4):
        return ("s", int(m.group(4)))
    return ("q", int(m.group(5)), int(m.group(6)))


def _map_atoms(obj, f):
    if isinstance(obj, tuple) and obj and isinstance(obj[0], str) and obj[0] in "xysq" and len(obj[0]) == 1:
        return f(obj)
    if isinstance(obj, tuple):
        return tuple(_map_atoms(o, f) for o in obj)
    return obj


# -- labelled representatives -----------------------------------------------------

@lru_cache(maxsize=100_000)
def _rep_of_canonical(c):
    """Labelled representative of a canonical graph and its rendering."""
    if c.k == 0:
        return c, render_graph(c)
    parts = components(c)
    if len(parts.components) == 1:
        return c, render_graph(c)
    text = render_graph(parts)
    rep = parse_graph(text)
    return rep.to_graph(), text


@lru_cache(maxsize=100_000)
def labelled_rep(g):
    """``(rep, text, isos)``: the labelled representative of the class of ``g``,
    its text form and every white map ``pi`` (1-based, white i of g -> white pi(i)
    of rep) realising an isomorphism."""
    if isinstance(g, DisconnectedGraph):
        g = g.to_graph()
    c, pis_g = canonical_labelling(g)
    rep, text = _rep_of_canonical(c)
    _, pis_rep = canonical_labelling(rep)
    p0 = inverse(pis_rep[0])
    isos = sorted({compose(p0, p) for p in pis_g})
    return rep, text, tuple(isos)


def normalise_factor(g, args):
    """Move ``G_g(args)`` onto the labelled representative, least argument order."""
    rep, text, isos = labelled_rep(g)
    best = None
    for pi in isos:
        new = [None] * len(args)
        for i, a in enumerate(args):
            new[pi[i] - 1] = a
        new = tuple(new)
        if best is None or new < best:
            best = new
    return (text, best if best is not None else ())


@lru_cache(maxsize=4096)
def rep_graph(text):
    g = parse_graph(text)
    return g.to_graph() if isinstance(g, DisconnectedGraph) else g


# -- terms -------------------------------------------------------------------

@dataclass
class Term:
    """``coeff * lambda^lambda_pow * sum_{dummies} prod(props) * prod(factors)``.

    ``props``: ``("Einv", vec)`` for 1/E(vec), ``("Ediff", u, v)`` for 1/E(u, v).
    ``factors``: ``(graph_text, args)`` pairs.
    """
    coeff: Fraction
    lambda_pow: int = 0
    props: tuple = ()
    factors: tuple = ()
    meta: dict = field(default_factory=dict)

    def dummies(self):
        seen = set()
        _map_atoms((self.props, self.factors), lambda a: seen.add(a) or a if a[0] == "q" else a)
        return sorted(a for a in seen if a[0] == "q")

    def scaled(self, c, lam=0, props=()):
        return Term(self.coeff * c, self.lambda_pow + lam, tuple(props) + self.props,
                    self.factors, dict(self.meta))


def _norm_props(props, coeff):
    out = []
    for p in props:
        if p[0] == "Ediff":
            u, v = p[1], p[2]
            if u == v:
                raise ValueError("removable singularity E(u, u) emitted")
            if v < u:
                u, v, coeff = v, u, -coeff
            out.append(("Ediff", u, v))
        else:
            out.append(p)
    return tuple(sorted(out)), coeff


def _norm_factors(factors):
    return tuple(sorted(normalise_factor(rep_graph(t), a) for t, a in factors))


def _rename(obj, mapping):
    return _map_atoms(obj, lambda a: mapping.get(a, a))


def normalise_term(t):
    """Canonical dummy names, canonical factor labellings, sign-normalised differences."""
    dums = t.dummies()
    by_colour = {}
    for d in dums:
        by_colour.setdefault(d[1], []).append(d)
    colours = sorted(by_colour)
    best = None
    for choice in itertools.product(*(itertools.permutations(range(len(by_colour[c])))
                                      for c in colours)):
        mapping, n = {}, 0
        for c, perm in zip(colours, choice):
            for d, j in zip(by_colour[c], perm):
                mapping[d] = ("q", c, 1000 + n + j)
            n += len(by_colour[c])
        props, coeff = _norm_props(_rename(t.props, mapping), t.coeff)
        factors = _norm_factors(_rename(t.factors, mapping))
        cand = (props, factors, coeff)
        if best is None or cand[:2] < best[:2]:
            best = cand
    props, factors, coeff = best
    # final names: first appearance order in the serialised key, one counter per term
    order = []
    _map_atoms((factors, props), lambda a: order.append(a) or a if a[0] == "q" and a not in order else a)
    final = {a: ("q", a[1], i) for i, a in enumerate(order, 1)}
    props, coeff = _norm_props(_rename(props, final), coeff)
    factors = _norm_factors(_rename(factors, final))
    return Term(coeff, t.lambda_pow, props, factors, dict(t.meta))


def term_key(t):
    return (t.lambda_pow, t.props, t.factors)


def combine(terms):
    """Normalise, merge equal keys, drop zeros; deterministic order."""
    acc, meta = {}, {}
    for t in terms:
        n = normalise_term(t)
        k = term_key(n)
        acc[k] = acc.get(k, Fraction(0)) + n.coeff
        meta.setdefault(k, n.meta)
    out = [Term(c, k[0], k[1], k[2], meta[k]) for k, c in acc.items() if c != 0]
    out.sort(key=lambda t: (repr(term_key(t)), t.coeff))
    return out


def relabel_columns(t, perm):
    """Rename external columns ``x^alpha -> x^perm[alpha-1]``."""
    f = lambda a: ("x", a[1], perm[a[2] - 1]) if a[0] == "x" else a
    return Term(t.coeff, t.lambda_pow, _map_atoms(t.props, f), _map_atoms(t.factors, f), dict(t.meta))


def substitute(obj, mapping):
    return _rename(obj, mapping)


# -- json ------------------------------------------------------------------------

def _vec_json(v):
    return [atom_str(a) for a in v]


def _factor_json(text, args):
    """``perm[i]``: the column used by slot i when it is a plain column, else None;
    ``subs``: entries departing from that column."""
    perm, subs = [], []
    for i, v in enumerate(args, 1):
        cols = [a[2] for a in v if a[0] in "xy"]
        main = max(set(cols), key=lambda c: (cols.count(c), -c)) if cols else None
        perm.append(main)
        for c, a in enumerate(v, 1):
            if not (a[0] in "xy" and a[1] == c and a[2] == main):
                subs.append({"slot": i, "colour": c, "value": atom_str(a)})
    return {"graph": text, "perm": perm, "subs": subs, "args": [_vec_json(v) for v in args]}


def term_to_json(t):
    props = []
    for p in t.props:
        if p[0] == "Einv":
            props.append({"kind": "Einv", "args": [_vec_json(p[1])]})
        else:
            props.append({"kind": "Ediff", "args": [atom_str(p[1]), atom_str(p[2])]})
    out = {"coeff": {"num": t.coeff.numerator, "den": t.coeff.denominator},
           "lambda_pow": t.lambda_pow,
           "dummies": [{"name": atom_str(d), "colour": d[1]} for d in t.dummies()],
           "props": props,
           "factors": [_factor_json(text, args) for text, args in t.factors]}
    if t.meta:
        out["meta"] = t.meta
    return out


def term_from_json(d):
    props = []
    for p in d.get("props", []):
        if p["kind"] == "Einv":
            props.append(("Einv", tuple(parse_atom(a) for a in p["args"][0])))
        else:
            props.append(("Ediff", parse_atom(p["args"][0]), parse_atom(p["args"][1])))
    factors = []
    for f in d.get("factors", []):
        args = tuple(tuple(parse_atom(a) for a in v) for v in f["args"])
        factors.append((f["graph"], args))
    c = d["coeff"]
    coeff = Fraction(c["num"], c["den"]) if isinstance(c, dict) else Fraction(c)
    return Term(coeff, d.get("lambda_pow", 0), tuple(props), tuple(factors), dict(d.get("meta", {})))
