"""Ward-identity Y-terms and full Schwinger-Dyson equations."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .cli_io import parse_graph, render_class, render_graph
from .enumeration import orbit_reps
from .graph_calculus import delta_contract, isomorphisms
from .graph_core import (ColouredGraph, DisconnectedGraph, aut_order, canonical_form,
                         components, inverse, is_connected, sigma_swap)
from .symbolic import (Term, atom_str, combine, labelled_rep, normalise_factor, normalise_term,
                       relabel_columns, substitute, term_from_json, term_key, term_to_json)

__all__ = ["ModelSpec", "MELONIC", "SIMPLE", "model", "in_sector", "y_term", "y_fragments",
           "sde_equation", "SdeEquation", "expand_disconnected_derivative", "render",
           "equation_to_json", "equation_from_json", "equation_multiset_equal", "X_graph"]


@dataclass(frozen=True)
class ModelSpec:
    D: int
    kind: str  # "melonic-quartic" or "simple-v1"

    @property
    def colours(self):
        return (1,) if self.kind == "simple-v1" else tuple(range(1, self.D + 1))


def model(kind, D=3):
    if kind == "simple-v1":
        return ModelSpec(3, kind)
    if kind == "melonic-quartic":
        return ModelSpec(D, kind)
    raise ValueError(f"unknown model {kind!r}")


MELONIC = ModelSpec(3, "melonic-quartic")
SIMPLE = ModelSpec(3, "simple-v1")


def X_graph(k):
    """Cyclic graph X_{2k} of the single-vertex model: colours 2, 3 shift white i to black i+1."""
    cyc = tuple(list(range(2, k + 1)) + [1])
    return ColouredGraph(3, k, (tuple(range(1, k + 1)), cyc, cyc))


@lru_cache(maxsize=None)
def _theta(k):
    return canonical_form(X_graph(k))


def in_sector(m, g):
    """Whether ``g`` lies in the model's boundary sector."""
    if isinstance(g, DisconnectedGraph):
        comps = g.components
    else:
        comps = components(g).components if g.k else ()
    if m.kind == "melonic-quartic":
        return True  # the boundary map of melonic quartic models is surjective
    return all(c.D == 3 and canonical_form(c) == _theta(c.k) for c in comps)


# -- Y-term -------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _sources(m, k):
    out = []
    for g, aut in orbit_reps(m.D, k):
        if in_sector(m, g):
            out.append((g, aut))
    return tuple(out)


def y_fragments(m, a, order):
    """Fragments ``(1/|Aut B|) Delta_{s_a,r} G_B`` for sources with up to order/2 + 1 whites."""
    frags = []
    for kk in range(1, order // 2 + 2):
        for g, aut in _sources(m, kk):
            for r in range(1, kk + 1):
                fr = delta_contract(g, a, r, weight=Fraction(1, aut))
                fr.meta.update({"source": render_class(g), "target": render_class(fr.target)})
                frags.append(fr)
    return frags


def _derivative_terms(fr, onto, var, extra=None):
    """``sum_{pi in Iso(target, onto)}`` of the fragment read in the variables of ``onto``."""
    out = []
    for pi in isomorphisms(fr.target, onto) if fr.target.k else [()]:
        mp = {}
        for v in fr.args:
            for at in v:
                if at[0] == "y":
                    mp[at] = (var, at[1], pi[at[2] - 1])
        if extra:
            mp.update(extra)
        args = substitute(fr.args, mp)
        text, nargs = normalise_factor(fr.source, args)
        out.append(Term(fr.weight, 0, (), ((text, nargs),),
                        {"origin": "f", "source": fr.meta["source"], "colour": fr.colour}))
    return out


def y_term(m, a, order):
    """``{target class: terms of dY^(a)/dC}`` in the target's representative variables ``y``.

    The empty target (key ``g{D=..,k=0}[..]``) collects the source-independent part.
    """
    out = {}
    for fr in y_fragments(m, a, order):
        rep, text, _ = labelled_rep(fr.target) if fr.target.k else (fr.target, render_graph(fr.target), None)
        out.setdefault(text, []).extend(_derivative_terms(fr, rep, "y"))
    return {t: combine(v) for t, v in sorted(out.items())}


# -- the equation -----------------------------------------------------------------------

@dataclass
class SdeEquation:
    lhs: tuple              # normalised factor of G_B(X)
    dressing: list          # terms of (2 lambda / E_s) sum_a sum_q G2(s_a, q)
    rhs: list
    metadata: dict = field(default_factory=dict)


def _x_cols(D, k):
    return [tuple(("x", c, al) for c in range(1, D + 1)) for al in range(1, k + 1)]


def expand_disconnected_derivative(dg, cols):
    """``Z^-1 dZ/dC`` at the given columns as a list of factor products.

    One component gives ``[G_C]``; two give ``G_C1 G_C2 + G_{|C1|C2|}``.
    """
    if isinstance(dg, ColouredGraph):
        dg = components(dg)
    n = len(dg.components)
    if n == 1:
        return [(normalise_factor(dg.components[0], tuple(cols)),)]
    if n != 2:
        raise ValueError(f"expansion supports at most two components, got {n}")
    whites = dg.component_whites()
    prod = tuple(normalise_factor(c, tuple(cols[w - 1] for w in ws))
                 for c, ws in zip(dg.components, whites))
    joint = (normalise_factor(dg.to_graph(), tuple(cols)),)
    return [prod, joint]


def sde_equation(m, B, alpha=1):
    """Schwinger-Dyson equation of the connected boundary graph ``B`` at black vertex ``alpha``."""
    if isinstance(B, DisconnectedGraph) or not is_connected(B):
        raise ValueError("the equation is stated for connected boundary graphs")
    if B.D != m.D:
        raise ValueError("rank mismatch")
    if not in_sector(m, B):
        raise ValueError("graph outside the boundary sector of the model")
    if not 1 <= alpha <= B.k:
        raise ValueError("alpha outside 1..k")
    D, k = B.D, B.k
    cols = _x_cols(D, k)
    gamma = {a: inverse(B.tau[a - 1])[alpha - 1] for a in range(1, D + 1)}
    s = tuple(("x", a, gamma[a]) for a in range(1, D + 1))
    Es = ("Einv", s)
    melon = ColouredGraph(D, 1, ((1,),) * D)

    dressing = []
    for a in m.colours:
        v = tuple(s[a - 1] if c == a else ("q", c, c) for c in range(1, D + 1))
        dressing.append(Term(Fraction(2), 1, (Es,), (normalise_factor(melon, (v,)),),
                             {"origin": "dressing", "colour": a}))

    rhs = []
    if k == 1:
        rhs.append(Term(Fraction(1), 0, (Es,), (), {"origin": "free"}))
    pref = Fraction(-2)
    for a in m.colours:
        sa = s[a - 1]
        # f-terms: sum over Aut(B) of the Y-term coefficient of J(B)
        for kk, src_k in ((k + 1, k + 1),):
            for g, aut in _sources(m, src_k):
                for r in range(1, src_k + 1):
                    fr = delta_contract(g, a, r, weight=Fraction(1, aut))
                    if not isomorphisms(fr.target, B):
                        continue
                    fr.meta["source"] = render_class(g)
                    for t in _derivative_terms(fr, B, "x", {("s", a): sa}):
                        rhs.append(t.scaled(pref, 1, (Es,)))
        # swap terms
        for rho in range(1, k + 1):
            if rho == alpha:
                continue
            dg = sigma_swap(B, a, alpha, rho, "black")
            y_arho = ("x", a, inverse(B.tau[a - 1])[rho - 1])
            diff = ("Ediff", y_arho, sa)
            meta = {"origin": "swap", "colour": a, "rho": rho}
            for sign, sub in ((1, {}), (-1, {sa: y_arho})):
                scols = substitute(tuple(cols), sub)
                for prod in expand_disconnected_derivative(dg, scols):
                    rhs.append(Term(pref * sign, 1, (Es, diff), prod, dict(meta)))
        # b-difference terms
        b = ("q", a, 99)
        diff = ("Ediff", sa, b)
        meta = {"origin": "bdiff", "colour": a}
        rhs.append(Term(-pref, 1, (Es, diff), (normalise_factor(B, tuple(cols)),), dict(meta)))
        scols = substitute(tuple(cols), {sa: b})
        rhs.append(Term(pref, 1, (Es, diff), (normalise_factor(B, scols),), dict(meta)))

    meta = {"rank": D, "model": m.kind, "graph": render_graph(B), "class": render_class(B),
            "alpha": alpha, "s": [atom_str(x) for x in s]}
    return SdeEquation(normalise_factor(B, tuple(cols)), combine(dressing), combine(rhs), meta)


# -- rendering ---------------------------------------------------------------------------

def _factor_text(f):
    text, args = f
    return f"G[{text}](" + "; ".join(",".join(atom_str(a) for a in v) for v in args) + ")"


def _term_text(t):
    c = t.coeff
    parts = [f"{'+' if c >= 0 else '-'}{abs(c.numerator)}/{c.denominator}"]
    if t.lambda_pow:
        parts.append(f"lambda^{t.lambda_pow}")
    d = t.dummies()
    if d:
        parts.append("sum[" + ",".join(atom_str(x) for x in d) + "]")
    for p in t.props:
        if p[0] == "Einv":
            parts.append("1/E(" + ",".join(atom_str(a) for a in p[1]) + ")")
        else:
            parts.append(f"1/E({atom_str(p[1])},{atom_str(p[2])})")
    parts.extend(_factor_text(f) for f in t.factors)
    return " ".join(parts)


def _term_latex(t):
    c = t.coeff
    s = ("-" if c < 0 else "+") + (rf"\frac{{{abs(c.numerator)}}}{{{c.denominator}}}" if c.denominator != 1
                                   else str(abs(c.numerator)))
    if t.lambda_pow:
        s += rf"\lambda^{{{t.lambda_pow}}}"
    d = t.dummies()
    if d:
        s += r"\sum_{" + ",".join(atom_str(x) for x in d) + "}"
    for p in t.props:
        if p[0] == "Einv":
            s += r"\frac{1}{E(" + ",".join(atom_str(a) for a in p[1]) + ")}"
        else:
            s += rf"\frac{{1}}{{E({atom_str(p[1])},{atom_str(p[2])})}}"
    for text, args in t.factors:
        s += rf"G_{{\mathtt{{{text}}}}}(" + ";".join(",".join(atom_str(a) for a in v) for v in args) + ")"
    return s


def _factor_json(f):
    return term_to_json(Term(Fraction(1), 0, (), (f,)))["factors"][0]


def equation_to_json(eq):
    return {"lhs": _factor_json(eq.lhs),
            "dressing": [term_to_json(t) for t in eq.dressing],
            "terms": [term_to_json(t) for t in eq.rhs],
            "metadata": eq.metadata}


def equation_from_json(d):
    from .symbolic import parse_atom
    lhs = d["lhs"]
    lhs_f = (lhs["graph"], tuple(tuple(parse_atom(a) for a in v) for v in lhs["args"]))
    return SdeEquation(lhs_f, [term_from_json(t) for t in d.get("dressing", [])],
                       [term_from_json(t) for t in d["terms"]], dict(d.get("metadata", {})))


def render(eq, fmt="json"):
    if fmt == "json":
        return json.dumps(equation_to_json(eq), indent=1, sort_keys=True)
    if fmt == "text":
        lines = [f"# {json.dumps(eq.metadata, sort_keys=True)}",
                 "(1 " + " ".join(_term_text(t) for t in eq.dressing) + ") * " + _factor_text(eq.lhs),
                 "  ="]
        lines += ["  " + _term_text(t) for t in eq.rhs]
        return "\n".join(lines) + "\n"
    if fmt == "latex":
        head = r"\Big(1" + "".join(_term_latex(t) for t in eq.dressing) + r"\Big)" + \
            _term_latex(Term(Fraction(1), 0, (), (eq.lhs,)))[1:]
        body = r"\\ &".join(_term_latex(t) for t in eq.rhs)
        return r"\begin{align*}" + head + r" &= " + body + r"\end{align*}" + "\n"
    raise ValueError(f"unknown format {fmt!r}")


# -- comparison -------------------------------------------------------------------------

def _relabel_min(t, k):
    best = None
    for perm in itertools.permutations(range(1, k + 1)):
        n = normalise_term(relabel_columns(t, perm))
        key = (repr(term_key(n)),)
        if best is None or key < best[0]:
            best = (key, n)
    return best[1]


def _multiset(terms, mode, k):
    if mode == "relabel":
        terms = [_relabel_min(t, k) for t in terms]
    acc = {}
    for t in combine(terms):
        key = term_key(t)
        acc[key] = acc.get(key, Fraction(0)) + t.coeff
    return {k_: c for k_, c in acc.items() if c != 0}


def _diff(a, b):
    out = []
    for key in sorted(set(a) | set(b), key=repr):
        ca, cb = a.get(key, Fraction(0)), b.get(key, Fraction(0))
        if ca != cb:
            t = Term(ca - cb, key[0], key[1], key[2])
            out.append(f"{ca} vs {cb}: " + _term_text(Term(Fraction(1), key[0], key[1], key[2]))[5:])
    return out


def equation_multiset_equal(e1, e2, mode="exact"):
    """Compare two equations as term multisets; returns ``(equal, report lines)``.

    ``mode="relabel"`` compares each term modulo renaming of the external
    columns (used where the printed labelling of a graph is not recoverable).
    """
    k = rep_k(e1)
    report = []
    if normalise_factor_text(e1.lhs, mode, k) != normalise_factor_text(e2.lhs, mode, k):
        report.append(f"lhs differs: {_factor_text(e1.lhs)} vs {_factor_text(e2.lhs)}")
    for name, a, b in (("dressing", e1.dressing, e2.dressing), ("rhs", e1.rhs, e2.rhs)):
        for line in _diff(_multiset(a, mode, k), _multiset(b, mode, k)):
            report.append(f"{name}: {line}")
    return not report, report


def rep_k(eq):
    return len(eq.lhs[1])


def normalise_factor_text(f, mode, k):
    t = Term(Fraction(1), 0, (), (f,))
    t = _relabel_min(t, k) if mode == "relabel" else normalise_term(t)
    return term_key(t)
