"""Comparison of generated equations with transcribed reference equations.

A reference file is JSON.  Graphs are referred to by short names
(``V_a``, ``E_bac``, ``X_c`` ...) whose labelled representatives live in
``names.json``; letters ``a, b, c, d, e`` stand for colours ``1..5`` and a
colour assignment relabels them.  Terms are written the way they are
printed, e.g.::

    "-1 * E(y1,x1) * E_abc(y1,x2,x3,z,y)"

a coefficient, then ``*``-separated items: ``E(u,v)`` is ``1/E(u,v)``,
anything else is a correlation function ``NAME(args)``.  An argument list
fills momentum vectors slot by slot; a bare column letter fills a whole
vector, ``y1`` is the colour-1 entry of column ``y``, ``b2``/``q2`` are summed
dummies of colour 2.

Errata are recorded as JSON paths together with the value as printed; the
body of the file holds the corrected value.  ``printed_variant`` rebuilds the
file as printed so that every erratum can be shown to matter.
"""
from __future__ import annotations

import copy
import json
import re
from collections import defaultdict
from fractions import Fraction
from functools import lru_cache

from .cli_io import fixture_dir, parse_graph, render_class
from .graph_calculus import delta_contract, isomorphisms
from .graph_core import (ColouredGraph, DisconnectedGraph, aut_order, components,
                         disjoint_union, empty_graph, recolour)
from .sde_generator import (_derivative_terms, _sources, equation_multiset_equal, model,
                            sde_equation, X_graph, y_fragments)
from .symbolic import Term, normalise_factor

__all__ = ["GoldenError", "names", "resolve", "parse_term", "printed_variant", "check_sde",
           "check_yterm", "check_fixture", "check_all", "fixture_equation", "load"]

LETTERS = "abcde"


class GoldenError(ValueError):
    pass


# -- names ------------------------------------------------------------------------

@lru_cache(maxsize=None)
def names():
    return json.loads((fixture_dir() / "names.json").read_text())


def _sigma_perm(D, assign):
    """Colour permutation sending letter colour i to ``assign[letter i]``."""
    return tuple(assign.get(LETTERS[i], i + 1) for i in range(D))


def resolve(name, D, assign=None, table=None):
    """Labelled graph for ``name``; ``+`` joins components in order."""
    table = table if table is not None else names()[str(D)]
    assign = assign or {}
    if name in ("0", "empty"):
        return empty_graph(D)
    if "+" in name:
        parts = [resolve(p, D, assign, table) for p in name.split("+")]
        flat = []
        for p in parts:
            flat.extend(p.components if isinstance(p, DisconnectedGraph) else [p])
        return disjoint_union(*flat)
    if name.startswith("Xk"):
        return X_graph(int(name[2:]))
    entry, assign = _lookup(name, D, table, assign)
    g = parse_graph(entry["graph"] if isinstance(entry, dict) else entry)
    perm = _sigma_perm(D, assign)
    return recolour(g, perm) if perm != tuple(range(1, D + 1)) else g


def _lookup(name, D, table, assign):
    """Table entry for ``name``; ``P_ca`` falls back to ``P_ab`` with letters renamed."""
    if name in table:
        return table[name], assign
    head, _, tail = name.rpartition("_")
    base = f"{head}_{LETTERS[:len(tail)]}"
    if head and tail and set(tail) <= set(LETTERS[:D]) and len(set(tail)) == len(tail) \
            and base in table:
        rest = [x for x in LETTERS[:D] if x not in tail]
        ren = dict(zip(LETTERS[:D], list(tail) + rest))
        full = {x: assign.get(x, LETTERS.index(x) + 1) for x in LETTERS[:D]}
        return table[base], {x: full[ren[x]] for x in LETTERS[:D]}
    raise GoldenError(f"unknown graph name {name!r} in rank {D}")


# -- term grammar ----------------------------------------------------------------------

_ITEM = re.compile(r"^([A-Za-z0-9_+]+)\((.*)\)$")
_ENTRY = re.compile(r"^([a-z])(\d)(?:_(\d+))?$")


def _split_top(text, sep):
    out, depth, cur = [], 0, ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == sep and depth == 0:
            out.append(cur)
            cur = ""
        else:
            cur += ch
    out.append(cur)
    return [p.strip() for p in out]


class _Ctx:
    def __init__(self, D, columns):
        self.D = D
        self.columns = {c: i for i, c in enumerate(columns, 1)}

    def atom(self, tok, colour=None):
        m = _ENTRY.match(tok)
        if not m:
            raise GoldenError(f"bad momentum entry {tok!r}")
        letter, c, n = m.group(1), int(m.group(2)), m.group(3)
        if colour is not None and c != colour:
            raise GoldenError(f"entry {tok!r} placed in colour slot {colour}")
        if letter in self.columns:
            return ("x", c, self.columns[letter])
        if letter == "b":
            return ("q", c, 500 + int(n or 0))
        if letter == "q":
            return ("q", c, 600 + int(n or 0))
        raise GoldenError(f"unknown column {letter!r}")

    def vectors(self, text):
        vecs, cur = [], []
        for tok in [t.strip() for t in text.split(",") if t.strip()]:
            if tok in self.columns:
                if cur:
                    raise GoldenError(f"column {tok!r} inside a partial vector in {text!r}")
                vecs.append(tuple(("x", c, self.columns[tok]) for c in range(1, self.D + 1)))
                continue
            cur.append(self.atom(tok, len(cur) + 1))
            if len(cur) == self.D:
                vecs.append(tuple(cur))
                cur = []
        if cur:
            raise GoldenError(f"incomplete momentum vector in {text!r}")
        return tuple(vecs)


def parse_term(text, D, columns, assign=None):
    """Parse one printed term into a :class:`Term` (factors normalised)."""
    ctx = _Ctx(D, columns)
    items = _split_top(text, "*")
    coeff = Fraction(items[0].replace(" ", ""))
    props, factors, lam = [], [], 0
    for it in items[1:]:
        if it == "lambda":
            lam += 1
            continue
        m = _ITEM.match(it)
        if not m:
            raise GoldenError(f"cannot parse item {it!r}")
        head, body = m.group(1), m.group(2)
        if head == "E":
            u, v = [ctx.atom(t.strip()) for t in body.split(",")]
            props.append(("Ediff", u, v))
        elif head == "Einv":
            props.append(("Einv", ctx.vectors(body)[0]))
        else:
            g = resolve(head, D, assign)
            args = ctx.vectors(body)
            if len(args) != g.k:
                raise GoldenError(f"{head} takes {g.k} arguments, got {len(args)} in {text!r}")
            factors.append(normalise_factor(g, args))
    return Term(coeff, lam, tuple(props), tuple(factors), {"printed": text})


# -- errata ------------------------------------------------------------------------------

def _get(obj, path):
    for p in path:
        obj = obj[p]
    return obj


def printed_variant(fx, which=None):
    """Copy of ``fx`` with errata (all, or the indices in ``which``) undone."""
    out = copy.deepcopy(fx)
    errs = [e for i, e in enumerate(fx.get("errata", []))
            if (which is None or i in which) and "path" in e]
    deletions = []
    for e in errs:
        path = e["path"]
        if e.get("printed", None) is None and e["kind"] == "omitted":
            deletions.append(path)
        else:
            _get(out, path[:-1])[path[-1]] = e["printed"]
    for path in sorted(deletions, key=lambda p: [(0, x, "") if isinstance(x, int) else (1, 0, x) for x in p],
                       reverse=True):
        del _get(out, path[:-1])[path[-1]]
    return out


def load(fid):
    return json.loads((fixture_dir() / f"{fid}.json").read_text())


# -- SDE fixtures -----------------------------------------------------------------------

def _scale(t, s):
    return t.scaled(Fraction(-2), 1, (("Einv", s),))


def _fblock_terms(fx, m, B, s, report):
    """Expand printed Delta-groups through our labelled sources; check counts and weights."""
    if fx.get("fblock", []) is None:
        return []  # f-terms written out among the printed terms
    D = m.D
    want, srcs = defaultdict(lambda: [0, set()]), {}
    anon = defaultdict(list)
    for e in fx.get("fblock", []):
        if e["source"] is None:
            # graph shown only as a picture: count and weight are all we can check
            n = e.get("n", len(e.get("r", [])))
            anon[e["colour"]].extend([(n, Fraction(e["coeff"]))] * e.get("mult", 1))
            continue
        src = resolve(e["source"], D, fx.get("assign"))
        key = (e["colour"], render_class(src))
        n = e.get("n", len(e.get("r", [])))
        want[key][0] += n
        want[key][1].add(Fraction(e["coeff"]))
        srcs[key] = src
    out = []
    for (a, cls), (n, coeffs) in sorted(want.items()):
        src = srcs[(a, cls)]
        g = src.to_graph() if isinstance(src, DisconnectedGraph) else src
        hits = [r for r in range(1, g.k + 1) if isomorphisms(delta_contract(g, a, r).target, B)]
        aut = aut_order(g)
        if len(hits) != n:
            report.append(f"fblock colour {a} source {cls}: printed {n} contractions, graph has {len(hits)}")
        if len(coeffs) != 1 or coeffs != {Fraction(1, aut)}:
            report.append(f"fblock colour {a} source {cls}: coefficient {sorted(map(str, coeffs))} "
                          f"but 1/|Aut| = 1/{aut}")
        coeff = sorted(coeffs)[0]
        for r in hits:
            fr = delta_contract(g, a, r, weight=coeff)
            fr.meta["source"] = cls
            for t in _derivative_terms(fr, B, "x", {("s", a): s[a - 1]}):
                out.append(_scale(t, s))
    # sources the generator uses that were not printed by name
    for a in m.colours:
        rest = []
        for g, aut in _sources(m, B.k + 1):
            cls = render_class(g)
            if (a, cls) in want:
                continue
            hits = [r for r in range(1, g.k + 1) if isomorphisms(delta_contract(g, a, r).target, B)]
            if hits:
                rest.append((g, cls, hits, Fraction(1, aut)))
        if not anon[a]:
            for g, cls, hits, w in rest:
                report.append(f"fblock colour {a}: source {cls} ({len(hits)} contractions) not printed")
            continue
        have = sorted((len(h), w) for _, _, h, w in rest)
        if have != sorted(anon[a]):
            fmt = lambda v: sorted(f"{n}x{w}" for n, w in v)
            report.append(f"fblock colour {a}: unnamed sources {fmt(have)}, printed {fmt(anon[a])}")
            continue
        for g, cls, hits, w in rest:
            for r in hits:
                fr = delta_contract(g, a, r, weight=w)
                fr.meta["source"] = cls
                for t in _derivative_terms(fr, B, "x", {("s", a): s[a - 1]}):
                    out.append(_scale(t, s))
    return out


def fixture_equation(fx, report=None):
    """Build the equation a fixture describes, as terms in generator conventions."""
    from .sde_generator import SdeEquation
    report = report if report is not None else []
    D = fx["rank"]
    m = model(fx["model"], D)
    cols = fx["columns"]
    assign = fx.get("assign")
    B = resolve(fx["graph"], D, assign)
    ctx = _Ctx(D, cols)
    s = tuple(ctx.atom(t, c) for c, t in enumerate(fx["s"], 1))
    lhs = parse_term("1 * " + fx["lhs"], D, cols, assign).factors[0]
    dressing = []
    for v in fx.get("dressing", []):
        t = parse_term(f"2 * lambda * m({v})", D, cols, assign)
        dressing.append(t.scaled(Fraction(1), 0, (("Einv", s),)))
    rhs = []
    for item in fx.get("terms", []):
        text, scaled = (item, True) if isinstance(item, str) else (item["term"], item.get("scaled", True))
        t = parse_term(text, D, cols, assign)
        rhs.append(_scale(t, s) if scaled else t.scaled(Fraction(1), 0, (("Einv", s),)))
    rhs.extend(_fblock_terms(fx, m, B, s, report))
    return SdeEquation(lhs, dressing, rhs, {"s": list(fx["s"])}), B, m, s


def check_sde(fx):
    """``(ok, report)`` comparing a transcribed equation with the generated one."""
    report = []
    eq_ref, B, m, s = fixture_equation(fx, report)
    gen = sde_equation(m, B, fx.get("alpha", 1))
    from .symbolic import atom_str
    if [atom_str(x) for x in s] != gen.metadata["s"]:
        report.append(f"s differs: printed {fx['s']} generated {gen.metadata['s']}")
    ok, diff = equation_multiset_equal(gen, eq_ref, fx.get("mode", "exact"))
    report.extend(diff)
    return not report, report


# -- Y-term fixtures -------------------------------------------------------------------

def _yterm_profile(m, a, order):
    prof = defaultdict(lambda: [0, set()])
    for fr in y_fragments(m, a, order):
        key = (render_class(fr.target), render_class(fr.source))
        prof[key][0] += 1
        prof[key][1].add(fr.weight)
    return {k: (n, frozenset(w)) for k, (n, w) in prof.items()}


def check_yterm(fx, assign=None):
    """Compare the printed Y-term groups, under a colour assignment of the letters,
    with the generator's fragments ``(target, source) -> (#contractions, weight)``."""
    D = fx["rank"]
    assign = assign or {"a": 1, "b": 2, "c": 3, "d": 4, "e": 5}
    m = model(fx.get("model", "melonic-quartic"), D)
    gen = _yterm_profile(m, assign["a"], fx["order"])
    ref = defaultdict(lambda: [0, set()])
    anon = defaultdict(list)
    report = []
    for grp in fx["groups"]:
        tgt = render_class(resolve(grp["target"], D, assign))
        for e in grp["terms"]:
            if e["source"] is None:
                n = e.get("n", len(e.get("r", [])))
                anon[tgt].extend([(n, Fraction(e["coeff"]))] * e.get("mult", 1))
                continue
            src = render_class(resolve(e["source"], D, assign))
            n = e.get("n", len(e.get("r", [])))
            ref[(tgt, src)][0] += n
            ref[(tgt, src)][1].add(Fraction(e["coeff"]))
    ref = {k: (n, frozenset(w)) for k, (n, w) in ref.items()}
    targets = {k[0] for k in ref} | set(anon)
    fmt = lambda v: "absent" if v is None else f"{v[0]} x {sorted(map(str, v[1]))}"
    for tgt, printed in anon.items():
        rest = sorted((n, min(w)) for (t, src), (n, w) in gen.items()
                      if t == tgt and (t, src) not in ref)
        if rest != sorted(printed):
            report.append(f"target {tgt}: unnamed sources {[f'{n}x{w}' for n, w in rest]}, "
                          f"printed {[f'{n}x{w}' for n, w in sorted(printed)]}")
    for key in sorted(set(gen) | set(ref)):
        if key[0] not in targets:
            continue  # groups beyond the transcribed ones
        if key[0] in anon and key not in ref:
            continue  # compared above as unnamed
        g, r = gen.get(key), ref.get(key)
        if g != r:
            report.append(f"target {key[0]} source {key[1]}: generated {fmt(g)}, printed {fmt(r)}")
    return not report, report


# -- driver ----------------------------------------------------------------------------

def check_fixture(fx):
    kind = fx.get("kind")
    if kind == "sde":
        return check_sde(fx)
    if kind == "yterm":
        out, rep = True, []
        for assign in fx.get("assignments", [{"a": 1, "b": 2, "c": 3}]):
            ok, r = check_yterm(fx, assign)
            out &= ok
            rep.extend(f"{assign}: {line}" for line in r)
        return out, rep
    raise GoldenError(f"unknown fixture kind {kind!r}")


def check_all():
    """``{fixture id: (ok, report)}`` for every reference file."""
    out = {}
    for p in sorted(fixture_dir().glob("*.json")):
        if p.name == "names.json":
            continue
        fx = json.loads(p.read_text())
        if fx.get("kind") in ("sde", "yterm"):
            out[fx["id"]] = check_fixture(fx)
    return out
