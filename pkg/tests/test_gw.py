import itertools

import pytest
from hypothesis import given, settings, strategies as st

from tsde.gw_boundary import (COLOURS, PAIRS, GwGraph, admissible_edge, check_gw, conjugate,
                              enumerate_gw_boundaries, family, gw_census, render_gw)


def brute_classes(n):
    """Every labelled edge choice, canonicalised over all vertex permutations."""
    seen = set()
    for cols in itertools.product(COLOURS, repeat=n):
        slots = [(v, lab) for v in range(n) for lab in PAIRS if cols[v][0] in lab]
        for edges in _all_matchings(slots, cols):
            g = GwGraph(cols, tuple(edges))
            if check_gw(g):
                continue
            seen.add(min(_key(cols, edges, p) for p in itertools.permutations(range(n))))
    return seen


def _all_matchings(slots, cols):
    if not slots:
        yield []
        return
    (u, lab), rest = slots[0], slots[1:]
    for j, (v, lab2) in enumerate(rest):
        if lab2 == lab and v != u and admissible_edge(cols[u], cols[v], lab):
            for m in _all_matchings(rest[:j] + rest[j + 1:], cols):
                yield [(min(u, v), max(u, v), lab)] + m


def _key(cols, edges, p):
    return (tuple(cols[p.index(i)] for i in range(len(cols))),
            tuple(sorted((min(p[u], p[v]), max(p[u], p[v]), lab) for u, v, lab in edges)))


def test_four_two_point_functions():
    gs = enumerate_gw_boundaries(2)
    assert len(gs) == 4
    assert {g.colours for g in gs} == {((a, 0), (a, 1)) for a in range(4)}


@pytest.mark.parametrize("n", [2, 4])
def test_counts_match_brute_force(n):
    assert len(enumerate_gw_boundaries(n)) == len(brute_classes(n))


def test_four_point_families():
    fams = gw_census(4)["families"]
    for name in ("broken", "unbroken", "mixed", "exceptional"):
        assert fams.get(name, 0) > 0
    assert fams == {"broken": 4, "unbroken": 12, "mixed": 12, "mixed-disconnected": 6,
                    "exceptional": 2, "exceptional-mixed-bars": 14}
    assert sum(fams.values()) == 50


def test_every_class_is_valid_and_closed_under_conjugation():
    gs = enumerate_gw_boundaries(4)
    assert all(check_gw(g) == [] for g in gs)
    assert {conjugate(g) for g in gs} == set(gs)
    assert all(family(conjugate(g)) == family(g) for g in gs)


def test_connectivity_filter():
    con = enumerate_gw_boundaries(4, connected=True)
    dis = enumerate_gw_boundaries(4, connected=False)
    assert len(con) + len(dis) == 50
    assert all(g.is_connected() for g in con) and not any(g.is_connected() for g in dis)


@given(st.sampled_from(COLOURS), st.sampled_from(COLOURS), st.sampled_from(PAIRS))
@settings(max_examples=100)
def test_edge_rule_is_symmetric(A, B, lab):
    assert admissible_edge(A, B, lab) == admissible_edge(B, A, lab)
    if admissible_edge(A, B, lab):
        assert A[0] in lab and B[0] in lab


def test_check_gw_reports_problems():
    bad = GwGraph(((0, 0), (0, 0)), ((0, 1, (0, 1)), (0, 1, (0, 2)), (0, 1, (0, 3))))
    assert check_gw(bad)


@pytest.mark.parametrize("n", [0, 3, 6])
def test_unsupported_sizes(n):
    with pytest.raises(ValueError):
        enumerate_gw_boundaries(n)


def test_render():
    assert render_gw(enumerate_gw_boundaries(2)[0]) == "gw[0,~0|0-1:01,0-1:02,0-1:03]"
