from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import brute_aut, graphs, perms
from tsde.cli_io import GraphSyntaxError, parse_graph, render_class, render_graph
from tsde.enumeration import orbit_reps
from tsde.golden import resolve
from tsde.graph_core import (ColouredGraph, DisconnectedGraph, aut_group, aut_order,
                             aut_order_disconnected, bar, canonical_form, components,
                             disjoint_union, gurau_degree, is_connected, is_isomorphic,
                             jackets, recolour, relabel)
from tsde.sde_generator import X_graph

MELON = ColouredGraph(3, 1, ((1,), (1,), (1,)))


def named(n, D=3):
    return resolve(n, D)


@pytest.mark.parametrize("name,order", [
    ("m", 1), ("V_a", 2), ("V_b", 2), ("V_c", 2), ("K33", 3),
    ("Q_a", 3), ("Q_b", 3), ("Q_c", 3), ("E_abc", 1), ("E_bac", 1), ("E_cab", 1),
])
def test_named_aut_orders(name, order):
    g = named(name)
    assert aut_order(g) == order == brute_aut(g)


@pytest.mark.parametrize("k", range(1, 7))
def test_theta_family_is_cyclic(k):
    g = X_graph(k)
    assert is_connected(g)
    assert aut_order(g) == k
    rots = {tuple(p) for p in aut_group(g)}
    assert tuple(list(range(2, k + 1)) + [1]) in rots or k == 1


def test_disconnected_aut_product_matches_brute_force():
    # every rank-3 class with 2k <= 8 vertices, connected or not
    for k in range(1, 5):
        for g, _ in orbit_reps(3, k):
            assert aut_order_disconnected(g) == brute_aut(g), render_graph(g)


def test_degree_sphere_and_torus():
    assert gurau_degree(MELON) == 0
    assert gurau_degree(named("K33")) == 1


def test_planar_cube_is_not_melonic():
    # three colours: degree zero means planar, and the cube has no double edge to remove
    cube = named("Cube")
    assert gurau_degree(cube) == 0 and aut_order(cube) == 4
    assert all(len({cube.tau[a][i] for a in range(3)}) == 3 for i in range(4))


@pytest.mark.parametrize("D,n", [(3, 1), (4, 3), (5, 12)])
def test_jacket_count(D, n):
    assert len(jackets(D)) == n


def test_four_vertex_rank3_all_melonic_degree():
    for g, _ in orbit_reps(3, 2):
        for c in components(g).components:
            assert gurau_degree(c) == 0


def test_degree_is_half_integer_and_nonnegative():
    for D in (3, 4):
        for g, _ in orbit_reps(D, 3):
            if is_connected(g):
                d = gurau_degree(g)
                assert d >= 0 and (2 * d).denominator == 1


@given(graphs(), st.data())
@settings(max_examples=80, deadline=None)
def test_canonical_form_invariant_under_relabelling(g, data):
    sigma, pi = data.draw(perms(g.k)), data.draw(perms(g.k))
    h = relabel(g, sigma, pi)
    assert canonical_form(h) == canonical_form(g)
    assert aut_order(h) == aut_order(g)


@given(graphs(max_k=4))
@settings(max_examples=60, deadline=None)
def test_aut_order_matches_brute_force(g):
    if is_connected(g):
        assert aut_order(g) == brute_aut(g)
    else:
        assert aut_order_disconnected(g) == brute_aut(g)


@given(graphs(max_k=4))
@settings(max_examples=60, deadline=None)
def test_degree_invariant_under_bar_and_recolouring(g):
    if not is_connected(g):
        return
    d = gurau_degree(g)
    assert gurau_degree(bar(g)) == d
    perm = tuple(reversed(range(1, g.D + 1)))
    assert gurau_degree(recolour(g, perm)) == d


@given(graphs(max_k=4))
@settings(max_examples=60, deadline=None)
def test_render_parse_round_trip(g):
    text = render_graph(g)
    back = parse_graph(text)
    flat = back.to_graph() if isinstance(back, DisconnectedGraph) else back
    assert is_isomorphic(flat, g)
    assert render_graph(back) == text


def test_parse_examples():
    assert parse_graph("g{D=3,k=1}[1|1|1]") == MELON
    # all three colours equal: three parallel melons, not the cyclic six-vertex graph
    g = parse_graph("g{D=3,k=3}[2,3,1|2,3,1|2,3,1]")
    flat = g.to_graph() if isinstance(g, DisconnectedGraph) else g
    assert len(components(flat).components) == 3
    assert aut_order_disconnected(flat) == 6
    assert aut_order(parse_graph(render_graph(X_graph(3)))) == 3


@pytest.mark.parametrize("text", [
    "g{D=3,k=2}[1,1|1,2|1,2]", "g{D=3,k=2}[1,2|1,2]", "g{D=3,k=2}[1,2|1,2|1,3]", "h{D=3,k=1}[1|1|1]",
])
def test_parse_errors(text):
    with pytest.raises(GraphSyntaxError):
        parse_graph(text)


def test_disjoint_union_and_components():
    g = disjoint_union(MELON, named("V_a"))
    assert render_class(g.to_graph()) == render_class(disjoint_union(named("V_a"), MELON).to_graph())
    assert len(components(g.to_graph()).components) == 2
    assert aut_order_disconnected(disjoint_union(MELON, MELON)) == 2


@given(graphs())
@settings(max_examples=50, deadline=None)
def test_bar_is_an_involution(g):
    assert bar(bar(g)) == g


@pytest.mark.parametrize("k", range(1, 6))
def test_theta_family_is_self_conjugate(k):
    assert is_isomorphic(bar(X_graph(k)), X_graph(k))
