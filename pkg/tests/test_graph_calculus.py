from fractions import Fraction

from hypothesis import given, settings, strategies as st

from conftest import perms
from tsde.golden import resolve
from tsde.graph_calculus import (CorrelationSymbol, delta_contract, graph_derivative,
                                 isomorphisms, pairing, pullback)
from tsde.graph_core import aut_order, compose, relabel
from tsde.sde_generator import X_graph


@st.composite
def symbol_and_perms(draw):
    k = draw(st.integers(1, 5))
    f = CorrelationSymbol(X_graph(k), draw(perms(k)))
    return f, draw(perms(k)), draw(perms(k))


@given(symbol_and_perms())
@settings(max_examples=100, deadline=None)
def test_pullback_is_a_right_action(data):
    f, s, t = data
    assert pullback(s, pullback(t, f)) == pullback(compose(t, s), f)


@given(symbol_and_perms())
@settings(max_examples=50, deadline=None)
def test_pullback_moves_arguments(data):
    f, s, _ = data
    cols = [(("x", 1, a),) for a in range(1, f.graph.k + 1)]
    # reading through sigma^* f is reading f at the permuted columns
    pulled = pullback(s, f).read(cols)
    from tsde.graph_core import inverse
    sinv = inverse(s)
    assert pulled == f.read([cols[sinv[a] - 1] for a in range(len(cols))])


def test_isomorphism_count_is_aut_order():
    for name in ("m", "V_a", "K33", "Q_a", "E_abc"):
        g = resolve(name, 3)
        assert len(isomorphisms(g, g)) == aut_order(g)


def test_derivative_between_relabelled_copies():
    g = resolve("K33", 3)
    h = relabel(g, (2, 3, 1), (3, 1, 2))
    assert len(graph_derivative(g, h)) == 3
    assert graph_derivative(g, resolve("Q_a", 3)) == []


def test_delta_contract_on_quartic_melon():
    V = resolve("V_a", 3)
    fr = delta_contract(V, 1, 1, weight=Fraction(1, 2))
    assert fr.target.k == 1
    assert fr.weight == Fraction(1, 2)
    # the removed white reads s_1 in colour 1 and the surviving white's variables elsewhere
    assert fr.args == ((("s", 1), ("y", 2, 1), ("y", 3, 1)), (("y", 1, 1), ("y", 2, 1), ("y", 3, 1)))
    assert len(pairing(V, 2)) == 2
