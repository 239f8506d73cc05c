from collections import Counter

import pytest

from tsde.cli_io import validate
from tsde.golden import resolve
from tsde.sde_generator import (MELONIC, SIMPLE, X_graph, equation_from_json, equation_multiset_equal,
                                equation_to_json, in_sector, model, render, sde_equation, y_term)
from tsde.symbolic import term_key


def origins(eq):
    return Counter(t.meta.get("origin") for t in eq.rhs)


def test_two_point_equation_shape():
    eq = sde_equation(MELONIC, resolve("m", 3))
    o = origins(eq)
    assert o["free"] == 1
    assert len(eq.dressing) == 3
    assert eq.metadata["s"] == ["x^1_1", "x^1_2", "x^1_3"]


@pytest.mark.parametrize("k", [2, 3])
def test_simple_model_alpha_changes_only_labels(k):
    # rotating the cyclic graph maps the black vertex alpha to alpha + 1
    B = X_graph(k)
    base = sde_equation(SIMPLE, B, 1)
    for alpha in range(2, k + 1):
        other = sde_equation(SIMPLE, B, alpha)
        ok, rep = equation_multiset_equal(base, other, "relabel")
        assert ok, rep[:5]


def test_sector_of_simple_model():
    assert all(in_sector(SIMPLE, X_graph(k)) for k in range(1, 5))
    assert not in_sector(SIMPLE, resolve("K33", 3))
    with pytest.raises(ValueError):
        sde_equation(SIMPLE, resolve("K33", 3))


@pytest.mark.parametrize("name", ["m", "V_a", "K33"])
def test_json_round_trip_and_schema(name):
    eq = sde_equation(MELONIC, resolve(name, 3))
    d = equation_to_json(eq)
    validate(d, "equation")
    back = equation_from_json(d)
    ok, rep = equation_multiset_equal(eq, back)
    assert ok, rep


def test_renderers_are_deterministic():
    eq = sde_equation(MELONIC, resolve("V_a", 3))
    for fmt in ("json", "text", "latex"):
        assert render(eq, fmt) == render(sde_equation(MELONIC, resolve("V_a", 3)), fmt)
    with pytest.raises(ValueError):
        render(eq, "pdf")


def test_multiset_equality_detects_a_change():
    eq = sde_equation(MELONIC, resolve("V_a", 3))
    other = sde_equation(MELONIC, resolve("V_a", 3))
    other.rhs[0] = other.rhs[0].scaled(2, 0, ())
    ok, rep = equation_multiset_equal(eq, other)
    assert not ok and rep


def test_model_and_yterm_guards():
    with pytest.raises(ValueError):
        model("phi4")
    out = y_term(model("melonic-quartic", 3), 1, 4)
    assert out and all(out.values())


@pytest.mark.parametrize("k", [1, 2, 3])
def test_swap_and_difference_families(k):
    from tsde.enumeration import enumerate_connected
    for c in enumerate_connected(3, k):
        for alpha in range(1, k + 1):
            eq = sde_equation(MELONIC, c.canonical, alpha)
            swaps = {(t.meta["colour"], t.meta["rho"]) for t in eq.rhs if t.meta.get("origin") == "swap"}
            diffs = {t.meta["colour"] for t in eq.rhs if t.meta.get("origin") == "bdiff"}
            # rho runs over the other black vertices
            assert len(swaps) == (k - 1) * 3
            assert diffs == {1, 2, 3}
            assert origins(eq)["free"] == (k == 1)
