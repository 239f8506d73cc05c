import json

import pytest

from tsde.boundary_feynman import (OpenGraph, boundary, cone, is_feynman, melonic_quartic,
                                   parse_open, realize_boundary, render_open, simple_v1_model,
                                   vertex_V)
from tsde.cli_io import fixture_dir, render_class
from tsde.enumeration import enumerate_connected
from tsde.golden import resolve
from tsde.graph_core import DisconnectedGraph, bar

FIG = json.loads((fixture_dir() / "fig1.json").read_text())
PANELS = {g["panel"]: g for g in FIG["graphs"]}


def cls(B):
    return render_class(B.to_graph() if isinstance(B, DisconnectedGraph) else B)


@pytest.mark.parametrize("panel", sorted(PANELS))
def test_fig1_captions(panel):
    d = PANELS[panel]
    g = parse_open(d["open"])
    assert is_feynman(g, melonic_quartic(3)) == d["feynman"]
    B = boundary(g)
    if d["boundary"] is None:
        assert isinstance(B, DisconnectedGraph) and B.k == 0
    else:
        assert cls(B) == cls(resolve(d["boundary"], 3))


@pytest.mark.parametrize("panel", sorted(PANELS))
def test_open_text_round_trip(panel):
    g = parse_open(PANELS[panel]["open"])
    assert parse_open(render_open(g)) == g


def test_cone_inverts_boundary():
    for k in (1, 2, 3):
        for c in enumerate_connected(3, k):
            g = cone(c.canonical)
            assert cls(boundary(g)) == cls(c.canonical)
            assert not is_feynman(g, melonic_quartic(3)) or k == 2


@pytest.mark.parametrize("k", [1, 2])
def test_realize_every_small_boundary(k):
    model = melonic_quartic(3)
    for c in enumerate_connected(3, k):
        g = realize_boundary(c.canonical, model)
        assert g is not None, c.canonical
        assert is_feynman(g, model)
        assert cls(boundary(g)) == cls(c.canonical)


def test_simple_model_vertex_set():
    vs = simple_v1_model()
    assert len(vs.vertices) == 1 and vs.vertices[0] == vertex_V(3, 1)
    with pytest.raises(ValueError):
        type(vs)(3, (vertex_V(3, 1), vertex_V(3, 1)))


def test_open_graph_validation():
    with pytest.raises(ValueError):
        OpenGraph(3, 1, ((1,), (1,), (1,)), (("ext", 1),), (("ext", 3),))
    with pytest.raises(ValueError):
        parse_open("closed{D=3}")
