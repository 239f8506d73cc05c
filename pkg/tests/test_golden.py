import copy
from fractions import Fraction

import pytest

from tsde.cli_io import load_fixtures
from tsde.golden import GoldenError, check_all, check_fixture, printed_variant

FIXTURES = [fx for fx in load_fixtures() if fx.get("kind") in ("sde", "yterm")]
ERRATA = [(fx["id"], i) for fx in FIXTURES for i, e in enumerate(fx.get("errata", [])) if "path" in e]
BY_ID = {fx["id"]: fx for fx in FIXTURES}


@pytest.mark.parametrize("fid", sorted(BY_ID))
def test_fixture_matches_generator(fid):
    ok, report = check_fixture(BY_ID[fid])
    assert ok, report


@pytest.mark.slow
@pytest.mark.parametrize("fid,i", ERRATA)
def test_printed_variant_is_rejected(fid, i):
    """Undoing a single recorded correction must break agreement."""
    try:
        ok, _ = check_fixture(printed_variant(BY_ID[fid], [i]))
    except (GoldenError, ValueError, KeyError):
        ok = False
    assert not ok


def test_perturbed_coefficient_is_rejected():
    fx = copy.deepcopy(BY_ID["fourSDE"])
    fx["fblock"][0]["coeff"] = str(Fraction(fx["fblock"][0]["coeff"]) * 2)
    ok, report = check_fixture(fx)
    assert any("coefficient" in line for line in report)
    assert not ok


def test_check_all_covers_every_fixture():
    res = check_all()
    assert set(res) == set(BY_ID)
    assert all(ok for ok, _ in res.values())
