import numpy as np
import pytest

from linklab.diagram import DiagramError, linking_matrix, validate_diagram
from linklab.kirby import H1Group
from linklab.milnor import is_homotopy_trivial, mu_table
from linklab.scenarios import (
    ScenarioSpec,
    Theorem1Report,
    banded_system,
    build_universal_link,
    extract_figure8_lagrangian,
    fig9_example,
    lagrangian_size,
    natural_system,
    surgery_slides,
    verify_theorem1,
)
from linklab.seifert import check_lagrangian_trivial, plus_test_links


def test_spec_defaults_follow_pairing_rule():
    spec = ScenarioSpec()
    assert spec.clasps == ((-1, 1), (-1, 1))
    assert spec.surface_sides == (("up", "down"), ("up", "down"))
    assert spec.band_plan() == ((1,), (1,))
    assert ScenarioSpec.from_dict(spec.to_dict()) == spec


@pytest.mark.parametrize(
    "kwargs",
    [
        {"multiplicities": (0, 2)},
        {"family": "3x"},
        {"inner_clasp": 2},
        {"clasps": ((1,), (1, 1))},
        {"clasps": ((-1, 1), (1, 1)), "surface_sides": (("up", "up"), ("up", "up"))},
    ],
)
def test_spec_rejects(kwargs):
    with pytest.raises(DiagramError):
        ScenarioSpec(**kwargs)


def test_simplified_2_2_link():
    d = build_universal_link(ScenarioSpec())
    assert len(d.components) == 4
    assert not np.any(linking_matrix(d))
    assert not validate_diagram(d)


def test_simplified_1_1_link():
    d = build_universal_link(ScenarioSpec(multiplicities=(1, 1)))
    assert len(d.components) == 2


def test_family_2a_single():
    d = build_universal_link(ScenarioSpec("2a", (1, 1)))
    assert len(d.components) == 4
    assert is_homotopy_trivial(d)


@pytest.mark.parametrize("family", ["2b", "2c"])
def test_other_families_are_trivial(family):
    d = build_universal_link(ScenarioSpec(family, (1, 1)))
    assert not validate_diagram(d)
    assert is_homotopy_trivial(d)


def test_fig9_family_is_whitehead_pair():
    d = build_universal_link(ScenarioSpec("fig9", (1, 1)))
    assert len(d.components) == 2


@pytest.mark.parametrize("kj,count", [((1, 1), 2), ((2, 1), 4), ((2, 2), 6), ((3, 2), 7)])
def test_lagrangian_counts(kj, count):
    spec = ScenarioSpec(multiplicities=kj)
    assert lagrangian_size(spec) == count
    lag = extract_figure8_lagrangian(banded_system(spec, outer=False))
    assert len(lag.components) == count
    assert not np.any(linking_matrix(lag))


def test_outer_doubling_does_not_change_lagrangian():
    spec = ScenarioSpec()
    with_outer = extract_figure8_lagrangian(banded_system(spec))
    without = extract_figure8_lagrangian(banded_system(spec, outer=False))
    assert with_outer.labels == without.labels
    assert mu_table(with_outer, 4).to_dict() == mu_table(without, 4).to_dict()


def test_natural_lagrangian_is_essential():
    rep = check_lagrangian_trivial(natural_system(ScenarioSpec(), outer=False))
    assert not rep
    assert rep.witnesses[0][0] == "mu4"


def test_same_clasp_copies_cannot_be_banded():
    spec = ScenarioSpec(clasps=((-1, -1), (-1, -1)))
    assert spec.band_plan() == ((), ())
    assert not check_lagrangian_trivial(banded_system(spec, outer=False))


def test_surgery_slides_keep_zero_framings():
    before, after, moves = surgery_slides(ScenarioSpec())
    assert len(moves) == 2
    assert set(after.framings.values()) == {0}
    assert set(before.labels) == set(after.labels)


def test_theorem1_small_case_round_trip():
    rep = verify_theorem1(ScenarioSpec(multiplicities=(1, 1)))
    assert rep.banded_lagrangian_trivial and rep.natural_lagrangian_trivial
    assert rep.as_expected
    assert rep.h1 == str(H1Group(2, ()))
    back = Theorem1Report.from_dict(rep.to_dict())
    assert back.to_dict() == rep.to_dict()


def test_theorem1_cap(monkeypatch):
    monkeypatch.setenv("LINKLAB_MAX_COMPONENTS", "5")
    with pytest.raises(DiagramError):
        verify_theorem1(ScenarioSpec())


def test_theorem1_family_check():
    with pytest.raises(DiagramError):
        verify_theorem1(ScenarioSpec("2a", (1, 1)))


@pytest.mark.parametrize("clasp", [1, -1])
def test_fig9_plus_links_trivial(clasp):
    cs = fig9_example(clasp)
    for name, d in plus_test_links(cs):
        assert is_homotopy_trivial(d), name
    lag = extract_figure8_lagrangian(cs)
    assert len(lag.components) == 2 and is_homotopy_trivial(lag)


def test_one_case_one_side_is_enough():
    spec = ScenarioSpec(clasps=((-1, -1), (-1, 1)))
    assert spec.band_plan() == ((), (1,))
    rep = verify_theorem1(spec)
    assert rep.lagrangian_component_count == 5
    assert rep.banded_lagrangian_trivial and not rep.natural_lagrangian_trivial


def test_case_two_on_both_sides_is_reported_obstructed():
    rep = verify_theorem1(ScenarioSpec(clasps=((-1, -1), (-1, -1))))
    assert not rep.banded_lagrangian_trivial
    assert not rep.as_expected
    assert rep.banded_report.witnesses
