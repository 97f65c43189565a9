import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from linklab.diagram import DiagramError
from linklab.scenarios import ScenarioSpec, banded_system, fig9_example, natural_system
from linklab.seifert import (
    ConditionReport,
    CurveSystem,
    SeifertMatrix,
    check_lagrangian_trivial,
    is_extended_form,
    is_good_block_form,
    nielsen_congruence,
    plus_test_links,
    search_good_basis,
    seifert_matrix_of,
    symplectic_form,
    symplectic_moves,
)

FIG9 = [[0, 1, 1, 0], [0, 0, 0, 0], [1, 0, 0, 1], [0, 0, 0, 0]]


@pytest.fixture(scope="module")
def fig9():
    return fig9_example()


@pytest.fixture(scope="module")
def systems(fig9):
    spec = ScenarioSpec()
    return {
        "natural": natural_system(spec, outer=False),
        "banded": banded_system(spec, outer=False),
        "fig9": fig9,
    }


@pytest.mark.parametrize("name", ["natural", "banded", "fig9"])
def test_antisymmetric_part_is_intersection_form(systems, name):
    V = seifert_matrix_of(systems[name])
    A = V.entries - V.entries.T
    assert np.array_equal(np.abs(A), np.abs(symplectic_form(V.g)))


@pytest.mark.parametrize("name", ["natural", "banded", "fig9"])
def test_b_curves_span_a_lagrangian(systems, name):
    M = seifert_matrix_of(systems[name]).entries
    assert not np.any(M[1::2, 1::2])


def test_fig9_matrix(fig9):
    V = seifert_matrix_of(fig9)
    assert V.entries.tolist() == FIG9
    assert is_extended_form(V)
    rep = is_good_block_form(V)
    assert not rep
    assert {w[1] for w in rep.witnesses} == {"(a1,a2)", "(a2,a1)"}


def test_plus_links_count(fig9):
    links = plus_test_links(fig9)
    assert len(links) == 2 * fig9.genus
    assert all(len(d.components) == fig9.genus + 1 for _, d in links)


def test_natural_whitehead_double_basis_is_trivial():
    cs = natural_system(ScenarioSpec(multiplicities=(1, 1)), outer=False)
    assert check_lagrangian_trivial(cs)


def test_curve_system_round_trip(fig9):
    back = CurveSystem.from_json(fig9.to_json())
    assert back.to_dict() == fig9.to_dict()


def test_curve_system_rejects_missing_component(fig9):
    roles = dict(fig9.roles)
    roles["ghost"] = ("b_curve", 9, 1)
    with pytest.raises(DiagramError):
        CurveSystem(fig9.diagram, roles)


def test_failing_report_needs_witness():
    with pytest.raises(ValueError):
        ConditionReport("x", False, [])
    rep = ConditionReport("x", False, [("lk", "a,b", 1)])
    assert ConditionReport.from_dict(rep.to_dict()) == rep


def test_non_symplectic_move_rejected():
    V = SeifertMatrix(2, np.array(FIG9))
    with pytest.raises(ValueError):
        nielsen_congruence(V, [(0, 2, 1)])


def good(g, signs):
    M = np.zeros((2 * g, 2 * g), dtype=np.int64)
    for i, s in enumerate(signs):
        M[2 * i, 2 * i + 1] = s
    return SeifertMatrix(g, M)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.sampled_from([1, -1]), min_size=2, max_size=2), st.data())
def test_search_undoes_scrambling(signs, data):
    V = good(2, signs)
    J = V.entries - V.entries.T
    for _ in range(data.draw(st.integers(0, 2))):
        mv = data.draw(st.sampled_from(symplectic_moves(2)))
        try:
            V = nielsen_congruence(V, mv)
        except ValueError:
            continue
    assert np.array_equal(V.entries - V.entries.T, J)
    path = search_good_basis(V, max_depth=4)
    assert path is not None
    for mv in path:
        V = nielsen_congruence(V, mv)
    assert is_good_block_form(V)


def test_search_depth_capped():
    with pytest.raises(ValueError):
        search_good_basis(good(1, [1]), max_depth=7)
