from dataclasses import replace

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from linklab.diagram import Diagram, DiagramError, linking_matrix, simplify, validate_diagram
from linklab.kirby import (
    H1Group,
    SurgeryPresentation,
    apply_moves,
    blow_down,
    blow_up,
    h1_surgery,
    handle_slide,
    is_planar,
    slide_sites,
    smith_normal_form,
    twist_configuration,
)
from linklab.satellites import borromean, hopf, unknot, unlink, whitehead_link


def framed(d: Diagram, *framings) -> SurgeryPresentation:
    comps = tuple(replace(c, framing=f) for c, f in zip(d.components, framings))
    return SurgeryPresentation(Diagram(comps))


# -- Smith normal form ----------------------------------------------------------

matrices = st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n), min_size=n, max_size=n)
)


@settings(max_examples=200, deadline=None)
@given(matrices)
def test_snf_factorisation(rows):
    M = np.array(rows, dtype=object)
    D, P, Q = smith_normal_form(M)
    assert (P.dot(M).dot(Q) == D).all()
    assert abs(round(float(np.linalg.det(P.astype(float))))) == 1
    assert abs(round(float(np.linalg.det(Q.astype(float))))) == 1
    diag = [int(D[i, i]) for i in range(len(rows))]
    assert not np.any(D - np.diag(diag))
    nz = [x for x in diag if x]
    assert all(x > 0 for x in nz)
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert diag[len(nz):] == [0] * (len(diag) - len(nz))


def test_snf_examples():
    assert np.diag(smith_normal_form(np.array([[0, 1], [1, 0]], dtype=object))[0]).tolist() == [1, 1]
    assert np.diag(smith_normal_form(np.array([[2, 0], [0, 3]], dtype=object))[0]).tolist() == [1, 6]


# -- H1 -------------------------------------------------------------------------


@pytest.mark.parametrize(
    "sp,expected",
    [
        (framed(unknot(), 0), H1Group(1, ())),
        (framed(unknot(), 5), H1Group(0, (5,))),
        (framed(unknot(), 1), H1Group(0, ())),
        (framed(hopf(1), 0, 0), H1Group(0, ())),
        (framed(whitehead_link(1), 0, 0), H1Group(2, ())),
        (framed(unlink(2), 2, 3), H1Group(0, (6,))),
    ],
)
def test_h1_examples(sp, expected):
    assert h1_surgery(sp) == expected


def test_h1_text():
    assert str(H1Group(2, (4,))) == "Z/4 + Z + Z"
    assert str(H1Group(0, ())) == "0"


def test_planarity_of_bases():
    for d in (hopf(1), whitehead_link(-1), borromean()):
        assert is_planar(d)


def test_presentation_json_round_trip():
    sp = twist_configuration()
    assert SurgeryPresentation.from_json(sp.to_json()) == sp


def test_presentation_needs_framings():
    with pytest.raises(DiagramError):
        SurgeryPresentation.from_dict({"components": [{"label": "K", "passages": []}]})


# -- moves ----------------------------------------------------------------------


def test_slide_framing_formula():
    sp = framed(hopf(1), 2, 3)
    for sign in (1, -1):
        _, out = next(slide_sites(sp, "L1", "L2", sign))
        assert out.framings["L1"] == 2 + 3 + 2 * sign * 1
        assert h1_surgery(out) == h1_surgery(sp)


def test_slide_rejects_bad_labels():
    with pytest.raises(DiagramError):
        handle_slide(framed(hopf(1), 0, 0), "L1", "L1", (0, 0))


def test_twist_configuration_blow_down():
    for eps in (1, -1):
        sp = twist_configuration(eps)
        lk = int(linking_matrix(sp.diagram)[0, 1])
        out = blow_down(sp, "U1")
        assert out.framings == {"K1": 0 - eps * lk * lk}
        assert h1_surgery(out) == h1_surgery(sp)
    assert blow_down(twist_configuration(-1), "U1").framings["K1"] == 4


def test_twist_configuration_copies():
    sp = twist_configuration(-1, copies=2)
    assert h1_surgery(sp) == H1Group(0, (4, 4))


def test_blow_down_needs_unit_framing():
    with pytest.raises(DiagramError):
        blow_down(framed(unknot("U"), 2), "U")


def test_blow_up_then_down_restores():
    sp = framed(whitehead_link(1), 0, 0)
    up = blow_up(sp, [("L1", 0, 1)], -1)
    assert up.framings["U"] == -1
    down = blow_down(up, "U")
    assert down.framings == sp.framings
    assert simplify(down.diagram).to_dict() == simplify(sp.diagram).to_dict()


def test_apply_moves_script():
    sp = twist_configuration()
    out = apply_moves(sp, [{"move": "blow", "direction": "down", "site": "U1"}])
    assert out.framings == {"K1": 4}
    with pytest.raises(DiagramError):
        apply_moves(sp, [{"move": "twirl"}])


BASES = [
    lambda: framed(hopf(1), 0, 1),
    lambda: framed(whitehead_link(1), 0, 0),
    lambda: framed(borromean(), 1, 0, -2),
    lambda: framed(unlink(2), 2, 0),
]


def random_kirby_move(data, sp):
    fresh = next(f"U{n}" for n in range(100) if f"U{n}" not in sp.labels)
    kind = data.draw(st.sampled_from(["slide", "up", "down"]))
    labels = sp.labels
    if kind == "slide" and len(labels) > 1:
        i, j = data.draw(st.permutations(labels))[:2]
        p = data.draw(st.integers(0, max(len(sp.diagram.component(i).passages), 1) - 1))
        q = data.draw(st.integers(0, max(len(sp.diagram.component(j).passages), 1) - 1))
        try:
            return handle_slide(sp, i, j, (p, q), data.draw(st.sampled_from([1, -1])))
        except DiagramError:
            return sp
    if kind == "up":
        lab = data.draw(st.sampled_from(labels))
        pos = data.draw(st.integers(0, max(len(sp.diagram.component(lab).passages), 1) - 1))
        return blow_up(sp, [(lab, pos, 1)], data.draw(st.sampled_from([1, -1])), label=fresh)
    units = [l for l in labels if abs(sp.framings[l]) == 1 and len(labels) > 1]
    if units:
        try:
            return blow_down(sp, data.draw(st.sampled_from(units)))
        except DiagramError:
            return sp
    return sp


@settings(max_examples=120, deadline=None)
@given(st.integers(0, len(BASES) - 1), st.data())
def test_random_moves_keep_h1(base, data):
    sp = BASES[base]()
    h = h1_surgery(sp)
    for _ in range(data.draw(st.integers(1, 3))):
        sp = random_kirby_move(data, sp)
        assert not validate_diagram(sp.diagram)
        assert is_planar(sp.diagram)
    assert h1_surgery(sp) == h
