import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from linklab.diagram import (
    Component,
    Diagram,
    DiagramError,
    Passage,
    linking_matrix,
    reverse_components,
    simplify,
    sublink,
    validate_diagram,

)
from linklab.kirby import is_planar
from linklab.satellites import borromean, hopf, whitehead_link
from moves import random_sequence
from oracles import linking_from_json

BASES = {"hopf": hopf(1), "whitehead": whitehead_link(1), "borromean": borromean()}

def test_unpaired_crossing_is_reported():
    d = Diagram((Component("K", (Passage(0, True, 1),)),))
    assert validate_diagram(d)

def test_sign_mismatch_is_reported():
    d = Diagram((Component("K", (Passage(0, True, 1), Passage(0, False, -1))),))
    assert validate_diagram(d)

@pytest.mark.parametrize("name", sorted(BASES))
def test_linking_matches_crossing_count(name):
    d = BASES[name]
    assert linking_matrix(d).tolist() == linking_from_json(d.to_json())

@pytest.mark.parametrize("name", sorted(BASES))
def test_json_round_trip(name):
    d = BASES[name]
    assert Diagram.from_json(d.to_json()) == d

def test_malformed_json_raises():
    with pytest.raises(DiagramError):
        Diagram.from_json("{")

def test_reversal_flips_linking():
    d = reverse_components(hopf(1), ["L1"])
    assert linking_matrix(d)[0, 1] == -1

def test_sublink_drops_crossings():
    d = sublink(borromean(), ["L1", "L2"])
    assert not d.crossings() or not np.any(linking_matrix(d))
    assert simplify(d).crossings() == {}

@pytest.mark.parametrize("name", sorted(BASES))
def test_bases_are_planar(name):
    assert is_planar(BASES[name])

def test_sign_flip_breaks_planarity():
    d = whitehead_link(1)
    x = next(x for x, i in d.crossings().items() if i.over[0] != i.under[0])
    flipped = Diagram(
        tuple(
            Component(c.label, tuple(Passage(p.crossing, p.over, -p.sign if p.crossing == x else p.sign) for p in c.passages))
            for c in d.components
        )
    )
    assert not is_planar(flipped)

@settings(max_examples=120, deadline=None)
@given(st.sampled_from(sorted(BASES)), st.data())
def test_reidemeister_keeps_linking(name, data):
    d0 = BASES[name]
    d = random_sequence(data, d0)
    assert not validate_diagram(d)
    assert np.array_equal(linking_matrix(d), linking_matrix(d0))
