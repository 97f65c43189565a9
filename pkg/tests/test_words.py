import pytest
from hypothesis import given, settings, strategies as st

from linklab.words import MagnusSeries, Word, coefficient, commutator, free_reduce, magnus_expand, series_multiply
from oracles import magnus

N = 3

letters = st.lists(st.tuples(st.integers(1, N), st.sampled_from([-2, -1, 1, 2])), max_size=8)
words = letters.map(Word)


def test_free_reduce_cancels_adjacent_inverses():
    assert free_reduce([(1, 1), (2, 1), (2, -1), (1, -1)]).is_identity()
    assert Word([(1, 2), (1, -1)]) == Word.gen(1)


def test_parse_round_trip():
    w = Word.parse("x1^2 x3^-1 x2")
    assert Word.parse(str(w)) == w
    assert Word.parse("1").is_identity()


def test_bad_generator_rejected():
    with pytest.raises(ValueError):
        Word([(0, 1)])


def test_commutator_expansion_starts_in_degree_two():
    s = magnus_expand(commutator(Word.gen(1), Word.gen(2)), 2, 3)
    assert coefficient(s, (1,)) == 0
    assert coefficient(s, (1, 2)) == 1 and coefficient(s, (2, 1)) == -1


def test_reduced_mode_drops_repeats():
    s = magnus_expand(Word.gen(1, 3), 1, 3, reduced=True)
    assert s.terms == {(): 1, (1,): 3}


@settings(max_examples=200, deadline=None)
@given(words)
def test_matches_plain_polynomial_oracle(w):
    s = magnus_expand(w, N, 4)
    assert dict(s.terms) == magnus(list(w.letters), 4)


@settings(max_examples=1000, deadline=None)
@given(words, words, st.integers(0, 6), st.booleans())
def test_multiplicative_and_inverse(u, v, deg, reduced):
    def M(w):
        return magnus_expand(w, N, deg, reduced)

    assert M(u * v) == series_multiply(M(u), M(v))
    assert M(u) * M(u.inverse()) == MagnusSeries.one(N, deg, reduced)


def test_series_json_round_trip():
    s = magnus_expand(Word.parse("x1 x2^-1"), 2, 3)
    assert MagnusSeries.from_json(s.to_json(), 2, 3) == s
