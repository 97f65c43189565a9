"""Free-group words and truncated Magnus expansions.

A word is stored as a tuple of ``(generator, exponent)`` runs with adjacent
generators distinct, so structural equality is group equality.  Generators are
positive integers ``1..n``; the Magnus embedding sends ``x_i`` to ``1 + X_i``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Dict, Iterable, Mapping, Sequence, Tuple

Letter = Tuple[int, int]
Monomial = Tuple[int, ...]


def free_reduce(letters: Iterable[Letter]) -> "Word":
    out: list[list[int]] = []
    for gen, exp in letters:
        if gen < 1:
            raise ValueError(f"generator index must be positive, got {gen}")
        if exp == 0:
            continue
        if out and out[-1][0] == gen:
            out[-1][1] += exp
            if out[-1][1] == 0:
                out.pop()
        else:
            out.append([gen, exp])
    return Word(tuple((g, e) for g, e in out), _reduced=True)


@dataclass(frozen=True)
class Word:
    letters: Tuple[Letter, ...] = ()
    _reduced: bool = field(default=False, repr=False, compare=False)

    def __post_init__(self):
        if not self._reduced:
            object.__setattr__(self, "letters", free_reduce(self.letters).letters)
        object.__setattr__(self, "_reduced", True)

    @classmethod
    def identity(cls) -> "Word":
        return cls((), _reduced=True)

    @classmethod
    def gen(cls, i: int, exp: int = 1) -> "Word":
        return free_reduce([(i, exp)])

    @classmethod
    def parse(cls, text: str) -> "Word":
        """Parse ``"x1^2 x3^-1"``; ``"1"`` or an empty string is the identity."""
        text = text.strip()
        if text in ("", "1"):
            return cls.identity()
        letters = []
        for tok in text.split():
            m = re.fullmatch(r"x(\d+)(?:\^(-?\d+))?", tok)
            if not m:
                raise ValueError(f"bad word token {tok!r}")
            letters.append((int(m.group(1)), int(m.group(2) or 1)))
        return free_reduce(letters)

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return " ".join(f"x{g}" if e == 1 else f"x{g}^{e}" for g, e in self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return free_reduce(self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word(tuple((g, -e) for g, e in reversed(self.letters)), _reduced=True)

    def __pow__(self, n: int) -> "Word":
        base = self if n >= 0 else self.inverse()
        out = Word.identity()
        for _ in range(abs(n)):
            out = out * base
        return out

    def __len__(self) -> int:
        return sum(abs(e) for _, e in self.letters)

    def is_identity(self) -> bool:
        return not self.letters

    def exponent_sum(self, gen: int) -> int:
        return sum(e for g, e in self.letters if g == gen)

    def max_generator(self) -> int:
        return max((g for g, _ in self.letters), default=0)


def commutator(u: Word, v: Word) -> Word:
    return u * v * u.inverse() * v.inverse()


def _monomial_key(m: Monomial):
    return (len(m), m)


@dataclass(frozen=True)
class MagnusSeries:
    """Truncated non-commutative integer power series in ``X_1..X_n``.

    ``terms`` never stores zero coefficients; the constant term is keyed by
    the empty tuple.  In reduced mode monomials with a repeated index are
    dropped after every product.
    """

    num_vars: int
    max_degree: int
    reduced: bool
    terms: Mapping[Monomial, int]

    def __post_init__(self):
        clean = {}
        for mono, c in self.terms.items():
            mono = tuple(mono)
            if c == 0 or len(mono) > self.max_degree:
                continue
            if self.reduced and len(set(mono)) != len(mono):
                continue
            if any(not 1 <= i <= self.num_vars for i in mono):
                raise ValueError(f"monomial {mono} out of range for {self.num_vars} variables")
            clean[mono] = c
        object.__setattr__(self, "terms", clean)

    @classmethod
    def one(cls, num_vars: int, max_degree: int, reduced: bool = False) -> "MagnusSeries":
        return cls(num_vars, max_degree, reduced, {(): 1})

    def _check(self, other: "MagnusSeries"):
        if (self.num_vars, self.max_degree, self.reduced) != (
            other.num_vars,
            other.max_degree,
            other.reduced,
        ):
            raise ValueError("series parameters differ")

    def __mul__(self, other: "MagnusSeries") -> "MagnusSeries":
        return series_multiply(self, other)

    def __eq__(self, other):
        if not isinstance(other, MagnusSeries):
            return NotImplemented
        return (
            self.num_vars == other.num_vars
            and self.max_degree == other.max_degree
            and self.reduced == other.reduced
            and dict(self.terms) == dict(other.terms)
        )

    def __hash__(self):
        return hash((self.num_vars, self.max_degree, self.reduced, frozenset(self.terms.items())))

    def coefficient(self, monomial: Sequence[int]) -> int:
        return coefficient(self, monomial)

    def to_json(self) -> str:
        items = sorted(self.terms.items(), key=lambda kv: _monomial_key(kv[0]))
        return json.dumps([[list(m), c] for m, c in items])

    @classmethod
    def from_json(cls, text: str, num_vars: int, max_degree: int, reduced: bool = False):
        return cls(num_vars, max_degree, reduced, {tuple(m): c for m, c in json.loads(text)})


def series_multiply(s: MagnusSeries, t: MagnusSeries) -> MagnusSeries:
    s._check(t)
    deg = s.max_degree
    out: Dict[Monomial, int] = {}
    t_items = list(t.terms.items())
    for m1, c1 in s.terms.items():
        room = deg - len(m1)
        used = set(m1) if s.reduced else None
        for m2, c2 in t_items:
            if len(m2) > room:
                continue
            if used is not None and not used.isdisjoint(m2):
                continue
            key = m1 + m2
            out[key] = out.get(key, 0) + c1 * c2
    return MagnusSeries(s.num_vars, deg, s.reduced, out)


def _letter_series(gen: int, exp: int, num_vars: int, max_degree: int, reduced: bool):
    # (1 + X)^e for e > 0 by the binomial theorem, (1 - X + X^2 - ...)^|e| otherwise
    terms: Dict[Monomial, int] = {(): 1}
    top = 1 if reduced else max_degree
    for d in range(1, top + 1):
        if exp > 0:
            c = _binom(exp, d)
        else:
            c = (-1) ** d * _binom(-exp + d - 1, d)
        terms[(gen,) * d] = c
    return MagnusSeries(num_vars, max_degree, reduced, terms)


def _binom(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    out = 1
    for i in range(k):
        out = out * (n - i) // (i + 1)
    return out


def magnus_expand(w: Word, num_vars: int, max_degree: int, reduced: bool = False) -> MagnusSeries:
    if w.max_generator() > num_vars:
        raise ValueError(f"generator x{w.max_generator()} exceeds num_vars={num_vars}")
    out = MagnusSeries.one(num_vars, max_degree, reduced)
    for gen, exp in w.letters:
        out = series_multiply(out, _letter_series(gen, exp, num_vars, max_degree, reduced))
    return out


def coefficient(s: MagnusSeries, monomial: Sequence[int]) -> int:
    monomial = tuple(monomial)
    if len(monomial) > s.max_degree:
        raise ValueError("monomial longer than the truncation degree")
    return s.terms.get(monomial, 0)
