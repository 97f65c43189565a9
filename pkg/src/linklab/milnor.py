"""Wirtinger presentations, longitudes and Milnor invariants.

Conventions: at a crossing of sign e with over arc k, the under strand passes
from arc i to arc j with x_j = x_k^-e x_i x_k^e.  Writing every arc generator
as W^-1 m W for its component's base meridian m, the 0-framed longitude is
the product of x_k^e over the component's undercrossings times m^-writhe.
With these choices mu(1,2) of the positive Hopf link is +1.

Numerical mu-invariants use the representation of the free group sending
x_c to I + E_{p,p+1} when c is the (p+1)-th entry of the index sequence; the
top-right entry of the image of a word is the Magnus coefficient we want.
Entries are computed modulo two primes and recombined.
"""

from __future__ import annotations

import itertools
import json
import math
import os
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .diagram import Diagram, DiagramError, check_valid, simplify, sublink, writhe
from .words import Word, free_reduce

PRIMES = (536870879, 536870909)
DEFAULT_MAX_COMPONENTS = 10
_CHUNK_ENTRIES = 4_000_000


def max_components() -> int:
    return int(os.environ.get("LINKLAB_MAX_COMPONENTS", DEFAULT_MAX_COMPONENTS))


@dataclass(frozen=True)
class WirtingerData:
    """Arc generators are numbered 1..A globally.

    ``steps[c]`` lists, for each undercrossing of component c in traversal
    order, the over-arc generator and the crossing sign; the arc after step t
    is ``arcs[c][t + 1]`` (cyclically, the last step returns to the base arc).
    """

    arcs: Tuple[Tuple[int, ...], ...]
    relations: Tuple[Word, ...]
    base_arc: Tuple[int, ...]
    steps: Tuple[Tuple[Tuple[int, int], ...], ...]
    arc_component: Tuple[int, ...]  # indexed by generator - 1
    writhes: Tuple[int, ...]

    @property
    def num_generators(self) -> int:
        return len(self.arc_component)


def wirtinger_presentation(d: Diagram) -> WirtingerData:
    check_valid(d)
    info = d.crossings()
    arcs: List[Tuple[int, ...]] = []
    arc_at: Dict[Tuple[int, int], int] = {}  # (component, position) -> generator
    arc_comp: List[int] = []
    for ci, comp in enumerate(d.components):
        unders = [q for q, p in enumerate(comp.passages) if not p.over]
        if not unders:
            arc_comp.append(ci)
            g = len(arc_comp)
            arcs.append((g,))
            for q in range(len(comp.passages)):
                arc_at[ci, q] = g
            continue
        gens = []
        for _ in unders:
            arc_comp.append(ci)
            gens.append(len(arc_comp))
        arcs.append(tuple(gens))
        # arc t ends at unders[t]; positions after the last under wrap to arc 0
        t = 0
        for q in range(len(comp.passages)):
            arc_at[ci, q] = gens[t] if q <= unders[-1] else gens[0]
            if t < len(unders) and q == unders[t]:
                t += 1
    steps = []
    relations = []
    for ci, comp in enumerate(d.components):
        gens = arcs[ci]
        row = []
        unders = [q for q, p in enumerate(comp.passages) if not p.over]
        for t, q in enumerate(unders):
            p = comp.passages[q]
            over = info[p.crossing].over
            k = arc_at[over]
            row.append((k, p.sign))
            i, j = gens[t], gens[(t + 1) % len(gens)]
            e = p.sign
            relations.append(free_reduce([(j, -1), (k, -e), (i, 1), (k, e)]))
        steps.append(tuple(row))
    return WirtingerData(
        arcs=tuple(arcs),
        relations=tuple(relations),
        base_arc=tuple(a[0] for a in arcs),
        steps=tuple(steps),
        arc_component=tuple(arc_comp),
        writhes=tuple(writhe(d, c) for c in range(len(d.components))),
    )


def _component_index(d: Diagram, component) -> int:
    """Label or 1-based position."""
    try:
        if isinstance(component, int):
            return d.index(component - 1) if component >= 1 else d.index(-1)
        return d.index(component)
    except (KeyError, IndexError, DiagramError) as exc:
        raise DiagramError(f"unknown component {component!r}") from exc


# -- word-level longitudes ----------------------------------------------------


def _word_iteration(wd: WirtingerData, passes: int) -> List[Word]:
    """Conjugators W_a with x_a = W_a^-1 m W_a, correct modulo deep commutators."""
    conj = [Word.identity() for _ in wd.arc_component]
    for _ in range(passes):
        for ci, gens in enumerate(wd.arcs):
            W = Word.identity()
            for t, (k, e) in enumerate(wd.steps[ci][:-1] if wd.steps[ci] else ()):
                W = W * _arc_word(conj, wd, k) ** e
                conj[gens[t + 1] - 1] = W
    return conj


def _arc_word(conj: List[Word], wd: WirtingerData, k: int) -> Word:
    m = Word.gen(wd.arc_component[k - 1] + 1)
    W = conj[k - 1]
    return W.inverse() * m * W


def longitude(d: Diagram, component, truncation_degree: Optional[int] = None) -> Word:
    """0-framed longitude as a word in the base meridians ``x1..xn``.

    The word agrees with the true longitude modulo commutators of weight
    above ``truncation_degree`` (default: number of components minus one).
    Word length can grow quickly, so this is meant for small diagrams.
    """
    ci = _component_index(d, component)
    wd = wirtinger_presentation(d)
    q = truncation_degree if truncation_degree is not None else max(1, len(d.components) - 1)
    conj = _word_iteration(wd, q)
    W = Word.identity()
    for k, e in wd.steps[ci]:
        W = W * _arc_word(conj, wd, k) ** e
    return W * Word.gen(ci + 1, -wd.writhes[ci])


# -- matrix engine --------------------------------------------------------------


def _matmul(a, b, p):
    return np.matmul(a, b) % p


def _raw_mu_batch(wd: WirtingerData, target: int, seqs: np.ndarray, p: int) -> np.ndarray:
    """Top-right entries of rho(longitude of ``target``) for each row of ``seqs``.

    ``seqs`` has shape (S, k-1) with 0-based component indices; row s defines
    the representation for index sequence seqs[s] followed by the target.
    """
    S, km1 = seqs.shape
    k = km1 + 1
    ncomp = len(wd.arcs)
    eye = np.broadcast_to(np.eye(k, dtype=np.int64), (S, k, k))
    G = np.zeros((ncomp, S, k, k), dtype=np.int64)
    G[:] = eye
    Ginv = G.copy()
    for pos in range(km1):
        G[seqs[:, pos], np.arange(S), pos, pos + 1] = 1
        Ginv[seqs[:, pos], np.arange(S), pos, pos + 1] = p - 1
    A = len(wd.arc_component)
    comp_of = np.array(wd.arc_component, dtype=np.int64)
    M = G[comp_of].copy()  # (A, S, k, k) arc meridians
    Minv = Ginv[comp_of].copy()
    passes = k + 1
    for _ in range(passes):
        changed = False
        for ci, gens in enumerate(wd.arcs):
            W = eye.copy()
            Winv = eye.copy()
            for t, (kk, e) in enumerate(wd.steps[ci][:-1] if wd.steps[ci] else ()):
                a = kk - 1
                if e == 1:
                    W = _matmul(W, M[a], p)
                    Winv = _matmul(Minv[a], Winv, p)
                else:
                    W = _matmul(W, Minv[a], p)
                    Winv = _matmul(M[a], Winv, p)
                g = gens[t + 1] - 1
                new = _matmul(_matmul(Winv, G[ci], p), W, p)
                if not changed and not np.array_equal(new, M[g]):
                    changed = True
                M[g] = new
                Minv[g] = _matmul(_matmul(Winv, Ginv[ci], p), W, p)
        if not changed:
            break
    W = eye.copy()
    for kk, e in wd.steps[target]:
        W = _matmul(W, M[kk - 1] if e == 1 else Minv[kk - 1], p)
    w = wd.writhes[target]
    if w:
        Gt = G[target] if w < 0 else Ginv[target]
        for _ in range(abs(w)):
            W = _matmul(W, Gt, p)
    return W[:, 0, k - 1].copy()


def _crt(residues: Sequence[np.ndarray]) -> List[int]:
    p, q = PRIMES
    inv = pow(p, -1, q)
    out = []
    for a, b in zip(*[r.tolist() for r in residues]):
        x = a + p * (((b - a) * inv) % q)
        if x > p * q // 2:
            x -= p * q
        out.append(x)
    return out


def raw_mu_values(d: Diagram, target: int, seqs: Sequence[Sequence[int]], wd: Optional[WirtingerData] = None) -> List[int]:
    """Integer Magnus coefficients (no indeterminacy reduction), 0-based indices."""
    if not seqs:
        return []
    wd = wd or wirtinger_presentation(d)
    arr = np.array(seqs, dtype=np.int64).reshape(len(seqs), -1)
    k = arr.shape[1] + 1
    per = max(1, _CHUNK_ENTRIES // max(1, len(wd.arc_component) * k * k))
    out: List[int] = []
    for lo in range(0, len(arr), per):
        chunk = arr[lo : lo + per]
        res = [_raw_mu_batch(wd, target, chunk, p) for p in PRIMES]
        out.extend(_crt(res))
    return out


def _validate_sequence(d: Diagram, I: Sequence[int]) -> Tuple[int, ...]:
    I = tuple(int(i) for i in I)
    n = len(d.components)
    if len(I) < 2:
        raise ValueError("index sequence needs at least two entries")
    if len(set(I)) != len(I):
        raise ValueError(f"repeated indices in {I}")
    if any(not 1 <= i <= n for i in I):
        raise ValueError(f"indices {I} out of range 1..{n}")
    return I


def _raw_mu(d: Diagram, I: Tuple[int, ...], cache: Dict[Tuple[int, ...], int]) -> int:
    if I not in cache:
        labels = [d.labels[i - 1] for i in I]
        sub = sublink(d, labels)
        k = len(I)
        cache[I] = raw_mu_values(sub, k - 1, [list(range(k - 1))])[0]
    return cache[I]


def _proper_subsequences(I: Tuple[int, ...]):
    """Sequences from deleting at least one index, with all cyclic rotations."""
    seen = set()
    for r in range(2, len(I)):
        for J in itertools.combinations(I, r):
            for s in range(r):
                Jr = J[s:] + J[:s]
                if Jr not in seen:
                    seen.add(Jr)
                    yield Jr


def indeterminacy(d: Diagram, I: Sequence[int], cache=None) -> int:
    cache = {} if cache is None else cache
    g = 0
    for J in _proper_subsequences(tuple(I)):
        g = math.gcd(g, abs(_raw_mu(d, J, cache)))
        if g == 1:
            break
    return g


def mu_bar(d: Diagram, I: Sequence[int]) -> Tuple[int, int]:
    """(value, modulus) of the Milnor invariant with 1-based distinct indices."""
    check_valid(d)
    I = _validate_sequence(d, I)
    cache: Dict[Tuple[int, ...], int] = {}
    value = _raw_mu(d, I, cache)
    modulus = indeterminacy(d, I, cache)
    if modulus:
        value %= modulus
    return value, modulus


@dataclass
class MilnorReport:
    max_length: int
    values: Dict[Tuple[int, ...], Tuple[int, int]] = field(default_factory=dict)
    first_nonvanishing: Optional[Tuple[Tuple[int, ...], int]] = None

    def sorted_items(self):
        return sorted(self.values.items(), key=lambda kv: (len(kv[0]), kv[0]))

    def to_dict(self) -> dict:
        fn = None
        if self.first_nonvanishing is not None:
            fn = {"sequence": list(self.first_nonvanishing[0]), "value": self.first_nonvanishing[1]}
        return {
            "max_length": self.max_length,
            "values": [{"sequence": list(s), "value": v, "modulus": m} for s, (v, m) in self.sorted_items()],
            "first_nonvanishing": fn,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "MilnorReport":
        obj = json.loads(text)
        rep = cls(obj["max_length"])
        for item in obj["values"]:
            rep.values[tuple(item["sequence"])] = (item["value"], item["modulus"])
        fn = obj.get("first_nonvanishing")
        if fn is not None:
            rep.first_nonvanishing = (tuple(fn["sequence"]), fn["value"])
        return rep

    def to_text(self) -> str:
        lines = [f"mu-bar invariants up to length {self.max_length}"]
        for s, (v, m) in self.sorted_items():
            mod = f" (mod {m})" if m else ""
            lines.append(f"  mu({','.join(map(str, s))}) = {v}{mod}")
        if self.first_nonvanishing:
            s, v = self.first_nonvanishing
            lines.append(f"first nonvanishing: mu({','.join(map(str, s))}) = {v}")
        else:
            lines.append("all computed invariants vanish")
        return "\n".join(lines)


def mu_table(d: Diagram, max_length: Optional[int] = None) -> MilnorReport:
    """All distinct-index invariants up to ``max_length``, shortest first.

    Lengths beyond the one holding the first well-defined nonzero value are
    skipped.
    """
    check_valid(d)
    n = len(d.components)
    if max_length is None:
        max_length = n
    if max_length > n:
        raise ValueError("max_length exceeds the number of components")
    report = MilnorReport(max_length)
    cache: Dict[Tuple[int, ...], int] = {}
    for k in range(2, max_length + 1):
        for I in itertools.permutations(range(1, n + 1), k):
            value = _raw_mu(d, I, cache)
            modulus = indeterminacy(d, I, cache) if k > 2 else 0
            if modulus:
                value %= modulus
            report.values[I] = (value, modulus)
            if value and report.first_nonvanishing is None:
                report.first_nonvanishing = (I, value)
        if report.first_nonvanishing is not None:
            break
    return report


@dataclass(frozen=True)
class HomotopyResult:
    trivial: bool
    witness: Optional[Tuple[Tuple[int, ...], int]] = None
    checked: int = 0

    def __bool__(self):
        return self.trivial


def _split_groups(d: Diagram) -> int:
    """Number of groups of components with no crossings between groups."""
    n = len(d.components)
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for inf in d.crossings().values():
        a, b = find(inf.over[0]), find(inf.under[0])
        if a != b:
            parent[a] = b
    return len({find(i) for i in range(n)})


def is_homotopy_trivial(d: Diagram) -> HomotopyResult:
    """Decide link-homotopy triviality from non-repeating mu-bar invariants.

    Lengths are checked in increasing order.  Once every shorter invariant
    vanishes, each k-component sublink is almost trivial and its length-k
    invariants are spanned by the (k-2)! sequences fixing the last two
    indices, so only those are evaluated.
    """
    check_valid(d)
    n = len(d.components)
    cap = max_components()
    if n > cap:
        raise ValueError(f"{n} components exceeds the cap of {cap} (LINKLAB_MAX_COMPONENTS)")
    checked = 0
    for k in range(2, n + 1):
        for subset in itertools.combinations(range(1, n + 1), k):
            sub = simplify(sublink(d, [d.labels[i - 1] for i in subset]))
            if _split_groups(sub) > 1:
                continue
            seqs = [list(perm) + [k - 2] for perm in itertools.permutations(range(k - 2))]
            vals = raw_mu_values(sub, k - 1, seqs)
            checked += len(vals)
            for s, v in zip(seqs, vals):
                if v:
                    I = tuple(subset[i] for i in s) + (subset[k - 1],)
                    return HomotopyResult(False, (I, v), checked)
    return HomotopyResult(True, None, checked)
