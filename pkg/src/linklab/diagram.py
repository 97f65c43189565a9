"""Oriented framed link diagrams stored as signed Gauss codes.

Each component is a cyclic sequence of passages through crossings, read from
its basepoint in the direction of its orientation.  A crossing appears exactly
twice in the whole diagram, once over and once under, and both passages carry
the same sign (right-handed = +1).
"""

from __future__ import annotations

import json
from collections import Counter, defaultdict
from dataclasses import dataclass, replace
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np


class DiagramError(ValueError):
    pass


@dataclass(frozen=True)
class Passage:
    crossing: int
    over: bool
    sign: int

    def to_dict(self):
        return {"crossing": self.crossing, "strand": "over" if self.over else "under", "sign": self.sign}


@dataclass(frozen=True)
class Component:
    label: str
    passages: Tuple[Passage, ...] = ()
    framing: int = 0


@dataclass(frozen=True)
class CrossingInfo:
    over: Tuple[int, int]  # (component index, position)
    under: Tuple[int, int]
    sign: int


@dataclass(frozen=True)
class Diagram:
    components: Tuple[Component, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))

    # -- lookup -------------------------------------------------------------
    @property
    def labels(self) -> List[str]:
        return [c.label for c in self.components]

    def __len__(self) -> int:
        return len(self.components)

    def index(self, label) -> int:
        if isinstance(label, int):
            if not 0 <= label < len(self.components):
                raise DiagramError(f"no component {label}")
            return label
        for i, c in enumerate(self.components):
            if c.label == label:
                return i
        raise DiagramError(f"unknown component label {label!r}")

    def component(self, label) -> Component:
        return self.components[self.index(label)]

    def crossings(self) -> Dict[int, CrossingInfo]:
        over: Dict[int, Tuple[int, int]] = {}
        under: Dict[int, Tuple[int, int]] = {}
        sign: Dict[int, int] = {}
        for ci, comp in enumerate(self.components):
            for pi, p in enumerate(comp.passages):
                (over if p.over else under)[p.crossing] = (ci, pi)
                sign[p.crossing] = p.sign
        return {x: CrossingInfo(over[x], under[x], sign[x]) for x in over if x in under}

    @property
    def num_crossings(self) -> int:
        return sum(len(c.passages) for c in self.components) // 2

    def with_components(self, comps: Iterable[Component]) -> "Diagram":
        return Diagram(tuple(comps))

    def relabel(self, mapping: Dict[str, str]) -> "Diagram":
        return Diagram(tuple(replace(c, label=mapping.get(c.label, c.label)) for c in self.components))

    def with_framings(self, framings: Dict[str, int]) -> "Diagram":
        return Diagram(
            tuple(replace(c, framing=framings.get(c.label, c.framing)) for c in self.components)
        )

    # -- serialization ------------------------------------------------------
    def to_dict(self) -> dict:
        d = canonical_ids(self)
        return {
            "components": [
                {"label": c.label, "framing": c.framing, "passages": [p.to_dict() for p in c.passages]}
                for c in d.components
            ]
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, data: dict) -> "Diagram":
        try:
            comps = []
            for c in data["components"]:
                ps = []
                for p in c.get("passages", []):
                    if p["strand"] not in ("over", "under"):
                        raise DiagramError(f"bad strand {p['strand']!r}")
                    ps.append(Passage(int(p["crossing"]), p["strand"] == "over", int(p["sign"])))
                comps.append(Component(str(c["label"]), tuple(ps), int(c.get("framing", 0))))
        except (KeyError, TypeError) as exc:
            raise DiagramError(f"malformed diagram JSON: {exc}") from exc
        return cls(tuple(comps))

    @classmethod
    def from_json(cls, text: str) -> "Diagram":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DiagramError(f"malformed JSON: {exc}") from exc
        return cls.from_dict(data)


def canonical_ids(d: Diagram) -> Diagram:
    """Renumber crossings 0,1,2,... in order of first appearance."""
    mapping: Dict[int, int] = {}
    for c in d.components:
        for p in c.passages:
            if p.crossing not in mapping:
                mapping[p.crossing] = len(mapping)
    return Diagram(
        tuple(
            replace(c, passages=tuple(replace(p, crossing=mapping[p.crossing]) for p in c.passages))
            for c in d.components
        )
    )


def validate_diagram(d: Diagram) -> List[str]:
    problems = []
    label_counts = Counter(c.label for c in d.components)
    for label, n in label_counts.items():
        if n > 1:
            problems.append(f"duplicate label {label!r}")
    seen: Dict[int, List[Passage]] = defaultdict(list)
    for c in d.components:
        for p in c.passages:
            if p.sign not in (1, -1):
                problems.append(f"crossing {p.crossing}: sign {p.sign} is not +-1")
            seen[p.crossing].append(p)
    for x, ps in sorted(seen.items()):
        if len(ps) == 1:
            problems.append(f"crossing {x}: unpaired crossing")
            continue
        if len(ps) > 2:
            problems.append(f"crossing {x}: appears {len(ps)} times")
            continue
        if ps[0].over == ps[1].over:
            problems.append(f"crossing {x}: both passages are {'over' if ps[0].over else 'under'}")
        if ps[0].sign != ps[1].sign:
            problems.append(f"crossing {x}: mismatched signs {ps[0].sign}/{ps[1].sign}")
    return problems


def check_valid(d: Diagram) -> Diagram:
    problems = validate_diagram(d)
    if problems:
        raise DiagramError("; ".join(problems))
    return d


def writhe(d: Diagram, label) -> int:
    ci = d.index(label)
    comp = d.components[ci]
    own = Counter(p.crossing for p in comp.passages)
    return sum(p.sign for p in comp.passages if p.over and own[p.crossing] == 2)


def linking_matrix(d: Diagram) -> np.ndarray:
    check_valid(d)
    n = len(d.components)
    doubled = np.zeros((n, n), dtype=np.int64)
    for info in d.crossings().values():
        i, j = info.over[0], info.under[0]
        if i != j:
            doubled[i, j] += info.sign
            doubled[j, i] += info.sign
    lk = doubled // 2
    for i, c in enumerate(d.components):
        lk[i, i] = c.framing
    return lk


def linking_number(d: Diagram, a, b) -> int:
    i, j = d.index(a), d.index(b)
    if i == j:
        raise DiagramError("linking number needs two distinct components")
    total = 0
    for info in d.crossings().values():
        if {info.over[0], info.under[0]} == {i, j}:
            total += info.sign
    return total // 2


def _next_id(d: Diagram) -> int:
    return 1 + max((p.crossing for c in d.components for p in c.passages), default=-1)


def delete_components(d: Diagram, labels: Iterable) -> Diagram:
    """Drop components and every crossing they take part in."""
    drop = {d.index(lab) for lab in labels}
    dead = {p.crossing for i in drop for p in d.components[i].passages}
    kept = [
        replace(c, passages=tuple(p for p in c.passages if p.crossing not in dead))
        for i, c in enumerate(d.components)
        if i not in drop
    ]
    return canonical_ids(Diagram(tuple(kept)))


def sublink(d: Diagram, labels: Sequence) -> Diagram:
    """The sub-diagram on ``labels``, in the order given."""
    idx = [d.index(lab) for lab in labels]
    rest = [i for i in range(len(d.components)) if i not in set(idx)]
    reduced = delete_components(d, rest)
    order = [reduced.index(d.components[i].label) for i in idx]
    return canonical_ids(Diagram(tuple(reduced.components[i] for i in order)))


def disjoint_union(*ds: Diagram) -> Diagram:
    comps = []
    offset = 0
    for d in ds:
        d = canonical_ids(d)
        for c in d.components:
            comps.append(replace(c, passages=tuple(replace(p, crossing=p.crossing + offset) for p in c.passages)))
        offset += d.num_crossings
    return check_valid(Diagram(tuple(comps)))


def reverse_components(d: Diagram, labels: Iterable) -> Diagram:
    """Reverse the orientation of the named components.

    A crossing changes sign exactly when one of its two strands is reversed.
    """
    flip = {d.index(lab) for lab in labels}
    owners: Dict[int, List[int]] = {}
    for i, c in enumerate(d.components):
        for p in c.passages:
            owners.setdefault(p.crossing, []).append(i)
    odd = {x for x, who in owners.items() if sum(i in flip for i in who) == 1}
    comps = []
    for i, c in enumerate(d.components):
        ps = tuple(replace(p, sign=-p.sign) if p.crossing in odd else p for p in c.passages)
        comps.append(replace(c, passages=ps[::-1] if i in flip else ps))
    return Diagram(tuple(comps))


def rotate_basepoint(d: Diagram, label, shift: int) -> Diagram:
    ci = d.index(label)
    comps = list(d.components)
    ps = comps[ci].passages
    if ps:
        k = shift % len(ps)
        comps[ci] = replace(comps[ci], passages=ps[k:] + ps[:k])
    return Diagram(tuple(comps))


# -- Reidemeister moves -------------------------------------------------------


def _insert(seq: Tuple[Passage, ...], pos: int, new: Sequence[Passage]) -> Tuple[Passage, ...]:
    if not 0 <= pos <= len(seq):
        raise DiagramError(f"position {pos} out of range")
    return seq[:pos] + tuple(new) + seq[pos:]


def _cyclic_adjacent(n: int, i: int, j: int) -> Optional[int]:
    """+1 if j follows i, -1 if i follows j, None otherwise (n >= 3)."""
    if n >= 3:
        if (i + 1) % n == j:
            return 1
        if (j + 1) % n == i:
            return -1
        return None
    if n == 2 and i != j:
        return 1 if i < j else -1
    return None


def r1_insert(d: Diagram, label, pos: int, sign: int, over_first: bool = True) -> Diagram:
    ci = d.index(label)
    x = _next_id(d)
    comps = list(d.components)
    c = comps[ci]
    comps[ci] = replace(c, passages=_insert(c.passages, pos, [Passage(x, over_first, sign), Passage(x, not over_first, sign)]))
    return Diagram(tuple(comps))


def r1_delete(d: Diagram, crossing: int) -> Diagram:
    info = d.crossings().get(crossing)
    if info is None:
        raise DiagramError(f"no crossing {crossing}")
    (ci, a), (cj, b) = info.over, info.under
    n = len(d.components[ci].passages)
    if ci != cj or not ((a + 1) % n == b or (b + 1) % n == a):
        raise DiagramError(f"crossing {crossing} is not an R1 kink")
    comps = list(d.components)
    comps[ci] = replace(comps[ci], passages=tuple(p for p in comps[ci].passages if p.crossing != crossing))
    return Diagram(tuple(comps))


def r2_insert(d: Diagram, over_label, over_pos: int, under_label, under_pos: int, sign: int = 1, reverse: bool = False) -> Diagram:
    """Push an edge of ``under_label`` beneath an edge of ``over_label``.

    Creates crossings X (sign ``sign``) then Y (sign ``-sign``) along the over
    strand; ``reverse`` meets them in the order Y, X along the under strand.
    """
    i, j = d.index(over_label), d.index(under_label)
    x = _next_id(d)
    y = x + 1
    top = [Passage(x, True, sign), Passage(y, True, -sign)]
    bot = [Passage(x, False, sign), Passage(y, False, -sign)]
    if reverse:
        bot.reverse()
    comps = list(d.components)
    if i != j:
        comps[i] = replace(comps[i], passages=_insert(comps[i].passages, over_pos, top))
        comps[j] = replace(comps[j], passages=_insert(comps[j].passages, under_pos, bot))
    else:
        ps = comps[i].passages
        n = len(ps)
        if not (0 <= over_pos <= n and 0 <= under_pos <= n):
            raise DiagramError("position out of range")
        # insert the later one first so the earlier index stays valid
        if over_pos >= under_pos:
            ps = _insert(ps, over_pos, top)
            ps = _insert(ps, under_pos, bot)
        else:
            ps = _insert(ps, under_pos, bot)
            ps = _insert(ps, over_pos, top)
        comps[i] = replace(comps[i], passages=ps)
    return Diagram(tuple(comps))


def r2_sites(d: Diagram) -> List[Tuple[int, int]]:
    """Crossing pairs removable by an inverse R2 move."""
    info = d.crossings()
    sizes = [len(c.passages) for c in d.components]
    out = []
    xs = sorted(info)
    for a_i, x in enumerate(xs):
        for y in xs[a_i + 1 :]:
            ix, iy = info[x], info[y]
            if ix.sign != -iy.sign:
                continue
            if ix.over[0] != iy.over[0] or ix.under[0] != iy.under[0]:
                continue
            if _cyclic_adjacent(sizes[ix.over[0]], ix.over[1], iy.over[1]) is None:
                continue
            if _cyclic_adjacent(sizes[ix.under[0]], ix.under[1], iy.under[1]) is None:
                continue
            out.append((x, y))
    return out


def r2_delete(d: Diagram, x: int, y: int) -> Diagram:
    if (x, y) not in r2_sites(d) and (y, x) not in r2_sites(d):
        raise DiagramError(f"crossings {x},{y} do not form an R2 bigon")
    dead = {x, y}
    return Diagram(
        tuple(replace(c, passages=tuple(p for p in c.passages if p.crossing not in dead)) for c in d.components)
    )


def _r3_roles(d: Diagram, xs: Sequence[int]):
    info = d.crossings()
    if len(set(xs)) != 3 or any(x not in info for x in xs):
        return None
    # group the six passages by the strand edge they sit on
    sizes = [len(c.passages) for c in d.components]
    passages = []
    for x in xs:
        passages.append((x, True, info[x].over))
        passages.append((x, False, info[x].under))
    edges = []
    used = set()
    for a in range(6):
        for b in range(a + 1, 6):
            if a in used or b in used:
                continue
            xa, _, (ca, pa) = passages[a]
            xb, _, (cb, pb) = passages[b]
            if xa == xb or ca != cb:
                continue
            order = _cyclic_adjacent(sizes[ca], pa, pb)
            if order is None:
                continue
            edges.append((passages[a], passages[b], order))
            used |= {a, b}
    if len(edges) != 3:
        return None
    roles = {}
    for pa, pb, order in edges:
        n_over = int(pa[1]) + int(pb[1])
        roles[n_over] = (pa, pb, order)
    if set(roles) != {0, 1, 2}:
        return None
    return roles


def r3_sites(d: Diagram) -> List[Tuple[int, int, int]]:
    info = d.crossings()
    xs = sorted(info)
    out = []
    # triangles only involve crossings adjacent along some strand
    nbrs = defaultdict(set)
    for c in d.components:
        n = len(c.passages)
        for k in range(n):
            a, b = c.passages[k].crossing, c.passages[(k + 1) % n].crossing
            if a != b:
                nbrs[a].add(b)
                nbrs[b].add(a)
    for x in xs:
        for y in nbrs[x]:
            if y <= x:
                continue
            for z in nbrs[x] & nbrs[y]:
                if z <= y:
                    continue
                if _r3_check(d, (x, y, z)):
                    out.append((x, y, z))
    return out


def _r3_check(d: Diagram, xs) -> bool:
    roles = _r3_roles(d, xs)
    if roles is None:
        return False
    info = d.crossings()
    top, mid, bot = roles[2], roles[1], roles[0]
    top_x = {top[0][0], top[1][0]}
    bot_x = {bot[0][0], bot[1][0]}
    mid_x = {mid[0][0], mid[1][0]}
    (vx,) = top_x & mid_x  # top over middle
    (vy,) = top_x & bot_x
    (vz,) = mid_x & bot_x

    def order(edge, first):
        pa, pb, o = edge
        return o if pa[0] == first else -o

    s_t = order(top, vx)
    s_m = order(mid, vx)
    s_b = order(bot, vy)
    sx, sy, sz = info[vx].sign, info[vy].sign, info[vz].sign
    return sx * sy == s_m * s_b and sx * sz == s_t * s_b and sy * sz == s_t * s_m


def r3_move(d: Diagram, xs: Sequence[int]) -> Diagram:
    if not _r3_check(d, xs):
        raise DiagramError(f"crossings {tuple(xs)} do not form an R3 triangle")
    roles = _r3_roles(d, xs)
    comps = [list(c.passages) for c in d.components]
    for pa, pb, _ in roles.values():
        ca, ia = pa[2]
        cb, ib = pb[2]
        comps[ca][ia], comps[cb][ib] = comps[cb][ib], comps[ca][ia]
    return Diagram(tuple(replace(c, passages=tuple(ps)) for c, ps in zip(d.components, comps)))


def reidemeister_move(d: Diagram, kind: str, site, direction: str = "insert") -> Diagram:
    """Dispatch a Reidemeister move.

    R1 insert site: ``(label, pos, sign[, over_first])``; delete: crossing id.
    R2 insert site: ``(over_label, over_pos, under_label, under_pos, sign[, reverse])``;
    delete: ``(x, y)``.  R3 site: three crossing ids; ``direction`` is ignored.
    """
    kind = kind.upper()
    if kind == "R1":
        out = r1_insert(d, *site) if direction == "insert" else r1_delete(d, site)
    elif kind == "R2":
        out = r2_insert(d, *site) if direction == "insert" else r2_delete(d, *site)
    elif kind == "R3":
        out = r3_move(d, site)
    else:
        raise DiagramError(f"unknown move {kind}")
    return check_valid(out)


def simplify(d: Diagram) -> Diagram:
    """Greedily remove R1 kinks and R2 bigons until none remain."""
    while True:
        changed = False
        info = d.crossings()
        for x, inf in info.items():
            (ci, a), (cj, b) = inf.over, inf.under
            n = len(d.components[ci].passages)
            if ci == cj and ((a + 1) % n == b or (b + 1) % n == a):
                d = r1_delete(d, x)
                changed = True
                break
        if changed:
            continue
        sites = _fast_r2_sites(d)
        if sites:
            dead = set()
            for x, y in sites:
                if x in dead or y in dead:
                    continue
                d = Diagram(
                    tuple(replace(c, passages=tuple(p for p in c.passages if p.crossing not in (x, y))) for c in d.components)
                )
                dead |= {x, y}
                break
            continue
        return canonical_ids(d)


def _fast_r2_sites(d: Diagram) -> List[Tuple[int, int]]:
    info = d.crossings()
    sizes = [len(c.passages) for c in d.components]
    out = []
    for ci, c in enumerate(d.components):
        n = len(c.passages)
        if n < 2:
            continue
        for k in range(n if n > 2 else 1):
            p, q = c.passages[k], c.passages[(k + 1) % n]
            if not (p.over and q.over) or p.crossing == q.crossing:
                continue
            ix, iy = info[p.crossing], info[q.crossing]
            if ix.sign != -iy.sign or ix.under[0] != iy.under[0]:
                continue
            if _cyclic_adjacent(sizes[ix.under[0]], ix.under[1], iy.under[1]) is None:
                continue
            out.append((p.crossing, q.crossing))
    return out
