"""Pattern constructors: primitive links and untwisted satellites.

Satellites are built by blackboard cabling of one component: every passage of
the companion becomes a block of passages on the cable strands, a full-twist
braid cancels the companion's writhe, and small tangles ("boxes") cut into the
cable close the strands up into the pattern.  Cable strand 0 is the leftmost
one when looking along the companion's orientation.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

from .diagram import Component, Diagram, DiagramError, Passage, canonical_ids, check_valid, r1_insert, writhe

PATTERNS = ("unknot", "hopf", "whitehead_link", "borromean", "wh_double", "bing_double", "parallel")


@dataclass(frozen=True)
class PatternSpec:
    name: str
    clasp_sign: Optional[int] = None
    copies: int = 1

    def __post_init__(self):
        if self.name not in PATTERNS:
            raise DiagramError(f"unknown pattern {self.name!r}")
        needs_sign = self.name in ("hopf", "whitehead_link", "wh_double")
        if needs_sign and self.clasp_sign not in (1, -1):
            raise DiagramError(f"{self.name} needs clasp_sign +-1")
        if not needs_sign and self.clasp_sign is not None:
            raise DiagramError(f"{self.name} takes no clasp_sign")
        if self.copies < 1:
            raise DiagramError("copies must be positive")


# -- boxes ------------------------------------------------------------------
# A box is a tangle cut into the cable.  Endpoints are ("bot", j) where strand
# j arrives from the cable below and ("top", j) where it leaves upwards.  Each
# path is (start endpoint, passages with box-local crossing ids, end endpoint).

Endpoint = Tuple[str, int]
BoxPath = Tuple[Endpoint, Tuple[Tuple[int, bool, int], ...], Endpoint]


def identity_box(n: int) -> List[BoxPath]:
    return [(("bot", j), (), ("top", j)) for j in range(n)]


def clasp_box(sign: int) -> List[BoxPath]:
    """Cap on the strands below hooked through a cup on the strands above.

    Strand 0 runs upwards and strand 1 downwards on both sides; both clasp
    crossings get ``sign``.
    """
    cap_over = sign == 1
    cap = (("bot", 0), ((0, cap_over, sign), (1, not cap_over, sign)), ("bot", 1))
    cup = (("top", 1), ((1, cap_over, sign), (0, not cap_over, sign)), ("top", 0))
    return [cap, cup]


@dataclass
class CablePattern:
    n: int
    # one orientation tuple per cable segment (segment t follows box t)
    orientations: List[Tuple[int, ...]]
    boxes: List[List[BoxPath]]
    # (box index, path index, label suffix) starting each output component
    starts: List[Tuple[int, int, str]]
    # closed components lying inside one box: (box index, passages, suffix)
    loops: List[Tuple[int, Tuple[Tuple[int, bool, int], ...], str]] = field(default_factory=list)


def _split_points(m: int, nboxes: int) -> List[int]:
    return [(m * t) // nboxes for t in range(nboxes)]


def cable(d: Diagram, label, pattern: CablePattern) -> Diagram:
    """Replace component ``label`` by the satellite described by ``pattern``."""
    check_valid(d)
    ci = d.index(label)
    comp = d.components[ci]
    P = comp.passages
    m = len(P)
    n = pattern.n
    nb = len(pattern.boxes)
    cuts = _split_points(m, nb)
    seg_of = [0] * m
    for t in range(nb):
        end = cuts[t + 1] if t + 1 < nb else m
        for q in range(cuts[t], end):
            seg_of[q] = t

    next_id = [1 + max((p.crossing for c in d.components for p in c.passages), default=-1)]

    def fresh() -> int:
        next_id[0] += 1
        return next_id[0] - 1

    w = writhe(d, label)
    info = d.crossings()
    # per segment, per strand: passages in companion direction
    seg_pass: List[List[List[Passage]]] = [[[] for _ in range(n)] for _ in range(nb)]
    # replacement passage blocks for other components: (comp idx, position) -> list
    other_blocks: Dict[Tuple[int, int], List[Passage]] = {}

    # twist correction at the start of segment 0
    if w != 0 and n > 1:
        t = -1 if w > 0 else 1
        pos = list(range(n))  # pos[k] = strand at position k
        o = pattern.orientations[0]
        for _ in range(abs(w)):
            for _ in range(n):
                for k in range(n - 1):
                    a, b = pos[k], pos[k + 1]  # a moves right
                    x = fresh()
                    s = t * o[a] * o[b]
                    seg_pass[0][a].append(Passage(x, t == 1, s))
                    seg_pass[0][b].append(Passage(x, t != 1, s))
                    pos[k], pos[k + 1] = b, a
        assert pos == list(range(n))

    self_ids: Dict[int, Dict[Tuple[int, int], int]] = {}
    for q, p in enumerate(P):
        x = p.crossing
        inf = info[x]
        other = inf.under if p.over else inf.over
        eps = p.sign
        seg = seg_of[q]
        o = pattern.orientations[seg]
        if other[0] != ci:
            ascending = (p.over and eps == -1) or (not p.over and eps == 1)
            block = []
            for j in range(n):
                xj = fresh()
                s = eps * o[j]
                seg_pass[seg][j].append(Passage(xj, p.over, s))
                block.append(Passage(xj, not p.over, s))
            other_blocks[other] = block if ascending else block[::-1]
            continue
        # self crossing: strand i of the over passage meets strand j of the under one
        if x not in self_ids:
            self_ids[x] = {(i, j): fresh() for i in range(n) for j in range(n)}
        ids = self_ids[x]
        oo = pattern.orientations[seg_of[inf.over[1]]]
        ou = pattern.orientations[seg_of[inf.under[1]]]
        if p.over:
            js = list(range(n)) if eps == 1 else list(range(n - 1, -1, -1))
            for i in range(n):
                seg_pass[seg][i].extend(Passage(ids[i, j], True, eps * oo[i] * ou[j]) for j in js)
        else:
            is_ = list(range(n)) if eps == -1 else list(range(n - 1, -1, -1))
            for j in range(n):
                seg_pass[seg][j].extend(Passage(ids[i, j], False, eps * oo[i] * ou[j]) for i in is_)

    # box crossings
    box_ids = []
    for b, box in enumerate(pattern.boxes):
        local = {}
        inside = [ps for _, ps, _ in box] + [ps for bi, ps, _ in pattern.loops if bi == b]
        for ps in inside:
            for lid, _, _ in ps:
                if lid not in local:
                    local[lid] = fresh()
        box_ids.append(local)

    new_comps: List[Component] = []
    used = set()
    for b0, k0, suffix in pattern.starts:
        seq: List[Passage] = []
        b, k = b0, k0
        while True:
            if (b, k) in used:
                raise DiagramError("pattern paths overlap")
            used.add((b, k))
            start, ps, end = pattern.boxes[b][k]
            seq.extend(Passage(box_ids[b][lid], ov, s) for lid, ov, s in ps)
            side, j = end
            if side == "top":
                seg = b
                if pattern.orientations[seg][j] != 1:
                    raise DiagramError("orientation mismatch in pattern")
                seq.extend(seg_pass[seg][j])
                b = (b + 1) % nb
                arrive = ("bot", j)
            else:
                seg = (b - 1) % nb
                if pattern.orientations[seg][j] != -1:
                    raise DiagramError("orientation mismatch in pattern")
                seq.extend(reversed(seg_pass[seg][j]))
                b = seg
                arrive = ("top", j)
            nxt = [i for i, path in enumerate(pattern.boxes[b]) if path[0] == arrive]
            if len(nxt) != 1:
                raise DiagramError("pattern endpoint is not the start of exactly one path")
            k = nxt[0]
            if (b, k) == (b0, k0):
                break
        new_comps.append(Component(f"{comp.label}{suffix}", tuple(seq), 0))
    for b, ps, suffix in pattern.loops:
        seq = [Passage(box_ids[b][lid], ov, s) for lid, ov, s in ps]
        new_comps.append(Component(f"{comp.label}{suffix}", tuple(seq), 0))
    total_paths = sum(len(box) for box in pattern.boxes)
    if len(used) != total_paths:
        raise DiagramError("pattern has paths not reached from any start")

    comps: List[Component] = []
    for i, c in enumerate(d.components):
        if i == ci:
            comps.extend(new_comps)
            continue
        ps: List[Passage] = []
        for q, p in enumerate(c.passages):
            block = other_blocks.get((i, q))
            if block is None:
                ps.append(p)
            else:
                ps.extend(block)
        comps.append(replace(c, passages=tuple(ps)))
    return check_valid(canonical_ids(Diagram(tuple(comps))))


# -- the satellite operations -------------------------------------------------


def parallel_copies(d: Diagram, label, k: int) -> Diagram:
    """Replace a component by ``k`` untwisted parallels labelled ``^0..^{k-1}``."""
    if k < 1:
        raise DiagramError("k must be positive")
    d.index(label)
    if k == 1:
        return d
    pat = CablePattern(
        n=k,
        orientations=[tuple([1] * k)],
        boxes=[identity_box(k)],
        starts=[(0, j, f"^{j}") for j in range(k)],
    )
    return cable(d, label, pat)


def whitehead_double(d: Diagram, label, clasp_sign: int) -> Diagram:
    """Untwisted Whitehead double.

    ``clasp_sign`` is the sign of the double point of the immersed annulus
    the clasp comes from; the two clasp crossings then have sign
    ``-clasp_sign``.  With this convention the genus-1 surface has Seifert
    form [[clasp_sign, *], [*, 0]] on (clasp-band core, annulus core).
    """
    if clasp_sign not in (1, -1):
        raise DiagramError("clasp_sign must be +-1")
    pat = CablePattern(n=2, orientations=[(1, -1)], boxes=[clasp_box(-clasp_sign)], starts=[(0, 1, "")])
    return cable(d, label, pat)


def bing_double(d: Diagram, label) -> Diagram:
    pat = CablePattern(
        n=2,
        orientations=[(1, -1), (1, -1)],
        boxes=[clasp_box(1), clasp_box(-1)],
        starts=[(0, 1, "^0"), (1, 1, "^1")],
    )
    return cable(d, label, pat)


# -- primitives ---------------------------------------------------------------


def unknot(label: str = "K") -> Diagram:
    return Diagram((Component(label, (), 0),))


def unlink(n: int, prefix: str = "U") -> Diagram:
    return Diagram(tuple(Component(f"{prefix}{i + 1}", (), 0) for i in range(n)))


def hopf(sign: int = 1, labels=("L1", "L2")) -> Diagram:
    a, b = labels
    return check_valid(
        Diagram(
            (
                Component(a, (Passage(0, True, sign), Passage(1, False, sign))),
                Component(b, (Passage(0, False, sign), Passage(1, True, sign))),
            )
        )
    )


def whitehead_link(clasp_sign: int = 1, labels=("L1", "L2")) -> Diagram:
    """Whitehead link: doubled meridian of an unknot, with both writhes 0.

    The clasp contributes writhe ``-2*clasp_sign`` to L1; two opposite kinks
    bring it back to 0 so the blackboard framing is the 0-framing.
    """
    d = whitehead_double(hopf(1, labels), labels[0], clasp_sign)
    for _ in range(2):
        d = r1_insert(d, labels[0], 0, clasp_sign, True)
    return canonical_ids(d)


# Borromean rings: mirror image of the projection of three orthogonal ellipses.
_BORROMEAN = [
    [(0, True, 1), (1, False, 1), (2, False, -1), (3, True, -1)],
    [(0, False, 1), (4, False, 1), (5, True, 1), (3, False, -1), (2, True, -1), (6, True, -1), (7, False, -1), (1, True, 1)],
    [(4, True, 1), (7, True, -1), (6, False, -1), (5, False, 1)],
]


def borromean(labels=("L1", "L2", "L3")) -> Diagram:
    return check_valid(
        Diagram(tuple(Component(lab, tuple(Passage(*p) for p in ps)) for lab, ps in zip(labels, _BORROMEAN)))
    )


def build_primitive(spec: PatternSpec) -> Diagram:
    if spec.name == "unknot":
        return unknot()
    if spec.name == "hopf":
        return hopf(spec.clasp_sign)
    if spec.name == "whitehead_link":
        return whitehead_link(spec.clasp_sign)
    if spec.name == "borromean":
        return borromean()
    raise DiagramError(f"{spec.name} is a satellite pattern, not a primitive")


# -- composition ---------------------------------------------------------------


@dataclass
class Stage:
    """One satellite stage applied to every component of the current link.

    ``params`` maps a component label to a clasp sign (``wh_double``) or a copy
    count (``parallel``); missing labels use ``default``.
    """

    name: str
    default: int = 1
    params: Dict[str, int] = field(default_factory=dict)


def apply_stage(d: Diagram, stage: Stage) -> Diagram:
    for label in list(d.labels):
        val = stage.params.get(label, stage.default)
        if stage.name == "wh_double":
            d = whitehead_double(d, label, val)
        elif stage.name == "bing_double":
            d = bing_double(d, label)
        elif stage.name == "parallel":
            d = parallel_copies(d, label, val)
        else:
            raise DiagramError(f"{stage.name} is not a satellite stage")
    return d


def compose_pattern(chain: Sequence[Stage], base: Diagram) -> Diagram:
    """Apply ``chain`` from the innermost stage (first) outward."""
    d = base
    for stage in chain:
        d = apply_stage(d, stage)
    return d
