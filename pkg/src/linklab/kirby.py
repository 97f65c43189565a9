"""Framed-link surgery moves: handle slides, blow-ups and blow-downs.

Moves act on signed Gauss codes.  A band site is accepted only if the result
is still a planar diagram, which is checked by tracing the faces of the
rotation system the crossing signs determine (Euler characteristic 2 per
connected piece).  Invariant-level checks use the framed linking matrix and
the first homology of the surgered 3-manifold.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

from .diagram import (
    Component,
    Diagram,
    DiagramError,
    Passage,
    canonical_ids,
    check_valid,
    linking_matrix,
    reverse_components,
    validate_diagram,
)

# -- planarity -----------------------------------------------------------------

# half-edges at a crossing in counter-clockwise order; a positive crossing has
# the under strand pointing 90 degrees counter-clockwise from the over strand
_CCW = {1: ("o_out", "u_out", "o_in", "u_in"), -1: ("o_out", "u_in", "o_in", "u_out")}


def is_planar(d: Diagram) -> bool:
    """True if the signed Gauss code is realised by a diagram in the plane."""
    check_valid(d)
    info = d.crossings()
    if not info:
        return True
    # half-edge -> (edge id, is_start); edges are (component, position)
    ends: Dict[Tuple[int, str], Tuple[Tuple[int, int], bool]] = {}
    for ci, comp in enumerate(d.components):
        n = len(comp.passages)
        for k, p in enumerate(comp.passages):
            role = "o" if p.over else "u"
            ends[(p.crossing, role + "_out")] = ((ci, k), True)
            q = comp.passages[(k + 1) % n]
            ends[(q.crossing, ("o" if q.over else "u") + "_in")] = ((ci, k), False)
    other: Dict[Tuple[int, str], Tuple[int, str]] = {}
    by_edge: Dict[Tuple[int, int], List[Tuple[int, str]]] = {}
    for h, (e, _) in ends.items():
        by_edge.setdefault(e, []).append(h)
    for hs in by_edge.values():
        a, b = hs
        other[a], other[b] = b, a
    nxt = {}
    for x, inf in info.items():
        order = _CCW[inf.sign]
        for t, r in enumerate(order):
            nxt[(x, r)] = (x, order[(t + 1) % 4])
    seen = set()
    faces = 0
    for h0 in ends:
        if h0 in seen:
            continue
        faces += 1
        h = h0
        while h not in seen:
            seen.add(h)
            h = nxt[other[h]]
    # connected pieces of the crossing graph
    parent = {x: x for x in info}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for comp in d.components:
        ps = comp.passages
        for k in range(len(ps) - 1):
            parent[find(ps[k].crossing)] = find(ps[k + 1].crossing)
    pieces = len({find(x) for x in info})
    return faces == len(info) + 2 * pieces


# -- presentations and homology ---------------------------------------------------


@dataclass(frozen=True)
class SurgeryPresentation:
    """A framed link; framings are the surgery coefficients.

    ``twist`` marks the +-1 twist-surgery curves among the components.
    """

    diagram: Diagram
    twist: FrozenSet[str] = field(default_factory=frozenset)

    def __post_init__(self):
        check_valid(self.diagram)
        object.__setattr__(self, "twist", frozenset(self.twist))
        missing = self.twist - set(self.diagram.labels)
        if missing:
            raise DiagramError(f"twist curves {sorted(missing)} are not components")

    @property
    def labels(self) -> List[str]:
        return self.diagram.labels

    @property
    def framings(self) -> Dict[str, int]:
        return {c.label: c.framing for c in self.diagram.components}

    def linking_matrix(self) -> np.ndarray:
        return linking_matrix(self.diagram)

    def to_dict(self) -> dict:
        out = self.diagram.to_dict()
        out["twist"] = sorted(self.twist)
        return out

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, data: dict) -> "SurgeryPresentation":
        for c in data.get("components", []):
            if "framing" not in c:
                raise DiagramError(f"component {c.get('label')!r} has no framing")
        return cls(Diagram.from_dict(data), frozenset(data.get("twist", ())))

    @classmethod
    def from_json(cls, text: str) -> "SurgeryPresentation":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DiagramError(f"malformed JSON: {exc}") from exc
        return cls.from_dict(data)


def smith_normal_form(M) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return (D, P, Q) with P @ M @ Q = D diagonal, d_i | d_{i+1}, d_i >= 0.

    Works on Python integers throughout, so there is no overflow.
    """
    A = [[int(v) for v in row] for row in np.asarray(M, dtype=object).tolist()]
    m = len(A)
    n = len(A[0]) if m else 0
    P = [[int(i == j) for j in range(m)] for i in range(m)]
    Q = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        P[i], P[j] = P[j], P[i]

    def swap_cols(i, j):
        for R in (A, Q):
            for row in R:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, c):  # row dst += c * row src
        for R in (A, P):
            R[dst] = [a + c * b for a, b in zip(R[dst], R[src])]

    def add_col(dst, src, c):
        for R in (A, Q):
            for row in R:
                row[dst] += c * row[src]

    t = 0
    while t < min(m, n):
        nz = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        done = False
        while not done:
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // A[t][t]))
                    if A[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // A[t][t]))
                    if A[t][j]:
                        swap_cols(t, j)
                        done = False
            if done:
                # enforce divisibility of the rest by the pivot
                bad = [(i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % A[t][t]]
                if bad:
                    add_row(t, bad[0][0], 1)
                    done = False
        if A[t][t] < 0:
            P[t] = [-v for v in P[t]]
            A[t] = [-v for v in A[t]]
        t += 1
    arr = lambda X, r, c: np.array(X, dtype=object).reshape(r, c)
    return arr(A, m, n), arr(P, m, m), arr(Q, n, n)


@dataclass(frozen=True)
class H1Group:
    """Finitely generated abelian group: Z^free_rank plus Z/t for t in torsion."""

    free_rank: int
    torsion: Tuple[int, ...]

    def __str__(self):
        parts = [f"Z/{t}" for t in self.torsion] + ["Z"] * self.free_rank
        return " + ".join(parts) if parts else "0"

    def to_dict(self):
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}


def h1_surgery(sp: SurgeryPresentation) -> H1Group:
    """First homology of the surgered manifold: cokernel of the framed linking matrix."""
    L = sp.linking_matrix()
    n = L.shape[0]
    if n == 0:
        return H1Group(0, ())
    D, _, _ = smith_normal_form(L)
    diag = [abs(int(D[i, i])) for i in range(n)]
    return H1Group(sum(1 for v in diag if v == 0), tuple(v for v in diag if v > 1))


# -- handle slides -------------------------------------------------------------------

Blocks = List[List[List[Passage]]]  # component -> original position -> passages


def _points_left(p: Passage) -> bool:
    """Whether the strand through ``p`` points to the left of the other strand."""
    return (not p.over) == (p.sign == 1)


def _with_pushoff(d: Diagram, j: int, framing: int, side: int):
    """Blocks for ``d`` plus a co-oriented parallel copy of component ``j``.

    The copy runs on the left of ``j`` if ``side`` is +1 and on the right
    otherwise, and links ``j`` exactly ``framing`` times.  Returns (blocks of
    the old components, blocks of the copy); block t replaces position t.
    """
    nid = [1 + max((p.crossing for c in d.components for p in c.passages), default=-1)]

    def fresh():
        nid[0] += 1
        return nid[0] - 1

    def copy_first(p: Passage) -> bool:
        # a strand meets the left copy first iff it points to the right
        return _points_left(p) != (side == 1)

    info = d.crossings()
    jc = d.components[j]
    twin: Dict[int, int] = {}  # crossing of j with another strand -> copy's crossing
    quad: Dict[int, Tuple[int, int, int]] = {}  # self crossing -> (j/j', j'/j, j'/j') ids
    for p in jc.passages:
        inf = info[p.crossing]
        if inf.over[0] == j and inf.under[0] == j:
            if p.crossing not in quad:
                quad[p.crossing] = (fresh(), fresh(), fresh())
        else:
            twin[p.crossing] = fresh()
    blocks: Blocks = []
    for ci, comp in enumerate(d.components):
        bl = []
        for p in comp.passages:
            x = p.crossing
            if ci != j and x in twin:
                q = Passage(twin[x], p.over, p.sign)
                bl.append([q, p] if copy_first(p) else [p, q])
            else:
                bl.append([p])
        blocks.append(bl)
    copy: List[List[Passage]] = []
    for t, p in enumerate(jc.passages):
        x = p.crossing
        if x in twin:
            copy.append([Passage(twin[x], p.over, p.sign)])
            continue
        xb, xc, xd = quad[x]  # xb: j over j', xc: j' over j, xd: j' over j'
        s = p.sign
        first = copy_first(p)
        if p.over:
            mine = [Passage(xb, True, s), p]
            theirs = [Passage(xd, True, s), Passage(xc, True, s)]
        else:
            mine = [Passage(xc, False, s), p]
            theirs = [Passage(xd, False, s), Passage(xb, False, s)]
        if not first:
            mine, theirs = mine[::-1], theirs[::-1]
        blocks[j][t] = mine
        copy.append(theirs)
    lk_now = sum(p.sign for p in jc.passages if p.over and p.crossing in quad)
    turns = framing - lk_now
    tw = 1 if turns > 0 else -1
    left_is_copy = side == 1
    pre_j: List[Passage] = []
    pre_c: List[Passage] = []
    for _ in range(abs(turns)):
        c0, c1 = fresh(), fresh()
        # in a right-handed twist the strand on the left crosses over first
        lo = tw == 1
        left = [Passage(c0, lo, tw), Passage(c1, not lo, tw)]
        right = [Passage(c0, not lo, tw), Passage(c1, lo, tw)]
        pc, pj = (left, right) if left_is_copy else (right, left)
        pre_c += pc
        pre_j += pj
    if not jc.passages:
        blocks[j] = [pre_j]
        copy = [pre_c]
    else:
        blocks[j][0] = pre_j + blocks[j][0]
        copy[0] = pre_c + copy[0]
    return blocks, copy


def _flat(bl: List[List[Passage]]) -> Tuple[Passage, ...]:
    return tuple(p for b in bl for p in b)


def handle_slide(
    sp: SurgeryPresentation,
    i,
    j,
    site: Tuple[int, int],
    sign: int = 1,
    side: Optional[int] = None,
) -> SurgeryPresentation:
    """Slide component ``i`` over component ``j``.

    ``site = (p, q)``: the band leaves ``i`` just before its passage ``p`` and
    reaches the framed push-off of ``j`` just before the copy of passage ``q``.
    ``sign`` +1 adds the push-off (class x_i + x_j), -1 subtracts it.  Only
    untwisted bands are built, so the strands must run antiparallel at the
    site after orienting the push-off; ``side`` chooses the side of ``j`` the
    push-off lies on (both are tried if omitted).  A site that does not give
    a planar diagram raises DiagramError.
    """
    d = sp.diagram
    ii, jj = d.index(i), d.index(j)
    if ii == jj:
        raise DiagramError("cannot slide a component over itself")
    if sign not in (1, -1):
        raise DiagramError("sign must be +-1")
    ci, cj = d.components[ii], d.components[jj]
    p, q = site
    ni, nj = max(len(ci.passages), 1), max(len(cj.passages), 1)
    if not (0 <= p < ni and 0 <= q < nj):
        raise DiagramError(f"band site {site} out of range")
    lk = int(linking_matrix(d)[ii, jj])
    new_framing = ci.framing + cj.framing + 2 * sign * lk
    for sd in (side,) if side else (1, -1):
        blocks, copy = _with_pushoff(d, jj, cj.framing, sd)
        tmp = "\0pushoff"
        comps = [replace(c, passages=_flat(blocks[k])) for k, c in enumerate(d.components)]
        comps.append(Component(tmp, _flat(copy), cj.framing))
        cut = len(_flat(copy[:q]))
        dd = Diagram(tuple(comps))
        if sign == -1:
            dd = reverse_components(dd, [tmp])
            m = len(dd.components[-1].passages)
            cut = (m - cut) % m if m else 0
        seq = dd.components[-1].passages
        walk = seq[cut:] + seq[:cut]
        iseq = dd.components[ii].passages
        ci_cut = len(_flat(blocks[ii][:p]))
        head, tail = iseq[:ci_cut], iseq[ci_cut:]
        merged = replace(dd.components[ii], passages=head + walk + tail, framing=new_framing)
        out = [merged if k == ii else c for k, c in enumerate(dd.components[:-1])]
        res = Diagram(tuple(out))
        if is_planar(res):
            return SurgeryPresentation(canonical_ids(res), sp.twist)
    raise DiagramError(f"band site {site} does not give an untwisted planar band")


# -- blow-ups and blow-downs -------------------------------------------------------


def _full_twist(dirs: Sequence[int], handed: int, start: int) -> List[List[Passage]]:
    """Passages of a full twist on parallel strands, per strand in its own direction.

    Strand t sits at position t and runs upwards if ``dirs[t]`` is +1.
    ``handed`` +1 gives a right-handed twist: crossings of co-oriented strands
    are positive.
    """
    m = len(dirs)
    per: List[List[Passage]] = [[] for _ in range(m)]
    pos = list(range(m))
    x = start
    for _ in range(m):
        for k in range(m - 1):
            a, b = pos[k], pos[k + 1]  # a moves right
            s = handed * dirs[a] * dirs[b]
            per[a].append(Passage(x, handed == 1, s))
            per[b].append(Passage(x, handed != 1, s))
            pos[k], pos[k + 1] = b, a
            x += 1
    return [ps if dirs[t] == 1 else ps[::-1] for t, ps in enumerate(per)]


def _encircled(d: Diagram, u: int):
    """Strands encircled by the unknot ``u``: list of (component, position, direction).

    ``position`` is where the strand's first passage under or over ``u`` sits;
    the two passages must be consecutive.  Raises DiagramError if ``u`` is not
    a round circle around parallel strands.
    """
    U = d.components[u].passages
    n = len(U)
    info = d.crossings()
    if n % 2:
        raise DiagramError("blow-down curve has an odd number of crossings")
    m = n // 2
    for p in U:
        inf = info[p.crossing]
        if inf.over[0] == u and inf.under[0] == u:
            raise DiagramError("blow-down curve has self-crossings")
    if m == 0:
        return []
    overs = [p.over for p in U]
    rot = next((r for r in range(n) if all(overs[(r + t) % n] == (t < m) for t in range(n))), None)
    if rot is None:
        raise DiagramError("blow-down curve is not a round circle around strands")
    seq = [U[(rot + t) % n] for t in range(n)]
    out = []
    for t in range(m):
        a, b = info[seq[t].crossing].under, info[seq[n - 1 - t].crossing].over
        if a[0] != b[0]:
            raise DiagramError("blow-down curve does not encircle parallel strands")
        length = len(d.components[a[0]].passages)
        if (a[1] + 1) % length == b[1]:
            out.append((a[0], a[1], 1))
        elif (b[1] + 1) % length == a[1]:
            out.append((a[0], b[1], -1))
        else:
            raise DiagramError("blow-down curve does not encircle parallel strands")
        if seq[t].sign != seq[n - 1 - t].sign:
            raise DiagramError("blow-down curve is not a round circle around strands")
    return out


def _splice(d: Diagram, edits: Dict[int, List[Tuple[int, int, List[Passage]]]]) -> Diagram:
    """Replace ``count`` passages from ``start`` by new ones, per component (cyclic)."""
    comps = list(d.components)
    for ci, eds in edits.items():
        seq = list(comps[ci].passages)
        # rotate so that no edit wraps around the end, then apply right to left
        n = len(seq)
        shift = 0
        if n:
            covered = {(s + k) % n for s, c, _ in eds for k in range(1, c)}
            shift = next(r for r in range(n) if r not in covered)
        seq = seq[shift:] + seq[:shift]
        eds = sorted((((s - shift) % n if n else 0), c, new) for s, c, new in eds)
        for s, c, new in reversed(eds):
            seq[s : s + c] = new
        comps[ci] = replace(comps[ci], passages=tuple(seq))
    return Diagram(tuple(comps))


def blow_down(sp: SurgeryPresentation, label) -> SurgeryPresentation:
    d = sp.diagram
    u = d.index(label)
    eps = d.components[u].framing
    if eps not in (1, -1):
        raise DiagramError(f"{label!r} has framing {eps}, not +-1")
    strands = _encircled(d, u)
    L = linking_matrix(d)
    nid = 1 + max((p.crossing for c in d.components for p in c.passages), default=-1)
    dirs = [t[2] for t in strands]
    for order in (1, -1):
        ds = dirs[::order]
        st = strands[::order]
        blocks = _full_twist(ds, -eps, nid)
        edits: Dict[int, List[Tuple[int, int, List[Passage]]]] = {}
        for (ci, pos, _), new in zip(st, blocks):
            edits.setdefault(ci, []).append((pos, 2, new))
        res = _splice(d, edits)
        keep = [c for k, c in enumerate(res.components) if k != u]
        idx = [k for k in range(len(d.components)) if k != u]
        keep = [replace(c, framing=c.framing - eps * int(L[k, u]) ** 2) for c, k in zip(keep, idx)]
        res = Diagram(tuple(keep))
        if is_planar(res):
            return SurgeryPresentation(canonical_ids(res), sp.twist - {d.components[u].label})
    raise DiagramError("could not place the twist of the blow-down")


def blow_up(
    sp: SurgeryPresentation,
    strands: Sequence[Tuple[str, int, int]],
    eps: int,
    label: str = "U",
    twist: bool = True,
) -> SurgeryPresentation:
    """Insert an ``eps``-framed unknot around parallel strands.

    ``strands`` lists (component label, position, direction) from left to
    right: the circle goes around the edge of that component just before its
    passage ``position``, and direction +1 means the strand passes the
    circle's over-arc first.  A full twist of handedness ``eps`` is put on
    the strands so that the surgered manifold does not change; with
    ``twist=False`` the circle is only added, changing the manifold.
    """
    d = sp.diagram
    if eps not in (1, -1):
        raise DiagramError("blow-up framing must be +-1")
    if label in d.labels:
        raise DiagramError(f"label {label!r} already used")
    nid = 1 + max((p.crossing for c in d.components for p in c.passages), default=-1)
    m = len(strands)
    idx = [d.index(s[0]) for s in strands]
    dirs = [int(s[2]) for s in strands]
    for cu in (1, -1):
        xo = [nid + t for t in range(m)]
        xu = [nid + m + t for t in range(m)]
        useq = [Passage(xo[t], True, cu * dirs[t]) for t in range(m)]
        useq += [Passage(xu[t], False, cu * dirs[t]) for t in reversed(range(m))]
        blocks = _full_twist(dirs, eps, nid + 2 * m) if twist else [[] for _ in range(m)]
        edits: Dict[int, List[Tuple[int, int, List[Passage]]]] = {}
        for t in range(m):
            ring = [Passage(xo[t], False, cu * dirs[t]), Passage(xu[t], True, cu * dirs[t])]
            new = ring + blocks[t] if dirs[t] == 1 else blocks[t] + ring[::-1]
            edits.setdefault(idx[t], []).append((strands[t][1], 0, new))
        res = _splice(d, edits)
        res = Diagram(res.components + (Component(label, tuple(useq), eps),))
        if not validate_diagram(res) and is_planar(res):
            lk = linking_matrix(res)[-1]
            comps = [
                replace(c, framing=c.framing + eps * int(lk[k]) ** 2) if twist and k < len(d) else c
                for k, c in enumerate(res.components)
            ]
            return SurgeryPresentation(canonical_ids(Diagram(tuple(comps))), sp.twist | {label})
    raise DiagramError("blow-up site is not a set of parallel strands")


def blow(sp: SurgeryPresentation, direction: str, site, eps: Optional[int] = None, label: str = "U"):
    """Blow up (``site`` = strand list, see ``blow_up``) or down (``site`` = label)."""
    if direction == "down":
        return blow_down(sp, site)
    if direction == "up":
        if eps is None:
            raise DiagramError("blow-up needs a framing")
        return blow_up(sp, site, eps, label)
    raise DiagramError(f"unknown blow direction {direction!r}")


def slide_sites(sp: SurgeryPresentation, i, j, sign: int = 1):
    """Yield every band site (p, q) at which ``i`` slides over ``j``."""
    d = sp.diagram
    ni = max(len(d.component(i).passages), 1)
    nj = max(len(d.component(j).passages), 1)
    for p in range(ni):
        for q in range(nj):
            try:
                yield (p, q), handle_slide(sp, i, j, (p, q), sign)
            except DiagramError:
                continue


def apply_moves(sp: SurgeryPresentation, script: Sequence[dict]) -> SurgeryPresentation:
    """Apply a move script: ``{"move": "slide", "i", "j", "site", "sign"}`` or
    ``{"move": "blow", "direction", "site", "eps", "label"}``."""
    for mv in script:
        kind = mv.get("move")
        try:
            if kind == "slide":
                sp = handle_slide(sp, mv["i"], mv["j"], tuple(mv["site"]), mv.get("sign", 1), mv.get("side"))
            elif kind == "blow":
                site = mv["site"]
                if mv["direction"] == "up":
                    site = [tuple(s) for s in site]
                sp = blow(sp, mv["direction"], site, mv.get("eps"), mv.get("label", "U"))
            else:
                raise DiagramError(f"unknown move {kind!r}")
        except (KeyError, TypeError) as exc:
            raise DiagramError(f"malformed move {mv!r}: {exc}") from exc
    return sp


# -- twist-surgery configurations ------------------------------------------------


def twist_configuration(eps: int = -1, copies: int = 1) -> SurgeryPresentation:
    """0-framed unknots, each passing twice through its own ``eps``-framed circle.

    Both strands run the same way through the circle, so lk(K, U) = 2 and
    blowing the circle down leaves K with framing -4 * eps and a full twist
    (right-handed for eps = -1).  ``copies`` > 1 gives split copies, the
    higher-genus pattern of the same identity.
    """
    from .diagram import disjoint_union, r1_insert
    from .satellites import unknot

    parts = []
    for c in range(copies):
        k = r1_insert(unknot(f"K{c + 1}"), f"K{c + 1}", 0, 1, True)
        parts.append(blow_up(SurgeryPresentation(k), [(f"K{c + 1}", 0, 1), (f"K{c + 1}", 1, 1)], eps, f"U{c + 1}", twist=False))
    d = disjoint_union(*(p.diagram for p in parts))
    return SurgeryPresentation(d, frozenset(f"U{c + 1}" for c in range(copies)))
