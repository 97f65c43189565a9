"""Polygonal links in R^3 and their projections to Gauss-code diagrams."""

from __future__ import annotations

from collections import defaultdict
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .diagram import Component, Diagram, DiagramError, Passage, check_valid

# a fixed rotation with no special alignment to coordinate planes
_DEFAULT_ANGLES = (0.3141, 0.2718, 0.1618)


def rotation(angles: Sequence[float] = _DEFAULT_ANGLES) -> np.ndarray:
    a, b, c = angles
    rx = np.array([[1, 0, 0], [0, np.cos(a), -np.sin(a)], [0, np.sin(a), np.cos(a)]])
    ry = np.array([[np.cos(b), 0, np.sin(b)], [0, 1, 0], [-np.sin(b), 0, np.cos(b)]])
    rz = np.array([[np.cos(c), -np.sin(c), 0], [np.sin(c), np.cos(c), 0], [0, 0, 1]])
    return rz @ ry @ rx


def closed(points) -> np.ndarray:
    """Vertices of a closed polygon, dropping a repeated final vertex."""
    pts = np.asarray(points, dtype=float)
    if len(pts) > 1 and np.allclose(pts[0], pts[-1]):
        pts = pts[:-1]
    if len(pts) < 3:
        raise DiagramError("a closed curve needs at least three vertices")
    return pts


def _candidate_pairs(p, q, cell: float):
    lo = np.minimum(p, q)
    hi = np.maximum(p, q)
    grid: Dict[Tuple[int, int], List[int]] = defaultdict(list)
    ilo = np.floor(lo / cell).astype(int)
    ihi = np.floor(hi / cell).astype(int)
    for s in range(len(p)):
        for gx in range(ilo[s, 0], ihi[s, 0] + 1):
            for gy in range(ilo[s, 1], ihi[s, 1] + 1):
                grid[gx, gy].append(s)
    pairs = set()
    for members in grid.values():
        if len(members) < 2:
            continue
        for i, a in enumerate(members):
            for b in members[i + 1 :]:
                pairs.add((a, b))
    return sorted(pairs)


Hit = Tuple[float, int, bool, int]


def planar_crossings(paths: Sequence[Tuple[np.ndarray, bool]], tol: float = 1e-9) -> List[List[Hit]]:
    """Crossings of polylines projected to the (x, y) plane, z being height.

    ``paths`` holds (points, closed) pairs.  Returns, per path, the hits
    ``(parameter, crossing id, over, sign)`` sorted along the path, where the
    parameter is segment index plus the fraction along the segment.  The sign
    is that of the z-component of (over direction x under direction).
    """
    P, Q, owner, index, sizes, closed_flags = [], [], [], [], [], []
    for pi, (pts, is_closed) in enumerate(paths):
        pts = np.asarray(pts, dtype=float)
        ends = np.roll(pts, -1, axis=0) if is_closed else pts[1:]
        starts = pts if is_closed else pts[:-1]
        P.append(starts)
        Q.append(ends)
        owner.extend([pi] * len(starts))
        index.extend(range(len(starts)))
        sizes.append(len(starts))
        closed_flags.append(is_closed)
    hits: List[List[Hit]] = [[] for _ in paths]
    if not owner:
        return hits
    P3, Q3 = np.vstack(P), np.vstack(Q)
    owner_a, index_a = np.array(owner), np.array(index)
    p, q = P3[:, :2], Q3[:, :2]
    lengths = np.linalg.norm(q - p, axis=1)
    cell = max(float(np.median(lengths)) * 2.0, 1e-9)
    xid = 0
    for a, b in _candidate_pairs(p, q, cell):
        oa, ob = owner_a[a], owner_a[b]
        if oa == ob:
            n = sizes[oa]
            gap = abs(index_a[a] - index_a[b])
            if gap == 1 or (closed_flags[oa] and gap == n - 1):
                continue
        r = q[a] - p[a]
        s = q[b] - p[b]
        w = p[b] - p[a]
        den = r[0] * s[1] - r[1] * s[0]
        scale = np.linalg.norm(r) * np.linalg.norm(s)
        if abs(den) <= tol * max(scale, 1e-300):
            # parallel segments: reject overlapping collinear pieces
            if abs(w[0] * r[1] - w[1] * r[0]) <= tol * max(np.linalg.norm(r), 1e-300) * (1 + np.linalg.norm(w)):
                rr = float(r @ r)
                t0, t1 = sorted(((w @ r) / rr, ((w + s) @ r) / rr))
                if t1 > tol and t0 < 1 - tol:
                    raise DiagramError("collinear overlap in projection; perturb the curves")
            continue
        t = (w[0] * s[1] - w[1] * s[0]) / den
        u = (w[0] * r[1] - w[1] * r[0]) / den
        if t < -tol or t > 1 + tol or u < -tol or u > 1 + tol:
            continue
        if min(t, u) < tol or max(t, u) > 1 - tol:
            raise DiagramError("projection passes through a vertex; perturb the curves")
        za = P3[a, 2] + t * (Q3[a, 2] - P3[a, 2])
        zb = P3[b, 2] + u * (Q3[b, 2] - P3[b, 2])
        if abs(za - zb) < tol:
            raise DiagramError("curves intersect in space")
        over_a = bool(za > zb)
        ro, ru = (r, s) if over_a else (s, r)
        sign = 1 if ro[0] * ru[1] - ro[1] * ru[0] > 0 else -1
        hits[oa].append((index_a[a] + t, xid, over_a, sign))
        hits[ob].append((index_a[b] + u, xid, not over_a, sign))
        xid += 1
    return [sorted(h) for h in hits]


def diagram_from_curves(
    curves: Sequence, labels: Optional[Sequence[str]] = None, rot: Optional[np.ndarray] = None
) -> Diagram:
    """Project polygonal closed curves along z after a generic rotation.

    Raises DiagramError when the projection is not generic (touching or
    triple points) or the curves intersect in space.
    """
    R = rotation() if rot is None else rot
    curves = [closed(c) @ R.T for c in curves]
    labels = list(labels) if labels is not None else [f"L{i + 1}" for i in range(len(curves))]
    if len(labels) != len(curves):
        raise DiagramError("one label per curve required")
    hits = planar_crossings([(c, True) for c in curves])
    comps = []
    for lab, row in zip(labels, hits):
        comps.append(Component(lab, tuple(Passage(int(x), ov, sg) for _, x, ov, sg in row)))
    return check_valid(Diagram(tuple(comps)))


def ellipse(center, axis1, axis2, n: int = 64, phase: float = 0.0) -> np.ndarray:
    t = np.linspace(0, 2 * np.pi, n, endpoint=False) + phase
    c = np.asarray(center, float)
    return c + np.outer(np.cos(t), axis1) + np.outer(np.sin(t), axis2)


def borromean_curves(n: int = 48) -> List[np.ndarray]:
    """Three mutually orthogonal ellipses."""
    return [
        ellipse((0, 0, 0), (2.0, 0, 0), (0, 1.0, 0), n),
        ellipse((0, 0, 0), (0, 2.0, 0), (0, 0, 1.0), n),
        ellipse((0, 0, 0), (0, 0, 2.0), (1.0, 0, 0), n),
    ]
