"""Curves in a solid torus and their compilation into cable patterns.

Coordinates are (x, y, z): y runs along the core with period ``L``, x is the
in-plane direction (to the right of the core when facing +y) and z is height
above the blackboard plane.  A collection of polygonal curves becomes a
single-box ``CablePattern``, so any companion component can be replaced by
their untwisted satellite.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .diagram import DiagramError
from .geometry import planar_crossings
from .satellites import CablePattern

# shear applied before projecting, so stacked push-offs never overlap in projection
_SHEAR = (0.1307, 0.0711)


@dataclass
class TorusCurve:
    """Closed polygon; the closing segment runs to ``points[0] + (0, wind*L, 0)``."""

    name: str
    points: np.ndarray
    wind: int = 0

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=float)
        if self.points.ndim != 2 or self.points.shape[1] != 3 or len(self.points) < 3:
            raise DiagramError(f"curve {self.name}: need an (n, 3) array with n >= 3")


def avoid_cut(ys, L: float, eps: float = 1e-3) -> np.ndarray:
    """Nudge interior samples off the cut y = 0 (mod L); endpoints stay put."""
    ys = np.array(ys, dtype=float)
    inner = ys[1:-1]
    hit = np.abs(inner / L - np.round(inner / L)) < eps
    inner[hit] += 0.0123 * L
    return ys


def _shear(pts: np.ndarray) -> np.ndarray:
    out = pts.copy()
    out[:, 0] += _SHEAR[0] * pts[:, 2]
    out[:, 1] += _SHEAR[1] * pts[:, 2]
    return out


def _cut_curve(c: TorusCurve, L: float):
    """Split into arcs between crossings of the cut y = 0 (mod L).

    Returns (arcs, events) where each arc is an array of points with y in
    [0, L] and events[i] = (x, direction) is the cut crossing that ends arc
    i (and starts arc i + 1 cyclically).  A curve that never meets the cut
    comes back as a single closed loop with no events.
    """
    pts = _shear(c.points)
    ys = pts[:, 1] / L
    if np.any(np.abs(ys - np.round(ys)) < 1e-12):
        raise DiagramError(f"curve {c.name}: vertex lies on the cut; shift it")
    shift = np.array([0.0, c.wind * L, 0.0])
    verts = np.vstack([pts, pts[:1] + shift])
    seq = [verts[0]]
    marks: List[Tuple[int, int]] = []  # (index into seq, direction) of cut points
    for a, b in zip(verts[:-1], verts[1:]):
        ya, yb = a[1], b[1]
        if yb != ya:
            lo, hi = sorted((ya, yb))
            ks = [k for k in range(int(np.floor(lo / L)) + 1, int(np.ceil(hi / L))) if lo < k * L < hi]
            for k in ks if yb > ya else ks[::-1]:
                t = (k * L - ya) / (yb - ya)
                seq.append(a + t * (b - a))
                marks.append((len(seq) - 1, 1 if yb > ya else -1))
        seq.append(b)
    body = np.array(seq[:-1])
    n = len(body)
    if not marks:
        loop = body.copy()
        loop[:, 1] -= np.floor(loop[:, 1].min() / L) * L
        if loop[:, 1].max() >= L:
            raise DiagramError(f"curve {c.name}: loop wraps the cut")
        return [loop], []
    marks = [(m % n, d) for m, d in marks]
    ext = np.vstack([body, body + shift])  # one extra period to unwrap the closing segment
    arcs, events = [], []
    for j, (m, direction) in enumerate(marks):
        m_next, d_next = marks[(j + 1) % len(marks)]
        stop = m_next if m_next > m else m_next + n
        chunk = ext[m : stop + 1].copy()
        mid = (chunk[:, 1].min() + chunk[:, 1].max()) / 2
        chunk[:, 1] -= np.floor(mid / L) * L
        chunk[0, 1] = 0.0 if direction == 1 else L
        chunk[-1, 1] = L if d_next == 1 else 0.0
        arcs.append(chunk)
        events.append((ext[stop, 0], d_next))
    return arcs, events


def pattern_from_curves(curves: Sequence[TorusCurve], L: float) -> CablePattern:
    """Single-box cable pattern whose components are ``curves`` (suffix = name)."""
    cut = [_cut_curve(c, L) for c in curves]
    xs = []
    for ci, (arcs, events) in enumerate(cut):
        for ai, (x, d) in enumerate(events):
            xs.append((x, ci, ai, d))
    xs.sort()
    for (x1, *_), (x2, *_) in zip(xs, xs[1:]):
        if abs(x1 - x2) < 1e-9:
            raise DiagramError("two strands meet the cut at the same point")
    strand = {(ci, ai): j for j, (_, ci, ai, _) in enumerate(xs)}
    orient = tuple(d for _, _, _, d in xs)
    paths_geo, owners = [], []
    for ci, (arcs, events) in enumerate(cut):
        for ai, arc in enumerate(arcs):
            paths_geo.append((arc, not events))
            owners.append((ci, ai))
    hits = planar_crossings(paths_geo)
    box = []
    starts = []
    loops = []
    for (ci, ai), row in zip(owners, hits):
        arcs, events = cut[ci]
        ps = tuple((x, ov, sg) for _, x, ov, sg in row)
        if not events:
            loops.append((0, ps, curves[ci].name))
            continue
        prev = (ai - 1) % len(arcs)
        j_in, d_in = strand[ci, prev], events[prev][1]
        j_out, d_out = strand[ci, ai], events[ai][1]
        start = ("bot", j_in) if d_in == 1 else ("top", j_in)
        end = ("top", j_out) if d_out == 1 else ("bot", j_out)
        if ai == 0:
            starts.append((0, len(box), curves[ci].name))
        box.append((start, ps, end))
    return CablePattern(n=len(xs), orientations=[orient], boxes=[box], starts=starts, loops=loops)


# -- Whitehead-double Seifert surfaces ------------------------------------------


def _smoothstep(t):
    t = np.clip(t, 0.0, 1.0)
    return t * t * (3 - 2 * t)


@dataclass
class WhSurface:
    """Genus-1 surface: flat annulus around x = c plumbed with a twisted band.

    The annulus A is {|x - c| <= w, z = 0}.  The band B runs along a rounded
    loop (its core) in the tilted plane y = Y + kappa*z, crossing A along
    y = Y and rising to height ``side*h`` (side = +1 "up", -1 "down").  Along
    the far edge the band makes ``tau`` full twists; its two edges clasp.
    ``offset`` shifts the whole surface along its normal (parallel copies).
    """

    c: float
    Y: float
    L: float
    side: int = 1
    tau: int = 1
    offset: float = 0.0
    w: float = 0.6
    w0: float = 1.0
    h: float = 1.2
    kappa: float = 0.5
    s_w: float = 0.2
    r: float = 0.3
    samples: int = 24

    def _core_frame(self):
        """Core loop of the band with tangent, width and normal directions.

        Returns (points, e, n, i_plus, i_minus) where the bottom edge passes
        x = c + w at index i_plus and x = c - w at i_minus.
        """
        H = self.side * self.h
        r = self.r
        X0, X1 = -self.w0, self.w0
        k = self.samples
        pts2 = []
        # bottom edge, +X, with explicit vertices at +-w
        bottom = [X0 + r, -self.w, 0.0, self.w, X1 - r]
        pts2 += [(x, 0.0) for x in bottom]
        sgn = 1.0 if H > 0 else -1.0

        def arc(cx, cz, a0, a1):
            ts = np.linspace(a0, a1, k)[1:-1]
            return [(cx + r * np.cos(t), cz + sgn * r * np.sin(t)) for t in ts]

        pts2 += arc(X1 - r, sgn * r, -np.pi / 2, 0.0)
        pts2 += [(X1, sgn * r), (X1, H - sgn * r)]
        pts2 += arc(X1 - r, H - sgn * r, 0.0, np.pi / 2)
        top = np.linspace(X1 - r, X0 + r, 4 * k)
        top_start = len(pts2)
        pts2 += [(x, H) for x in top]
        top_end = len(pts2)
        pts2 += arc(X0 + r, H - sgn * r, np.pi / 2, np.pi)
        pts2 += [(X0, H - sgn * r), (X0, sgn * r)]
        pts2 += arc(X0 + r, sgn * r, np.pi, 3 * np.pi / 2)
        P2 = np.array(pts2)
        pts = np.column_stack([self.c + P2[:, 0], self.Y + self.kappa * P2[:, 1], P2[:, 1]])
        T = np.roll(pts, -1, axis=0) - np.roll(pts, 1, axis=0)
        T /= np.linalg.norm(T, axis=1)[:, None]
        yhat = np.array([0.0, 1.0, 0.0])
        e0 = yhat - (T @ yhat)[:, None] * T
        e0 /= np.linalg.norm(e0, axis=1)[:, None]
        n0 = np.cross(T, e0)
        phi = np.zeros(len(pts))
        span = top_end - top_start
        phi[top_start:top_end] = 2 * np.pi * self.tau * _smoothstep((np.arange(span) + 0.5) / span)
        phi[top_end:] = 2 * np.pi * self.tau
        e = np.cos(phi)[:, None] * e0 + np.sin(phi)[:, None] * n0
        n = np.cos(phi)[:, None] * n0 - np.sin(phi)[:, None] * e0
        return pts, e, n, 3, 1

    def band_core(self, off: float = 0.0) -> np.ndarray:
        pts, e, n, _, _ = self._core_frame()
        return pts + (self.offset + off) * n

    def annulus_core(self, off: float = 0.0, x: Optional[float] = None, y0: float = None):
        """Longitude of A at height ``off`` (winds once, starts near y0)."""
        y0 = self.Y + self.L / 2 + 0.1371 if y0 is None else y0
        ys = y0 + np.linspace(0, self.L, 12, endpoint=False)
        xx = self.c if x is None else x
        return np.column_stack([np.full_like(ys, xx), ys, np.full_like(ys, self.offset + off)])

    def band_path(self, t: float, i_from: int, i_to: int, step: int, off: float = 0.0) -> np.ndarray:
        """Points of the band at width coordinate ``t`` between core vertices.

        Walks the core cyclically from ``i_from`` to ``i_to`` (inclusive) in
        direction ``step`` (+1 or -1), pushed ``off`` along the normal.
        """
        pts, e, n, _, _ = self._core_frame()
        m = len(pts)
        idx = [i_from]
        while idx[-1] != i_to:
            idx.append((idx[-1] + step) % m)
        return pts[idx] + t * e[idx] + (self.offset + off) * n[idx]

    def clasp_edges(self):
        """The two band edges of the boundary knot.

        ``edge1`` runs from the x = c + w side to the x = c - w side near
        y = Y - s_w and is shifted up by L; ``edge2`` runs back near y = Y + s_w.
        """
        pts, e, n, ip, im = self._core_frame()
        m = len(pts)
        o, s = self.offset, self.s_w
        fwd = [(ip + i) % m for i in range(1, (im - ip) % m)]  # strictly between +w and -w
        back = [(im - i) % m for i in range(1, (im - ip) % m)]
        edge1 = pts[fwd] - s * e[fwd] + o * n[fwd] + np.array([0.0, self.L, 0.0])
        edge2 = pts[back] + s * e[back] + o * n[back]
        return edge1, edge2

    def edge_line(self, side: int, y_from: float, y_to: float, inset: float = 0.0, off: float = 0.0, n: int = 8):
        """Straight run along the annulus near its right (+1) or left (-1) edge."""
        x = self.c + side * (self.w - inset)
        ys = avoid_cut(np.linspace(y_from, y_to, n), self.L)
        return np.column_stack([np.full_like(ys, x), ys, np.full_like(ys, self.offset + off)])

    def boundary(self) -> np.ndarray:
        """The knot, oriented as the boundary of the surface (normal +z on A)."""
        L, Y, s = self.L, self.Y, self.s_w
        edge1, edge2 = self.clasp_edges()
        right = self.edge_line(1, Y + s, Y - s + L)
        left = self.edge_line(-1, Y - s + L, Y + s)
        return np.vstack([right, edge1, left, edge2])
