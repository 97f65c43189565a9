"""Seifert matrices on symplectic curve bases and the Lagrangian conditions.

Surfaces are never stored.  A ``CurveSystem`` is a diagram whose components
are tagged as link components, basis curves a_i / b_i, and their push-offs;
all Seifert data is read off as linking numbers between these components.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .diagram import Diagram, DiagramError, check_valid, linking_matrix, sublink
from .milnor import is_homotopy_trivial

ROLE_KINDS = ("link_component", "a_curve", "b_curve", "a_pushoff", "b_pushoff")


def symplectic_form(g: int) -> np.ndarray:
    J = np.zeros((2 * g, 2 * g), dtype=np.int64)
    for i in range(g):
        J[2 * i, 2 * i + 1] = 1
        J[2 * i + 1, 2 * i] = -1
    return J


def basis_labels(g: int) -> List[str]:
    return [f"{x}{i + 1}" for i in range(g) for x in "ab"]


@dataclass
class SeifertMatrix:
    """Integer 2g x 2g matrix in the basis (a1, b1, ..., ag, bg)."""

    g: int
    entries: np.ndarray
    labels: List[str] = field(default_factory=list)
    origins: List[str] = field(default_factory=list)

    def __post_init__(self):
        self.entries = np.asarray(self.entries, dtype=np.int64).reshape(2 * self.g, 2 * self.g)
        if not self.labels:
            self.labels = basis_labels(self.g)
        if len(self.labels) != 2 * self.g:
            raise ValueError("need one label per basis curve")
        if self.origins and len(self.origins) != 2 * self.g:
            raise ValueError("need one origin tag per basis curve")
        if self.pair_signs() is None:
            raise ValueError("V - V^T is not +-1 on each (a_i, b_i) pair and 0 across pairs")

    def pair_signs(self) -> Optional[List[int]]:
        """a_i . b_i for each pair, or None when V - V^T is not of pair form."""
        A = self.entries - self.entries.T
        signs = [int(A[2 * i, 2 * i + 1]) for i in range(self.g)]
        if any(abs(e) != 1 for e in signs):
            return None
        want = np.zeros_like(A)
        for i, e in enumerate(signs):
            want[2 * i, 2 * i + 1], want[2 * i + 1, 2 * i] = e, -e
        return signs if np.array_equal(A, want) else None

    def __eq__(self, other):
        return isinstance(other, SeifertMatrix) and self.g == other.g and np.array_equal(self.entries, other.entries)

    def to_dict(self) -> dict:
        out = {"g": self.g, "entries": self.entries.tolist(), "labels": list(self.labels)}
        if self.origins:
            out["origins"] = list(self.origins)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "SeifertMatrix":
        return cls(int(data["g"]), np.array(data["entries"], dtype=np.int64).reshape(2 * data["g"], 2 * data["g"]),
                   list(data.get("labels", [])), list(data.get("origins", [])))

    @classmethod
    def from_json(cls, text: str) -> "SeifertMatrix":
        return cls.from_dict(json.loads(text))


@dataclass
class ConditionReport:
    condition: str
    verdict: bool
    witnesses: List[Tuple[str, str, int]] = field(default_factory=list)

    def __post_init__(self):
        if not self.verdict and not self.witnesses:
            raise ValueError("a failing report needs a witness")
        self.witnesses = sorted((str(a), str(b), int(c)) for a, b, c in self.witnesses)

    def __bool__(self):
        return self.verdict

    def to_dict(self) -> dict:
        return {
            "condition": self.condition,
            "verdict": "pass" if self.verdict else "fail",
            "witnesses": [{"what": a, "where": b, "value": c} for a, b, c in self.witnesses],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "ConditionReport":
        ws = [(w["what"], w["where"], w["value"]) for w in data["witnesses"]]
        return cls(data["condition"], data["verdict"] == "pass", ws)

    def to_text(self) -> str:
        lines = [f"{self.condition}: {'pass' if self.verdict else 'fail'}"]
        lines += [f"  {a} at {b} = {c}" for a, b, c in self.witnesses]
        return "\n".join(lines)


# -- curve systems ------------------------------------------------------------


@dataclass(frozen=True)
class Role:
    """``kind`` is one of ROLE_KINDS; ``index`` is 1-based for curves.

    For a b push-off, ``side`` records whether it lies on the positive (+1)
    or negative (-1) side of the surface.
    """

    kind: str
    index: int = 0
    side: int = 1

    def to_list(self):
        return [self.kind, self.index, self.side]


@dataclass
class CurveSystem:
    diagram: Diagram
    roles: Dict[str, Role]

    def __post_init__(self):
        self.roles = {k: (v if isinstance(v, Role) else Role(*v)) for k, v in self.roles.items()}
        problems = self.problems()
        if problems:
            raise DiagramError("; ".join(problems))

    @property
    def genus(self) -> int:
        return sum(1 for r in self.roles.values() if r.kind == "a_curve")

    def label(self, kind: str, i: int) -> str:
        for lab, r in self.roles.items():
            if r.kind == kind and r.index == i:
                return lab
        raise KeyError(f"no {kind} with index {i}")

    def labels_of(self, kind: str) -> List[str]:
        found = [(r.index, lab) for lab, r in self.roles.items() if r.kind == kind]
        return [lab for _, lab in sorted(found)]

    def b_side(self, i: int) -> int:
        return self.roles[self.label("b_pushoff", i)].side

    def problems(self) -> List[str]:
        out = []
        d = self.diagram
        for lab, r in self.roles.items():
            if r.kind not in ROLE_KINDS:
                out.append(f"{lab}: unknown role {r.kind}")
            if lab not in d.labels:
                out.append(f"{lab}: not a component of the diagram")
        if out:
            return out
        counts: Dict[Tuple[str, int], int] = {}
        for r in self.roles.values():
            if r.kind != "link_component":
                counts[r.kind, r.index] = counts.get((r.kind, r.index), 0) + 1
        g = self.genus
        for i in range(1, g + 1):
            for kind in ROLE_KINDS[1:]:
                if counts.get((kind, i), 0) != 1:
                    out.append(f"need exactly one {kind} with index {i}")
        if len(counts) != 4 * g:
            out.append("curve indices must run 1..g")
        if out:
            return out
        lk = linking_matrix(d)
        ix = {lab: i for i, lab in enumerate(d.labels)}
        for i in range(1, g + 1):
            a, b, bp = (ix[self.label(k, i)] for k in ("a_curve", "b_curve", "b_pushoff"))
            if lk[bp, b]:
                out.append(f"lk(b'{i}, b{i}) = {lk[bp, b]} != 0")
            if lk[bp, a]:
                out.append(f"lk(b'{i}, a{i}) = {lk[bp, a]} != 0")
            if d.components[b].framing:
                out.append(f"b{i} has framing {d.components[b].framing}")
        return out

    def to_dict(self) -> dict:
        return {"diagram": json.loads(self.diagram.to_json()), "roles": {k: v.to_list() for k, v in sorted(self.roles.items())}}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "CurveSystem":
        d = Diagram.from_json(json.dumps(data["diagram"]))
        return cls(d, {k: Role(*v) for k, v in data["roles"].items()})

    @classmethod
    def from_json(cls, text: str) -> "CurveSystem":
        return cls.from_dict(json.loads(text))


def seifert_matrix_of(cs: CurveSystem) -> SeifertMatrix:
    """V(x, y) = lk(x+, y) on the basis (a1, b1, ..., ag, bg).

    Distinct basis curves other than a_i, b_i are disjoint, so their entry is
    a plain linking number.  Within a pair, V(a,a) and V(a,b) use the stored
    a push-off; V(b,a) follows from which side b' was taken on, since b' is
    chosen to have zero linking with a.
    """
    g = cs.genus
    d = cs.diagram
    lk = linking_matrix(d)
    ix = {lab: i for i, lab in enumerate(d.labels)}
    order = []
    for i in range(1, g + 1):
        order += [ix[cs.label("a_curve", i)], ix[cs.label("b_curve", i)]]
    V = lk[np.ix_(order, order)].astype(np.int64)
    for i in range(1, g + 1):
        a, b, ap = ix[cs.label("a_curve", i)], ix[cs.label("b_curve", i)], ix[cs.label("a_pushoff", i)]
        p = 2 * (i - 1)
        V[p, p] = lk[ap, a]
        V[p, p + 1] = lk[ap, b]
        V[p + 1, p] = 0 if cs.b_side(i) == 1 else lk[ap, b] - 1
        V[p + 1, p + 1] = 0
    labels = [f"{x}{i}" for i in range(1, g + 1) for x in "ab"]
    origins = [d.labels[j] for j in order]
    return SeifertMatrix(g, V, labels, origins)


# -- block-form checks --------------------------------------------------------


def _pair_name(V: SeifertMatrix, r: int, c: int) -> str:
    return f"({V.labels[r]},{V.labels[c]})"


def is_good_block_form(V: SeifertMatrix) -> ConditionReport:
    """Block diagonal in (a_i, b_i) pairs, each block [[0, +-1], [0, 0]]."""
    M = V.entries
    ws = []
    for r in range(2 * V.g):
        for c in range(2 * V.g):
            if r // 2 == c // 2 and (r % 2, c % 2) == (0, 1):
                bad = abs(M[r, c]) != 1
            else:
                bad = M[r, c] != 0
            if bad:
                ws.append(("entry", _pair_name(V, r, c), int(M[r, c])))
    return ConditionReport("good_block_form", not ws, ws)


def is_extended_form(V: SeifertMatrix) -> ConditionReport:
    """Good diagonal blocks; lk(a_i, b_j) and lk(b_i, b_j) vanish for i != j.

    The a_i, a_j entries are left unconstrained.
    """
    M = V.entries
    ws = []
    for i in range(V.g):
        p = 2 * i
        for r in (p, p + 1):
            for c in (p, p + 1):
                bad = abs(M[r, c]) != 1 if (r, c) == (p, p + 1) else M[r, c] != 0
                if bad:
                    ws.append(("entry", _pair_name(V, r, c), int(M[r, c])))
        for j in range(V.g):
            if i == j:
                continue
            q = 2 * j
            for r, c in ((p, q + 1), (p + 1, q), (p + 1, q + 1)):
                if M[r, c]:
                    ws.append(("entry", _pair_name(V, r, c), int(M[r, c])))
    return ConditionReport("extended_form", not ws, ws)


# -- Nielsen moves on bases ---------------------------------------------------


def elementary_matrix(n: int, move: Sequence[Tuple[int, int, int]]) -> np.ndarray:
    """Basis change for ``x_i <- x_i + c x_j`` steps (0-based), applied in order."""
    P = np.eye(n, dtype=np.int64)
    for i, j, c in move:
        if i == j or not (0 <= i < n and 0 <= j < n):
            raise ValueError(f"bad elementary step {(i, j, c)}")
        E = np.eye(n, dtype=np.int64)
        E[i, j] = c
        P = E @ P
    return P


def nielsen_congruence(V: SeifertMatrix, move: Sequence[Tuple[int, int, int]]) -> SeifertMatrix:
    """P V P^T for the elementary base change ``move``; rejects moves changing V - V^T.

    A single step a_i <- a_i + b_i is symplectic; adding a_j into a_i needs
    the compensating step b_j <- b_j - b_i in the same move.
    """
    n = 2 * V.g
    P = elementary_matrix(n, move)
    J = V.entries - V.entries.T
    if not np.array_equal(P @ J @ P.T, J):
        raise ValueError("move is not symplectic")
    return SeifertMatrix(V.g, P @ V.entries @ P.T, list(V.labels), list(V.origins))


def symplectic_moves(g: int) -> List[Tuple[Tuple[int, int, int], ...]]:
    """Generating moves for the bounded search: transvections and paired additions."""
    moves = []
    for i in range(g):
        a, b = 2 * i, 2 * i + 1
        for c in (1, -1):
            moves += [((a, b, c),), ((b, a, c),)]
    for i in range(g):
        for j in range(g):
            if i == j:
                continue
            ai, bi, aj, bj = 2 * i, 2 * i + 1, 2 * j, 2 * j + 1
            for c in (1, -1):
                # both compensations; only the one matching the pair signs survives
                for e in (1, -1):
                    moves.append(((ai, aj, c), (bj, bi, e * c)))
                    if i < j:
                        moves.append(((ai, bj, c), (aj, bi, e * c)))
    return moves


def search_good_basis(V: SeifertMatrix, max_depth: int = 6, max_nodes: int = 200000):
    """Breadth-first search for a move sequence reaching good block form.

    Returns the list of moves, or None meaning "not found within the bound"
    (never a proof that no such basis exists).
    """
    if max_depth > 6:
        raise ValueError("search depth is capped at 6")
    moves = symplectic_moves(V.g)
    start = V.entries
    seen = {start.tobytes()}
    queue = deque([(V, [])])
    while queue:
        cur, path = queue.popleft()
        if is_good_block_form(cur):
            return path
        if len(path) == max_depth:
            continue
        for mv in moves:
            try:
                nxt = nielsen_congruence(cur, mv)
            except ValueError:  # paired step needs the other sign on a negative pair
                continue
            key = nxt.entries.tobytes()
            if key in seen:
                continue
            seen.add(key)
            if len(seen) > max_nodes:
                return None
            queue.append((nxt, path + [mv]))
    return None


# -- Lagrangian conditions ----------------------------------------------------


def _witness(d: Diagram, res) -> Tuple[str, str, int]:
    I, value = res.witness
    names = ",".join(d.labels[i - 1] for i in I)
    what = "lk" if len(I) == 2 else f"mu{len(I)}"
    return (what, names, value)


def check_lagrangian_trivial(cs: CurveSystem) -> ConditionReport:
    """The b-curves, with every other component deleted, form a homotopically trivial link."""
    bs = cs.labels_of("b_curve")
    if not bs:
        return ConditionReport("lagrangian_trivial", True)
    d = sublink(cs.diagram, bs)
    ws = [("framing", lab, c.framing) for lab, c in zip(d.labels, d.components) if c.framing]
    if ws:
        return ConditionReport("lagrangian_trivial", False, ws)
    res = is_homotopy_trivial(d)
    return ConditionReport("lagrangian_trivial", res.trivial, [] if res.trivial else [_witness(d, res)])


def plus_test_links(cs: CurveSystem) -> List[Tuple[str, Diagram]]:
    """The 2g links {b'_1, ..., b'_g} plus one a_i or b_i each."""
    bps = cs.labels_of("b_pushoff")
    out = []
    for i in range(1, cs.genus + 1):
        for kind, name in (("a_curve", f"a{i}"), ("b_curve", f"b{i}")):
            d = check_valid(sublink(cs.diagram, bps + [cs.label(kind, i)]))
            out.append((f"b'+{name}", d))
    return out


def check_lagrangian_trivial_plus(cs: CurveSystem) -> ConditionReport:
    ws = []
    for name, d in plus_test_links(cs):
        res = is_homotopy_trivial(d)
        if not res.trivial:
            what, where, value = _witness(d, res)
            ws.append((what, f"{name}: {where}", value))
    return ConditionReport("lagrangian_trivial_plus", not ws, ws)
