"""Vector primitives shared by every other module.

Two scalar modes coexist:

* exact mode -- coordinates are ``fractions.Fraction`` (all canonical
  generators only ever produce dyadic rationals, so +, - and halving stay
  exact and equality assertions are bit-for-bit);
* float mode -- plain 64-bit floats for generic analysis.

Points are plain tuples; finite-support sequence-space vectors are
:class:`serwalk.seqspace.SparseVec`.  Norms and distances always come back
as floats regardless of mode.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

#: points closer than this are considered the same sample element
MEMBERSHIP_TOL = 1e-12

EUCLIDEAN = "euclidean"
SUP = "sup"


def is_dyadic(x) -> bool:
    """True when x is an integer or a Fraction with power-of-two denominator."""
    if isinstance(x, int):
        return True
    if isinstance(x, Fraction):
        d = x.denominator
        return d & (d - 1) == 0
    return False


def exact(x) -> Fraction:
    """Coerce ints/strings/Fractions to an exact Fraction coordinate."""
    return Fraction(x)


def point_mode(p) -> str:
    """'exact' when every coordinate is int/Fraction, else 'float'."""
    coords = p.entries.values() if hasattr(p, "entries") else p
    return "exact" if all(isinstance(c, (int, Fraction)) for c in coords) else "float"


def _coords(v) -> Sequence:
    # SparseVec exposes .entries; dense points are plain sequences
    if hasattr(v, "entries"):
        return list(v.entries.values())
    return v


def norm(v, kind: str = EUCLIDEAN) -> float:
    """Euclidean or sup norm of a dense point or a SparseVec, as a float.

    The sup norm of an empty-support SparseVec is 0.
    """
    coords = _coords(v)
    if kind == SUP:
        return max((abs(float(c)) for c in coords), default=0.0)
    if kind == EUCLIDEAN:
        return math.sqrt(sum(float(c) * float(c) for c in coords))
    raise ValueError(f"unknown norm kind {kind!r}")


def sub(u, v):
    """u - v for dense points or SparseVecs (mode preserved)."""
    if hasattr(u, "entries") or hasattr(v, "entries"):
        return u - v
    return tuple(a - b for a, b in zip(u, v, strict=True))


def add(u, v):
    if hasattr(u, "entries") or hasattr(v, "entries"):
        return u + v
    return tuple(a + b for a, b in zip(u, v, strict=True))


def neg(u):
    if hasattr(u, "entries"):
        return -u
    return tuple(-a for a in u)


def distance(u, v, kind: str = EUCLIDEAN) -> float:
    return norm(sub(u, v), kind)


def same_point(u, v, tol: float = MEMBERSHIP_TOL, kind: str = EUCLIDEAN) -> bool:
    return distance(u, v, kind) <= tol


@dataclass(frozen=True)
class PointSample:
    """A finite list of points standing in for a (possibly infinite) set."""

    points: tuple
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def index_of(self, p, kind: str = EUCLIDEAN) -> Optional[int]:
        for i, q in enumerate(self.points):
            if same_point(p, q, kind=kind):
                return i
        return None

    def is_sparse(self) -> bool:
        return bool(self.points) and hasattr(self.points[0], "entries")


def _as_sample(a) -> PointSample:
    return a if isinstance(a, PointSample) else PointSample(tuple(a))


def _distance_matrix(pts_a, pts_b, kind: str) -> np.ndarray:
    """Pairwise distances; dense points go through numpy, sparse loop."""
    if pts_a and hasattr(pts_a[0], "entries"):
        out = np.empty((len(pts_a), len(pts_b)))
        for i, u in enumerate(pts_a):
            for j, v in enumerate(pts_b):
                out[i, j] = distance(u, v, kind)
        return out
    a = np.asarray([[float(c) for c in p] for p in pts_a])
    b = np.asarray([[float(c) for c in p] for p in pts_b])
    diff = a[:, None, :] - b[None, :, :]
    if kind == SUP:
        return np.abs(diff).max(axis=2)
    return np.sqrt((diff * diff).sum(axis=2))


def hausdorff_distance(a, b, kind: str = EUCLIDEAN) -> float:
    """Symmetric Hausdorff distance between two finite samples."""
    a, b = _as_sample(a), _as_sample(b)
    if not a.points or not b.points:
        raise ValueError("empty sample")
    d = _distance_matrix(list(a.points), list(b.points), kind)
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


class UnionFind:
    """Union-find with path halving; just enough for gap components."""

    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def gap_components(a, gap: float, kind: str = EUCLIDEAN) -> list[list[int]]:
    """Connected components of the gap-graph (edges: distance <= gap).

    Returns a partition of ``range(len(a))`` as lists of indices, ordered by
    smallest member.
    """
    a = _as_sample(a)
    if not a.points:
        raise ValueError("empty sample")
    n = len(a.points)
    d = _distance_matrix(list(a.points), list(a.points), kind)
    uf = UnionFind(n)
    for i in range(n):
        for j in range(i + 1, n):
            if d[i, j] <= gap:
                uf.union(i, j)
    blocks: dict[int, list[int]] = {}
    for i in range(n):
        blocks.setdefault(uf.find(i), []).append(i)
    return sorted(blocks.values(), key=lambda blk: blk[0])


def gap_chainable(a, gap: float, start, end, kind: str = EUCLIDEAN):
    """BFS chain from start to end inside the sample with steps <= gap.

    Returns the chain as a list of points, or None when start and end sit in
    different gap-components.  Raises ValueError when an endpoint is not a
    sample element.
    """
    a = _as_sample(a)
    si = a.index_of(start, kind=kind)
    ei = a.index_of(end, kind=kind)
    if si is None or ei is None:
        raise ValueError("endpoint not in sample")
    if si == ei:
        return [a.points[si]]
    n = len(a.points)
    d = _distance_matrix(list(a.points), list(a.points), kind)
    prev = [-1] * n
    seen = [False] * n
    seen[si] = True
    queue = [si]
    while queue:
        nxt = []
        for u in queue:
            for v in range(n):
                if not seen[v] and d[u, v] <= gap:
                    seen[v] = True
                    prev[v] = u
                    if v == ei:
                        path = [v]
                        while path[-1] != si:
                            path.append(prev[path[-1]])
                        return [a.points[i] for i in reversed(path)]
                    nxt.append(v)
        queue = nxt
    return None
