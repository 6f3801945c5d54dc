"""Finite-support sequence-space (c0) constructions.

Everything here is exact: coordinates are Fractions, zero entries are never
stored, and equality with the zero vector is a bit-exact test.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from typing import Iterable, Mapping

from .core import SUP
from .walks import PartialPermutation, SignedSeries, Walk, build_xwalk


class SparseVec:
    """Finite map index -> nonzero Fraction, modelling an element of c0.

    Immutable and hashable; supports +, -, unary -, and scalar
    multiplication.  Indices are 1-based positive integers.
    """

    __slots__ = ("entries", "_hash")

    def __init__(self, entries: Mapping[int, object] | Iterable = ()):
        items = entries.items() if hasattr(entries, "items") else entries
        clean = {}
        for i, v in items:
            if i < 1:
                raise ValueError("indices are 1-based positive integers")
            v = Fraction(v) if not isinstance(v, float) else v
            if v != 0:
                clean[int(i)] = v
        self.entries = dict(sorted(clean.items()))
        self._hash = hash(tuple(self.entries.items()))

    def __getitem__(self, i: int):
        return self.entries.get(i, 0)

    def __iter__(self):
        # block the implicit __getitem__ iteration protocol, which would
        # spin forever on the infinite tail of zeros
        raise TypeError("SparseVec is not iterable; use .entries")

    def __eq__(self, other):
        return isinstance(other, SparseVec) and self.entries == other.entries

    def __hash__(self):
        return self._hash

    def __repr__(self):
        if not self.entries:
            return "SparseVec(0)"
        return "SparseVec({%s})" % ", ".join(f"{i}: {v}" for i, v in self.entries.items())

    def __add__(self, other):
        out = dict(self.entries)
        for i, v in other.entries.items():
            out[i] = out.get(i, 0) + v
        return SparseVec(out)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return SparseVec({i: -v for i, v in self.entries.items()})

    def scale(self, c):
        return SparseVec({i: v * c for i, v in self.entries.items()})

    def support(self) -> set[int]:
        return set(self.entries)

    def is_zero(self) -> bool:
        return not self.entries

    def sup_norm(self) -> float:
        return max((abs(float(v)) for v in self.entries.values()), default=0.0)


THETA = SparseVec()


def e(i: int, value=1) -> SparseVec:
    """Scaled standard basis vector value * e_i."""
    return SparseVec({i: Fraction(value)})


def _updown_chain(anchor: SparseVec, legs: list[tuple[SparseVec, int]]) -> list[SparseVec]:
    """Chain from anchor applying each (step, count) leg in turn."""
    chain = [anchor]
    for step, count in legs:
        for _ in range(count):
            chain.append(chain[-1] + step)
    return chain


def gen_c0_two_point(phases: int) -> Walk:
    """The c0 walk whose limit set is the two-point set {theta, e_1}.

    Phase p (using basis direction e_{p+1} and step 2^(1-p)) climbs to
    e_{p+1}, slides to e_{p+1}+e_1, descends to e_1, then retraces to theta.
    theta and e_1 recur every phase; every other coordinate dies out.
    """
    if phases < 1:
        raise ValueError("phases must be >= 1")
    schedule = []
    bounds = []
    for p in range(1, phases + 1):
        step = Fraction(1, 2 ** (p - 1))
        count = 2 ** (p - 1)
        legs = [(e(p + 1, step), count), (e(1, step), count), (-e(p + 1, step), count)]
        schedule.append(_updown_chain(THETA, legs))
        bounds.append(float(step))
    return build_xwalk(schedule, step_bounds=bounds, kind=SUP)


def gen_c0_singleton_divergent(phases: int) -> Walk:
    """The rearranged c0 walk with limit set {theta} that still diverges.

    Block k climbs to e_k in 2^(k-1) steps of size 2^(1-k) and descends the
    same way, so s at index 2^k + 2^(k-1) - 2 equals e_k while the block
    ends back at theta at index 2^(k+1) - 2: sup-norm gaps of 1 recur and
    the partial sums are not Cauchy.
    """
    if phases < 1:
        raise ValueError("phases must be >= 1")
    schedule = []
    bounds = []
    for k in range(1, phases + 1):
        step = Fraction(1, 2 ** (k - 1))
        schedule.append(_updown_chain(THETA, [(e(k, step), 2 ** (k - 1))]))
        bounds.append(float(step))
    return build_xwalk(schedule, step_bounds=bounds, kind=SUP)


@dataclass
class VectorFamily:
    """2k sup-norm-one vectors summing to zero whose every k-term prefix,
    under any permutation, has sup norm >= k."""

    k: int
    dim: int
    vectors: list[tuple[int, ...]]

    def check_unit_norms(self) -> bool:
        return all(max(abs(c) for c in v) == 1 for v in self.vectors)

    def check_zero_sum(self) -> bool:
        return all(sum(col) == 0 for col in zip(*self.vectors))

    def check_prefix_lower_bound(self, exhaustive_limit: int = 6) -> bool:
        """Exhaustively verify the >= k prefix bound over all (2k)! orders."""
        if 2 * self.k > exhaustive_limit:
            raise ValueError("family too large for exhaustive check")
        for sigma in permutations(range(2 * self.k)):
            prefix = [0] * self.dim
            for i in sigma[: self.k]:
                prefix = [p + c for p, c in zip(prefix, self.vectors[i])]
            if max(abs(p) for p in prefix) < self.k:
                return False
        return True

    def to_json(self) -> str:
        return json.dumps({"k": self.k, "dim": self.dim,
                           "vectors": [list(v) for v in self.vectors]})


def sign_patterns(k: int) -> list[tuple[int, ...]]:
    """All length-2k patterns with k entries +1 and k entries -1, in
    lexicographic order with +1 sorting before -1."""
    n = 2 * k
    out = []
    for plus_positions in combinations(range(n), k):
        pat = [-1] * n
        for i in plus_positions:
            pat[i] = 1
        out.append(tuple(pat))
    # +1 < -1 lexicographically: patterns with earlier +1s come first
    out.sort(key=lambda pat: tuple(0 if c == 1 else 1 for c in pat))
    return out


def _vector_family(k: int) -> VectorFamily:
    patterns = sign_patterns(k)
    dim = math.comb(2 * k, k)
    assert len(patterns) == dim
    vectors = [tuple(patterns[j][i] for j in range(dim)) for i in range(2 * k)]
    return VectorFamily(k=k, dim=dim, vectors=vectors)


def gen_vector_family(k: int) -> VectorFamily:
    """Family x_i(j) = t_j(i) over the sign patterns t_1..t_n, n = C(2k,k)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > 5:
        raise ValueError("dimension budget exceeded")
    return _vector_family(k)


def coordinate_offsets(kmax: int) -> list[int]:
    """Cumulative block offsets n_0=0, n_k = C(2^(k+1), 2^k) + n_(k-1)."""
    offsets = [0]
    for k in range(1, kmax + 1):
        offsets.append(math.comb(2 ** (k + 1), 2 ** k) + offsets[-1])
    return offsets


def block_vectors(k: int) -> list[SparseVec]:
    """The scaled, coordinate-shifted block-k vectors y_i^(k): 2^(k+1)
    vectors of sup norm 2^-k supported on coordinates n_(k-1)+1..n_k."""
    offsets = coordinate_offsets(k)
    family = _vector_family(2 ** k)
    scale = Fraction(1, 2 ** k)
    out = []
    for vec in family.vectors:
        out.append(SparseVec({offsets[k - 1] + j: scale * c
                              for j, c in enumerate(vec, start=1)}))
    return out


def gen_no_rp_series(kmax: int) -> tuple[SignedSeries, PartialPermutation]:
    """The alternating c0 series with singleton sum range but no
    rearrangement property, through block kmax.

    Returns the series z (z_{2n} = -z_{2n-1} exactly) and the witness
    rearrangement that fronts each block's positive copies before its
    negative copies -- the order on which prefix balancing provably fails
    at bound 1.
    """
    if kmax < 1:
        raise ValueError("kmax must be >= 1")
    if kmax > 3:
        raise ValueError("kmax must be <= 3")
    terms: list[SparseVec] = []
    images: list[int] = []
    for k in range(1, kmax + 1):
        ys = block_vectors(k)
        offset = len(terms)
        for y in ys:
            terms.append(y)
            terms.append(-y)
        n_pairs = len(ys)
        images.extend(offset + 2 * i + 1 for i in range(n_pairs))
        images.extend(offset + 2 * i + 2 for i in range(n_pairs))
    return SignedSeries(terms, alternating=True), PartialPermutation(images)


def per_coordinate_profile(series: SignedSeries) -> dict[int, tuple[int, Fraction]]:
    """Per coordinate: (number of nonzero terms, total sum).  A singleton
    sum range witness needs every total to be zero and every count finite."""
    profile: dict[int, list] = {}
    for t in series.terms:
        for i, v in t.entries.items():
            cnt, tot = profile.get(i, (0, Fraction(0)))
            profile[i] = (cnt + 1, tot + v)
    return profile
