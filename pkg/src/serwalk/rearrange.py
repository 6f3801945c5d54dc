"""Prefix balancing and limit-set-targeting rearrangement.

The central loop mirrors the inductive construction behind rearranging a
series so its partial sums cluster exactly on a prescribed chainable set:
repeatedly (1) gather every series index skipped so far, (2) pick tail
indices whose sum moves the running total next to the next chain anchor,
and (3) order the combined batch so that no intermediate prefix strays.

Balancing constants are certified empirically, not proven: for a series
with nonincreasing term norms we take N(eps) = first index whose term norm
is <= eps/4 and delta(eps) = eps/2, and stress-test the pair with random
small-sum batches.
"""

from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .core import EUCLIDEAN, PointSample, add, distance, norm, sub
from .walks import PartialPermutation, Walk

ZERO_TOL = 1e-12

# ---------------------------------------------------------------------------
# test series with full sum range

def full_range_series(dim: int, count: int, scale: float = 8.0) -> list[tuple]:
    """Round-robin signed harmonic-type terms: for t = 1, 2, ... emit
    +scale/t and -scale/t along each axis in turn.

    Every coordinate has divergent positive and negative parts with terms
    tending to zero, so the sum range is all of R^dim.  The scale leaves a
    desk-scale prefix with enough mass for multi-stage rearrangements.
    """
    out = []
    t = 1
    while len(out) < count:
        for axis in range(dim):
            for sign in (1.0, -1.0):
                coords = [0.0] * dim
                coords[axis] = sign * scale / t
                out.append(tuple(coords))
        t += 1
    return out[:count]

def alternating_harmonic(count: int) -> list[tuple]:
    """(-1)^(n+1)/n as 1-D points; partial sums converge to ln 2."""
    return [((1.0 if n % 2 else -1.0) / n,) for n in range(1, count + 1)]

# ---------------------------------------------------------------------------
# prefix balancing

def _max_prefix_norm(terms: Sequence, order: Sequence[int], kind: str) -> float:
    cur = None
    worst = 0.0
    for idx in order:
        cur = terms[idx - 1] if cur is None else add(cur, terms[idx - 1])
        worst = max(worst, norm(cur, kind))
    return worst

def _greedy_balance_dense(terms: Sequence, bound: float, kind: str,
                          rng: Optional[random.Random]) -> Optional[list[int]]:
    from .core import SUP
    n = len(terms)
    dim = len(terms[0])
    ft = [[float(c) for c in t] for t in terms]
    cur = [0.0] * dim
    remaining = list(range(n))
    order = []
    for _ in range(n):
        scored = []
        for i in remaining:
            t = ft[i]
            if kind == SUP:
                s = max(abs(cur[a] + t[a]) for a in range(dim))
            else:
                s = 0.0
                for a in range(dim):
                    d = cur[a] + t[a]
                    s += d * d
            scored.append((s, i))
        best = min(s[0] for s in scored)
        if rng is None:
            s, i = min(scored)
        else:
            near = [c for c in scored if c[0] <= best + 1e-12]
            s, i = near[rng.randrange(len(near))]
        value = s if kind == SUP else math.sqrt(s)
        if value >= bound:
            return None
        order.append(i + 1)
        remaining.remove(i)
        for a in range(dim):
            cur[a] += ft[i][a]
    return order

def _greedy_balance(terms: Sequence, bound: float, kind: str,
                    rng: Optional[random.Random]) -> Optional[list[int]]:
    if terms and not hasattr(terms[0], "entries"):
        return _greedy_balance_dense(terms, bound, kind, rng)
    from .seqspace import SparseVec
    n = len(terms)
    remaining = list(range(1, n + 1))
    cur = SparseVec()
    order = []
    for _ in range(n):
        scored = []
        for idx in remaining:
            cand = add(cur, terms[idx - 1])
            scored.append((norm(cand, kind), idx, cand))
        best = min(s[0] for s in scored)
        if rng is None:
            score, idx, cand = min(scored, key=lambda s: (s[0], s[1]))
        else:
            near = [s for s in scored if s[0] <= best + 1e-12]
            score, idx, cand = near[rng.randrange(len(near))]
        if score >= bound:
            return None
        order.append(idx)
        remaining.remove(idx)
        cur = cand
    return order

def _dfs_balance(terms: Sequence, bound: float, kind: str) -> Optional[list[int]]:
    """Complete search with prefix pruning; equivalent to trying all n!
    orders but abandons a branch as soon as a prefix reaches the bound."""
    n = len(terms)
    order: list[int] = []
    used = [False] * n

    def rec(cur) -> bool:
        if len(order) == n:
            return True
        for idx in range(1, n + 1):
            if used[idx - 1]:
                continue
            cand = add(cur, terms[idx - 1]) if cur is not None else terms[idx - 1]
            if norm(cand, kind) < bound:
                used[idx - 1] = True
                order.append(idx)
                if rec(cand):
                    return True
                order.pop()
                used[idx - 1] = False
        return False

    return order if rec(None) else None

def find_balanced_permutation(terms: Sequence, bound: float,
                              strategy: str = "exhaustive",
                              kind: str = EUCLIDEAN,
                              rng: Optional[random.Random] = None,
                              restarts: int = 64) -> Optional[list[int]]:
    """Permutation of [1, n] keeping every prefix-sum norm strictly below
    ``bound``, or None.

    ``exhaustive`` (n <= 10) is a complete decision procedure; ``greedy``
    picks at each step the unused term minimizing the resulting prefix norm
    (ties by lowest index), retrying with randomized tie-breaks.
    """
    if not terms:
        return []
    if strategy == "exhaustive":
        if len(terms) > 10:
            raise ValueError("exhaustive strategy limited to n <= 10")
        return _dfs_balance(terms, bound, kind)
    if strategy != "greedy":
        raise ValueError(f"unknown strategy {strategy!r}")
    order = _greedy_balance(terms, bound, kind, None)
    if order is not None:
        return order
    rng = rng or random.Random(0)
    for _ in range(restarts - 1):
        order = _greedy_balance(terms, bound, kind, rng)
        if order is not None:
            return order
    return None

def _balance_ladder(terms: Sequence, bound: float, kind: str,
                    rng: Optional[random.Random]) -> Optional[list[int]]:
    """Greedy first; complete search as fallback for small batches."""
    if not terms:
        return []
    order = find_balanced_permutation(terms, bound, "greedy", kind, rng)
    if order is None and len(terms) <= 10:
        order = _dfs_balance(terms, bound, kind)
    return order

# ---------------------------------------------------------------------------
# RP certification

@dataclass
class RPWitness:
    """Empirically certified balancing constants for one epsilon."""

    epsilon: float
    n_threshold: int
    delta: float
    evidence: dict = field(default_factory=dict)

class RPCertificationError(ValueError):
    def __init__(self, message: str, instance=None):
        super().__init__(message)
        self.instance = instance

class RPConstants:
    """The balancing-constant family used by the rearranger:
    N(eps) = first index with term norm <= eps/4, delta(eps) = eps/2.

    Requires nonincreasing term norms so that the family is monotone
    (delta nonincreasing and N nondecreasing as eps decreases).
    """

    def __init__(self, series: Sequence, kind: str = EUCLIDEAN):
        self.series = series
        self.kind = kind
        self._norms = [norm(t, kind) for t in series]

    def delta(self, eps: float) -> float:
        return eps / 2

    def n_threshold(self, eps: float) -> int:
        target = eps / 4
        for i, v in enumerate(self._norms, start=1):
            if v <= target:
                return i
        raise ValueError("series prefix too short: no term below eps/4")

def certify_rp(series_prefix: Sequence, epsilon: float,
               instance_budget: int = 500, kind: str = EUCLIDEAN,
               rng: Optional[random.Random] = None) -> RPWitness:
    """Stress-test the empirical constants N(eps), delta(eps).

    Samples random small-sum batches of terms past N(eps) and demands a
    balanced permutation below eps for each; raises RPCertificationError
    with the counterexample batch otherwise.
    """
    rng = rng or random.Random(20240817)
    constants = RPConstants(series_prefix, kind)
    n_thr = constants.n_threshold(epsilon)
    delta = constants.delta(epsilon)
    pool = list(range(n_thr, len(series_prefix)))
    if len(pool) < 12:
        raise ValueError("series prefix too short beyond N(eps)")
    worst = 0.0
    checked = 0
    for _ in range(instance_budget):
        instance = None
        for _ in range(500):
            size = rng.randint(2, 12)
            idxs = rng.sample(pool, min(size, len(pool)))
            terms = [series_prefix[i] for i in idxs]
            total = terms[0]
            for t in terms[1:]:
                total = add(total, t)
            if norm(total, kind) < delta:
                instance = terms
                break
        if instance is None:
            continue
        order = _balance_ladder(instance, epsilon, kind, rng)
        if order is None:
            raise RPCertificationError(
                f"RP certification failed at eps={epsilon}", instance)
        worst = max(worst, _max_prefix_norm(instance, order, kind))
        checked += 1
    return RPWitness(epsilon, n_thr, delta,
                     {"instances": checked, "max_prefix_norm": worst})

def certify_rp_family(series_prefix: Sequence, epsilons: Sequence[float],
                      instance_budget: int = 200, kind: str = EUCLIDEAN,
                      rng: Optional[random.Random] = None) -> list[RPWitness]:
    """Witnesses for a decreasing epsilon family; monotone by construction."""
    out = [certify_rp(series_prefix, eps, instance_budget, kind, rng)
           for eps in sorted(epsilons, reverse=True)]
    for w1, w2 in zip(out, out[1:]):
        assert w1.delta >= w2.delta and w1.n_threshold <= w2.n_threshold
    return out

# ---------------------------------------------------------------------------
# tail selection (constructive sum-range membership for the test family)

def _axis_of(term) -> tuple[int, float]:
    nz = [(a, float(v)) for a, v in enumerate(term) if float(v) != 0.0]
    if len(nz) > 1:
        raise ValueError("tail selection needs axis-aligned terms")
    return nz[0] if nz else (-1, 0.0)

def tail_sum_select(series_prefix: Sequence, start: int, target,
                    tol: float) -> list[int]:
    """Finite index set past ``start`` whose term sum lands within ``tol``
    of ``target`` per coordinate, by greedy Riemann selection.

    Works on series whose terms are axis-aligned with divergent signed
    parts per coordinate (the designated full-sum-range family).
    """
    err = [float(c) for c in target]
    chosen = []
    if all(abs(e) <= tol for e in err):
        return chosen
    for idx in range(start + 1, len(series_prefix) + 1):
        axis, value = _axis_of(series_prefix[idx - 1])
        if axis < 0:
            continue
        if abs(err[axis]) > tol and (value > 0) == (err[axis] > 0):
            chosen.append(idx)
            err[axis] -= value
            if all(abs(e) <= tol for e in err):
                return chosen
    raise ValueError("prefix too short")

# ---------------------------------------------------------------------------
# the inductive extension

@dataclass
class ChainSchedule:
    """Dense point sequence cut into eta_i-chain segments."""

    dense: list
    boundaries: list[int]  # 1-based l_1 = 1 < l_2 < ...
    etas: list[float]

    def segment(self, i: int) -> list:
        return self.dense[self.boundaries[i - 1] - 1:self.boundaries[i]]

def build_chain_schedule(sample: PointSample, etas: Sequence[float],
                         kind: str = EUCLIDEAN) -> ChainSchedule:
    """Schedule whose segment i is an eta_i-chain between consecutive
    sample points (recycled cyclically), found by BFS on the gap graph."""
    from .core import gap_chainable
    sample = sample if isinstance(sample, PointSample) else PointSample(tuple(sample))
    if not sample.points:
        raise ValueError("empty sample")
    pts = sample.points
    dense: list = [pts[0]]
    boundaries = [1]
    for i, eta in enumerate(etas, start=1):
        a = pts[(i - 1) % len(pts)]
        b = pts[i % len(pts)]
        chain = gap_chainable(sample, eta, a, b, kind=kind)
        if chain is None:
            raise ValueError(f"sample not chainable at eta_{i}={eta}")
        if len(chain) == 1:
            chain = chain * 2
        dense.extend(chain[1:])
        boundaries.append(len(dense))
    return ChainSchedule(dense, boundaries, list(etas))

def _refined_loop(points: Sequence, hop: float) -> list:
    """Cyclic tour of the points with linear refinement to steps <= hop."""
    pts = list(points)
    if len(pts) == 1:
        return [pts[0], pts[0]]
    loop = pts + [pts[0]]
    out = [loop[0]]
    for a, b in zip(loop, loop[1:]):
        d = distance(a, b)
        n = max(1, math.ceil(d / hop))
        for i in range(1, n + 1):
            out.append(tuple(ca + (cb - ca) * i / n for ca, cb in zip(a, b)))
    return out

@dataclass
class RearrangerState:
    """Snapshot of the induction: partial permutation, stage marks, anchors
    and the walk-so-far (a shared buffer; ``n_sums`` is this state's view)."""

    tau: PartialPermutation
    k_marks: list[int]
    anchors: list
    phase_index: int
    _sum_buffer: list = field(default_factory=list, repr=False)
    n_sums: int = 0
    skipped: frozenset = frozenset()

    @property
    def sums(self) -> list:
        return self._sum_buffer[:self.n_sums]

    @property
    def current_sum(self):
        return self._sum_buffer[self.n_sums - 1]

def _initial_state(series: Sequence, constants: RPConstants, eps1: float) -> RearrangerState:
    n1 = constants.n_threshold(eps1 / 2)
    sums = []
    cur = None
    for i in range(1, n1 + 1):
        cur = series[i - 1] if cur is None else add(cur, series[i - 1])
        sums.append(cur)
    return RearrangerState(PartialPermutation(list(range(1, n1 + 1))),
                           [n1], [], 0, sums, len(sums), frozenset())

def extension_step(state: RearrangerState, a, b, eps: float, eps_next: float,
                   constants: RPConstants, series: Sequence,
                   kind: str = EUCLIDEAN,
                   rng: Optional[random.Random] = None,
                   enforce_preconditions: bool = True) -> RearrangerState:
    """One inductive extension: sweep skipped indices, steer to b, balance.

    Postconditions (asserted): the old permutation is preserved and every
    index up to its old maximum is covered after the *next* sweep; every
    new prefix sum stays within eps of a; the final sum lands within
    min(eps_next/12, delta(eps_next/2)/3) of b; the range covers
    [1, N(eps_next/2)].
    """
    delta = constants.delta
    slack = min(eps / 12, delta(eps / 2) / 3)
    if enforce_preconditions:
        if distance(a, b, kind) >= slack:
            raise ValueError("anchors too far apart for this eps")
        if distance(state.current_sum, a, kind) > slack + ZERO_TOL:
            raise ValueError("current sum too far from a")
        if not state.tau.covers_initial_segment(constants.n_threshold(eps / 2)):
            raise ValueError("range does not cover N(eps/2)")

    rng_set = state.tau.range_set
    k0 = max(constants.n_threshold(eps / 2), constants.n_threshold(eps_next / 2),
             max(rng_set, default=0))
    skipped = sorted(set(range(1, k0 + 1)) - rng_set)
    y = state.current_sum
    z = None
    for i in skipped:
        z = series[i - 1] if z is None else add(z, series[i - 1])
    yz = y if z is None else add(y, z)
    tol = min(eps_next / 12, delta(eps_next / 2) / 3, delta(eps / 2) / 3) / 3
    selected = tail_sum_select(series, k0, sub(b, yz), tol)
    batch_idx = sorted(skipped + selected)
    terms = [series[i - 1] for i in batch_idx]
    order = _balance_ladder(terms, eps / 2, kind, rng)
    if order is None:
        raise ValueError("RP bound violated at stage: balancing failed")
    new_images = [batch_idx[p - 1] for p in order]

    buf = state._sum_buffer
    del buf[state.n_sums:]  # drop any sums written by abandoned branches
    cur = y
    for img in new_images:
        cur = add(cur, series[img - 1])
        buf.append(cur)
        assert distance(cur, a, kind) <= eps + ZERO_TOL, "prefix escaped eps-ball"
    end_slack = min(eps_next / 12, delta(eps_next / 2) / 3)
    assert distance(cur, b, kind) <= end_slack + ZERO_TOL, "terminal sum off target"
    tau = state.tau.extend(new_images)
    assert tau.covers_initial_segment(constants.n_threshold(eps_next / 2))
    left = frozenset(i for i in range(1, max(tau.range_set) + 1)
                     if i not in tau.range_set)
    return RearrangerState(tau, state.k_marks + [len(tau)],
                           state.anchors + [b], state.phase_index,
                           buf, len(buf), left)

def rearrange_to_limit_set(series_prefix: Sequence, target: PointSample,
                           stages: int, kind: str = EUCLIDEAN,
                           constants: Optional[RPConstants] = None,
                           rng: Optional[random.Random] = None,
                           hop_factor: float = 3.0):
    """Run the staged induction so the partial sums cluster on the target.

    Stage j uses eps_j = 2^-j and eta_j = min(eps_j/48, delta(eps_j/2)/12),
    sweeping a refined cyclic tour of the target sample with anchor hops of
    at most hop_factor * eta_j (hop_factor < 4 keeps the extension
    preconditions intact).  Chain refinement interpolates linearly between
    consecutive sample points, so targets should be samples of sets that
    are near-convex between neighbours (pitch^2-scale refinement error).

    Returns (tau, walk, stage_reports).
    """
    if stages < 1:
        raise ValueError("stages must be >= 1")
    target = target if isinstance(target, PointSample) else PointSample(tuple(target))
    if not target.points:
        raise ValueError("empty target")
    terms = series_prefix
    constants = constants or RPConstants(terms, kind)
    rng = rng or random.Random(20240817)
    delta = constants.delta
    dim = len(terms[0])

    images: list[int] = []
    buf: list = []
    frontier = 0
    cur = tuple([0.0] * dim)
    # scanned-but-unused indices wait here until the walk swings back their
    # way; sweeping them at every extension instead would feed each move's
    # displacement back into the next one and exhaust the prefix
    reservoir: dict[tuple[int, bool], deque] = {}

    def push(order):
        nonlocal cur
        for i in order:
            cur = add(cur, terms[i - 1])
            images.append(i)
            buf.append(cur)

    def take(axis, positive, err_abs):
        q = reservoir.get((axis, positive))
        if not q:
            return None
        for _ in range(len(q)):
            mag, idx = q.popleft()
            if mag < 2 * err_abs:
                return mag, idx
            q.append((mag, idx))
        return None

    def select(err, tol):
        # greedy Riemann selection: drain the reservoir first, scan past
        # the frontier when it runs dry; mutates err in place
        nonlocal frontier
        selected: list[int] = []
        while True:
            axis = next((a for a in range(dim) if abs(err[a]) > tol), None)
            if axis is None:
                return selected
            positive = err[axis] > 0
            got = take(axis, positive, abs(err[axis]))
            if got is not None:
                mag, idx = got
                selected.append(idx)
                err[axis] -= mag if positive else -mag
                continue
            frontier += 1
            if frontier > len(terms):
                raise ValueError("series prefix exhausted before target reached")
            ax, value = _axis_of(terms[frontier - 1])
            if ax >= 0 and abs(err[ax]) > tol and (value > 0) == (err[ax] > 0):
                selected.append(frontier)
                err[ax] -= value
            elif ax >= 0:
                reservoir.setdefault((ax, value > 0), deque()).append(
                    (abs(value), frontier))

    # straight prefix through N(eps_1 / 2), then steer onto the first anchor
    n1 = constants.n_threshold(0.25)
    push(range(1, n1 + 1))
    frontier = n1
    d1 = tuple(float(c) for c in target.points[0])
    base_err = [float(a) - float(b) for a, b in zip(d1, cur)]
    push(select(base_err, min(0.5 / 12, delta(0.25) / 3) / 2))

    def move(a, b, eps, eps_next, sweep=False):
        nonlocal frontier
        start = len(buf)
        k0 = max(constants.n_threshold(eps / 2), constants.n_threshold(eps_next / 2))
        if k0 > frontier:
            # untouched indices up to k0 are consecutive signed pairs; in
            # ascending order their prefixes cancel pairwise, so they need
            # no balancing pass
            push(range(frontier + 1, k0 + 1))
            frontier = k0
        batch: list[int] = []
        z = [0.0] * dim
        if sweep:
            for q in reservoir.values():
                for _, idx in q:
                    batch.append(idx)
                    t = terms[idx - 1]
                    for ax in range(dim):
                        z[ax] += float(t[ax])
                q.clear()
        err = [float(bc) - float(cc) - zc for bc, cc, zc in zip(b, cur, z)]
        tol = min(eps_next / 12, delta(eps_next / 2) / 3) / 2
        batch.extend(select(err, tol))
        if batch:
            bterms = [terms[i - 1] for i in batch]
            order = _balance_ladder(bterms, eps / 2, kind, rng)
            if order is None:
                raise ValueError("RP bound violated at stage: balancing failed")
            push(batch[p - 1] for p in order)
        excursion = 0.0
        for s in buf[start:]:
            d = distance(s, a, kind)
            excursion = max(excursion, d)
        if excursion > eps + 1e-9:
            raise AssertionError("prefix escaped its eps-ball")
        if distance(cur, b, kind) > min(eps_next / 12, delta(eps_next / 2) / 3) + 1e-9:
            raise AssertionError("terminal sum off target")
        return excursion

    phase_lengths = [len(buf)]
    reports = []
    prev_anchor = d1
    for j in range(1, stages + 1):
        eps = 2.0 ** -j
        eta = min(eps / 48, delta(eps / 2) / 12)
        loop = _refined_loop(target.points, hop_factor * eta)
        start_len = len(buf)
        excursion = 0.0
        for d in loop[1:]:
            excursion = max(excursion, move(prev_anchor, d, eps, eps))
            prev_anchor = d
        # stage handoff: sweep the reservoir so the permutation covers an
        # initial segment, landing within the next stage's tolerance
        excursion = max(excursion, move(prev_anchor, prev_anchor, eps,
                                        2.0 ** -(j + 1), sweep=True))
        pending = [idx for q in reservoir.values() for _, idx in q]
        covered_through = min(pending) - 1 if pending else frontier
        if covered_through < constants.n_threshold(2.0 ** -(j + 1) / 2):
            raise AssertionError("stage handoff left an early index uncovered")
        phase_lengths.append(len(buf) - start_len)
        reports.append({
            "stage": j,
            "k_i": len(images),
            "eps": eps,
            "eta": eta,
            "anchor": prev_anchor,
            "stage_end_error": distance(cur, prev_anchor, kind),
            "prefix_max_excursion": excursion,
            "moves": len(loop),
            "uncovered": sum(len(q) for q in reservoir.values()),
            "covered_through": covered_through,
        })

    tau = PartialPermutation(images)
    start_pt = tuple([0.0] * dim)
    walk = Walk([start_pt] + buf, phase_lengths, mode="float", kind=kind)
    return tau, walk, reports

def check_stage_invariants(reports: Sequence[dict], tau: PartialPermutation,
                           constants: RPConstants) -> bool:
    """Re-verify the staged induction's invariants from its artifacts:

    (i) the permutation only ever grew; (ii)+(iii) each stage handoff left
    an initial segment through N(eps_{j+1}/2) covered; (iv) anchors were
    hit exactly (sum range is all of R^m, so no anchor adjustment occurs);
    (v) every stage parked within 4 eta of its final anchor with prefix
    excursions inside the eps_j ball; (vi) the tolerances halve.
    """
    prev_k = 0
    for rep in reports:
        j, eps, eta = rep["stage"], rep["eps"], rep["eta"]
        if eps != 2.0 ** -j or eta != min(eps / 48, constants.delta(eps / 2) / 12):
            return False
        if rep["k_i"] <= prev_k:
            return False
        prev_k = rep["k_i"]
        if rep["covered_through"] < constants.n_threshold(2.0 ** -(j + 1) / 2):
            return False
        eta_next = min(2.0 ** -(j + 1) / 48, constants.delta(2.0 ** -(j + 2)) / 12)
        if rep["stage_end_error"] >= 4 * eta_next:
            return False
        if rep["prefix_max_excursion"] > eps:
            return False
    if len(tau) != prev_k:
        return False
    return tau.covers_initial_segment(
        constants.n_threshold(2.0 ** -(len(reports) + 1) / 2))
