"""Acceptance gate: twelve end-to-end checks, one pass/fail line each.

Run with ``pytest -v tests/test_acceptance.py`` (add ``-s`` to see the
criterion lines inline).  Each test prints ``criterion NN: PASS`` or
``criterion NN: FAIL`` and the parameters are fixed — do not tune them to
make a failing check pass.
"""

import math
import random
from fractions import Fraction as F
from itertools import permutations

from serwalk.analysis import (ALL_COMPONENTS_ESCAPE, COMPACT_CONNECTED,
                              VIOLATION, cauchy_diagnostic, estimate_limit_set,
                              singleton_convergence_check, verify_dichotomy)
from serwalk.core import PointSample, distance, hausdorff_distance, norm
from serwalk.rearrange import (RPConstants, alternating_harmonic,
                               certify_rp_family, check_stage_invariants,
                               full_range_series, rearrange_to_limit_set)
from serwalk.seqspace import (THETA, block_vectors, e,
                              gen_c0_singleton_divergent, gen_c0_two_point,
                              gen_no_rp_series, gen_vector_family,
                              per_coordinate_profile)
from serwalk.walks import (build_chainable_walk,
                           build_unbounded_components_walk, build_xwalk,
                           gen_halflines, gen_two_lines, series_to_walk,
                           walk_to_series)


def _criterion(n, body):
    ok = False
    try:
        body()
        ok = True
    finally:
        print(f"criterion {n:02d}: {'PASS' if ok else 'FAIL'}")


def _circle(pitch, radius=1.0):
    n = math.ceil(2 * math.pi * radius / pitch)
    return tuple((radius * math.cos(2 * math.pi * i / n),
                  radius * math.sin(2 * math.pi * i / n)) for i in range(n))


def test_criterion_01_two_lines_first_sums_exact():
    def body():
        w = gen_two_lines(3)
        assert w.mode == "exact"
        assert w.sums[1:5] == [(F(1, 2), F(0)), (F(1), F(0)),
                               (F(1, 2), F(0)), (F(0), F(0))]
        lo, hi = w.phase_blocks()[2]
        assert max(p[1] for p in w.sums[lo:hi]) == 2
    _criterion(1, body)


def test_criterion_02_two_lines_shell_components():
    def body():
        est = estimate_limit_set(gen_two_lines(6), resolution=0.1)
        assert len(verify_dichotomy(est, 0.9, 4.0)["components"]) == 2
        assert len(verify_dichotomy(est, 1.1, 4.0)["components"]) == 1
    _criterion(2, body)


def test_criterion_03_c0_two_point_limit_estimate():
    def body():
        w = gen_c0_two_point(5)
        assert w.sums[1:7] == [e(2), e(2) + e(1), e(1), e(1) + e(2),
                               e(2), THETA]
        est = estimate_limit_set(w, resolution=0.2)
        assert set(est.points.points) == {THETA, e(1)}
    _criterion(3, body)


def test_criterion_04_c0_singleton_divergent():
    def body():
        w = gen_c0_singleton_divergent(6)
        for k in range(1, 7):
            assert w.sums[2 ** (k + 1) - 2] == THETA
            assert w.sums[2 ** k + 2 ** (k - 1) - 2] == e(k)
        est = estimate_limit_set(w, resolution=0.2)
        assert set(est.points.points) == {THETA}
        assert cauchy_diagnostic(w)["max_gap"] >= 1.0
    _criterion(4, body)


def test_criterion_05_vector_family_exhaustive():
    def body():
        for k in (1, 2, 3):
            fam = gen_vector_family(k)
            assert fam.check_unit_norms()
            assert fam.check_zero_sum()
            assert fam.check_prefix_lower_bound()  # all (2k)! orders
    _criterion(5, body)


def test_criterion_06_rp_failure_block():
    def body():
        ys = block_vectors(1)
        assert len(ys) == 4
        # every ordering puts two same-block vectors up front whose sum
        # already reaches sup norm 1
        for sigma in permutations(ys):
            second = sigma[0] + sigma[1]
            assert max(sigma[0].sup_norm(), second.sup_norm()) >= 1.0
        series, _ = gen_no_rp_series(1)
        profile = per_coordinate_profile(series)
        assert all(total == 0 for _, total in profile.values())
    _criterion(6, body)


def test_criterion_07_round_trip_500():
    def body():
        rng = random.Random(20240817)

        def rand_pt(dim):
            return tuple(F(rng.randint(-8, 8), 8) for _ in range(dim))

        for _ in range(500):
            dim = rng.randint(1, 3)
            anchor = rand_pt(dim)
            schedule = [[anchor] + [rand_pt(dim)
                                    for _ in range(rng.randint(1, 4))]
                        for _ in range(rng.randint(1, 3))]
            w = build_xwalk(schedule)
            series, sigma = walk_to_series(w)
            assert series.check_alternating()
            assert series_to_walk(series, sigma, w.anchor) == w.sums
    _criterion(7, body)


def test_criterion_08_chainable_circle():
    def body():
        pts = _circle(0.02)
        sample = PointSample(pts)
        w = build_chainable_walk(list(pts), 5)
        est = estimate_limit_set(w, resolution=0.05)
        assert hausdorff_distance(est.points, sample) <= 0.15
    _criterion(8, body)


def test_criterion_09_unbounded_components():
    def body():
        left = PointSample(tuple((-1.0, 0.1 * i) for i in range(42)), "left")
        right = PointSample(tuple((1.0, 0.1 * i) for i in range(42)), "right")
        w = build_unbounded_components_walk([left, right], [2.0, 3.0, 4.0], 3)
        est = estimate_limit_set(w, resolution=0.25)
        truncated = PointSample(tuple(
            p for p in left.points + right.points if norm(p) <= 3.0))
        assert hausdorff_distance(est.points, truncated) <= 0.2
        for p in est.points.points:
            assert min(abs(p[0] - 1.0), abs(p[0] + 1.0)) <= 0.15
    _criterion(9, body)


def test_criterion_10_rearrangement_desk_scale():
    def body():
        series = full_range_series(2, 80000)
        target = PointSample(_circle(0.05))
        tau, walk, reports = rearrange_to_limit_set(
            series, target, stages=5, rng=random.Random(0))
        assert check_stage_invariants(reports, tau, RPConstants(series))
        est = estimate_limit_set(walk, resolution=0.1)
        assert hausdorff_distance(est.points, target) <= 0.15

        point = (0.25, -0.5)
        _, w2, reps2 = rearrange_to_limit_set(
            series, PointSample((point,)), stages=5, rng=random.Random(0))
        quarter = w2.sums[len(w2.sums) - (len(w2.sums) - 1) // 4:]
        assert max(distance(s, point) for s in quarter) <= 2.0 ** -5
        assert singleton_convergence_check(
            w2, 2.0 ** -5)["verdict"] == "converges-to"
    _criterion(10, body)


def test_criterion_11_dichotomy_suite():
    def body():
        est = estimate_limit_set(gen_two_lines(6), resolution=0.1)
        assert verify_dichotomy(est, 0.9, 4.0)["verdict"] == ALL_COMPONENTS_ESCAPE

        est = estimate_limit_set(gen_halflines([0, 1, 2, 3], 3),
                                 resolution=0.1)
        out = verify_dichotomy(est, 1.1, max(norm(p) for p in est.points))
        assert out["verdict"] != VIOLATION

        circle = _circle(0.05)
        w = build_chainable_walk(list(circle), 4)
        est = estimate_limit_set(w, resolution=0.1)
        assert verify_dichotomy(est, 0.3, 10.0)["verdict"] == COMPACT_CONNECTED

        left = PointSample(tuple((-1.0, 0.1 * i) for i in range(42)), "left")
        right = PointSample(tuple((1.0, 0.1 * i) for i in range(42)), "right")
        w = build_unbounded_components_walk([left, right], [2.0, 3.0], 2)
        est = estimate_limit_set(w, resolution=0.25)
        # recurrent cells stop at the first shell radius; escape is judged
        # against that bound
        assert verify_dichotomy(est, 0.9, 2.0)["verdict"] == ALL_COMPONENTS_ESCAPE

        est = estimate_limit_set(gen_c0_two_point(5), resolution=0.2)
        assert verify_dichotomy(est, 0.9, 3.0)["verdict"] == VIOLATION
    _criterion(11, body)


def test_criterion_12_rp_certification():
    def body():
        epsilons = [1.0, 0.5, 0.25]
        for series in (alternating_harmonic(2000),
                       full_range_series(2, 5000)):
            fam = certify_rp_family(series, epsilons, instance_budget=500,
                                    rng=random.Random(20240817))
            deltas = [w.delta for w in fam]
            thresholds = [w.n_threshold for w in fam]
            assert deltas == sorted(deltas, reverse=True)
            assert thresholds == sorted(thresholds)
            for w, eps in zip(fam, epsilons):
                assert w.evidence["instances"] == 500
                assert w.evidence["max_prefix_norm"] < eps
    _criterion(12, body)
