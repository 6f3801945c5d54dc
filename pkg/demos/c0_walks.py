"""Sequence-space walks: a two-point limit set, a divergent walk whose
limit set is a single point, and the alternating series with no
rearrangement property.

Everything here is exact dyadic arithmetic; the printed sums are
bit-for-bit the stored values.

Run:  python demos/c0_walks.py
"""

from itertools import permutations

from serwalk import (block_vectors, cauchy_diagnostic, estimate_limit_set,
                     gen_c0_singleton_divergent, gen_c0_two_point,
                     gen_no_rp_series, per_coordinate_profile)

# --- two-point limit set -------------------------------------------------
w = gen_c0_two_point(5)
print("two-point walk, first six sums:")
for n, s in enumerate(w.sums[1:7], start=1):
    print(f"  s_{n} = {s}")
est = estimate_limit_set(w, resolution=0.2)
print("limit estimate:", sorted(map(str, est.points.points)), "\n")

# --- divergent walk with singleton limit set -----------------------------
w = gen_c0_singleton_divergent(6)
est = estimate_limit_set(w, resolution=0.2)
diag = cauchy_diagnostic(w)
print(f"singleton-divergent walk: estimate {list(map(str, est.points.points))}, "
      f"late max gap {diag['max_gap']} (never Cauchy)\n")

# --- no rearrangement property -------------------------------------------
series, witness = gen_no_rp_series(2)
profile = per_coordinate_profile(series)
print(f"no-RP series: {len(series.terms)} terms, per-coordinate totals all "
      f"{set(t for _, t in profile.values())}")

# The k=1 block alone defeats prefix balancing at sup norm 1: whichever
# two of its four vectors go first, their sum already has sup norm 1.
ys = block_vectors(1)
worst = min(max(sigma[0].sup_norm(), (sigma[0] + sigma[1]).sup_norm())
            for sigma in permutations(ys))
print(f"k=1 block: best achievable two-prefix sup norm over all 24 orders "
      f"= {worst}")
print("fronting witness covers terms:", witness.images[:8], "...")
