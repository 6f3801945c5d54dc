"""Tour of the two-lines walk: build it, estimate its limit set, and check
the dichotomy verdicts at two chain gaps.

Writes ``two_lines.svg`` next to this script.

Run:  python demos/two_lines_tour.py
"""

import os

from serwalk import (estimate_limit_set, gen_two_lines, verify_dichotomy,
                     write_walk_svg)

here = os.path.dirname(os.path.abspath(__file__))

w = gen_two_lines(6)
print(f"two-lines walk: {len(w.sums) - 1} partial sums over "
      f"{len(w.phase_lengths)} phases, all dyadic ({w.mode} mode)")
print("first four sums:", w.sums[1:5])

est = estimate_limit_set(w, resolution=0.1)
print(f"limit estimate: {len(est)} recurrent grid points "
      f"(window starts at index {est.window_start})")

# The limit set is two vertical lines one unit apart.  At chain gap 0.9
# they fall into separate components; widening the gap past 1 fuses them.
for gap in (0.9, 1.1):
    out = verify_dichotomy(est, gap=gap, bound=4.0)
    print(f"gap {gap}: {len(out['components'])} component(s), "
          f"verdict {out['verdict']}")

path = os.path.join(here, "two_lines.svg")
with open(path, "w") as fp:
    write_walk_svg(w, fp, marks=est.points.points)
print("wrote", path)
