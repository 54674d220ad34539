"""Stress laws: admissibility report and characteristic variables.

The long-wave subsystem is hyperbolic when sigma' >= sigma0 > 0.  The
compactness theory behind global weak solutions additionally needs a
single isolated inflection, integrable curvature ratios, and stored
energy dominating the stress growth; ``check_hypotheses`` samples all four
on a working range.  The characteristic variables l = w + P(v),
r = w - P(v), with P the primitive of sqrt(sigma'), diagonalize the
first-order part and are available as analysis utilities.
"""

import numpy as np

from viscowave import (
    check_hypotheses,
    cubic_law,
    linear_law,
    riemann_forward,
    riemann_inverse,
    sigma_eval,
)

# --- point evaluation of the default cubic law ----------------------------

model = cubic_law()
for v in (0.0, 1.0, -1.0):
    s, ds, d2s, stored = sigma_eval(model, v)
    print(f"v = {v:+.1f}: sigma = {s:+.3f}, sigma' = {ds:.3f}, "
          f"sigma'' = {d2s:+.3f}, Sigma = {stored:.3f}")

# --- admissibility of the cubic law vs a linear one -----------------------

print()
print(check_hypotheses(model, -10.0, 10.0).to_text())
print()
print(check_hypotheses(linear_law(), -10.0, 10.0).to_text())

# --- characteristic transform round trip ----------------------------------

print()
l, r = riemann_forward(model, 1.0, 0.0)
print(f"(v, w) = (1, 0)  ->  (l, r) = ({l:.6f}, {r:.6f})")
v, w = riemann_inverse(model, l, r)
print(f"back:                (v, w) = ({v:.12f}, {w:.1f})")

rng = np.random.default_rng(0)
worst = 0.0
for vv, ww in rng.uniform(-5.0, 5.0, size=(500, 2)):
    v2, w2 = riemann_inverse(model, *riemann_forward(model, vv, ww))
    worst = max(worst, abs(v2 - vv), abs(w2 - ww))
print(f"worst round-trip error over 500 random states: {worst:.2e}")
