"""
A flying-saucer family against the disc
=======================================

Pair a disc of radius w in R^2 with the interval [-a, a] of equal Gaussian mass. Once
the boundary mass of the interval beats that of the disc, saucers in R^n of the same
mass shrink more slowly than the disc, so no dilation bound that only sees the mass
can be sharp.
"""

# %%
from gaussdil.counterexample import (boundary_gap, chain_sweep, derivative_refutation,
                                     fit_sweep, gap_threshold, pair_w_for_a)

# %% sign of the boundary gap changes once, near a ~ 1.05
a_star = gap_threshold()
print(f"threshold a* = {a_star:.6f}")
for a in (1.0, 2.0, 3.0):
    g = boundary_gap(a)
    print(f"a={a}: w={g.w:.5f} hazard={g.hazard:.5f} gap={g.gap:+.3e}")

# %% saucers K_n(x) with gamma_n = disc mass, for a = 3
fits, infeasible = fit_sweep(3.0, [3, 5, 10, 50, 200])
print("infeasible:", infeasible, "  w =", round(pair_w_for_a(3.0), 6))
for f in fits:
    print(f"n={f.n:4d} x={f.x:.6f} y={f.geometry.y:.4f}")

# %% one-sided derivatives at t=1 disagree, and the gap shows up at t = 0.99
ref = derivative_refutation(3.0, [0.99])
print(f"D_L={ref.d_left:.6f} D_R={ref.d_right:.6f} lhs-rhs at 0.99: {ref.lhs[0] - ref.rhs[0]:.3e}")

# %% direct sweep: the first dimension with a violation
sw = chain_sweep(3.0, 0.99, (2, 3, 10))
print("first violation at n =", sw.first_violation)
