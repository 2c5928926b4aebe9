"""
Dilation profiles of a few symmetric convex bodies
==================================================

How fast does gamma_n(tK) fall as a body is shrunk toward the origin?
"""

# %%
import numpy as np

from gaussdil import Ball, Cylinder, FlyingSaucer, Slab, dilation_profile, gaussian_measure

t = np.linspace(0.05, 1.0, 20)

# %% four bodies in R^10, all with measure close to 1/2
bodies = [Ball(10, 3.0564), Slab(10, 0.6745), Cylinder(2, 8, 1.1774), FlyingSaucer(10, 2.0, 0.5)]
for K in bodies:
    print(f"{K.label:32s} gamma = {gaussian_measure(K).value:.6f}")

# %% log gamma(tK) against log t; the slope near t=0 is the "small-ball exponent" of K
for K in bodies:
    prof = dilation_profile(K, t)
    vals = np.asarray(prof.values)
    slope = np.diff(np.log(vals[:2])) / np.diff(np.log(t[:2]))
    print(f"{K.label:32s} slope near 0 ~ {slope[0]:5.2f}   gamma(K/2) = {vals[9]:.4g}")

# %% bounded bodies go like t^n near 0, the cylinder like t^k, the slab like t
