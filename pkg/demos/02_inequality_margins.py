"""
Margins of the dilation bounds
==============================

Lower bounds of the form gamma(tK) >= t^{kappa w^2} gamma(K) for bodies of measure
at most 1/2 with inradius w. The S-inequality compares against the slab of equal mass.
"""

# %%
import numpy as np

from gaussdil import Ball, Cylinder, Slab, check_s_inequality, check_theorem1, check_theorem2
from gaussdil.bounds import check_b_inequality

K = Cylinder(3, 7, 1.2)
t = [0.05, 0.1, 0.25, 0.5]

# %% margin = lhs - rhs; all should be non-negative
for name, fn in (("S", check_s_inequality), ("t^{ln2 w^2 / 8}", check_theorem1),
                 ("(2s)^{w^2/4}", check_theorem2)):
    print(f"{name:16s}", [f"{r.margin:.3e}" for r in fn(K, t)])

# %% the slab is the equality case of the S-inequality
print(max(abs(r.margin) for r in check_s_inequality(Slab(5, 0.8), t)))

# %% log-concavity in log t: second differences of log gamma(e^u K) stay <= 0
res = check_b_inequality(Ball(6, 2.0), list(np.linspace(-3, 1, 41)))
print("largest second difference:", max(r.lhs for r in res))
