"""
Small-ball probabilities of Gaussian vectors
============================================

X = sum_i g_i x_i in a normed space; with M the median of ||X|| and sigma the weak
variance, P(||X|| <= tM) <= (1/2)(2t)^{M^2 / 4 sigma^2}.
"""

# %%
import numpy as np

from gaussdil import GaussianVectorModel, check_theorem4, median_norm, weak_variance

model = GaussianVectorModel.iid(20, "linf")
M = median_norm(model, 10**5, seed=1)
s = weak_variance(model)
print(f"median {M:.4f}  weak variance {s:.4f}  exponent {M * M / (4 * s * s):.4f}")

# %% Monte Carlo versus the bound
rep = check_theorem4(model, [0.1, 0.2, 0.4, 0.6, 0.8, 1.0], samples=2 * 10**5, seed=2)
for row in rep.rows():
    print(f"t={row['t']:.1f}  P~{row['mc_prob']:.5f}  bound {row['bound']:.5f}  {row['pass']}")

# %% a random l2 model: the bound is loose but never violated
rand = GaussianVectorModel(np.random.default_rng(0).standard_normal((30, 10)), "l2")
print(check_theorem4(rand, [0.25, 0.5], samples=10**5, seed=3).passed)
