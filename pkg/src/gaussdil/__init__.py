"""Numerical laboratory for dilation inequalities of Gaussian measures of symmetric convex bodies."""

from .bodies import (Ball, Body, Cylinder, FlyingSaucer, NormBall, SaucerGeometry, Slab,
                     SlabPolytope, body_from_config, contains, dilate, inradius,
                     saucer_geometry, saucer_level_radius, saucer_profile)
from .bounds import (BoundCheckResult, ExponentProbe, check_b_inequality, check_lemma2,
                     check_s_inequality, check_theorem1, check_theorem2, check_theorem3,
                     probe_conjecture1)
from .counterexample import (boundary_gap, chain_sweep, conjecture_chain_check,
                             derivative_refutation, fit_saucer, level_radii, pair_w_for_a)
from .gauss1d import (chi_density, chi_square_cdf, find_root, gaussian_interval, gaussian_tail,
                      std_normal_cdf, std_normal_quantile, tail_sandwich)
from .measure import (DilationProfile, Measurement, MonteCarloEstimate, dilation_profile,
                      gaussian_measure, gaussian_measure_mc, saucer_quadrature,
                      spherical_measure_mc)
from .smallball import (GaussianVectorModel, check_corollary, check_theorem4, induced_body,
                        median_norm, moment, weak_variance)

__version__ = "0.1.0"
