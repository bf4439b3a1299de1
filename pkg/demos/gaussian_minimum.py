"""Walkthrough: the continuous case has a closed form.

Among all (X, Y) distributions with fixed first and second moments, the
jointly Gaussian one minimizes the maximal correlation, at value
sqrt(Var(a'X) / Var(Y)) where a is the regression vector of Y on X.  Two
checks below: the closed form on a hand-computable moment set, and a
discretized bivariate Gaussian whose finite-alphabet maximal correlation
must converge to |rho| as the grid refines.
"""

import numpy as np

import maxcorr as mx

# Correlated features: Sigma_XX = [[1, .5], [.5, 1]], Sigma_XY = (.6, .3).
# Solving Sigma_XX a = Sigma_XY by hand gives a = (.6, 0), hence
# Var(a'X) = .36 and the minimum is 0.6.
moments = mx.GaussianMoments(
    np.zeros(3),
    np.array([[1.0, 0.5, 0.6], [0.5, 1.0, 0.3], [0.6, 0.3, 1.0]]),
)
a = mx.regression_vector(moments)
print("regression vector a =", a)
print("closed-form minimum =", mx.min_hgr_gaussian(moments))

# For a single feature the minimum is |corr(X, Y)| exactly.
for rho in (0.25, -0.8):
    single = mx.GaussianMoments(np.zeros(2), np.array([[1.0, rho], [rho, 1.0]]))
    print(f"p=1, corr {rho:+.2f}: minimum = {mx.min_hgr_gaussian(single):.12f}")

# Discretized witness: cell-integrated masses on [-5, 5]^2.
print("\ngrid refinement toward |rho| = 0.5:")
print(f"{'grid':>6} {'maximal corr.':>16} {'error':>12} {'tail mass':>12}")
for grid_n in (50, 100, 200):
    joint, tail = mx.discretize_bivariate_gaussian(0.5, grid_n=grid_n, half_width=5.0)
    value = mx.hgr_svd(joint).rho
    print(f"{grid_n:>6} {value:>16.10f} {abs(value - 0.5):>12.3e} {tail:>12.3e}")

# Sign of the correlation is irrelevant to the coefficient.
minus, _ = mx.discretize_bivariate_gaussian(-0.5, grid_n=100, half_width=5.0)
plus, _ = mx.discretize_bivariate_gaussian(0.5, grid_n=100, half_width=5.0)
print(
    "\nsign blindness: |value(-0.5) - value(+0.5)| =",
    abs(mx.hgr_svd(minus).rho - mx.hgr_svd(plus).rho),
)
