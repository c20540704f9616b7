"""
Scoring a single covariate pair
===============================

The pair score measures how strongly two covariates act *jointly* on a
response.  It is the absolute third-order joint cumulant of (x1, x2, y)
divided by the three standard deviations, so it is invariant to shifting
or rescaling any of the variables.
"""

import numpy as np

from jcis import pair_score, tau_hat, tau_hat_oracle

rng = np.random.default_rng(0)
n = 500

# Two fair coins and their product: no main effect is needed for the
# interaction to show up.
x1 = rng.integers(0, 2, n).astype(float)
x2 = rng.integers(0, 2, n).astype(float)
y = x1 * x2
print("score of the interacting pair:", round(pair_score(x1, x2, y), 4))

# For two fair coins the population value is 1/sqrt(3).
print("population value:             ", round(1 / np.sqrt(3), 4))

# An unrelated pair scores close to zero.
z1, z2 = rng.normal(size=(2, n))
print("score of an unrelated pair:   ", round(pair_score(z1, z2, y), 4))

# The signed cumulant itself, checked against the raw-moment expansion.
print("tau_hat:", tau_hat(x1, x2, y), " oracle:", tau_hat_oracle(x1, x2, y))

# Affine changes of any argument leave the score untouched.
print("after rescaling x1 and y:     ",
      round(pair_score(-3 * x1 + 10, x2, 0.5 * y - 2), 4))
