"""
Screening all pairs and choosing how many to keep
=================================================

With p = 1000 covariates there are 499 500 pairs.  ``screen`` scores all of
them and ranks them; ``estimate_cutoff`` then looks for the largest ratio
between adjacent scores to decide how many pairs stand out.
"""

import time

from jcis import estimate_cutoff, rank_of_pair, screen
from jcis.simulate import generate_sim1, make_rng

data = generate_sim1(n=200, p=1000, rng=make_rng(1))

t = time.perf_counter()
result = screen(data)
print(f"scored {len(result)} pairs in {time.perf_counter() - t:.2f}s")

for ps in list(result)[:5]:
    print(f"  {ps.name1:>6} x {ps.name2:<6} r_hat = {ps.r_hat:.4f}")

print("rank of (X1, X2):", rank_of_pair(result, 0, 1))

# The default search range is the sample size and the default floor is the
# median examined score, which stops tiny scores with large ratios winning.
est = estimate_cutoff(result.r_hat, n=data.n)
print(f"keep the top {est.d_hat} pair(s); ratio {est.achieved_ratio:.2f}")

# Keeping only a bounded top list uses memory independent of the pair count.
top = screen(data, top_k=10, workers=4)
print("top-10 list agrees with the full ranking:",
      list(top.r_hat) == list(result.r_hat[:10]))
