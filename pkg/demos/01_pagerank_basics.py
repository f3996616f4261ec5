# %% [markdown]
# # PageRank as a resolvent
# Build a small weighted graph, row-normalize it, and compute personalized
# PageRank two ways: the sparse solver and a dense inverse.

# %%
import numpy as np

from pprfix import Graph, PageRankConfig, ResolventConfig, apply_resolvent, pagerank, row_normalize
from pprfix.oracle import dense_resolvent

g = Graph.from_edges(4, [(0, 1, 2.0), (1, 2), (2, 0), (2, 3), (3, 0, 0.5)])
P = row_normalize(g)
print(P.dense())

# %%
v = np.array([0.4, 0.3, 0.2, 0.1])
pi = pagerank(P, PageRankConfig(0.85, v))
print("pagerank:", pi, "sum", pi.sum())

# %% the same vector from an explicit (1 - lam)(I - lam P)^-1
X = dense_resolvent(P.dense(), 0.85)
print("dense   :", v @ X)
print("rows of X sum to", X.sum(axis=1))

# %% two sparse methods
for method in ("direct_solve", "neumann_series"):
    print(method, apply_resolvent(v, P, ResolventConfig(0.85, method, 1e-13)))

# %% [markdown]
# On the 2-cycle the vector w = (1, -1) is scaled by (1 - lam) / (1 + lam).

# %%
two = row_normalize(Graph.from_edges(2, [(0, 1), (1, 0)]))
for lam in (0.2, 0.5, 0.8):
    Xl = dense_resolvent(two.dense(), lam)
    print(lam, np.array([1.0, -1.0]) @ Xl, (1 - lam) / (1 + lam))
