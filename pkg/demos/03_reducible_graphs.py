# %% [markdown]
# # Reducible graphs and dangling clusters
# Mass drains out of clusters that have exits and piles up in clusters
# that do not. The final split is predictable without iterating.

# %%
import numpy as np

from pprfix import PageRankConfig, decompose, feedback_iterate, predict_limit, row_normalize
from pprfix import generators as gen
from pprfix.pagerank import absorption_masses

rng = np.random.default_rng(3)
g, transient, dangling = gen.reducible(rng, [3, 2], [4, 3])
nf = decompose(g)
print("blocks (transient first):", nf.blocks)
print("L =", nf.L, "M =", nf.M)

# %%
P = row_normalize(g)
v = gen.random_distribution(rng, g.node_count)
tr = feedback_iterate(P, PageRankConfig(0.85, v, tolerance=1e-13), nf=nf)

# mass per block at a few steps; transient blocks decay, dangling ones grow
for k in (0, 1, 2, 5, 10, tr.iterations):
    print(k, np.round(tr.cluster_mass[k], 6))

# %%
alpha = absorption_masses(P, nf, v, 0.85)
print("alpha =", alpha, "sum", alpha.sum())
pred = predict_limit(P, nf, v, 0.85)
print("|predicted - iterated|_1 =", np.abs(pred - tr.limit).sum())

# %% the same alpha for every lambda
for lam in (0.15, 0.5, 0.85):
    print(lam, absorption_masses(P, nf, v, lam))

# %% [markdown]
# A source node with no in-links loses a factor (1 - lam) every step.

# %%
s = gen.single_source(rng, 5)
v = gen.random_distribution(rng, s.node_count)
tr = feedback_iterate(row_normalize(s), PageRankConfig(0.5, v, tolerance=0.0, max_iterations=6),
                      trace_stride=1)
print(np.array([x[0] for x in tr.iterates]))
print(0.5 ** np.arange(7) * v[0])
