# %% [markdown]
# # Feeding PageRank back into itself
# On a strongly connected graph the feedback iteration forgets where it
# started and lands on the left Perron vector.

# %%
import numpy as np

from pprfix import PageRankConfig, feedback_iterate, left_perron, row_normalize
from pprfix import generators as gen

rng = np.random.default_rng(1)
g = gen.strongly_connected(rng, 12)
P = row_normalize(g)
c = left_perron(P).vector

# %%
for lam in (0.15, 0.5, 0.85):
    for _ in range(3):
        v = gen.random_distribution(rng, g.node_count)
        tr = feedback_iterate(P, PageRankConfig(lam, v, tolerance=1e-13))
        print(f"lam={lam} steps={tr.iterations:4d} |x - c|_1={np.abs(tr.limit - c).sum():.2e}")

# %% residuals shrink geometrically
tr = feedback_iterate(P, PageRankConfig(0.85, gen.random_distribution(rng, 12), tolerance=1e-13))
print(tr.residuals[:8])

# %% [markdown]
# Undirected graphs and balanced digraphs skip the power method: the
# Perron vector is the normalized degree.

# %%
from pprfix import degree_perron_undirected, degree_perron_eulerian

u = gen.symmetric_connected(rng, 10)
print(np.abs(degree_perron_undirected(u) - left_perron(row_normalize(u)).vector).sum())
b = gen.balanced_strongly_connected(rng, 10)
print(np.abs(degree_perron_eulerian(b) - left_perron(row_normalize(b)).vector).sum())
print(degree_perron_eulerian(gen.unbalanced_strongly_connected(rng, 10)))  # None
