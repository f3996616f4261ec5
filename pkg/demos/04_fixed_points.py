# %% [markdown]
# # Which personalization vectors are their own PageRank?
# The fixed points are exactly the mixtures of dangling-cluster Perron
# vectors. Whether one is strictly positive depends on whether any
# cluster has an exit.

# %%
import numpy as np

from pprfix import Graph, PageRankConfig, classify_fixed_points, is_fixed_point, row_normalize

graphs = {
    "3-cycle with chord": Graph.from_edges(3, [(0, 1), (1, 2), (2, 0), (0, 2)]),
    "two disjoint cycles": Graph.from_edges(4, [(0, 1), (1, 0), (2, 3), (3, 2)]),
    "cycle draining into cycle": Graph.from_edges(4, [(0, 1), (1, 0), (0, 2), (2, 3), (3, 2)]),
    "dangling node (patched)": Graph.from_edges(3, [(0, 1), (1, 0), (1, 2)]),
}

for name, g in graphs.items():
    r = classify_fixed_points(g, 0.85)
    print(f"{name:28s} L={r.L} M={r.M} interior={r.exists_interior} unique={r.unique}")

# %% mixtures of vertices stay fixed
r = classify_fixed_points(graphs["two disjoint cycles"], 0.85)
P = row_normalize(graphs["two disjoint cycles"])
mix = 0.3 * r.vertices[0] + 0.7 * r.vertices[1]
print(mix, is_fixed_point(P, PageRankConfig(0.85, mix)))
print(is_fixed_point(P, PageRankConfig(0.85, [0.4, 0.1, 0.25, 0.25])))

# %% the same report from the command line
# pprfix analyze --graph graph.txt --lambda 0.85
