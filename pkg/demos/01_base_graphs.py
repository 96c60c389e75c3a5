#!/usr/bin/env python3
"""Build the base distance graphs and check their geometry.

The vertex set in quarter-dimension n is every 0/1 vector of length 4n
with exactly 2n ones; vectors are adjacent when their scalar product is
n, which makes every edge the same length sqrt(2n).  This script builds
the first few members of the family, checks the closed-form counts, and
shows that appending zero coordinates embeds the graph isometrically in
any higher dimension.
"""

import numpy as np

from highgirth import (
    build_base_graph,
    count_formulas,
    embed_codimension,
    scalar_product,
    verify_unit_distance,
)

# The n = 1 member is the octahedron: 6 balanced vectors of length 4.
g4 = build_base_graph(1)
print("n=1 vertices:", g4.vertex_strings())
print("n=1 edges:", g4.num_edges, "  degree:", g4.degree(0))

# Adjacency means scalar product exactly n; antipodal vectors miss it.
v = g4.vertices
print("(1100, 1010) ->", scalar_product(v[0], v[1]), " adjacent:", g4.has_edge(0, 1))
print("(1100, 0011) ->", scalar_product(v[0], v[5]), " adjacent:", g4.has_edge(0, 5))

# Counts follow binomials: N = C(4n, 2n), M = N * C(2n, n)^2 / 2, and the
# per-coordinate growth rates head toward 2 and 4.
for n in (1, 2, 3):
    s = count_formulas(n)
    print(
        f"n={n}: N={s.num_vertices}  M={s.num_edges}  "
        f"N^(1/4n)={s.vertex_rate:.4f}  (2M)^(1/4n)={s.edge_rate:.4f}"
    )

# Every edge has squared length exactly 2n (pure integer arithmetic).
g8 = build_base_graph(2)
print("common squared distance in G_8:", verify_unit_distance(g8))

# Appending zero coordinates is an isometry: all pairwise squared
# distances are preserved exactly, so the family fills every dimension.
coords = np.array([u.coords() for u in g8.vertices], dtype=np.int64)
lifted = np.array(embed_codimension(g8, 3), dtype=np.int64)
sq = lambda x: (x * x).sum(1)[:, None] + (x * x).sum(1)[None, :] - 2 * x @ x.T
print("embedding into dimension 11 is isometric:", np.array_equal(sq(coords), sq(lifted)))
