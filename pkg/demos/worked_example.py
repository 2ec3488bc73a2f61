"""
A seven-vertex wavelet tree by hand
===================================

Two dense groups joined by two edges carry the values 9, 9, 10 and
-4, -6, -9, -9. Splitting along those edges and then inside each group
gives a Haar-like basis in which two coefficients describe almost all of
the signal.
"""

import numpy as np

from sparse_wavelets import Graph, compress, decompress, inverse, transform, tree_from_partitions

edges = [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (3, 4), (4, 5), (4, 6), (5, 6)]
g = Graph.from_edges(7, edges)
w = np.array([9.0, 9.0, 10.0, -4.0, -6.0, -9.0, -9.0])

# (node, left side) in creation order; node ids are handed out as we split
splits = [(0, [0, 1, 2]), (1, [0, 1]), (2, [3, 4]), (3, [0]), (5, [3]), (6, [5])]
tree = tree_from_partitions(g, splits)

coefs = transform(tree, w)
print("average", coefs.average)
for node, value in sorted(coefs.diffs.items()):
    nd = tree.nodes[node]
    left, right = (tree.nodes[c].members.tolist() for c in nd.children)
    print(f"node {node} level {nd.level} {left} | {right}: a = {value:g}")

# the inverse puts every vertex back exactly
print("reconstruction", inverse(tree, coefs))

# keep the two strongest coefficients and pay for the two cuts that carry them
c = compress(tree, w, keep=2)
approx = decompress(c, g)
print("kept", sorted(c.coefs), "size", c.size_bits, "bits")
print("approximation", np.round(approx, 3))
print(f"relative squared error {c.relative_error:.4%}")
