"""
Full homomorphisms: when must adjacency AND non-adjacency both transfer?
========================================================================

For a loopless target the sandwich problem is polynomial exactly when
the target is K3-, 2K2- and P4-free; with loops, a peeling argument
decides.  The point-determining core is the canonical witness object.
"""

from redblue.classify import (
    classify_fullhom_sandwich,
    is_k3_2k2_p4_free,
    point_determining_core,
)
from redblue.graphs import SimpleGraph

# The 4-vertex path fails freeness on itself; one isolated vertex plus an
# edge passes (it is a complete bipartite graph plus an isolated vertex).
p4 = SimpleGraph(4, ((0, 1), (1, 2), (2, 3)))
k1_k2 = SimpleGraph(3, ((1, 2),))
for name, g in (("P4", p4), ("K1+K2", k1_k2)):
    free, witness = is_k3_2k2_p4_free(g)
    verdict = classify_fullhom_sandwich(g)
    print(f"{name}: {verdict.verdict}", "" if free else f"(induced {witness[0]} at {witness[1]})")

# A star's leaves look identical from outside, so the point-determining
# core folds them together.
star = SimpleGraph(5, ((0, 1), (0, 2), (0, 3), (0, 4)))
core, contraction = point_determining_core(star)
print("K_{1,4} core size:", core.n, "via", contraction)

# With loops the picture changes: a looped vertex adjacent to everything
# (including itself) peels off, and the verdict depends on what is left.
# One edge left behind is fine; two independent edges are not.
tame = SimpleGraph.make(4, [(0, 0), (0, 1), (0, 2), (0, 3), (1, 2)])
print("dominant loop over one edge:", classify_fullhom_sandwich(tame).verdict)
house = SimpleGraph.make(5, [(0, 0), (0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (3, 4)])
print("dominant loop over two edges:", classify_fullhom_sandwich(house).verdict)

capped = SimpleGraph.make(5, [(4, 4), (4, 0), (4, 1), (4, 2), (4, 3),
                              (0, 1), (1, 2), (2, 3)])
print("loop-capped P4:", classify_fullhom_sandwich(capped).verdict)
