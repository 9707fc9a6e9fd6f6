"""
Classifying reflexive complete 2-edge-coloured templates
========================================================

Every template is either polynomial (it peels into a layered block
decomposition) or NP-complete (it carries checkable hardness evidence).
"""

from random import Random

from redblue.classify import classify
from redblue.graphs import StarMatrix, from_matrix, make_graph
from redblue.smallgraphs import random_template

# The 2x2 matrix with a 0-part, a 1-part and a free off-diagonal: its
# coloured graph is a red loop and a blue loop joined by a *-edge.
m_s = from_matrix(StarMatrix.make([["0", "*"], ["*", "1"]]))
verdict = classify(m_s)
print("M_S:", verdict.verdict)
for block in verdict.decomposition.blocks:
    print("   block", block.vertices, "kind", block.kind.value)

# The three-element graph A: a red-looped vertex blue-joined to a pair of
# blue-looped vertices whose own edge is red.  No small structural
# obstruction exists, yet no cyclic polymorphism of arity 5 does either.
a = make_graph(3, [(1, 1), (2, 2), (0, 1), (0, 2)], [(0, 0), (1, 2)])
verdict = classify(a)
print("A:  ", verdict.verdict, "via", verdict.certificate.kind,
      "in", verdict.certificate.arena)

# The adjacency matrix of K3 read as a partition matrix: red loops plus a
# blue triangle, the classic mono-loop odd cycle.
k3 = from_matrix(StarMatrix.make([["0", "1", "1"], ["1", "0", "1"], ["1", "1", "0"]]))
verdict = classify(k3)
cert = verdict.certificate
print("K3: ", verdict.verdict, "via", cert.kind,
      f"({cert.colour} cycle {cert.cycle})")

# Small random templates split both ways; by six vertices (with *-loops
# disallowed, so nothing is trivially tractable) hardness dominates.
rng = Random(3)
for n in (3, 6):
    tally = {"P": 0, "NP-complete": 0}
    for _ in range(40):
        h = random_template(n, rng, allow_star_loops=False)
        tally[classify(h).verdict] += 1
    print(f"40 random {n}-element templates:", tally)

# Swapping the two colours never changes the verdict.
print("A and its dual agree:", classify(a.dual()).verdict == "NP-complete")
