"""
Graph sandwiches: completing a partial graph towards a matrix partition
=======================================================================

Given mandatory edges E1 inside allowed edges E2, is there a graph in
between whose vertices split according to a fixed partition matrix?
"""

from redblue.errors import OpenRegimeError
from redblue.graphs import StarMatrix
from redblue.sandwich import SandwichInstance, solve_list_sandwich, solve_sandwich

# M_S is the split-graph matrix: part 0 independent, part 1 a clique,
# anything goes across.  A mandatory 4-cycle cannot be split as it
# stands; the solver adds a chord to make it work.
m_s = StarMatrix.make([["0", "*"], ["*", "1"]])
c4 = [(0, 1), (1, 2), (2, 3), (0, 3)]
everything = [(a, b) for a in range(4) for b in range(a + 1, 4)]
inst = SandwichInstance.make(4, c4, everything)
edges = solve_sandwich(m_s, inst)
print("C4 completed to a split graph:", sorted(edges))
print("  chords added:", sorted(edges - inst.mandatory))

# With per-vertex lists (vertex 3 pinned to the clique part) the matrix
# being its own core keeps the problem polynomial.
listed = SandwichInstance.make(
    4, c4, everything, lists=[{0, 1}, {0, 1}, {0, 1}, {1}]
)
edges, parts = solve_list_sandwich(m_s, listed)
print("with vertex 3 pinned to the clique:", sorted(edges), "parts", parts)

# The 4x4 "stubborn" matrix carries a free loop, so every plain instance
# succeeds trivially -- but its list version falls outside the known
# polynomial cases and is refused without an explicit oracle opt-in.
stubborn = StarMatrix.make(
    [
        ["0", "*", "0", "*"],
        ["*", "0", "*", "*"],
        ["0", "*", "*", "*"],
        ["*", "*", "*", "1"],
    ]
)
print("stubborn, no lists:", sorted(solve_sandwich(stubborn, inst)))
try:
    solve_list_sandwich(stubborn, SandwichInstance.make(4, c4, everything, lists=[{0, 1}] * 4))
except OpenRegimeError as e:
    print("stubborn, with lists:", e)
got = solve_list_sandwich(
    stubborn, SandwichInstance.make(4, c4, everything, lists=[{0, 1}] * 4), oracle=True
)
print("stubborn, with lists, oracle search:", "sat" if got else "unsat")
