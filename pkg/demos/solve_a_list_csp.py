"""
Solving list CSPs over a tractable template in polynomial time
==============================================================

A tractable template peels top-down: homogeneous single loops and
*-edge pairs strip off the instance one block at a time, leaving a
two-element base for the 2-SAT solver.  The whole run is logged and the
witness is rebuilt by replaying the log.
"""

from random import Random

from redblue.graphs import make_graph
from redblue.homsearch import ListCspInstance, verify_hom
from redblue.polysolve import solve_with_log
from redblue.smallgraphs import random_coloured_graph, random_lists

# A 4-element template stacked by hand: a red-loop/blue-loop *-edge base
# (vertices 0, 1), then a blue-looped vertex 2 blue-joined to the base,
# then a red-looped vertex 3 red-joined to everything below.
template = make_graph(
    4,
    blue=[(0, 0), (0, 1), (2, 2), (0, 2), (1, 2)],
    red=[(1, 1), (0, 1), (3, 3), (0, 3), (1, 3), (2, 3)],
)

rng = Random(30)
instance = ListCspInstance(
    random_coloured_graph(6, rng), random_lists(6, template.n, rng)
)
print("instance lists:", [sorted(l) for l in instance.lists])

hom, log = solve_with_log(template, instance)
print("witness:", list(hom.map))
print("verified:", verify_hom(instance, template, hom) is None)
for step in log.to_json()["steps"]:
    print(
        "  strip", step["reason"], "template block", step["block"],
        "pins instance vertices", step["forced"],
        "and prunes", step["pruned"],
    )

# Shrinking the lists shows them doing real work: two allowed images per
# vertex still squeeze through, one does not.
for cap in (2, 1):
    lists = tuple(frozenset(sorted(l)[:cap]) for l in instance.lists)
    got, _ = solve_with_log(template, ListCspInstance(instance.graph, lists))
    print(f"lists capped at {cap}:", "sat" if got else "unsat")
