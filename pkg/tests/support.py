"""Shared builders for the test-suite: layered templates and instances."""

import itertools

from redblue.decompose import BlockKind
from redblue.graphs import make_graph
from redblue.homsearch import ListCspInstance

UPPER = (
    BlockKind.SINGLE_BLUE_LOOP,
    BlockKind.SINGLE_RED_LOOP,
    BlockKind.MONO_STAR_EDGE_RED,
    BlockKind.MONO_STAR_EDGE_BLUE,
    BlockKind.BICHROMATIC_STAR_EDGE,
)

_BASES = [
    ([(0, 0)], []),
    ([], [(0, 0)]),
    ([(0, 0), (1, 1), (0, 1)], [(0, 1)]),
    ([(0, 0)], [(1, 1), (0, 1)]),
    ([(0, 0), (1, 1)], [(0, 1)]),
    ([(1, 1), (0, 1)], [(0, 0), (0, 1)]),
]


def stacked_template(rng, kinds, base=None):
    """A template guaranteed to decompose with the given upper block kinds,
    bottom-up.  Each added vertex joins everything below it in its own
    loop colour, which is exactly the homogeneous-concatenation rule."""
    blue, red = [list(e) for e in (base if base is not None else rng.choice(_BASES))]
    n = max([max(p) for p in blue + red], default=-1) + 1
    blocks = [tuple(range(n))]
    for kind in kinds:
        below = list(range(n))
        if kind is BlockKind.SINGLE_BLUE_LOOP:
            blue += [(n, n)] + [(v, n) for v in below]
            blocks.append((n,))
            n += 1
        elif kind is BlockKind.SINGLE_RED_LOOP:
            red += [(n, n)] + [(v, n) for v in below]
            blocks.append((n,))
            n += 1
        elif kind is BlockKind.MONO_STAR_EDGE_BLUE:
            blue += [(n, n), (n + 1, n + 1), (n, n + 1)]
            red += [(n, n + 1)]
            blue += [(v, u) for v in below for u in (n, n + 1)]
            blocks.append((n, n + 1))
            n += 2
        elif kind is BlockKind.MONO_STAR_EDGE_RED:
            red += [(n, n), (n + 1, n + 1), (n, n + 1)]
            blue += [(n, n + 1)]
            red += [(v, u) for v in below for u in (n, n + 1)]
            blocks.append((n, n + 1))
            n += 2
        elif kind is BlockKind.BICHROMATIC_STAR_EDGE:
            blue += [(n, n), (n, n + 1)]
            red += [(n + 1, n + 1), (n, n + 1)]
            blue += [(v, n) for v in below]
            red += [(v, n + 1) for v in below]
            blocks.append((n, n + 1))
            n += 2
        else:
            raise ValueError(f"not an upper block kind: {kind}")
    return make_graph(n, blue, red), blocks


def random_stack(rng, depth=None):
    depth = rng.randint(1, 3) if depth is None else depth
    kinds = [rng.choice(UPPER) for _ in range(depth)]
    return stacked_template(rng, kinds)


def brute_decide(inst: ListCspInstance, template) -> bool:
    """Exhaustive satisfiability oracle; only for tiny instances."""
    g = inst.graph
    for m in itertools.product(range(template.n), repeat=g.n):
        if any(m[v] not in inst.lists[v] for v in range(g.n)):
            continue
        ok = True
        for u in range(g.n):
            for v in range(g.n):
                if g.blue[u, v] and not template.blue[m[u], m[v]]:
                    ok = False
                    break
                if g.red[u, v] and not template.red[m[u], m[v]]:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return True
    return False
