"""Enumeration of small templates up to isomorphism, plus random generators.

Every loop and every pair of a reflexive complete graph carries one of
three colour sets (blue, red, or both), so raw enumeration is 3^(n + C(n,2))
graphs; canonical forms collapse that to isomorphism classes.
"""

from __future__ import annotations

from itertools import combinations, product
from random import Random
from typing import Iterator, Optional

import numpy as np

from .graphs import TwoEdgeColouredGraph, canonical_form

_COLOURS = ((True, False), (False, True), (True, True))  # blue, red, star


def _build(n: int, slots, choice) -> TwoEdgeColouredGraph:
    blue = np.zeros((n, n), dtype=bool)
    red = np.zeros((n, n), dtype=bool)
    for (i, j), (b, r) in zip(slots, choice):
        blue[i, j] = blue[j, i] = b
        red[i, j] = red[j, i] = r
    return TwoEdgeColouredGraph(n, blue, red)


def all_templates(n: int) -> Iterator[TwoEdgeColouredGraph]:
    """Reflexive complete graphs on exactly n vertices, one per
    isomorphism class, in deterministic order."""
    slots = [(i, i) for i in range(n)] + list(combinations(range(n), 2))
    seen = set()
    for choice in product(_COLOURS, repeat=len(slots)):
        h = _build(n, slots, choice)
        key = canonical_form(h)
        if key not in seen:
            seen.add(key)
            yield h


def count_templates(n: int) -> int:
    return sum(1 for _ in all_templates(n))


def random_template(
    n: int, rng: Random, allow_star_loops: bool = True
) -> TwoEdgeColouredGraph:
    """A uniformly random reflexive complete graph (loops restricted to
    single colours when allow_star_loops is off, so the recognizer has
    real work to do)."""
    slots = [(i, i) for i in range(n)] + list(combinations(range(n), 2))
    choice = []
    for i, j in slots:
        opts = _COLOURS if (i != j or allow_star_loops) else _COLOURS[:2]
        choice.append(opts[rng.randrange(len(opts))])
    return _build(n, slots, choice)


def random_coloured_graph(n: int, rng: Random, p_edge: float = 0.6) -> TwoEdgeColouredGraph:
    """Instance-side graph: no reflexivity or completeness demanded, each
    slot empty with probability 1 - p_edge, else blue/red/both."""
    blue = np.zeros((n, n), dtype=bool)
    red = np.zeros((n, n), dtype=bool)
    for i in range(n):
        for j in range(i, n):
            if rng.random() < p_edge:
                b, r = _COLOURS[rng.randrange(3)]
                blue[i, j] = blue[j, i] = b
                red[i, j] = red[j, i] = r
    return TwoEdgeColouredGraph(n, blue, red)


def random_lists(n: int, k: int, rng: Random, p_keep: float = 0.7) -> tuple:
    """Per-vertex non-empty subsets of range(k)."""
    out = []
    for _ in range(n):
        keep = frozenset(t for t in range(k) if rng.random() < p_keep)
        if not keep:
            keep = frozenset({rng.randrange(k)})
        out.append(keep)
    return tuple(out)


def all_coloured_graphs(n: int) -> Iterator[TwoEdgeColouredGraph]:
    """Every instance-side graph on n labelled vertices: each loop and
    pair independently none/blue/red/both.  4^(n + C(n,2)) graphs."""
    slots = [(i, i) for i in range(n)] + list(combinations(range(n), 2))
    options = ((False, False),) + _COLOURS
    for choice in product(options, repeat=len(slots)):
        yield _build(n, slots, choice)


def random_simple_graph(n: int, rng: Random, p_edge: float = 0.5,
                        loops: bool = False):
    from .graphs import SimpleGraph

    edges = []
    for i in range(n):
        for j in range(i if loops else i + 1, n):
            if rng.random() < p_edge:
                edges.append((i, j))
    return SimpleGraph.make(n, edges)
