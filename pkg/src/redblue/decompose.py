"""Homogeneous sets, tractability recognition and block taxonomy.

A set S is homogeneous when every outside vertex sees each s in S with
exactly the colours of s's own loop.  Templates whose core stacks into a
base of at most two elements plus homogeneous single-loop or *-edge
blocks have polynomial CSPs; everything else is NP-complete.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional

import numpy as np

from .errors import InputError
from .graphs import TwoEdgeColouredGraph, alt_digraph, canonical_form, make_graph


class BlockKind(Enum):
    SINGLE_BLUE_LOOP = "single-blue-loop"
    SINGLE_RED_LOOP = "single-red-loop"
    STAR_LOOP = "star-loop"
    K2_STAR = "k2-star"
    DUAL_K2_STAR = "dual-k2-star"
    MONO_STAR_EDGE_RED = "mono-star-edge-red"
    MONO_STAR_EDGE_BLUE = "mono-star-edge-blue"
    BICHROMATIC_STAR_EDGE = "bichromatic-star-edge"
    FOUR_ALT = "four-alt"
    OTHER = "other"


#: kinds allowed above the base in a tractable layering
UPPER_KINDS = frozenset(
    {
        BlockKind.SINGLE_BLUE_LOOP,
        BlockKind.SINGLE_RED_LOOP,
        BlockKind.MONO_STAR_EDGE_RED,
        BlockKind.MONO_STAR_EDGE_BLUE,
        BlockKind.BICHROMATIC_STAR_EDGE,
    }
)


@dataclass(frozen=True)
class Block:
    vertices: tuple
    kind: BlockKind

    def to_json(self) -> dict:
        return {"kind": self.kind.value, "vertices": list(self.vertices)}


@dataclass(frozen=True)
class Decomposition:
    """Layered structure of (part of) a template.

    `blocks` is ordered bottom-up: blocks[0] is the base, later blocks
    are homogeneous over everything beneath them.  `retraction` maps
    every original vertex into the union of the blocks (identity when
    nothing was folded away).
    """

    n: int
    blocks: tuple
    retraction: dict

    @property
    def base(self) -> Block:
        return self.blocks[0]

    @property
    def base_ok(self) -> bool:
        return not self.blocks or len(self.base.vertices) <= 2

    def covered(self) -> tuple:
        return tuple(sorted(v for b in self.blocks for v in b.vertices))

    def tractable_shape(self) -> bool:
        if not self.blocks:
            return True
        if not self.base_ok:
            return False
        return all(b.kind in UPPER_KINDS for b in self.blocks[1:])

    def is_identity(self) -> bool:
        return all(self.retraction[v] == v for v in range(self.n))

    def to_json(self) -> dict:
        return {
            "blocks": [b.to_json() for b in self.blocks],
            "base_ok": self.base_ok,
            "retraction": {str(v): self.retraction[v] for v in range(self.n)},
        }


@dataclass(frozen=True)
class RecognizerReject:
    """Where the peeling got stuck: the live vertex set and the reason."""

    remaining: tuple
    offending_set: Optional[tuple]
    reason: str

    def to_json(self) -> dict:
        return {
            "remaining": list(self.remaining),
            "offending_set": None if self.offending_set is None else list(self.offending_set),
            "reason": self.reason,
        }


def is_homogeneous(h: TwoEdgeColouredGraph, s: Iterable[int]) -> bool:
    """Every outside vertex sees each member with exactly its loop colours."""
    sset = set(s)
    for w in range(h.n):
        if w in sset:
            continue
        for u in sset:
            if h.blue[u, w] != h.blue[u, u] or h.red[u, w] != h.red[u, u]:
                return False
    return True


def _forcing_matrix(h: TwoEdgeColouredGraph) -> np.ndarray:
    """F[u, w] true when the uw colours differ from u's loop colours."""
    f = (h.blue != h.blue.diagonal()[:, None]) | (h.red != h.red.diagonal()[:, None])
    np.fill_diagonal(f, False)
    return f


def homogeneous_closure(h: TwoEdgeColouredGraph, v: int, forcing=None) -> frozenset:
    """Smallest homogeneous set containing v (closure under forced additions)."""
    f = _forcing_matrix(h) if forcing is None else forcing
    seen = np.zeros(h.n, dtype=bool)
    seen[v] = True
    stack = [v]
    while stack:
        u = stack.pop()
        for w in np.flatnonzero(f[u] & ~seen):
            seen[w] = True
            stack.append(int(w))
    return frozenset(int(x) for x in np.flatnonzero(seen))


def minimal_homogeneous_set(h: TwoEdgeColouredGraph) -> frozenset:
    """Minimum-cardinality homogeneous closure; ties go to the smallest seed."""
    if h.n == 0:
        raise InputError("empty graph has no homogeneous set")
    f = _forcing_matrix(h)
    best = None
    for v in range(h.n):
        s = homogeneous_closure(h, v, f)
        if best is None or len(s) < len(best):
            best = s
    return best


def classify_block(h: TwoEdgeColouredGraph, vertices: Iterable[int]) -> BlockKind:
    """Shape of an induced block, up to isomorphism for the 4-element case."""
    vs = sorted(set(vertices))
    sub = h.induced(vs)
    if sub.n == 1:
        b, r = bool(sub.blue[0, 0]), bool(sub.red[0, 0])
        if b and r:
            return BlockKind.STAR_LOOP
        if b:
            return BlockKind.SINGLE_BLUE_LOOP
        if r:
            return BlockKind.SINGLE_RED_LOOP
        return BlockKind.OTHER
    if sub.n == 2:
        loops = [sub.colours(i, i) for i in (0, 1)]
        edge = sub.colours(0, 1)
        pure = all(len(l) == 1 for l in loops)
        if pure and edge == {"blue", "red"}:
            if loops[0] == loops[1] == {"red"}:
                return BlockKind.MONO_STAR_EDGE_RED
            if loops[0] == loops[1] == {"blue"}:
                return BlockKind.MONO_STAR_EDGE_BLUE
            return BlockKind.BICHROMATIC_STAR_EDGE
        if pure and loops[0] == loops[1] == {"red"} and edge == {"blue"}:
            return BlockKind.K2_STAR
        if pure and loops[0] == loops[1] == {"blue"} and edge == {"red"}:
            return BlockKind.DUAL_K2_STAR
        return BlockKind.OTHER
    if sub.n == 4 and canonical_form(sub) == _four_alt_canon():
        return BlockKind.FOUR_ALT
    return BlockKind.OTHER


def four_alt() -> TwoEdgeColouredGraph:
    """The 4-element alternating block: blue-looped 0,1 and red-looped 2,3
    with blue 01, 02, 13 and red 23, 03, 12.  Isomorphic to its own dual."""
    return make_graph(
        4,
        blue=[(0, 0), (1, 1), (0, 1), (0, 2), (1, 3)],
        red=[(2, 2), (3, 3), (2, 3), (0, 3), (1, 2)],
    )


_FOUR_ALT_CANON: Optional[bytes] = None


def _four_alt_canon() -> bytes:
    global _FOUR_ALT_CANON
    if _FOUR_ALT_CANON is None:
        _FOUR_ALT_CANON = canonical_form(four_alt())
    return _FOUR_ALT_CANON


def _strippable_kind(h: TwoEdgeColouredGraph, s: tuple) -> Optional[BlockKind]:
    """The block kind when s can sit above a decomposition, else None."""
    kind = classify_block(h, s)
    if len(s) == 1 and kind in (BlockKind.SINGLE_BLUE_LOOP, BlockKind.SINGLE_RED_LOOP):
        return kind
    if len(s) == 2 and kind in (
        BlockKind.MONO_STAR_EDGE_RED,
        BlockKind.MONO_STAR_EDGE_BLUE,
        BlockKind.BICHROMATIC_STAR_EDGE,
    ):
        return kind
    return None


def _dominated_pair(sub: TwoEdgeColouredGraph) -> Optional[tuple]:
    """Lex-first (u, v) such that mapping u onto v (identity elsewhere)
    is an endomorphism: u's colours fit inside v's everywhere, and both
    u's loop and the uv edge fit inside v's loop."""
    n = sub.n
    for u in range(n):
        off = np.ones(n, dtype=bool)
        off[u] = False
        for v in range(n):
            if u == v:
                continue
            mask = off.copy()
            mask[v] = False
            if (sub.blue[u, mask] & ~sub.blue[v, mask]).any():
                continue
            if (sub.red[u, mask] & ~sub.red[v, mask]).any():
                continue
            lb, lr = sub.blue[v, v], sub.red[v, v]
            if (sub.blue[u, u] and not lb) or (sub.red[u, u] and not lr):
                continue
            if (sub.blue[u, v] and not lb) or (sub.red[u, v] and not lr):
                continue
            return u, v
    return None


def _pair_retract_sweep(sub: TwoEdgeColouredGraph):
    """First 2-subset (lex order) that sub maps into, squared into an
    idempotent retraction.  Squaring suffices: the map's square fixes its
    own image inside the pair, whatever the pair permutation."""
    from .polysolve import _pair_hom  # deferred: polysolve imports this module

    n = sub.n
    loops = [sub.colours(v, v) for v in range(n)]
    for a in range(n):
        for b in range(a + 1, n):
            if not all(loops[v] <= loops[a] or loops[v] <= loops[b] for v in range(n)):
                continue
            lists = {v: frozenset((a, b)) for v in range(n)}
            hom = _pair_hom(sub, range(n), lists, sub, a, b)
            if hom is not None:
                g = {v: hom[hom[v]] for v in range(n)}
                image = tuple(sorted(v for v in range(n) if g[v] == v))
                return image, g
    return None


def _recognize(h: TwoEdgeColouredGraph):
    """(Decomposition, None) on acceptance, (None, RecognizerReject) otherwise."""
    if not (h.is_reflexive() and h.is_complete()):
        raise InputError("recognizer needs a reflexive complete graph")
    if h.n == 0:
        return Decomposition(0, (), {}), None

    stars = h.star_loops()
    if stars:
        w = min(stars)
        blocks = (Block((w,), BlockKind.STAR_LOOP),)
        return Decomposition(h.n, blocks, {v: w for v in range(h.n)}), None

    current = list(range(h.n))
    peeled: list[Block] = []
    retraction = {v: v for v in range(h.n)}
    while True:
        if len(current) <= 2:
            base = Block(tuple(current), classify_block(h, current))
            blocks = (base,) + tuple(reversed(peeled))
            return Decomposition(h.n, blocks, retraction), None

        sub = h.induced(current)
        forcing = _forcing_matrix(sub)
        closures = []
        for i in range(sub.n):
            s_local = homogeneous_closure(sub, i, forcing)
            if s_local not in closures:
                closures.append(s_local)

        # Peel: any strippable homogeneous closure works — closures never
        # straddle a layer of a decomposition, so the choice is confluent.
        candidates = []
        for s_local in closures:
            if len(s_local) == sub.n:
                continue
            s = tuple(sorted(current[i] for i in s_local))
            kind = _strippable_kind(h, s)
            if kind is not None:
                candidates.append((len(s), s, kind))
        if candidates:
            _, s, kind = min(candidates)
            peeled.append(Block(s, kind))
            current = [v for v in current if v not in set(s)]
            continue

        # Fold: a dominated vertex can be collapsed without changing the
        # core, and the collapse may expose new homogeneous layers.
        pair = _dominated_pair(sub)
        if pair is not None:
            u, v = current[pair[0]], current[pair[1]]
            retraction = {x: (v if r == u else r) for x, r in retraction.items()}
            current.remove(u)
            continue

        # Base: a retract onto two elements settles the remainder.
        got = _pair_retract_sweep(sub)
        if got is not None:
            image_local, g_local = got
            base_vs = tuple(sorted(current[i] for i in image_local))
            base = Block(base_vs, classify_block(h, base_vs))
            blocks = (base,) + tuple(reversed(peeled))
            gmap = {current[i]: current[g_local[i]] for i in range(sub.n)}
            retraction = {x: gmap.get(r, r) for x, r in retraction.items()}
            return Decomposition(h.n, blocks, retraction), None

        proper = [s for s in closures if len(s) < sub.n]
        if proper:
            s_local = min(proper, key=lambda s: (len(s), tuple(sorted(s))))
            off = tuple(sorted(current[i] for i in s_local))
            reason = "minimal homogeneous set is not a loop or *-edge"
        else:
            off = None
            reason = "no core of size at most two"
        return None, RecognizerReject(tuple(current), off, reason)


def recognize_tractable(h: TwoEdgeColouredGraph) -> Optional[Decomposition]:
    """Layered decomposition witnessing a polynomial CSP, or None.

    Accepts immediately on a *-loop.  Otherwise alternates three sound
    moves until nothing applies: peel a homogeneous closure that is a
    single loop vertex or a reflexive *-edge, fold a dominated vertex
    away, and finally retract the remainder onto two elements.  Each move
    preserves tractability both ways, so the greedy order is safe.
    Polynomial: closures are vectorised reachability, folds are subset
    tests, the retract sweep is a 2-SAT per candidate pair.
    """
    decomp, _ = recognize_with_reject(h)
    return decomp


_RECOGNIZE_CACHE: dict = {}


def recognize_with_reject(h: TwoEdgeColouredGraph):
    """Memoised _recognize; templates are immutable and recur heavily."""
    key = h.key()
    hit = _RECOGNIZE_CACHE.get(key)
    if hit is None:
        hit = _recognize(h)
        _RECOGNIZE_CACHE[key] = hit
    return hit


def alternating_components(h: TwoEdgeColouredGraph) -> list:
    """Strongly connected components of the alternation digraph, as blocks
    in topological order (sources first).  Deterministic: sink components
    are extracted smallest-contained-vertex first and prepended."""
    d = alt_digraph(h)
    n = h.n
    adj = [[] for _ in range(n)]
    for a, b in d.arcs:
        adj[a].append(b)

    # Tarjan, iterative
    index = [-1] * n
    low = [0] * n
    onstack = [False] * n
    stack: list[int] = []
    comp_of = [-1] * n
    comps: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, pi = work[-1]
            if pi == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                onstack[v] = True
            advanced = False
            for k in range(pi, len(adj[v])):
                w = adj[v][k]
                if index[w] == -1:
                    work[-1] = (v, k + 1)
                    work.append((w, 0))
                    advanced = True
                    break
                if onstack[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    onstack[w] = False
                    comp_of[w] = len(comps)
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
            if work:
                u, _ = work[-1]
                low[u] = min(low[u], low[v])

    k = len(comps)
    out_deg = [set() for _ in range(k)]
    for a, b in d.arcs:
        ca, cb = comp_of[a], comp_of[b]
        if ca != cb:
            out_deg[ca].add(cb)

    alive = set(range(k))
    ordered: list[int] = []
    while alive:
        sinks = [c for c in alive if not (out_deg[c] & alive)]
        pick = min(sinks, key=lambda c: comps[c][0])
        ordered.insert(0, pick)
        alive.discard(pick)
    return [Block(tuple(comps[c]), classify_block(h, comps[c])) for c in ordered]
