"""Red/blue edge-coloured graphs, matrix encodings and power constructions.

A two-edge-coloured graph carries two symmetric relations (blue and red)
on one vertex set.  A pair or loop may hold one colour, both (a *-edge /
*-loop) or neither.  Reflexive complete graphs of this kind are exactly
the {0,1,*}-matrices used for matrix partitions: m_ij = 1 is a blue-only
pair, 0 red-only, * both.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import GuardExceeded, InputError

BLUE = "blue"
RED = "red"

#: largest vertex count for a power/quotient construction (memory guard)
MAX_POWER_SIZE = 5000

#: largest n for brute-force canonicalisation (n! permutations)
MAX_CANON_N = 8


def _symmetric_bool(n: int, pairs: Iterable[tuple[int, int]]) -> np.ndarray:
    m = np.zeros((n, n), dtype=bool)
    for i, j in pairs:
        if not (0 <= i < n and 0 <= j < n):
            raise InputError(f"vertex pair ({i},{j}) out of range for n={n}")
        m[i, j] = m[j, i] = True
    return m


@dataclass(frozen=True, eq=False)
class TwoEdgeColouredGraph:
    """Vertices 0..n-1 with symmetric blue/red adjacency matrices."""

    n: int
    blue: np.ndarray
    red: np.ndarray

    def __post_init__(self):
        for name in ("blue", "red"):
            m = getattr(self, name)
            if m.shape != (self.n, self.n) or m.dtype != np.bool_:
                raise InputError(f"{name} matrix must be ({self.n},{self.n}) bool")
            if not np.array_equal(m, m.T):
                raise InputError(f"{name} matrix must be symmetric")
            m.setflags(write=False)

    # -- basic queries ---------------------------------------------------

    def colours(self, i: int, j: int) -> frozenset:
        out = []
        if self.blue[i, j]:
            out.append(BLUE)
        if self.red[i, j]:
            out.append(RED)
        return frozenset(out)

    def blue_pairs(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.n) for j in range(i, self.n) if self.blue[i, j]]

    def red_pairs(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.n) for j in range(i, self.n) if self.red[i, j]]

    def star_pairs(self) -> list[tuple[int, int]]:
        """Pairs i <= j carrying both colours (loops included)."""
        both = self.blue & self.red
        return [(i, j) for i in range(self.n) for j in range(i, self.n) if both[i, j]]

    def star_loops(self) -> list[int]:
        return [v for v in range(self.n) if self.blue[v, v] and self.red[v, v]]

    def is_reflexive(self) -> bool:
        return bool(np.all(self.blue.diagonal() | self.red.diagonal()))

    def is_complete(self) -> bool:
        off = ~np.eye(self.n, dtype=bool)
        return bool(np.all((self.blue | self.red)[off]))

    def is_loopless(self) -> bool:
        return not bool(np.any(self.blue.diagonal() | self.red.diagonal()))

    # -- derived graphs --------------------------------------------------

    def dual(self) -> "TwoEdgeColouredGraph":
        """Swap the two colours."""
        return TwoEdgeColouredGraph(self.n, self.red.copy(), self.blue.copy())

    def induced(self, vertices: Iterable[int]) -> "TwoEdgeColouredGraph":
        """Substructure on the given vertices, relabelled in sorted order."""
        idx = np.array(sorted(set(vertices)), dtype=int)
        return TwoEdgeColouredGraph(
            len(idx), self.blue[np.ix_(idx, idx)].copy(), self.red[np.ix_(idx, idx)].copy()
        )

    def relabel(self, perm: Iterable[int]) -> "TwoEdgeColouredGraph":
        """Image under vertex permutation v -> perm[v]."""
        p = list(perm)
        inv = np.empty(self.n, dtype=int)
        for v, t in enumerate(p):
            inv[t] = v
        return TwoEdgeColouredGraph(
            self.n, self.blue[np.ix_(inv, inv)].copy(), self.red[np.ix_(inv, inv)].copy()
        )

    # -- identity --------------------------------------------------------

    def key(self) -> tuple:
        return (self.n, self.blue.tobytes(), self.red.tobytes())

    def __eq__(self, other):
        return isinstance(other, TwoEdgeColouredGraph) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"TwoEdgeColouredGraph(n={self.n}, blue={self.blue_pairs()}, red={self.red_pairs()})"


def make_graph(
    n: int,
    blue: Iterable[tuple[int, int]] = (),
    red: Iterable[tuple[int, int]] = (),
) -> TwoEdgeColouredGraph:
    """Build a graph from edge pair lists (loops as (v, v))."""
    return TwoEdgeColouredGraph(n, _symmetric_bool(n, blue), _symmetric_bool(n, red))


@dataclass(frozen=True)
class SimpleGraph:
    """An ordinary graph, loops allowed; edges stored as sorted pairs i <= j."""

    n: int
    edges: frozenset

    @staticmethod
    def make(n: int, edges: Iterable[tuple[int, int]]) -> "SimpleGraph":
        norm = set()
        for i, j in edges:
            if not (0 <= i < n and 0 <= j < n):
                raise InputError(f"edge ({i},{j}) out of range for n={n}")
            norm.add((min(i, j), max(i, j)))
        return SimpleGraph(n, frozenset(norm))

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.edges

    def is_loopless(self) -> bool:
        return all(i != j for i, j in self.edges)

    def adjacency(self) -> np.ndarray:
        m = np.zeros((self.n, self.n), dtype=bool)
        for i, j in self.edges:
            m[i, j] = m[j, i] = True
        return m


@dataclass(frozen=True)
class Digraph:
    n: int
    arcs: frozenset

    @staticmethod
    def make(n: int, arcs: Iterable[tuple[int, int]]) -> "Digraph":
        return Digraph(n, frozenset((int(a), int(b)) for a, b in arcs))


@dataclass(frozen=True)
class StarMatrix:
    """Symmetric matrix over {0, 1, *}, stored as strings."""

    entries: tuple

    def __post_init__(self):
        n = len(self.entries)
        for row in self.entries:
            if len(row) != n:
                raise InputError("matrix must be square")
            for e in row:
                if e not in ("0", "1", "*"):
                    raise InputError(f"matrix entry {e!r} not in {{'0','1','*'}}")
        for i in range(n):
            for j in range(n):
                if self.entries[i][j] != self.entries[j][i]:
                    raise InputError("matrix must be symmetric")

    @staticmethod
    def make(rows: Iterable[Iterable]) -> "StarMatrix":
        return StarMatrix(tuple(tuple(str(e) for e in row) for row in rows))

    @property
    def n(self) -> int:
        return len(self.entries)


def from_matrix(m: StarMatrix) -> TwoEdgeColouredGraph:
    """Graph of a {0,1,*}-matrix: 1 -> blue, 0 -> red, * -> both.

    The result is reflexive and complete by construction.
    """
    n = m.n
    blue = np.zeros((n, n), dtype=bool)
    red = np.zeros((n, n), dtype=bool)
    for i in range(n):
        for j in range(n):
            e = m.entries[i][j]
            blue[i, j] = e in ("1", "*")
            red[i, j] = e in ("0", "*")
    return TwoEdgeColouredGraph(n, blue, red)


def to_matrix(h: TwoEdgeColouredGraph) -> StarMatrix:
    """Inverse of from_matrix; requires every pair and loop to be coloured."""
    if not (h.is_reflexive() and h.is_complete()):
        raise InputError("to_matrix needs a reflexive complete graph")
    rows = []
    for i in range(h.n):
        row = []
        for j in range(h.n):
            b, r = bool(h.blue[i, j]), bool(h.red[i, j])
            row.append("*" if (b and r) else "1" if b else "0")
        rows.append(tuple(row))
    return StarMatrix(tuple(rows))


def nu(g: SimpleGraph) -> TwoEdgeColouredGraph:
    """Loopless encoding: blue = edges of g, red = non-edges of g."""
    if not g.is_loopless():
        raise InputError("nu is defined for loopless graphs")
    adj = g.adjacency()
    off = ~np.eye(g.n, dtype=bool)
    return TwoEdgeColouredGraph(g.n, adj & off, ~adj & off)


def star_encode(g: SimpleGraph) -> TwoEdgeColouredGraph:
    """Reflexive complete encoding G*: blue = edges, red = non-edges and all loops."""
    if not g.is_loopless():
        raise InputError("star_encode is defined for loopless graphs")
    adj = g.adjacency()
    off = ~np.eye(g.n, dtype=bool)
    return TwoEdgeColouredGraph(g.n, adj & off, (~adj & off) | np.eye(g.n, dtype=bool))


# -- products and powers ------------------------------------------------


def _digits(count: int, base: int, width: int) -> np.ndarray:
    """(width, count) array; row i holds digit i (little-endian) of 0..count-1."""
    idx = np.arange(count)
    return np.stack([(idx // base**i) % base for i in range(width)])


def product(g: TwoEdgeColouredGraph, h: TwoEdgeColouredGraph) -> TwoEdgeColouredGraph:
    """Categorical product; vertex (a, b) has index a + g.n * b."""
    size = g.n * h.n
    if size > MAX_POWER_SIZE:
        raise GuardExceeded(f"product size {size} exceeds {MAX_POWER_SIZE}")
    a = np.arange(size) % g.n
    b = np.arange(size) // g.n
    blue = g.blue[np.ix_(a, a)] & h.blue[np.ix_(b, b)]
    red = g.red[np.ix_(a, a)] & h.red[np.ix_(b, b)]
    return TwoEdgeColouredGraph(size, blue, red)


def power(h: TwoEdgeColouredGraph, m: int) -> TwoEdgeColouredGraph:
    """m-th categorical power; tuples indexed mixed-radix little-endian."""
    size = h.n**m
    if size > MAX_POWER_SIZE:
        raise GuardExceeded(f"power size {size} exceeds {MAX_POWER_SIZE}")
    digs = _digits(size, h.n, m)
    blue = np.ones((size, size), dtype=bool)
    red = np.ones((size, size), dtype=bool)
    for i in range(m):
        d = digs[i]
        blue &= h.blue[np.ix_(d, d)]
        red &= h.red[np.ix_(d, d)]
    return TwoEdgeColouredGraph(size, blue, red)


def tuple_index(t: Iterable[int], n: int) -> int:
    return sum(int(x) * n**i for i, x in enumerate(t))


def index_tuple(idx: int, n: int, m: int) -> tuple:
    return tuple((idx // n**i) % n for i in range(m))


@dataclass(frozen=True, eq=False)
class QuotientPower:
    """A power of a graph divided by a tuple equivalence.

    `graph` lives on the classes; `class_of[i]` is the class of tuple
    index i; `reps[c]` is the lexicographically least tuple in class c
    (classes are numbered in the order of those minima).
    """

    base: TwoEdgeColouredGraph
    arity: int
    graph: TwoEdgeColouredGraph
    class_of: np.ndarray
    reps: tuple

    def class_of_tuple(self, t: Iterable[int]) -> int:
        return int(self.class_of[tuple_index(t, self.base.n)])

    def members(self, c: int) -> list[tuple]:
        n, m = self.base.n, self.arity
        return sorted(index_tuple(i, n, m) for i in np.flatnonzero(self.class_of == c))


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def _quotient(h: TwoEdgeColouredGraph, m: int, pairs: Iterable[tuple[int, int]]) -> QuotientPower:
    """Quotient of h^m by the equivalence generated by the given index pairs."""
    size = h.n**m
    if size > MAX_POWER_SIZE:
        raise GuardExceeded(f"power size {size} exceeds {MAX_POWER_SIZE}")
    uf = _UnionFind(size)
    for a, b in pairs:
        uf.union(a, b)
    root_of = np.fromiter((uf.find(i) for i in range(size)), dtype=np.int64, count=size)

    # number classes by their lexicographically least member tuple
    min_tuple: dict[int, tuple] = {}
    for i in range(size):
        t = index_tuple(i, h.n, m)
        r = int(root_of[i])
        if r not in min_tuple or t < min_tuple[r]:
            min_tuple[r] = t
    order = sorted(min_tuple, key=lambda r: min_tuple[r])
    relabel = {r: c for c, r in enumerate(order)}
    class_of = np.fromiter((relabel[int(r)] for r in root_of), dtype=np.int64, count=size)
    reps = tuple(min_tuple[r] for r in order)
    k = len(order)

    pw = power(h, m)
    idx = class_of[:, None] * k + class_of[None, :]
    blue = np.bincount(idx[pw.blue], minlength=k * k).reshape(k, k) > 0
    red = np.bincount(idx[pw.red], minlength=k * k).reshape(k, k) > 0
    quot = TwoEdgeColouredGraph(k, blue | blue.T, red | red.T)
    class_of.setflags(write=False)
    return QuotientPower(h, m, quot, class_of, reps)


def siggers_power(h: TwoEdgeColouredGraph) -> QuotientPower:
    """H^4 divided by the equivalence generated by (a,r,e,a) ~ (r,a,r,e)."""
    n = h.n
    pairs = []
    for a in range(n):
        for r in range(n):
            for e in range(n):
                pairs.append(
                    (tuple_index((a, r, e, a), n), tuple_index((r, a, r, e), n))
                )
    return _quotient(h, 4, pairs)


def cyclic_power(h: TwoEdgeColouredGraph, p: int) -> QuotientPower:
    """H^p divided by cyclic rotation of tuples."""
    n = h.n
    size = n**p
    if size > MAX_POWER_SIZE:
        raise GuardExceeded(f"power size {size} exceeds {MAX_POWER_SIZE}")
    pairs = []
    for i in range(size):
        t = index_tuple(i, n, p)
        pairs.append((i, tuple_index(t[1:] + t[:1], n)))
    return _quotient(h, p, pairs)


# -- structural helpers -------------------------------------------------


def alt_digraph(h: TwoEdgeColouredGraph) -> Digraph:
    """Arc (x, y) when x's loop colour differs from an xy edge colour:
    blue-looped x with red xy, or red-looped x with blue xy."""
    if not h.is_reflexive():
        raise InputError("alt_digraph needs a reflexive graph")
    arcs = []
    for x in range(h.n):
        for y in range(h.n):
            if x == y:
                continue
            if (h.blue[x, x] and h.red[x, y]) or (h.red[x, x] and h.blue[x, y]):
                arcs.append((x, y))
    return Digraph.make(h.n, arcs)


def girth(h: TwoEdgeColouredGraph):
    """1 with a loop; 2 loopless with a *-edge; else girth of the colour union."""
    if not h.is_loopless():
        return 1
    if any(i != j for i, j in h.star_pairs()):
        return 2
    union = h.blue | h.red
    best = math.inf
    # BFS from each vertex; a non-tree edge closing at depths d1, d2 gives
    # a cycle of length d1 + d2 + 1 through the root
    for s in range(h.n):
        dist = [-1] * h.n
        parent = [-1] * h.n
        dist[s] = 0
        queue = [s]
        while queue:
            nxt = []
            for u in queue:
                for v in np.flatnonzero(union[u]):
                    v = int(v)
                    if dist[v] == -1:
                        dist[v] = dist[u] + 1
                        parent[v] = u
                        nxt.append(v)
                    elif v != parent[u] and dist[v] >= dist[u]:
                        best = min(best, dist[u] + dist[v] + 1)
            queue = nxt
    return best


_PERM_CACHE: dict[int, tuple] = {}


def _slot_list(n: int) -> list[tuple[int, int]]:
    return [(v, v) for v in range(n)] + [(i, j) for i in range(n) for j in range(i + 1, n)]


def _perm_slot_maps(n: int) -> tuple:
    """All vertex permutations of [n] as slot-index maps over loops+pairs."""
    key = n
    if key not in _PERM_CACHE:
        slots = _slot_list(n)
        pos = {s: k for k, s in enumerate(slots)}
        maps = []
        for perm in itertools.permutations(range(n)):
            maps.append(
                np.array(
                    [pos[tuple(sorted((perm[i], perm[j])))] for i, j in slots], dtype=np.int64
                )
            )
        _PERM_CACHE[key] = (slots, np.stack(maps))
    return _PERM_CACHE[key]


def slot_codes(h: TwoEdgeColouredGraph) -> np.ndarray:
    """Per-slot colour code (0 none, 1 blue, 2 red, 3 both), loops then pairs."""
    slots = _slot_list(h.n)
    return np.array(
        [int(h.blue[i, j]) + 2 * int(h.red[i, j]) for i, j in slots], dtype=np.uint8
    )


def canonical_form(h: TwoEdgeColouredGraph) -> bytes:
    """Lexicographically least slot encoding over all vertex relabellings."""
    if h.n > MAX_CANON_N:
        raise GuardExceeded(f"canonical_form guard: n={h.n} > {MAX_CANON_N}")
    if h.n == 0:
        return b""
    codes = slot_codes(h)
    _, maps = _perm_slot_maps(h.n)
    images = codes[maps]  # (n!, slots)
    return min(row.tobytes() for row in images)


# -- JSON ----------------------------------------------------------------


def graph_to_json(h: TwoEdgeColouredGraph) -> dict:
    return {
        "n": h.n,
        "blue": [list(p) for p in h.blue_pairs()],
        "red": [list(p) for p in h.red_pairs()],
    }


def graph_from_json(d: dict) -> TwoEdgeColouredGraph:
    try:
        n = int(d["n"])
        blue = [(int(i), int(j)) for i, j in d.get("blue", [])]
        red = [(int(i), int(j)) for i, j in d.get("red", [])]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad graph JSON: {exc}") from exc
    if n < 0:
        raise InputError("n must be non-negative")
    return make_graph(n, blue, red)


def matrix_to_json(m: StarMatrix) -> dict:
    return {"entries": [list(row) for row in m.entries]}


def matrix_from_json(d: dict) -> StarMatrix:
    try:
        return StarMatrix.make(d["entries"])
    except (KeyError, TypeError) as exc:
        raise InputError(f"bad matrix JSON: {exc}") from exc


def simple_to_json(g: SimpleGraph) -> dict:
    return {"n": g.n, "edges": sorted([list(e) for e in g.edges])}


def simple_from_json(d: dict) -> SimpleGraph:
    try:
        return SimpleGraph.make(int(d["n"]), [(int(i), int(j)) for i, j in d.get("edges", [])])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad graph JSON: {exc}") from exc
