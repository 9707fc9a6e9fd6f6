"""Homomorphism search, cores and polymorphisms.

The search engine is a plain backtracker over per-vertex candidate sets
(bitmask domains) with AC-3 propagation.  It is deterministic: variables
are branched lowest index first, values lowest first, so the first
witness found is the lexicographically least one.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

import numpy as np

from .errors import BudgetExceeded, GuardExceeded, InputError
from .graphs import (
    BLUE,
    RED,
    QuotientPower,
    TwoEdgeColouredGraph,
    cyclic_power,
    index_tuple,
    power,
    siggers_power,
    tuple_index,
)

MAX_CORE_N = 12


@dataclass(frozen=True)
class ListCspInstance:
    """An input graph plus, per vertex, the set of allowed template vertices."""

    graph: TwoEdgeColouredGraph
    lists: tuple

    def __post_init__(self):
        if len(self.lists) != self.graph.n:
            raise InputError("one list per instance vertex required")


def full_instance(g: TwoEdgeColouredGraph, template_n: int) -> ListCspInstance:
    full = frozenset(range(template_n))
    return ListCspInstance(g, tuple(full for _ in range(g.n)))


def with_lists(g: TwoEdgeColouredGraph, lists: Iterable[Iterable[int]]) -> ListCspInstance:
    return ListCspInstance(g, tuple(frozenset(l) for l in lists))


@dataclass(frozen=True)
class Homomorphism:
    """Total map instance vertex -> template vertex."""

    map: tuple

    def __getitem__(self, v: int) -> int:
        return self.map[v]

    def to_json(self) -> list:
        return list(self.map)


def verify_hom(
    inst: ListCspInstance, template: TwoEdgeColouredGraph, hom: Homomorphism
) -> Optional[str]:
    """None when hom is a list-respecting homomorphism, else a reason."""
    g = inst.graph
    if len(hom.map) != g.n:
        return "map is not total"
    for v, t in enumerate(hom.map):
        if not 0 <= t < template.n:
            return f"vertex {v} mapped outside the template"
        if t not in inst.lists[v]:
            return f"vertex {v} mapped off its list"
    for u in range(g.n):
        for v in range(u, g.n):
            if g.blue[u, v] and not template.blue[hom.map[u], hom.map[v]]:
                return f"blue edge ({u},{v}) not preserved"
            if g.red[u, v] and not template.red[hom.map[u], hom.map[v]]:
                return f"red edge ({u},{v}) not preserved"
    return None


def _masks(template: TwoEdgeColouredGraph) -> dict:
    """Per-colour, per-vertex neighbour bitmasks of the template."""
    out = {BLUE: [], RED: []}
    for x in range(template.n):
        b = r = 0
        for y in range(template.n):
            if template.blue[x, y]:
                b |= 1 << y
            if template.red[x, y]:
                r |= 1 << y
        out[BLUE].append(b)
        out[RED].append(r)
    return out


class _Search:
    """Backtracking list-homomorphism search with AC-3 propagation."""

    def __init__(self, inst: ListCspInstance, template: TwoEdgeColouredGraph):
        self.template = template
        g = inst.graph
        self.k = g.n
        masks = _masks(template)
        full = (1 << template.n) - 1

        # unary: lists and instance loops
        self.domains = []
        for v in range(self.k):
            d = 0
            for t in inst.lists[v]:
                if 0 <= t < template.n:
                    d |= 1 << t
            if g.blue[v, v]:
                d &= sum(1 << x for x in range(template.n) if template.blue[x, x])
            if g.red[v, v]:
                d &= sum(1 << x for x in range(template.n) if template.red[x, x])
            self.domains.append(d & full)

        # binary: per directed instance edge, allowed partner mask per value
        self.allowed: dict = {}
        self.neigh: list = [[] for _ in range(self.k)]
        for u in range(self.k):
            for v in range(u + 1, self.k):
                cols = [c for c, m in ((BLUE, g.blue), (RED, g.red)) if m[u, v]]
                if not cols:
                    continue
                per_value = []
                for x in range(template.n):
                    m = full
                    for c in cols:
                        m &= masks[c][x]
                    per_value.append(m)
                self.allowed[(u, v)] = per_value
                self.allowed[(v, u)] = per_value  # symmetric relations
                self.neigh[u].append(v)
                self.neigh[v].append(u)

        self.nodes = 0

    def _revise(self, doms: list, u: int, v: int) -> bool:
        """Drop values of u without a partner in v's domain; True on change."""
        per_value = self.allowed[(u, v)]
        old = doms[u]
        new = 0
        d = old
        while d:
            low = d & -d
            x = low.bit_length() - 1
            if per_value[x] & doms[v]:
                new |= low
            d ^= low
        doms[u] = new
        return new != old

    def _propagate(self, doms: list) -> bool:
        queue = [(u, v) for (u, v) in self.allowed]
        while queue:
            u, v = queue.pop()
            if self._revise(doms, u, v):
                if doms[u] == 0:
                    return False
                queue.extend((w, u) for w in self.neigh[u] if w != v)
        return True

    def solutions(self, budget: Optional[int] = None) -> Iterator[tuple]:
        doms = list(self.domains)
        if not self._propagate(doms):
            return
        yield from self._extend(doms, 0, budget)

    def _extend(self, doms: list, v: int, budget: Optional[int]) -> Iterator[tuple]:
        if v == self.k:
            yield tuple(d.bit_length() - 1 for d in doms)
            return
        if doms[v].bit_count() == 1:
            yield from self._extend(doms, v + 1, budget)
            return
        d = doms[v]
        while d:
            low = d & -d
            d ^= low
            self.nodes += 1
            if budget is not None and self.nodes > budget:
                raise BudgetExceeded(f"search exceeded {budget} nodes")
            trial = list(doms)
            trial[v] = low
            ok = True
            queue = [(w, v) for w in self.neigh[v]]
            while queue and ok:
                a, b = queue.pop()
                if self._revise(trial, a, b):
                    if trial[a] == 0:
                        ok = False
                    else:
                        queue.extend((w, a) for w in self.neigh[a] if w != b)
            if ok:
                yield from self._extend(trial, v + 1, budget)


def find_hom(
    inst: ListCspInstance,
    template: TwoEdgeColouredGraph,
    budget: Optional[int] = None,
) -> Optional[Homomorphism]:
    """Lexicographically least list-respecting homomorphism, or None.

    Raises BudgetExceeded when the node budget runs out — that outcome is
    distinct from "no homomorphism exists".
    """
    for sol in _Search(inst, template).solutions(budget):
        return Homomorphism(sol)
    return None


def all_homs(
    inst: ListCspInstance, template: TwoEdgeColouredGraph, budget: Optional[int] = None
) -> Iterator[Homomorphism]:
    for sol in _Search(inst, template).solutions(budget):
        yield Homomorphism(sol)


def endomorphisms(h: TwoEdgeColouredGraph) -> list[Homomorphism]:
    """All endomorphisms, lexicographic by mapping. Exponential; guarded."""
    if h.n > MAX_CORE_N:
        raise GuardExceeded(f"endomorphism enumeration guard: n={h.n} > {MAX_CORE_N}")
    return list(all_homs(full_instance(h, h.n), h))


def automorphisms(h: TwoEdgeColouredGraph) -> list[Homomorphism]:
    return [e for e in endomorphisms(h) if len(set(e.map)) == h.n]


def core_of(h: TwoEdgeColouredGraph) -> tuple:
    """(core vertex set, retraction) with the retraction fixing the core pointwise.

    Repeatedly drops any vertex whose removal leaves a hom-equivalent
    substructure; the final retraction is normalised to the identity on
    the kept vertices.  Exponential in the worst case; guarded.
    """
    if h.n > MAX_CORE_N:
        raise GuardExceeded(f"core_of guard: n={h.n} > {MAX_CORE_N}")
    kept = list(range(h.n))
    retract = {v: v for v in range(h.n)}
    changed = True
    while changed:
        changed = False
        for v in list(kept):
            rest = [w for w in kept if w != v]
            sub = h.induced(kept)
            pos = {w: i for i, w in enumerate(sorted(kept))}
            lists = tuple(frozenset(pos[w] for w in rest) for _ in range(len(kept)))
            hom = find_hom(ListCspInstance(sub, lists), sub)
            if hom is not None:
                back = sorted(kept)
                f = {w: back[hom.map[pos[w]]] for w in kept}
                retract = {u: f[retract[u]] for u in retract}
                kept = sorted(rest)
                changed = True
                break
    # normalise: the retraction restricted to the core is an automorphism
    sub = h.induced(kept)
    pos = {w: i for i, w in enumerate(sorted(kept))}
    perm = {w: retract[w] for w in kept}
    inv = {b: a for a, b in perm.items()}
    retract = {u: inv[retract[u]] for u in retract}
    assert all(retract[w] == w for w in kept)
    # sanity: still a homomorphism
    mapping = Homomorphism(tuple(pos[retract[u]] for u in range(h.n)))
    err = verify_hom(full_instance(h, sub.n), sub, mapping)
    assert err is None, err
    return tuple(sorted(kept)), retract


# -- polymorphisms -------------------------------------------------------


@dataclass(frozen=True)
class Polymorphism:
    """An m-ary operation on a template, as a dense mixed-radix table.

    Tuple (x_0, .., x_{m-1}) lives at index sum x_i * n^i.
    """

    n: int
    arity: int
    table: tuple

    def apply(self, *args: int) -> int:
        if len(args) != self.arity:
            raise InputError(f"expected {self.arity} arguments")
        return self.table[tuple_index(args, self.n)]

    def to_json(self) -> list:
        return list(self.table)


def _hom_on_quotient(
    qp: QuotientPower,
    h: TwoEdgeColouredGraph,
    pins: Optional[dict] = None,
    budget: Optional[int] = None,
) -> Optional[Polymorphism]:
    k = qp.graph.n
    full = frozenset(range(h.n))
    lists = [full] * k
    for c, v in (pins or {}).items():
        lists[c] = frozenset({v})
    hom = find_hom(ListCspInstance(qp.graph, tuple(lists)), h, budget)
    if hom is None:
        return None
    table = tuple(hom.map[int(c)] for c in qp.class_of)
    return Polymorphism(h.n, qp.arity, table)


def find_siggers(
    h: TwoEdgeColouredGraph, idempotent: bool = False, budget: Optional[int] = None
) -> Optional[Polymorphism]:
    """A 4-ary polymorphism with f(a,r,e,a) = f(r,a,r,e), via the quotient
    of H^4 by that identity; with `idempotent`, constant classes are pinned."""
    qp = siggers_power(h)
    pins = None
    if idempotent:
        pins = {qp.class_of_tuple((x, x, x, x)): x for x in range(h.n)}
    return _hom_on_quotient(qp, h, pins, budget)


def find_cyclic(
    h: TwoEdgeColouredGraph, p: int, idempotent: bool = False, budget: Optional[int] = None
) -> Optional[Polymorphism]:
    """A p-ary polymorphism invariant under argument rotation."""
    qp = cyclic_power(h, p)
    pins = None
    if idempotent:
        pins = {qp.class_of_tuple((x,) * p): x for x in range(h.n)}
    return _hom_on_quotient(qp, h, pins, budget)


def build_wnu_pair(h: TwoEdgeColouredGraph, blocks: list) -> tuple:
    """Weak near-unanimity pair (f3, f4) from a layered block structure.

    `blocks` lists the vertex sets bottom-up; every block must have at
    most two elements.  On tuples inside one block, f3 is the majority
    and f4 the near-unanimity value (first coordinate when 2-2 split);
    on tuples meeting several blocks, both return the first coordinate
    lying in the highest block.  Both operations are conservative and
    satisfy f3(y,x,x) = f4(y,x,x,x).
    """
    block_of = {}
    for i, blk in enumerate(blocks):
        if len(blk) > 2:
            raise InputError("wnu construction needs blocks of size <= 2")
        for v in blk:
            if v in block_of:
                raise InputError("blocks must be disjoint")
            block_of[v] = i
    if sorted(block_of) != list(range(h.n)):
        raise InputError("blocks must partition the template vertices")

    def value(args: tuple) -> int:
        levels = [block_of[a] for a in args]
        top = max(levels)
        if min(levels) != top:
            for a, l in zip(args, levels):
                if l == top:
                    return a
        counts = {}
        for a in args:
            counts[a] = counts.get(a, 0) + 1
        need = 2 if len(args) == 3 else 3
        for a in args:
            if counts[a] >= need:
                return a
        return args[0]

    tables = []
    for m in (3, 4):
        table = tuple(value(index_tuple(i, h.n, m)) for i in range(h.n**m))
        tables.append(Polymorphism(h.n, m, table))
    return tables[0], tables[1]


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    failures: tuple

    def __bool__(self):
        return self.ok


def verify_polymorphism(
    h: TwoEdgeColouredGraph,
    f: Polymorphism,
    identities: Iterable[str] = (),
    partner: Optional[Polymorphism] = None,
) -> VerifyResult:
    """Check colour preservation plus the named identities.

    identities from: "wnu", "siggers", "cyclic", "conservative",
    "idempotent", "eq1" (needs `partner` of arity 4 when f has arity 3).
    """
    fails = []
    n, m = f.n, f.arity
    if n != h.n or len(f.table) != n**m:
        return VerifyResult(False, ("malformed table",))
    tab = np.array(f.table)
    pw = power(h, m)
    for cname, pmat, hmat in ((BLUE, pw.blue, h.blue), (RED, pw.red, h.red)):
        img = hmat[tab[:, None], tab[None, :]]
        bad = pmat & ~img
        if bad.any():
            i, j = map(int, np.argwhere(bad)[0])
            fails.append(
                f"{cname} edge {index_tuple(i, n, m)}-{index_tuple(j, n, m)} not preserved"
            )

    idset = {s.lower() for s in identities}
    if "wnu" in idset:
        for x in range(n):
            for y in range(n):
                if x == y:
                    continue
                vals = set()
                for pos in range(m):
                    t = [x] * m
                    t[pos] = y
                    vals.add(f.table[tuple_index(t, n)])
                if len(vals) != 1:
                    fails.append(f"wnu broken at x={x}, y={y}: {sorted(vals)}")
    if "siggers" in idset:
        if m != 4:
            fails.append("siggers needs arity 4")
        else:
            for a, r, e in itertools.product(range(n), repeat=3):
                if f.apply(a, r, e, a) != f.apply(r, a, r, e):
                    fails.append(f"siggers broken at (a,r,e)=({a},{r},{e})")
                    break
    if "cyclic" in idset:
        for i in range(n**m):
            t = index_tuple(i, n, m)
            if f.table[i] != f.table[tuple_index(t[1:] + t[:1], n)]:
                fails.append(f"cyclic broken at {t}")
                break
    if "conservative" in idset:
        for i in range(n**m):
            t = index_tuple(i, n, m)
            if f.table[i] not in t:
                fails.append(f"conservative broken at {t}")
                break
    if "idempotent" in idset:
        for x in range(n):
            if f.apply(*([x] * m)) != x:
                fails.append(f"idempotent broken at {x}")
    if "eq1" in idset:
        if partner is None or {m, partner.arity} != {3, 4}:
            fails.append("eq1 needs a 3-ary and a 4-ary operation")
        else:
            f3, f4 = (f, partner) if m == 3 else (partner, f)
            for x in range(n):
                for y in range(n):
                    if f3.apply(y, x, x) != f4.apply(y, x, x, x):
                        fails.append(f"f3(y,x,x) != f4(y,x,x,x) at x={x}, y={y}")
    return VerifyResult(not fails, tuple(fails))
