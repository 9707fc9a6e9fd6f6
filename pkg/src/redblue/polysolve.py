"""Polynomial list-CSP solver for layered templates.

Three instance-reduction passes (one per upper-block shape), a 2-SAT
solver for the 2-element base, and a pipeline that peels top-down and
replays its reduction log in reverse to reconstruct a total witness.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, Optional, Tuple

import numpy as np

from .decompose import BlockKind, recognize_with_reject
from .errors import InputError, IntractableTemplateError
from .graphs import BLUE, RED, TwoEdgeColouredGraph
from .homsearch import Homomorphism, ListCspInstance, find_hom, verify_hom

HOM_VERTEX = "HomVertex"
MONO_STAR_EDGE = "MonoStarEdge"
BI_STAR_EDGE = "BiStarEdge"


@dataclass(frozen=True)
class StripRecord:
    """One reduction pass: who was removed with what forced images.

    Labels are pre-strip instance labels; `survivors` lists the kept
    vertices in order, defining the relabelling of the reduced instance.
    """

    reason: str
    block: tuple
    removed: tuple
    forced: dict
    pruned: tuple
    survivors: tuple

    def to_json(self) -> dict:
        return {
            "reason": self.reason,
            "block": list(self.block),
            "removed": list(self.removed),
            "forced": {str(v): t for v, t in sorted(self.forced.items())},
            "pruned": [[v, sorted(vals)] for v, vals in self.pruned],
        }


@dataclass(frozen=True)
class ReductionLog:
    n0: int
    records: tuple

    def to_json(self) -> dict:
        return {"instance_size": self.n0, "steps": [r.to_json() for r in self.records]}


def replay_witness(log: ReductionLog, base_map: Dict[int, int]) -> Dict[int, int]:
    """Undo the relabellings in reverse, merging forced images back in."""
    cur = dict(base_map)
    for rec in reversed(log.records):
        prev = {rec.survivors[i]: img for i, img in cur.items()}
        prev.update(rec.forced)
        cur = prev
    return cur


def restrict_instance(inst: ListCspInstance, keep: Iterable[int]) -> ListCspInstance:
    keep = sorted(keep)
    return ListCspInstance(
        inst.graph.induced(keep), tuple(inst.lists[v] for v in keep)
    )


def alternating_reach(g: TwoEdgeColouredGraph, start: int, first_colour: str):
    """Vertices reachable from `start` by walks whose edge colours strictly
    alternate, beginning with `first_colour`; parities from shortest such
    walks.  `start` itself is reached at parity 0.  A *-edge may be used
    as either colour."""
    if first_colour not in (RED, BLUE):
        raise InputError(f"unknown colour {first_colour!r}")
    return _alt_reach(g, range(g.n), start, first_colour)


def _alt_reach(g, live, start, first_colour):
    live = set(live)
    mats = {RED: g.red, BLUE: g.blue}
    # state = (vertex, parity); the edge colour out of parity p alternates
    colour_out = {0: first_colour, 1: BLUE if first_colour == RED else RED}
    dist = {(start, 0): 0}
    frontier = [(start, 0)]
    while frontier:
        nxt = []
        for v, p in frontier:
            row = mats[colour_out[p]][v]
            for w in np.flatnonzero(row):
                w = int(w)
                if w in live and (w, 1 - p) not in dist:
                    dist[(w, 1 - p)] = dist[(v, p)] + 1
                    nxt.append((w, 1 - p))
        frontier = nxt
    parity: Dict[int, int] = {}
    for (v, p), d in sorted(dist.items(), key=lambda kv: kv[1]):
        if v not in parity:
            parity[v] = p
    return frozenset(parity), parity


def solve_base2(inst: ListCspInstance, template: TwoEdgeColouredGraph) -> Optional[Homomorphism]:
    """List homomorphism into a template on at most two vertices, by 2-SAT.

    One boolean per instance vertex; lists and loops give unit clauses,
    every instance edge forbids the template non-edges of its colours.
    Solved via strongly connected components of the implication graph.
    """
    if template.n > 2:
        raise InputError("base solver wants a template on at most 2 vertices")
    g = inst.graph
    if g.n == 0:
        return Homomorphism(())
    if template.n == 0:
        return None
    if template.n == 1:
        t0 = template.colours(0, 0)
        if any(0 not in l for l in inst.lists):
            return None
        for u in range(g.n):
            for v in range(u, g.n):
                if not g.colours(u, v) <= t0:
                    return None
        return Homomorphism((0,) * g.n)

    # literals: 2v means "v -> 1", 2v+1 means "v -> 0"
    nlit = 2 * g.n
    imp = [[] for _ in range(nlit)]

    def lit(v: int, val: int) -> int:
        return 2 * v if val == 1 else 2 * v + 1

    def clause(l1: int, l2: int) -> None:
        imp[l1 ^ 1].append(l2)
        imp[l2 ^ 1].append(l1)

    ok_pairs = {}
    for s in (0, 1):
        for t in (0, 1):
            ok_pairs[(s, t)] = template.colours(s, t)

    for v in range(g.n):
        allowed = set(inst.lists[v]) & {0, 1}
        loop = g.colours(v, v)
        allowed = {t for t in allowed if loop <= ok_pairs[(t, t)]}
        if not allowed:
            return None
        if len(allowed) == 1:
            (t,) = allowed
            clause(lit(v, t), lit(v, t))

    for u in range(g.n):
        for v in range(u + 1, g.n):
            cs = g.colours(u, v)
            if not cs:
                continue
            for s in (0, 1):
                for t in (0, 1):
                    if not cs <= ok_pairs[(s, t)]:
                        clause(lit(u, s) ^ 1, lit(v, t) ^ 1)

    comp = _tarjan_scc(imp)
    vals = []
    for v in range(g.n):
        if comp[lit(v, 1)] == comp[lit(v, 0)]:
            return None
        vals.append(1 if comp[lit(v, 1)] < comp[lit(v, 0)] else 0)
    hom = Homomorphism(tuple(vals))
    bad = verify_hom(inst, template, hom)
    assert bad is None, f"base solver produced an invalid map: {bad}"
    return hom


def _tarjan_scc(adj) -> list:
    """Component ids in reverse topological order (iterative Tarjan)."""
    n = len(adj)
    index = [-1] * n
    low = [0] * n
    onstack = [False] * n
    stack: list = []
    comp = [-1] * n
    ncomp = 0
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
                while True:
                    w = stack.pop()
                    onstack[w] = False
                    comp[w] = ncomp
                    if w == v:
                        break
                ncomp += 1
            if work:
                u, _ = work[-1]
                low[u] = min(low[u], low[v])
    return comp


def _pair_hom(
    g: TwoEdgeColouredGraph,
    vertices: Iterable[int],
    lists: Dict[int, frozenset],
    template: TwoEdgeColouredGraph,
    h1: int,
    h2: int,
) -> Optional[Dict[int, int]]:
    """List hom of g[vertices] into template[{h1,h2}], as an original-label
    dict, or None."""
    a, b = sorted((h1, h2))
    vs = sorted(vertices)
    sub = g.induced(vs)
    local_lists = []
    for v in vs:
        l = set()
        if a in lists[v]:
            l.add(0)
        if b in lists[v]:
            l.add(1)
        local_lists.append(frozenset(l))
    hom = solve_base2(ListCspInstance(sub, tuple(local_lists)), template.induced([a, b]))
    if hom is None:
        return None
    return {v: (a, b)[hom[i]] for i, v in enumerate(vs)}


def _check_block_homogeneous(template, universe, block) -> None:
    bs = set(block)
    for u in bs:
        for w in universe:
            if w in bs:
                continue
            if template.colours(u, w) != template.colours(u, u):
                raise InputError(f"{sorted(bs)} is not homogeneous in the given template")


def _finish(inst, live, lists, reason, block, forced, pruned) -> Tuple[ListCspInstance, StripRecord]:
    survivors = tuple(sorted(live))
    rec = StripRecord(
        reason=reason,
        block=tuple(sorted(block)),
        removed=tuple(sorted(forced)),
        forced=dict(forced),
        pruned=tuple(pruned),
        survivors=survivors,
    )
    reduced = ListCspInstance(
        inst.graph.induced(survivors), tuple(frozenset(lists[v]) for v in survivors)
    )
    return reduced, rec


def strip_homogeneous_vertex(
    inst: ListCspInstance,
    template: TwoEdgeColouredGraph,
    h: int,
    universe: Optional[Iterable[int]] = None,
) -> Tuple[ListCspInstance, StripRecord]:
    """Single reduction pass for a homogeneous single-loop vertex h.

    For blue-looped h: a vertex meeting any red instance edge loses h
    from its list; otherwise, if h is listed, the vertex is deleted and
    forced to h (sound: blue edges are satisfied whatever the neighbour
    gets).  Symmetric for red-looped h.  `universe` is the set of
    template vertices still in play; defaults to all of them.
    """
    universe = list(range(template.n)) if universe is None else sorted(universe)
    loop = template.colours(h, h)
    if len(loop) != 1:
        raise InputError("strip wants a vertex with a single-colour loop")
    _check_block_homogeneous(template, universe, (h,))
    bad = template.red if loop == {BLUE} else template.blue
    g = inst.graph
    bad_mat = g.red if loop == {BLUE} else g.blue

    lists = {v: set(inst.lists[v]) for v in range(g.n)}
    forced: Dict[int, int] = {}
    pruned = []
    live = set(lists)
    for u in range(g.n):
        if bad_mat[u].any():
            if h in lists[u]:
                lists[u].discard(h)
                pruned.append((u, (h,)))
        elif h in lists[u]:
            forced[u] = h
            live.discard(u)
    return _finish(inst, live, lists, HOM_VERTEX, (h,), forced, pruned)


def strip_mono_star_edge(
    inst: ListCspInstance,
    template: TwoEdgeColouredGraph,
    h1: int,
    h2: int,
    universe: Optional[Iterable[int]] = None,
) -> Tuple[ListCspInstance, StripRecord]:
    """Reduction pass for a homogeneous *-edge whose ends share a loop
    colour.  With blue loops, each red-edge component of the instance
    either maps wholly onto {h1,h2} (then it is deleted with that map)
    or can use neither vertex (then both leave its lists); symmetric
    with blue components for red loops."""
    universe = list(range(template.n)) if universe is None else sorted(universe)
    l1, l2 = template.colours(h1, h1), template.colours(h2, h2)
    if not (l1 == l2 and len(l1) == 1 and template.colours(h1, h2) == {BLUE, RED}):
        raise InputError("strip wants a *-edge with equal single-colour loops")
    _check_block_homogeneous(template, universe, (h1, h2))
    g = inst.graph
    comp_mat = g.red if l1 == {BLUE} else g.blue

    seen = set()
    comps = []
    for v in range(g.n):
        if v in seen:
            continue
        stack, comp = [v], {v}
        seen.add(v)
        while stack:
            u = stack.pop()
            for w in np.flatnonzero(comp_mat[u]):
                w = int(w)
                if w not in seen:
                    seen.add(w)
                    comp.add(w)
                    stack.append(w)
        comps.append(sorted(comp))

    lists = {v: set(inst.lists[v]) for v in range(g.n)}
    forced: Dict[int, int] = {}
    pruned = []
    live = set(lists)
    for comp in comps:
        phi = _pair_hom(g, comp, inst.lists, template, h1, h2)
        if phi is not None:
            forced.update(phi)
            live.difference_update(comp)
        else:
            for v in comp:
                gone = lists[v] & {h1, h2}
                if gone:
                    lists[v] -= gone
                    pruned.append((v, tuple(sorted(gone))))
    return _finish(inst, live, lists, MONO_STAR_EDGE, (h1, h2), forced, pruned)


def strip_bi_star_edge(
    inst: ListCspInstance,
    template: TwoEdgeColouredGraph,
    h1: int,
    h2: int,
    universe: Optional[Iterable[int]] = None,
) -> Tuple[ListCspInstance, StripRecord]:
    """Reduction pass for a homogeneous bichromatic *-edge: h1 blue-looped,
    h2 red-looped.  While some vertex g lists h1, its red-first
    alternating reach is mapped by parity (even to h1, odd to h2); if
    that respects lists and edges the whole reach is deleted, otherwise
    g alone loses h1.  Then the symmetric loop for h2 with blue-first
    reaches."""
    universe = list(range(template.n)) if universe is None else sorted(universe)
    if template.colours(h1, h1) != {BLUE} or template.colours(h2, h2) != {RED}:
        raise InputError("strip wants a blue-looped h1 and a red-looped h2")
    if template.colours(h1, h2) != {BLUE, RED}:
        raise InputError("strip wants a *-edge h1h2")
    _check_block_homogeneous(template, universe, (h1, h2))
    g = inst.graph

    lists = {v: set(inst.lists[v]) for v in range(g.n)}
    forced: Dict[int, int] = {}
    pruned = []
    live = set(lists)

    for anchor, first, even_img, odd_img in (
        (h1, RED, h1, h2),
        (h2, BLUE, h2, h1),
    ):
        while True:
            cands = [v for v in sorted(live) if anchor in lists[v]]
            if not cands:
                break
            start = cands[0]
            reach, parity = _alt_reach(g, live, start, first)
            target = {v: even_img if parity[v] == 0 else odd_img for v in reach}
            ok = all(target[v] in lists[v] for v in reach)
            if ok:
                for u in sorted(reach):
                    for w in sorted(reach):
                        if w < u:
                            continue
                        if not g.colours(u, w) <= template.colours(target[u], target[w]):
                            ok = False
                            break
                    if not ok:
                        break
            if ok:
                forced.update(target)
                live.difference_update(reach)
            else:
                lists[start].discard(anchor)
                pruned.append((start, (anchor,)))
    return _finish(inst, live, lists, BI_STAR_EDGE, (h1, h2), forced, pruned)


_STRIP_OF_KIND = {
    BlockKind.SINGLE_BLUE_LOOP: "single",
    BlockKind.SINGLE_RED_LOOP: "single",
    BlockKind.MONO_STAR_EDGE_RED: "mono",
    BlockKind.MONO_STAR_EDGE_BLUE: "mono",
    BlockKind.BICHROMATIC_STAR_EDGE: "bi",
}


def _pipeline(template, inst, decomp):
    """Peel upper blocks top-down, solve the base, rebuild the witness."""
    blocks = decomp.blocks
    cur = inst
    records = []
    universe = set(v for b in blocks for v in b.vertices)
    for block in reversed(blocks[1:]):
        kind = _STRIP_OF_KIND[block.kind]
        if kind == "single":
            cur, rec = strip_homogeneous_vertex(cur, template, block.vertices[0], universe)
        elif kind == "mono":
            h1, h2 = block.vertices
            cur, rec = strip_mono_star_edge(cur, template, h1, h2, universe)
        else:
            u, v = block.vertices
            h1, h2 = (u, v) if template.colours(u, u) == {BLUE} else (v, u)
            cur, rec = strip_bi_star_edge(cur, template, h1, h2, universe)
        records.append(rec)
        universe.difference_update(block.vertices)
        if any(not l for l in cur.lists):
            return None, ReductionLog(inst.graph.n, tuple(records))

    log = ReductionLog(inst.graph.n, tuple(records))
    base = blocks[0].vertices if blocks else ()
    if cur.graph.n == 0:
        base_map: Dict[int, int] = {}
    elif len(base) == 1:
        t = base[0]
        if any(t not in l for l in cur.lists):
            return None, log
        tc = template.colours(t, t)
        for u in range(cur.graph.n):
            for v in range(u, cur.graph.n):
                if not cur.graph.colours(u, v) <= tc:
                    return None, log
        base_map = {v: t for v in range(cur.graph.n)}
    else:
        phi = _pair_hom(cur.graph, range(cur.graph.n), dict(enumerate(cur.lists)), template, *base)
        if phi is None:
            return None, log
        base_map = phi
    total = replay_witness(log, base_map)
    hom = Homomorphism(tuple(total[v] for v in range(inst.graph.n)))
    bad = verify_hom(inst, template, hom)
    assert bad is None, f"pipeline produced an invalid witness: {bad}"
    return hom, log


def _uniform_fibres(template, retraction) -> bool:
    r = np.fromiter((retraction[v] for v in range(template.n)), dtype=int, count=template.n)
    return bool(
        np.array_equal(template.blue, template.blue[r][:, r])
        and np.array_equal(template.red, template.red[r][:, r])
    )


def solve_list_csp(template: TwoEdgeColouredGraph, inst: ListCspInstance) -> Optional[Homomorphism]:
    """Decide a list instance over a tractable template; return a verified
    witness or None.

    Raises IntractableTemplateError when the recognizer rejects the
    template.  When the recognizer folds the template onto a proper
    subset, full-list instances and uniform-fibre retractions (every
    pair keeps its colours under the fold) are solved through the folded
    template; remaining genuinely-listed cases fall back to exact
    search, since the folding is only guaranteed to preserve full-list
    instances.
    """
    if len(inst.lists) != inst.graph.n:
        raise InputError("instance lists must cover every vertex")
    if any(t < 0 or t >= template.n for l in inst.lists for t in l):
        raise InputError("lists mention vertices outside the template")
    decomp, reject = recognize_with_reject(template)
    if decomp is None:
        raise IntractableTemplateError(
            f"template is NP-complete ({reject.reason} at {list(reject.remaining)})"
        )
    if inst.graph.n == 0:
        return Homomorphism(())

    if decomp.is_identity():
        hom, _ = _pipeline(template, inst, decomp)
        return hom

    covered = decomp.covered()
    pos = {t: i for i, t in enumerate(covered)}
    sub = template.induced(covered)
    full = frozenset(range(template.n))
    if all(l == full for l in inst.lists):
        sub_inst = ListCspInstance(
            inst.graph, tuple(frozenset(range(sub.n)) for _ in range(inst.graph.n))
        )
        hom = solve_list_csp(sub, sub_inst)
        if hom is None:
            return None
        return Homomorphism(tuple(covered[hom[v]] for v in range(inst.graph.n)))
    if _uniform_fibres(template, decomp.retraction):
        r = decomp.retraction
        sub_inst = ListCspInstance(
            inst.graph,
            tuple(frozenset(pos[r[t]] for t in l) for l in inst.lists),
        )
        hom = solve_list_csp(sub, sub_inst)
        if hom is None:
            return None
        vals = []
        for v in range(inst.graph.n):
            img = covered[hom[v]]
            vals.append(min(t for t in inst.lists[v] if r[t] == img))
        lifted = Homomorphism(tuple(vals))
        bad = verify_hom(inst, template, lifted)
        assert bad is None, f"lifted witness invalid: {bad}"
        return lifted
    return find_hom(inst, template)


def solve_with_log(template: TwoEdgeColouredGraph, inst: ListCspInstance):
    """Like solve_list_csp, but also expose the reduction log when the
    direct pipeline ran (None otherwise)."""
    decomp, reject = recognize_with_reject(template)
    if decomp is None:
        raise IntractableTemplateError(
            f"template is NP-complete ({reject.reason} at {list(reject.remaining)})"
        )
    if decomp.is_identity() and inst.graph.n > 0:
        return _pipeline(template, inst, decomp)
    return solve_list_csp(template, inst), None
