"""Dichotomy classification for templates and matrices, and the
full-homomorphism classifiers for graphs with loops.

The P/NP-complete decision always comes from the tractability
recognizer; hardness certificates are attached as explanations when one
can be found at the template's size.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, Iterable, Optional, Tuple

from .decompose import Decomposition, RecognizerReject, recognize_with_reject
from .errors import GuardExceeded, InputError
from .graphs import SimpleGraph, StarMatrix, TwoEdgeColouredGraph, from_matrix
from .hardness import (
    HardnessCertificate,
    MAX_SIGGERS_N,
    cyclic_absence_certificate,
    find_mono_loop_odd_cycle,
    find_pattern_hom,
    find_star_odd_cycle,
    recognizer_reject_certificate,
    siggers_certificate,
)
from .homsearch import ListCspInstance, MAX_CORE_N, core_of

P_TIME = "P"
NP_COMPLETE = "NP-complete"


@dataclass(frozen=True)
class Classification:
    verdict: str
    decomposition: Optional[Decomposition] = None
    certificate: Optional[HardnessCertificate] = None
    core_vertices: Optional[tuple] = None
    core_retraction: Optional[dict] = None
    detail: dict = field(default_factory=dict)

    @property
    def is_p(self) -> bool:
        return self.verdict == P_TIME

    def to_json(self) -> dict:
        out: dict = {"verdict": self.verdict}
        out["decomposition"] = None if self.decomposition is None else self.decomposition.to_json()
        out["certificate"] = None if self.certificate is None else self.certificate.to_json()
        if self.core_vertices is not None:
            out["core"] = {
                "vertices": list(self.core_vertices),
                "retraction": {str(k): v for k, v in sorted(self.core_retraction.items())},
            }
        if self.detail:
            out["detail"] = {
                k: (list(v) if isinstance(v, (tuple, frozenset)) else v)
                for k, v in self.detail.items()
            }
        return out


def cheapest_certificate(h: TwoEdgeColouredGraph) -> Optional[HardnessCertificate]:
    """Least expensive structural evidence: an odd cycle before a pattern
    search before a quotient build (skipped beyond its size guard)."""
    cert = find_star_odd_cycle(h)
    if cert is not None:
        return cert
    cert = find_mono_loop_odd_cycle(h)
    if cert is not None:
        return cert
    cert = find_pattern_hom(h)
    if cert is not None:
        return cert
    if h.n <= MAX_SIGGERS_N:
        return siggers_certificate(h)
    return None


def classify(h: TwoEdgeColouredGraph) -> Classification:
    """P/NP-complete verdict for a reflexive complete template.

    P evidence is the layered decomposition; NP-complete evidence is the
    recognizer's failure state, decorated with the cheapest structural
    certificate available at this size.
    """
    if not (h.is_reflexive() and h.is_complete()):
        raise InputError("classification needs a reflexive complete template")
    decomp, reject = recognize_with_reject(h)
    if decomp is not None:
        if h.n <= MAX_CORE_N:
            kept, retr = core_of(h)
            method = "exact"
        else:
            kept, retr = decomp.covered(), dict(decomp.retraction)
            method = "folded"
        return Classification(
            P_TIME,
            decomposition=decomp,
            core_vertices=tuple(kept),
            core_retraction=dict(retr),
            detail={"core_method": method},
        )
    cert = cheapest_certificate(h)
    if cert is None:
        try:
            cert = cyclic_absence_certificate(h)
        except GuardExceeded:
            cert = None
    if cert is None:
        cert = recognizer_reject_certificate(h, reject)
    return Classification(NP_COMPLETE, certificate=cert, detail={"reject": reject.to_json()})


def classify_matrix(m: StarMatrix) -> Classification:
    return classify(from_matrix(m))


def _mergeable(adj: Dict[int, set], loops: set, u: int, v: int) -> bool:
    """u and v can be identified by a full-homomorphism: same loop status,
    edge uv exactly when they are looped, and identical neighbourhoods
    elsewhere."""
    if (u in loops) != (v in loops):
        return False
    if (v in adj[u]) != (u in loops):
        return False
    return adj[u] - {u, v} == adj[v] - {u, v}


def point_determining_core(g: SimpleGraph) -> Tuple[SimpleGraph, Dict[int, int]]:
    """Contract mergeable pairs (smallest pair first) until none remain;
    returns the reduced graph and the composed contraction map onto its
    relabelled vertices."""
    live = sorted(range(g.n))
    adj = {v: set() for v in live}
    loops = set()
    for a, b in g.edges:
        if a == b:
            loops.add(a)
        else:
            adj[a].add(b)
            adj[b].add(a)
    target = {v: v for v in range(g.n)}
    while True:
        pair = None
        for u, v in combinations(live, 2):
            if _mergeable(adj, loops, u, v):
                pair = (u, v)
                break
        if pair is None:
            break
        u, v = pair
        for w in adj[v]:
            adj[w].discard(v)
        del adj[v]
        loops.discard(v)
        live.remove(v)
        for x in target:
            if target[x] == v:
                target[x] = u
    pos = {v: i for i, v in enumerate(live)}
    edges = [(pos[a], pos[b]) for a in live for b in adj[a] if a <= b]
    edges += [(pos[a], pos[a]) for a in live if a in loops]
    core = SimpleGraph.make(len(live), edges)
    return core, {x: pos[target[x]] for x in range(g.n)}


def is_k3_2k2_p4_free(g: SimpleGraph):
    """(True, None) or (False, (name, vertices)) for the first induced
    triangle, pair of independent edges, or 4-vertex path."""
    if any(a == b for a, b in g.edges):
        raise InputError("freeness test applies to loopless graphs")
    adj = g.adjacency()
    for tri in combinations(range(g.n), 3):
        a, b, c = tri
        if adj[a, b] and adj[a, c] and adj[b, c]:
            return False, ("K3", tri)
    for quad in combinations(range(g.n), 4):
        inside = [(a, b) for a, b in combinations(quad, 2) if adj[a, b]]
        degs = sorted(sum(1 for e in inside if v in e) for v in quad)
        if len(inside) == 2 and degs == [1, 1, 1, 1]:
            return False, ("2K2", quad)
        if len(inside) == 3 and degs == [1, 1, 2, 2]:
            return False, ("P4", quad)
    return True, None


def _peel_fullhom(g: SimpleGraph, order: Optional[Iterable[int]] = None):
    """Greedily remove loopless isolated vertices and dominant loops;
    returns (residue vertex list, removal order)."""
    live = set(range(g.n))
    adj = {v: set() for v in live}
    loops = set()
    for a, b in g.edges:
        if a == b:
            loops.add(a)
        else:
            adj[a].add(b)
            adj[b].add(a)
    preference = list(order) if order is not None else sorted(live)
    removed = []
    while True:
        pick = None
        for v in preference:
            if v not in live:
                continue
            nbrs = adj[v] & live
            if v not in loops and not nbrs:
                pick = v
                break
            if v in loops and nbrs == live - {v}:
                pick = v
                break
        if pick is None:
            break
        live.discard(pick)
        removed.append(pick)
    return sorted(live), removed


def _residue_ok(g: SimpleGraph, residue) -> bool:
    if len(residue) > 2:
        return False
    if len(residue) < 2:
        return True
    u, v = residue
    looped = {a for a, b in g.edges if a == b}
    edge = (min(u, v), max(u, v)) in {tuple(sorted(e)) for e in g.edges}
    if edge:
        return u not in looped and v not in looped  # K2
    return u in looped and v in looped  # 2L


def classify_fullhom_sandwich(g: SimpleGraph) -> Classification:
    """P/NP-complete verdict for the full-homomorphism sandwich problem of
    a graph with loops.

    The point-determining reduct is peeled from the outside (loopless
    isolated vertices and dominant loops, smallest first); polynomial
    exactly when the stuck residue is at most one vertex, a plain edge,
    or two looped non-neighbours.  Loopless inputs are cross-checked
    against the forbidden-subgraph characterization.
    """
    core, cmap = point_determining_core(g)
    residue, removed = _peel_fullhom(core)
    ok = _residue_ok(core, residue)
    detail: dict = {
        "pd_core_size": core.n,
        "peeled": removed,
        "residue": residue,
    }
    if not any(a == b for a, b in g.edges):
        free, witness = is_k3_2k2_p4_free(g)
        assert free == ok, (
            "peeling and forbidden-subgraph characterizations disagree "
            f"on a loopless graph: peel={ok}, free={free}"
        )
        if witness is not None:
            detail["forbidden"] = {"shape": witness[0], "vertices": list(witness[1])}
    return Classification(
        P_TIME if ok else NP_COMPLETE,
        core_vertices=tuple(range(core.n)),
        core_retraction=dict(cmap),
        detail=detail,
    )


def verify_full_hom(g, h, f) -> Optional[str]:
    """None when f preserves adjacency and non-adjacency exactly (colour
    by colour on coloured graphs, edge/non-edge on plain ones)."""
    try:
        fv = [f[v] for v in range(g.n)]
    except (KeyError, IndexError):
        return "map does not cover every vertex"
    if any(not (0 <= x < h.n) for x in fv):
        return "map leaves the target"
    coloured = hasattr(g, "colours")
    for u in range(g.n):
        for v in range(u, g.n):
            if coloured:
                if g.colours(u, v) != h.colours(fv[u], fv[v]):
                    return (
                        f"pair {u},{v}: colours {sorted(g.colours(u, v))} "
                        f"vs {sorted(h.colours(fv[u], fv[v]))}"
                    )
            elif g.has_edge(u, v) != h.has_edge(fv[u], fv[v]):
                return f"pair {u},{v}: adjacency not preserved exactly"
    return None


def shrink_lists_via_fullhom(
    g: TwoEdgeColouredGraph,
    h: TwoEdgeColouredGraph,
    f,
    inst: ListCspInstance,
) -> ListCspInstance:
    """Push an instance's lists (over template g) through a full
    homomorphism g -> h; answers are preserved because fibres of a full
    hom carry identical colour patterns."""
    bad = verify_full_hom(g, h, f)
    if bad is not None:
        raise InputError(f"not a full homomorphism: {bad}")
    lists = tuple(frozenset(f[t] for t in l) for l in inst.lists)
    return ListCspInstance(inst.graph, lists)
