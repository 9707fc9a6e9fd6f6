"""Graph sandwich problems for matrix partitions.

A sandwich instance fixes mandatory edges E1 inside allowed edges E2;
the question is whether some graph between them admits an M-partition.
Mandatory pairs become blue, forbidden pairs red, and the whole thing is
a CSP over the matrix's coloured graph.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Dict, FrozenSet, Optional, Tuple

from .classify import classify
from .errors import GuardExceeded, InputError, IntractableTemplateError, OpenRegimeError
from .graphs import StarMatrix, TwoEdgeColouredGraph, from_matrix, make_graph
from .homsearch import ListCspInstance, core_of, find_hom

MAX_FREE_PAIRS = 20

Edge = Tuple[int, int]


def _norm_edges(n: int, pairs) -> FrozenSet[Edge]:
    out = set()
    for a, b in pairs:
        if not (0 <= a < n and 0 <= b < n):
            raise InputError(f"edge {(a, b)} outside 0..{n - 1}")
        if a == b:
            raise InputError("sandwich graphs are loopless")
        out.add((min(a, b), max(a, b)))
    return frozenset(out)


@dataclass(frozen=True)
class SandwichInstance:
    n: int
    mandatory: FrozenSet[Edge]
    allowed: FrozenSet[Edge]
    lists: Optional[tuple] = None

    @staticmethod
    def make(n, mandatory, allowed, lists=None) -> "SandwichInstance":
        e1 = _norm_edges(n, mandatory)
        e2 = _norm_edges(n, allowed)
        if not e1 <= e2:
            raise InputError("mandatory edges must be a subset of allowed edges")
        if lists is not None:
            lists = tuple(frozenset(l) for l in lists)
            if len(lists) != n:
                raise InputError("need one list per vertex")
        return SandwichInstance(n, e1, e2, lists)

    def to_json(self) -> dict:
        out = {
            "n": self.n,
            "mandatory": [list(e) for e in sorted(self.mandatory)],
            "allowed": [list(e) for e in sorted(self.allowed)],
        }
        if self.lists is not None:
            out["lists"] = {str(v): sorted(l) for v, l in enumerate(self.lists)}
        return out

    @staticmethod
    def from_json(data: dict) -> "SandwichInstance":
        lists = None
        if "lists" in data and data["lists"] is not None:
            raw = data["lists"]
            lists = [frozenset(raw.get(str(v), [])) for v in range(int(data["n"]))]
        return SandwichInstance.make(
            int(data["n"]), data.get("mandatory", []), data.get("allowed", []), lists
        )


def to_csp_instance(s: SandwichInstance, parts: int) -> ListCspInstance:
    """Blue the mandatory pairs, red the excluded pairs; lists pass
    through (full when absent).  The result is loopless and *-edge-free."""
    blue = list(s.mandatory)
    red = [
        (a, b) for a, b in combinations(range(s.n), 2) if (a, b) not in s.allowed
    ]
    g = make_graph(s.n, blue, red)
    lists = s.lists if s.lists is not None else tuple(
        frozenset(range(parts)) for _ in range(s.n)
    )
    return ListCspInstance(g, lists)


def _witness_edges(m: StarMatrix, s: SandwichInstance, f) -> FrozenSet[Edge]:
    out = set()
    for a, b in combinations(range(s.n), 2):
        entry = m.entries[f[a]][f[b]]
        if entry == "1" or (entry == "*" and (a, b) in s.mandatory):
            out.add((a, b))
    return frozenset(out)


def verify_mpartition(m: StarMatrix, n: int, edges: FrozenSet[Edge], f) -> Optional[str]:
    """None when f is an M-partition of (n, edges), else the offending pair."""
    for a, b in combinations(range(n), 2):
        entry = m.entries[f[a]][f[b]]
        if (a, b) in edges:
            if entry == "0":
                return f"edge {a},{b} lands on a 0 entry"
        elif entry == "1":
            return f"non-edge {a},{b} lands on a 1 entry"
    return None


def _check_witness(m, s, f, edges) -> None:
    assert s.mandatory <= edges <= s.allowed, "witness leaves the sandwich bounds"
    bad = verify_mpartition(m, s.n, edges, f)
    assert bad is None, f"witness fails the partition condition: {bad}"
    if s.lists is not None:
        assert all(f[v] in s.lists[v] for v in range(s.n)), "witness ignores a list"


def _solve(m: StarMatrix, s: SandwichInstance, inst: ListCspInstance, oracle: bool):
    template = from_matrix(m)
    verdict = classify(template)
    if verdict.is_p:
        from .polysolve import solve_list_csp

        hom = solve_list_csp(template, inst)
    elif not oracle:
        raise IntractableTemplateError(
            "the matrix's CSP is NP-complete; pass oracle=True for exponential search"
        )
    else:
        hom = find_hom(inst, template)
    if hom is None:
        return None
    f = {v: hom[v] for v in range(s.n)}
    edges = _witness_edges(m, s, f)
    _check_witness(m, s, f, edges)
    return edges, f


def solve_sandwich(m: StarMatrix, s: SandwichInstance, oracle: bool = False):
    """Edge set E1 <= E <= E2 whose graph admits an M-partition, or None.
    Lists on the instance are ignored here; see solve_list_sandwich."""
    bare = SandwichInstance(s.n, s.mandatory, s.allowed, None)
    res = _solve(m, bare, to_csp_instance(bare, m.n), oracle)
    return None if res is None else res[0]


def solve_list_sandwich(m: StarMatrix, s: SandwichInstance, oracle: bool = False):
    """(edge set, partition map) for a list sandwich instance, or None.

    The polynomial route needs the matrix's coloured graph to be a core,
    or to fold onto its core by a full homomorphism (then lists are
    pushed through the fold).  Anything else is the open regime: refused
    unless oracle=True.
    """
    template = from_matrix(m)
    inst = to_csp_instance(s, m.n)
    if s.lists is None or all(l == frozenset(range(m.n)) for l in s.lists):
        res = _solve(m, s, inst, oracle)
        return res
    verdict = classify(template)
    if not verdict.is_p:
        if not oracle:
            raise IntractableTemplateError(
                "the matrix's CSP is NP-complete; pass oracle=True for exponential search"
            )
        return _oracle_list_solve(m, s, template, inst)
    kept, retr = core_of(template)
    if len(kept) == template.n:
        res = _solve(m, s, inst, oracle)
        return res
    if _is_full_fold(template, retr):
        from .classify import shrink_lists_via_fullhom
        from .polysolve import solve_list_csp

        sub = template.induced(kept)
        pos = {t: i for i, t in enumerate(kept)}
        fold = {v: pos[retr[v]] for v in range(template.n)}
        folded = shrink_lists_via_fullhom(template, sub, fold, inst)
        hom = solve_list_csp(sub, folded)
        if hom is None:
            return None
        f = {}
        for v in range(s.n):
            img = kept[hom[v]]
            f[v] = min(t for t in s.lists[v] if retr[t] == img)
        edges = _witness_edges(m, s, f)
        _check_witness(m, s, f, edges)
        return edges, f
    if not oracle:
        raise OpenRegimeError(
            "list sandwich over a non-core matrix without a full fold is an "
            "open regime; pass oracle=True for exponential search"
        )
    return _oracle_list_solve(m, s, template, inst)


def _is_full_fold(h: TwoEdgeColouredGraph, retr: Dict[int, int]) -> bool:
    return all(
        h.colours(x, y) == h.colours(retr[x], retr[y])
        for x in range(h.n)
        for y in range(x, h.n)
    )


def _oracle_list_solve(m, s, template, inst):
    hom = find_hom(inst, template)
    if hom is None:
        return None
    f = {v: hom[v] for v in range(s.n)}
    edges = _witness_edges(m, s, f)
    _check_witness(m, s, f, edges)
    return edges, f


def brute_force_sandwich(m: StarMatrix, s: SandwichInstance):
    """Independent oracle: try every intermediate edge set (ascending over
    the free pairs), searching each for an M-partition by plain
    backtracking.  Guarded at 2^20 candidate sets."""
    free = sorted(s.allowed - s.mandatory)
    if len(free) > MAX_FREE_PAIRS:
        raise GuardExceeded(f"{len(free)} free pairs exceeds the {MAX_FREE_PAIRS} guard")
    for mask in range(1 << len(free)):
        chosen = {e for i, e in enumerate(free) if mask >> i & 1}
        edges = s.mandatory | chosen
        if _mpartition_backtrack(m, s, edges) is not None:
            return frozenset(edges)
    return None


def _mpartition_backtrack(m: StarMatrix, s: SandwichInstance, edges):
    k = m.n
    assign = [-1] * s.n

    def ok(v: int, part: int) -> bool:
        for u in range(v):
            entry = m.entries[assign[u]][part]
            present = (min(u, v), max(u, v)) in edges
            if present and entry == "0":
                return False
            if not present and entry == "1":
                return False
        return True

    def rec(v: int):
        if v == s.n:
            return list(assign)
        allowed = range(k) if s.lists is None else sorted(s.lists[v])
        for part in allowed:
            if part < 0 or part >= k:
                continue
            if ok(v, part):
                assign[v] = part
                got = rec(v + 1)
                if got is not None:
                    return got
                assign[v] = -1
        return None

    return rec(0)
