"""NP-completeness evidence: odd-cycle detectors, the finite pattern
library, and quotient-power certificates.

Every certificate re-verifies against the structure it lives in; the
transcript of that check is stored on the certificate and serialized
with it.  Certificates explain hardness — the classification decision
itself always comes from the recognizer.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Tuple

import numpy as np

from .decompose import RecognizerReject
from .errors import GuardExceeded, InputError
from .graphs import (
    BLUE,
    MAX_POWER_SIZE,
    RED,
    TwoEdgeColouredGraph,
    canonical_form,
    cyclic_power,
    make_graph,
    siggers_power,
)
from .homsearch import Homomorphism, find_cyclic, full_instance, find_hom, verify_hom

MAX_SIGGERS_N = 6

STAR_LOOP_KIND = "star-loop"
STAR_ODD_CYCLE = "star-odd-cycle"
MONO_LOOP_ODD_CYCLE = "mono-loop-odd-cycle"
PATTERN_HOM = "pattern-hom"
CYCLIC_ABSENCE = "cyclic-absence"
RECOGNIZER_REJECT = "recognizer-reject"


@dataclass(frozen=True)
class HardnessCertificate:
    """Tagged hardness evidence; `cycle` entries are vertices of the arena
    (quotient classes when the arena is a power quotient, with their
    member-tuple representatives in `reps`)."""

    kind: str
    arena: str = "H"
    cycle: tuple = ()
    colour: Optional[str] = None
    pattern_id: Optional[str] = None
    hom: Optional[Homomorphism] = None
    reps: tuple = ()
    reject: Optional[RecognizerReject] = None
    transcript: tuple = ()

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind, "arena": self.arena}
        if self.cycle:
            out["cycle"] = list(self.cycle)
        if self.reps:
            out["representatives"] = [list(t) for t in self.reps]
        if self.colour is not None:
            out["colour"] = self.colour
        if self.pattern_id is not None:
            out["pattern"] = self.pattern_id
        if self.hom is not None:
            out["homomorphism"] = self.hom.to_json()
        if self.reject is not None:
            out["reject"] = self.reject.to_json()
        out["transcript"] = list(self.transcript)
        return out


def _pattern(loops: str, blue, red) -> TwoEdgeColouredGraph:
    n = len(loops)
    bl = [(i, i) for i, c in enumerate(loops) if c in "b*"] + list(blue)
    rd = [(i, i) for i, c in enumerate(loops) if c in "r*"] + list(red)
    return make_graph(n, bl, rd)


def _base_patterns() -> List[Tuple[str, TwoEdgeColouredGraph]]:
    star = lambda pairs: pairs  # noqa: E731 - *-edges listed in both colours
    return [
        ("3A", _pattern("rrr", [(0, 1), (1, 2), (0, 2)], [])),
        ("3B", _pattern("rrb", [(0, 1), (0, 2), (1, 2)], [(1, 2)])),
        ("3C", _pattern("rrb", [(0, 1), (1, 2)], [(1, 2), (0, 2)])),
        ("path-red", _pattern("rbr", star([(0, 1), (0, 2)]), star([(0, 1), (0, 2)]))),
        ("path-blue", _pattern("brb", star([(0, 1), (0, 2)]), star([(0, 1), (0, 2)]))),
        ("H3", _pattern("rrb", [(0, 1), (1, 2)], [(0, 2)])),
        ("3D", _pattern("rrb", [(0, 1), (1, 2)], [(0, 1), (0, 2)])),
        ("4A", _pattern("bbrr", [(2, 3), (0, 2), (0, 3)], [(2, 3), (0, 1), (1, 2), (1, 3)])),
        ("4B", _pattern("rbrr", [(2, 3), (1, 2), (1, 3), (0, 3)], [(2, 3), (0, 1), (0, 2)])),
        ("4C", _pattern("rbrr", [(2, 3), (0, 1), (0, 2)], [(2, 3), (1, 2), (1, 3), (0, 3)])),
        ("4D", _pattern("rrrb", [(2, 3), (0, 1), (1, 3)], [(2, 3), (0, 2), (0, 3), (1, 2)])),
        (
            "5A",
            _pattern(
                "brrrb",
                [(0, 4), (0, 3), (1, 2), (1, 4), (2, 4)],
                [(0, 1), (1, 3), (2, 3), (3, 4), (0, 2)],
            ),
        ),
    ]


_LIBRARY: Optional[List[Tuple[str, TwoEdgeColouredGraph]]] = None


def pattern_library() -> List[Tuple[str, TwoEdgeColouredGraph]]:
    """Hard structures searched for inside candidate templates, smallest
    first, each figure followed (after the same-size originals) by its
    dual; duplicates up to isomorphism dropped."""
    global _LIBRARY
    if _LIBRARY is None:
        base = _base_patterns()
        ordered: List[Tuple[str, TwoEdgeColouredGraph]] = []
        for size in (3, 4, 5):
            same = [(pid, g) for pid, g in base if g.n == size]
            ordered.extend(same)
            ordered.extend((f"dual({pid})", g.dual()) for pid, g in same)
        seen = set()
        lib = []
        for pid, g in ordered:
            key = canonical_form(g)
            if key not in seen:
                seen.add(key)
                lib.append((pid, g))
        _LIBRARY = lib
    return list(_LIBRARY)


def _odd_cycle(adj: np.ndarray) -> Optional[List[int]]:
    """Odd cycle in a loopless symmetric boolean adjacency, or None.
    BFS 2-colouring; the first conflict edge closes the cycle."""
    n = adj.shape[0]
    colour = [-1] * n
    parent = [-1] * n
    for root in range(n):
        if colour[root] != -1:
            continue
        colour[root] = 0
        queue = [root]
        while queue:
            u = queue.pop(0)
            for w in np.flatnonzero(adj[u]):
                w = int(w)
                if colour[w] == -1:
                    colour[w] = 1 - colour[u]
                    parent[w] = u
                    queue.append(w)
                elif colour[w] == colour[u]:
                    pu, pw = [u], [w]
                    while pu[-1] != -1:
                        pu.append(parent[pu[-1]])
                    while pw[-1] != -1:
                        pw.append(parent[pw[-1]])
                    pu.pop(), pw.pop()
                    common = None
                    su, sw = set(pu), None
                    for x in pw:
                        if x in su:
                            common = x
                            break
                    cu = pu[: pu.index(common) + 1]
                    cw = pw[: pw.index(common)]
                    return cu + list(reversed(cw))
    return None


def find_star_odd_cycle(h: TwoEdgeColouredGraph) -> Optional[HardnessCertificate]:
    """A *-loop (as a length-1 cycle) or an odd cycle of *-edges, or None."""
    both = h.blue & h.red
    diag = np.flatnonzero(both.diagonal())
    if diag.size:
        v = int(diag[0])
        return _verified(h, HardnessCertificate(kind=STAR_LOOP_KIND, cycle=(v,)))
    off = both.copy()
    np.fill_diagonal(off, False)
    cyc = _odd_cycle(off)
    if cyc is None:
        return None
    return _verified(h, HardnessCertificate(kind=STAR_ODD_CYCLE, cycle=tuple(cyc)))


def find_mono_loop_odd_cycle(h: TwoEdgeColouredGraph) -> Optional[HardnessCertificate]:
    """Odd cycle of red edges on blue-looped vertices, or of blue edges on
    red-looped vertices."""
    if h.star_loops():
        raise InputError("the mono-loop cycle test wants a *-loop-free graph")
    for edge_colour, edges, loops in ((RED, h.red, h.blue), (BLUE, h.blue, h.red)):
        mask = loops.diagonal()
        adj = edges & mask[:, None] & mask[None, :]
        np.fill_diagonal(adj, False)
        cyc = _odd_cycle(adj)
        if cyc is not None:
            return _verified(
                h,
                HardnessCertificate(
                    kind=MONO_LOOP_ODD_CYCLE, cycle=tuple(cyc), colour=edge_colour
                ),
            )
    return None


def find_pattern_hom(h: TwoEdgeColouredGraph) -> Optional[HardnessCertificate]:
    """First library pattern mapping homomorphically into h, with its map."""
    if not h.is_reflexive():
        raise InputError("pattern certificates apply to reflexive graphs")
    if h.star_loops():
        raise InputError("pattern certificates apply to *-loop-free graphs")
    for pid, pat in pattern_library():
        hom = find_hom(full_instance(pat, h.n), h)
        if hom is not None:
            return _verified(
                h, HardnessCertificate(kind=PATTERN_HOM, pattern_id=pid, hom=hom)
            )
    return None


def siggers_certificate(h: TwoEdgeColouredGraph) -> Optional[HardnessCertificate]:
    """*-loop or *-odd-cycle in the Siggers quotient of h, or None."""
    if h.star_loops():
        raise InputError("quotient certificates want a *-loop-free graph")
    if h.n > MAX_SIGGERS_N:
        raise GuardExceeded(f"Siggers quotient guard: |H| = {h.n} > {MAX_SIGGERS_N}")
    qp = siggers_power(h)
    return _quotient_cert(h, qp, "Sig(H)")


def cyclic_certificate(h: TwoEdgeColouredGraph, p: int) -> Optional[HardnessCertificate]:
    """*-loop or *-odd-cycle in the p-cyclic quotient of h, or None."""
    if h.star_loops():
        raise InputError("quotient certificates want a *-loop-free graph")
    if not _is_prime(p) or p <= h.n:
        raise InputError(f"need a prime p greater than |H|; got p={p}, |H|={h.n}")
    if h.n**p > MAX_POWER_SIZE:
        raise GuardExceeded(f"cyclic quotient guard: {h.n}^{p} tuples")
    qp = cyclic_power(h, p)
    return _quotient_cert(h, qp, f"Cyc_{p}(H)")


def _quotient_cert(h, qp, arena) -> Optional[HardnessCertificate]:
    inner = find_star_odd_cycle(qp.graph)
    if inner is None:
        return None
    reps = tuple(qp.reps[c] for c in inner.cycle)
    cert = HardnessCertificate(
        kind=inner.kind, arena=arena, cycle=inner.cycle, reps=reps
    )
    return _verified(h, cert)


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def next_usable_prime(n: int) -> int:
    p = n + 1
    while not _is_prime(p):
        p += 1
    return p


def cyclic_absence_certificate(
    h: TwoEdgeColouredGraph, p: Optional[int] = None
) -> Optional[HardnessCertificate]:
    """Hardness by exhausted cyclic-polymorphism search.

    Some NP-complete templates carry no structural witness at all — no
    hard pattern inside them and no *-odd-cycle in any power quotient.
    For those, the dichotomy theorem itself is the argument: a template
    with no p-cyclic polymorphism for a prime p > |H| has an NP-complete
    CSP.  The verifier re-runs the exhaustive search.  Returns None when
    a cyclic polymorphism exists (inconclusive, not evidence of
    tractability by itself).
    """
    if h.star_loops():
        raise InputError("cyclic-absence wants a *-loop-free graph")
    if p is None:
        p = next_usable_prime(h.n)
    if h.n**p > MAX_POWER_SIZE:
        raise GuardExceeded(f"cyclic power guard: {h.n}^{p} tuples")
    if find_cyclic(h, p) is not None:
        return None
    return _verified(h, HardnessCertificate(kind=CYCLIC_ABSENCE, arena=f"Cyc_{p}(H)"))


def recognizer_reject_certificate(h: TwoEdgeColouredGraph, reject: RecognizerReject) -> HardnessCertificate:
    return _verified(
        h, HardnessCertificate(kind=RECOGNIZER_REJECT, reject=reject)
    )


def _verified(h, cert) -> HardnessCertificate:
    ok, lines = verify_certificate(h, cert)
    assert ok, f"freshly built certificate failed verification: {lines}"
    return replace(cert, transcript=tuple(lines))


def _arena_graph(h: TwoEdgeColouredGraph, cert: HardnessCertificate):
    if cert.arena == "H":
        return h, None
    if cert.arena == "Sig(H)":
        return None, siggers_power(h)
    if cert.arena.startswith("Cyc_"):
        p = int(cert.arena[len("Cyc_") : -len("(H)")])
        return None, cyclic_power(h, p)
    raise InputError(f"unknown arena {cert.arena!r}")


def verify_certificate(h: TwoEdgeColouredGraph, cert: HardnessCertificate):
    """Re-check a certificate against h; returns (ok, transcript lines)."""
    lines: List[str] = []

    def fail(msg: str):
        lines.append(f"FAIL: {msg}")
        return False, lines

    if cert.kind == RECOGNIZER_REJECT:
        from .decompose import recognize_with_reject

        decomp, reject = recognize_with_reject(h)
        if decomp is not None:
            return fail("recognizer accepts this template")
        lines.append(
            f"recognizer rejects: {reject.reason} with live set {list(reject.remaining)}"
        )
        return True, lines

    if cert.kind == CYCLIC_ABSENCE:
        try:
            p = int(cert.arena[len("Cyc_") : -len("(H)")])
        except ValueError:
            return fail(f"bad arena {cert.arena!r} for cyclic-absence")
        if not _is_prime(p) or p <= h.n:
            return fail(f"p={p} is not a prime above |H|={h.n}")
        if find_cyclic(h, p) is not None:
            return fail("a cyclic polymorphism exists after all")
        lines.append(
            f"exhausted search: no homomorphism Cyc_{p}(H) -> H, hence no "
            f"{p}-cyclic polymorphism and the CSP is NP-complete"
        )
        return True, lines

    if cert.kind == PATTERN_HOM:
        lib = dict(pattern_library())
        pat = lib.get(cert.pattern_id)
        if pat is None:
            return fail(f"unknown pattern {cert.pattern_id!r}")
        bad = verify_hom(full_instance(pat, h.n), h, cert.hom)
        if bad is not None:
            return fail(f"pattern map does not verify: {bad}")
        lines.append(
            f"pattern {cert.pattern_id} maps into H via {list(cert.hom.map)}; "
            "all edges and loops re-checked"
        )
        return True, lines

    plain, qp = _arena_graph(h, cert)
    arena = plain if qp is None else qp.graph
    name = cert.arena
    if qp is not None:
        if len(cert.reps) != len(cert.cycle):
            return fail("quotient certificate must carry one representative per class")
        for c, rep in zip(cert.cycle, cert.reps):
            if qp.class_of_tuple(tuple(rep)) != c:
                return fail(f"representative {tuple(rep)} is not in class {c}")
            lines.append(f"class {c} of {name} is represented by {tuple(rep)}")

    cyc = cert.cycle
    if cert.kind == STAR_LOOP_KIND:
        if len(cyc) != 1:
            return fail("*-loop certificate must name one vertex")
        v = cyc[0]
        if arena.colours(v, v) != {BLUE, RED}:
            return fail(f"{name} vertex {v} has no *-loop")
        lines.append(f"{name} has a *-loop at {v}")
        return True, lines

    if cert.kind == STAR_ODD_CYCLE:
        if len(cyc) % 2 == 0 or len(cyc) < 3:
            return fail(f"cycle length {len(cyc)} is not an odd length >= 3")
        for i, u in enumerate(cyc):
            v = cyc[(i + 1) % len(cyc)]
            if arena.colours(u, v) != {BLUE, RED}:
                return fail(f"pair {u},{v} is not a *-edge in {name}")
        lines.append(
            f"{name} has a *-cycle of odd length {len(cyc)}: {list(cyc)}"
        )
        return True, lines

    if cert.kind == MONO_LOOP_ODD_CYCLE:
        if len(cyc) % 2 == 0 or len(cyc) < 3:
            return fail(f"cycle length {len(cyc)} is not an odd length >= 3")
        loop_colour = RED if cert.colour == BLUE else BLUE
        for u in cyc:
            if arena.colours(u, u) != {loop_colour}:
                return fail(f"vertex {u} is not {loop_colour}-looped")
        for i, u in enumerate(cyc):
            v = cyc[(i + 1) % len(cyc)]
            if cert.colour not in arena.colours(u, v):
                return fail(f"pair {u},{v} is not {cert.colour} in {name}")
        lines.append(
            f"{name} has a {cert.colour} cycle of odd length {len(cyc)} on "
            f"{loop_colour}-looped vertices: {list(cyc)}"
        )
        return True, lines

    return fail(f"unknown certificate kind {cert.kind!r}")
