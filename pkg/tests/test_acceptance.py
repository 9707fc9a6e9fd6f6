"""Acceptance gate: nine end-to-end checks across the whole library.

Each test prints exactly one `criterion N: PASS/FAIL` line (run pytest
with -s to watch them).  These are deliberately heavyweight — exhaustive
sweeps, dual-route oracles, timing envelopes — so the file takes a few
minutes; everything else in tests/ is quick.
"""

import time
from collections import Counter
from itertools import combinations, product
from math import log
from random import Random

import numpy as np

from redblue.classify import classify, classify_fullhom_sandwich, is_k3_2k2_p4_free
from redblue.cli import _wnu_check
from redblue.decompose import BlockKind, recognize_tractable, recognize_with_reject
from redblue.graphs import (
    BLUE,
    RED,
    SimpleGraph,
    StarMatrix,
    from_matrix,
    make_graph,
    siggers_power,
)
from redblue.hardness import (
    MAX_SIGGERS_N,
    RECOGNIZER_REJECT,
    pattern_library,
    siggers_certificate,
    verify_certificate,
)
from redblue.homsearch import (
    Homomorphism,
    ListCspInstance,
    core_of,
    find_hom,
    find_siggers,
    full_instance,
    verify_hom,
)
from redblue.polysolve import (
    ReductionLog,
    replay_witness,
    solve_list_csp,
    strip_bi_star_edge,
    strip_homogeneous_vertex,
    strip_mono_star_edge,
)
from redblue.sandwich import SandwichInstance, brute_force_sandwich, solve_sandwich
from redblue.smallgraphs import (
    all_coloured_graphs,
    all_templates,
    random_coloured_graph,
    random_lists,
    random_template,
)

from support import stacked_template


def _report(num: int, bad: list, detail: str) -> None:
    verdict = "PASS" if not bad else "FAIL"
    print(f"criterion {num}: {verdict} - {detail}")
    assert not bad, f"criterion {num}: {bad[:5]}"


# --- criterion 1: depicted Siggers quotients -------------------------------
#
# For eight hard patterns the quotient Sig(H) collapses onto a small
# *-odd-cycle.  The data below names, per pattern, the depicted tuple
# classes (first listed tuple per class, classes in cycle order) and the
# blue/red H^4 edges that realise the cycle.

FIGURES = {
    "3B": {
        "groups": [["1021", "0102"], ["1011"], ["1012", "0120"]],
        "blue": [("0102", "1011"), ("0120", "1021"), ("1011", "0120")],
        "red": [("1021", "1011"), ("1011", "1012"), ("1012", "1021")],
    },
    "3C": {
        "groups": [["0102"], ["1011", "0101"], ["1012", "0120"]],
        "blue": [("0102", "1011"), ("0101", "1012"), ("1012", "0102")],
        "red": [("0102", "0101"), ("1011", "1012"), ("0120", "0102")],
    },
    "4A": {
        "groups": [["1021", "0102"], ["0120", "1012"], ["0133"]],
        "blue": [("0102", "0120"), ("0120", "0133"), ("0133", "0102")],
        "red": [("0102", "1012"), ("1012", "0133"), ("0133", "1021")],
    },
    "5A": {
        "groups": [
            ["1301", "3130"],
            ["0420", "4042"],
            ["2321", "3213"],
            ["0140", "1014"],
            ["2032", "0203"],
        ],
        "blue": [
            ("1301", "4042"),
            ("0420", "3213"),
            ("3213", "0140"),
            ("0140", "0203"),
            ("0203", "3130"),
        ],
        "red": [
            ("1301", "0420"),
            ("0420", "2321"),
            ("3213", "1014"),
            ("1014", "0203"),
            ("2032", "3130"),
        ],
    },
    "3D": {
        "groups": [["1021", "0102"], ["1011", "0101"], ["0120"]],
        "blue": [("0102", "1011"), ("1011", "0120"), ("0120", "1021")],
        "red": [("1021", "0101"), ("0101", "0120"), ("0120", "0102")],
    },
    "4B": {
        "groups": [["0302", "3023"], ["0303", "3033", "0330"], ["0312"]],
        "blue": [("0312", "3023"), ("3033", "0312"), ("3023", "0330")],
        "red": [("0302", "0303"), ("0303", "0312"), ("0312", "0302")],
    },
    "4C": {
        "groups": [
            ["3123", "1312"],
            ["2021", "0210"],
            ["0130"],
            ["2022", "0220"],
            ["2032"],
        ],
        "blue": [
            ("1312", "0210"),
            ("2021", "0130"),
            ("0130", "2022"),
            ("0220", "2032"),
            ("2032", "3123"),
        ],
        "red": [
            ("1312", "2021"),
            ("0210", "0130"),
            ("0130", "0220"),
            ("2022", "2032"),
            ("2032", "1312"),
        ],
    },
    "4D": {
        "groups": [
            ["3130"],
            ["0103", "1031"],
            ["0120"],
            ["3133", "1331"],
            ["0102", "1021"],
        ],
        "blue": [
            ("3130", "1031"),
            ("1031", "0120"),
            ("0120", "1331"),
            ("3133", "1021"),
            ("1021", "3130"),
        ],
        "red": [
            ("3130", "0103"),
            ("0103", "0120"),
            ("0120", "3133"),
            ("3133", "0102"),
            ("0102", "3130"),
        ],
    },
}


def _tup(s: str) -> tuple:
    return tuple(int(c) for c in s)


def test_01_siggers_quotients_match_depicted_cycles():
    lib = dict(pattern_library())
    bad = []
    slowest = 0.0
    for pid, fig in FIGURES.items():
        h = lib[pid]
        t0 = time.perf_counter()
        qp = siggers_power(h)
        classes = []
        for group in fig["groups"]:
            ids = {qp.class_of_tuple(_tup(s)) for s in group}
            if len(ids) != 1:
                bad.append(f"{pid}: tuples {group} fall into {len(ids)} classes")
            classes.append(min(ids))
        if len(set(classes)) != len(classes):
            bad.append(f"{pid}: depicted classes are not pairwise distinct")
        for colour, mat in ((BLUE, h.blue), (RED, h.red)):
            for s, t in fig[colour]:
                a, b = _tup(s), _tup(t)
                if not all(mat[x, y] for x, y in zip(a, b)):
                    bad.append(f"{pid}: {colour} edge {s}-{t} absent in H^4")
                ca, cb = qp.class_of_tuple(a), qp.class_of_tuple(b)
                if colour not in qp.graph.colours(ca, cb):
                    bad.append(f"{pid}: {colour} edge {s}-{t} lost in the quotient")
        k = len(classes)
        if k % 2 == 0:
            bad.append(f"{pid}: cycle length {k} is even")
        for i in range(k):
            u, v = classes[i], classes[(i + 1) % k]
            if qp.graph.colours(u, v) != {BLUE, RED}:
                bad.append(f"{pid}: consecutive classes {i},{(i + 1) % k} not a *-edge")
        dt = time.perf_counter() - t0
        slowest = max(slowest, dt)
        if dt >= 1.0:
            bad.append(f"{pid}: quotient checks took {dt:.2f}s")
    _report(
        1,
        bad,
        f"8 depicted Sig(H) class structures and *-cycles verified edge-by-edge, "
        f"slowest pattern {slowest:.2f}s",
    )


def test_02_recognizer_equals_idempotent_siggers_up_to_3():
    t0 = time.perf_counter()
    bad = []
    total = accepts = 0
    for n in (1, 2, 3):
        for h in all_templates(n):
            total += 1
            accepted = recognize_tractable(h) is not None
            kept, _ = core_of(h)
            has_sig = find_siggers(h.induced(kept), idempotent=True) is not None
            if accepted != has_sig:
                bad.append(
                    f"n={n}: recognizer={accepted} but core idempotent Siggers={has_sig}"
                )
            accepts += accepted
    dt = time.perf_counter() - t0
    if dt >= 600:
        bad.append(f"sweep took {dt:.0f}s")
    _report(
        2,
        bad,
        f"{total} templates (n<=3): recognizer verdict == idempotent Siggers on the "
        f"core, {accepts} accepts, {dt:.1f}s",
    )


def test_03_every_reject_certified_every_accept_has_wnu_pair():
    t0 = time.perf_counter()
    bad = []
    kinds = Counter()
    accepts = rejects = 0
    for n in (1, 2, 3, 4):
        for h in all_templates(n):
            decomp, _ = recognize_with_reject(h)
            if decomp is None:
                rejects += 1
                cert = classify(h).certificate
                if cert is None:
                    bad.append(f"n={n}: reject without a certificate")
                    continue
                if cert.kind == RECOGNIZER_REJECT:
                    bad.append(f"n={n}: only a bare reject, no structural certificate")
                    continue
                ok, lines = verify_certificate(h, cert)
                if not ok:
                    bad.append(f"n={n}: {cert.kind} certificate failed: {lines[-1]}")
                kinds[cert.kind] += 1
            else:
                accepts += 1
                if (
                    not h.star_loops()
                    and h.n <= MAX_SIGGERS_N
                    and siggers_certificate(h) is not None
                ):
                    bad.append(f"n={n}: accepted template has a *-odd-cycle in Sig(H)")
                msg = _wnu_check(h, decomp)
                if msg != "ok":
                    bad.append(f"n={n}: WNU pair check failed: {msg}")
    dt = time.perf_counter() - t0
    _report(
        3,
        bad,
        f"n<=4 sweep: {accepts} accepts carry verified conservative WNU pairs and "
        f"clean Sig(H); {rejects} rejects carry verified certificates "
        f"({dict(sorted(kinds.items()))}), {dt:.0f}s",
    )


_STUBBORN = StarMatrix.make(
    [
        ["0", "*", "0", "*"],
        ["*", "0", "*", "*"],
        ["0", "*", "*", "*"],
        ["*", "*", "*", "1"],
    ]
)
_FOLD4 = StarMatrix.make(
    [
        ["1", "1", "1", "0"],
        ["1", "1", "1", "0"],
        ["1", "1", "1", "0"],
        ["0", "0", "0", "1"],
    ]
)


def test_04_solver_agrees_with_search_oracle_on_tractable_templates():
    t0 = time.perf_counter()
    rng = Random(404)
    bad = []
    pairs = 0

    def check(h, g, lists):
        nonlocal pairs
        pairs += 1
        inst = ListCspInstance(g, lists) if lists is not None else full_instance(g, h.n)
        got = solve_list_csp(h, inst)
        want = find_hom(inst, h)
        if (got is None) != (want is None):
            bad.append(
                f"|H|={h.n} |G|={g.n}: solver says {got is not None}, "
                f"oracle says {want is not None}"
            )
        elif got is not None:
            err = verify_hom(inst, h, got)
            if err is not None:
                bad.append(f"|H|={h.n} |G|={g.n}: witness rejected: {err}")

    tractable = {n: [] for n in (1, 2, 3, 4)}
    for n in tractable:
        for h in all_templates(n):
            if recognize_tractable(h) is not None:
                tractable[n].append(h)
    small = list(all_coloured_graphs(1)) + list(all_coloured_graphs(2))
    med = list(all_coloured_graphs(3))

    # every tractable template: exhaustive |G| <= 2, plain and with random lists
    for hs in tractable.values():
        for h in hs:
            for g in small:
                check(h, g, None)
                check(h, g, random_lists(g.n, h.n, rng))
    # every tractable template with |H| <= 3: exhaustive |G| = 3 (lists on a quarter)
    for n in (1, 2, 3):
        for h in tractable[n]:
            for i, g in enumerate(med):
                check(h, g, None)
                if i % 4 == 0:
                    check(h, g, random_lists(g.n, h.n, rng))
    # stratified |H| = 4 sample plus the folding/stubborn shapes: exhaustive
    # |G| = 3 in both modes and 500 random instances up to |G| = 8 each
    sample = tractable[4][::50] + [from_matrix(_FOLD4), from_matrix(_STUBBORN)]
    for h in sample:
        for g in med:
            check(h, g, None)
            check(h, g, random_lists(g.n, h.n, rng))
        for _ in range(250):
            g = random_coloured_graph(rng.randint(4, 8), rng)
            check(h, g, None)
            check(h, g, random_lists(g.n, h.n, rng))
    # every remaining template still gets random probes up to |G| = 8
    for hs in tractable.values():
        for h in hs:
            for _ in range(2):
                g = random_coloured_graph(rng.randint(4, 8), rng)
                check(h, g, None)
                check(h, g, random_lists(g.n, h.n, rng))
    dt = time.perf_counter() - t0
    total = sum(len(v) for v in tractable.values())
    _report(
        4,
        bad,
        f"{total} tractable templates (n<=4), {pairs} solver/oracle instance pairs "
        f"in exact agreement, witnesses re-verified, {dt:.0f}s",
    )


def test_05_strip_reductions_preserve_satisfiability():
    rng = Random(505)
    bad = []
    families = {
        "HomVertex": (
            (BlockKind.SINGLE_BLUE_LOOP, BlockKind.SINGLE_RED_LOOP),
            lambda inst, h, blk: strip_homogeneous_vertex(inst, h, blk[0]),
        ),
        "MonoStarEdge": (
            (BlockKind.MONO_STAR_EDGE_BLUE, BlockKind.MONO_STAR_EDGE_RED),
            lambda inst, h, blk: strip_mono_star_edge(inst, h, blk[0], blk[1]),
        ),
        "BiStarEdge": (
            (BlockKind.BICHROMATIC_STAR_EDGE,),
            lambda inst, h, blk: strip_bi_star_edge(
                inst, h, *(blk if h.blue[blk[0], blk[0]] else (blk[1], blk[0]))
            ),
        ),
    }
    per = Counter()
    for name, (kinds, apply_strip) in families.items():
        for trial in range(1000):
            template, blocks = stacked_template(rng, [rng.choice(kinds)])
            g = random_coloured_graph(rng.randint(1, 5), rng)
            lists = (
                random_lists(g.n, template.n, rng)
                if trial % 2
                else tuple(frozenset(range(template.n)) for _ in range(g.n))
            )
            inst = ListCspInstance(g, lists)
            before = find_hom(inst, template)
            reduced, rec = apply_strip(inst, template, blocks[-1])
            after = find_hom(reduced, template)
            if (before is None) != (after is None):
                bad.append(f"{name} trial {trial}: strip changed the answer")
                continue
            if after is not None:
                base_map = dict(enumerate(after.map))
                total_map = replay_witness(ReductionLog(g.n, (rec,)), base_map)
                full = Homomorphism(tuple(total_map[v] for v in range(g.n)))
                err = verify_hom(inst, template, full)
                if err is not None:
                    bad.append(f"{name} trial {trial}: replayed witness rejected: {err}")
            per[name] += 1
    _report(
        5,
        bad,
        f"randomized strip applications oracle-checked: "
        + ", ".join(f"{k} x{v}" for k, v in sorted(per.items())),
    )


def _free_mask_array(n: int) -> np.ndarray:
    """Boolean array over all 2^C(n,2) edge masks: no induced K3/2K2/P4."""
    pairs = list(combinations(range(n), 2))
    pos = {p: i for i, p in enumerate(pairs)}
    size = 1 << len(pairs)
    g = np.arange(size, dtype=np.int64)
    local = list(combinations(range(4), 2))
    badq = np.zeros(64, dtype=bool)
    for v in range(64):
        es = [local[i] for i in range(6) if v >> i & 1]
        deg = sorted(sum(1 for e in es if k in e) for k in range(4))
        badq[v] = (len(es) == 2 and deg == [1, 1, 1, 1]) or (
            len(es) == 3 and deg == [1, 1, 2, 2]
        )
    bad = np.zeros(size, dtype=bool)
    for tri in combinations(range(n), 3):
        m = sum(1 << pos[p] for p in combinations(tri, 2))
        bad |= (g & m) == m
    for quad in combinations(range(n), 4):
        sub = np.zeros(size, dtype=np.int64)
        for j, p in enumerate(combinations(quad, 2)):
            sub |= ((g >> pos[p]) & 1) << j
        bad |= badq[sub]
    return ~bad


def _bipartite_plus_isolated_masks(n: int) -> set:
    """Every labelled graph that is a complete bipartite graph plus
    isolated vertices — exactly the graphs with a full hom to K1+K2."""
    pairs = list(combinations(range(n), 2))
    out = set()
    for side in product((0, 1, 2), repeat=n):
        m = 0
        for i, (a, b) in enumerate(pairs):
            if {side[a], side[b]} == {1, 2}:
                m |= 1 << i
        out.add(m)
    return out


def _brute_fullhom_k1k2(n: int, edges: set) -> bool:
    for f in product((0, 1, 2), repeat=n):
        if all(
            ((i, j) in edges) == ((f[i], f[j]) in ((1, 2), (2, 1)))
            for i in range(n)
            for j in range(i + 1, n)
        ):
            return True
    return False


def test_06_fullhom_to_k1_plus_k2_iff_free():
    t0 = time.perf_counter()
    bad = []
    counts = {}
    # n <= 5: literal full-hom search vs the forbidden-subgraph test,
    # with the fast routes cross-validated on the same graphs.
    for n in range(1, 6):
        pairs = list(combinations(range(n), 2))
        fast_free = _free_mask_array(n)
        cons = _bipartite_plus_isolated_masks(n)
        for mask in range(1 << len(pairs)):
            edges = {p for i, p in enumerate(pairs) if mask >> i & 1}
            free, _ = is_k3_2k2_p4_free(SimpleGraph.make(n, edges))
            hom = _brute_fullhom_k1k2(n, edges)
            if free != hom:
                bad.append(f"n={n} mask={mask}: free={free} but full-hom={hom}")
            if free != bool(fast_free[mask]):
                bad.append(f"n={n} mask={mask}: vectorized freeness disagrees")
            if hom != (mask in cons):
                bad.append(f"n={n} mask={mask}: construction set disagrees")
        counts[n] = int(fast_free.sum())
    # n = 6, 7: vectorized freeness vs the construction set, all labelled graphs.
    for n in (6, 7):
        fast_free = _free_mask_array(n)
        cons = _bipartite_plus_isolated_masks(n)
        got = set(np.flatnonzero(fast_free).tolist())
        if got != cons:
            bad.append(
                f"n={n}: {len(got - cons)} free graphs without a full hom, "
                f"{len(cons - got)} full-hom graphs not free"
            )
        counts[n] = len(got)
        rng = Random(606)
        pairs = list(combinations(range(n), 2))
        for _ in range(300):
            mask = rng.randrange(1 << len(pairs))
            edges = {p for i, p in enumerate(pairs) if mask >> i & 1}
            free, _ = is_k3_2k2_p4_free(SimpleGraph.make(n, edges))
            if free != bool(fast_free[mask]):
                bad.append(f"n={n} mask={mask}: freeness test disagrees with table")
    dt = time.perf_counter() - t0
    if dt >= 300:
        bad.append(f"sweep took {dt:.0f}s")
    _report(
        6,
        bad,
        f"all loopless graphs up to 7 vertices: full hom to K1+K2 iff "
        f"K3/2K2/P4-free (free counts {counts}), {dt:.0f}s",
    )


_M_S = StarMatrix.make([["0", "*"], ["*", "1"]])
_M_B = StarMatrix.make([["0", "*"], ["*", "0"]])
_ADJ_K3 = StarMatrix.make([["0", "1", "1"], ["1", "0", "1"], ["1", "1", "0"]])


def _interval_tables(m: StarMatrix, n: int):
    """For each partition map f, the forced/permitted edge masks: an edge
    set E admits f iff lo_f <= E <= hi_f on the free pairs."""
    pairs = list(combinations(range(n), 2))
    lo, hi = [], []
    for f in product(range(m.n), repeat=n):
        l = h = 0
        for i, (a, b) in enumerate(pairs):
            entry = m.entries[f[a]][f[b]]
            if entry == "1":
                l |= 1 << i
            if entry != "0":
                h |= 1 << i
        lo.append(l)
        hi.append(h)
    full = (1 << len(pairs)) - 1
    return np.array(lo, dtype=np.int64), np.array(hi, dtype=np.int64), pairs, full


def _random_sandwich(rng: Random, n: int, max_free: int = 10) -> SandwichInstance:
    pairs = list(combinations(range(n), 2))
    allowed = {p for p in pairs if rng.random() < 0.6}
    mandatory = {p for p in allowed if rng.random() < 0.45}
    free = list(allowed - mandatory)
    rng.shuffle(free)
    while len(free) > max_free:
        p = free.pop()
        if rng.random() < 0.5:
            mandatory.add(p)
        else:
            allowed.discard(p)
    return SandwichInstance.make(n, mandatory, allowed)


def test_07_sandwich_solver_agrees_with_brute_force():
    t0 = time.perf_counter()
    bad = []
    matrices = {
        "M_S": (_M_S, False),
        "M_B": (_M_B, False),
        "stubborn": (_STUBBORN, False),
        "adjacency(K3)": (_ADJ_K3, True),
    }
    checked = Counter()
    for name, (m, needs_oracle) in matrices.items():
        lo, hi, pairs, full = _interval_tables(m, 5)
        for idx, trits in enumerate(product((0, 1, 2), repeat=len(pairs))):
            e1 = e2 = 0
            for i, t in enumerate(trits):
                if t == 2:
                    e1 |= 1 << i
                if t >= 1:
                    e2 |= 1 << i
            fast = bool(np.any(((lo & (full ^ e2)) == 0) & ((e1 & (full ^ hi)) == 0)))
            s = SandwichInstance.make(
                5,
                [pairs[i] for i in range(len(pairs)) if e1 >> i & 1],
                [pairs[i] for i in range(len(pairs)) if e2 >> i & 1],
            )
            got = solve_sandwich(m, s, oracle=needs_oracle) is not None
            if got != fast:
                bad.append(f"{name} trits={trits}: solver {got}, interval oracle {fast}")
            if idx % 397 == 0 and (brute_force_sandwich(m, s) is not None) != fast:
                bad.append(f"{name} trits={trits}: brute force disagrees with intervals")
            checked[name] += 1
        rng = Random(707)
        for _ in range(200):
            s = _random_sandwich(rng, rng.randint(4, 8))
            got = solve_sandwich(m, s, oracle=needs_oracle) is not None
            want = brute_force_sandwich(m, s) is not None
            if got != want:
                bad.append(f"{name} random n={s.n}: solver {got}, brute force {want}")
            checked[name] += 1
    dt = time.perf_counter() - t0
    _report(
        7,
        bad,
        f"four matrices x (59049 exhaustive n=5 pairs + 200 random n<=8), "
        f"solver == oracle throughout, {dt:.0f}s",
    )


def test_08_named_templates_get_the_published_verdicts():
    bad = []
    a_graph = make_graph(3, [(1, 1), (2, 2), (0, 1), (0, 2)], [(0, 0), (1, 2)])
    facts = [
        ("M_S", classify(from_matrix(_M_S)).is_p, True),
        ("A", classify(a_graph).is_p, False),
        ("adjacency(K3)", classify(from_matrix(_ADJ_K3)).is_p, False),
        (
            "P4 full-hom",
            classify_fullhom_sandwich(SimpleGraph(4, ((0, 1), (1, 2), (2, 3)))).is_p,
            False,
        ),
        (
            "K1+K2 full-hom",
            classify_fullhom_sandwich(SimpleGraph(3, ((1, 2),))).is_p,
            True,
        ),
    ]
    for name, got, want in facts:
        if got != want:
            bad.append(f"{name}: expected {'P' if want else 'NP-complete'}")
    _report(
        8,
        bad,
        "M_S->P, A->NP-complete, adjacency(K3)->NP-complete, "
        "P4 full-hom->NP-complete, K1+K2 full-hom->P",
    )


def test_09_classification_time_grows_polynomially():
    rng = Random(909)
    bad = []
    times = {}
    for n in (10, 22, 50):
        best = float("inf")
        for _ in range(3):
            h = random_template(n, rng, allow_star_loops=False)
            t0 = time.perf_counter()
            classify(h)
            best = min(best, time.perf_counter() - t0)
        times[n] = max(best, 1e-5)
    if times[50] >= 5.0:
        bad.append(f"classify at n=50 took {times[50]:.2f}s")
    slope = (log(times[50]) - log(times[10])) / (log(50) - log(10))
    if slope > 4.0:
        bad.append(f"log-log slope {slope:.2f} exceeds 4")
    shown = {n: f"{t * 1000:.1f}ms" for n, t in times.items()}
    _report(9, bad, f"classify times {shown}, log-log slope {slope:.2f} <= 4")
