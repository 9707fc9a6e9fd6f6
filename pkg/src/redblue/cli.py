"""Command-line surface: classify, solve, certify, decompose, audit.

Exit codes: 0 success, 1 the answer is "no" (unsatisfiable instance,
no certificate for a tractable template, recognizer rejection for
`decompose`), 2 invalid input, 3 refusal to run an exponential search
without --oracle.  All output is deterministic; JSON is emitted with
sorted keys.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional

from .classify import cheapest_certificate, classify, classify_fullhom_sandwich
from .decompose import recognize_with_reject
from .errors import (
    BudgetExceeded,
    GuardExceeded,
    InputError,
    IntractableTemplateError,
    OpenRegimeError,
)
from .graphs import (
    TwoEdgeColouredGraph,
    canonical_form,
    from_matrix,
    graph_from_json,
    matrix_from_json,
    simple_from_json,
)
from .hardness import (
    MAX_SIGGERS_N,
    cyclic_absence_certificate,
    cyclic_certificate,
    recognizer_reject_certificate,
    siggers_certificate,
    verify_certificate,
)
from .homsearch import (
    MAX_CORE_N,
    ListCspInstance,
    core_of,
    find_hom,
    find_siggers,
    verify_hom,
)
from .sandwich import SandwichInstance, solve_list_sandwich, solve_sandwich


AUDIT_GUARD_N = 4


def _read_payload(arg: str) -> dict:
    """Accept a file path or inline JSON (anything starting with '{')."""
    text = arg
    if not arg.lstrip().startswith("{"):
        try:
            text = Path(arg).read_text()
        except OSError as exc:
            raise InputError(f"cannot read {arg}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise InputError("top-level JSON value must be an object")
    return data


def _coloured_graph(data: dict, mode: Optional[str]) -> TwoEdgeColouredGraph:
    if mode == "matrix" or (mode is None and "entries" in data):
        return from_matrix(matrix_from_json(data))
    if mode == "graph" or (mode is None and ("blue" in data or "red" in data)):
        return graph_from_json(data)
    raise InputError(
        "cannot tell matrix from coloured graph; pass --matrix or --graph"
    )


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _render(args, obj, lines: List[str]) -> str:
    if args.format == "text":
        return "\n".join(lines) + "\n"
    return _dump(obj)


def _lists_from(data: dict, n: int, template_n: int, override: Optional[str]):
    raw = data.get("lists")
    if override is not None:
        extra = _read_payload(override)
        raw = extra.get("lists", extra)
    if raw is None:
        return tuple(frozenset(range(template_n)) for _ in range(n))
    try:
        lists = tuple(frozenset(int(t) for t in raw[str(v)]) for v in range(n))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad lists: {exc}") from exc
    return lists


# --- commands -----------------------------------------------------------


def cmd_classify(args) -> int:
    h = _coloured_graph(_read_payload(args.input), args.mode)
    c = classify(h)
    lines = [f"verdict: {c.verdict}"]
    if c.decomposition is not None:
        parts = ", ".join(
            f"{b.kind.value}{list(b.vertices)}" for b in c.decomposition.blocks
        )
        lines.append(f"blocks: {parts}")
    if c.certificate is not None:
        lines.append(f"certificate: {c.certificate.kind} in {c.certificate.arena}")
    sys.stdout.write(_render(args, c.to_json(), lines))
    return 0


def cmd_solve(args) -> int:
    template = _coloured_graph(_read_payload(args.template), None)
    inst_data = _read_payload(args.instance)
    g = graph_from_json(inst_data)
    lists = _lists_from(inst_data, g.n, template.n, args.lists)
    inst = ListCspInstance(g, lists)
    from .polysolve import solve_list_csp

    try:
        hom = solve_list_csp(template, inst)
    except IntractableTemplateError as exc:
        if not args.oracle:
            raise
        hom = find_hom(inst, template)
        if hom is not None:
            bad = verify_hom(inst, template, hom)
            if bad is not None:
                raise AssertionError(f"oracle witness failed: {bad}")
    if hom is None:
        sys.stdout.write(_render(args, {"satisfiable": False}, ["satisfiable: no"]))
        return 1
    witness = {str(v): int(hom[v]) for v in range(g.n)}
    lines = ["satisfiable: yes"] + [f"  {v} -> {witness[str(v)]}" for v in range(g.n)]
    sys.stdout.write(_render(args, {"satisfiable": True, "witness": witness}, lines))
    return 0


def cmd_sandwich(args) -> int:
    m = matrix_from_json(_read_payload(args.matrix))
    s = SandwichInstance.from_json(_read_payload(args.instance))
    if s.lists is not None:
        res = solve_list_sandwich(m, s, oracle=args.oracle)
        if res is None:
            sys.stdout.write(_render(args, {"satisfiable": False}, ["satisfiable: no"]))
            return 1
        edges, f = res
        obj = {
            "satisfiable": True,
            "edges": [list(e) for e in sorted(edges)],
            "partition": {str(v): int(f[v]) for v in range(s.n)},
        }
        lines = ["satisfiable: yes", f"edges: {sorted(edges)}"]
        sys.stdout.write(_render(args, obj, lines))
        return 0
    edges = solve_sandwich(m, s, oracle=args.oracle)
    if edges is None:
        sys.stdout.write(_render(args, {"satisfiable": False}, ["satisfiable: no"]))
        return 1
    obj = {"satisfiable": True, "edges": [list(e) for e in sorted(edges)]}
    sys.stdout.write(_render(args, obj, ["satisfiable: yes", f"edges: {sorted(edges)}"]))
    return 0


def cmd_fullhom(args) -> int:
    g = simple_from_json(_read_payload(args.input))
    c = classify_fullhom_sandwich(g)
    sys.stdout.write(_render(args, c.to_json(), [f"verdict: {c.verdict}"]))
    return 0


def _certify_chain(h: TwoEdgeColouredGraph, reject):
    """Quotient-power certificates first, then direct detectors."""
    if h.n <= MAX_SIGGERS_N:
        cert = siggers_certificate(h)
        if cert is not None:
            return cert
        for p in (2, 3, 5, 7, 11):
            if p > h.n:
                try:
                    cert = cyclic_certificate(h, p)
                except GuardExceeded:
                    cert = None
                if cert is not None:
                    return cert
                break
    cert = cheapest_certificate(h)
    if cert is not None:
        return cert
    if not h.star_loops():
        try:
            cert = cyclic_absence_certificate(h)
        except GuardExceeded:
            cert = None
        if cert is not None:
            return cert
    return recognizer_reject_certificate(h, reject)


def cmd_certify(args) -> int:
    h = _coloured_graph(_read_payload(args.input), args.mode)
    decomp, reject = recognize_with_reject(h)
    if decomp is not None:
        obj = {"verdict": "P", "certificate": None}
        sys.stdout.write(_render(args, obj, ["verdict: P", "certificate: none"]))
        return 1
    cert = _certify_chain(h, reject)
    ok, trace = verify_certificate(h, cert)
    assert ok, trace
    obj = {"verdict": "NP-complete", "certificate": cert.to_json()}
    lines = ["verdict: NP-complete", f"kind: {cert.kind}", f"arena: {cert.arena}"]
    if cert.cycle:
        lines.append(f"cycle: {list(cert.cycle)}")
    if cert.pattern_id is not None:
        lines.append(f"pattern: {cert.pattern_id}")
    sys.stdout.write(_render(args, obj, lines))
    return 0


def cmd_core(args) -> int:
    h = _coloured_graph(_read_payload(args.input), args.mode)
    if h.n <= MAX_CORE_N:
        kept, retr = core_of(h)
        method = "exact"
    else:
        c = classify(h)
        if c.core_vertices is None:
            raise InputError(
                f"template larger than {MAX_CORE_N} vertices and NP-complete: "
                "exact core search is out of reach"
            )
        kept, retr = c.core_vertices, c.core_retraction
        method = c.detail.get("core_method", "folded")
    obj = {
        "core": list(kept),
        "method": method,
        "retraction": {str(v): int(retr[v]) for v in range(h.n)},
    }
    lines = [f"core: {list(kept)}", f"method: {method}"]
    sys.stdout.write(_render(args, obj, lines))
    return 0


def cmd_decompose(args) -> int:
    h = _coloured_graph(_read_payload(args.input), args.mode)
    decomp, reject = recognize_with_reject(h)
    if decomp is None:
        lines = [f"reject: {reject.reason}", f"at: {list(reject.offending_set or ())}"]
        sys.stdout.write(_render(args, {"reject": reject.to_json()}, lines))
        return 1
    lines = []
    for i, b in enumerate(decomp.blocks):
        tag = "base" if i == 0 else f"layer {i}"
        lines.append(f"{tag}: {b.kind.value} {list(b.vertices)}")
    sys.stdout.write(_render(args, decomp.to_json(), lines))
    return 0


# --- audit --------------------------------------------------------------


@dataclass
class ClassAudit:
    index: int
    n: int
    canon: str
    verdict: str
    evidence: dict
    checks: dict
    ms: float = 0.0

    def failures(self) -> List[str]:
        return [f"{k}: {v}" for k, v in self.checks.items() if v not in ("ok", "n/a")]

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "n": self.n,
            "canon": self.canon,
            "verdict": self.verdict,
            "evidence": self.evidence,
            "checks": self.checks,
        }


@dataclass
class AuditReport:
    max_n: int
    classes: List[ClassAudit] = field(default_factory=list)

    @property
    def exceptions(self) -> List[str]:
        out = []
        for c in self.classes:
            out.extend(f"class {c.index} (n={c.n}): {f}" for f in c.failures())
        return out

    def to_json(self, include_timing: bool = False) -> dict:
        counts = {"P": 0, "NP-complete": 0}
        for c in self.classes:
            counts[c.verdict] += 1
        out = {
            "max_n": self.max_n,
            "counts": counts,
            "classes": [c.to_json() for c in self.classes],
            "exceptions": self.exceptions,
        }
        if include_timing:
            out["timing_ms"] = {str(c.index): round(c.ms, 3) for c in self.classes}
        return out


def _decomp_integrity(h, d) -> str:
    cov = d.covered()
    r = d.retraction
    if not all(r[v] == v for v in cov):
        return "retraction moves a covered vertex"
    if not set(r.values()) <= set(cov):
        return "retraction leaves the covered set"
    for x in range(h.n):
        for y in range(x, h.n):
            if not h.colours(x, y) <= h.colours(r[x], r[y]):
                return f"retraction breaks pair {x},{y}"
    seen = [v for b in d.blocks for v in b.vertices]
    if len(seen) != len(set(seen)) or set(seen) != set(cov):
        return "blocks do not partition the covered set"
    if not d.tractable_shape():
        return "blocks outside the tractable shapes"
    return "ok"


def _wnu_check(h, d) -> str:
    from .homsearch import build_wnu_pair, verify_polymorphism

    cov = d.covered()
    sub = h.induced(cov)
    d2, _ = recognize_with_reject(sub)
    if d2 is None or not d2.is_identity():
        return "covered part did not re-recognize cleanly"
    blocks = [tuple(b.vertices) for b in d2.blocks]
    f3, f4 = build_wnu_pair(sub, blocks)
    r3 = verify_polymorphism(sub, f3, ("wnu", "conservative", "eq1"), partner=f4)
    r4 = verify_polymorphism(sub, f4, ("wnu", "conservative"))
    if not r3.ok:
        return f"f3: {r3.failures[0]}"
    if not r4.ok:
        return f"f4: {r4.failures[0]}"
    return "ok"


def _solver_check(h, index: int) -> str:
    from random import Random

    from .polysolve import solve_list_csp
    from .smallgraphs import random_coloured_graph, random_lists

    rng = Random(9000 + index)
    for trial in range(3):
        g = random_coloured_graph(4, rng)
        if trial == 2 and h.n > 1:
            lists = random_lists(g.n, h.n, rng)
        else:
            lists = tuple(frozenset(range(h.n)) for _ in range(g.n))
        inst = ListCspInstance(g, lists)
        mine = solve_list_csp(h, inst)
        oracle = find_hom(inst, h)
        if (mine is None) != (oracle is None):
            return f"trial {trial}: solver {mine is not None} vs oracle {oracle is not None}"
    return "ok"


def _audit_one(payload) -> dict:
    index, n, data = payload
    h = graph_from_json(data)
    t0 = time.perf_counter()
    checks = {}
    evidence = {}
    decomp, reject = recognize_with_reject(h)
    if decomp is not None:
        verdict = "P"
        evidence["blocks"] = [b.to_json() for b in decomp.blocks]
        checks["decomposition"] = _decomp_integrity(h, decomp)
        checks["wnu-pair"] = _wnu_check(h, decomp)
        checks["solver-oracle"] = _solver_check(h, index)
        if h.star_loops() or h.n > MAX_SIGGERS_N:
            checks["sig-clean"] = "n/a"
        else:
            checks["sig-clean"] = (
                "ok" if siggers_certificate(h) is None
                else "tractable template but Sig contains a *-odd-cycle"
            )
        if n <= 3:
            kept, _ = core_of(h)
            core = h.induced(kept)
            checks["idempotent-siggers"] = (
                "ok" if find_siggers(core, idempotent=True) is not None
                else "accepted but the core has no idempotent Siggers"
            )
    else:
        verdict = "NP-complete"
        cert = _certify_chain(h, reject)
        evidence["certificate"] = cert.to_json()
        ok, trace = verify_certificate(h, cert)
        checks["certificate"] = "ok" if ok else f"does not verify: {trace}"
        if cert.kind == "recognizer-reject" or n <= 3:
            kept, _ = core_of(h)
            core = h.induced(kept)
            checks["no-siggers"] = (
                "ok" if find_siggers(core, idempotent=True) is None
                else "rejected but the core has an idempotent Siggers"
            )
    report = ClassAudit(
        index=index,
        n=n,
        canon=canonical_form(h).hex(),
        verdict=verdict,
        evidence=evidence,
        checks=checks,
        ms=(time.perf_counter() - t0) * 1000.0,
    )
    return report.__dict__


def cmd_audit(args) -> int:
    from .graphs import graph_to_json
    from .smallgraphs import all_templates

    if args.max_n > AUDIT_GUARD_N and not args.force:
        raise GuardExceeded(
            f"audit beyond n={AUDIT_GUARD_N} needs --force (requested {args.max_n})"
        )
    if args.max_n < 1:
        raise InputError("--max-n must be at least 1")
    payloads = []
    for n in range(1, args.max_n + 1):
        for h in all_templates(n):
            payloads.append((len(payloads), n, graph_to_json(h)))

    if args.jobs > 1:
        from multiprocessing import Pool

        with Pool(args.jobs) as pool:
            raw = pool.map(_audit_one, payloads, chunksize=16)
    else:
        raw = [_audit_one(p) for p in payloads]
    raw.sort(key=lambda d: d["index"])
    report = AuditReport(args.max_n, [ClassAudit(**d) for d in raw])

    if args.format == "text":
        lines = []
        for c in report.classes:
            status = "ok" if not c.failures() else "FAIL " + "; ".join(c.failures())
            lines.append(f"class {c.index:5d} n={c.n} {c.verdict:12s} {status}")
        lines.append(f"exceptions: {len(report.exceptions)}")
        sys.stdout.write("\n".join(lines) + "\n")
    else:
        sys.stdout.write(_dump(report.to_json()))
    return 0 if not report.exceptions else 1


# --- wiring -------------------------------------------------------------


def _add_mode_flags(p) -> None:
    g = p.add_mutually_exclusive_group()
    g.add_argument("--matrix", dest="mode", action="store_const", const="matrix",
                   help="input is a {0,1,*} matrix")
    g.add_argument("--graph", dest="mode", action="store_const", const="graph",
                   help="input is a coloured graph")
    p.set_defaults(mode=None)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="redblue",
        description="Dichotomy tooling for reflexive complete 2-edge-coloured graphs.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("json", "text"), default="json")

    p = sub.add_parser("classify", help="P / NP-complete verdict for a template")
    p.add_argument("input", help="file path or inline JSON")
    _add_mode_flags(p)
    common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("solve", help="solve a (list) CSP instance")
    p.add_argument("template")
    p.add_argument("instance")
    p.add_argument("--lists", help="separate lists JSON file")
    p.add_argument("--oracle", action="store_true")
    common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("sandwich", help="matrix sandwich decision")
    p.add_argument("matrix")
    p.add_argument("instance")
    p.add_argument("--oracle", action="store_true")
    common(p)
    p.set_defaults(func=cmd_sandwich)

    p = sub.add_parser("fullhom", help="full-homomorphism sandwich classification")
    p.add_argument("input")
    common(p)
    p.set_defaults(func=cmd_fullhom)

    p = sub.add_parser("certify", help="hardness certificate for a template")
    p.add_argument("input")
    _add_mode_flags(p)
    common(p)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("core", help="core and retraction of a template")
    p.add_argument("input")
    _add_mode_flags(p)
    common(p)
    p.set_defaults(func=cmd_core)

    p = sub.add_parser("decompose", help="layered decomposition of a template")
    p.add_argument("input")
    _add_mode_flags(p)
    common(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("audit", help="exhaustive small-template cross-check")
    p.add_argument("--max-n", type=int, default=3)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--force", action="store_true")
    common(p)
    p.set_defaults(func=cmd_audit)

    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, GuardExceeded) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except (IntractableTemplateError, OpenRegimeError) as exc:
        sys.stderr.write(f"refused: {exc}\n")
        return 3
    except BudgetExceeded as exc:
        sys.stderr.write(f"refused: {exc}\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
