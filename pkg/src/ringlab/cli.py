"""Command-line interface: ``ringlab <command> ...``.

Exit codes: 0 when every check passes, 1 when a check fails, 2 on usage or
input errors.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .algebra import AlgebraError, classify_stretch, hilbert_function, ideal_power, is_gorenstein, mu, quotient
from .cache import Cache, make_key
from .polynomials import ParseError
from .ringio import RingFile, algebra_from_file, format_ring_file, module_from_spec, parse_ring_file, ring_file_from_algebra

log = logging.getLogger("ringlab")

CHECKS = ("dress", "levin", "golod", "truncation", "denominator", "stretched", "divisibility", "multiplicity", "pairing", "ar")


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# helpers


def _read(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        rf = parse_ring_file(text)
    except ParseError as exc:
        raise UsageError(f"{path}: {exc}") from None
    try:
        A = algebra_from_file(rf)
    except AlgebraError as exc:
        raise UsageError(f"{path}: {exc}") from None
    return rf, A, hashlib.sha256(text.encode()).hexdigest()


def _module(rf: RingFile, A, name):
    if name is None:
        return None
    if name not in rf.modules:
        raise UsageError(f"no module named {name!r} (available: {', '.join(rf.modules) or 'none'})")
    return module_from_spec(A, rf.modules[name])


def _series_list(S):
    return [int(c) if c.denominator == 1 else str(c) for c in S.coeffs]


def _analyze(A):
    soc = A.socle
    return {
        "dim": A.dim,
        "hilbert_function": hilbert_function(A),
        "edim": A.edim,
        "loewy_length": A.loewy_length,
        "gorenstein": is_gorenstein(A),
        "socle_dim": soc.dim,
        "socle": [A.format(v) for v in soc.vectors],
        "mu(m^2)": mu(ideal_power(A, 2)) if A.dim > 1 else 0,
        "classification": classify_stretch(A),
        "basis": list(A.basis),
    }


# ---------------------------------------------------------------------------
# commands


def cmd_analyze(args, ctx):
    rf, A, h = _read(args.file)
    ctx["inputs"][args.file] = h
    return {"algebra": _analyze(A)}, []


def cmd_decompose(args, ctx):
    from .decomposition import factorize

    rf, A, h = _read(args.file)
    ctx["inputs"][args.file] = h
    if not is_gorenstein(A):
        raise UsageError("decompose needs a Gorenstein algebra")
    fac = factorize(A)
    factors = []
    for f in fac.factors:
        factors.append({"dim": f.dim, "edim": f.edim, "loewy_length": f.loewy_length, "hilbert_function": hilbert_function(f), "basis": list(f.basis)})
    certs = []
    checks = []
    for i, c in enumerate(fac.certificates):
        ok = all(bool(v) for v in c.checks.values())
        certs.append({"step": i + 1, "S_basis": list(c.S.basis), "T_basis": list(c.T.basis), "checks": {k: bool(v) for k, v in c.checks.items()}})
        checks.append({"check": f"split-{i + 1}", "passed": ok})
    return {"factors": factors, "certificates": certs, "terminal": fac.terminal}, checks


def _betti_payload(A, M, N, route, max_dim, seed):
    from .resolution import betti_numbers

    res = betti_numbers(A, M, N, route=route, max_dim=max_dim, seed=seed)
    return {"betti": res.betti, "route": res.route, "direct_degree": res.direct_degree, "notes": res.notes}


def cmd_betti(args, ctx):
    rf, A, h = _read(args.file)
    ctx["inputs"][args.file] = h
    M = _module(rf, A, args.module)
    mbytes = b"" if M is None else M.matrix.tobytes()
    key = make_key("betti", A.canonical_bytes(), mbytes, args.N, args.route, args.max_dim)
    payload, hit = ctx["cache"].get_or_compute(key, lambda: _betti_payload(A, M, args.N, args.route, args.max_dim, ctx["seed"]))
    ctx["cache_status"] = "hit" if hit else ("miss" if ctx["cache"].enabled else "off")
    return {"module": args.module or "k", "N": args.N, **payload}, []


def cmd_verify(args, ctx):
    from . import series
    from .decomposition import OutOfRange, multiplicity11_certificate
    from .resolution import ar_diagnostic, poincare_pairing_check
    from .series import Polynomial

    loaded = []
    for f in args.files:
        rf, A, h = _read(f)
        ctx["inputs"][f] = h
        loaded.append((f, rf, A))
    N = args.N
    checks = []

    def add(name, report):
        d = report.to_dict()
        d["check"] = name
        checks.append(d)

    c = args.check
    if c == "dress":
        if len(loaded) != 2:
            raise UsageError("dress needs exactly two ring files")
        (fa, rfa, A), (fb, rfb, B) = loaded
        M = _module(rfa, A, args.module)
        add("dress", series.check_dress(A, B, M, N, route=args.route))
        return {}, checks
    for f, rf, A in loaded:
        try:
            if c == "levin":
                add(f"levin:{f}", series.check_levin_socle(A, N))
            elif c == "golod":
                add(f"golod:{f}", series.golod_certificate(A, N, route=args.route))
            elif c == "truncation":
                powers = [args.power] if args.power else list(range(2, A.loewy_length + 1))
                for i in powers:
                    B = quotient(A, ideal_power(A, i))
                    pred = series.stretched_poincare(B, N, parent=A, power=i, route=args.route)
                    gold = series.golod_certificate(B, N, route=args.route)
                    agree = gold.details.get("verdict") == "numerically-golod"
                    checks.append({"check": f"truncation:{f}:m^{i}", "passed": bool(pred.verified and agree), "formula": str(pred.formula), "computed": _series_list(pred.computed), "golod": gold.details.get("verdict"), "diffs": [[k, str(a), str(b)] for k, a, b in pred.diffs]})
            elif c == "denominator":
                d = series.backelin_roos_denominator(A)
                add(f"denominator:{f}:k", series.check_denominator(A, None, d, N, route=args.route))
                for name, spec in rf.modules.items():
                    add(f"denominator:{f}:{name}", series.check_denominator(A, module_from_spec(A, spec), d, N, route=args.route))
            elif c == "stretched":
                pred = series.stretched_poincare(A, N, route=args.route)
                checks.append({"check": f"stretched:{f}", "passed": bool(pred.verified), "class": pred.label, "formula": str(pred.formula), "computed": _series_list(pred.computed), "route": pred.route, "diffs": [[k, str(a), str(b)] for k, a, b in pred.diffs]})
                d = pred.formula.denominator
                if pred.label == "gorenstein-mu(m^2)<=2":
                    d = Polynomial([1, 1]) ** A.edim * d
                for name, spec in rf.modules.items():
                    add(f"stretched:{f}:{name}", series.check_denominator(A, module_from_spec(A, spec), d, N, route=args.route))
            elif c == "divisibility":
                d = series.backelin_roos_denominator(A)
                add(f"divisibility:{f}", series.check_deviation_divisibility(A, d, args.level, N))
            elif c == "multiplicity":
                try:
                    cert = multiplicity11_certificate(A)
                    checks.append({"check": f"multiplicity:{f}", "passed": True, "certificate": cert.kind, "edim": cert.edim, "loewy_length": cert.loewy_length, "length": cert.length})
                except OutOfRange as exc:
                    checks.append({"check": f"multiplicity:{f}", "passed": False, "note": str(exc)})
            elif c == "pairing":
                pr = poincare_pairing_check(A)
                checks.append({"check": f"pairing:{f}", "passed": bool(pr.nondegenerate), "rank": pr.rank, "h1": pr.h1})
            elif c == "ar":
                targets = [(n, module_from_spec(A, s)) for n, s in rf.modules.items()] or [("k", None)]
                for name, M in targets:
                    diag = ar_diagnostic(A, M, N)
                    checks.append({"check": f"ar:{f}:{name}", "passed": diag["verdict"] != "vanishing-window-found", "verdict": diag["verdict"], "ext": {str(k): v for k, v in diag["ext"].items()}})
        except AlgebraError as exc:
            checks.append({"check": f"{c}:{f}", "passed": False, "error": str(exc)})
    return {}, checks


def cmd_gen(args, ctx):
    from .generate import random_gorenstein

    F, A = random_gorenstein(args.kind, args.vars, args.socle_degree, args.seed)
    rf = RingFile(A.field, A.names, None, F)
    ctx["text"] = format_ring_file(rf)
    return {"kind": args.kind, "vars": args.vars, "socle_degree": args.socle_degree, "dim": A.dim, "hilbert_function": hilbert_function(A)}, []


def cmd_compose(args, ctx):
    from .products import connected_sum, fibre_product

    _, A, ha = _read(args.file_a)
    _, B, hb = _read(args.file_b)
    ctx["inputs"][args.file_a] = ha
    ctx["inputs"][args.file_b] = hb
    try:
        W = fibre_product(A, B) if args.kind == "fibre" else connected_sum(A, B)
    except AlgebraError as exc:
        raise UsageError(str(exc)) from None
    C = W.algebra
    rf = ring_file_from_algebra(C)
    ctx["text"] = format_ring_file(rf)
    return {"kind": args.kind, "algebra": _analyze(C)}, []


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ringlab", description="Computations with Artinian local algebras.")
    p.add_argument("--version", action="version", version=f"ringlab {__version__}")
    p.add_argument("--format", choices=("markdown", "json"), default="markdown")
    p.add_argument("--report", help="also write the JSON report to this path")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-cache", action="store_true")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="invariants and classification")
    a.add_argument("file")
    a.set_defaults(func=cmd_analyze)

    d = sub.add_parser("decompose", help="split into connected summands with certificates")
    d.add_argument("file")
    d.set_defaults(func=cmd_decompose)

    b = sub.add_parser("betti", help="Betti numbers of k or of a module from the file")
    b.add_argument("file")
    b.add_argument("--module")
    b.add_argument("-N", type=int, default=12)
    b.add_argument("--route", choices=("auto", "direct", "socle-quotient"), default="auto")
    b.add_argument("--max-dim", type=int, default=2500)
    b.set_defaults(func=cmd_betti)

    v = sub.add_parser("verify", help="run a Poincare-series or structure check")
    v.add_argument("check", choices=CHECKS)
    v.add_argument("files", nargs="+")
    v.add_argument("-N", type=int, default=12)
    v.add_argument("--module")
    v.add_argument("--power", type=int)
    v.add_argument("--level", type=int, default=2)
    v.add_argument("--route", choices=("auto", "direct", "socle-quotient"), default="auto")
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("gen", help="generate a random algebra")
    gsub = g.add_subparsers(dest="generator", required=True)
    gi = gsub.add_parser("inverse-system")
    gi.add_argument("--vars", type=int, required=True)
    gi.add_argument("--socle-degree", type=int, required=True)
    gi.add_argument("--seed", type=int, default=0)
    gi.add_argument("--kind", choices=("stretched", "almost-stretched", "compressed", "quadratic"), default="compressed")
    gi.set_defaults(func=cmd_gen)

    c = sub.add_parser("compose", help="fibre product or connected sum of two algebras")
    c.add_argument("kind", choices=("fibre", "connected"))
    c.add_argument("file_a")
    c.add_argument("file_b")
    c.set_defaults(func=cmd_compose)
    return p


def _markdown(report) -> str:
    lines = [f"# ringlab {' '.join(report['command'])}", ""]
    for k, v in report["results"].items():
        lines.append(f"- **{k}**: {json.dumps(v) if isinstance(v, (dict, list)) else v}")
    if report["checks"]:
        lines += ["", "| check | result |", "|---|---|"]
        for c in report["checks"]:
            lines.append(f"| {c['check']} | {'pass' if c['passed'] else 'FAIL'} |")
            if not c["passed"] and c.get("diffs"):
                lines.append(f"|  diffs | {c['diffs'][:6]} |")
    lines += ["", f"cache: {report['cache']}  seed: {report['seed']}  time: {report['timings']['total']:.3f}s"]
    return "\n".join(lines) + "\n"


def run_command(argv) -> tuple[dict | None, int]:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return None, 0 if exc.code == 0 else 2
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    ctx = {"inputs": {}, "cache": Cache(enabled=not args.no_cache), "cache_status": "off" if args.no_cache else "unused", "seed": args.seed}
    t0 = time.perf_counter()
    try:
        results, checks = args.func(args, ctx)
    except UsageError as exc:
        print(f"ringlab: error: {exc}", file=sys.stderr)
        return None, 2
    passed = all(c["passed"] for c in checks)
    report = {
        "tool": f"ringlab {__version__}",
        "command": list(argv),
        "seed": args.seed,
        "inputs": ctx["inputs"],
        "results": results,
        "checks": checks,
        "passed": passed,
        "cache": ctx["cache_status"],
        "timings": {"total": time.perf_counter() - t0},
    }
    if "text" in ctx:
        sys.stdout.write(ctx["text"])
    elif args.format == "json":
        sys.stdout.write(json.dumps(report, indent=2, sort_keys=True, default=str) + "\n")
    else:
        sys.stdout.write(_markdown(report))
    if args.report:
        Path(args.report).write_text(json.dumps(report, indent=2, sort_keys=True, default=str) + "\n", encoding="utf-8")
    return report, 0 if passed else 1


def main(argv=None) -> int:
    _, code = run_command(sys.argv[1:] if argv is None else argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
