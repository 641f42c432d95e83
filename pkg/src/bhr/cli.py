"""Command line interface.

Exit codes: 0 everything passed or was found, 1 a mathematical failure
(bad certificate, uncovered case, nothing found), 2 usage error, 3 a search
budget ran out.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .certs import (
    Certificate,
    CaseSection,
    CertificateSet,
    cover_certs,
    emit_certs,
    emit_checkpoint,
    load_table,
    load_tables,
    parse_certs,
    parse_checkpoint,
    verify_certs,
)
from .core import BHRError, InvalidArgument, LengthMultiset, PreconditionViolation
from .growth import grow_many, growability_profile

OK, FAIL, USAGE, BUDGET = 0, 1, 2, 3


def _ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _witness_text(r, prof) -> str:
    parts = []
    for x in sorted(set(r.lengths())):
        anchors = prof.anchors(x)
        parts.append(f"{x}:{','.join(map(str, anchors)) if anchors else '-'}")
    return " ".join(parts)


def _read_sets(files: Sequence[str], shipped: tuple[int, ...] | None) -> CertificateSet:
    sets = []
    if shipped:
        sets.append(load_tables(shipped))
    for f in files:
        sets.append(parse_certs(Path(f).read_text(encoding="utf-8")))
    if not sets:
        raise InvalidArgument("give at least one certificate file or --shipped U")
    out = sets[0]
    for s in sets[1:]:
        out = out.merged(s)
    for w in out.warnings:
        print(f"warning: {w}", file=sys.stderr)
    return out


def cmd_verify(args) -> int:
    cs = _read_sets(args.files, args.shipped)
    rep = verify_certs(cs, strict=args.strict, workers=args.workers)
    for chk in rep.checks:
        c = chk.cert
        tag = "ok  " if chk.ok else "FAIL"
        if not chk.ok or args.verbose:
            print(f"{tag} case={','.join(map(str, c.case))} abc={','.join(map(str, c.exponents))}")
            for p in chk.problems:
                print(f"     {p}")
            for n in chk.notes:
                print(f"     note: {n}")
    print(f"{rep.passed} passed, {rep.failed} failed")
    return OK if rep.ok else FAIL


def cmd_cover(args) -> int:
    cs = _read_sets(args.files, args.shipped)
    rep = verify_certs(cs, workers=args.workers)
    if not rep.ok:
        print(f"refusing to cover: {rep.failed} certificate(s) failed verification")
        return FAIL
    summary = cover_certs(cs, rep, strict_base=args.strict_base)
    bad = 0
    for cc in summary.cases:
        r = cc.report
        label = "-" if r.method_label is None else str(r.method_label)
        exp = "" if cc.expected_method is None else f" expected={cc.expected_method}"
        state = "covered" if r.covered else "UNCOVERED"
        print(f"case={','.join(map(str, cc.case.residues))} {state} method={label}"
              f" matching={','.join(map(str, r.matching)) or '-'}{exp}")
        if not r.covered:
            bad += 1
            more = " (and beyond)" if r.unbounded else ""
            shown = " ".join("(" + ",".join(map(str, t)) + ")" for t in r.exceptions[:10])
            print(f"     exceptions: {shown}{more}")
            if r.joint_only:
                print(f"     note: {len(r.joint_only)} of these are covered only if v/2-edge paths grow jointly")
        elif not cc.method_agrees:
            print(f"     note: expected method {cc.expected_method} does not close this case")
    print(f"{len(summary.cases)} cases, {bad} uncovered, {len(summary.missing)} absent")
    return OK if bad == 0 else FAIL


def cmd_grow(args) -> int:
    cs = _read_sets([args.file], None)
    status = OK
    for c in cs.certificates:
        if args.abc and c.exponents != args.abc:
            continue
        try:
            g = grow_many(c.realization(), args.schedule)
        except (PreconditionViolation, InvalidArgument) as exc:
            print(f"FAIL abc={','.join(map(str, c.exponents))}: {exc}")
            status = FAIL
            continue
        L = LengthMultiset.from_counts(g.v, {x: g.lengths().count(x) for x in set(g.lengths())})
        print(f"abc={','.join(map(str, c.exponents))} -> {L} path={' '.join(map(str, g.path))}")
    return status


def cmd_search(args) -> int:
    from .search import BUDGET as S_BUDGET, FOUND, SearchRequest, find_realization

    L = LengthMultiset.from_triple(args.U, args.abc)
    req = SearchRequest(L, frozenset(args.growable), args.budget, args.all)
    resume = None
    if args.resume:
        resume = parse_checkpoint(Path(args.resume).read_text(encoding="utf-8"))
    out = find_realization(req, workers=args.workers, resume=resume)
    print(f"{out.status} L={L} v={L.v} expanded={out.expanded} count={len(out.realizations)}")
    for r, prof in out.realizations:
        print(f"path={' '.join(map(str, r.path))} growable={_witness_text(r, prof)}")
    if out.status == S_BUDGET:
        if args.checkpoint and out.checkpoint is not None:
            Path(args.checkpoint).write_text(emit_checkpoint(out.checkpoint), encoding="utf-8")
            print(f"checkpoint written to {args.checkpoint}")
        return BUDGET
    return OK if out.status == FOUND else FAIL


def cmd_case(args) -> int:
    from .search import run_case_algorithm

    resume = Path(args.resume).read_text(encoding="utf-8") if args.resume else None
    res = run_case_algorithm(args.U, args.case, budget=args.budget, max_offset=args.max_offset,
                             workers=args.workers, resume=resume)
    sec = CaseSection(tuple(args.case), (f" found by the case algorithm: {res.status}",))
    for e in res.entries:
        claimed = tuple(e.profile.smallest_anchor(x) for x in args.U)
        sec.certificates.append(Certificate(tuple(args.U), tuple(args.case), e.triple,
                                            e.realization.path, claimed))
    text = emit_certs(CertificateSet(tuple(args.U), [sec]))
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    print(f"{res.status}: {len(res.entries)} realizations, expanded={res.expanded}", file=sys.stderr)
    if res.status == "budget-exceeded":
        if args.checkpoint and res.checkpoint:
            Path(args.checkpoint).write_text(res.checkpoint, encoding="utf-8")
        return BUDGET
    return OK if res.status == "closed" else FAIL


def cmd_prove_12x(args) -> int:
    from .search import prove_12x

    rep = prove_12x(args.x, budget=args.budget, ab_max=args.ab_max, workers=args.workers)
    for c in rep.cells:
        extra = f" m={c.anchor} path={' '.join(map(str, c.path))}" if c.status == "realized" else ""
        print(f"a={c.a} b={c.b} c={c.c} {c.status}{extra}")
    for a, b, c in rep.skipped:
        print(f"a={a} b={b} c={c} skipped (class never admissible)")
    print(f"x={rep.x} cells={len(rep.cells)} realized={rep.realized} skipped={len(rep.skipped)} "
          f"max_c={rep.max_c} growth_threshold={rep.growth_threshold} bound={rep.counterexample_bound}")
    if rep.success:
        return OK
    return BUDGET if any(c.status == "budget-exceeded" for c in rep.cells) else FAIL


def cmd_construct_12x(args) -> int:
    from .construct import build_12x_single

    r = build_12x_single(args.v, args.x, args.a)
    print(" ".join(map(str, r.path)))
    return OK


def cmd_oracle(args) -> int:
    from .search import exhaustive_oracle

    L = LengthMultiset.from_triple(args.U, args.abc)
    reps = exhaustive_oracle(L, cap=args.cap)
    print(f"{len(reps)} orbit(s) for L={L} v={L.v}")
    for r in reps:
        print(f"path={' '.join(map(str, r.path))} growable={_witness_text(r, growability_profile(r))}")
    return OK if reps else FAIL


def cmd_table(args) -> int:
    sys.stdout.write(emit_certs(load_table(args.n, as_printed=args.as_printed)))
    return OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bhr", description="Growable realizations of edge-length multisets.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def files_args(sp):
        sp.add_argument("files", nargs="*", help="certificate files")
        sp.add_argument("--shipped", type=_ints, metavar="U", help="include the shipped tables for U (2,4,5 or 3,4,5)")
        sp.add_argument("--workers", type=int, default=1)

    sp = sub.add_parser("verify", help="check certificates")
    files_args(sp)
    sp.add_argument("--strict", action="store_true", help="recompute full growability profiles")
    sp.add_argument("-v", "--verbose", action="store_true")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("cover", help="check closure of each case")
    files_args(sp)
    sp.add_argument("--strict-base", action="store_true", help="only trust orders v <= 12 as base cases")
    sp.set_defaults(func=cmd_cover)

    sp = sub.add_parser("grow", help="grow certificates along a schedule")
    sp.add_argument("file")
    sp.add_argument("--schedule", type=_ints, required=True)
    sp.add_argument("--abc", type=_ints, help="only this exponent triple")
    sp.set_defaults(func=cmd_grow)

    sp = sub.add_parser("search", help="search for (growable) realizations")
    sp.add_argument("--U", type=_ints, required=True)
    sp.add_argument("--abc", type=_ints, required=True)
    sp.add_argument("--growable", type=_ints, default=())
    sp.add_argument("--budget", type=int, default=10_000_000)
    sp.add_argument("--all", action="store_true", help="every orbit instead of the first hit")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--checkpoint", help="where to write a checkpoint if the budget runs out")
    sp.add_argument("--resume", help="checkpoint file to resume from")
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("case", help="run the case algorithm and print certificates")
    sp.add_argument("--U", type=_ints, required=True)
    sp.add_argument("--case", type=_ints, required=True)
    sp.add_argument("--budget", type=int, default=10_000_000)
    sp.add_argument("--max-offset", type=int, default=4)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--out")
    sp.add_argument("--checkpoint")
    sp.add_argument("--resume")
    sp.set_defaults(func=cmd_case)

    sp = sub.add_parser("prove-12x", help="x-growable realizations for {1^a, 2^b, x^c}")
    sp.add_argument("--x", type=int, required=True)
    sp.add_argument("--budget", type=int, default=10_000_000, help="per cell")
    sp.add_argument("--ab-max", type=int)
    sp.add_argument("--workers", type=int, default=1)
    sp.set_defaults(func=cmd_prove_12x)

    sp = sub.add_parser("construct-12x", help="closed-form realization of {1^a, 2^b, x}")
    sp.add_argument("--v", type=int, required=True)
    sp.add_argument("--x", type=int, required=True)
    sp.add_argument("--a", type=int, required=True)
    sp.set_defaults(func=cmd_construct_12x)

    sp = sub.add_parser("oracle", help="all realizations up to symmetry (small v)")
    sp.add_argument("--U", type=_ints, required=True)
    sp.add_argument("--abc", type=_ints, required=True)
    sp.add_argument("--cap", type=int, default=12)
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("table", help="print a shipped table")
    sp.add_argument("n", type=int)
    sp.add_argument("--as-printed", action="store_true", help="undo recorded corrections")
    sp.set_defaults(func=cmd_table)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InvalidArgument, PreconditionViolation, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except BHRError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return FAIL


if __name__ == "__main__":
    sys.exit(main())
