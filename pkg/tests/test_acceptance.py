"""One check per acceptance criterion; each prints a PASS/FAIL line."""
import itertools
import random
import time

import pytest

from bhr.certs import TABLES_BY_U, cover_certs, emit_checkpoint, load_tables, verify_certs
from bhr.cli import main
from bhr.construct import build_12x_single
from bhr.core import (
    LengthMultiset,
    Realization,
    check_admissibility,
    is_admissible_counts,
    verify_realization,
)
from bhr.coverage import DEFAULT_BASE_CAP, BasisEntry, CaseId, covers, effective_entries, materialize
from bhr.growth import (
    GrowabilityWitness,
    grow,
    growability_feasible,
    growability_profile,
)
from bhr.search import (
    SearchRequest,
    exhaustive_oracle,
    find_realization,
    orbit_members,
    prove_12x,
)

EX11 = Realization.of((6, 10, 5, 1, 9, 11, 2, 7, 3, 12, 8, 4, 0))
EX22 = (10, 15, 19, 14, 9, 5, 1, 18, 20, 2, 6, 11, 16, 12, 7, 3, 21, 17, 13, 8, 4, 0)


def three_set_multisets(v):
    for U in itertools.combinations(range(1, v // 2 + 1), 3):
        for ex in itertools.product(range(1, v), repeat=3):
            if sum(ex) == v - 1:
                L = LengthMultiset.from_triple(U, ex)
                if check_admissibility(L).admissible:
                    yield L


def test_criterion_1_example_fidelity(criterion):
    t = time.perf_counter()
    ok_verify = verify_realization(EX11, LengthMultiset.from_counts(13, {2: 1, 4: 8, 5: 3}))
    need = {GrowabilityWitness(4, 3), GrowabilityWitness(4, 4), GrowabilityWitness(4, 5),
            GrowabilityWitness(5, 6)}
    ok_profile = need <= growability_profile(EX11).witnesses
    grown = grow(grow(EX11, GrowabilityWitness(4, 3)), GrowabilityWitness(5, 10))
    ok_grow = grown.path == EX22
    dt = time.perf_counter() - t
    ok = ok_verify and ok_profile and ok_grow and dt < 1
    criterion(1, ok, f"verify={ok_verify} profile={ok_profile} grow={ok_grow} ({dt:.3f}s)")
    assert ok


def test_criterion_2_tables(criterion):
    t = time.perf_counter()
    cases = certs = failed = uncovered = disagree = 0
    for U in TABLES_BY_U:
        cs = load_tables(U)
        rep = verify_certs(cs)
        certs += len(rep.checks)
        failed += rep.failed
        summary = cover_certs(cs, rep)
        cases += len(summary.cases)
        uncovered += sum(not c.report.covered for c in summary.cases) + len(summary.missing)
        disagree += sum(not c.method_agrees or c.expected_method is None for c in summary.cases)
    dt = time.perf_counter() - t
    ok = cases == 100 and failed == 0 and uncovered == 0 and disagree == 0 and dt < 10
    criterion(2, ok, f"{cases} cases, {certs} certificates, {failed} failed, {uncovered} uncovered, "
                     f"{disagree} method disagreements ({dt:.2f}s)")
    assert ok


def test_criterion_3_small_v_oracle(criterion):
    t = time.perf_counter()
    n = empty = 0
    for v in range(4, 13):
        for L in three_set_multisets(v):
            n += 1
            if not exhaustive_oracle(L, limit=1):
                empty += 1
    dt = time.perf_counter() - t
    criterion(3, empty == 0, f"{n} admissible multisets for v <= 12, {empty} without a realization ({dt:.1f}s)")
    assert empty == 0


def test_criterion_4_infeasible_growth(criterion):
    t = time.perf_counter()
    flagged = counter = 0
    for v in range(4, 12):
        for L in three_set_multisets(v):
            U = L.underlying
            Xs = [set(X) for k in (1, 2, 3) for X in itertools.combinations(U, k)
                  if growability_feasible(L, X).impossible]
            if not Xs:
                continue
            flagged += len(Xs)
            grow_sets = [growability_profile(m).grow_set
                         for r in exhaustive_oracle(L) for m in orbit_members(r)]
            counter += sum(any(X <= g for g in grow_sets) for X in Xs)
    dt = time.perf_counter() - t
    criterion(4, counter == 0, f"{flagged} flagged (L, X) pairs for v <= 11, {counter} counterexamples ({dt:.1f}s)")
    assert counter == 0


def test_criterion_5_construction_sweep(criterion):
    t = time.perf_counter()
    n = bad = 0
    for v in range(14, 61):
        for x in range(7, v // 2 + 1, 2):
            for a in range(1, v - 1):
                if not is_admissible_counts((1, 2, x), (a, v - 2 - a, 1)):
                    continue
                n += 1
                L = LengthMultiset.from_counts(v, {1: a, 2: v - 2 - a, x: 1})
                if not verify_realization(build_12x_single(v, x, a), L):
                    bad += 1
    worked = [
        (10, (15, 14, 13, 12, 11, 10, 9, 8, 7, 0, 1, 3, 5, 6, 4, 2)),
        (7, (12, 14, 15, 13, 11, 10, 9, 8, 7, 0, 1, 3, 5, 6, 4, 2)),
        (1, (14, 12, 10, 8, 6, 5, 3, 1, 15, 13, 11, 9, 7, 0, 2, 4)),
    ]
    exact = sum(build_12x_single(16, 7, a).path == p for a, p in worked)
    dt = time.perf_counter() - t
    ok = bad == 0 and exact == 3 and dt < 5
    criterion(5, ok, f"{n} cells for v <= 60, {bad} failed, {exact}/3 worked paths exact ({dt:.2f}s)")
    assert ok


def test_criterion_6_twelve_x_slice(criterion):
    t = time.perf_counter()
    rep = prove_12x(10, ab_max=4)
    # every admissible c >= 1 for each (a, b) of the slice lies above a realized cell of its class
    gaps = 0
    by_class = {}
    for c in rep.cells:
        if c.status == "realized":
            key = (c.a, c.b, c.c % 10)
            by_class[key] = min(by_class.get(key, c.c), c.c)
    for s in range(2, 5):
        for a in range(1, s):
            b = s - a
            for c in range(1, 200):
                if is_admissible_counts((1, 2, 10), (a, b, c)):
                    start = by_class.get((a, b, c % 10))
                    gaps += start is None or start > c
    dt = time.perf_counter() - t
    ok = rep.success and gaps == 0 and dt < 600
    criterion(6, ok, f"x=10, a+b <= 4: {rep.realized}/{len(rep.cells)} cells realized 10-growably, "
                     f"{len(rep.skipped)} classes never admissible, {gaps} uncovered c < 200 ({dt:.1f}s)")
    assert ok


def test_criterion_7_coverage_end_to_end(criterion):
    rng = random.Random(20240607)
    t = time.perf_counter()
    tried = grown = base_only = failures = 0
    for U in TABLES_BY_U:
        cs = load_tables(U)
        for sec in cs.sections:
            case = CaseId(U, sec.case)
            pool = [p for p in itertools.product(range(30), repeat=3)
                    if sum(case.triple(p)) + 1 <= 60 and case.admissible(p)]
            for p in rng.sample(pool, min(50, len(pool))):
                tri = case.triple(p)
                tried += 1
                L = LengthMultiset.from_triple(U, tri)
                entries = [_entry(c) for c in sec.certificates]
                covering = any(covers(e, tri, U) for e in effective_entries(entries, U))
                if not covering:
                    # only base orders may lack a covering certificate
                    if L.v not in DEFAULT_BASE_CAP:
                        failures += 1
                        continue
                    base_only += 1
                    out = find_realization(SearchRequest(L))
                    failures += not (out.found and verify_realization(out.realizations[0][0], L))
                    continue
                ok = verify_realization(materialize(entries, tri, U), L)
                grown += ok
                failures += not ok
    dt = time.perf_counter() - t
    criterion(7, failures == 0, f"{tried} sampled triples, {grown} grown from certificates, "
                                f"{base_only} base-order searches, {failures} failures ({dt:.1f}s)")
    assert failures == 0


def _entry(cert):
    return BasisEntry(cert.exponents, cert.realization(), cert.claimed_profile())


def _run(capsys, argv):
    code = main(argv)
    return code, capsys.readouterr().out


def test_criterion_8_determinism(criterion, capsys, tmp_path):
    search = ["search", "--U", "2,4,5", "--abc", "1,8,3", "--all", "--growable", "4"]
    outs = {_run(capsys, search + ["--workers", str(w)]) for w in (1, 1, 2, 4)}
    ckpts = set()
    for w in (1, 2, 4):
        ck = tmp_path / f"ck{w}.txt"
        _run(capsys, search + ["--budget", "20000", "--workers", str(w), "--checkpoint", str(ck)])
        ckpts.add(ck.read_text())
    covers_ = {_run(capsys, ["cover", "--shipped", ",".join(map(str, U)), "--workers", str(w)])
               for U in TABLES_BY_U for w in (1, 1, 3)}
    direct = {emit_checkpoint(find_realization(SearchRequest(LengthMultiset.from_counts(
        13, {2: 1, 4: 8, 5: 3}), frozenset(), 7_777, True), workers=w).checkpoint) for w in (1, 3)}
    ok = len(outs) == 1 and len(ckpts) == 1 and len(covers_) == 2 and len(direct) == 1
    criterion(8, ok, f"search outputs distinct={len(outs)}, checkpoints distinct={len(ckpts)}+{len(direct)}, "
                     f"cover outputs distinct per U={len(covers_) // 2}")
    assert ok


@pytest.mark.slow
def test_twelve_x_full_scale():
    rep = prove_12x(10)
    assert rep.success and len(rep.cells) == 249
