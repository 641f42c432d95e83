import pytest
from hypothesis import given, settings, strategies as st

from bhr.certs import emit_checkpoint, parse_checkpoint
from bhr.core import (
    InvalidArgument,
    Realization,
    LengthMultiset,
    canonical_orbit_rep,
    check_admissibility,
    verify_realization,
)
from bhr.coverage import CoverageBasis, all_cases, check_closure, classify_method
from bhr.growth import is_growable_at
from bhr.search import (
    BUDGET,
    EXHAUSTED,
    FOUND,
    SearchRequest,
    exhaustive_oracle,
    find_realization,
    orbit_members,
    prove_12x,
    run_case_algorithm,
)

EX_L = LengthMultiset.from_counts(13, {2: 1, 4: 8, 5: 3})


def test_finds_growable_example_multiset():
    out = find_realization(SearchRequest(EX_L, {4, 5}))
    assert out.status == FOUND
    r, prof = out.realizations[0]
    assert verify_realization(r, EX_L)
    assert {4, 5} <= prof.grow_set


def test_inadmissible_is_exhausted():
    out = find_realization(SearchRequest(LengthMultiset.from_counts(10, {5: 9})))
    assert out.status == EXHAUSTED and not out.realizations


def test_small_multiset_found():
    out = find_realization(SearchRequest(LengthMultiset.from_counts(6, {1: 2, 2: 2, 3: 1})))
    assert out.found


def test_request_validation():
    with pytest.raises(InvalidArgument):
        SearchRequest(EX_L, {3})
    with pytest.raises(InvalidArgument):
        SearchRequest(EX_L, budget=0)


def test_oracle_examples():
    # every edge of the 5-cycle may be the one left out, so {1^4} has 3 orbits
    reps = exhaustive_oracle(LengthMultiset.from_counts(5, {1: 4}))
    assert [r.path for r in reps] == [(0, 1, 2, 3, 4), (0, 4, 3, 2, 1), (1, 0, 4, 3, 2)]
    assert exhaustive_oracle(LengthMultiset.from_counts(6, {2: 5})) == []
    assert len(exhaustive_oracle(LengthMultiset.from_counts(5, {1: 1, 2: 3}))) == 5
    with pytest.raises(InvalidArgument):
        exhaustive_oracle(LengthMultiset.from_counts(14, {1: 13}))


def test_orbit_members_are_distinct_realizations():
    r = exhaustive_oracle(EX_L, cap=13, limit=1)[0]
    members = orbit_members(r)
    assert len(set(members)) == len(members)
    assert all(verify_realization(m, EX_L) for m in members)


def _small_multisets():
    def build(v):
        return st.lists(st.integers(1, v // 2), min_size=v - 1, max_size=v - 1).map(
            lambda xs: LengthMultiset.from_counts(v, {t: xs.count(t) for t in set(xs)}))
    return st.integers(3, 9).flatmap(build)


@settings(max_examples=60, deadline=None)
@given(_small_multisets())
def test_search_agrees_with_oracle(L):
    want = {r.path for r in exhaustive_oracle(L)}
    out = find_realization(SearchRequest(L, want_all=True))
    got = {canonical_orbit_rep(r.path, r.v) for r, _ in out.realizations}
    assert got == want
    assert out.status == (FOUND if want else EXHAUSTED)


@settings(max_examples=40, deadline=None)
@given(_small_multisets(), st.data())
def test_growable_search_agrees_with_oracle(L, data):
    usable = [x for x in L.underlying if 2 * x <= L.v]
    if not usable:
        return
    x = data.draw(st.sampled_from(usable))
    expect = any(any(is_growable_at(m, x, a) for a in range(L.v))
                 for r in exhaustive_oracle(L) for m in orbit_members(r))
    out = find_realization(SearchRequest(L, {x}))
    assert out.found == expect
    if expect:
        assert x in out.realizations[0][1].grow_set


def _full(want_all=True):
    return find_realization(SearchRequest(EX_L, frozenset(), 10_000_000, want_all))


def test_resume_matches_uninterrupted_run():
    full = _full()
    req = SearchRequest(EX_L, frozenset(), 20_000, True)
    part = find_realization(req)
    assert part.status == BUDGET and part.expanded == 20_000
    text = emit_checkpoint(part.checkpoint)
    ck = parse_checkpoint(text)
    assert emit_checkpoint(ck) == text
    done = find_realization(SearchRequest(EX_L, frozenset(), 10_000_000, True), resume=ck)
    assert done.status == full.status
    assert done.expanded == full.expanded
    assert [r.path for r, _ in done.realizations] == [r.path for r, _ in full.realizations]


def test_workers_do_not_change_the_outcome():
    one = _full()
    two = find_realization(SearchRequest(EX_L, frozenset(), 10_000_000, True), workers=2)
    assert [r.path for r, _ in one.realizations] == [r.path for r, _ in two.realizations]
    assert one.expanded == two.expanded
    cut1 = find_realization(SearchRequest(EX_L, frozenset(), 30_000, True))
    cut2 = find_realization(SearchRequest(EX_L, frozenset(), 30_000, True), workers=2)
    assert emit_checkpoint(cut1.checkpoint) == emit_checkpoint(cut2.checkpoint)


def test_case_algorithm_single_entry_cases():
    for U in ((2, 4, 5), (3, 4, 5)):
        res = run_case_algorithm(U, U)
        assert res.status == "closed"
        assert [e.triple for e in res.entries] == [U]
        assert classify_method(res.case, CoverageBasis(res.case, res.entries)) == 1


def test_case_algorithm_closes_every_123_case():
    for case in all_cases((1, 2, 3)):
        res = run_case_algorithm((1, 2, 3), case)
        assert res.status == "closed"
        rep = check_closure(case, CoverageBasis(case, res.entries))
        assert rep.covered
        for e in res.entries:
            assert verify_realization(e.realization, LengthMultiset.from_triple((1, 2, 3), e.triple))


def test_case_algorithm_budget_checkpoint_resumes():
    case = (1, 1, 5)
    cut = run_case_algorithm((2, 4, 5), case, budget=100_000)
    assert cut.status == BUDGET and cut.checkpoint.startswith("#BHR-CKPT v1 case")
    res = run_case_algorithm((2, 4, 5), case, resume=cut.checkpoint)
    assert res.status == "closed"
    assert res.expanded >= cut.expanded


@pytest.mark.parametrize("x, cells, skipped", [(4, 3, 1), (6, 30, 6)])
def test_prove_12x_small(x, cells, skipped):
    rep = prove_12x(x)
    assert rep.success
    assert (len(rep.cells), len(rep.skipped)) == (cells, skipped)
    for c in rep.cells:
        L = LengthMultiset.from_triple((1, 2, x), (c.a, c.b, c.c))
        assert check_admissibility(L).admissible
        assert is_growable_at(Realization.of(c.path), x, c.anchor)


def test_prove_12x_needs_even_x():
    with pytest.raises(InvalidArgument):
        prove_12x(7)
