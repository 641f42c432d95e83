"""Text certificates: grammar, canonical emission, verification and coverage.

A certificate file is UTF-8 text made of three kinds of line::

    #BHR v1 U=<x>,<y>,<z> case=<a0>,<b0>,<c0>
    abc=<a>,<b>,<c> m=<m_x|->,<m_y|->,<m_z|-> path=<labels separated by spaces>
    ; free comment

Records belong to the most recent header.  Comments attach to the next
header or record; comments after the last record form the trailer.  In the
notes of a case, ``method=N`` records the method label the case is expected
to match and ``table=N`` where it was published.  A record note of the form
``as-printed abc=... m=... path=...`` keeps a published record that the
shipped transcription corrects, and ``supplement`` marks a record that was
not published at all.

Canonical files list cases by residues and records by (v, a, b, c), with
single spaces and no blank lines; ``emit`` reproduces them byte for byte.
"""
from __future__ import annotations

import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from importlib import resources
from typing import Iterable, Sequence

from .core import (
    InvalidArgument,
    LengthMultiset,
    PreconditionViolation,
    Realization,
    check_admissibility,
    multiset_discrepancy,
)
from .coverage import (
    DEFAULT_BASE_CAP,
    STRICT_BASE_CAP,
    BasisEntry,
    CaseId,
    ClosureReport,
    CoverageBasis,
    all_cases,
    check_closure,
)
from .growth import GrowabilityProfile, GrowabilityWitness, growability_problem, growability_profile

Triple = tuple[int, int, int]
HEADER = "#BHR v1"
CKPT_HEADER = "#BHR-CKPT v1"


class CertParseError(InvalidArgument):
    def __init__(self, line: int, col: int, message: str):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Certificate:
    U: Triple
    case: Triple
    exponents: Triple
    path: tuple[int, ...]
    claimed: tuple[int | None, int | None, int | None]
    provenance: tuple[str, ...] = ()

    @property
    def v(self) -> int:
        return sum(self.exponents) + 1

    @property
    def claimed_witnesses(self) -> list[tuple[int, int | None]]:
        return list(zip(self.U, self.claimed))

    def realization(self) -> Realization:
        return Realization(len(self.path), self.path)

    def claimed_profile(self) -> GrowabilityProfile:
        return GrowabilityProfile(frozenset(
            GrowabilityWitness(x, m) for x, m in zip(self.U, self.claimed) if m is not None
        ))

    def record(self) -> str:
        ms = ",".join("-" if m is None else str(m) for m in self.claimed)
        return "abc={} m={} path={}".format(
            ",".join(map(str, self.exponents)), ms, " ".join(map(str, self.path)))

    def sort_key(self) -> tuple[int, ...]:
        return (self.v, *self.exponents)

    @property
    def is_supplement(self) -> bool:
        return any(p.strip() == "supplement" for p in self.provenance)


@dataclass
class CaseSection:
    case: Triple
    notes: tuple[str, ...] = ()
    certificates: list[Certificate] = field(default_factory=list)

    def _note_value(self, key: str) -> int | None:
        for n in self.notes:
            m = re.search(rf"\b{key}=(\d+)", n)
            if m:
                return int(m.group(1))
        return None

    @property
    def expected_method(self) -> int | None:
        return self._note_value("method")

    @property
    def table(self) -> int | None:
        return self._note_value("table")


@dataclass
class CertificateSet:
    U: Triple
    sections: list[CaseSection] = field(default_factory=list)
    trailer: tuple[str, ...] = ()
    version: int = 1
    warnings: list[str] = field(default_factory=list, compare=False)

    @property
    def certificates(self) -> list[Certificate]:
        return [c for s in self.sections for c in s.certificates]

    def section(self, case: Sequence[int]) -> CaseSection | None:
        for s in self.sections:
            if s.case == tuple(case):
                return s
        return None

    def canonical(self) -> CertificateSet:
        secs = [CaseSection(s.case, s.notes, sorted(s.certificates, key=Certificate.sort_key))
                for s in sorted(self.sections, key=lambda s: s.case)]
        return CertificateSet(self.U, secs, self.trailer, self.version, list(self.warnings))

    def merged(self, other: CertificateSet) -> CertificateSet:
        if other.U != self.U:
            raise InvalidArgument(f"cannot merge sets over {self.U} and {other.U}")
        out = CertificateSet(self.U, [CaseSection(s.case, s.notes, list(s.certificates)) for s in self.sections],
                             self.trailer + other.trailer, self.version, self.warnings + other.warnings)
        for s in other.sections:
            mine = out.section(s.case)
            if mine is None:
                out.sections.append(CaseSection(s.case, s.notes, list(s.certificates)))
            else:
                mine.notes += s.notes
                mine.certificates += s.certificates
        return out.canonical()


# ---------------------------------------------------------------- parsing

_HEADER_RE = re.compile(r"#BHR v(\d+) U=(\S+) case=(\S+)$")


def _ints(text: str, lineno: int, col: int, what: str, n: int | None = 3,
          dash: bool = False) -> tuple:
    parts = text.split(",")
    if n is not None and len(parts) != n:
        raise CertParseError(lineno, col, f"{what} needs {n} comma-separated values, got {len(parts)}")
    out = []
    for p in parts:
        if dash and p == "-":
            out.append(None)
        elif p.isdigit():
            out.append(int(p))
        else:
            raise CertParseError(lineno, col, f"bad value {p!r} in {what}")
        col += len(p) + 1
    return tuple(out)


def _parse_record(line: str, lineno: int, U: Triple, case: Triple,
                  notes: tuple[str, ...]) -> Certificate:
    tokens = [(m.start() + 1, m.group()) for m in re.finditer(r"\S+", line)]
    fields: dict[str, tuple[int, str]] = {}
    labels: list[tuple[int, str]] = []
    expected = ["abc=", "m=", "path="]
    for key in expected:
        if not any(t.startswith(key) for _, t in tokens):
            raise CertParseError(lineno, len(line) + 1, f"missing field {key!r}")
    for i, key in enumerate(expected):
        if i >= len(tokens) or not tokens[i][1].startswith(key):
            col = tokens[i][0] if i < len(tokens) else len(line) + 1
            raise CertParseError(lineno, col, f"expected field {key!r} here")
        col, tok = tokens[i]
        fields[key] = (col + len(key), tok[len(key):])
    labels = [fields["path="]] + tokens[3:]
    ecol, etext = fields["abc="]
    exps = _ints(etext, lineno, ecol, "abc")
    mcol, mtext = fields["m="]
    ms = _ints(mtext, lineno, mcol, "m", dash=True)
    path = []
    for col, tok in labels:
        if not tok.isdigit():
            raise CertParseError(lineno, col, f"bad label {tok!r} in path")
        path.append(int(tok))
    if labels[0][1] == "":
        raise CertParseError(lineno, labels[0][0], "empty path")
    return Certificate(U, case, exps, tuple(path), ms, notes)


def parse_certs(text: str) -> CertificateSet:
    """Parse certificate text; structure only, no mathematics is checked."""
    U: Triple | None = None
    sections: dict[Triple, CaseSection] = {}
    order: list[Triple] = []
    current: CaseSection | None = None
    pending: list[str] = []
    warnings: list[str] = []
    version = 1
    seen: dict[Triple, set[Triple]] = {}
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.rstrip("\r")
        if not line.strip():
            continue
        if line.startswith(";"):
            pending.append(line[1:])
            continue
        if line.startswith("#"):
            m = _HEADER_RE.match(line)
            if not m:
                if not line.startswith(HEADER):
                    raise CertParseError(lineno, 1, f"expected header starting with {HEADER!r}")
                raise CertParseError(lineno, 1, "header needs 'U=<x>,<y>,<z> case=<a0>,<b0>,<c0>'")
            version = int(m.group(1))
            if version != 1:
                raise CertParseError(lineno, 6, f"unsupported format version {version}")
            u = _ints(m.group(2), lineno, m.start(2) + 1, "U")
            case = _ints(m.group(3), lineno, m.start(3) + 1, "case")
            if U is None:
                U = u
            elif u != U:
                raise CertParseError(lineno, m.start(2) + 1, f"U={u} differs from earlier U={U}")
            if case in sections:
                warnings.append(f"line {lineno}: case {case} appears again; sections merged")
                current = sections[case]
                current.notes += tuple(pending)
            else:
                current = CaseSection(case, tuple(pending))
                sections[case] = current
                order.append(case)
            pending = []
            continue
        if current is None or U is None:
            raise CertParseError(lineno, 1, "record before any header")
        cert = _parse_record(line, lineno, U, current.case, tuple(pending))
        pending = []
        if cert.exponents in seen.setdefault(current.case, set()):
            warnings.append(f"line {lineno}: duplicate exponent triple {cert.exponents} in case {current.case}")
        seen[current.case].add(cert.exponents)
        current.certificates.append(cert)
    if U is None:
        raise CertParseError(1, 1, f"no {HEADER!r} header found")
    return CertificateSet(U, [sections[c] for c in order], tuple(pending), version, warnings)


def emit_certs(cs: CertificateSet) -> str:
    """Canonical text for a certificate set."""
    out = []
    U = ",".join(map(str, cs.U))
    for s in cs.canonical().sections:
        out += [";" + n for n in s.notes]
        out.append(f"{HEADER} U={U} case={','.join(map(str, s.case))}")
        for c in s.certificates:
            out += [";" + n for n in c.provenance]
            out.append(c.record())
    out += [";" + n for n in cs.trailer]
    return "\n".join(out) + "\n"


# ---------------------------------------------------------- verification

@dataclass(frozen=True)
class CertCheck:
    cert: Certificate
    problems: tuple[str, ...] = ()
    notes: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.problems


@dataclass
class VerificationReport:
    checks: list[CertCheck]
    strict: bool = False

    @property
    def passed(self) -> int:
        return sum(c.ok for c in self.checks)

    @property
    def failed(self) -> int:
        return len(self.checks) - self.passed

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def failures(self) -> list[CertCheck]:
        return [c for c in self.checks if not c.ok]


def _path_problem(cert: Certificate) -> str | None:
    p = cert.path
    if len(p) != cert.v:
        return f"path has {len(p)} labels but a+b+c+1 = {cert.v}"
    seen = set()
    for i, t in enumerate(p):
        if t >= cert.v:
            return f"label {t} at position {i} is outside 0..{cert.v - 1}"
        if t in seen:
            return f"label {t} repeated at position {i}"
        seen.add(t)
    return None


def check_certificate(cert: Certificate, strict: bool = False) -> CertCheck:
    """Check one certificate using only core and growth primitives."""
    problems: list[str] = []
    notes: list[str] = []
    U = cert.U
    if len(set(U)) != 3 or list(U) != sorted(U):
        return CertCheck(cert, (f"U={U} is not an increasing triple",))
    try:
        case = CaseId(U, cert.case)
    except InvalidArgument as exc:
        return CertCheck(cert, (f"bad case: {exc}",))
    if not case.contains(cert.exponents):
        problems.append(f"abc={cert.exponents} is not in case {cert.case} mod {U}")
    try:
        L = LengthMultiset.from_triple(U, cert.exponents)
    except InvalidArgument as exc:
        return CertCheck(cert, tuple(problems) + (f"bad multiset: {exc}",))
    adm = check_admissibility(L)
    if not adm.admissible:
        d, k, bound = adm.violations[0]
        problems.append(f"{L} is inadmissible: {k} multiples of {d}, at most {bound} allowed")
    bad = _path_problem(cert)
    if bad is not None:
        problems.append(f"realization failure: {bad}")
        return CertCheck(cert, tuple(problems))
    r = cert.realization()
    bad = multiset_discrepancy(r, L)
    if bad is not None:
        problems.append(f"realization failure: {bad}")
        return CertCheck(cert, tuple(problems))
    full = growability_profile(r) if strict else None
    for x, m in cert.claimed_witnesses:
        if m is None:
            continue
        if 2 * x > r.v or not 0 <= m < r.v:
            problems.append(f"claimed {x}-growable at {m} is out of range for v={r.v}")
            continue
        why = growability_problem(r, x, m)
        if why is not None:
            msg = f"claimed {x}-growable at {m} fails: {why}"
            if full is not None:
                others = full.anchors(x)
                msg += f"; {x}-growable at {others}" if others else f"; no anchor makes it {x}-growable"
            problems.append(msg)
    if full is not None:
        claimed = {x for x, m in cert.claimed_witnesses if m is not None}
        for x in sorted(full.grow_set - claimed):
            notes.append(f"also {x}-growable at {full.anchors(x)} (not claimed)")
    return CertCheck(cert, tuple(problems), tuple(notes))


def _check_star(args):
    return check_certificate(*args)


def verify_certs(cs: CertificateSet, strict: bool = False, workers: int = 1) -> VerificationReport:
    certs = cs.certificates
    if workers > 1 and len(certs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            checks = list(pool.map(_check_star, [(c, strict) for c in certs], chunksize=8))
    else:
        checks = [check_certificate(c, strict) for c in certs]
    return VerificationReport(checks, strict)


# --------------------------------------------------------------- coverage

@dataclass(frozen=True)
class CaseCoverage:
    case: CaseId
    report: ClosureReport
    expected_method: int | None = None
    table: int | None = None

    @property
    def method_agrees(self) -> bool:
        """The expected label, when recorded, is one of the templates that close the case."""
        return self.expected_method is None or self.expected_method in self.report.matching


@dataclass
class CoverageSummary:
    U: Triple
    cases: list[CaseCoverage]
    missing: list[CaseId]

    @property
    def all_covered(self) -> bool:
        return not self.missing and all(c.report.covered for c in self.cases)


def basis_for(section: CaseSection, U: Triple, cap: frozenset[int] = DEFAULT_BASE_CAP) -> CoverageBasis:
    case = CaseId(U, section.case)
    entries = [BasisEntry(c.exponents, c.realization(), c.claimed_profile()) for c in section.certificates]
    return CoverageBasis(case, entries, cap)


def cover_certs(cs: CertificateSet, verification: VerificationReport | None = None,
                strict_base: bool = False) -> CoverageSummary:
    """Closure per case, using the claimed witnesses of verified certificates."""
    if verification is None:
        verification = verify_certs(cs)
    if not verification.ok:
        raise PreconditionViolation(
            f"refusing to cover: {verification.failed} certificate(s) failed verification")
    cap = STRICT_BASE_CAP if strict_base else DEFAULT_BASE_CAP
    cases = []
    for s in cs.canonical().sections:
        basis = basis_for(s, cs.U, cap)
        cases.append(CaseCoverage(basis.case, check_closure(basis.case, basis), s.expected_method, s.table))
    present = {s.case for s in cs.sections}
    missing = [c for c in all_cases(cs.U) if c.residues not in present]
    return CoverageSummary(cs.U, cases, missing)


# ----------------------------------------------------------- shipped data

TABLES_BY_U: dict[Triple, tuple[int, ...]] = {(2, 4, 5): (1, 2, 3, 4), (3, 4, 5): (5, 6, 7, 8)}
_AS_PRINTED = re.compile(r"\s*as-printed\s+(.*)$")


def _restore_printed(cert: Certificate) -> Certificate | None:
    if cert.is_supplement:
        return None
    for note in cert.provenance:
        m = _AS_PRINTED.match(note)
        if not m:
            continue
        values = dict(tok.split("=", 1) for tok in re.findall(r"\w+=\S+(?: \d+)*", m.group(1)))
        kw = {}
        if "abc" in values:
            kw["exponents"] = _ints(values["abc"], 0, 0, "abc")
        if "m" in values:
            kw["claimed"] = _ints(values["m"], 0, 0, "m", dash=True)
        if "path" in values:
            kw["path"] = tuple(int(t) for t in values["path"].split())
        return replace(cert, **kw)
    return cert


def load_table(n: int, as_printed: bool = False) -> CertificateSet:
    """One shipped table; ``as_printed`` undoes the recorded corrections."""
    if not 1 <= n <= 8:
        raise InvalidArgument(f"tables are numbered 1-8, got {n}")
    text = resources.files("bhr.data").joinpath(f"table{n}.bhr").read_text(encoding="utf-8")
    cs = parse_certs(text)
    if as_printed:
        for s in cs.sections:
            s.certificates = [c for c in map(_restore_printed, s.certificates) if c is not None]
    return cs


def load_tables(U: Sequence[int], as_printed: bool = False) -> CertificateSet:
    U = tuple(U)
    if U not in TABLES_BY_U:
        raise InvalidArgument(f"no shipped tables for U={U}")
    out = None
    for n in TABLES_BY_U[U]:
        t = load_table(n, as_printed)
        out = t if out is None else out.merged(t)
    return out


# ------------------------------------------------------------ checkpoints

def _csv(xs: Iterable[int]) -> str:
    return ",".join(map(str, xs))


def emit_checkpoint(ck) -> str:
    """Serialize a search Checkpoint."""
    lines = [f"{CKPT_HEADER} search",
             "L=" + ",".join(f"{ell}^{m}" for ell, m in ck.L.counts),
             "growable=" + _csv(sorted(ck.required_growability)),
             f"all={int(ck.want_all)}",
             f"expanded={ck.expanded}",
             "frontier=" + " ".join(map(str, ck.frontier))]
    lines += ["found=" + " ".join(map(str, r.path)) for r in ck.found]
    return "\n".join(lines) + "\n"


def parse_checkpoint(text: str):
    from .search.engine import Checkpoint

    lines = [ln for ln in text.split("\n") if ln.strip()]
    if not lines or lines[0] != f"{CKPT_HEADER} search":
        raise CertParseError(1, 1, f"expected {CKPT_HEADER + ' search'!r}")
    kv: dict[str, str] = {}
    found = []
    for no, ln in enumerate(lines[1:], start=2):
        if "=" not in ln:
            raise CertParseError(no, 1, "expected key=value")
        k, val = ln.split("=", 1)
        if k == "found":
            found.append(Realization.of(int(t) for t in val.split()))
        else:
            kv[k] = val
    for k in ("L", "growable", "all", "expanded", "frontier"):
        if k not in kv:
            raise CertParseError(len(lines) + 1, 1, f"missing field {k + '='!r}")
    counts = {}
    for item in kv["L"].split(","):
        ell, m = item.split("^")
        counts[int(ell)] = int(m)
    L = LengthMultiset.from_counts(sum(counts.values()) + 1, counts)
    X = frozenset(int(t) for t in kv["growable"].split(",") if t)
    frontier = tuple(int(t) for t in kv["frontier"].split())
    return Checkpoint(L, X, kv["all"] == "1", int(kv["expanded"]), frontier, found)
