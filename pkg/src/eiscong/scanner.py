"""Prime sweeps against the non-existence bounds, table checks, and result caching.

For a quotient E2^r E4^s E6^t with r >= 0, a simple congruence
a(ell*n + c) = 0 mod ell can only exist for ell <= 2r + 8|s| + 12|t| + 21
(or for the identity quotient).  The sweep certifies, prime by prime up
to that bound, exactly which residues carry congruences, and samples a
few primes above the bound as a consistency check.
"""

from __future__ import annotations

import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from sympy import isprime, nextprime, primerange

from . import __version__
from .eisenstein import (
    QuotientSpec,
    eisenstein_power_product,
    lift_weight,
    replacement_lift,
)
from .filtration import ModularFormModEll, sturm
from .series import PrecisionError
from .tate import (
    METHOD_BELOW_BOUND,
    METHOD_RIGOROUS,
    METHOD_THETA_VANISHING,
    METHOD_TRIVIAL_PRIME,
    THETA_WINDOW_DEFAULT,
    CongruenceReport,
    certified_residues,
    theta_vanishes,
    theta_zero_congruences_hold,
)

log = logging.getLogger(__name__)

RESULTS_DIR_ENV = "EISCONG_RESULTS_DIR"
RECORD_FIELDS = (
    "r", "s", "t", "ell", "method", "residues", "weight", "precision", "bound", "version",
)


class CounterexampleError(Exception):
    """A claim that is supposed to hold was refuted by computation."""


def theorem_bound(spec: QuotientSpec) -> int:
    """Primes with simple congruences satisfy ell <= 2r + 8|s| + 12|t| + 21."""
    return 2 * spec.r + 8 * abs(spec.s) + 12 * abs(spec.t) + 21


def remark_bound(spec: QuotientSpec) -> int:
    """The sharper bound, split on the sign of w = r + 4s + 6t.

    For w > 0 the binding inequality is ell <= 2w - 1; for w <= 0 it is
    ell <= 21 - 8s - 12t.  Either way primes below |s|, |t| or 12 are
    never excluded.  The bound is tight: E4*E6 has w = 10 and carries
    congruences at exactly ell = 19 = 2w - 1.
    """
    shared = (abs(spec.s) - 1, abs(spec.t) - 1, 11)
    total = spec.r + 4 * spec.s + 6 * spec.t
    if total > 0:
        return max(*shared, 2 * total - 1)
    return max(*shared, 21 - 8 * spec.s - 12 * spec.t)


def case_split(spec: QuotientSpec, ell: int) -> int:
    """Which size regime of r + 4s + 6t applies at ell (1 through 4).

    1: at least ell in absolute value; 2: strictly between 0 and ell;
    3: zero; 4: strictly between -ell and 0.  Exactly one holds.
    """
    total = spec.r + 4 * spec.s + 6 * spec.t
    if abs(total) >= ell:
        return 1
    if total > 0:
        return 2
    if total == 0:
        return 3
    return 4


def certificate_precision(spec: QuotientSpec, ell: int) -> int:
    """Series length needed for the congruence certificate at ell."""
    return sturm(lift_weight(spec, ell) + (ell + 1) ** 2 // 2) + 2


def profile_precision(spec: QuotientSpec, ell: int) -> int:
    """Series length needed to profile the full Tate cycle of the lift."""
    return sturm(lift_weight(spec, ell) + (ell - 1) * (ell + 1)) + 1


def scan_prime(
    spec: QuotientSpec,
    ell: int,
    window: int = THETA_WINDOW_DEFAULT,
    precision: int | None = None,
) -> CongruenceReport:
    """Full congruence analysis of one prime.

    Primes 2 and 3 are trivial (every series involved reduces to 1) and
    reported without analysis.  A prime smaller than |s| or |t| admits
    no lift of the standard shape and is recorded as disposed of by
    size.  Otherwise theta vanishing is decided rigorously on the lift,
    and failing that, every nonzero residue is settled by the finite
    certificate.
    """
    if not isprime(ell):
        raise ValueError(f"ell must be prime, got {ell}")
    if ell in (2, 3):
        return CongruenceReport(spec, ell, METHOD_TRIVIAL_PRIME, tuple(range(1, ell)))
    if ell + spec.s < 0 or ell + spec.t < 0:
        return CongruenceReport(spec, ell, METHOD_BELOW_BOUND, ())
    minimum = certificate_precision(spec, ell)
    if precision is None:
        precision = minimum
    elif precision < minimum:
        raise PrecisionError(
            f"requested precision {precision} is below the minimum {minimum} at ell={ell}"
        )
    lifted = replacement_lift(spec, ell, precision)
    window_zero = theta_vanishes(spec, ell, window)
    theta_series = lifted.series.theta()
    s0 = sturm(lifted.weight + ell + 1)
    certified_zero = all(theta_series.coefficient(n) == 0 for n in range(s0 + 1))
    if window_zero != certified_zero:
        raise PrecisionError(
            f"theta-vanishing window {window} disagrees with the Sturm certificate "
            f"at ell={ell}; raise the window"
        )
    if certified_zero and ell >= 17 and not theta_zero_congruences_hold(spec, ell):
        raise PrecisionError(
            f"theta image vanishes through precision at ell={ell} but the coefficient "
            "system forbids it; raise the precision"
        )
    if certified_zero:
        return CongruenceReport(
            spec,
            ell,
            METHOD_THETA_VANISHING,
            tuple(range(1, ell)),
            weight=lifted.weight,
            precision=precision,
        )
    residues = certified_residues(ModularFormModEll.from_lift(lifted))
    return CongruenceReport(
        spec, ell, METHOD_RIGOROUS, residues, weight=lifted.weight, precision=precision
    )


def _scan_worker(args):
    spec, ell, window, precision = args
    return scan_prime(spec, ell, window, precision)


def report_to_record(report: CongruenceReport, bound: int, version: str = __version__) -> dict:
    return {
        "r": report.spec.r,
        "s": report.spec.s,
        "t": report.spec.t,
        "ell": report.ell,
        "method": report.method,
        "residues": list(report.residues),
        "weight": report.weight,
        "precision": report.precision,
        "bound": bound,
        "version": version,
    }


def record_to_report(record: dict) -> CongruenceReport:
    return CongruenceReport(
        spec=QuotientSpec(record["r"], record["s"], record["t"]),
        ell=record["ell"],
        method=record["method"],
        residues=tuple(record["residues"]),
        weight=record["weight"],
        precision=record["precision"],
    )


@dataclass(frozen=True)
class ScanResult:
    """Outcome of one prime sweep: per-prime reports plus the above-bound sample."""

    spec: QuotientSpec
    bound_kind: str
    bound: int
    theorem_bound: int
    remark_bound: int
    identity_quotient: bool
    reports: tuple[CongruenceReport, ...]
    sampled_above: tuple[CongruenceReport, ...]
    version: str
    started_at: str
    finished_at: str

    def to_records(self) -> list[dict]:
        return [
            report_to_record(rep, self.bound, self.version)
            for rep in self.reports + self.sampled_above
        ]

    def to_json(self) -> dict:
        return {
            "r": self.spec.r,
            "s": self.spec.s,
            "t": self.spec.t,
            "bound_kind": self.bound_kind,
            "bound": self.bound,
            "theorem_bound": self.theorem_bound,
            "remark_bound": self.remark_bound,
            "identity_quotient": self.identity_quotient,
            "version": self.version,
            "started_at": self.started_at,
            "finished_at": self.finished_at,
            "reports": [report_to_record(r, self.bound, self.version) for r in self.reports],
            "sampled_above": [
                report_to_record(r, self.bound, self.version) for r in self.sampled_above
            ],
        }


class ResultsCache:
    """Append-only JSONL records keyed by (r, s, t, ell, version).

    One file per quotient, one record per analysed prime.  Reads return
    the latest record for a key; corrupt lines are skipped with a
    warning; bumping the version invalidates all earlier lines.
    """

    def __init__(self, directory: str | os.PathLike, version: str = __version__):
        self.directory = Path(directory)
        self.version = version

    def path_for(self, spec: QuotientSpec) -> Path:
        return self.directory / f"scan-{spec.r}_{spec.s}_{spec.t}.jsonl"

    def get(self, spec: QuotientSpec, ell: int) -> CongruenceReport | None:
        path = self.path_for(spec)
        if not path.exists():
            return None
        latest = None
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    record = json.loads(line)
                except json.JSONDecodeError:
                    log.warning("skipping corrupt record at %s:%d", path, lineno)
                    continue
                if not all(k in record for k in RECORD_FIELDS):
                    log.warning("skipping incomplete record at %s:%d", path, lineno)
                    continue
                if (
                    record["version"] == self.version
                    and record["ell"] == ell
                    and (record["r"], record["s"], record["t"])
                    == (spec.r, spec.s, spec.t)
                ):
                    latest = record
        return None if latest is None else record_to_report(latest)

    def put(self, result: ScanResult) -> None:
        self.directory.mkdir(parents=True, exist_ok=True)
        with open(self.path_for(result.spec), "a", encoding="utf-8") as fh:
            for record in result.to_records():
                fh.write(json.dumps(record) + "\n")


def verify_theorem(
    spec: QuotientSpec,
    use_remark: bool = False,
    sample_above: int = 3,
    window: int = THETA_WINDOW_DEFAULT,
    precision: int | None = None,
    cache: ResultsCache | None = None,
    jobs: int = 1,
) -> ScanResult:
    """Sweep every prime from 5 to the bound, plus a sample just above it.

    Every prime in range gets a full scan_prime analysis.  Primes above
    the bound must report no congruence (the identity quotient is the
    stated exception); a congruence there is raised as a counterexample.
    With a cache, previously scanned primes are not recomputed.
    """
    t_bound = theorem_bound(spec)
    r_bound = remark_bound(spec)
    bound = r_bound if use_remark else t_bound
    kind = "remark" if use_remark else "theorem"
    started = datetime.now(timezone.utc).isoformat()
    primes = [int(p) for p in primerange(5, bound + 1)]
    above = []
    p = bound
    for _ in range(sample_above):
        p = int(nextprime(p))
        above.append(p)
    reports: dict[int, CongruenceReport] = {}
    targets = primes + above
    if cache is not None:
        for ell in targets:
            hit = cache.get(spec, ell)
            if hit is not None:
                reports[ell] = hit
    missing = [ell for ell in targets if ell not in reports]
    if jobs > 1 and len(missing) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            jobs_args = [(spec, ell, window, precision) for ell in missing]
            for ell, report in zip(missing, pool.map(_scan_worker, jobs_args)):
                reports[ell] = report
    else:
        for ell in missing:
            reports[ell] = scan_prime(spec, ell, window, precision)
    identity = (spec.r, spec.s, spec.t) == (0, 0, 0)
    if not identity:
        for ell in above:
            if reports[ell].residues:
                raise CounterexampleError(
                    f"prime {ell} above the bound {bound} reports residues "
                    f"{list(reports[ell].residues)} for {spec}"
                )
    result = ScanResult(
        spec=spec,
        bound_kind=kind,
        bound=bound,
        theorem_bound=t_bound,
        remark_bound=r_bound,
        identity_quotient=identity,
        reports=tuple(reports[ell] for ell in primes),
        sampled_above=tuple(reports[ell] for ell in above),
        version=__version__,
        started_at=started,
        finished_at=datetime.now(timezone.utc).isoformat(),
    )
    if cache is not None:
        cache.put(result)
    return result


@dataclass(frozen=True)
class TableRow:
    """One congruence claim: a(n) = 0 mod modulus whenever n = residue mod step."""

    name: str
    r: int
    s: int
    t: int
    step: int
    residue: int
    modulus: int


#: the Berndt and Yee congruence table; two quotients carry claims in both
#: progressions, so seven named quotients give nine rows
BERNDT_YEE_TABLE = (
    TableRow("1/E2", -1, 0, 0, 3, 2, 81),
    TableRow("1/E4", 0, -1, 0, 3, 2, 9),
    TableRow("1/E6", 0, 0, -1, 3, 2, 27),
    TableRow("1/E6", 0, 0, -1, 8, 4, 49),
    TableRow("E2/E4", 1, -1, 0, 3, 2, 27),
    TableRow("E2/E6", 1, 0, -1, 3, 2, 9),
    TableRow("E2/E6", 1, 0, -1, 8, 4, 49),
    TableRow("E4/E6", 0, 1, -1, 3, 2, 27),
    TableRow("E2^2/E6", 2, 0, -1, 3, 2, 243),
)


def table_rows(name: str) -> tuple[TableRow, ...]:
    """Rows of the stored table matching a quotient name, or all for 'all'."""
    if name == "all":
        return BERNDT_YEE_TABLE
    rows = tuple(row for row in BERNDT_YEE_TABLE if row.name == name)
    if not rows:
        known = sorted({row.name for row in BERNDT_YEE_TABLE})
        raise ValueError(f"unknown table row {name!r}; known rows: {', '.join(known)}")
    return rows


def verify_table(rows=BERNDT_YEE_TABLE, terms: int = 3000) -> list[dict]:
    """Expand each row's quotient and confirm the claimed progression vanishes.

    A window check by nature, since the claims cover all n; the report
    carries the window it was checked at.  Any nonzero coefficient in a
    claimed progression aborts with the offending exponent, because the
    rows are proved facts and a hit means the arithmetic here is wrong.
    """
    if terms < 100:
        raise ValueError("table verification below 100 terms is not meaningful")
    out = []
    for row in rows:
        series = eisenstein_power_product(row.r, row.s, row.t, row.modulus, terms)
        checked = 0
        for n in range(row.residue, terms, row.step):
            value = series.coefficient(n)
            if value:
                raise CounterexampleError(
                    f"table row {row.name}: coefficient of q^{n} is {value}, "
                    f"not 0 mod {row.modulus}"
                )
            checked += 1
        out.append(
            {
                "name": row.name,
                "r": row.r,
                "s": row.s,
                "t": row.t,
                "step": row.step,
                "residue": row.residue,
                "modulus": row.modulus,
                "terms": terms,
                "checked": checked,
            }
        )
    return out
