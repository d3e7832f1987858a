"""Tate cycles and simple-congruence detection, rigorous and windowed.

A series f = sum a(n) q^n has a simple congruence at c mod ell when
a(ell*n + c) vanishes mod ell for every n.  For a genuine modular form
with nonzero theta image this is decidable by a finite criterion: the
congruence holds at c not divisible by ell exactly when applying theta
(ell+1)/2 times gives -(c|ell) times the single theta image, an
identity of modular forms checked through its Sturm window.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from sympy import isprime, primefactors

from .eisenstein import (
    QuotientSpec,
    quotient_q2_coefficient,
    quotient_q_coefficient,
    quotient_series,
)
from .filtration import ModularFormModEll, filtration, sturm
from .series import PrecisionError, TruncatedSeries

#: default window for the quotient-side theta-vanishing check
THETA_WINDOW_DEFAULT = 500

#: primes that can never be excluded by the closed-form coefficient system
SMALL_CANDIDATE_PRIMES = (2, 3, 5, 7, 11, 13)

#: default cap on Tate-cycle profiling (the cost is ell - 1 filtration solves)
TATE_CYCLE_CAP = 53

METHOD_RIGOROUS = "rigorous"
METHOD_HEURISTIC = "heuristic"
METHOD_THETA_VANISHING = "theta-vanishing"
METHOD_TRIVIAL_PRIME = "trivial-prime"
METHOD_BELOW_BOUND = "below-bound-by-size"


def legendre(c: int, ell: int) -> int:
    """Legendre symbol (c | ell) by Euler's criterion."""
    if ell < 3 or not isprime(ell):
        raise ValueError(f"ell must be an odd prime, got {ell}")
    c %= ell
    if c == 0:
        return 0
    return 1 if pow(c, (ell - 1) // 2, ell) == 1 else -1


@dataclass(frozen=True)
class CongruenceReport:
    """Detected residues for one (quotient, prime) pair and how they were found."""

    spec: QuotientSpec
    ell: int
    method: str
    residues: tuple[int, ...]
    weight: int | None = None
    precision: int | None = None


@dataclass(frozen=True)
class TateCycleProfile:
    """Filtrations of the theta iterates of a form and the cycle's drop structure.

    filtrations[i-1] is the filtration of the i-th theta iterate for
    i = 1, ..., ell-1.  high_points lists the indices whose filtration
    is divisible by ell; low_points and falls are aligned with it, the
    successor of index ell-1 wrapping around to 1.
    """

    prime: int
    base_weight: int
    base_filtration: int
    filtrations: tuple[int, ...]
    high_points: tuple[int, ...]
    low_points: tuple[int, ...]
    falls: tuple[int, ...]


def tate_cycle(form: ModularFormModEll, cap: int = TATE_CYCLE_CAP) -> TateCycleProfile:
    """Profile the full cycle of theta iterates of the form.

    Each iterate's filtration is found by descending linear solves; the
    iterate after a filtration divisible by ell must drop by a positive
    multiple of ell - 1, every other step must rise by exactly ell + 1,
    and the cycle closes up by Fermat.  All three facts are re-verified
    and a violation raises, since it can only mean a bug.
    """
    ell = form.prime
    if ell > cap:
        raise ValueError(
            f"cycle profiling is capped at ell <= {cap}; pass cap={ell} to override"
        )
    needed = sturm(form.weight + (ell - 1) * (ell + 1)) + 1
    if form.precision < needed:
        raise PrecisionError(
            f"profiling a weight-{form.weight} form mod {ell} needs precision "
            f"{needed}, have {form.precision}"
        )
    base = filtration(form)
    first = form.series.theta()
    if all(first.coefficient(n) == 0 for n in range(sturm(base + ell + 1) + 1)):
        raise ValueError(
            "theta kills this form mod ell; the cycle is trivial and every "
            "nonzero residue carries a congruence"
        )
    filts: list[int] = []
    series = form.series
    prev = base
    for _ in range(1, ell):
        series = series.theta()
        it = ModularFormModEll(ell, prev + ell + 1, series)
        prev = filtration(it)
        filts.append(prev)
    closure = series.theta()
    if closure != first:
        raise RuntimeError("theta iterates fail to close up after ell steps")
    if base % ell and filts[0] != base + ell + 1:
        raise RuntimeError("first theta step must rise by ell + 1")
    highs, lows, falls = [], [], []
    for i in range(1, ell):
        w = filts[i - 1]
        succ = i % (ell - 1) + 1
        w_next = filts[succ - 1]
        if w % ell == 0:
            drop = w + ell + 1 - w_next
            if drop <= 0 or drop % (ell - 1):
                raise RuntimeError(
                    f"iterate {succ} falls by {drop}, not a positive multiple of ell - 1"
                )
            highs.append(i)
            lows.append(succ)
            falls.append(drop // (ell - 1))
        elif w_next != w + ell + 1:
            raise RuntimeError(
                f"iterate {succ} must rise by ell + 1 from a filtration prime to ell"
            )
    if len(lows) not in (1, 2):
        raise RuntimeError(f"a Tate cycle has one or two low points, found {len(lows)}")
    if len(lows) == 1 and filts[lows[0] - 1] % ell != 2:
        raise RuntimeError("a single low point must have filtration 2 mod ell")
    return TateCycleProfile(
        prime=ell,
        base_weight=form.weight,
        base_filtration=base,
        filtrations=tuple(filts),
        high_points=tuple(highs),
        low_points=tuple(lows),
        falls=tuple(falls),
    )


def _congruence_class_flags(form: ModularFormModEll) -> tuple[bool, bool, int]:
    """Whether residues of each quadratic class carry a congruence, plus the window.

    Returns (squares_flagged, nonsquares_flagged, compare_through).  The
    two candidate identities live in weight k + (ell+1)^2/2; comparing
    through that weight's Sturm index is a certificate because the two
    sides differ in weight by a multiple of ell - 1.
    """
    ell = form.prime
    s = sturm(form.weight + (ell + 1) ** 2 // 2)
    if form.precision < s + 1:
        raise PrecisionError(
            f"the congruence certificate at ell={ell} needs precision {s + 1}, "
            f"have {form.precision}"
        )
    once = form.series.theta()
    if all(once.coefficient(n) == 0 for n in range(sturm(form.weight + ell + 1) + 1)):
        raise ValueError(
            "theta kills this form; every nonzero residue carries a congruence "
            "and the criterion does not apply"
        )
    half = once
    for _ in range((ell + 1) // 2 - 1):
        half = half.theta()
    squares = half.agrees_with(once.neg(), through=s)
    nonsquares = half.agrees_with(once, through=s)
    return squares, nonsquares, s


def rigorous_simple_congruence(form: ModularFormModEll, c: int) -> bool:
    """Finite certificate for a simple congruence of the form at c, 1 <= c <= ell-1.

    c = 0 is not accepted: the quotients this package studies all have
    constant term 1, which settles that case negatively by inspection.
    """
    ell = form.prime
    if not 1 <= c <= ell - 1:
        raise ValueError(
            f"c must be a nonzero residue mod {ell}; "
            "c = 0 is decided by the constant term"
        )
    squares, nonsquares, _ = _congruence_class_flags(form)
    return squares if legendre(c, ell) == 1 else nonsquares


def certified_residues(form: ModularFormModEll) -> tuple[int, ...]:
    """All nonzero residues with a certified simple congruence, sorted."""
    ell = form.prime
    squares, nonsquares, _ = _congruence_class_flags(form)
    out = []
    for c in range(1, ell):
        if squares if legendre(c, ell) == 1 else nonsquares:
            out.append(c)
    return tuple(out)


def heuristic_simple_congruences(series: TruncatedSeries, ell: int) -> frozenset[int]:
    """Residues whose entire known progression vanishes.  Window evidence only.

    Every residue class c with a(step*n + c) = 0 for all exponents in
    the known window is flagged; nothing is proved beyond the window.
    """
    if series.valuation < 0:
        raise ValueError("progression scanning expects a series without poles")
    flagged = set(range(ell))
    for n, c in enumerate(series.coeffs, start=series.valuation):
        if c:
            flagged.discard(n % ell)
            if not flagged:
                break
    return frozenset(flagged)


def theta_vanishes(
    spec: QuotientSpec, ell: int, terms: int = THETA_WINDOW_DEFAULT
) -> bool:
    """Whether every coefficient a(n) with n prime to ell vanishes through the window.

    Equivalent to theta killing the quotient through the window; a
    finite check, labelled non-rigorous on its own.
    """
    series = quotient_series(spec, ell, terms)
    return all(
        c == 0 for n, c in enumerate(series.coeffs, start=series.valuation) if n % ell
    )


def theta_zero_congruences_hold(spec: QuotientSpec, ell: int) -> bool:
    """The three closed-form congruences a theta-killed quotient must satisfy mod ell.

    The q and q^2 coefficients must vanish, and so must r + 4s + 6t,
    which is the filtration of the lifted form mod ell.
    """
    r, s, t = spec.r, spec.s, spec.t
    return (
        quotient_q_coefficient(r, s, t) % ell == 0
        and quotient_q2_coefficient(r, s, t) % ell == 0
        and (r + 4 * s + 6 * t) % ell == 0
    )


def theta_vanishing_prime_candidates(
    spec: QuotientSpec, terms: int = 1000
) -> frozenset[int] | None:
    """Confirmed primes ell for which theta kills the quotient mod ell.

    Eliminating the closed-form coefficient system shows any prime at
    least 17 with a vanishing theta image must divide gcd(r, s, t), and
    8255520 = 2^5 * 3^4 * 5 * 7^2 * 13 bounds the rest, so the primes up
    to 13 are always candidates.  Every candidate is then confirmed or
    refuted by a window check of the expansion.

    Returns None for the identity quotient r = s = t = 0, where theta
    kills the constant series 1 mod every prime.
    """
    g = math.gcd(spec.r, spec.s, spec.t)
    if g == 0:
        return None
    candidates = set(SMALL_CANDIDATE_PRIMES)
    for p in primefactors(g):
        if p >= 17 and theta_zero_congruences_hold(spec, p):
            candidates.add(int(p))
    return frozenset(p for p in candidates if theta_vanishes(spec, p, terms))
