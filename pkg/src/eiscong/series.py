"""Truncated Laurent series with coefficients in Z/m.

The universal value type of the package.  A series stores the exact
residues of its coefficients for every exponent in the window
[valuation, precision); below the valuation the series is zero by
definition, at the precision and above nothing is known.  Every
operation is pure and returns the largest provably correct precision,
so any coefficient that can be read out is exact in Z/m.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

_INT64_LIMIT = 2**63 - 1


class ModulusMismatchError(ValueError):
    """Operands live over different coefficient rings."""


class PrecisionError(ValueError):
    """A computation needs coefficients beyond the known window."""


def _convolve(a: Sequence[int], b: Sequence[int], modulus: int) -> list[int]:
    """Exact product of coefficient windows, reduced mod modulus.

    Uses int64 convolution when no intermediate sum can overflow,
    otherwise falls back to schoolbook arithmetic on Python integers.
    """
    if not a or not b:
        return []
    if min(len(a), len(b)) * (modulus - 1) ** 2 <= _INT64_LIMIT:
        prod = np.convolve(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        return [int(c) for c in prod % modulus]
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return [c % modulus for c in out]


class TruncatedSeries:
    """A Laurent q-series over Z/m, exact on [valuation, precision)."""

    __slots__ = ("modulus", "valuation", "coeffs", "precision")

    def __init__(self, modulus: int, coeffs: Iterable[int], valuation: int = 0):
        if modulus < 2:
            raise ValueError(f"modulus must be at least 2, got {modulus}")
        vals = [int(c) % modulus for c in coeffs]
        precision = valuation + len(vals)
        lead = 0
        while lead < len(vals) and vals[lead] == 0:
            lead += 1
        if lead == len(vals):
            # zero on the whole window: canonical form has valuation 0
            if precision >= 0:
                valuation, vals = 0, [0] * precision
            else:
                valuation, vals = precision, []
        elif lead:
            valuation += lead
            vals = vals[lead:]
        self.modulus = modulus
        self.valuation = valuation
        self.coeffs = tuple(vals)
        self.precision = precision

    @classmethod
    def zero(cls, modulus: int, terms: int) -> "TruncatedSeries":
        return cls(modulus, [0] * terms)

    @classmethod
    def one(cls, modulus: int, terms: int) -> "TruncatedSeries":
        if terms < 1:
            raise ValueError("the constant series needs at least one known term")
        return cls(modulus, [1] + [0] * (terms - 1))

    def _require_same_ring(self, other: "TruncatedSeries") -> None:
        if self.modulus != other.modulus:
            raise ModulusMismatchError(
                f"modulus mismatch: {self.modulus} vs {other.modulus}"
            )

    def coefficient(self, n: int) -> int:
        """The exact residue of the q^n coefficient."""
        if n >= self.precision:
            raise PrecisionError(
                f"coefficient of q^{n} is beyond the known precision {self.precision}"
            )
        if n < self.valuation:
            return 0
        return self.coeffs[n - self.valuation]

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def agrees_with(self, other: "TruncatedSeries", through: int | None = None) -> bool:
        """Coefficient-wise equality on the common known window.

        When ``through`` is given, only exponents up to and including it
        are compared (they must all be known on both sides).
        """
        self._require_same_ring(other)
        stop = min(self.precision, other.precision)
        if through is not None:
            if through + 1 > stop:
                raise PrecisionError(
                    f"cannot compare through q^{through}: precision is {stop}"
                )
            stop = through + 1
        start = min(self.valuation, other.valuation)
        return all(self.coefficient(n) == other.coefficient(n) for n in range(start, stop))

    # ------------------------------------------------------------------
    # ring operations

    def add(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._require_same_ring(other)
        m = self.modulus
        prec = min(self.precision, other.precision)
        v = min(self.valuation, other.valuation)
        out = [0] * (prec - v)
        for src in (self, other):
            stop = min(src.precision, prec)
            for n in range(src.valuation, stop):
                out[n - v] = (out[n - v] + src.coeffs[n - src.valuation]) % m
        return TruncatedSeries(m, out, v)

    def neg(self) -> "TruncatedSeries":
        return self.scale(-1)

    def sub(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return self.add(other.neg())

    def scale(self, scalar: int) -> "TruncatedSeries":
        m = self.modulus
        k = scalar % m
        return TruncatedSeries(m, [(k * c) % m for c in self.coeffs], self.valuation)

    def mul(self, other: "TruncatedSeries") -> "TruncatedSeries":
        """Cauchy product, truncated to min(N_f + v_g, N_g + v_f)."""
        self._require_same_ring(other)
        v = self.valuation + other.valuation
        keep = min(len(self.coeffs), len(other.coeffs))
        conv = _convolve(self.coeffs, other.coeffs, self.modulus)[:keep]
        return TruncatedSeries(self.modulus, conv, v)

    def invert(self) -> "TruncatedSeries":
        """Multiplicative inverse, by Newton iteration on the window.

        Requires valuation 0 and a unit constant term (in this package
        the constant term is always 1).
        """
        if self.valuation != 0:
            raise ValueError(
                f"inversion requires valuation 0, got {self.valuation}; shift first"
            )
        if not self.coeffs:
            raise ValueError("cannot invert a series with no known coefficients")
        m = self.modulus
        try:
            lead = pow(self.coeffs[0], -1, m)
        except ValueError as exc:
            raise ValueError(
                f"constant term {self.coeffs[0]} is not a unit modulo {m}"
            ) from exc
        n = len(self.coeffs)
        g = [lead]
        while len(g) < n:
            k = min(2 * len(g), n)
            fg = _convolve(self.coeffs[:k], g, m)[:k]
            corr = [(-c) % m for c in fg]
            corr[0] = (corr[0] + 2) % m
            g = _convolve(g, corr, m)[:k]
        return TruncatedSeries(m, g, 0)

    def pow(self, exponent: int) -> "TruncatedSeries":
        """Binary powering; negative exponents go through invert()."""
        if exponent < 0:
            return self.invert().pow(-exponent)
        window = len(self.coeffs)
        if window == 0:
            return TruncatedSeries(self.modulus, (), self.valuation)
        result = TruncatedSeries.one(self.modulus, window)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result.mul(base)
            e >>= 1
            if e:
                base = base.mul(base)
        return result

    def theta(self) -> "TruncatedSeries":
        """The operator q d/dq: multiplies the q^n coefficient by n."""
        m = self.modulus
        vals = [(n * c) % m for n, c in enumerate(self.coeffs, start=self.valuation)]
        return TruncatedSeries(m, vals, self.valuation)

    def shift(self, exponent: int) -> "TruncatedSeries":
        """Multiply by q**exponent (exact, changes valuation and precision)."""
        return TruncatedSeries(self.modulus, self.coeffs, self.valuation + exponent)

    def extract_progression(self, residue: int, step: int) -> "TruncatedSeries":
        """The series of coefficients along exponents congruent to residue mod step."""
        if step < 1:
            raise ValueError("step must be positive")
        if not 0 <= residue < step:
            raise ValueError(f"residue must lie in [0, {step}), got {residue}")
        first = -((residue - self.valuation) // step)
        stop = -((residue - self.precision) // step)
        vals = [self.coefficient(step * i + residue) for i in range(first, stop)]
        return TruncatedSeries(self.modulus, vals, first)

    def change_modulus(self, new_modulus: int) -> "TruncatedSeries":
        if self.modulus % new_modulus:
            raise ValueError(
                f"new modulus {new_modulus} does not divide {self.modulus}"
            )
        return TruncatedSeries(new_modulus, self.coeffs, self.valuation)

    # ------------------------------------------------------------------
    # operators and display

    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.add(other)

    def __sub__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.sub(other)

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.mul(other)

    def __pow__(self, exponent):
        if not isinstance(exponent, int):
            return NotImplemented
        return self.pow(exponent)

    def __neg__(self):
        return self.neg()

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (
            self.modulus == other.modulus
            and self.valuation == other.valuation
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.modulus, self.valuation, self.coeffs))

    def __str__(self):
        terms = []
        for n, c in enumerate(self.coeffs, start=self.valuation):
            if c == 0:
                continue
            if n == 0:
                terms.append(str(c))
            else:
                mono = "q" if n == 1 else f"q^{n}"
                terms.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(terms) if terms else "0"

    def __repr__(self):
        shown = str(self)
        if len(shown) > 60:
            shown = shown[:57] + "..."
        return f"TruncatedSeries({shown} + O(q^{self.precision}), mod {self.modulus})"
