"""Rational-endpoint interval arithmetic and inclusion-isotonic evaluation.

Endpoints are exact `Fraction`s, so every operation is certified: the result
interval contains all pointwise results. Square roots are enclosed by
rational bounds computed with integer square roots to a requested precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional

from .polynomials import Polynomial

DEFAULT_SQRT_PRECISION = Fraction(1, 2 ** 32)


class NegativeRadicandError(ValueError):
    """Square root of an interval that is entirely negative."""


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", _frac(self.lo))
        object.__setattr__(self, "hi", _frac(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"invalid interval [{self.lo}, {self.hi}]")

    @staticmethod
    def point(x) -> "Interval":
        x = _frac(x)
        return Interval(x, x)

    def width(self) -> Fraction:
        return self.hi - self.lo

    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def mag(self) -> Fraction:
        return max(abs(self.lo), abs(self.hi))

    def contains(self, x) -> bool:
        x = _frac(x)
        return self.lo <= x <= self.hi

    def contains_interval(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def intersects(self, other: "Interval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def intersect(self, other: "Interval") -> Optional["Interval"]:
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        return Interval(lo, hi) if lo <= hi else None

    def hull(self, other: "Interval") -> "Interval":
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    def __add__(self, other) -> "Interval":
        other = other if isinstance(other, Interval) else Interval.point(other)
        return Interval(self.lo + other.lo, self.hi + other.hi)

    def __radd__(self, other) -> "Interval":
        return self + other

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other) -> "Interval":
        other = other if isinstance(other, Interval) else Interval.point(other)
        return Interval(self.lo - other.hi, self.hi - other.lo)

    def __rsub__(self, other) -> "Interval":
        return (-self) + other

    def __mul__(self, other) -> "Interval":
        other = other if isinstance(other, Interval) else Interval.point(other)
        products = (self.lo * other.lo, self.lo * other.hi,
                    self.hi * other.lo, self.hi * other.hi)
        return Interval(min(products), max(products))

    def __rmul__(self, other) -> "Interval":
        return self * other

    def __truediv__(self, other) -> "Interval":
        other = other if isinstance(other, Interval) else Interval.point(other)
        if other.lo <= 0 <= other.hi:
            raise ZeroDivisionError("interval division by interval containing 0")
        inv = Interval(1 / other.hi, 1 / other.lo)
        return self * inv

    def __rtruediv__(self, other) -> "Interval":
        return Interval.point(other) / self

    def power(self, n: int) -> "Interval":
        if n == 0:
            return Interval.point(1)
        if n % 2 == 1 or self.lo >= 0:
            return Interval(self.lo ** n, self.hi ** n)
        if self.hi <= 0:
            return Interval(self.hi ** n, self.lo ** n)
        return Interval(Fraction(0), max(self.lo ** n, self.hi ** n))

    def __repr__(self):
        return f"[{self.lo}, {self.hi}]"


def sqrt_bounds(x: Fraction, precision: Fraction = DEFAULT_SQRT_PRECISION
                ) -> tuple[Fraction, Fraction]:
    """Rational lo <= sqrt(x) <= hi with hi - lo <= precision (x >= 0)."""
    x = _frac(x)
    precision = _frac(precision)
    if x < 0:
        raise NegativeRadicandError(f"sqrt of negative rational {x}")
    if x == 0:
        return Fraction(0), Fraction(0)
    # smallest k with 2^-k <= precision
    k = max(1, (precision.denominator // precision.numerator).bit_length())
    scale = 1 << k
    m = (x.numerator * scale * scale) // x.denominator
    t = math.isqrt(m)
    return Fraction(t, scale), Fraction(t + 1, scale)


def sqrt_interval(iv: Interval, precision: Fraction = DEFAULT_SQRT_PRECISION) -> Interval:
    """Enclosure of sqrt over an interval; a slightly-negative lower bound is
    clamped to 0 (radicands of length variables are nonnegative pointwise)."""
    lo, hi = iv.lo, iv.hi
    if hi < 0:
        raise NegativeRadicandError(f"radicand interval {iv} entirely negative")
    if lo < 0:
        lo = Fraction(0)
    slo, _ = sqrt_bounds(lo, precision)
    _, shi = sqrt_bounds(hi, precision)
    return Interval(slo, shi)


def eval_poly_interval(p: Polynomial, assignment: Mapping[str, Interval]) -> Interval:
    """Natural interval extension of a polynomial (inclusion isotonic)."""
    total = Interval.point(0)
    for mono, c in p.terms.items():
        term = Interval.point(c)
        for i, e in enumerate(mono):
            if e:
                term = term * assignment[p.vars[i]].power(e)
        total = total + term
    return total


def eval_interval(p: Polynomial, assignment: Mapping[str, Interval],
                  sqrt_defs: Optional[Mapping[str, tuple[Polynomial, Fraction]]] = None,
                  ) -> Interval:
    """Evaluate p over a box; variables in sqrt_defs are defined as the
    square root of their radicand polynomial, enclosed to the mapped
    precision. Radicand dependencies are resolved in topological order."""
    env = dict(assignment)
    if sqrt_defs:
        pending = dict(sqrt_defs)
        while pending:
            progressed = False
            for name in list(pending):
                radicand, precision = pending[name]
                if all(v in env for v in radicand.support()):
                    rad = eval_poly_interval(radicand, env)
                    if rad.hi < 0:
                        raise NegativeRadicandError(
                            f"radicand of {name} is {rad}, entirely negative")
                    env[name] = sqrt_interval(rad, precision)
                    del pending[name]
                    progressed = True
            if not progressed:
                raise ValueError("cyclic sqrt definitions")
    missing = p.support() - set(env)
    if missing:
        raise ValueError(f"unassigned variables: {sorted(missing)}")
    return eval_poly_interval(p, env)
