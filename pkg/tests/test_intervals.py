import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from geomcompare.intervals import (
    Interval,
    NegativeRadicandError,
    eval_interval,
    sqrt_bounds,
    sqrt_interval,
)
from geomcompare.polynomials import Polynomial, parse_polynomial


def test_square_range():
    out = eval_interval(parse_polynomial("x^2", ("x",)), {"x": Interval(-1, 2)})
    assert out.contains_interval(Interval(0, 4))


def test_constant():
    p = Polynomial.constant(3)
    assert eval_interval(p, {}) == Interval.point(3)


def test_sqrt_of_exact_square():
    prec = Fraction(1, 2 ** 20)
    p = parse_polynomial("l", ("l",))
    out = eval_interval(p, {"x": Interval.point(3)},
                        sqrt_defs={"l": (parse_polynomial("x^2", ("x", "l")), prec)})
    assert out.contains(3)
    assert out.width() <= prec


def test_sqrt_bounds_width_and_containment():
    for x in (Fraction(2), Fraction(1, 3), Fraction(9), Fraction(1234, 7)):
        lo, hi = sqrt_bounds(x, Fraction(1, 2 ** 40))
        assert lo * lo <= x <= hi * hi
        assert hi - lo <= Fraction(1, 2 ** 40)


def test_negative_radicand_raises():
    p = parse_polynomial("l", ("l",))
    with pytest.raises(NegativeRadicandError):
        eval_interval(p, {"x": Interval(-3, -2)},
                      sqrt_defs={"l": (parse_polynomial("x", ("x", "l")), Fraction(1, 4))})


def test_division_by_zero_interval_raises():
    with pytest.raises(ZeroDivisionError):
        Interval(1, 2) / Interval(-1, 1)


def test_chained_sqrt_defs_resolve_in_dependency_order():
    vars = ("x", "a", "b")
    prec = Fraction(1, 2 ** 30)
    out = eval_interval(
        parse_polynomial("b", vars),
        {"x": Interval.point(16)},
        sqrt_defs={
            "b": (parse_polynomial("a", vars), prec),   # b = sqrt(a) = 2
            "a": (parse_polynomial("x", vars), prec),   # a = sqrt(x) = 4
        },
    )
    assert out.contains(2)
    assert out.width() <= 4 * prec


def _random_poly(rng, vars, terms=4, maxe=3, maxc=5):
    t = {}
    for _ in range(rng.randint(1, terms)):
        mono = tuple(rng.randint(0, maxe) for _ in vars)
        c = rng.randint(-maxc, maxc)
        if c:
            t[mono] = t.get(mono, Fraction(0)) + c
    return Polynomial.from_map(vars, t)


def test_inclusion_isotonic_on_random_boxes():
    """1000 random polynomial/box pairs, 10 sample points each."""
    rng = random.Random(321)
    vars = ("x", "y")
    for _ in range(1000):
        p = _random_poly(rng, vars)
        box = {}
        for v in vars:
            a = Fraction(rng.randint(-8, 8), rng.randint(1, 4))
            b = a + Fraction(rng.randint(0, 8), rng.randint(1, 4))
            box[v] = Interval(a, b)
        out = eval_interval(p, box)
        for _ in range(10):
            point = {v: box[v].lo + (box[v].hi - box[v].lo) * Fraction(rng.randint(0, 16), 16)
                     for v in vars}
            assert out.contains(p.evaluate(point))


@given(st.fractions(min_value=-10, max_value=10), st.fractions(min_value=0, max_value=10),
       st.integers(1, 6))
def test_power_contains_sampled_values(lo, width, n):
    iv = Interval(lo, lo + width)
    out = iv.power(n)
    for t in (Fraction(0), Fraction(1, 2), Fraction(1)):
        x = iv.lo + width * t
        assert out.contains(x ** n)
