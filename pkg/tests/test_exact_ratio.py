import random
from fractions import Fraction

import pytest

from geomcompare.construction import parse_construction, translate
from geomcompare.exact_ratio import (
    NoCandidateWitnessedError,
    NoPositiveRootError,
    constant_ratio_evidence,
    crosscheck_at,
    eliminate_to_mu,
    numeric_crosscheck,
    ratio_sample,
    solve_mu,
)
from geomcompare.presolve import presolve
from geomcompare.polynomials import parse_polynomial, poly_from_univariate, render


def _prepared(name):
    src = open(f"benchmarks/{name}.gct").read()
    return presolve(translate(parse_construction(src)))[0]


def test_right_triangle_ratio_is_one():
    p = eliminate_to_mu(_prepared("pythagoras_right"))
    assert p is not None
    result = solve_mu(p)
    assert len(result.candidates) == 1
    assert result.candidates[0].value.rational_value() == 1


def test_medians_elimination_absent():
    p = eliminate_to_mu(_prepared("medians"))
    assert p is None


def test_medians_fallthrough_justified_by_samples():
    t = _prepared("medians")
    evidence = constant_ratio_evidence(t, random.Random(3))
    assert evidence is not None
    a, b = evidence
    assert min(abs(a.lo - b.hi), abs(b.lo - a.hi)) > Fraction(1, 10 ** 6)


def test_pentagon_candidates_and_radicals():
    p = eliminate_to_mu(_prepared("pentagon_diagonal"))
    assert render(p) == "m^4-3*m^2+1"
    result = solve_mu(p)
    assert [c.radical.render() for c in result.candidates] == \
        ["(sqrt(5)-1)/2", "(1+sqrt(5))/2"]


def test_pentagon_crosscheck_convex_witnesses_golden_ratio():
    t = _prepared("pentagon_diagonal")
    result = solve_mu(eliminate_to_mu(t))
    # chain step index 2 in the program; root index 1 = larger cosine = convex
    convex = crosscheck_at(result, t, {2: (1, 1)})
    assert convex == [False, True]
    star = crosscheck_at(result, t, {2: (0, 1)})
    assert star == [True, False]


def test_pentagon_crosscheck_random_trials_witness_both():
    t = _prepared("pentagon_diagonal")
    result = solve_mu(eliminate_to_mu(t))
    witnessed = numeric_crosscheck(result, t, trials=12, rng=random.Random(4))
    assert any(witnessed)


def test_kochanski_constant():
    t = _prepared("kochanski_pi")
    p = eliminate_to_mu(t)
    assert render(p) == "9*m^4-240*m^2+1492"
    result = solve_mu(p)
    near_pi = result.candidates[0]
    assert near_pi.radical.render() == "sqrt(40/3-2*sqrt(3))"
    assert near_pi.decimal(8) == "3.1415333"
    witnessed = numeric_crosscheck(result, t, trials=8, rng=random.Random(9))
    assert witnessed[0]


def test_square_and_hexagon():
    sq = solve_mu(eliminate_to_mu(_prepared("square_diagonal")))
    assert [c.radical.render() for c in sq.candidates] == ["sqrt(2)"]
    hexa = solve_mu(eliminate_to_mu(_prepared("hexagon_long_diagonal")))
    assert [c.value.rational_value() for c in hexa.candidates] == [2]


def test_solve_mu_simple_cases():
    m = solve_mu(poly_from_univariate([-1, 1], "m"))
    assert m.candidates[0].value.rational_value() == 1
    with pytest.raises(NoPositiveRootError):
        solve_mu(poly_from_univariate([1, 1], "m"))  # root -1 only


def test_crosscheck_rejects_wrong_candidates():
    t = _prepared("pythagoras_right")
    fake = solve_mu(poly_from_univariate([-7, 1], "m"))  # claims ratio 7
    with pytest.raises(NoCandidateWitnessedError):
        numeric_crosscheck(fake, t, trials=4, rng=random.Random(2))


def test_reported_equality_holds_under_perturbation():
    """The witnessed ratio persists across many perturbed nondegenerate
    instantiations of the right-triangle figure."""
    t = _prepared("pythagoras_right")
    result = solve_mu(eliminate_to_mu(t))
    mu = result.candidates[0].value.rational_value()
    rng = random.Random(31)
    for _ in range(200):
        ratio = ratio_sample(t, rng, precision=Fraction(1, 2 ** 128))
        assert ratio.lo - Fraction(1, 10 ** 20) <= mu <= ratio.hi + Fraction(1, 10 ** 20)


def test_eliminated_poly_vanishes_at_sampled_ratios():
    for name, expected in (("pentagon_diagonal", "m^4-3*m^2+1"),
                           ("square_diagonal", "m^2-2")):
        t = _prepared(name)
        p = eliminate_to_mu(t)
        assert render(p) == expected
        rng = random.Random(13)
        for _ in range(6):
            ratio = ratio_sample(t, rng, precision=Fraction(1, 2 ** 128))
            coeffs = p.univariate_coeffs("m")
            val = sum(c * ratio.mid() ** i for i, c in enumerate(coeffs))
            assert abs(val) < Fraction(1, 10 ** 20)
