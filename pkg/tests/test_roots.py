"""Certified univariate root solving."""

import random

import mpmath
import pytest
from mpmath import mpf

from carousel.gaussian import GaussianRational
from carousel.poly import Polynomial, PolynomialError, parse_polynomial
from carousel.roots import ComplexBall, univariate_roots


def U(text):
    return parse_polynomial(text, ("u",))


def test_fifth_roots_of_unity():
    roots = univariate_roots(U("u^5 - 1"), 128)
    assert len(roots) == 5
    assert all(m == 1 for _, m in roots)
    for ball, _ in roots:
        assert abs(abs(ball.center) - 1) < mpf(2) ** -100
        assert ball.radius < mpf(2) ** -40
    # the balls certify separation: pairwise disjoint
    for i in range(5):
        for j in range(i + 1, 5):
            assert roots[i][0].is_disjoint_from(roots[j][0])


def test_plus_minus_i():
    roots = univariate_roots(U("u^2 + 1"), 128)
    centers = [b.center for b, _ in roots]
    assert abs(centers[0] + 1j) < 1e-30
    assert abs(centers[1] - 1j) < 1e-30


def test_cubic_with_golden_ratio_roots():
    # u^3 - 2u + 1 = (u - 1)(u^2 + u - 1)
    roots = univariate_roots(U("u^3 - 2*u + 1"), 128)
    expected = sorted(
        [1.0, (-1 + 5**0.5) / 2, (-1 - 5**0.5) / 2]
    )
    got = sorted(float(b.center.real) for b, _ in roots)
    for g, e in zip(got, expected):
        assert abs(g - e) < 1e-12
    assert all(abs(b.center.imag) < 1e-30 for b, _ in roots)


def test_multiplicities_from_exact_decomposition():
    roots = univariate_roots(U("(u - 1)^3 * (u + 2)"), 128)
    assert [(round(float(b.center.real)), m) for b, m in roots] == [(-2, 1), (1, 3)]


def test_root_sum_matches_trace():
    from carousel.roots import gaussian_to_mpc
    from mpmath import mp

    rng = random.Random(2)
    for _ in range(15):
        degree = rng.randint(2, 6)
        coeffs = {
            (k,): GaussianRational(rng.randint(-5, 5), rng.randint(-2, 2))
            for k in range(degree)
        }
        coeffs[(degree,)] = GaussianRational(rng.randint(1, 4))
        p = Polynomial(("u",), coeffs)
        roots = univariate_roots(p, 128)
        with mp.workprec(160):
            total = sum((b.center for b, m in roots for _ in range(m)), mpmath.mpc(0))
            dense = p.dense_coefficients()
            expected = -gaussian_to_mpc(dense[-2] / dense[-1])
            slack = 2 * sum(b.radius for b, _ in roots) + mpf(2) ** -80
            assert abs(total - expected) < slack


def test_deterministic_ordering():
    a = univariate_roots(U("u^4 - u - 1"), 128)
    b = univariate_roots(U("u^4 - u - 1"), 128)
    assert [(str(x.center), m) for x, m in a] == [(str(x.center), m) for x, m in b]
    from carousel.roots import ordering_key

    keys = [ordering_key(x.center)[:2] for x, _ in a]
    assert keys == sorted(keys)


def test_degree_zero_rejected():
    with pytest.raises(PolynomialError):
        univariate_roots(U("3"), 128)


def test_ball_precision_floor():
    with pytest.raises(ValueError):
        ComplexBall(0, 0, 17)
