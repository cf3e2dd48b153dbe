"""Exact polynomial core: parser, calculus, elimination, normal forms."""

import random
from fractions import Fraction

import pytest

from carousel.gaussian import GaussianRational
from carousel.poly import (
    ParseError,
    Polynomial,
    PolynomialError,
    divexact,
    linear_change,
    parse_polynomial,
    poly_gcd,
    resultant,
    squarefree_decomposition,
    squarefree_part,
)

XY = ("x", "y")


def P(text, variables=XY):
    return parse_polynomial(text, variables)


class TestParser:
    def test_two_term_reading(self):
        p = P("x^5 - y^2")
        assert p.terms == {
            (5, 0): GaussianRational(1),
            (0, 2): GaussianRational(-1),
        }

    def test_zero_polynomial(self):
        assert P("0").is_zero()

    def test_expansion(self):
        assert P("(x+y)^2 - x*y") == P("x^2 + x*y + y^2")

    def test_rational_and_imaginary_coefficients(self):
        p = P("3/2*x + i*y - (1+2*i)")
        assert p.terms[(1, 0)] == GaussianRational(Fraction(3, 2))
        assert p.terms[(0, 1)] == GaussianRational(0, 1)
        assert p.terms[(0, 0)] == GaussianRational(-1, -2)

    def test_print_parse_roundtrip(self):
        rng = random.Random(7)
        for _ in range(40):
            p = _random_poly(rng, degree=5, terms=6)
            assert P(str(p)) == p

    def test_syntax_error_is_positioned(self):
        with pytest.raises(ParseError) as err:
            P("x^5 - + y")
        assert err.value.position == 6

    def test_unknown_symbol(self):
        with pytest.raises(ParseError, match="unknown symbol"):
            P("x + z")

    def test_non_integer_exponent(self):
        with pytest.raises(ParseError):
            P("x^y")
        with pytest.raises(ParseError):
            P("x^-2")


class TestDerivative:
    def test_power_rule(self):
        assert P("x^5 - y^2").partial_derivative("y") == P("-2*y")

    def test_constant(self):
        assert P("5").partial_derivative("x").is_zero()

    def test_product_terms(self):
        assert P("x*y^3 + y").partial_derivative("y") == P("3*x*y^2 + 1")

    def test_unknown_variable(self):
        with pytest.raises(PolynomialError):
            P("x").partial_derivative("z")


class TestResultant:
    def test_parabola_against_axis(self):
        # Sylvester determinant with the q-rows listed first gives -x
        r = resultant(P("y^2 - x"), P("y"), "y")
        assert r == P("-x", ("x",))

    def test_two_linear(self):
        r = resultant(P("y - a", ("a", "b", "y")), P("y - b", ("a", "b", "y")), "y")
        assert r == P("b - a", ("a", "b"))

    def test_common_factor_gives_zero(self):
        assert resultant(P("y^2 + 1"), P("y^2 + 1"), "y").is_zero()

    def test_degenerate_degree(self):
        with pytest.raises(PolynomialError):
            resultant(P("x"), P("y"), "y")

    def test_swap_sign(self):
        rng = random.Random(3)
        for _ in range(12):
            p = _random_poly(rng, degree=3, terms=4)
            q = _random_poly(rng, degree=3, terms=4)
            if p.degree("y") < 1 or q.degree("y") < 1:
                continue
            lhs = resultant(p, q, "y")
            rhs = resultant(q, p, "y")
            sign = (-1) ** (p.degree("y") * q.degree("y"))
            assert lhs == rhs.scale(sign)


class TestSquarefree:
    def test_repeated_factor(self):
        assert squarefree_part(P("(v - u^5)^2", ("u", "v"))) == P("u^5 - v", ("u", "v"))

    def test_already_squarefree(self):
        assert squarefree_part(P("v - u^5", ("u", "v"))) == P("u^5 - v", ("u", "v"))

    def test_monomial(self):
        assert squarefree_part(P("u^2*v", ("u", "v"))) == P("u*v", ("u", "v"))

    def test_power_invariance(self):
        rng = random.Random(11)
        for _ in range(8):
            p = _random_poly(rng, degree=3, terms=3)
            if p.is_zero() or p.is_constant():
                continue
            base = squarefree_part(p)
            for k in (1, 2, 3):
                assert squarefree_part(p**k) == base

    def test_decomposition_structure(self):
        p = P("x^2*y^3*(x+y)")
        parts = squarefree_decomposition(p)
        assert [(str(f), k) for f, k in parts] == [("x + y", 1), ("x", 2), ("y", 3)]
        rebuilt = Polynomial.constant(XY, 1)
        for f, k in parts:
            rebuilt = rebuilt * f**k
        assert rebuilt.monic() == p.monic()


class TestLinearChange:
    def test_identity_change(self):
        out = linear_change(P("x"), P("x"), P("y"))
        assert str(out) == "u"

    def test_hyperbolic_rotation(self):
        out = linear_change(P("x^2 - y^2"), P("x + y"), P("x - y"))
        assert str(out) == "u*w"

    def test_swap(self):
        out = linear_change(P("y"), P("y"), P("x"))
        assert str(out) == "u"

    def test_dependent_forms(self):
        with pytest.raises(PolynomialError):
            linear_change(P("x"), P("x + y"), P("2*x + 2*y"))


class TestOrderAtOrigin:
    def test_m2_germ(self):
        assert P("x^5 - y^2").order_at_origin() == 2

    def test_order_one(self):
        assert P("x + y^3").order_at_origin() == 1

    def test_constant(self):
        assert P("3").order_at_origin() == 0

    def test_zero_errors(self):
        with pytest.raises(PolynomialError):
            P("0").order_at_origin()


class TestRingAxioms:
    def test_associativity_and_distributivity(self):
        rng = random.Random(0)
        for _ in range(25):
            a = _random_poly(rng, degree=6, terms=8)
            b = _random_poly(rng, degree=6, terms=8)
            c = _random_poly(rng, degree=6, terms=8)
            assert (a + b) + c == a + (b + c)
            assert a * (b + c) == a * b + a * c
            assert a * b == b * a

    def test_exact_division_roundtrip(self):
        rng = random.Random(5)
        for _ in range(15):
            a = _random_poly(rng, degree=4, terms=5)
            b = _random_poly(rng, degree=4, terms=5)
            if b.is_zero():
                continue
            assert divexact(a * b, b) == a

    def test_gcd_divides_both(self):
        rng = random.Random(9)
        for _ in range(10):
            a = _random_poly(rng, degree=3, terms=3)
            b = _random_poly(rng, degree=3, terms=3)
            g = _random_poly(rng, degree=2, terms=2)
            if a.is_zero() or b.is_zero() or g.is_zero():
                continue
            d = poly_gcd(a * g, b * g)
            divexact(a * g, d)
            divexact(b * g, d)
            if not g.is_constant():
                assert not d.is_constant()


def _random_poly(rng, degree, terms):
    out = {}
    for _ in range(rng.randint(0, terms)):
        i = rng.randint(0, degree)
        j = rng.randint(0, degree - i)
        out[(i, j)] = GaussianRational(
            Fraction(rng.randint(-4, 4), rng.randint(1, 3)),
            Fraction(rng.choice((0, 0, 0, rng.randint(-2, 2)))),
        )
    return Polynomial(XY, out)
