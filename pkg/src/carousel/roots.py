"""Certified complex root solving.

Univariate polynomials with exact Gaussian-rational coefficients are
split into squarefree factors exactly, then each factor is solved by
Aberth-Ehrlich simultaneous iteration at a chosen bit precision.  The
a-posteriori certificate is the Weierstrass-style bound: the disks
around the approximations with radius n*|p(z)/prod(z - z_j)| cover the
roots, and pairwise disjoint disks isolate exactly one root each.
"""

from __future__ import annotations

import os

import mpmath
from mpmath import mp, mpc, mpf

from .gaussian import GaussianRational
from .poly import Polynomial, PolynomialError


class PrecisionError(ArithmeticError):
    """Raised when roots could not be certified at the allowed precision."""


def max_precision_cap(default: int = 4096) -> int:
    """Retry ceiling for precision doubling, overridable via CAROUSEL_MAX_PRECISION."""
    value = os.environ.get("CAROUSEL_MAX_PRECISION")
    if not value:
        return default
    try:
        return max(53, int(value))
    except ValueError:
        return default


class ComplexBall:
    """A complex disk `|z - center| <= radius` at a known bit precision."""

    __slots__ = ("center", "radius", "precision")

    def __init__(self, center, radius, precision: int):
        if precision < 53:
            raise ValueError("ball precision must be at least 53 bits")
        self.center = mpc(center)
        self.radius = mpf(radius)
        if not mpmath.isfinite(self.radius) or self.radius < 0:
            raise ValueError("ball radius must be finite and non-negative")
        self.precision = precision

    def contains_zero(self) -> bool:
        return abs(self.center) <= self.radius

    def is_disjoint_from(self, other: "ComplexBall") -> bool:
        return abs(self.center - other.center) > self.radius + other.radius

    def __repr__(self):
        return f"ComplexBall({self.center}, r={mpmath.nstr(self.radius, 3)})"


def gaussian_to_mpc(value: GaussianRational) -> mpc:
    """Round an exact Q(i) value to the current working precision."""
    re = mpf(value.re.numerator) / value.re.denominator
    im = mpf(value.im.numerator) / value.im.denominator
    return mpc(re, im)


_ORDER_GRID = 1 << 40


def ordering_key(z) -> tuple:
    """Sort key by (real, imaginary), quantized to a 2^-40 grid.

    The coarse leading components make the ordering stable across
    different working precisions (mathematically equal values quantize
    identically instead of being ranked by rounding noise); the exact
    values break remaining ties deterministically within a run.
    """
    z = mpc(z)
    return (
        int(mpmath.nint(z.real * _ORDER_GRID)),
        int(mpmath.nint(z.imag * _ORDER_GRID)),
        z.real,
        z.imag,
    )


def _horner(coeffs, z):
    acc = mpc(0)
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


def _derivative_coeffs(coeffs):
    return [coeffs[k] * k for k in range(1, len(coeffs))]


def aberth_roots(coeffs, precision: int, max_iterations: int = 400):
    """All roots of a squarefree numeric polynomial (dense mpc list, low first).

    Returns certified ComplexBall list sorted by (re, im) of the centers.
    Raises PrecisionError when the certificates fail to separate roots.
    """
    with mp.workprec(precision + 32):
        c = [mpc(v) for v in coeffs]
        while c and abs(c[-1]) == 0:
            c.pop()
        if len(c) <= 1:
            return []
        n = len(c) - 1
        lead = c[-1]
        monic = [v / lead for v in c]
        if n == 1:
            z = -monic[0]
            return [ComplexBall(z, mpf(2) ** (-precision) * (1 + abs(z)), precision)]
        deriv = _derivative_coeffs(monic)
        # initial guesses on a circle scaled by the Cauchy bound,
        # slightly rotated to break symmetric stalls deterministically
        radius = 1 + max(abs(v) for v in monic[:-1])
        z = [
            radius * mpmath.exp(2j * mpmath.pi * (mpf(k) / n) + 0.4j)
            for k in range(n)
        ]
        tol = mpf(2) ** (-(precision + 16))
        for _ in range(max_iterations):
            moved = mpf(0)
            for i in range(n):
                pz = _horner(monic, z[i])
                dz = _horner(deriv, z[i])
                if dz == 0:
                    z[i] = z[i] + tol + mpf(10) ** (-6)
                    moved = max(moved, abs(tol))
                    continue
                newton = pz / dz
                s = mpc(0)
                for j in range(n):
                    if j != i:
                        diff = z[i] - z[j]
                        if diff == 0:
                            diff = tol
                        s += 1 / diff
                denom = 1 - newton * s
                if denom == 0:
                    step = newton
                else:
                    step = newton / denom
                z[i] = z[i] - step
                moved = max(moved, abs(step))
            if moved < tol * (1 + max(abs(v) for v in z)):
                break
        balls = _certify(monic, z, precision)
        balls.sort(key=lambda b: ordering_key(b.center))
        return balls


def _certify(monic, z, precision):
    n = len(monic) - 1
    balls = []
    for i in range(n):
        pz = _horner(monic, z[i])
        prod = mpc(1)
        for j in range(n):
            if j != i:
                prod *= z[i] - z[j]
        if prod == 0:
            raise PrecisionError("coincident approximations")
        radius = n * abs(pz / prod) * (1 + mpf(2) ** (-20))
        balls.append(ComplexBall(z[i], radius, precision))
    for i in range(n):
        for j in range(i + 1, n):
            if not balls[i].is_disjoint_from(balls[j]):
                raise PrecisionError("root disks overlap; raise precision")
    return balls


def solve_numeric(coeffs, precision: int, max_precision: int | None = None):
    """Roots of a numeric squarefree polynomial, doubling precision on failure."""
    if max_precision is None:
        max_precision = max_precision_cap()
    prec = precision
    while True:
        try:
            return aberth_roots(coeffs, prec)
        except PrecisionError:
            if prec >= max_precision:
                raise
            prec = min(2 * prec, max_precision)


def univariate_roots(
    p: Polynomial, precision: int, max_precision: int | None = None
) -> list:
    """All complex roots with multiplicity of an exact univariate polynomial.

    Multiplicities come from the exact squarefree decomposition, so the
    numeric stage only ever isolates simple roots.  The returned list of
    (ComplexBall, multiplicity) pairs is sorted by root center.
    """
    from .poly import squarefree_decomposition

    if p.is_zero():
        raise PolynomialError("cannot solve the zero polynomial")
    if len(p.variables) != 1:
        raise PolynomialError("univariate_roots expects one variable")
    if p.degree(p.variables[0]) < 1:
        raise PolynomialError("polynomial has no roots (degree 0)")
    if max_precision is None:
        max_precision = max_precision_cap()
    factors = squarefree_decomposition(p)
    prec = precision
    while True:
        with mp.workprec(prec + 32):
            out = []
            try:
                for factor, mult in factors:
                    if factor.degree(factor.variables[0]) < 1:
                        continue
                    coeffs = [gaussian_to_mpc(c) for c in factor.dense_coefficients()]
                    for ball in aberth_roots(coeffs, prec):
                        out.append((ball, mult))
                _check_cross_factor(out)
            except PrecisionError:
                if prec >= max_precision:
                    raise
                prec = min(2 * prec, max_precision)
                continue
        out.sort(key=lambda bm: ordering_key(bm[0].center))
        return out


def _check_cross_factor(balls_with_mult):
    for i in range(len(balls_with_mult)):
        for j in range(i + 1, len(balls_with_mult)):
            if not balls_with_mult[i][0].is_disjoint_from(balls_with_mult[j][0]):
                raise PrecisionError("roots of distinct factors overlap")


def refine_newton(coeffs, start, precision: int, iterations: int = 64):
    """Newton-polish one root of a numeric polynomial; returns a ComplexBall.

    The certificate radius n*|p/p'| always contains at least one true
    root of the polynomial.
    """
    with mp.workprec(precision + 32):
        c = [mpc(v) for v in coeffs]
        n = len(c) - 1
        deriv = _derivative_coeffs(c)
        z = mpc(start)
        tol = mpf(2) ** (-(precision + 8))
        scale = 1 + abs(z)
        for _ in range(iterations):
            pz = _horner(c, z)
            dz = _horner(deriv, z)
            if dz == 0:
                raise PrecisionError("vanishing derivative during refinement")
            step = pz / dz
            z = z - step
            if abs(step) < tol * scale:
                break
        pz = _horner(c, z)
        dz = _horner(deriv, z)
        if dz == 0:
            raise PrecisionError("vanishing derivative at refined point")
        radius = n * abs(pz / dz) * (1 + mpf(2) ** (-20))
        return ComplexBall(z, radius, precision)
