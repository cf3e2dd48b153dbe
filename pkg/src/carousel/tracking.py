"""Carousel monodromy: track the diagram fiber over the value circle.

The m points of Delta(u, v) = 0 over v = eta*e^(i*theta), theta from 0
to 2*pi, are followed by a predictor (previous position) / corrector
(Newton refinement with a certified inclusion radius) scheme.  The loop
closes up to a permutation of the base fiber; it is checked against the
exact cycle type predicted from the Puiseux branches of Delta.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath
from mpmath import mp, mpc, mpf

from .polar import CerfDiagram
from .poly import Polynomial
from .roots import (PrecisionError, gaussian_to_mpc, ordering_key,
                    solve_numeric)


class TrackingError(RuntimeError):
    pass


class RadiiError(TrackingError):
    """No validated disc pair was found while shrinking."""


@dataclass(frozen=True)
class CarouselRadii:
    """Validated disc radii: fiber disc |u| < rho, value circle |v| = eta."""

    rho: mpf
    eta: mpf
    validation: dict
    precision: int


@dataclass(frozen=True)
class CarouselPermutation:
    m: int
    base_points: tuple
    sigma: tuple
    cycle_type: tuple
    fixed_points: tuple
    orbit_traces: tuple
    steps_used: int
    precision_used: int


@dataclass(frozen=True)
class FixedPointVerdict:
    fixed_point_free: bool
    consistent: bool
    predicted_lefschetz: int | None
    note: str


class _FiberPolynomial:
    """Delta as a polynomial in u whose coefficients are evaluated at v."""

    def __init__(self, delta: Polynomial, precision: int):
        self.precision = precision
        with mp.workprec(precision + 32):
            coeff_polys = delta.as_univariate("u")
            self.coeffs_v = []
            for cp in coeff_polys:
                dense = [mpc(0)] * (cp.degree("v") + 1 if not cp.is_zero() else 1)
                for exps, c in cp.terms.items():
                    dense[exps[0]] = gaussian_to_mpc(c)
                self.coeffs_v.append(dense)
        self.degree = len(self.coeffs_v) - 1

    def at_value(self, v):
        out = []
        for dense in self.coeffs_v:
            acc = mpc(0)
            for c in reversed(dense):
                acc = acc * v + c
            out.append(acc)
        # drop a numerically vanished leading coefficient (root at infinity)
        scale = max([abs(c) for c in out] + [mpf(1)])
        tol = scale * mpf(2) ** (-(self.precision // 2))
        while len(out) > 1 and abs(out[-1]) <= tol:
            out.pop()
        return out


def _horner2(coeffs, z):
    p = mpc(0)
    dp = mpc(0)
    for c in reversed(coeffs):
        dp = dp * z + p
        p = p * z + c
    return p, dp


def choose_radii(
    diagram: CerfDiagram, precision: int = 128, radius_scale=1
) -> CarouselRadii:
    """Shrink (rho, eta) geometrically until every disc condition holds.

    Checks: Delta(u, 0) = 0 has u = 0 as its only root well inside the
    fiber disc; every sampled fiber over |v| = eta carries exactly m
    roots below rho/2 and none in the guard annulus [rho/2, 2*rho]; the
    m base roots are pairwise separated relative to 2^(-precision/4).
    """
    if diagram.is_empty:
        raise RadiiError("empty diagram has no carousel")
    from .roots import univariate_roots

    m = diagram.contact_count
    delta = diagram.defining
    with mp.workprec(precision + 32):
        scale = mpf(radius_scale) if not hasattr(radius_scale, "numerator") else (
            mpf(radius_scale.numerator) / mpf(radius_scale.denominator)
        )
        slice_zero = delta.eliminate_variable("v", 0)
        nonzero_bound = None
        xvar = slice_zero.variables[0]
        reduced = {
            (e[0] - min(k[0] for k in slice_zero.terms),): c
            for e, c in slice_zero.terms.items()
        }
        off_origin = Polynomial((xvar,), reduced)
        if off_origin.degree(xvar) >= 1:
            for ball, _ in univariate_roots(off_origin, precision):
                low = abs(ball.center) - ball.radius
                if nonzero_bound is None or low < nonzero_bound:
                    nonzero_bound = low
        rho = None
        for k in range(41):
            cand = scale * mpf(4) ** (-k)
            if cand > 1:
                continue
            if nonzero_bound is None or 2 * cand < nonzero_bound:
                rho = cand
                break
        if rho is None:
            raise RadiiError("could not isolate the origin in the fiber disc")
        fiber = _FiberPolynomial(delta, precision)
        samples = 64
        sep_floor = mpf(2) ** (-(precision // 4))
        eta = None
        validation = {}
        for j in range(1, 41):
            cand = rho * mpf(4) ** (-j)
            ok, info = _validate_eta(fiber, m, rho, cand, samples, sep_floor)
            if ok:
                eta = cand
                validation = info
                break
        if eta is None:
            raise RadiiError(
                "could not validate a value-circle radius (degenerate diagram "
                "or precision too low)"
            )
        validation.update(
            {
                "origin_isolated_below": None
                if nonzero_bound is None
                else float(nonzero_bound),
                "samples": samples,
                "fiber_count": m,
            }
        )
        return CarouselRadii(rho=rho, eta=eta, validation=validation, precision=precision)


def _validate_eta(fiber, m, rho, eta, samples, sep_floor):
    min_sep = None
    for s in range(samples):
        v = eta * mpmath.expjpi(mpf(2 * s) / samples)
        try:
            roots = solve_numeric(fiber.at_value(v), fiber.precision)
        except PrecisionError:
            return False, {}
        near = [b for b in roots if abs(b.center) < rho / 2]
        annulus = [
            b for b in roots if rho / 2 <= abs(b.center) <= 2 * rho
        ]
        if len(near) != m or annulus:
            return False, {}
        if s == 0:
            for i in range(len(near)):
                for j in range(i + 1, len(near)):
                    d = abs(near[i].center - near[j].center)
                    rel = d / max(abs(near[i].center), abs(near[j].center), mpf(1e-30))
                    if min_sep is None or rel < min_sep:
                        min_sep = rel
            if min_sep is not None and min_sep < sep_floor:
                return False, {}
    return True, {
        "base_min_relative_separation": None if min_sep is None else float(min_sep),
    }


def _base_fiber(fiber, radii):
    roots = solve_numeric(fiber.at_value(radii.eta), fiber.precision)
    near = [b for b in roots if abs(b.center) < radii.rho / 2]
    near.sort(key=lambda b: ordering_key(b.center))
    return near


def _refine_points(coeffs, points, rho, precision):
    """Newton-correct all tracked points; return (points, radii) or None."""
    n = len(coeffs) - 1
    tol = mpf(2) ** (-(precision + 8))
    new_pts = []
    new_radii = []
    for z in points:
        zz = z
        ok = False
        for _ in range(40):
            p, dp = _horner2(coeffs, zz)
            if dp == 0:
                return None
            step = p / dp
            zz = zz - step
            if abs(step) < tol * (1 + abs(zz)):
                ok = True
                break
        p, dp = _horner2(coeffs, zz)
        if dp == 0:
            return None
        radius = n * abs(p / dp) * (1 + mpf(2) ** (-20))
        if not ok and radius > mpf(2) ** (-(precision // 2)):
            return None
        if abs(zz) >= rho / 2:
            return None
        new_pts.append(zz)
        new_radii.append(radius)
    # pairwise separation with the 4x ambiguity margin
    for i in range(len(new_pts)):
        for j in range(i + 1, len(new_pts)):
            if abs(new_pts[i] - new_pts[j]) <= 4 * (new_radii[i] + new_radii[j]):
                return None
    # continuity: each point must move much less than the fiber separation
    if len(new_pts) > 1:
        min_sep = min(
            abs(new_pts[i] - new_pts[j])
            for i in range(len(new_pts))
            for j in range(i + 1, len(new_pts))
        )
        max_move = max(abs(a - b) for a, b in zip(points, new_pts))
        if max_move > min_sep / 4:
            return None
    return new_pts, new_radii


def carousel_permutation(
    diagram: CerfDiagram,
    radii: CarouselRadii,
    steps: int = 512,
    precision: int = 128,
    direction: int = 1,
) -> CarouselPermutation:
    """Monodromy permutation of the fiber points over one loop in v.

    Deterministic for fixed (steps, precision); ambiguous corrector steps
    bisect the angle interval locally, failing hard beyond 2^20 steps.
    `direction=-1` traverses the loop clockwise and yields the inverse
    permutation.
    """
    if diagram.is_empty:
        raise TrackingError("empty diagram has no carousel")
    if steps < 64:
        raise TrackingError("need at least 64 steps")
    if direction not in (1, -1):
        raise TrackingError("direction must be +1 or -1")
    with mp.workprec(precision + 32):
        fiber = _FiberPolynomial(diagram.defining, precision)
        base = _base_fiber(fiber, radii)
        m = diagram.contact_count
        if len(base) != m:
            raise TrackingError(
                f"base fiber carries {len(base)} points, expected {m}"
            )
        points = [b.center for b in base]
        traces = [[(float(z.real), float(z.imag))] for z in points]
        budget = [0]
        max_steps = 1 << 20

        def advance(theta_from, theta_to, pts, depth):
            if budget[0] > max_steps:
                raise TrackingError("step budget exhausted (matching stayed ambiguous)")
            v = radii.eta * mpmath.expjpi(2 * direction * theta_to)
            coeffs = fiber.at_value(v)
            budget[0] += 1
            result = _refine_points(coeffs, pts, radii.rho, precision)
            if result is None:
                if depth > 40:
                    raise TrackingError("matching ambiguity at maximal resolution")
                mid = (theta_from + theta_to) / 2
                pts = advance(theta_from, mid, pts, depth + 1)
                return advance(mid, theta_to, pts, depth + 1)
            new_pts, _ = result
            for i, z in enumerate(new_pts):
                traces[i].append((float(z.real), float(z.imag)))
            return new_pts

        for k in range(steps):
            t0 = mpf(k) / steps
            t1 = mpf(k + 1) / steps
            points = advance(t0, t1, points, 0)

        sigma = _match_to_base(points, base, precision)
        fixed = tuple(i for i, j in enumerate(sigma) if i == j)
        cycle_type = _cycle_type(sigma)
        return CarouselPermutation(
            m=m,
            base_points=tuple(base),
            sigma=tuple(sigma),
            cycle_type=cycle_type,
            fixed_points=fixed,
            orbit_traces=tuple(tuple(t) for t in traces),
            steps_used=budget[0],
            precision_used=precision,
        )


def _match_to_base(points, base, precision):
    m = len(points)
    sigma = [-1] * m
    taken = [False] * m
    for i, z in enumerate(points):
        dists = sorted(
            (abs(z - base[j].center), j) for j in range(m)
        )
        best_d, best_j = dists[0]
        margin = 4 * (base[best_j].radius + mpf(2) ** (-(precision // 2)))
        if best_d > max(margin, mpf(2) ** (-(precision // 4))):
            raise TrackingError("final point does not land on a base point")
        if len(dists) > 1 and dists[1][0] <= 4 * best_d + margin:
            raise TrackingError("final matching is ambiguous")
        if taken[best_j]:
            raise TrackingError("two tracked points collided (diagram not squarefree?)")
        taken[best_j] = True
        sigma[i] = best_j
    return sigma


def _cycle_type(sigma):
    seen = [False] * len(sigma)
    lengths = []
    for i in range(len(sigma)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = sigma[j]
            length += 1
        lengths.append(length)
    return tuple(sorted(lengths))


def predicted_cycle_type(diagram: CerfDiagram) -> tuple:
    """Exact oracle: each branch contributes one cycle of its v-order."""
    if diagram.is_empty:
        return ()
    return tuple(sorted(b.y_order for b in diagram.branches.branches))


def fixed_point_verdict(perm: CarouselPermutation, f_order: int) -> FixedPointVerdict:
    """Check fixed-point-freeness against what the germ's order demands."""
    free = not perm.fixed_points
    if f_order >= 2:
        consistent = free
        predicted = 0
        note = (
            "order >= 2: the monodromy admits a representative without fixed "
            "points, so its Lefschetz number vanishes"
            if free
            else "order >= 2 but the carousel permutation has fixed points: "
            "numerical or genericity failure"
        )
    else:
        consistent = True
        predicted = None
        note = "order < 2: no fixed-point statement applies"
    return FixedPointVerdict(
        fixed_point_free=free,
        consistent=consistent,
        predicted_lefschetz=predicted,
        note=note,
    )
