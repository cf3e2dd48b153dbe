"""Exact multivariate polynomials over the Gaussian rationals.

Terms are stored sparsely as a map from exponent vectors to coefficients;
the canonical order everywhere (printing, leading terms, normalization)
is graded lexicographic in the declared variable order.  All arithmetic
is exact; numeric conversion happens only in the root solver.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .gaussian import GaussianRational, ZERO, ONE, I


class PolynomialError(ValueError):
    pass


class ParseError(PolynomialError):
    """Syntax or symbol error, annotated with the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


def _grlex_key(exps: tuple) -> tuple:
    # graded lexicographic: total degree first, then lex on the exponents
    return (sum(exps), exps)


class Polynomial:
    """Immutable sparse polynomial over Q(i) in a fixed variable tuple."""

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: dict):
        object.__setattr__(self, "variables", tuple(variables))
        clean = {}
        width = len(self.variables)
        for exps, coeff in terms.items():
            if len(exps) != width:
                raise PolynomialError("exponent vector has wrong length")
            coeff = GaussianRational.from_value(coeff)
            if not coeff.is_zero():
                clean[tuple(exps)] = coeff
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, *args):
        raise AttributeError("Polynomial is immutable")

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, variables) -> "Polynomial":
        return cls(variables, {})

    @classmethod
    def constant(cls, variables, value) -> "Polynomial":
        value = GaussianRational.from_value(value)
        return cls(variables, {(0,) * len(tuple(variables)): value})

    @classmethod
    def variable(cls, variables, name: str) -> "Polynomial":
        variables = tuple(variables)
        if name not in variables:
            raise PolynomialError(f"unknown symbol {name!r}")
        exps = tuple(1 if v == name else 0 for v in variables)
        return cls(variables, {exps: ONE})

    # -- basic queries -------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> GaussianRational:
        if self.is_zero():
            return ZERO
        if not self.is_constant():
            raise PolynomialError("polynomial is not constant")
        return next(iter(self.terms.values()))

    def total_degree(self) -> int:
        if self.is_zero():
            raise PolynomialError("zero polynomial has no degree")
        return max(sum(e) for e in self.terms)

    def degree(self, var: str) -> int:
        i = self._index(var)
        if self.is_zero():
            return -1
        return max(e[i] for e in self.terms)

    def order_at_origin(self) -> int:
        """Minimal total degree over the terms; >= 2 means membership in m^2."""
        if self.is_zero():
            raise PolynomialError("zero polynomial has no order")
        return min(sum(e) for e in self.terms)

    def constant_term(self) -> GaussianRational:
        return self.terms.get((0,) * len(self.variables), ZERO)

    def _index(self, var: str) -> int:
        try:
            return self.variables.index(var)
        except ValueError:
            raise PolynomialError(f"unknown symbol {var!r}") from None

    def sorted_terms(self):
        """Terms sorted descending in graded lex order."""
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def leading(self) -> tuple:
        if self.is_zero():
            raise PolynomialError("zero polynomial has no leading term")
        exps = max(self.terms, key=_grlex_key)
        return exps, self.terms[exps]

    def monic(self) -> "Polynomial":
        """Divide by the graded-lex leading coefficient."""
        if self.is_zero():
            return self
        _, lc = self.leading()
        if lc.is_one():
            return self
        return self.scale(lc.inverse())

    # -- arithmetic ----------------------------------------------------

    def _check_same(self, other: "Polynomial"):
        if self.variables != other.variables:
            raise PolynomialError(
                f"variable mismatch: {self.variables} vs {other.variables}"
            )

    def __add__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            other = Polynomial.constant(self.variables, other)
        self._check_same(other)
        terms = dict(self.terms)
        for exps, coeff in other.terms.items():
            s = terms.get(exps, ZERO) + coeff
            if s.is_zero():
                terms.pop(exps, None)
            else:
                terms[exps] = s
        return Polynomial(self.variables, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            other = Polynomial.constant(self.variables, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, value) -> "Polynomial":
        value = GaussianRational.from_value(value)
        if value.is_zero():
            return Polynomial.zero(self.variables)
        return Polynomial(self.variables, {e: c * value for e, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            return self.scale(other)
        self._check_same(other)
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exps = tuple(a + b for a, b in zip(e1, e2))
                s = terms.get(exps, ZERO) + c1 * c2
                if s.is_zero():
                    terms.pop(exps, None)
                else:
                    terms[exps] = s
        return Polynomial(self.variables, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise PolynomialError("negative polynomial power")
        result = Polynomial.constant(self.variables, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.variables == other.variables and self.terms == other.terms

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    # -- calculus / substitution ----------------------------------------

    def partial_derivative(self, var: str) -> "Polynomial":
        i = self._index(var)
        terms: dict = {}
        for exps, coeff in self.terms.items():
            k = exps[i]
            if k == 0:
                continue
            new = exps[:i] + (k - 1,) + exps[i + 1 :]
            terms[new] = terms.get(new, ZERO) + coeff * k
        return Polynomial(self.variables, terms)

    def evaluate(self, values: dict) -> GaussianRational:
        """Full exact evaluation; every variable must be assigned."""
        missing = [v for v in self.variables if v not in values]
        if missing:
            raise PolynomialError(f"missing values for {missing}")
        vals = [GaussianRational.from_value(values[v]) for v in self.variables]
        total = ZERO
        for exps, coeff in self.terms.items():
            term = coeff
            for base, k in zip(vals, exps):
                if k:
                    term = term * base**k
            total = total + term
        return total

    def substitute(self, mapping: dict) -> "Polynomial":
        """Replace variables by polynomials (all over the same target tuple).

        Variables not mentioned must exist in the target variables.
        """
        target = None
        for val in mapping.values():
            if isinstance(val, Polynomial):
                target = val.variables
                break
        if target is None:
            raise PolynomialError("substitute needs at least one polynomial value")
        images = []
        for v in self.variables:
            if v in mapping:
                val = mapping[v]
                if not isinstance(val, Polynomial):
                    val = Polynomial.constant(target, val)
                images.append(val)
            else:
                images.append(Polynomial.variable(target, v))
        result = Polynomial.zero(target)
        # cache powers per variable
        powers = [{0: Polynomial.constant(target, 1)} for _ in images]
        for exps, coeff in self.terms.items():
            term = Polynomial.constant(target, coeff)
            for i, k in enumerate(exps):
                if k:
                    cache = powers[i]
                    if k not in cache:
                        cache[k] = images[i] ** k
                    term = term * cache[k]
            result = result + term
        return result

    def eliminate_variable(self, var: str, value) -> "Polynomial":
        """Exact substitution of one variable by a constant; drops the variable."""
        i = self._index(var)
        value = GaussianRational.from_value(value)
        new_vars = self.variables[:i] + self.variables[i + 1 :]
        terms: dict = {}
        for exps, coeff in self.terms.items():
            c = coeff * value ** exps[i]
            new = exps[:i] + exps[i + 1 :]
            s = terms.get(new, ZERO) + c
            if s.is_zero():
                terms.pop(new, None)
            else:
                terms[new] = s
        return Polynomial(new_vars, terms)

    def in_variables(self, variables) -> "Polynomial":
        """Re-embed into a (super)set of variables."""
        variables = tuple(variables)
        pos = []
        for v in self.variables:
            if v not in variables:
                raise PolynomialError(f"target variables lack {v!r}")
            pos.append(variables.index(v))
        terms = {}
        for exps, coeff in self.terms.items():
            new = [0] * len(variables)
            for p, e in zip(pos, exps):
                new[p] = e
            terms[tuple(new)] = coeff
        return Polynomial(variables, terms)

    # -- univariate views ------------------------------------------------

    def as_univariate(self, var: str) -> list:
        """Dense coefficient list in `var`; entries are polynomials in the rest."""
        i = self._index(var)
        rest = self.variables[:i] + self.variables[i + 1 :]
        d = self.degree(var)
        coeffs = [dict() for _ in range(d + 1)] if d >= 0 else []
        for exps, coeff in self.terms.items():
            coeffs[exps[i]][exps[:i] + exps[i + 1 :]] = coeff
        return [Polynomial(rest, t) for t in coeffs]

    @classmethod
    def from_univariate(cls, coeffs: list, var: str, position: int | None = None):
        """Inverse of as_univariate: rebuild with `var` inserted."""
        if not coeffs:
            raise PolynomialError("empty coefficient list")
        rest = coeffs[0].variables
        if position is None:
            position = len(rest)
        variables = rest[:position] + (var,) + rest[position:]
        terms = {}
        for k, c in enumerate(coeffs):
            for exps, coeff in c.terms.items():
                new = exps[:position] + (k,) + exps[position:]
                terms[new] = coeff
        return cls(variables, terms)

    def dense_coefficients(self) -> list:
        """For a univariate polynomial: list of GaussianRational, low to high."""
        if len(self.variables) != 1:
            raise PolynomialError("polynomial is not univariate")
        d = self.degree(self.variables[0])
        out = [ZERO] * (d + 1)
        for exps, coeff in self.terms.items():
            out[exps[0]] = coeff
        return out

    # -- printing ---------------------------------------------------------

    def __str__(self):
        if self.is_zero():
            return "0"
        pieces = []
        for exps, coeff in self.sorted_terms():
            mono = "*".join(
                v if k == 1 else f"{v}^{k}"
                for v, k in zip(self.variables, exps)
                if k
            )
            cs = _coeff_str(coeff, bool(mono))
            if mono:
                body = f"{cs}*{mono}" if cs not in ("", "-") else f"{cs}{mono}"
            else:
                body = cs if cs not in ("", "-") else f"{cs}1"
            if pieces:
                if body.startswith("-"):
                    pieces.append(" - " + body[1:])
                else:
                    pieces.append(" + " + body)
            else:
                pieces.append(body)
        return "".join(pieces)

    def __repr__(self):
        return f"Polynomial({self.variables!r}, {str(self)!r})"


def _coeff_str(coeff: GaussianRational, has_monomial: bool) -> str:
    if coeff.is_real():
        if coeff.re == 1 and has_monomial:
            return ""
        if coeff.re == -1 and has_monomial:
            return "-"
        return str(coeff.re)
    if coeff.re == 0:
        if coeff.im == 1:
            return "i"
        if coeff.im == -1:
            return "-i"
        if coeff.im > 0:
            return f"{coeff.im}*i" if not has_monomial else f"({coeff.im}*i)"
        return f"-({-coeff.im}*i)" if has_monomial else f"{coeff.im}*i"
    return f"({coeff})"


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

# grammar (whitespace insignificant):
#   expr     := ['-'] term (('+'|'-') term)*
#   term     := factor ('*' factor)*
#   factor   := base ('^' uint)?
#   base     := symbol | rational | 'i' | '(' expr ')'
#   rational := int ('/' uint)?
# the optional leading '-' extends the bare grammar so that canonical
# printing of negative leading terms parses back.


class _Parser:
    def __init__(self, text: str, variables: tuple):
        self.text = text
        self.pos = 0
        self.variables = variables

    def error(self, message: str):
        raise ParseError(message, self.pos)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1

    def parse(self) -> Polynomial:
        result = self.parse_expr()
        self.skip_ws()
        if self.pos != len(self.text):
            self.error("unexpected trailing input")
        return result

    def parse_expr(self) -> Polynomial:
        negate = False
        if self.peek() == "-":
            self.pos += 1
            negate = True
        result = self.parse_term()
        if negate:
            result = -result
        while True:
            ch = self.peek()
            if ch == "+":
                self.pos += 1
                result = result + self.parse_term()
            elif ch == "-":
                self.pos += 1
                result = result - self.parse_term()
            else:
                return result

    def parse_term(self) -> Polynomial:
        result = self.parse_factor()
        while self.peek() == "*":
            self.pos += 1
            result = result * self.parse_factor()
        return result

    def parse_factor(self) -> Polynomial:
        base = self.parse_base()
        if self.peek() == "^":
            self.pos += 1
            self.skip_ws()
            exponent = self.parse_uint("exponent must be a non-negative integer")
            return base**exponent
        return base

    def parse_base(self) -> Polynomial:
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            inner = self.parse_expr()
            self.expect(")")
            return inner
        if ch.isdigit():
            num = self.parse_uint("expected integer")
            if self.peek() == "/":
                self.pos += 1
                self.skip_ws()
                if not self.peek().isdigit():
                    self.error("expected denominator")
                den = self.parse_uint("expected denominator")
                if den == 0:
                    self.error("zero denominator")
                return Polynomial.constant(self.variables, Fraction(num, den))
            return Polynomial.constant(self.variables, num)
        if ch.isalpha():
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isalnum():
                self.pos += 1
            name = self.text[start : self.pos]
            if name == "i":
                return Polynomial.constant(self.variables, I)
            if name not in self.variables:
                self.pos = start
                self.error(f"unknown symbol {name!r}")
            return Polynomial.variable(self.variables, name)
        if ch == "":
            self.error("unexpected end of input")
        self.error(f"unexpected character {ch!r}")

    def parse_uint(self, message: str) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error(message)
        return int(self.text[start : self.pos])


def parse_polynomial(text: str, variables) -> Polynomial:
    """Parse `text` into the expanded canonical polynomial over `variables`."""
    return _Parser(text, tuple(variables)).parse()


# ---------------------------------------------------------------------------
# division, gcd, squarefree structure
# ---------------------------------------------------------------------------


def divexact(p: Polynomial, d: Polynomial) -> Polynomial:
    """Exact division p / d; raises if the division leaves a remainder."""
    p._check_same(d)
    if d.is_zero():
        raise PolynomialError("division by the zero polynomial")
    if d.is_constant():
        return p.scale(d.constant_value().inverse())
    quotient_terms: dict = {}
    rem = p
    d_lead_exps, d_lead_coeff = d.leading()
    inv = d_lead_coeff.inverse()
    while not rem.is_zero():
        r_exps, r_coeff = rem.leading()
        q_exps = tuple(a - b for a, b in zip(r_exps, d_lead_exps))
        if any(e < 0 for e in q_exps):
            raise PolynomialError("inexact polynomial division")
        q_coeff = r_coeff * inv
        quotient_terms[q_exps] = q_coeff
        rem = rem - d * Polynomial(p.variables, {q_exps: q_coeff})
    return Polynomial(p.variables, quotient_terms)


def _poly_divides(d: Polynomial, p: Polynomial) -> bool:
    try:
        divexact(p, d)
        return True
    except PolynomialError:
        return False


def _univar_gcd(a: list, b: list) -> list:
    """Gcd of dense GaussianRational coefficient lists, monic.

    Runs a primitive pseudo-remainder sequence over Gaussian integers
    (denominators cleared, integer content stripped per step) to keep the
    coefficient sizes polynomial instead of exponential.
    """
    A = _strip_int(_to_gaussian_int(a))
    B = _strip_int(_to_gaussian_int(b))
    if len(A) < len(B):
        A, B = B, A
    while B:
        R = _int_prem_primitive(A, B)
        A, B = B, R
    if not A:
        return []
    lead = GaussianRational(Fraction(A[-1][0]), Fraction(A[-1][1]))
    inv = lead.inverse()
    return [GaussianRational(Fraction(re), Fraction(im)) * inv for re, im in A]


def _to_gaussian_int(coeffs):
    from math import gcd as _gcd

    den = 1
    for c in coeffs:
        den = den * c.re.denominator // _gcd(den, c.re.denominator)
        den = den * c.im.denominator // _gcd(den, c.im.denominator)
    return [
        (int(c.re * den), int(c.im * den))
        for c in coeffs
    ]


def _strip_int(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == (0, 0):
        coeffs.pop()
    return _int_content_strip(coeffs)


def _int_content_strip(coeffs):
    from math import gcd as _gcd

    g = 0
    for re, im in coeffs:
        g = _gcd(g, _gcd(abs(re), abs(im)))
        if g == 1:
            return coeffs
    if g in (0, 1):
        return coeffs
    return [(re // g, im // g) for re, im in coeffs]


def _int_prem_primitive(A, B):
    """Primitive pseudo-remainder of Gaussian-integer coefficient lists."""

    def gmul(p, q):
        return (p[0] * q[0] - p[1] * q[1], p[0] * q[1] + p[1] * q[0])

    R = list(A)
    lcB = B[-1]
    while R and len(R) >= len(B):
        lcR = R[-1]
        shift = len(R) - len(B)
        R = [gmul(lcB, c) for c in R]
        for i, c in enumerate(B):
            prod = gmul(lcR, c)
            R[shift + i] = (R[shift + i][0] - prod[0], R[shift + i][1] - prod[1])
        R.pop()
        while R and R[-1] == (0, 0):
            R.pop()
        R = _int_content_strip(R)
    return R


def poly_gcd(p: Polynomial, q: Polynomial) -> Polynomial:
    """Exact gcd over Q(i)[vars], normalized monic in graded lex order."""
    p._check_same(q)
    if p.is_zero():
        return q.monic()
    if q.is_zero():
        return p.monic()
    if p.is_constant() or q.is_constant():
        return Polynomial.constant(p.variables, 1)
    # pick the first variable occurring in both, else in either
    main = None
    active = [v for v in p.variables if p.degree(v) > 0 or q.degree(v) > 0]
    for v in p.variables:
        if p.degree(v) > 0 and q.degree(v) > 0:
            main = v
            break
    if main is None:
        # no shared variable: gcd divides both contents, which live in
        # disjoint variable sets, so it is a unit
        return Polynomial.constant(p.variables, 1)
    if len(active) == 1:
        return _univar_gcd_single(p, q, main)
    if len(active) == 2:
        other = next(v for v in active if v != main)
        result = _bivariate_modular_gcd(p, q, main, other)
        if result is not None:
            return result
    cp, pp = _content_primitive(p, main)
    cq, pq = _content_primitive(q, main)
    cont = poly_gcd(cp, cq)
    g = _primitive_prs_gcd(pp, pq, main)
    return (cont * g).monic()


def _bivariate_modular_gcd(p, q, main, other):
    """Brown-style gcd: univariate gcds at sample points, interpolated and
    verified by exact division.  Returns None when sampling stays unlucky
    (the caller falls back to the remainder-sequence gcd)."""
    cp, pp = _content_primitive(p, main)
    cq, pq = _content_primitive(q, main)
    cont = poly_gcd(cp, cq)
    lc_p = pp.as_univariate(main)[-1].in_variables(p.variables)
    lc_q = pq.as_univariate(main)[-1].in_variables(p.variables)
    gamma = poly_gcd(lc_p, lc_q)
    dv_bound = (
        gamma.degree(other)
        + min(max(pp.degree(other), 0), max(pq.degree(other), 0))
        + 1
    )
    best_degree = None
    samples = []  # (point, scaled dense u-coefficient list)
    candidates = _sample_points()
    tried = 0
    while tried < 8 * dv_bound + 32:
        r = next(candidates)
        tried += 1
        lcp_val = lc_p.evaluate({main: 0, other: r})
        lcq_val = lc_q.evaluate({main: 0, other: r})
        if lcp_val.is_zero() or lcq_val.is_zero():
            continue
        pu = pp.eliminate_variable(other, r)
        qu = pq.eliminate_variable(other, r)
        g = _univar_gcd(
            _dense_in(pu, main), _dense_in(qu, main)
        )
        d = len(g) - 1
        if d == 0:
            return cont.monic() if not cont.is_constant() else Polynomial.constant(
                p.variables, 1
            )
        if best_degree is None or d < best_degree:
            best_degree = d
            samples = []
        if d > best_degree:
            continue
        scale = gamma.evaluate({main: 0, other: r})
        samples.append((r, [c * scale for c in g]))
        if len(samples) >= dv_bound:
            candidate = _interpolate_bivariate(samples, best_degree, p.variables, main, other)
            if candidate is not None:
                _, candidate = _content_primitive(candidate, main)
                candidate = candidate.monic()
                if _poly_divides(candidate, pp) and _poly_divides(candidate, pq):
                    return (cont * candidate).monic()
            # unlucky mixture: drop the oldest sample and keep going
            samples.pop(0)
    return None


def _sample_points():
    yield GaussianRational(0)
    k = 1
    while True:
        yield GaussianRational(k)
        yield GaussianRational(-k)
        k += 1


def _dense_in(p, var):
    d = p.degree(var)
    idx = p._index(var)
    out = [ZERO] * (d + 1)
    for exps, c in p.terms.items():
        out[exps[idx]] = c
    return out


def _interpolate_bivariate(samples, degree_u, variables, main, other):
    """Coefficient-wise Newton interpolation of sampled u-polynomials."""
    points = [r for r, _ in samples]
    n = len(points)
    main_idx = list(variables).index(main)
    other_idx = list(variables).index(other)
    coeff_polys = []
    for k in range(degree_u + 1):
        values = [
            dense[k] if k < len(dense) else ZERO for _, dense in samples
        ]
        # Newton divided differences
        table = list(values)
        for level in range(1, n):
            for i in range(n - 1, level - 1, -1):
                span = points[i] - points[i - level]
                if span.is_zero():
                    return None
                table[i] = (table[i] - table[i - 1]) * span.inverse()
        # expand the Newton form into dense coefficients in `other`
        dense = [ZERO] * n
        acc = [GaussianRational(1)] + [ZERO] * (n - 1)  # running product
        for level in range(n):
            ci = table[level]
            if not ci.is_zero():
                for j in range(level + 1):
                    dense[j] = dense[j] + ci * acc[j]
            if level < n - 1:
                shifted = [ZERO] * n
                for j in range(level + 1):
                    if not acc[j].is_zero():
                        shifted[j + 1] = shifted[j + 1] + acc[j]
                        shifted[j] = shifted[j] - acc[j] * points[level]
                acc = shifted
        coeff_polys.append(dense)
    terms = {}
    for k, dense in enumerate(coeff_polys):
        for j, c in enumerate(dense):
            if not c.is_zero():
                exps = [0] * len(variables)
                exps[main_idx] = k
                exps[other_idx] = j
                terms[tuple(exps)] = c
    return Polynomial(variables, terms)


def _univar_gcd_single(p: Polynomial, q: Polynomial, var: str) -> Polynomial:
    pc = [c.constant_value() for c in p.as_univariate(var)]
    qc = [c.constant_value() for c in q.as_univariate(var)]
    g = _univar_gcd(pc, qc)
    i = p._index(var)
    terms = {}
    for k, c in enumerate(g):
        if not c.is_zero():
            exps = [0] * len(p.variables)
            exps[i] = k
            terms[tuple(exps)] = c
    return Polynomial(p.variables, terms)


def _content_primitive(p: Polynomial, var: str):
    coeffs = [c for c in p.as_univariate(var) if not c.is_zero()]
    content = coeffs[0]
    for c in coeffs[1:]:
        if content.is_constant():
            break
        content = poly_gcd(content, c)
    content = content.monic()
    content_full = content.in_variables(p.variables)
    return content_full, divexact(p, content_full)


def content_primitive(p: Polynomial, var: str):
    """Split p into (content, primitive part) with respect to `var`.

    The content is the gcd of the coefficient polynomials and carries no
    `var` dependence.
    """
    return _content_primitive(p, var)


def _rational_content_normalize(p: Polynomial) -> Polynomial:
    """Divide by the positive rational content; coefficients become coprime
    Gaussian integers (keeps sizes small along remainder sequences)."""
    if p.is_zero():
        return p
    from math import gcd as _gcd

    den = 1
    for c in p.terms.values():
        den = den * c.re.denominator // _gcd(den, c.re.denominator)
        den = den * c.im.denominator // _gcd(den, c.im.denominator)
    num = 0
    for c in p.terms.values():
        num = _gcd(num, abs(int(c.re * den)))
        num = _gcd(num, abs(int(c.im * den)))
        if num == 1 and den == 1:
            return p
    content = Fraction(num, den) if num else Fraction(1, den)
    return p.scale(GaussianRational(1 / content))


def _pseudo_remainder(p: Polynomial, q: Polynomial, var: str) -> Polynomial:
    """Primitive-flavored prem(p, q) in `var` (exact up to scalar content)."""
    dp, dq = p.degree(var), q.degree(var)
    if dp < dq:
        return p
    qc = q.as_univariate(var)
    lc = qc[-1].in_variables(p.variables)
    rem = _rational_content_normalize(p)
    for _ in range(dp - dq + 1):
        if rem.is_zero() or rem.degree(var) < dq:
            break
        # scale once so the leading division below is exact
        rem = rem * lc
        rc = rem.as_univariate(var)
        dr = len(rc) - 1
        lead = rc[-1].in_variables(p.variables)
        shift_exps = [0] * len(p.variables)
        shift_exps[p._index(var)] = dr - dq
        shift = Polynomial(p.variables, {tuple(shift_exps): ONE})
        rem = rem - divexact(lead, lc) * shift * q
        rem = _rational_content_normalize(rem)
    return rem


def _primitive_prs_gcd(p: Polynomial, q: Polynomial, var: str) -> Polynomial:
    if p.degree(var) < q.degree(var):
        p, q = q, p
    while not q.is_zero():
        r = _pseudo_remainder(p, q, var)
        if r.is_zero():
            p, q = q, r
            break
        if r.degree(var) <= 0:
            return Polynomial.constant(p.variables, 1)
        _, r = _content_primitive(r, var)
        # scalar normalization caps the rational growth along the sequence
        p, q = q, r.monic()
    _, p = _content_primitive(p, var)
    return p.monic()


def squarefree_part(p: Polynomial) -> Polynomial:
    """Product of the distinct irreducible factors, graded-lex monic."""
    if p.is_zero():
        raise PolynomialError("squarefree part of zero")
    if p.is_constant():
        return Polynomial.constant(p.variables, 1)
    g = p
    for v in p.variables:
        if p.degree(v) > 0:
            g = poly_gcd(g, p.partial_derivative(v))
    return divexact(p, g).monic()


def squarefree_decomposition(p: Polynomial) -> list:
    """Yun decomposition [(factor, multiplicity)], factors pairwise coprime.

    Works variable by variable: the content free of the current main
    variable is recursed on separately.
    """
    if p.is_zero():
        raise PolynomialError("squarefree decomposition of zero")
    if p.is_constant():
        return []
    main = next(v for v in p.variables if p.degree(v) > 0)
    content, primitive = _content_primitive(p, main)
    out = [] if content.is_constant() else squarefree_decomposition(content)
    a = primitive.monic()
    da = a.partial_derivative(main)
    g = poly_gcd(a, da)
    if g.is_constant():
        out.append((a, 1))
        return _merge_sqf(out)
    c = divexact(a, g)
    d = divexact(da, g) - c.partial_derivative(main)
    k = 1
    while not c.is_constant():
        f = poly_gcd(c, d)
        if not f.is_constant():
            out.append((f.monic(), k))
        c2 = divexact(c, f)
        d = divexact(d, f) - c2.partial_derivative(main)
        c = c2
        k += 1
    return _merge_sqf(out)


def _merge_sqf(factors: list) -> list:
    merged: dict = {}
    for f, k in factors:
        merged[k] = merged.get(k, Polynomial.constant(f.variables, 1)) * f
    return [(f.monic(), k) for k, f in sorted(merged.items())]


# ---------------------------------------------------------------------------
# resultants (Sylvester determinant via Bareiss elimination)
# ---------------------------------------------------------------------------


def resultant(p: Polynomial, q: Polynomial, var: str) -> Polynomial:
    """Sylvester resultant eliminating `var`, exact.

    Convention: the Sylvester matrix lists the deg(p) shifted rows of q
    first, so resultant(p, q) = lc(q)^deg(p) * prod p(roots of q) up to
    the usual sign bookkeeping.
    """
    p._check_same(q)
    m, n = p.degree(var), q.degree(var)
    if m < 1 or n < 1:
        raise PolynomialError("resultant needs positive degree in the variable")
    pc = [c for c in p.as_univariate(var)]
    qc = [c for c in q.as_univariate(var)]
    rest = pc[0].variables
    size = m + n
    zero = Polynomial.zero(rest)
    rows = []
    for i in range(m):  # q-rows first
        row = [zero] * size
        for j, c in enumerate(reversed(qc)):
            row[i + j] = c
        rows.append(row)
    for i in range(n):
        row = [zero] * size
        for j, c in enumerate(reversed(pc)):
            row[i + j] = c
        rows.append(row)
    return _bareiss_determinant(rows, rest)


def _bareiss_determinant(rows: list, variables) -> Polynomial:
    n = len(rows)
    if n == 0:
        return Polynomial.constant(variables, 1)
    m = [list(r) for r in rows]
    sign = 1
    prev = Polynomial.constant(variables, 1)
    for k in range(n - 1):
        pivot_row = None
        for r in range(k, n):
            if not m[r][k].is_zero():
                pivot_row = r
                break
        if pivot_row is None:
            return Polynomial.zero(variables)
        if pivot_row != k:
            m[k], m[pivot_row] = m[pivot_row], m[k]
            sign = -sign
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = pivot * m[i][j] - m[i][k] * m[k][j]
                m[i][j] = divexact(num, prev)
            m[i][k] = Polynomial.zero(variables)
        prev = pivot
    det = m[n - 1][n - 1]
    return det if sign == 1 else -det


# ---------------------------------------------------------------------------
# linear change of coordinates
# ---------------------------------------------------------------------------


def linear_change(
    p: Polynomial,
    ell: Polynomial,
    complement: Polynomial,
    new_vars: tuple = ("u", "w"),
) -> Polynomial:
    """Rewrite p(x, y) in coordinates (u, w) with u = ell, w = complement."""
    if len(p.variables) != 2:
        raise PolynomialError("linear_change expects a bivariate polynomial")
    a, b = _linear_form_coefficients(ell)
    c, d = _linear_form_coefficients(complement)
    det = a * d - b * c
    if det.is_zero():
        raise PolynomialError("dependent linear forms")
    inv = det.inverse()
    u = Polynomial.variable(new_vars, new_vars[0])
    w = Polynomial.variable(new_vars, new_vars[1])
    x_image = u.scale(d * inv) + w.scale(-b * inv)
    y_image = u.scale(-c * inv) + w.scale(a * inv)
    return p.substitute({p.variables[0]: x_image, p.variables[1]: y_image})


def _linear_form_coefficients(form: Polynomial):
    if form.is_zero():
        raise PolynomialError("zero linear form")
    a = ZERO
    b = ZERO
    for exps, coeff in form.terms.items():
        if exps == (1, 0):
            a = coeff
        elif exps == (0, 1):
            b = coeff
        else:
            raise PolynomialError("form is not homogeneous linear")
    return a, b
