"""Exact univariate algebra over arbitrary-precision rationals.

Everything downstream (ODE construction, closed-form solution checks,
duality identities) reduces to arithmetic in three nested rings:

* ``Polynomial``       -- dense polynomials in one variable over `Fraction`,
* ``RationalFunction`` -- reduced quotients with monic denominator,
* ``ExpExpression``    -- finite sums R0 + sum_i Ri * exp(Ei) with rational
                          Ri, Ei, closed under d/dtau, products and
                          composition with rational substitutions.

All values are immutable and all operations are pure, so instances can be
shared freely.  There is deliberately no floating-point fallback here:
equality and zero-testing are exact.  Numeric evaluation is generic over
the scalar type (Fraction, float, second-order jets, mpmath) via operator
overloading.

The canonical textual rendering used in reports writes the variable as "t".
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence, Union

__all__ = [
    "NEG_INF",
    "Polynomial",
    "RationalFunction",
    "ExpExpression",
    "PartialFractionForm",
    "PoleTerm",
    "RatcalcError",
    "PoleError",
    "PartialFractionError",
    "SubstitutionError",
    "ExactDivisionError",
    "as_fraction",
    "partial_fractions",
    "POLY_ZERO",
    "POLY_ONE",
    "POLY_T",
    "RF_ZERO",
    "RF_ONE",
    "RF_T",
]

RationalLike = Union[int, str, Fraction]

#: degree of the zero polynomial
NEG_INF = float("-inf")


class RatcalcError(Exception):
    """Base class for exact-arithmetic failures."""


class PoleError(RatcalcError):
    """Exact evaluation requested at a pole of a rational function."""


class PartialFractionError(RatcalcError):
    """Denominator does not split over the supplied poles."""


class SubstitutionError(RatcalcError):
    """Composition would violate an ExpExpression invariant."""


class ExactDivisionError(RatcalcError):
    """Quotient is not representable in the expression class."""


def as_fraction(x: RationalLike) -> Fraction:
    """Coerce int / 'p/q' string / Fraction to an exact Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational scalar")
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def _fraction_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------


class Polynomial:
    """Dense univariate polynomial over Fraction, trailing zeros stripped."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[RationalLike] = ()):
        cs = [as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):  # immutable
        raise AttributeError("Polynomial is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def constant(cls, c: RationalLike) -> "Polynomial":
        return cls([as_fraction(c)])

    @classmethod
    def monomial(cls, power: int, coeff: RationalLike = 1) -> "Polynomial":
        if power < 0:
            raise ValueError("monomial power must be >= 0")
        return cls([0] * power + [as_fraction(coeff)])

    @classmethod
    def variable(cls) -> "Polynomial":
        return cls([0, 1])

    # -- structure ---------------------------------------------------------

    @property
    def degree(self):
        """Degree, with -inf for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    @property
    def leading(self) -> Fraction:
        if not self.coeffs:
            return Fraction(0)
        return self.coeffs[-1]

    def coeff(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    # -- ring operations ---------------------------------------------------

    def __add__(self, other) -> "Polynomial":
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(self.coeff(k) + other.coeff(k) for k in range(n))

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(-c for c in self.coeffs)

    def __sub__(self, other) -> "Polynomial":
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Polynomial":
        return -(self - other)

    def __mul__(self, other) -> "Polynomial":
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero or other.is_zero:
            return POLY_ZERO
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Polynomial":
        if n < 0:
            raise ValueError("negative polynomial power; use RationalFunction")
        result = POLY_ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other: "Polynomial"):
        other = _as_poly(other)
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        q = [Fraction(0)] * max(len(self.coeffs) - len(other.coeffs) + 1, 0)
        rem = list(self.coeffs)
        d = len(other.coeffs) - 1
        lead = other.leading
        while len(rem) - 1 >= d and rem:
            k = len(rem) - 1 - d
            c = rem[-1] / lead
            q[k] = c
            for j, b in enumerate(other.coeffs):
                rem[k + j] -= c * b
            while rem and rem[-1] == 0:
                rem.pop()
        return Polynomial(q), Polynomial(rem)

    def __floordiv__(self, other) -> "Polynomial":
        return divmod(self, other)[0]

    def __mod__(self, other) -> "Polynomial":
        return divmod(self, other)[1]

    def gcd(self, other: "Polynomial") -> "Polynomial":
        """Monic gcd by the Euclidean algorithm."""
        a, b = self, _as_poly(other)
        while not b.is_zero:
            a, b = b, a % b
        if a.is_zero:
            return POLY_ZERO
        return a * (1 / a.leading)

    def derivative(self) -> "Polynomial":
        return Polynomial(k * c for k, c in enumerate(self.coeffs) if k > 0)

    def __call__(self, x):
        """Horner evaluation; generic over the scalar/ring of ``x``."""
        acc = x * 0  # zero of the ring of x
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    # -- comparisons / hashing ---------------------------------------------

    def __eq__(self, other) -> bool:
        other = _as_poly(other)
        if other is NotImplemented:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(("Polynomial", self.coeffs))

    # -- rendering ----------------------------------------------------------

    def to_str(self, var: str = "t") -> str:
        if self.is_zero:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            if k == 0:
                body = _fraction_str(abs(c))
            else:
                tpow = var if k == 1 else f"{var}^{k}"
                body = tpow if abs(c) == 1 else f"{_fraction_str(abs(c))}*{tpow}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)

    def __repr__(self):
        return f"Polynomial({self.to_str()})"

    @property
    def term_count(self) -> int:
        return sum(1 for c in self.coeffs if c != 0)


def _as_poly(x) -> "Polynomial":
    if isinstance(x, Polynomial):
        return x
    if isinstance(x, (int, Fraction)):
        return Polynomial([as_fraction(x)])
    return NotImplemented


POLY_ZERO = Polynomial()
POLY_ONE = Polynomial([1])
POLY_T = Polynomial([0, 1])


# ---------------------------------------------------------------------------
# rational functions
# ---------------------------------------------------------------------------


class RationalFunction:
    """Quotient of polynomials in canonical form.

    Invariants: denominator nonzero and monic, gcd(num, den) = 1, the zero
    function is 0/1.  Equality is therefore plain structural equality.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        num = _as_poly(num)
        den = _as_poly(den)
        if num is NotImplemented or den is NotImplemented:
            raise TypeError("RationalFunction expects polynomial-like arguments")
        if den.is_zero:
            raise ZeroDivisionError("zero denominator in RationalFunction")
        if num.is_zero:
            num, den = POLY_ZERO, POLY_ONE
        else:
            g = num.gcd(den)
            if g.degree > 0:
                num, den = num // g, den // g
            lead = den.leading
            if lead != 1:
                inv = 1 / lead
                num, den = num * inv, den * inv
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RationalFunction is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def constant(cls, c: RationalLike) -> "RationalFunction":
        return cls(Polynomial.constant(c))

    @classmethod
    def variable(cls) -> "RationalFunction":
        return cls(POLY_T)

    # -- structure ---------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def is_constant(self) -> bool:
        return self.num.is_constant and self.den.is_constant

    def constant_value(self) -> Fraction:
        if not self.is_constant:
            raise ValueError(f"{self} is not constant")
        return self.num.coeff(0)

    # -- field operations ---------------------------------------------------

    def __add__(self, other) -> "RationalFunction":
        other = _as_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return RationalFunction(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    __radd__ = __add__

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        other = _as_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = _as_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_rf(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero:
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        other = _as_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __pow__(self, n: int) -> "RationalFunction":
        if n < 0:
            if self.is_zero:
                raise ZeroDivisionError("zero to a negative power")
            return RationalFunction(self.den, self.num) ** (-n)
        return RationalFunction(self.num**n, self.den**n)

    def derivative(self) -> "RationalFunction":
        """Quotient-rule derivative in canonical form."""
        return RationalFunction(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    def substitute(self, s: "RationalFunction") -> "RationalFunction":
        """Exact composition self(s(t))."""
        s = _as_rf(s)
        if s.is_constant:
            raise SubstitutionError("substitution target must be nonconstant")
        return _compose_poly(self.num, s) / _compose_poly(self.den, s)

    def __call__(self, x):
        """Evaluate at a scalar of any ring; exact at Fraction points."""
        num = self.num(x)
        den = self.den(x)
        if isinstance(x, (int, Fraction)) and den == 0:
            raise PoleError(f"evaluation at pole t = {x}")
        return num / den

    # -- comparisons ---------------------------------------------------------

    def __eq__(self, other) -> bool:
        other = _as_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash(("RationalFunction", self.num.coeffs, self.den.coeffs))

    # -- rendering -----------------------------------------------------------

    def to_str(self, var: str = "t") -> str:
        num_str = self.num.to_str(var)
        if self.den == POLY_ONE:
            return num_str
        if self.num.term_count > 1 or "/" in num_str:
            num_str = f"({num_str})"
        den_str = self.den.to_str(var)
        if self.den.term_count > 1 or _needs_parens(den_str):
            den_str = f"({den_str})"
        return f"{num_str}/{den_str}"

    def __repr__(self):
        return f"RationalFunction({self.to_str()})"


def _needs_parens(rendered: str) -> bool:
    return "*" in rendered or " " in rendered or "/" in rendered


def _compose_poly(p: Polynomial, s: "RationalFunction") -> "RationalFunction":
    acc = RationalFunction(0)
    for c in reversed(p.coeffs):
        acc = acc * s + RationalFunction.constant(c)
    return acc


def _as_rf(x) -> "RationalFunction":
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, (int, Fraction, Polynomial)):
        return RationalFunction(_as_poly(x))
    return NotImplemented


RF_ZERO = RationalFunction(0)
RF_ONE = RationalFunction(1)
RF_T = RationalFunction(POLY_T)


def rf_normalize(num: Polynomial, den: Polynomial) -> RationalFunction:
    """Canonical reduced quotient of two polynomials (den must be nonzero)."""
    return RationalFunction(num, den)


# ---------------------------------------------------------------------------
# partial fractions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PoleTerm:
    """One summand coeff/(t - location)^order of a decomposition."""

    location: Fraction
    order: int
    coeff: Fraction


@dataclass(frozen=True)
class PartialFractionForm:
    """Polynomial part plus simple/higher-order pole terms."""

    poly_part: Polynomial
    terms: tuple[PoleTerm, ...]

    def reassemble(self) -> RationalFunction:
        total = RationalFunction(self.poly_part)
        for term in self.terms:
            den = (POLY_T - Polynomial.constant(term.location)) ** term.order
            total = total + RationalFunction(Polynomial.constant(term.coeff), den)
        return total

    def as_dict(self) -> dict[tuple[Fraction, int], Fraction]:
        return {(t.location, t.order): t.coeff for t in self.terms}

    def to_str(self, var: str = "t") -> str:
        parts = []
        if not self.poly_part.is_zero:
            parts.append(self.poly_part.to_str(var))
        for t in self.terms:
            den = (POLY_T - Polynomial.constant(t.location)) ** t.order
            parts.append(RationalFunction(Polynomial.constant(t.coeff), den).to_str(var))
        return " + ".join(parts) if parts else "0"


def partial_fractions(
    f: RationalFunction, poles: Sequence[RationalLike]
) -> PartialFractionForm:
    """Exact partial fraction decomposition over the supplied rational poles.

    The caller names the candidate pole locations (repeats are fine); any
    denominator factor without a supplied rational root raises
    PartialFractionError.  Reassembling the result reproduces ``f`` exactly,
    which is asserted before returning.
    """
    candidates = []
    for p in poles:
        p = as_fraction(p)
        if p not in candidates:
            candidates.append(p)

    multiplicity: dict[Fraction, int] = {}
    rem = f.den
    for p in candidates:
        k = 0
        linear = POLY_T - Polynomial.constant(p)
        while not rem.is_zero and rem(p) == 0:
            rem = rem // linear
            k += 1
        if k:
            multiplicity[p] = k
    if rem.degree > 0:
        raise PartialFractionError(
            f"denominator factor {rem.to_str()} has no supplied rational root"
        )

    poly_part, num_rem = divmod(f.num, f.den)
    terms: list[PoleTerm] = []
    for p, k in multiplicity.items():
        other = f.den // (POLY_T - Polynomial.constant(p)) ** k
        g = RationalFunction(num_rem, other)  # regular at p
        # coefficient of (t-p)^-j is g^{(k-j)}(p) / (k-j)!
        derivs = [g]
        for _ in range(k - 1):
            derivs.append(derivs[-1].derivative())
        for j in range(k, 0, -1):
            order_of_deriv = k - j
            coeff = derivs[order_of_deriv](p) / math.factorial(order_of_deriv)
            if coeff != 0:
                terms.append(PoleTerm(p, j, coeff))
    terms.sort(key=lambda t: (t.location, t.order))
    form = PartialFractionForm(poly_part, tuple(terms))
    if form.reassemble() != f:
        raise PartialFractionError("internal error: reassembly mismatch")
    return form


# ---------------------------------------------------------------------------
# rational + exponential expressions
# ---------------------------------------------------------------------------


def _valid_exponent(e: RationalFunction) -> bool:
    """Exponents must be nonconstant with zero constant term.

    'Zero constant term' means the polynomial part of the quotient has no
    degree-0 coefficient, so admissible exponents look like b/t, b*t,
    b/(t-c), ... but never t + 1.  This keeps exp terms free of
    transcendental scalar factors and zero-testing decidable.
    """
    if e.is_constant:
        return False
    poly_part = e.num // e.den
    return poly_part.coeff(0) == 0


class ExpExpression:
    """Finite sum R0(t) + sum_i Ri(t)*exp(Ei(t)) in canonical form.

    Terms are keyed by exponent (pairwise distinct, canonically ordered),
    zero coefficients are dropped, and every exponent satisfies the
    zero-constant-term invariant.  Closed under +, -, *, d/dt and under
    substitution by rational functions that preserve the invariant.
    """

    __slots__ = ("rational", "terms")

    def __init__(self, rational=RF_ZERO, terms: Iterable = ()):
        rational = _as_rf(rational)
        if rational is NotImplemented:
            raise TypeError("rational part must be rational-function-like")
        merged: dict = {}
        order: list[RationalFunction] = []
        for coeff, exponent in terms:
            coeff = _as_rf(coeff)
            exponent = _as_rf(exponent)
            if coeff.is_zero:
                continue
            if exponent.is_zero:
                rational = rational + coeff
                continue
            if not _valid_exponent(exponent):
                raise SubstitutionError(
                    f"invalid exponent {exponent.to_str()}: must be nonconstant "
                    "with zero constant term"
                )
            if exponent in merged:
                merged[exponent] = merged[exponent] + coeff
            else:
                merged[exponent] = coeff
                order.append(exponent)
        cleaned = tuple(
            (merged[e], e) for e in sorted(order, key=_exponent_key) if not merged[e].is_zero
        )
        object.__setattr__(self, "rational", rational)
        object.__setattr__(self, "terms", cleaned)

    def __setattr__(self, name, value):
        raise AttributeError("ExpExpression is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_rational(cls, r) -> "ExpExpression":
        return cls(_as_rf(r))

    @classmethod
    def exp_term(cls, coeff, exponent) -> "ExpExpression":
        return cls(RF_ZERO, [(coeff, exponent)])

    @classmethod
    def variable(cls) -> "ExpExpression":
        return cls(RF_T)

    # -- structure ---------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.rational.is_zero and not self.terms

    @property
    def is_rational(self) -> bool:
        return not self.terms

    def as_rational(self) -> RationalFunction:
        if self.terms:
            raise ExactDivisionError("expression has exponential terms")
        return self.rational

    # -- ring operations ---------------------------------------------------

    def __add__(self, other) -> "ExpExpression":
        other = _as_expr(other)
        if other is NotImplemented:
            return NotImplemented
        return ExpExpression(
            self.rational + other.rational, list(self.terms) + list(other.terms)
        )

    __radd__ = __add__

    def __neg__(self) -> "ExpExpression":
        return ExpExpression(-self.rational, [(-c, e) for c, e in self.terms])

    def __sub__(self, other):
        other = _as_expr(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other) -> "ExpExpression":
        other = _as_expr(other)
        if other is NotImplemented:
            return NotImplemented
        terms = []
        rational = self.rational * other.rational
        for c, e in self.terms:
            if not other.rational.is_zero:
                terms.append((c * other.rational, e))
        for c, e in other.terms:
            if not self.rational.is_zero:
                terms.append((self.rational * c, e))
        for c1, e1 in self.terms:
            for c2, e2 in other.terms:
                terms.append((c1 * c2, e1 + e2))  # exponent sum may cancel to 0
        return ExpExpression(rational, terms)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "ExpExpression":
        other = _as_expr(other)
        if other is NotImplemented:
            return NotImplemented
        return self.div_exact(other)

    def __pow__(self, n: int) -> "ExpExpression":
        if n < 0:
            raise ValueError("negative powers of ExpExpression are not closed")
        result = ExpExpression(RF_ONE)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def derivative(self) -> "ExpExpression":
        """d/dt, using d/dt[R e^E] = (R' + R E') e^E."""
        terms = [(c.derivative() + c * e.derivative(), e) for c, e in self.terms]
        return ExpExpression(self.rational.derivative(), terms)

    def div_exact(self, other) -> "ExpExpression":
        """Exact quotient when it exists in the expression class.

        Rational divisors always work.  For divisors with exponential terms
        the quotient must be rational: a candidate is read off one nonzero
        part and then certified by multiplying back.
        """
        other = _as_expr(other)
        if other.is_zero:
            raise ZeroDivisionError("division by zero expression")
        if other.is_rational:
            r = other.rational
            return ExpExpression(self.rational / r, [(c / r, e) for c, e in self.terms])
        if not other.rational.is_zero:
            candidate = self.rational / other.rational
        else:
            c0, e0 = other.terms[0]
            matching = [c for c, e in self.terms if e == e0]
            candidate = (matching[0] / c0) if matching else RF_ZERO
        quotient = ExpExpression(candidate)
        if (quotient * other - self).is_zero:
            return quotient
        raise ExactDivisionError(
            "quotient is not a rational multiple; not representable exactly"
        )

    def substitute(self, s: RationalFunction) -> "ExpExpression":
        """Exact composition self(s(t)); exponents must stay admissible."""
        s = _as_rf(s)
        if s.is_constant:
            raise SubstitutionError("substitution target must be nonconstant")
        terms = []
        for c, e in self.terms:
            new_e = e.substitute(s)
            if not _valid_exponent(new_e):
                raise SubstitutionError(
                    f"exponent {e.to_str()} maps to {new_e.to_str()}, which has a "
                    "nonzero constant term"
                )
            terms.append((c.substitute(s), new_e))
        return ExpExpression(self.rational.substitute(s), terms)

    def __call__(self, x, exp_fn: Callable | None = None):
        """Numeric evaluation; exp_fn overrides the exponential used."""
        if exp_fn is None:
            exp_fn = _default_exp
        total = self.rational(x)
        for c, e in self.terms:
            total = total + c(x) * exp_fn(e(x))
        return total

    # -- comparisons ---------------------------------------------------------

    def __eq__(self, other) -> bool:
        other = _as_expr(other)
        if other is NotImplemented:
            return NotImplemented
        return self.rational == other.rational and self.terms == other.terms

    def __hash__(self):
        return hash(("ExpExpression", self.rational, self.terms))

    # -- rendering -----------------------------------------------------------

    def to_str(self, var: str = "t") -> str:
        parts: list[str] = []
        if not self.rational.is_zero or not self.terms:
            parts.append(self.rational.to_str(var))
        for c, e in self.terms:
            exp_str = f"exp({e.to_str(var)})"
            if c == RF_ONE:
                body = exp_str
            elif c == -RF_ONE:
                body = f"-{exp_str}"
            else:
                c_str = c.to_str(var)
                if " " in c_str or "/" in c_str:
                    c_str = f"({c_str})"
                body = f"{c_str}*{exp_str}"
            parts.append(body)
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def __repr__(self):
        return f"ExpExpression({self.to_str()})"


def _exponent_key(e: RationalFunction):
    return (
        len(e.den.coeffs),
        len(e.num.coeffs),
        tuple(e.den.coeffs),
        tuple(e.num.coeffs),
    )


def _as_expr(x) -> "ExpExpression":
    if isinstance(x, ExpExpression):
        return x
    if isinstance(x, (int, Fraction, Polynomial, RationalFunction)):
        return ExpExpression(_as_rf(x))
    return NotImplemented


def _default_exp(v):
    if isinstance(v, (int, float, Fraction)):
        return math.exp(v)
    exp = getattr(v, "exp", None)
    if callable(exp):
        return exp()
    raise TypeError(f"no exponential available for {type(v).__name__}")
