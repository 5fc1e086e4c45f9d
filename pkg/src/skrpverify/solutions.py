"""Symbolic profiles, their derived eigenvalue functions, and the c = 0
closed-form soliton family.

A profile is the horizontal Hessian eigenvalue phi as an exact expression
in the potential t, together with the constants (m, c, kappa, eps).  From
it everything else is derived exactly:

    psi    = phi + (t-c) phi'          (vertical Hessian eigenvalue)
    Q      = 2 (t-c) phi               (squared gradient norm)
    lap    = 2m phi + 2 (t-c) phi'     (Laplacian of the potential)
    mu     = -(m+1) phi' - (t-c) phi'' (vertical Ricci eigenvalue)
    lam    = (eps*kappa - lap) / (2(t-c))  (horizontal Ricci eigenvalue,
             defined through the kappa relation; the geometry side
             measures it independently)

The c = 0 family is constructed by residual elimination: the two free
constants of the closed form are pinned by requiring exactly zero residual
in both equations of the coupled system, never by trusting a printed
constraint.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import mpmath

from .odesys import LinearODE2, SolitonParams, build_mek, build_soliton_system
from .ratcalc import (
    ExactDivisionError,
    ExpExpression,
    POLY_T,
    Polynomial,
    RF_ONE,
    RF_T,
    RationalFunction,
    as_fraction,
)

__all__ = [
    "Interval",
    "SkrpProfile",
    "DerivedFunctions",
    "KoisoFamily",
    "DegenerateProfileError",
    "TrivialProfileError",
    "AmbiguousSignError",
    "qet_derive",
    "alpha_gamma",
    "koiso_family",
    "koiso_phi",
    "homogeneous_sum",
    "exp_basis_element",
    "residual",
    "verify_mek_identity",
    "MekIdentityReport",
    "dual_profile_check",
    "DualProfileReport",
    "expr_sign_at",
    "linear_profile",
]


class DegenerateProfileError(Exception):
    """The Hessian is a multiple of the metric: psi == phi identically."""


class TrivialProfileError(Exception):
    """The profile vanishes identically."""


class AmbiguousSignError(Exception):
    """High-precision evaluation could not separate the value from zero."""


@dataclass(frozen=True)
class Interval:
    """Open rational interval; None endpoints mean -oo / +oo."""

    lo: Optional[Fraction]
    hi: Optional[Fraction]

    def __post_init__(self):
        if self.lo is not None and self.hi is not None and self.lo >= self.hi:
            raise ValueError("empty interval")

    @classmethod
    def make(cls, lo, hi) -> "Interval":
        return cls(
            None if lo is None else as_fraction(lo),
            None if hi is None else as_fraction(hi),
        )

    def midpoint(self) -> Fraction:
        if self.lo is not None and self.hi is not None:
            return (self.lo + self.hi) / 2
        if self.lo is not None:
            return self.lo + 1
        if self.hi is not None:
            return self.hi - 1
        return Fraction(1)

    def contains(self, x: Fraction) -> bool:
        if self.lo is not None and x <= self.lo:
            return False
        if self.hi is not None and x >= self.hi:
            return False
        return True

    def __str__(self):
        lo = "-oo" if self.lo is None else str(self.lo)
        hi = "+oo" if self.hi is None else str(self.hi)
        return f"({lo}, {hi})"


def expr_sign_at(expr: ExpExpression, x0: Fraction) -> int:
    """Sign of an exact expression at a rational point.

    Rational expressions are evaluated exactly.  With exponential terms the
    value is transcendental; 60-digit evaluation separates it from zero
    unless it is smaller than 1e-40, which is rejected as ambiguous.
    """
    x0 = as_fraction(x0)
    if expr.is_rational:
        v = expr.rational(x0)
        return (v > 0) - (v < 0)
    with mpmath.workdps(60):
        val = _mp_eval(expr, x0)
        if abs(val) < mpmath.mpf("1e-40"):
            raise AmbiguousSignError(f"value {val} at t = {x0} is too close to zero")
        return 1 if val > 0 else -1


def _mp_frac(c: Fraction):
    return mpmath.mpf(c.numerator) / c.denominator


def _mp_poly(p: Polynomial, x):
    acc = mpmath.mpf(0)
    for c in reversed(p.coeffs):
        acc = acc * x + _mp_frac(c)
    return acc


def _mp_rf(r: RationalFunction, x):
    return _mp_poly(r.num, x) / _mp_poly(r.den, x)


def _mp_eval(expr: ExpExpression, x0: Fraction):
    x = _mp_frac(x0)
    total = _mp_rf(expr.rational, x)
    for c, e in expr.terms:
        total += _mp_rf(c, x) * mpmath.e ** _mp_rf(e, x)
    return total


@dataclass(frozen=True)
class SkrpProfile:
    """Exact profile data (m, c, kappa, eps, phi) on an open interval.

    eps is the constant sign of phi on the interval; Q = 2(t-c)phi must be
    positive there, which is spot-checked at the interval midpoint.
    """

    m: int
    c: Fraction
    kappa: Fraction
    eps: int
    phi: ExpExpression
    interval: Interval

    def __post_init__(self):
        if self.m < 2:
            raise ValueError("complex dimension m must be >= 2")
        if self.eps not in (-1, 1):
            raise ValueError("eps must be +1 or -1")
        if self.phi.is_zero:
            raise TrivialProfileError("phi vanishes identically")
        mid = self.interval.midpoint()
        q_mid = expr_sign_at(self.q_expression(), mid)
        if q_mid <= 0:
            raise ValueError(f"Q = 2(t-c)phi is not positive at t = {mid}")
        if self.eps * expr_sign_at(self.phi, mid) <= 0:
            raise ValueError(f"eps does not match the sign of phi at t = {mid}")

    @classmethod
    def make(cls, m, c, kappa, eps, phi, interval) -> "SkrpProfile":
        return cls(int(m), as_fraction(c), as_fraction(kappa), int(eps), phi, interval)

    def t_minus_c(self) -> RationalFunction:
        return RF_T - RationalFunction.constant(self.c)

    def q_expression(self) -> ExpExpression:
        return self.phi * (2 * self.t_minus_c())


@dataclass(frozen=True)
class DerivedFunctions:
    """Everything derived from a profile; alpha, gamma absent when the
    Hessian is a multiple of the metric (phi' == 0)."""

    psi: ExpExpression
    Q: ExpExpression
    lap: ExpExpression
    mu: ExpExpression
    lam: ExpExpression
    alpha: Optional[ExpExpression]
    gamma: Optional[ExpExpression]

    @property
    def degenerate(self) -> bool:
        return self.alpha is None


def qet_derive(profile: SkrpProfile) -> DerivedFunctions:
    """Derive psi, Q, Laplacian, mu, lam (and alpha, gamma if possible)."""
    phi = profile.phi
    dphi = phi.derivative()
    d2phi = dphi.derivative()
    tc = profile.t_minus_c()
    m = profile.m

    psi = phi + tc * dphi
    Q = 2 * tc * phi
    lap = 2 * m * phi + 2 * tc * dphi
    mu = -(m + 1) * dphi - tc * d2phi
    lam = (profile.eps * profile.kappa - lap).div_exact(
        ExpExpression.from_rational(2 * tc)
    )

    if (psi - phi).is_zero:
        return DerivedFunctions(psi, Q, lap, mu, lam, None, None)
    alpha, gamma = alpha_gamma(profile)
    return DerivedFunctions(psi, Q, lap, mu, lam, alpha, gamma)


def alpha_gamma(profile: SkrpProfile) -> tuple[ExpExpression, ExpExpression]:
    """Coefficients of the Ricci-Hessian equation from the eigenvalues.

    alpha = (lam - mu)/(psi - phi) and gamma = alpha*phi + lam; the second
    route gamma = alpha*psi + mu must agree exactly, which is asserted.
    """
    phi = profile.phi
    dphi = phi.derivative()
    d2phi = dphi.derivative()
    tc = profile.t_minus_c()
    m = profile.m

    psi_minus_phi = tc * dphi
    if psi_minus_phi.is_zero:
        raise DegenerateProfileError("psi == phi: Hessian is a multiple of the metric")
    psi = phi + tc * dphi
    lap = 2 * m * phi + 2 * tc * dphi
    mu = -(m + 1) * dphi - tc * d2phi
    lam = (profile.eps * profile.kappa - lap).div_exact(
        ExpExpression.from_rational(2 * tc)
    )
    alpha = (lam - mu).div_exact(psi_minus_phi)
    gamma = alpha * phi + lam
    gamma_other = alpha * psi + mu
    assert (gamma - gamma_other).is_zero, "two gamma routes disagree"
    return alpha, gamma


def linear_profile(m, kappa, interval=None, eps=1) -> SkrpProfile:
    """The phi = t profile with c = 0; handy exact non-soliton test case."""
    if interval is None:
        interval = Interval.make(Fraction(1, 2), 2)
    return SkrpProfile.make(m, 0, kappa, eps, ExpExpression(RF_T), interval)


# ---------------------------------------------------------------------------
# the c = 0 closed-form family
# ---------------------------------------------------------------------------


def homogeneous_sum(m: int, b, l_from: int) -> Polynomial:
    """sum_{l=l_from}^{m} b^(m-l) t^l / (m-l)!  as an exact polynomial.

    This is t^m times the degree-(m - l_from) Taylor truncation of
    exp(b/t); the top term (l = m, coefficient 1) is required for the sum
    to solve the homogeneous equations, as direct substitution confirms.
    """
    b = as_fraction(b)
    coeffs = [Fraction(0)] * (m + 1)
    for l in range(l_from, m + 1):
        coeffs[l] = b ** (m - l) / math.factorial(m - l)
    return Polynomial(coeffs)


def exp_basis_element(m: int, b) -> ExpExpression:
    """t^m * exp(b/t)."""
    b = as_fraction(b)
    return ExpExpression.exp_term(
        RationalFunction(POLY_T**m), RationalFunction(Polynomial.constant(b), POLY_T)
    )


def koiso_phi(m: int, b, A, B, C) -> ExpExpression:
    """phi = A + B * sum_{l=1}^{m} b^(m-l) t^l/(m-l)! + C t^m exp(b/t)."""
    A, B, C = as_fraction(A), as_fraction(B), as_fraction(C)
    phi = ExpExpression(RationalFunction.constant(A))
    phi = phi + ExpExpression(RationalFunction(Polynomial.constant(B) * homogeneous_sum(m, b, 1)))
    phi = phi + as_fraction(C) * exp_basis_element(m, b)
    return phi


def residual(ode: LinearODE2, phi: ExpExpression) -> ExpExpression:
    """A phi'' + B phi' + C phi - D as a canonical expression."""
    dphi = phi.derivative()
    d2phi = dphi.derivative()
    return ode.A * d2phi + ode.B * dphi + ode.C * phi - ExpExpression.from_rational(ode.D)


@dataclass(frozen=True)
class KoisoFamily:
    """A member of the c = 0 family with its derived constants.

    ``A`` and ``e`` are pinned by residual elimination in the coupled
    system; ``closed_form_A`` records the independent closed-form
    cross-check A = eps*kappa/(2m) + B b^m/m!, e = b A.
    """

    m: int
    b: Fraction
    B: Fraction
    C: Fraction
    kappa: Fraction
    eps: int
    A: Fraction
    e: Fraction
    phi: ExpExpression

    @property
    def closed_form_A(self) -> Fraction:
        return Fraction(self.eps * self.kappa, 2 * self.m) + self.B * self.b**self.m / math.factorial(self.m)

    def params(self) -> SolitonParams:
        return SolitonParams(self.m, self.b, Fraction(0), self.kappa, self.e, self.eps)

    def system(self) -> tuple[LinearODE2, LinearODE2]:
        return build_soliton_system(self.params())

    def as_profile(self, interval: Interval) -> SkrpProfile:
        return SkrpProfile.make(self.m, 0, self.kappa, self.eps, self.phi, interval)

    def q_expression(self) -> ExpExpression:
        return 2 * RF_T * self.phi


def koiso_family(m: int, b, B, C, kappa, eps: int = 1) -> KoisoFamily:
    """Build the c = 0 family member, deriving A and e by residual elimination.

    The additive constant A must kill the residual of the first equation;
    the constant e is whatever the second equation evaluates to on the
    resulting phi.  Both residuals are then asserted to vanish exactly.
    """
    if m < 2:
        raise ValueError("m must be >= 2")
    b, B, C, kappa = as_fraction(b), as_fraction(B), as_fraction(C), as_fraction(kappa)
    if b == 0:
        raise ValueError("soliton constant b must be nonzero")

    params0 = SolitonParams(m, b, Fraction(0), kappa, Fraction(0), eps)
    eq1, eq2 = build_soliton_system(params0)

    phi_known = koiso_phi(m, b, 0, B, C)
    one = ExpExpression(RF_ONE)
    base = residual(eq1, phi_known)
    slope = residual(eq1.homogeneous(), one)  # = C-coefficient = -m t^2
    try:
        quotient = (-base).div_exact(slope)
        A = quotient.as_rational().constant_value()
    except (ExactDivisionError, ValueError) as exc:
        raise ExactDivisionError(
            "no constant A makes the first residual vanish"
        ) from exc

    phi = koiso_phi(m, b, A, B, C)
    if phi.is_zero:
        raise TrivialProfileError("family member is the zero profile")

    w = residual(eq2.homogeneous(), phi)
    try:
        e = w.div_exact(ExpExpression(RF_T)).as_rational().constant_value()
    except (ExactDivisionError, ValueError) as exc:
        raise ExactDivisionError(
            "second equation does not force a constant e on this phi"
        ) from exc

    final = SolitonParams(m, b, Fraction(0), kappa, e, eps)
    f1, f2 = build_soliton_system(final)
    assert residual(f1, phi).is_zero, "first-equation residual must vanish"
    assert residual(f2, phi).is_zero, "second-equation residual must vanish"
    return KoisoFamily(m, b, B, C, kappa, eps, A, e, phi)


# ---------------------------------------------------------------------------
# identity reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MekIdentityReport:
    """Residual of a profile in the second-order equation it must satisfy."""

    profile: SkrpProfile
    skipped: bool
    passed: bool
    alpha: Optional[RationalFunction]
    residual_expr: Optional[ExpExpression]

    def render(self) -> str:
        if self.skipped:
            return "[skip] degenerate profile (Hessian a multiple of the metric)"
        status = "pass" if self.passed else "FAIL"
        return f"[{status}] second-order identity residual = {self.residual_expr.to_str()}"


def verify_mek_identity(profile: SkrpProfile) -> MekIdentityReport:
    """The second-order equation is an identity given the derived alpha.

    For ANY profile, building alpha and lam from the eigenvalue relations
    makes the residual vanish exactly; a failure is an implementation bug,
    never a mathematical one.
    """
    try:
        alpha_expr, _ = alpha_gamma(profile)
    except DegenerateProfileError:
        return MekIdentityReport(profile, True, True, None, None)
    alpha = alpha_expr.as_rational()
    mek = build_mek(profile.m, profile.c, profile.kappa, profile.eps, alpha)
    res = residual(mek, profile.phi)
    return MekIdentityReport(profile, False, res.is_zero, alpha, res)


@dataclass(frozen=True)
class DualProfileReport:
    """Exact check of the inverse-variable profile relations at c = 0."""

    family: KoisoFamily
    phi_hat: ExpExpression
    q_hat: ExpExpression
    passed: bool

    def render(self) -> str:
        status = "pass" if self.passed else "FAIL"
        return (
            f"[{status}] phi_hat = {self.phi_hat.to_str()}; "
            f"Q_hat = {self.q_hat.to_str()}"
        )


def dual_profile_check(family: KoisoFamily) -> DualProfileReport:
    """Check phi_hat(t) = phi(1/t) satisfies Q_hat = 2 t phi_hat = t^2 Q(1/t).

    Q_hat is the squared gradient norm of the inverse pair expressed in its
    own variable; the two routes to it must agree exactly.  Substituting
    back must return the original profile.
    """
    inv = RationalFunction(RF_ONE.num, POLY_T)
    phi_hat = family.phi.substitute(inv)
    Q = family.q_expression()
    q_hat_conformal = ExpExpression(RationalFunction(POLY_T**2)) * Q.substitute(inv)
    q_hat_profile = 2 * RF_T * phi_hat
    ok = (q_hat_conformal - q_hat_profile).is_zero
    ok = ok and (phi_hat.substitute(inv) - family.phi).is_zero
    return DualProfileReport(family, phi_hat, q_hat_profile, ok)
