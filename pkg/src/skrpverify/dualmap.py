"""The inverse-potential involution on Ricci-Hessian pairs.

A pair is the coefficient data (alpha, gamma) of alpha*Hess(t) + r = gamma*g
together with the scalar functions Q = |grad t|^2 and the Laplacian of t,
all exact expressions in the potential t.  The involution sends the pair of
(g, t) to that of (g/t^2, 1/t); hatted quantities are kept in the original
variable, with a separate re-expression in the inverse variable so the
involution can be iterated and tested exactly.

Also here: the constant-coefficient (soliton) specialization of the
coefficients, the coefficient bundle of the conformal soliton equation for
a potential-dependent soliton function, and the profile-level duality that
recenters the potential before inverting.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .ratcalc import (
    ExpExpression,
    POLY_T,
    Polynomial,
    RF_ONE,
    RF_T,
    RationalFunction,
    as_fraction,
)
from .solutions import (
    Interval,
    SkrpProfile,
    alpha_gamma,
    expr_sign_at,
    qet_derive,
)

__all__ = [
    "PairData",
    "DualizedPair",
    "SolitonSpec",
    "FTauCoefficients",
    "SkrpDualityData",
    "DualityError",
    "dualize",
    "pair_from_profile",
    "soliton_coefficients",
    "f_tau_coefficients",
    "skrp_dualize",
    "invert_interval",
]


class DualityError(Exception):
    """Hypotheses of the involution are violated."""


@dataclass(frozen=True)
class SolitonSpec:
    """Soliton function b/t and soliton constant e."""

    b: Fraction
    e: Fraction

    @classmethod
    def make(cls, b, e) -> "SolitonSpec":
        return cls(as_fraction(b), as_fraction(e))


@dataclass(frozen=True)
class PairData:
    """Exact Ricci-Hessian pair data in the variable t.

    ``excluded`` lists isolated points (zeros of the potential, coefficient
    singularities, points where the Hessian is a multiple of the metric)
    that numerical sampling must avoid; the symbolic identities are rational
    and hold off a finite set, so they are checked globally.
    """

    n: int
    alpha: ExpExpression
    gamma: ExpExpression
    Q: ExpExpression
    lap: ExpExpression
    interval: Interval
    excluded: tuple[Fraction, ...] = ()

    def __post_init__(self):
        if self.n < 3:
            raise ValueError("real dimension n must be >= 3")


@dataclass(frozen=True)
class DualizedPair:
    """Both representations of a dualized pair.

    ``in_tau`` carries the hatted functions still expressed in the original
    variable; ``in_hat`` carries them re-expressed in the inverse variable,
    which is the representation the involution can be applied to again.
    """

    in_tau: PairData
    in_hat: PairData


def invert_interval(interval: Interval, c: Fraction = Fraction(0)) -> Interval:
    """Image of an interval avoiding c under s = 1/(t - c).

    Endpoint conventions under the decreasing map 1/u: infinite endpoints
    map to 0 and a zero endpoint maps to the infinite one on its side.
    """
    lo = None if interval.lo is None else interval.lo - c
    hi = None if interval.hi is None else interval.hi - c
    if (lo is None or lo < 0) and (hi is None or hi > 0):
        raise DualityError(f"interval {interval} contains the inversion center {c}")

    def inv(x):
        if x is None:
            return Fraction(0)
        if x == 0:
            return None
        return 1 / x

    return Interval(inv(hi), inv(lo))


_INV_T = RationalFunction(RF_ONE.num, POLY_T)  # 1/t


def dualize(pair: PairData) -> DualizedPair:
    """Coefficient data of (g/t^2, 1/t) from that of (g, t).

    In the original variable:
        alpha_hat = (n-2) t - t^2 alpha
        gamma_hat = gamma t^2 - (1 + alpha t) Q + t lap
        Q_hat     = Q / t^2
        lap_hat   = n Q / t - lap
    Applying the map twice (through the in_hat representation) recovers the
    original pair exactly.
    """
    if pair.n <= 3:
        raise DualityError("dualization requires real dimension n > 3")
    if pair.interval.contains(Fraction(0)):
        raise DualityError("interval must avoid t = 0 for the inverse potential")

    n = pair.n
    t = ExpExpression(RF_T)
    t_sq = ExpExpression(RationalFunction(POLY_T**2))
    inv_t = ExpExpression(_INV_T)
    inv_t_sq = ExpExpression(_INV_T * _INV_T)

    alpha_hat = (n - 2) * t - t_sq * pair.alpha
    gamma_hat = (
        pair.gamma * t_sq
        - (ExpExpression(RF_ONE) + pair.alpha * t) * pair.Q
        + t * pair.lap
    )
    q_hat = inv_t_sq * pair.Q
    lap_hat = n * inv_t * pair.Q - pair.lap

    in_tau = PairData(
        n, alpha_hat, gamma_hat, q_hat, lap_hat, pair.interval, pair.excluded
    )
    hat_interval = invert_interval(pair.interval)
    hat_excluded = tuple(1 / x for x in pair.excluded if x != 0)
    in_hat = PairData(
        n,
        alpha_hat.substitute(_INV_T),
        gamma_hat.substitute(_INV_T),
        q_hat.substitute(_INV_T),
        lap_hat.substitute(_INV_T),
        hat_interval,
        hat_excluded,
    )
    return DualizedPair(in_tau=in_tau, in_hat=in_hat)


def pair_from_profile(profile: SkrpProfile) -> PairData:
    """Ricci-Hessian pair data of a nondegenerate profile (n = 2m)."""
    derived = qet_derive(profile)
    alpha, gamma = alpha_gamma(profile)
    return PairData(
        n=2 * profile.m,
        alpha=alpha,
        gamma=gamma,
        Q=derived.Q,
        lap=derived.lap,
        interval=profile.interval,
    )


def soliton_coefficients(
    n: int, spec: SolitonSpec, Q: ExpExpression, lap: ExpExpression
) -> tuple[ExpExpression, ExpExpression]:
    """Ricci-Hessian coefficients forced by the soliton equation for g/t^2.

    alpha = (n-2)/t - b/t^2
    gamma = e/t^2 - lap/t + ((n-1)/t^2 - b/t^3) Q
    """
    if n <= 2:
        raise DualityError("soliton coefficients require n > 2")
    t = POLY_T
    alpha = ExpExpression(
        RationalFunction(Polynomial([-spec.b, n - 2]), t**2)
    )
    gamma = (
        ExpExpression(RationalFunction(Polynomial.constant(spec.e), t**2))
        - ExpExpression(_INV_T) * lap
        + ExpExpression(RationalFunction(Polynomial([-spec.b, n - 1]), t**3)) * Q
    )
    return alpha, gamma


@dataclass(frozen=True)
class FTauCoefficients:
    """Coefficient bundle of the conformal soliton equation for f = f(t).

    The equation reads
        r + hessian_coeff * Hess(t) + dtau_sq_coeff * dt (x) dt
          = metric_coefficient(Q, lap, e) * g,
    so an affine function of 1/t (dtau_sq_coeff == 0) is exactly the case
    in which the left side stays Hermitian.
    """

    n: int
    f_prime: RationalFunction
    hessian_coeff: RationalFunction
    dtau_sq_coeff: RationalFunction

    def metric_coefficient(self, Q: ExpExpression, lap: ExpExpression, e) -> ExpExpression:
        e = as_fraction(e)
        t = POLY_T
        return (
            ExpExpression(RationalFunction(Polynomial.constant(e), t**2))
            - ExpExpression(_INV_T) * lap
            + (
                ExpExpression(RationalFunction(Polynomial.constant(self.n - 1), t**2))
                + ExpExpression(self.f_prime * _INV_T)
            )
            * Q
        )


def f_tau_coefficients(
    n: int, f_prime: RationalFunction, f_second: RationalFunction
) -> FTauCoefficients:
    """Assemble the coefficient bundle, checking f'' is really (f')'."""
    if f_second != f_prime.derivative():
        raise DualityError("f'' is not the derivative of the supplied f'")
    hessian = f_prime + RationalFunction(Polynomial.constant(n - 2)) * _INV_T
    dtau_sq = f_second + 2 * _INV_T * f_prime
    return FTauCoefficients(n, f_prime, hessian, dtau_sq)


@dataclass(frozen=True)
class SkrpDualityData:
    """Profile-level duality: recenter by -c, then invert.

    Carries the new potential t_hat = 1/(t-c) as a function of the original
    variable, the flipped bundle constant, the new profile (centered at 0),
    and the exact factor identities from the construction.
    """

    a: Fraction
    a_hat: Fraction
    c_hat: Fraction
    t_hat: RationalFunction
    q_hat_in_tau: ExpExpression
    dual_profile: SkrpProfile
    identities_hold: bool


def skrp_dualize(profile: SkrpProfile, a) -> SkrpDualityData:
    """Dual profile data for the recentered inverse potential.

    With t_hat = 1/(t-c), a_hat = -a and c_hat = 0, the new squared-gradient
    profile solves a*Q_hat/Q = a_hat * d t_hat/dt, i.e. Q_hat = Q/(t-c)^2.
    The horizontal factor satisfies (t_hat - c_hat)(t - c) = 1 and the
    vertical factor Q_hat(t_hat)/(a_hat r)^2 = Q(t)/[(a r)^2 (t-c)^2]; the
    r-dependence cancels, so both are checked symbolically.
    """
    a = as_fraction(a)
    if a == 0:
        raise DualityError("bundle constant a must be nonzero")
    c = profile.c
    tc_poly = POLY_T - Polynomial.constant(c)
    tc = RationalFunction(tc_poly)
    t_hat = RationalFunction(RF_ONE.num, tc_poly)
    q = profile.q_expression()
    q_hat_in_tau = ExpExpression(t_hat * t_hat) * q

    # defining relation: a * Q_hat == a_hat * (d t_hat / dt) * Q
    lhs = a * q_hat_in_tau
    rhs = ExpExpression((-a) * t_hat.derivative()) * q
    ok = (lhs - rhs).is_zero
    # horizontal factor: (t_hat - c_hat) * (t - c) == 1
    ok = ok and (t_hat * tc) == RF_ONE

    # dual profile in its own variable s: t = c + 1/s
    back = RationalFunction(Polynomial.constant(c)) + _INV_T  # c + 1/s
    q_hat_fn = ExpExpression(RationalFunction(POLY_T**2)) * q.substitute(back)
    # vertical factor: Q_hat(t_hat(t)) == Q(t)/(t-c)^2
    ok = ok and (q_hat_fn.substitute(t_hat) - q_hat_in_tau).is_zero

    phi_hat = q_hat_fn.div_exact(ExpExpression(2 * RF_T))
    hat_interval = invert_interval(profile.interval, c)
    dual_profile = SkrpProfile.make(
        profile.m,
        0,
        profile.kappa,
        expr_sign_at(phi_hat, hat_interval.midpoint()),
        phi_hat,
        hat_interval,
    )
    return SkrpDualityData(
        a=a,
        a_hat=-a,
        c_hat=Fraction(0),
        t_hat=t_hat,
        q_hat_in_tau=q_hat_in_tau,
        dual_profile=dual_profile,
        identities_hold=ok,
    )
