"""Linear ODE systems with rational coefficients and their reductions.

Builds, exactly, the second-order equation satisfied by the horizontal
Hessian eigenvalue, its third-order homogeneous consequence, the coupled
pair satisfied under the inverse-potential soliton ansatz, the first-order
combination of that pair, and the forced-solution reduction that pins the
solution set.  Every construction is cross-checked against an independently
transcribed closed form, so a transcription bug cannot slip through as a
"verified" identity.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .ratcalc import (
    POLY_T,
    Polynomial,
    RF_ONE,
    RF_T,
    RationalFunction,
    as_fraction,
    partial_fractions,
)

__all__ = [
    "LinearODE1",
    "LinearODE2",
    "LinearODE3",
    "ReductionResult",
    "SolitonParams",
    "Verdict",
    "RatiReport",
    "ConsistencyError",
    "ConstructionError",
    "build_mek",
    "derive_tcp",
    "third_order_soliton_form",
    "build_soliton_system",
    "reduce_to_first_order",
    "lemma_reduction",
    "verify_rati",
    "forced_conclusion",
    "soliton_alpha",
    "expected_first_order",
    "first_order_partial_fractions",
]


class ConsistencyError(Exception):
    """Inputs disagree with the equation they claim to describe."""


class ConstructionError(Exception):
    """An exact cancellation that must happen by construction failed."""


@dataclass(frozen=True)
class LinearODE1:
    """First-order equation phi' + p*phi = q with rational coefficients."""

    p: RationalFunction
    q: RationalFunction

    @classmethod
    def from_linear_form(
        cls,
        dphi_coeff: RationalFunction,
        phi_coeff: RationalFunction,
        rhs: RationalFunction,
    ) -> "LinearODE1":
        if dphi_coeff.is_zero:
            raise ConstructionError("coefficient of phi' vanishes identically")
        return cls(phi_coeff / dphi_coeff, rhs / dphi_coeff)


@dataclass(frozen=True)
class LinearODE2:
    """Second-order equation A*phi'' + B*phi' + C*phi = D."""

    A: RationalFunction
    B: RationalFunction
    C: RationalFunction
    D: RationalFunction

    def __post_init__(self):
        if self.A.is_zero:
            raise ConstructionError("leading coefficient A vanishes identically")

    def homogeneous(self) -> "LinearODE2":
        return LinearODE2(self.A, self.B, self.C, RationalFunction(0))


@dataclass(frozen=True)
class LinearODE3:
    """Homogeneous third-order form P3*phi''' = P2*phi'' + P1*phi'."""

    P3: RationalFunction
    P2: RationalFunction
    P1: RationalFunction

    def __post_init__(self):
        if self.P3.is_zero:
            raise ConstructionError("leading coefficient P3 vanishes identically")

    def clear_denominators(self) -> tuple[Polynomial, Polynomial, Polynomial]:
        """Multiply through by the lcm of denominators; polynomial triple."""
        lcm = self.P3.den
        for rf in (self.P2, self.P1):
            g = lcm.gcd(rf.den)
            lcm = (lcm // g) * rf.den
        out = []
        for rf in (self.P3, self.P2, self.P1):
            cleared = rf * RationalFunction(lcm)
            if cleared.den != Polynomial([1]):
                raise ConstructionError("denominator clearing failed")
            out.append(cleared.num)
        return tuple(out)


@dataclass(frozen=True)
class ReductionResult:
    """Outcome of the forced-solution reduction of a first/second order pair.

    ``E`` multiplies phi after eliminating phi' and phi''; ``F`` collects the
    remaining inhomogeneity.  When E is not identically zero, any common
    solution is forced to equal F/E away from isolated singularities.
    """

    E: RationalFunction
    F: RationalFunction
    forced: Optional[RationalFunction]

    def __post_init__(self):
        if self.E.is_zero:
            assert self.forced is None
        else:
            assert self.forced == self.F / self.E


class Verdict(enum.Enum):
    ONLY_ZERO_SOLUTION = "only the zero solution exists on any interval"
    UNIQUE_CANDIDATE = "unique candidate solution forced"
    UNDETERMINED = "undetermined by the reduction"


@dataclass(frozen=True)
class SolitonParams:
    """Exact parameter tuple for the inverse-potential soliton system."""

    m: int
    b: Fraction
    c: Fraction
    kappa: Fraction
    e: Fraction
    eps: int

    def __post_init__(self):
        if self.m < 2:
            raise ValueError("complex dimension m must be >= 2")
        if self.eps not in (-1, 1):
            raise ValueError("eps must be +1 or -1")

    @classmethod
    def make(cls, m, b, c, kappa, e, eps) -> "SolitonParams":
        return cls(
            int(m),
            as_fraction(b),
            as_fraction(c),
            as_fraction(kappa),
            as_fraction(e),
            int(eps),
        )


def soliton_alpha(m: int, b) -> RationalFunction:
    """Ricci-Hessian coefficient (2(m-1)t - b)/t^2 of the soliton ansatz."""
    b = as_fraction(b)
    return RationalFunction(
        Polynomial([-b, 2 * (m - 1)]), POLY_T**2
    )


def build_mek(
    m: int, c, kappa, eps: int, alpha: RationalFunction
) -> LinearODE2:
    """Second-order equation for the horizontal Hessian eigenvalue.

    (t-c)^2 phi'' + (t-c)[m - (t-c) alpha] phi' - m phi = -eps*kappa/2.
    """
    if m < 2:
        raise ValueError("m must be >= 2")
    c = as_fraction(c)
    kappa = as_fraction(kappa)
    tc = RF_T - RationalFunction.constant(c)
    return LinearODE2(
        A=tc * tc,
        B=tc * (RationalFunction.constant(m) - tc * alpha),
        C=RationalFunction.constant(-m),
        D=RationalFunction.constant(Fraction(-eps * kappa, 2)),
    )


def derive_tcp(
    mek: LinearODE2, alpha: RationalFunction, c
) -> LinearODE3:
    """Differentiate the second-order equation once and divide by (t-c).

    The result is asserted, coefficient by coefficient, against the closed
    homogeneous form (t-c) phi''' = [(t-c)a - m - 2] phi'' + [(t-c)a' + 2a] phi'.
    """
    c = as_fraction(c)
    tc = RF_T - RationalFunction.constant(c)

    # recover m from C = -m and confirm the equation matches build_mek
    if not mek.C.is_constant:
        raise ConsistencyError("phi coefficient of the input is not constant")
    m_frac = -mek.C.constant_value()
    if m_frac.denominator != 1 or m_frac < 2:
        raise ConsistencyError("phi coefficient is not -m for an integer m >= 2")
    m = int(m_frac)
    rebuilt = build_mek(m, c, Fraction(0), 1, alpha)
    if rebuilt.A != mek.A or rebuilt.B != mek.B:
        raise ConsistencyError("supplied alpha, c do not reproduce the equation")
    if not mek.D.is_constant:
        raise ConsistencyError("right-hand side is not constant")

    # d/dt: A phi''' + (A' + B) phi'' + (B' + C) phi' + C' phi = D'
    A2 = mek.A
    A1 = A2.derivative() + mek.B
    A0 = mek.B.derivative() + mek.C
    if not mek.C.derivative().is_zero or not mek.D.derivative().is_zero:
        raise ConsistencyError("expected constant C and D")

    derived = LinearODE3(P3=A2 / tc, P2=-(A1 / tc), P1=-(A0 / tc))

    expected = LinearODE3(
        P3=tc,
        P2=tc * alpha - RationalFunction.constant(m + 2),
        P1=tc * alpha.derivative() + 2 * alpha,
    )
    if derived != expected:
        raise ConstructionError("third-order form disagrees with the closed form")
    return derived


def third_order_soliton_form(m: int, b, c) -> tuple[Polynomial, Polynomial, Polynomial]:
    """Denominator-cleared third-order display of the soliton ansatz.

    t^3 (t-c) phi''' = [(m-4)t^3 - (2(m-1)c + b)t^2 + b c t] phi''
                       + [2(m-1) t (t+c) - 2 b c] phi'.
    """
    b = as_fraction(b)
    c = as_fraction(c)
    t = POLY_T
    lead = t**3 * (t - Polynomial.constant(c))
    p2 = Polynomial([0, b * c, -(2 * (m - 1) * c + b), m - 4])
    p1 = 2 * (m - 1) * t * (t + Polynomial.constant(c)) - Polynomial.constant(2 * b * c)
    return lead, p2, p1


def build_soliton_system(params: SolitonParams) -> tuple[LinearODE2, LinearODE2]:
    """The coupled second-order pair of the inverse-potential soliton ansatz.

    First equation:
        t^2 (t-c)^2 phi'' + (t-c)[m t^2 - (t-c)(2(m-1)t - b)] phi' - m t^2 phi
            = -eps*kappa*t^2/2
    Second equation:
        -t^3 (t-c) phi'' + [(2mt - b) t (t-c) - t^3 (m+1)] phi'
            + [2(2m-1)t^2 - bt + 2(t-c)(b - (2m-1)t)] phi = e t
    """
    m, b, c = params.m, params.b, params.c
    t = RF_T
    tc = t - RationalFunction.constant(c)
    two_m1 = RationalFunction.constant(2 * (m - 1))
    bb = RationalFunction.constant(b)

    first = LinearODE2(
        A=t**2 * tc**2,
        B=tc * (m * t**2 - tc * (two_m1 * t - bb)),
        C=-m * t**2,
        D=RationalFunction.constant(Fraction(-params.eps * params.kappa, 2)) * t**2,
    )
    second = LinearODE2(
        A=-(t**3) * tc,
        B=(2 * m * t - bb) * t * tc - t**3 * RationalFunction.constant(m + 1),
        C=(
            RationalFunction.constant(2 * (2 * m - 1)) * t**2
            - bb * t
            + 2 * tc * (bb - RationalFunction.constant(2 * m - 1) * t)
        ),
        D=RationalFunction.constant(params.e) * t,
    )
    return first, second


def expected_first_order(params: SolitonParams) -> tuple[RationalFunction, ...]:
    """Independently transcribed coefficients of the first-order combination.

    Returns (phi' coefficient, phi coefficient, right-hand side):
        t^2 (t-c)(t-2c) phi'
        + [-m t^3 + (2(2m-1)c + b) t^2 - (2(2m-1)c^2 + 3bc) t + 2bc^2] phi
        = -eps*kappa*t^3/2 + e t (t-c).
    """
    m, b, c = params.m, params.b, params.c
    t = POLY_T
    dphi = t**2 * (t - Polynomial.constant(c)) * (t - Polynomial.constant(2 * c))
    phi = Polynomial(
        [
            2 * b * c**2,
            -(2 * (2 * m - 1) * c**2 + 3 * b * c),
            2 * (2 * m - 1) * c + b,
            -m,
        ]
    )
    rhs = (
        Polynomial.constant(Fraction(-params.eps * params.kappa, 2)) * t**3
        + Polynomial.constant(params.e) * t * (t - Polynomial.constant(c))
    )
    return (
        RationalFunction(dphi),
        RationalFunction(phi),
        RationalFunction(rhs),
    )


def reduce_to_first_order(
    sol1: LinearODE2, sol3: LinearODE2, params: SolitonParams
) -> LinearODE1:
    """Eliminate phi'' from the pair: t*[sol1 + (t-c)/t * sol3].

    The second-order terms must cancel exactly, and the surviving first-order
    equation must match the independently transcribed closed form before it
    is normalized to phi' + p*phi = q.
    """
    expected1, expected3 = build_soliton_system(params)
    if (sol1, sol3) != (expected1, expected3):
        raise ConsistencyError("input pair was not built from these parameters")

    t = RF_T
    factor = (t - RationalFunction.constant(params.c)) / t
    A = t * (sol1.A + factor * sol3.A)
    B = t * (sol1.B + factor * sol3.B)
    C = t * (sol1.C + factor * sol3.C)
    D = t * (sol1.D + factor * sol3.D)
    if not A.is_zero:
        raise ConstructionError("second-order terms did not cancel")

    exp_dphi, exp_phi, exp_rhs = expected_first_order(params)
    if (B, C, D) != (exp_dphi, exp_phi, exp_rhs):
        raise ConstructionError("first-order combination disagrees with closed form")

    return LinearODE1.from_linear_form(B, C, D)


def lemma_reduction(first: LinearODE1, second: LinearODE2) -> ReductionResult:
    """Eliminate derivatives of phi between the two equations.

    With phi' = q - p*phi, substitute phi'' = (p^2 - p')phi + q' - pq into the
    second equation.  The phi coefficient E = A(p^2 - p') - B p + C and
    constant side F = D - A(q' - pq) - B q either vanish together (identically
    degenerate) or force phi = F/E.
    """
    p, q = first.p, first.q
    E = second.A * (p * p - p.derivative()) - second.B * p + second.C
    F = second.D - second.A * (q.derivative() - p * q) - second.B * q
    forced = None if E.is_zero else F / E
    return ReductionResult(E=E, F=F, forced=forced)


def forced_conclusion(result: ReductionResult) -> Verdict:
    if result.E.is_zero:
        return Verdict.UNDETERMINED
    if result.forced.is_zero:
        return Verdict.ONLY_ZERO_SOLUTION
    return Verdict.UNIQUE_CANDIDATE


@dataclass(frozen=True)
class RatiReport:
    """Outcome of the exact E/F identity check for one parameter tuple."""

    params: SolitonParams
    E: RationalFunction
    F: RationalFunction
    expected_E: RationalFunction
    passed: bool

    def render(self) -> str:
        status = "pass" if self.passed else "FAIL"
        return (
            f"[{status}] m={self.params.m} b={self.params.b} c={self.params.c} "
            f"kappa={self.params.kappa} e={self.params.e} eps={self.params.eps:+d}: "
            f"E = {self.E.to_str()}, F = {self.F.to_str()}"
        )


def verify_rati(params: SolitonParams) -> RatiReport:
    """Check F == 0 and E == -2bc(t-c)^2 / (t(t-2c)) exactly.

    Failure here signals an implementation bug, never a mathematical one:
    both identities hold for every admissible parameter tuple.
    """
    sol1, sol3 = build_soliton_system(params)
    first = reduce_to_first_order(sol1, sol3, params)
    result = lemma_reduction(first, sol1)

    b, c = params.b, params.c
    t = POLY_T
    expected_E = RationalFunction(
        Polynomial.constant(-2 * b * c) * (t - Polynomial.constant(c)) ** 2,
        t * (t - Polynomial.constant(2 * c)),
    )
    passed = result.F.is_zero and result.E == expected_E
    return RatiReport(params, result.E, result.F, expected_E, passed)


def first_order_partial_fractions(params: SolitonParams):
    """Partial fraction forms of p and q over the poles 0, c, 2c."""
    sol1, sol3 = build_soliton_system(params)
    first = reduce_to_first_order(sol1, sol3, params)
    poles = [Fraction(0), params.c, 2 * params.c]
    return partial_fractions(first.p, poles), partial_fractions(first.q, poles)
