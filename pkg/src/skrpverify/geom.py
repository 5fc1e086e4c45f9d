"""Chart-level construction of the line-bundle model metric.

Chart coordinates are (t, theta, x_1, y_1, ..., x_{m-1}, y_{m-1}): the
potential itself, the fiber angle, and real/imaginary parts of base
coordinates.  The metric of the model is realized as

    g = Q(t)^{-1} dt^2 + (Q(t)/a^2)(dtheta + eta)^2 + 2|t-c| h,

where h is the chart Kaehler-Einstein base metric built from a potential u
(Fubini-Study  u = s0 log(1+|z|^2)  or flat  u = s0 |z|^2) and eta is a
real connection one-form on the base with d eta = 2 a sgn(t-c) omega_h.
This realization is derived from grad(t) = a * (fiber Euler field) and
|grad t|^2 = Q; it is validated operationally (gradient norm, closedness,
Hermitian-ness, positivity) rather than trusted, so convention factors are
self-correcting.

Entry assembly is generic over the scalar ring: seeded with Jet2 values it
yields exact first/second derivatives of every entry, from which
Christoffel symbols, the Ricci tensor, Hessians of functions of t, and the
covariant derivative of the complex structure follow by the standard
coordinate formulas.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .jets import Jet2, jet_coordinates
from .ratcalc import ExpExpression
from .solutions import Interval, SkrpProfile, expr_sign_at
from .dualmap import SolitonSpec

__all__ = [
    "Tolerances",
    "ConfigError",
    "FubiniStudyBase",
    "FlatBase",
    "make_base",
    "BaseChartMetric",
    "ModelConfig",
    "ModelMetric",
    "ConformalMetric",
    "MetricData",
    "CurvatureData",
    "metric_jets",
    "metric_values",
    "christoffel",
    "christoffel_derivative",
    "ricci_from_gamma",
    "curvature_at",
    "function_hessian",
    "tensor_norm",
    "skrp_frame",
]


class ConfigError(Exception):
    """Chart/interval configuration violates a model invariant."""


@dataclass(frozen=True)
class Tolerances:
    """Default residual tolerances for double precision with order-2 jets."""

    ad_vs_symbolic: float = 1e-6     # numeric eigenvalues vs exact functions
    off_block: float = 1e-7          # eigen-structure off-block entries
    identity: float = 1e-6           # tensor identities (conformal, soliton)
    closedness: float = 1e-7         # finite-difference d(omega)
    base_spread: float = 1e-8        # Einstein-constant spread across points
    grad_norm: float = 1e-10         # |grad t|^2 vs Q
    hermitian: float = 1e-12         # g(J.,J.) = g
    kahler: float = 1e-6             # parallel complex structure
    constancy: float = 1e-6          # recovered constants across points
    quadrature: float = 1e-9         # radius profile node residual
    negative_floor: float = 1e-3     # perturbed configs must exceed this
    fd_step: float = 1e-5


# ---------------------------------------------------------------------------
# base spaces
# ---------------------------------------------------------------------------


class FubiniStudyBase:
    """Chart Fubini-Study potential u = s0 log(1 + |z|^2).

    The associated Kaehler metric is Einstein with constant
    (complex_dim + 1)/s0 in the convention used here, which the curvature
    pipeline must re-measure rather than assume.
    """

    def __init__(self, complex_dim: int, s0: float):
        if complex_dim < 1:
            raise ValueError("base complex dimension must be >= 1")
        if s0 <= 0:
            raise ValueError("potential scale s0 must be positive")
        self.complex_dim = complex_dim
        self.s0 = float(s0)

    @property
    def real_dim(self) -> int:
        return 2 * self.complex_dim

    def expected_einstein_constant(self) -> float:
        return (self.complex_dim + 1) / self.s0

    def potential(self, coords):
        s = _sum_of_squares(coords)
        return self.s0 * (1 + s).log() if isinstance(s, Jet2) else self.s0 * np.log(1 + s)

    def grad(self, coords):
        s = _sum_of_squares(coords)
        return [2 * self.s0 * x / (1 + s) for x in coords]

    def hess(self, coords):
        k = len(coords)
        s = _sum_of_squares(coords)
        denom = (1 + s) * (1 + s)
        out = [[None] * k for _ in range(k)]
        for i in range(k):
            for j in range(i, k):
                entry = -4 * self.s0 * coords[i] * coords[j] / denom
                if i == j:
                    entry = entry + 2 * self.s0 / (1 + s)
                out[i][j] = entry
                out[j][i] = entry
        return out


class FlatBase:
    """Flat potential u = s0 |z|^2 (Einstein constant 0)."""

    def __init__(self, complex_dim: int, s0: float):
        if complex_dim < 1:
            raise ValueError("base complex dimension must be >= 1")
        if s0 <= 0:
            raise ValueError("potential scale s0 must be positive")
        self.complex_dim = complex_dim
        self.s0 = float(s0)

    @property
    def real_dim(self) -> int:
        return 2 * self.complex_dim

    def expected_einstein_constant(self) -> float:
        return 0.0

    def potential(self, coords):
        return self.s0 * _sum_of_squares(coords)

    def grad(self, coords):
        return [2 * self.s0 * x for x in coords]

    def hess(self, coords):
        k = len(coords)
        out = [[0.0] * k for _ in range(k)]
        for i in range(k):
            out[i][i] = 2 * self.s0
        if coords and isinstance(coords[0], Jet2):
            d = coords[0].dim
            out = [
                [Jet2.constant(out[i][j], d) for j in range(k)] for i in range(k)
            ]
        return out


def make_base(kind: str, complex_dim: int, s0: float):
    if kind == "fubini_study":
        return FubiniStudyBase(complex_dim, s0)
    if kind == "flat":
        return FlatBase(complex_dim, s0)
    raise ConfigError(f"unknown base kind {kind!r}")


def _sum_of_squares(coords):
    total = coords[0] * coords[0]
    for x in coords[1:]:
        total = total + x * x
    return total


def base_complex_structure(k_real: int) -> np.ndarray:
    """Standard constant complex structure on the base chart (matrix J0)."""
    J0 = np.zeros((k_real, k_real))
    for j in range(k_real // 2):
        J0[2 * j + 1, 2 * j] = 1.0   # J d/dx = d/dy
        J0[2 * j, 2 * j + 1] = -1.0  # J d/dy = -d/dx
    return J0


def hermitian_metric_entries(base, coords):
    """Base metric h = (Hess u + J0* Hess u) / 2, generic over the scalar."""
    k = len(coords)
    J0 = base_complex_structure(k)
    hu = base.hess(coords)
    out = [[None] * k for _ in range(k)]
    for i in range(k):
        for j in range(i, k):
            acc = hu[i][j]
            # (J*Hess)(e_i, e_j) = sum_{a,b} J0[a,i] J0[b,j] Hess[a,b]
            for a in range(k):
                if J0[a, i] == 0:
                    continue
                for b in range(k):
                    if J0[b, j] == 0:
                        continue
                    acc = acc + J0[a, i] * J0[b, j] * hu[a][b]
            entry = acc * 0.5
            out[i][j] = entry
            out[j][i] = entry
    return out


def base_kahler_form(base, coords):
    """omega_h(e_i, e_j) = h(J0 e_i, e_j)."""
    k = len(coords)
    J0 = base_complex_structure(k)
    h = hermitian_metric_entries(base, coords)
    out = [[None] * k for _ in range(k)]
    for i in range(k):
        for j in range(k):
            acc = 0.0 * coords[0]
            for a in range(k):
                if J0[a, i] != 0:
                    acc = acc + J0[a, i] * h[a][j]
            out[i][j] = acc
    return out


def connection_one_form(base, coords, a: float, sign_tc: int):
    """eta with d eta = 2 a sgn(t-c) omega_h: eta = a sgn(t-c) J0(du)."""
    k = len(coords)
    J0 = base_complex_structure(k)
    du = base.grad(coords)
    out = []
    for i in range(k):
        acc = 0.0 * coords[0]
        for r in range(k):
            if J0[r, i] != 0:
                acc = acc - J0[r, i] * du[r]
        out.append(a * sign_tc * acc)
    return out


class BaseChartMetric:
    """The base metric h alone, as a chart evaluator of dimension 2(m-1)."""

    def __init__(self, base):
        self.base = base
        self.dim = base.real_dim

    def entries(self, coords):
        return hermitian_metric_entries(self.base, coords)


# ---------------------------------------------------------------------------
# model configuration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ModelConfig:
    """Everything needed to build and sample the model metric.

    The sampling interval must avoid {0, c, 2c}, keep Q > 0 and keep the
    sign of t - c constant; the base potential scale is tied to the
    profile's kappa (Fubini-Study: kappa = m/s0) so the symbolic and
    geometric sides agree about the same constant.
    """

    profile: SkrpProfile
    a: Fraction = Fraction(1)
    s0: Fraction = Fraction(1)
    base_kind: str = "fubini_study"
    soliton: Optional[SolitonSpec] = None
    interval: Optional[Interval] = None
    samples: int = 20
    seed: int = 0
    base_radius: float = 0.8
    margin: float = 0.05
    tol: Tolerances = field(default_factory=Tolerances)

    def __post_init__(self):
        if self.a == 0:
            raise ConfigError("bundle constant a must be nonzero")
        if self.s0 <= 0:
            raise ConfigError("base potential scale s0 must be positive")
        if self.samples < 1:
            raise ConfigError("need at least one sample point")
        window = self.interval or self.profile.interval
        if window.lo is None or window.hi is None:
            raise ConfigError("sampling interval must be bounded")
        object.__setattr__(self, "interval", window)
        c = self.profile.c
        for special, label in ((Fraction(0), "0"), (c, "c"), (2 * c, "2c")):
            if window.lo <= special <= window.hi:
                raise ConfigError(f"sampling interval {window} touches t = {label}")
        sigma = 1 if window.midpoint() > c else -1
        object.__setattr__(self, "_sign_tc", sigma)
        # Q must be positive across the window, not only at the midpoint
        q = self.profile.q_expression()
        lo, hi = float(window.lo), float(window.hi)
        for tt in np.linspace(lo, hi, 65):
            if q(float(tt)) <= 0:
                raise ConfigError(f"Q is not positive at t = {tt}")
        if expr_sign_at(q, window.midpoint()) <= 0:
            raise ConfigError("Q is not positive at the window midpoint")
        if self.base_kind == "fubini_study":
            expected = (self.m - 1 + 1) / float(self.s0)
            if abs(float(self.profile.kappa) - expected) > 1e-12:
                raise ConfigError(
                    f"base Einstein constant m/s0 = {expected} does not match "
                    f"profile kappa = {self.profile.kappa}; set s0 = m/kappa"
                )
        elif self.base_kind == "flat":
            if self.profile.kappa != 0:
                raise ConfigError("flat base requires kappa = 0")
        else:
            raise ConfigError(f"unknown base kind {self.base_kind!r}")

    @property
    def m(self) -> int:
        return self.profile.m

    @property
    def dim(self) -> int:
        return 2 * self.profile.m

    @property
    def sign_tc(self) -> int:
        return self._sign_tc

    @classmethod
    def for_profile(cls, profile: SkrpProfile, **kw) -> "ModelConfig":
        """Derive s0 from kappa (Fubini-Study base) or pick the flat base."""
        if profile.kappa > 0:
            kw.setdefault("s0", Fraction(profile.m) / profile.kappa)
            kw.setdefault("base_kind", "fubini_study")
        elif profile.kappa == 0:
            kw.setdefault("base_kind", "flat")
        else:
            raise ConfigError("negative kappa has no packaged Einstein base")
        return cls(profile=profile, **kw)

    def with_profile(self, profile: SkrpProfile, soliton=None) -> "ModelConfig":
        return replace(self, profile=profile, soliton=soliton)


# ---------------------------------------------------------------------------
# metric evaluators
# ---------------------------------------------------------------------------


class ModelMetric:
    """Chart evaluator for the model metric and its complex structures."""

    def __init__(self, config: ModelConfig):
        self.config = config
        self.dim = config.dim
        self.base = make_base(config.base_kind, config.m - 1, float(config.s0))
        self.q_expr: ExpExpression = config.profile.q_expression()
        self.a = float(config.a)
        self.c = float(config.profile.c)
        self.sign_tc = config.sign_tc

    # -- generic entry assembly (floats or jets) -----------------------------

    def entries(self, coords):
        tau, _theta, base_coords = coords[0], coords[1], coords[2:]
        d = self.dim
        Q = self.q_expr(tau)
        a2 = self.a * self.a
        h = hermitian_metric_entries(self.base, base_coords)
        eta = connection_one_form(self.base, base_coords, self.a, self.sign_tc)
        horiz = self.sign_tc * 2 * (tau - self.c)

        g = [[0.0 * tau for _ in range(d)] for _ in range(d)]
        g[0][0] = 1 / Q
        g[1][1] = Q / a2
        for i in range(d - 2):
            gi = Q * eta[i] / a2
            g[1][2 + i] = gi
            g[2 + i][1] = gi
        for i in range(d - 2):
            for j in range(i, d - 2):
                entry = horiz * h[i][j] + Q * eta[i] * eta[j] / a2
                g[2 + i][2 + j] = entry
                g[2 + j][2 + i] = entry
        return g

    def complex_structure_entries(self, coords):
        """Matrix of J in coordinates: column i holds J(e_i)."""
        tau, _theta, base_coords = coords[0], coords[1], coords[2:]
        d = self.dim
        Q = self.q_expr(tau)
        du = self.base.grad(base_coords)
        sigma = self.sign_tc
        a = self.a

        J = [[0.0 * tau for _ in range(d)] for _ in range(d)]
        J[1][0] = a / Q            # J dt = (a/Q) dtheta-direction
        J[0][1] = -Q / a           # J dtheta-direction = -(Q/a) dt
        for jj in range((d - 2) // 2):
            cx, cy = 2 + 2 * jj, 2 + 2 * jj + 1
            ux, uy = du[2 * jj], du[2 * jj + 1]
            J[cy][cx] = 1.0 + 0.0 * tau
            J[0][cx] = sigma * Q * uy
            J[1][cx] = -a * sigma * ux
            J[cx][cy] = -1.0 + 0.0 * tau
            J[0][cy] = -sigma * Q * ux
            J[1][cy] = -a * sigma * uy
        return J

    def vertical_projector_entries(self, coords):
        """g-orthogonal projector onto span(d/dt, d/dtheta), as a matrix."""
        tau, _theta, base_coords = coords[0], coords[1], coords[2:]
        d = self.dim
        eta = connection_one_form(self.base, base_coords, self.a, self.sign_tc)
        P = [[0.0 * tau for _ in range(d)] for _ in range(d)]
        P[0][0] = 1.0 + 0.0 * tau
        P[1][1] = 1.0 + 0.0 * tau
        for i in range(d - 2):
            P[1][2 + i] = eta[i]
        return P

    def opposite_structure_entries(self, coords):
        """J-bar = J on the horizontal block, -J on the vertical block."""
        J = self.complex_structure_entries(coords)
        P = self.vertical_projector_entries(coords)
        d = self.dim
        out = [[None] * d for _ in range(d)]
        for r in range(d):
            for cidx in range(d):
                acc = J[r][cidx]
                for l in range(d):
                    acc = acc - 2 * J[r][l] * P[l][cidx]
                out[r][cidx] = acc
        return out


class ConformalMetric:
    """Entries of F(t) * g for a smooth positive factor of the potential."""

    def __init__(self, inner, factor: Callable):
        self.inner = inner
        self.factor = factor
        self.dim = inner.dim

    def entries(self, coords):
        f = self.factor(coords[0])
        g = self.inner.entries(coords)
        return [[f * g[i][j] for j in range(self.dim)] for i in range(self.dim)]


# ---------------------------------------------------------------------------
# jets -> arrays, curvature
# ---------------------------------------------------------------------------


@dataclass
class MetricData:
    """Metric entries with first and second derivatives at one point."""

    point: np.ndarray
    G: np.ndarray      # (d, d)
    dG: np.ndarray     # (d, d, k): dG[i,j,k] = d_k g_ij
    d2G: np.ndarray    # (d, d, k, l)


def metric_jets(evaluator, point) -> MetricData:
    point = np.asarray(point, dtype=float)
    d = evaluator.dim
    coords = jet_coordinates(point)
    g = evaluator.entries(coords)
    G = np.zeros((d, d))
    dG = np.zeros((d, d, d))
    d2G = np.zeros((d, d, d, d))
    for i in range(d):
        for j in range(d):
            entry = g[i][j]
            if isinstance(entry, Jet2):
                G[i, j] = entry.val
                dG[i, j] = entry.grad
                d2G[i, j] = entry.hess
            else:
                G[i, j] = float(entry)
    return MetricData(point=point, G=G, dG=dG, d2G=d2G)


def metric_values(evaluator, point) -> np.ndarray:
    point = np.asarray(point, dtype=float)
    g = evaluator.entries(list(point))
    return np.array([[float(x) for x in row] for row in g])


def christoffel(G: np.ndarray, dG: np.ndarray) -> np.ndarray:
    """Gamma[k,i,j] = Gamma^k_ij."""
    Ginv = np.linalg.inv(G)
    s = (
        np.einsum("kl,lji->kij", Ginv, dG)
        + np.einsum("kl,lij->kij", Ginv, dG)
        - np.einsum("kl,ijl->kij", Ginv, dG)
    )
    return 0.5 * s


def christoffel_derivative(G: np.ndarray, dG: np.ndarray, d2G: np.ndarray) -> np.ndarray:
    """dGamma[k,i,j,p] = d_p Gamma^k_ij."""
    Ginv = np.linalg.inv(G)
    dGinv = -np.einsum("ka,abp,bl->klp", Ginv, dG, Ginv)
    # bracket[l,i,j] = d_i g_lj + d_j g_li - d_l g_ij
    bracket = (
        np.einsum("lji->lij", dG)
        + np.einsum("lij->lij", dG)
        - np.einsum("ijl->lij", dG)
    )
    # d_p bracket[l,i,j]
    dbracket = (
        np.einsum("ljip->lijp", d2G)
        + np.einsum("lijp->lijp", d2G)
        - np.einsum("ijlp->lijp", d2G)
    )
    return 0.5 * (
        np.einsum("klp,lij->kijp", dGinv, bracket)
        + np.einsum("kl,lijp->kijp", Ginv, dbracket)
    )


def ricci_from_gamma(Gamma: np.ndarray, dGamma: np.ndarray) -> np.ndarray:
    """R_ij = d_k Gamma^k_ij - d_i Gamma^k_kj + G^k_kl G^l_ij - G^k_il G^l_kj."""
    term1 = np.einsum("kijk->ij", dGamma)
    term2 = np.einsum("kkji->ij", dGamma)
    term3 = np.einsum("kkl,lij->ij", Gamma, Gamma)
    term4 = np.einsum("kil,lkj->ij", Gamma, Gamma)
    return term1 - term2 + term3 - term4


@dataclass
class CurvatureData:
    """Curvature bundle of one chart evaluator at one point."""

    point: np.ndarray
    tau: float
    G: np.ndarray
    Ginv: np.ndarray
    Gamma: np.ndarray
    ricci: np.ndarray
    hess_tau: np.ndarray
    lap_tau: float
    grad_tau_sq: float

    def function_hessian(self, h1: float, h2: float) -> np.ndarray:
        return function_hessian(self.Gamma, h1, h2)


def curvature_at(evaluator, point) -> CurvatureData:
    """Christoffel symbols, Ricci, Hessian and Laplacian of the potential.

    The potential is the first chart coordinate, so its Hessian is
    -Gamma^t_ij and Q = |grad t|^2 is the (t,t) entry of the inverse metric.
    """
    data = metric_jets(evaluator, point)
    cond = np.linalg.cond(data.G)
    if not np.isfinite(cond) or cond > 1e12:
        raise ConfigError(f"metric is numerically singular at {point}")
    Ginv = np.linalg.inv(data.G)
    Gamma = christoffel(data.G, data.dG)
    dGamma = christoffel_derivative(data.G, data.dG, data.d2G)
    ric = ricci_from_gamma(Gamma, dGamma)
    hess_tau = -Gamma[0]
    lap_tau = float(np.einsum("ij,ij->", Ginv, hess_tau))
    return CurvatureData(
        point=np.asarray(point, dtype=float),
        tau=float(point[0]),
        G=data.G,
        Ginv=Ginv,
        Gamma=Gamma,
        ricci=ric,
        hess_tau=hess_tau,
        lap_tau=lap_tau,
        grad_tau_sq=float(Ginv[0, 0]),
    )


def function_hessian(Gamma: np.ndarray, h1: float, h2: float) -> np.ndarray:
    """Hessian of H(t) for a chart whose first coordinate is t.

    (Hess H)_ij = H'' delta_i0 delta_j0 - H' Gamma^t_ij.
    """
    d = Gamma.shape[0]
    out = -h1 * Gamma[0]
    out = out.copy()
    out[0, 0] += h2
    return out


def tensor_norm(Ginv: np.ndarray, T: np.ndarray) -> float:
    """Frame-independent norm of a symmetric 2-tensor."""
    return float(np.sqrt(abs(np.einsum("ik,jl,ij,kl->", Ginv, Ginv, T, T))))


def skrp_frame(G: np.ndarray, Jmat: np.ndarray) -> np.ndarray:
    """g-orthonormal frame adapted to V = span(grad t, J grad t).

    Columns 0, 1 span the vertical distribution; the rest are a
    Gram-Schmidt-completed horizontal frame.
    """
    d = G.shape[0]
    Ginv = np.linalg.inv(G)
    grad_tau = Ginv[:, 0]

    def norm(v):
        return float(np.sqrt(v @ G @ v))

    e1 = grad_tau / norm(grad_tau)
    e2 = Jmat @ e1
    e2 = e2 - (e2 @ G @ e1) * e1
    e2 = e2 / norm(e2)
    frame = [e1, e2]
    for i in range(d):
        v = np.zeros(d)
        v[i] = 1.0
        for w in frame:
            v = v - (v @ G @ w) * w
        nv = norm(v)
        if nv > 1e-8:
            frame.append(v / nv)
        if len(frame) == d:
            break
    if len(frame) != d:
        raise ConfigError("could not complete an adapted orthonormal frame")
    return np.column_stack(frame)
