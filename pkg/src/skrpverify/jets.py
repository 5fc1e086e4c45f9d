"""Second-order forward-mode jets.

A Jet2 carries a value, a gradient and a symmetric Hessian with respect to
d chart coordinates, and propagates them through arithmetic, exp, log and
powers by truncated-Taylor composition.  Evaluating the metric entries of a
chart on jet-seeded coordinates yields exact (to roundoff) first and second
derivatives, which is all the Ricci tensor needs.

Fractions are accepted as scalars so exact expressions can be evaluated
directly on jets.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

__all__ = ["Jet2", "jet_coordinates"]

_SCALARS = (int, float, Fraction, np.integer, np.floating)


class Jet2:
    """Value, gradient and Hessian of a scalar at a point, dim-d chart."""

    __slots__ = ("val", "grad", "hess")

    def __init__(self, val: float, grad: np.ndarray, hess: np.ndarray):
        self.val = float(val)
        self.grad = np.asarray(grad, dtype=float)
        self.hess = np.asarray(hess, dtype=float)

    @classmethod
    def variable(cls, value: float, index: int, dim: int) -> "Jet2":
        grad = np.zeros(dim)
        grad[index] = 1.0
        return cls(value, grad, np.zeros((dim, dim)))

    @classmethod
    def constant(cls, value: float, dim: int) -> "Jet2":
        return cls(value, np.zeros(dim), np.zeros((dim, dim)))

    @property
    def dim(self) -> int:
        return self.grad.shape[0]

    def _lift(self, other) -> "Jet2 | None":
        if isinstance(other, Jet2):
            return other
        if isinstance(other, _SCALARS):
            return Jet2.constant(float(other), self.dim)
        return None

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return Jet2(self.val + o.val, self.grad + o.grad, self.hess + o.hess)

    __radd__ = __add__

    def __neg__(self):
        return Jet2(-self.val, -self.grad, -self.hess)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return Jet2(self.val - o.val, self.grad - o.grad, self.hess - o.hess)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        cross = np.outer(self.grad, o.grad)
        return Jet2(
            self.val * o.val,
            self.grad * o.val + o.grad * self.val,
            self.hess * o.val + o.hess * self.val + cross + cross.T,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * o._compose_reciprocal()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o * self._compose_reciprocal()

    def __pow__(self, p):
        if isinstance(p, (int, np.integer)):
            if p == 0:
                return Jet2.constant(1.0, self.dim)
            if p == 1:
                return self
            u = self.val
            return self._compose(
                u**p, p * u ** (p - 1), p * (p - 1) * u ** (p - 2)
            )
        u = self.val
        if u <= 0:
            raise ValueError("fractional power of a non-positive jet value")
        return self._compose(u**p, p * u ** (p - 1), p * (p - 1) * u ** (p - 2))

    # -- elementary functions --------------------------------------------------

    def exp(self) -> "Jet2":
        e = math.exp(self.val)
        return self._compose(e, e, e)

    def log(self) -> "Jet2":
        if self.val <= 0:
            raise ValueError("log of a non-positive jet value")
        u = self.val
        return self._compose(math.log(u), 1.0 / u, -1.0 / (u * u))

    def sqrt(self) -> "Jet2":
        if self.val <= 0:
            raise ValueError("sqrt of a non-positive jet value")
        s = math.sqrt(self.val)
        return self._compose(s, 0.5 / s, -0.25 / (s * self.val))

    # -- internals --------------------------------------------------------------

    def _compose(self, f: float, fp: float, fpp: float) -> "Jet2":
        """Chain rule for a scalar function f(u): value, f', f'' at u."""
        outer = np.outer(self.grad, self.grad)
        return Jet2(f, fp * self.grad, fp * self.hess + fpp * outer)

    def _compose_reciprocal(self) -> "Jet2":
        u = self.val
        if u == 0:
            raise ZeroDivisionError("division by a jet with zero value")
        return self._compose(1.0 / u, -1.0 / (u * u), 2.0 / (u * u * u))

    def __repr__(self):
        return f"Jet2({self.val:.6g}, grad={self.grad}, hess=...)"


def jet_coordinates(point) -> list[Jet2]:
    """Seed one jet variable per coordinate of ``point``."""
    point = np.asarray(point, dtype=float)
    d = point.shape[0]
    return [Jet2.variable(point[i], i, d) for i in range(d)]
