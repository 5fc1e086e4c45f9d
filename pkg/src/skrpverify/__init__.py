"""Exact + numerical verification toolkit for Ricci-Hessian duality,
soliton ODE systems, the c = 0 closed-form soliton family, and the
line-bundle model metric."""

__version__ = "0.1.0"
