"""Parameters, solution constants, and the (t, r) <-> (tau, eta) coordinate maps.

A ring R2(t) < r < R1(t) of incompressible liquid with dissipative viscosity
mu and nondissipative viscosity mu0 expands by inertia with both boundaries
stress free.  Both squared radii grow linearly, R_i^2(t) = 8*nu*t + R_i0^2,
so in the reduced variables

    tau = nu*t/R20^2,    eta = (r^2 - R2^2(t))/R20^2,

the inner boundary sits at eta = 0 and the outer at eta = a for all time,
and the moving-boundary heat problem becomes a fixed-domain one.  The
identity 8*tau + eta + 1 = r^2/R20^2 holds pointwise.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .dualnum import sqrt

__all__ = [
    "ValidationError",
    "SingularTimeError",
    "SingularConstantError",
    "PhysicalParams",
    "ReducedParams",
    "SolutionConstants",
    "ReferenceCase",
    "C5_MIN",
    "reduce_params",
    "to_reduced",
    "from_reduced",
    "k_from_K1K2",
    "reference_case_K",
    "unit_embedding",
]

#: Smallest C5 keeping the reference-case temperature nonnegative.
C5_MIN = 5.0 / 3.0


class ValidationError(ValueError):
    """A parameter failed its domain constraint; the message names the field."""


class SingularTimeError(ValueError):
    """Evaluation requested at or beyond the singular time tau = -C3."""


class SingularConstantError(ValueError):
    """A constants formula hit a numerically vanishing denominator."""


def _require(cond, field, msg):
    if not cond:
        raise ValidationError(f"{field} {msg}")


@dataclass(frozen=True)
class PhysicalParams:
    """Dimensional inputs defining the ring problem.

    The kinematic viscosities nu = mu/rho and nu0 = mu0/rho are derived
    properties, so those ratios hold exactly by construction.  mu0 (the
    nondissipative viscosity) may take any sign.  p_inf is the kinematic
    (pressure/density) far-field offset; the free boundaries are exactly
    stress free when it is zero.
    """

    rho: float
    Cp: float
    k_cond: float
    mu: float
    mu0: float
    T0: float
    R10: float
    R20: float
    p_inf: float = 0.0

    def __post_init__(self):
        _require(self.rho > 0, "rho", "must be > 0")
        _require(self.Cp > 0, "Cp", "must be > 0")
        _require(self.k_cond > 0, "k_cond", "must be > 0")
        _require(self.mu > 0, "mu", "must be > 0")
        _require(self.T0 > 0, "T0", "must be > 0")
        _require(self.R20 > 0, "R20", "must be > 0")
        _require(self.R10 > self.R20, "R10", f"must exceed R20 (got {self.R10} <= {self.R20})")

    @property
    def nu(self) -> float:
        return self.mu / self.rho

    @property
    def nu0(self) -> float:
        return self.mu0 / self.rho


@dataclass(frozen=True)
class ReducedParams:
    """Dimensionless groups controlling the reduced temperature equation.

    A scales the time derivative, B the conduction term, eps = nu0/nu enters
    the dissipative source through 1 + eps^2, and a = R10^2/R20^2 - 1 is the
    domain length in eta.  a = 0 (degenerate ring) is allowed so the
    boundary-difference closed form can be evaluated in that limit;
    `reduce_params` always produces a > 0.
    """

    A: float
    B: float
    eps: float
    a: float

    def __post_init__(self):
        _require(self.A > 0, "A", "must be > 0")
        _require(self.B > 0, "B", "must be > 0")
        _require(self.a >= 0, "a", "must be >= 0")


@dataclass(frozen=True)
class SolutionConstants:
    """Free constants of the general invariant temperature solution.

    C3 > 0 keeps the group trajectory tau + C3 positive for every tau >= 0.
    C5/2 is the level every solution relaxes to as tau -> infinity, and K
    scales the decaying exponential mode.
    """

    C3: float
    C5: float
    K: float

    def __post_init__(self):
        _require(self.C3 > 0, "C3", "must be > 0")


@dataclass(frozen=True)
class ReferenceCase:
    """The worked constants tuple with equal boundary temperatures at tau = 0.

    K is the exact rational -5/(6^2 * 8^3) = -5/18432, the unique amplitude
    for which the boundary temperature difference vanishes given the other
    constants (see `reference_case_K`).  C5 = 5/3 is the smallest value
    keeping the temperature nonnegative.
    """

    C5: float = C5_MIN
    A: float = 0.75
    B: float = 6.0
    eps: float = 0.5
    a: float = 1.0
    C3: float = 0.125
    K: float = -5.0 / 18432.0

    @property
    def params(self) -> ReducedParams:
        return ReducedParams(A=self.A, B=self.B, eps=self.eps, a=self.a)

    @property
    def consts(self) -> SolutionConstants:
        return SolutionConstants(C3=self.C3, C5=self.C5, K=self.K)


def reduce_params(phys: PhysicalParams) -> ReducedParams:
    """Dimensionless groups from dimensional inputs.

    A = rho*Cp*R20^2*T0 / (4*mu^2),  B = k*R20^2*T0 / (4*mu^3),
    eps = nu0/nu,  a = R10^2/R20^2 - 1.
    """
    A = phys.rho * phys.Cp * phys.R20 ** 2 * phys.T0 / (4.0 * phys.mu ** 2)
    B = phys.k_cond * phys.R20 ** 2 * phys.T0 / (4.0 * phys.mu ** 3)
    eps = phys.nu0 / phys.nu
    a = phys.R10 ** 2 / phys.R20 ** 2 - 1.0
    return ReducedParams(A=A, B=B, eps=eps, a=a)


def to_reduced(t, r, phys: PhysicalParams):
    """(t, r) -> (tau, eta).  Warns (but still evaluates) outside the ring."""
    if np.any(np.asarray(t) < 0):
        raise ValidationError("t must be >= 0")
    R20sq = phys.R20 ** 2
    tau = phys.nu * t / R20sq
    r2sq = 8.0 * phys.nu * t + R20sq
    eta = (r * r - r2sq) / R20sq
    a = phys.R10 ** 2 / R20sq - 1.0
    if np.any(eta < -1e-12) or np.any(eta > a + 1e-12):
        warnings.warn("r outside the ring [R2(t), R1(t)]; evaluation continues",
                      RuntimeWarning, stacklevel=2)
    return tau, eta


def from_reduced(tau, eta, phys: PhysicalParams):
    """(tau, eta) -> (t, r): exact inverse of `to_reduced` on tau >= 0, eta >= 0."""
    if np.any(np.asarray(tau) < 0):
        raise ValidationError("tau must be >= 0")
    if np.any(np.asarray(eta) < 0):
        raise ValidationError("eta must be >= 0")
    R20sq = phys.R20 ** 2
    t = tau * R20sq / phys.nu
    r = phys.R20 * sqrt(8.0 * tau + eta + 1.0)
    return t, r


def k_from_K1K2(K1: float, K2: float, A: float, B: float) -> float:
    """Mode amplitude K from the raw integration constants K1, K2."""
    _require(A > 0, "A", "must be > 0")
    _require(B > 0, "B", "must be > 0")
    return (8.0 * A * K1 + B * (K1 - K2)) / (B * (8.0 * A + B))


def reference_case_K(C3: float) -> float:
    """Zero-boundary-difference amplitude for A=3/4, B=6, eps=1/2, a=1.

    K(C3) = (10/9)*C3^4 / (4*(8*C3-1)*exp(1 - 1/(4*C3))
                           - (16*C3-1)*exp(1 - 1/(8*C3))).

    At C3 = 1/8 the first denominator term vanishes and the second
    exponential is exp(0), so K = -5/(6^2*8^3) = -5/18432 exactly.
    """
    _require(C3 > 0, "C3", "must be > 0")
    num = (10.0 / 9.0) * C3 ** 4
    den = (4.0 * (8.0 * C3 - 1.0) * math.exp(1.0 - 1.0 / (4.0 * C3))
           - (16.0 * C3 - 1.0) * math.exp(1.0 - 1.0 / (8.0 * C3)))
    if abs(den) <= 1e-14:
        raise SingularConstantError(
            f"denominator of the amplitude formula vanishes at C3={C3!r} (|den|={abs(den):.3e})")
    return num / den


def unit_embedding(params: ReducedParams) -> PhysicalParams:
    """A canonical dimensional realization of reduced parameters.

    Fixes rho = mu = R20 = T0 = 1 (so nu = 1) and solves the group
    definitions for the rest: Cp = 4A, k = 4B, mu0 = eps, R10 = sqrt(1+a).
    `reduce_params` of the result reproduces `params` up to roundoff in a.
    """
    _require(params.a > 0, "a", "must be > 0 for a physical ring")
    return PhysicalParams(rho=1.0, Cp=4.0 * params.A, k_cond=4.0 * params.B,
                          mu=1.0, mu0=params.eps, T0=1.0,
                          R10=math.sqrt(1.0 + params.a), R20=1.0)
