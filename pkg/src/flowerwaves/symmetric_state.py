"""The symmetric branch: all N loops carry the same arc.

Each loop of a symmetric state runs from the junction value p0 up to the
outer turning point and back, and the Kirchhoff condition at the vertex
splits the half-line flux equally, pinning the loop level to

    q0 = sqrt(A(p0)) / (2 N).

The half-loop transit time must equal pi*eps, so the whole branch is the
one-parameter family p0 -> state, with

    script_T(p0) = pi * eps,      script_M(p0) = pi * mu,

both strictly decreasing in p0.  Solving for a state at given eps (or mass)
is therefore a single bracketed root-find.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import brentq

from .errors import BracketError
from .levelcurve import (
    DEFAULT_QUADRATURE,
    QuadratureSpec,
    _KERNELS,
    _integrate_segment,
    weighted_level_integral,
)
from .phase_plane import EnergyLevel, energy_level, potential, potential_deriv
from .profiles_observables import energy_of_state, tail_mass

__all__ = [
    "arcsech",
    "symmetric_level",
    "script_T",
    "dscript_T_dp0",
    "script_M",
    "SymmetricState",
    "symmetric_state_at_p0",
    "solve_symmetric",
    "solve_symmetric_at_mass",
    "mass_symmetric",
]

_P0_BRACKET = (1e-8, 1.0 - 1e-10)
_BRENTQ_RTOL = 4.0 * np.finfo(float).eps


def arcsech(p0: float) -> float:
    """Inverse of sech on (0, 1], stable at both ends."""
    if not (0.0 < p0 <= 1.0):
        raise ValueError(f"arcsech needs p0 in (0, 1], got {p0}")
    s = math.sqrt((1.0 - p0) * (1.0 + p0))
    return math.log1p(s) - math.log(p0)


def symmetric_level(p0: float, n_loops: int) -> EnergyLevel:
    """The loop level of the symmetric state with junction value p0."""
    if n_loops < 1:
        raise ValueError(f"n_loops must be a positive integer, got {n_loops}")
    q0 = math.sqrt(potential(p0)) / (2.0 * n_loops)
    return energy_level(p0, q0)


def script_T(p0: float, n_loops: int,
             spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Half-loop transit time of the symmetric state; equals pi*eps on branch."""
    level = symmetric_level(p0, n_loops)
    return _integrate_segment(level, _KERNELS["one"], "plus", spec)


def dscript_T_dp0(p0: float, n_loops: int,
                  spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """d(script_T)/dp0 through the exact arc-time derivative identity.

    (E0 + 1/4) script_T'(p0) = -1/(16 N^2 q0)
                               - A'(p0) (1 - 1/(4N^2)) * C(p0),

    with C the curvature integral int (1-2u^2)/(8 u^2 v) du over the arc.
    """
    level = symmetric_level(p0, n_loops)
    q0 = level.q0
    shifted = q0 * q0 + 0.25 * (1.0 - 2.0 * p0 * p0) ** 2  # E0 + 1/4 > 0
    curv = _integrate_segment(level, _KERNELS["curvature"], "plus", spec)
    inv4n2 = 1.0 / (4.0 * n_loops * n_loops)
    return (-inv4n2 / (4.0 * q0) - potential_deriv(p0) * (1.0 - inv4n2) * curv) / shifted


def script_M(p0: float, n_loops: int,
             spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """pi times the mass of the symmetric state with junction value p0."""
    level = symmetric_level(p0, n_loops)
    loop_part = 2.0 * n_loops * weighted_level_integral(level, "u_squared",
                                                        "plus", spec)
    return script_T(p0, n_loops, spec) * (loop_part + tail_mass(arcsech(p0)))


@dataclass(frozen=True)
class SymmetricState:
    n_loops: int
    eps: float
    omega: float
    p0: float
    q0: float
    a: float
    level: EnergyLevel
    mass: float
    energy: float


def symmetric_state_at_p0(p0: float, n_loops: int,
                          spec: QuadratureSpec = DEFAULT_QUADRATURE) -> SymmetricState:
    """Assemble the full symmetric state parameterized by its junction value."""
    level = symmetric_level(p0, n_loops)
    eps = script_T(p0, n_loops, spec) / math.pi
    a = arcsech(p0)
    loop_part = 2.0 * n_loops * weighted_level_integral(level, "u_squared",
                                                        "plus", spec)
    mass = eps * (loop_part + tail_mass(a))
    state = SymmetricState(n_loops=n_loops, eps=eps, omega=-eps * eps, p0=p0,
                           q0=level.q0, a=a, level=level, mass=mass, energy=0.0)
    return replace(state, energy=energy_of_state(state, spec))


def solve_symmetric(eps: float, n_loops: int,
                    spec: QuadratureSpec = DEFAULT_QUADRATURE,
                    bracket: tuple[float, float] = _P0_BRACKET) -> SymmetricState:
    """Symmetric state at scale eps > 0 (frequency omega = -eps**2)."""
    if eps <= 0.0:
        raise ValueError(f"eps must be positive, got {eps}")
    target = math.pi * eps
    lo, hi = bracket

    def g(p0):
        return script_T(p0, n_loops, spec) - target

    g_lo, g_hi = g(lo), g(hi)
    if not (g_lo > 0.0 > g_hi):
        raise BracketError(
            f"eps={eps} outside the reachable range of the p0 bracket "
            f"[{lo}, {hi}] (script_T endpoints {g_lo + target}, {g_hi + target})"
        )
    p0 = brentq(g, lo, hi, xtol=1e-15, rtol=_BRENTQ_RTOL)
    return symmetric_state_at_p0(p0, n_loops, spec)


def solve_symmetric_at_mass(mu: float, n_loops: int,
                            spec: QuadratureSpec = DEFAULT_QUADRATURE,
                            bracket: tuple[float, float] = _P0_BRACKET) -> SymmetricState:
    """Symmetric state with prescribed mass mu (script_M is monotone)."""
    if mu <= 0.0:
        raise ValueError(f"mass must be positive, got {mu}")
    target = math.pi * mu
    lo, hi = bracket

    def g(p0):
        return script_M(p0, n_loops, spec) - target

    g_lo, g_hi = g(lo), g(hi)
    if not (g_lo > 0.0 > g_hi):
        raise BracketError(
            f"mass={mu} outside the reachable range of the p0 bracket [{lo}, {hi}]"
        )
    p0 = brentq(g, lo, hi, xtol=1e-15, rtol=_BRENTQ_RTOL)
    return symmetric_state_at_p0(p0, n_loops, spec)


def mass_symmetric(state: SymmetricState,
                   spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Mass of a symmetric state: N loop integrals plus the tail integral."""
    loop_part = 2.0 * state.n_loops * weighted_level_integral(
        state.level, "u_squared", "plus", spec)
    return state.eps * (loop_part + tail_mass(state.a))
