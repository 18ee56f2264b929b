"""Wave profiles on the graph and the mass/energy observables.

States are stored through their phase-plane data (levels, junction value p0,
half-line offset a).  This module turns that data into sampled profiles by
direct ODE integration and into the two conserved observables

    mass   mu  = integral of |phi|^2 over the graph,
    energy eta = integral of (|phi'|^2 - |phi|^4) over the graph,

evaluated in closed form on the half-line tail and by level-curve quadrature
on the loops.  The profile path and the quadrature path are independent, so
each can cross-check the other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson, solve_ivp

from .levelcurve import DEFAULT_QUADRATURE, QuadratureSpec, weighted_level_integral
from .phase_plane import EnergyLevel, potential

__all__ = [
    "tail_mass",
    "tail_energy",
    "loop_mass_integral",
    "loop_energy_integral",
    "energy_of_state",
    "LoopProfile",
    "TailProfile",
    "WaveProfile",
    "reconstruct_profile",
    "profile_mass",
    "profile_energy",
]


def tail_mass(a: float) -> float:
    """Integral of sech(z + a)**2 over z in (0, inf), i.e. 1 - tanh(a)."""
    if a < 0.0:
        raise ValueError(f"tail offset a must be nonnegative, got {a}")
    if a > 350.0:  # exp would overflow; the tail mass is below 1e-300 anyway
        return 2.0 * math.exp(-2.0 * a)
    return 2.0 / (math.exp(2.0 * a) + 1.0)


def tail_energy(a: float) -> float:
    """Integral of (u0'**2 - u0**4) over the half-line for u0 = sech(z + a).

    Equals tanh(a) - (2/3)*tanh(a)**3 - 1/3, written in terms of
    s = 1 - tanh(a) as s - 2 s**2 + (2/3) s**3 to stay exact for large a.
    """
    s = tail_mass(a)
    return s * (1.0 - s * (2.0 - (2.0 / 3.0) * s))


def loop_mass_integral(level: EnergyLevel, segment: str,
                       spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Integral of u**2 dz over one full loop traversal = 2 * int u^2/v du."""
    return 2.0 * weighted_level_integral(level, "u_squared", segment, spec)


def loop_energy_integral(level: EnergyLevel, segment: str,
                         spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Integral of (u'**2 - u**4) dz over one full loop traversal."""
    kinetic = weighted_level_integral(level, "v_kinetic", segment, spec)
    quartic = weighted_level_integral(level, "u_fourth", segment, spec)
    return 2.0 * (kinetic - quartic)


def energy_of_state(state, spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Energy eta of a solved state (symmetric or K-split), loops + tail."""
    if hasattr(state, "k_big"):
        total = state.k_big * loop_energy_integral(state.level_big, "plus", spec)
        if state.level_small is not None:
            segment = "minus" if state.regime == "opposite" else "plus"
            total += (state.n_loops - state.k_big) * loop_energy_integral(
                state.level_small, segment, spec)
    else:
        total = state.n_loops * loop_energy_integral(state.level, "plus", spec)
    return state.eps ** 3 * (total + tail_energy(state.a))


@dataclass(frozen=True)
class LoopProfile:
    edge_id: int
    component_type: str  # "plus" (through the outer turning point) or "minus"
    z: np.ndarray
    u: np.ndarray
    v: np.ndarray


@dataclass(frozen=True)
class TailProfile:
    z: np.ndarray
    u: np.ndarray
    v: np.ndarray


@dataclass(frozen=True)
class WaveProfile:
    eps: float
    loops: tuple[LoopProfile, ...]
    tail: TailProfile
    invariant_drift: float
    vertex_gap: float


def _integrate_loop(level: EnergyLevel, component_type: str, eps: float,
                    samples: int, rtol: float, atol: float):
    """Sample one loop component on [-pi*eps, pi*eps] from its midpoint.

    The component is even about the loop midpoint, so only [0, pi*eps] is
    integrated; the other half is mirrored.  Returns (z, u, v, drift, gap).
    """
    half = math.pi * eps
    center = level.p_plus if component_type == "plus" else level.p_minus
    if center is None:
        raise ValueError("minus component requested on a non-closed level")
    n_half = samples // 2 + 1
    z_half = np.linspace(0.0, half, n_half)

    def rhs(z, y):
        return [y[1], y[0] - 2.0 * y[0] ** 3]

    sol = solve_ivp(rhs, (0.0, half), [center, 0.0], method="DOP853",
                    t_eval=z_half, rtol=rtol, atol=atol)
    u_half, v_half = sol.y
    drift = float(np.max(np.abs(
        v_half * v_half - potential(u_half) - level.energy)))
    gap = abs(float(u_half[-1]) - level.p0)
    z = np.concatenate([-z_half[:0:-1], z_half])
    u = np.concatenate([u_half[:0:-1], u_half])
    v = np.concatenate([-v_half[:0:-1], v_half])
    return z, u, v, drift, gap


def reconstruct_profile(state, *, samples: int = 2001, rtol: float = 1e-12,
                        atol: float = 1e-14, tail_span: float = 40.0) -> WaveProfile:
    """Sample the full wave on the graph by integrating u'' = u - 2u**3.

    Loop components start at their interior extremum (exact turning-point
    data from the level set) and run to the vertex; the half-line tail is the
    explicit soliton translate sech(z + a).  The invariant drift along the
    integration is recorded, not projected away, so it doubles as an error
    meter for the whole reconstruction.
    """
    eps = state.eps
    if hasattr(state, "k_big"):
        plans = [("plus", state.level_big)] * state.k_big
        if state.level_small is not None:
            small_type = "minus" if state.regime == "opposite" else "plus"
            plans += [(small_type, state.level_small)] * (state.n_loops - state.k_big)
    else:
        plans = [("plus", state.level)] * state.n_loops

    cache: dict[tuple[str, float], tuple] = {}
    loops = []
    drift = 0.0
    gap = 0.0
    for edge_id, (ctype, level) in enumerate(plans, start=1):
        key = (ctype, level.energy)
        if key not in cache:
            cache[key] = _integrate_loop(level, ctype, eps, samples, rtol, atol)
        z, u, v, d, g = cache[key]
        drift = max(drift, d)
        gap = max(gap, g)
        loops.append(LoopProfile(edge_id=edge_id, component_type=ctype,
                                 z=z, u=u, v=v))

    z_tail = np.linspace(0.0, tail_span, samples)
    w = z_tail + state.a
    u_tail = 1.0 / np.cosh(w)
    v_tail = -u_tail * np.tanh(w)
    tail = TailProfile(z=z_tail, u=u_tail, v=v_tail)
    return WaveProfile(eps=eps, loops=tuple(loops), tail=tail,
                       invariant_drift=drift, vertex_gap=gap)


def profile_mass(profile: WaveProfile) -> float:
    """Sample-based mass (cross-check for the level-curve quadrature path)."""
    total = sum(float(simpson(lp.u * lp.u, x=lp.z)) for lp in profile.loops)
    total += float(simpson(profile.tail.u ** 2, x=profile.tail.z))
    return profile.eps * total


def profile_energy(profile: WaveProfile) -> float:
    """Sample-based energy (cross-check for the level-curve quadrature path)."""
    total = 0.0
    for lp in profile.loops:
        total += float(simpson(lp.v * lp.v - lp.u ** 4, x=lp.z))
    t = profile.tail
    total += float(simpson(t.v * t.v - t.u ** 4, x=t.z))
    return profile.eps ** 3 * total
