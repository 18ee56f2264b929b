"""Symmetry breaking along the symmetric branch and diagram tracing.

The outer arc time T_plus(p0, q0) is unimodal in q0 once p0 exceeds the
center value p_* = 1/sqrt(2); its maximizer q_max(p0) governs when two
different loop arcs can share the same transit time.  Two distinguished
junction values organize the picture:

  * p_star_star: where q_max(p0) meets the homoclinic flux sqrt(A(p0)).
    Below it the same-regime matching problem is confined to closed levels.
  * p_bif: the root of the pitchfork function script_F along the symmetric
    branch.  There the even Dirichlet eigenvalue of the linearization crosses
    zero and the K-split branches with equal arc times detach.

Both are located by sign-change scans plus bracketed root refinement on
quantities built from the exact arc-time derivative identities (no numeric
differencing anywhere).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from .errors import BracketError
from .levelcurve import (
    DEFAULT_QUADRATURE,
    QuadratureSpec,
    _KERNELS,
    _integrate_segment,
    dT_plus_dq0,
)
from .phase_plane import P_STAR, potential
from .symmetric_state import script_T, symmetric_level, symmetric_state_at_p0

__all__ = [
    "q_max",
    "find_p_star_star",
    "script_F",
    "BifurcationReport",
    "find_bifurcation",
    "DiagramRow",
    "trace_diagram",
]

_BRENTQ_RTOL = 4.0 * np.finfo(float).eps


def q_max(p0: float, spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """The unique maximizer of q0 -> T_plus(p0, q0), defined for p0 > p_*.

    The arc time increases up to q_max and decreases beyond it; the lower
    bracket p0*sqrt(2*p0**2 - 1) is where the increase is still guaranteed.
    """
    if not (P_STAR < p0 < 1.0):
        raise ValueError(f"q_max needs p0 in (1/sqrt(2), 1), got {p0}")
    lo = p0 * math.sqrt(2.0 * p0 * p0 - 1.0) + 1e-12
    if dT_plus_dq0(p0, lo, spec) <= 0.0:
        raise BracketError(f"arc time not increasing at the lower bracket for p0={p0}")
    hi = max(2.0 * lo, 0.05)
    for _ in range(60):
        if dT_plus_dq0(p0, hi, spec) < 0.0:
            break
        hi *= 2.0
    else:
        raise BracketError(f"arc time still increasing at q0={hi} for p0={p0}")
    return brentq(lambda q: dT_plus_dq0(p0, q, spec), lo, hi,
                  xtol=1e-13, rtol=_BRENTQ_RTOL)


@lru_cache(maxsize=8)
def find_p_star_star(spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Root of q_max(p0) = sqrt(A(p0)) on (p_*, sqrt(2/3)).

    Below the root the maximizing level is still closed (inside the
    homoclinic loop); above it q_max escapes through the homoclinic flux.
    """
    def g(p0):
        return q_max(p0, spec) - math.sqrt(potential(p0))

    lo = P_STAR + 1e-3
    hi = math.sqrt(2.0 / 3.0)
    g_lo, g_hi = g(lo), g(hi)
    if not (g_lo < 0.0 < g_hi):
        raise BracketError(
            f"q_max - sqrt(A) does not change sign on [{lo}, {hi}] "
            f"(values {g_lo}, {g_hi})"
        )
    return brentq(g, lo, hi, xtol=1e-13, rtol=_BRENTQ_RTOL)


def script_F(p0: float, n_loops: int,
             spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Pitchfork indicator along the symmetric branch.

    script_F(p0) = p0**2 (2 p0**2 - 1) - q0 p0**3 * J(p0),
    J = int (2u**2 - 1)/(u**2 v) du over the loop arc at the symmetric level.
    Negative just above p_*, positive below p_star_star, one simple root.
    """
    level = symmetric_level(p0, n_loops)
    curv = _integrate_segment(level, _KERNELS["curvature"], "plus", spec)
    # J = -8 * curvature integral
    return p0 * p0 * (2.0 * p0 * p0 - 1.0) + 8.0 * level.q0 * p0 ** 3 * curv


@dataclass(frozen=True)
class BifurcationReport:
    n_loops: int
    p_bif: float
    eps_star: float
    omega_star: float
    mu_star: float
    p_star_star: float


def find_bifurcation(n_loops: int,
                     spec: QuadratureSpec = DEFAULT_QUADRATURE,
                     scan_points: int = 200) -> BifurcationReport | None:
    """Locate the symmetry-breaking point on the symmetric branch.

    Scans script_F over (p_*, p_star_star) and refines its sign change.
    Returns None for a single loop: the eigenvalue family that would cross
    zero there has multiplicity N - 1, so no actual bifurcation happens.
    """
    if n_loops < 2:
        return None
    p_ss = find_p_star_star(spec)
    grid = np.linspace(P_STAR + 1e-4, p_ss - 1e-6, scan_points)
    values = [script_F(p0, n_loops, spec) for p0 in grid]
    p_bif = None
    for i in range(len(grid) - 1):
        if values[i] < 0.0 <= values[i + 1]:
            p_bif = brentq(lambda p: script_F(p, n_loops, spec),
                           grid[i], grid[i + 1], xtol=1e-14, rtol=_BRENTQ_RTOL)
            break
    if p_bif is None:
        return None
    eps_star = script_T(p_bif, n_loops, spec) / math.pi
    state = symmetric_state_at_p0(p_bif, n_loops, spec)
    return BifurcationReport(n_loops=n_loops, p_bif=p_bif, eps_star=eps_star,
                             omega_star=-eps_star * eps_star,
                             mu_star=state.mass, p_star_star=p_ss)


@dataclass(frozen=True)
class DiagramRow:
    branch: str  # "symmetric" | "opposite" | "same"
    k_big: int
    n_loops: int
    omega: float
    eps: float
    p0: float
    mass: float
    energy: float
    outside_proven_region: bool = False


def _nan_row(branch: str, k_big: int, n_loops: int, p0: float) -> DiagramRow:
    nan = float("nan")
    return DiagramRow(branch=branch, k_big=k_big, n_loops=n_loops, omega=nan,
                      eps=nan, p0=p0, mass=nan, energy=nan)


def trace_diagram(n_loops: int, k_values: tuple[int, ...] = (),
                  points: int = 200,
                  spec: QuadratureSpec = DEFAULT_QUADRATURE) -> list[DiagramRow]:
    """Sweep the branches and emit bifurcation-diagram rows.

    The symmetric branch is swept in p0 with 1 - p0 log-spaced (resolving the
    small-eps end); each requested K sweeps both matching regimes.  Points
    where a solver legitimately fails (no root at that p0) become NaN gap
    rows so downstream plots break lines instead of interpolating.
    """
    from .errors import NumericsError
    from .ksplit_states import solve_ksplit_opposite, solve_ksplit_same

    for k in k_values:
        if not (1 <= k <= n_loops - 1):
            raise ValueError(f"k_values must lie in [1, n_loops-1], got {k}")

    rows: list[DiagramRow] = []
    one_minus = np.logspace(-5.0, math.log10(1.0 - 1e-4), points)
    for p0 in 1.0 - one_minus:
        state = symmetric_state_at_p0(float(p0), n_loops, spec)
        rows.append(DiagramRow(branch="symmetric", k_big=n_loops,
                               n_loops=n_loops, omega=state.omega,
                               eps=state.eps, p0=state.p0, mass=state.mass,
                               energy=state.energy))

    if k_values:
        p_ss = find_p_star_star(spec)
        n_half = max(points // 2, 2)
        grid_opp = np.logspace(-6.0, math.log10(P_STAR - 1e-3), n_half)
        grid_same = np.linspace(P_STAR + 1e-3, 1.0 - 1e-3, n_half)
        for k in k_values:
            for p0 in grid_opp:
                try:
                    st = solve_ksplit_opposite(float(p0), n_loops, k, spec)
                    rows.append(DiagramRow(
                        branch="opposite", k_big=k, n_loops=n_loops,
                        omega=st.omega, eps=st.eps, p0=st.p0, mass=st.mass,
                        energy=st.energy))
                except NumericsError:
                    rows.append(_nan_row("opposite", k, n_loops, float(p0)))
            for p0 in grid_same:
                try:
                    states = solve_ksplit_same(float(p0), n_loops, k, spec)
                except NumericsError:
                    rows.append(_nan_row("same", k, n_loops, float(p0)))
                    continue
                for st in states:
                    rows.append(DiagramRow(
                        branch="same", k_big=k, n_loops=n_loops,
                        omega=st.omega, eps=st.eps, p0=st.p0, mass=st.mass,
                        energy=st.energy,
                        outside_proven_region=bool(p0 > p_ss)))

    rows.sort(key=lambda r: (r.branch, r.k_big, r.p0, r.eps))
    return rows
