"""K-split states: K loops carry a large arc, N-K loops a small one.

All loops still meet the half-line at the common junction value p0, but the
loop arcs now live on two different levels with midpoint values q_big and
q_small.  The vertex flux balance and the equal-transit-time requirement form
a 2x2 system with two regimes:

  * "opposite" (p0 < p_*): the small loops dip through the inner turning
    point.  Flux balance reads 2K q_big - 2(N-K) q_small = sqrt(A(p0)) and
    the times match as T_plus(p0, q_big) = T_minus(p0, q_small).  The
    mismatch is strictly monotone on the admissible q_big interval, so there
    is at most one state per (p0, K).
  * "same" (p0 > p_*): both arcs pass through outer turning points.  Flux
    balance reads 2K q_big + 2(N-K) q_small = sqrt(A(p0)) and the times match
    on the two sides of the arc-time maximizer q_max(p0): q_small below it,
    q_big above it.  Zero, one, or two states exist per (p0, K).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import brentq

from .bifurcation import q_max
from .errors import BracketError
from .levelcurve import (
    DEFAULT_QUADRATURE,
    QuadratureSpec,
    period_T_minus,
    period_T_plus,
    weighted_level_integral,
)
from .phase_plane import P_STAR, EnergyLevel, energy_level, potential
from .profiles_observables import energy_of_state, tail_mass
from .symmetric_state import SymmetricState, arcsech

__all__ = [
    "KSplitState",
    "interval_q_big",
    "q_small_from_q_big",
    "solve_ksplit_opposite",
    "match_q_big",
    "solve_ksplit_same",
    "solve_ksplit_at_eps",
    "mass_ksplit",
    "ksplit_from_symmetric",
]

_BRENTQ_RTOL = 4.0 * np.finfo(float).eps


@dataclass(frozen=True)
class KSplitState:
    n_loops: int
    k_big: int
    regime: str  # "opposite" | "same" | "symmetric" (K = N adapter)
    p0: float
    q_big: float
    q_small: float
    a: float
    eps: float
    omega: float
    level_big: EnergyLevel
    level_small: EnergyLevel | None
    mass: float
    energy: float


def _check_split(n_loops: int, k_big: int) -> None:
    if not (1 <= k_big <= n_loops - 1):
        raise ValueError(
            f"k_big must lie in [1, n_loops-1], got k_big={k_big}, n_loops={n_loops}"
        )


def interval_q_big(p0: float, n_loops: int, k_big: int) -> tuple[float, float]:
    """Admissible q_big interval for the opposite-regime matching at p0."""
    _check_split(n_loops, k_big)
    root_a = math.sqrt(potential(p0))
    lo = root_a / (2.0 * k_big)
    hi = (2.0 * (n_loops - k_big) + 1.0) * root_a / (2.0 * k_big)
    return lo, hi


def q_small_from_q_big(q_big: float, p0: float, n_loops: int, k_big: int) -> float:
    """Vertex flux balance of the opposite regime, solved for q_small."""
    _check_split(n_loops, k_big)
    root_a = math.sqrt(potential(p0))
    n_small = n_loops - k_big
    return (k_big * q_big) / n_small - root_a / (2.0 * n_small)


def _build_state(p0: float, n_loops: int, k_big: int, regime: str,
                 q_big: float, q_small: float,
                 spec: QuadratureSpec) -> KSplitState:
    level_big = energy_level(p0, q_big)
    level_small = energy_level(p0, q_small) if q_small > 0.0 else None
    eps = period_T_plus(p0, q_big, spec) / math.pi
    a = arcsech(p0)
    small_segment = "minus" if regime == "opposite" else "plus"
    loop_part = 2.0 * k_big * weighted_level_integral(level_big, "u_squared",
                                                      "plus", spec)
    if level_small is not None:
        loop_part += 2.0 * (n_loops - k_big) * weighted_level_integral(
            level_small, "u_squared", small_segment, spec)
    mass = eps * (loop_part + tail_mass(a))
    state = KSplitState(n_loops=n_loops, k_big=k_big, regime=regime, p0=p0,
                        q_big=q_big, q_small=q_small, a=a, eps=eps,
                        omega=-eps * eps, level_big=level_big,
                        level_small=level_small, mass=mass, energy=0.0)
    return replace(state, energy=energy_of_state(state, spec))


def solve_ksplit_opposite(p0: float, n_loops: int, k_big: int,
                          spec: QuadratureSpec = DEFAULT_QUADRATURE) -> KSplitState:
    """The unique opposite-regime K-split state anchored at p0 < p_*."""
    _check_split(n_loops, k_big)
    if not (0.0 < p0 < P_STAR):
        raise ValueError(f"opposite regime needs p0 in (0, 1/sqrt(2)), got {p0}")
    q_big = _opposite_q_big(p0, n_loops, k_big, spec)
    q_small = max(q_small_from_q_big(q_big, p0, n_loops, k_big), 0.0)
    return _build_state(p0, n_loops, k_big, "opposite", q_big, q_small, spec)


def match_q_big(p0: float, q_small: float,
                spec: QuadratureSpec = DEFAULT_QUADRATURE,
                q_max_value: float | None = None,
                q_big_cap: float | None = None) -> float:
    """Same-regime partner of q_small: the q_big > q_max with equal arc time.

    T_plus(p0, .) increases up to q_max(p0) and decreases beyond it, so for
    every q_small below the maximizer there is exactly one partner above it.
    """
    if q_max_value is None:
        q_max_value = q_max(p0, spec)
    if not (0.0 < q_small < q_max_value):
        raise ValueError(
            f"q_small must lie in (0, q_max={q_max_value}), got {q_small}"
        )
    target = period_T_plus(p0, q_small, spec)

    def g(q_big: float) -> float:
        return period_T_plus(p0, q_big, spec) - target

    hi = q_big_cap if q_big_cap is not None else max(2.0 * q_max_value, 1.0)
    if g(hi) >= 0.0:
        for _ in range(60):
            hi *= 2.0
            if g(hi) < 0.0:
                break
        else:
            raise BracketError(f"no upper bracket for the arc-time match at p0={p0}")
    return brentq(g, q_max_value, hi, xtol=1e-15, rtol=_BRENTQ_RTOL)


def solve_ksplit_same(p0: float, n_loops: int, k_big: int,
                      spec: QuadratureSpec = DEFAULT_QUADRATURE,
                      scan_points: int = 400) -> list[KSplitState]:
    """All same-regime K-split states anchored at p0 > p_* (0 to 2 of them).

    Scans the flux-balance residual over q_small in (0, q_max) and refines
    each sign change; the residual is smooth but not monotone, hence the scan.
    """
    _check_split(n_loops, k_big)
    if not (P_STAR < p0 < 1.0):
        raise ValueError(f"same regime needs p0 in (1/sqrt(2), 1), got {p0}")
    qmx = q_max(p0, spec)
    half_flux = 0.5 * math.sqrt(potential(p0))
    n_small = n_loops - k_big

    # q_big decreases as q_small grows, so the previous partner bounds the
    # next search from above -- keeps the scan O(scan_points) cheap.
    last_big = [None]

    def residual(q_small: float) -> float:
        q_big = match_q_big(p0, q_small, spec, q_max_value=qmx,
                            q_big_cap=last_big[0])
        last_big[0] = q_big * (1.0 + 1e-9) + 1e-15
        return k_big * q_big + n_small * q_small - half_flux

    margin = 1e-6 * qmx
    grid = np.linspace(margin, qmx - margin, scan_points)
    values = []
    for q in grid:
        values.append(residual(float(q)))
    states = []
    for i in range(len(grid) - 1):
        if values[i] == 0.0 or (values[i] < 0.0) != (values[i + 1] < 0.0):
            if values[i] == 0.0:
                q_small = float(grid[i])
            else:
                last_big[0] = None
                q_small = brentq(residual, float(grid[i]), float(grid[i + 1]),
                                 xtol=1e-15, rtol=_BRENTQ_RTOL)
            q_big = match_q_big(p0, q_small, spec, q_max_value=qmx)
            states.append(_build_state(p0, n_loops, k_big, "same",
                                       q_big, q_small, spec))
    states.sort(key=lambda s: s.q_small)
    return states


def mass_ksplit(state: KSplitState,
                spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Mass of a K-split state: K big loops, N-K small loops, the tail."""
    loop_part = 2.0 * state.k_big * weighted_level_integral(
        state.level_big, "u_squared", "plus", spec)
    if state.level_small is not None:
        segment = "minus" if state.regime == "opposite" else "plus"
        loop_part += 2.0 * (state.n_loops - state.k_big) * weighted_level_integral(
            state.level_small, "u_squared", segment, spec)
    return state.eps * (loop_part + tail_mass(state.a))


def ksplit_from_symmetric(state: SymmetricState) -> KSplitState:
    """View a symmetric state as the degenerate K = N split (no small loops)."""
    return KSplitState(n_loops=state.n_loops, k_big=state.n_loops,
                       regime="symmetric", p0=state.p0, q_big=state.q0,
                       q_small=0.0, a=state.a, eps=state.eps,
                       omega=state.omega, level_big=state.level,
                       level_small=None, mass=state.mass, energy=state.energy)


def solve_ksplit_at_eps(eps: float, n_loops: int, k_big: int,
                        spec: QuadratureSpec = DEFAULT_QUADRATURE,
                        regime: str = "opposite",
                        grid_points: int = 120) -> list[KSplitState]:
    """K-split states at a prescribed scale eps (grid scan + refinement).

    The anchored solvers parameterize states by p0; this sweeps p0, watches
    the resulting eps(p0) cross the target, and refines each crossing.
    """
    _check_split(n_loops, k_big)
    if eps <= 0.0:
        raise ValueError(f"eps must be positive, got {eps}")
    target = math.pi * eps

    if regime == "opposite":
        grid = np.logspace(-8.0, math.log10(P_STAR - 1e-3), grid_points)

        def arc_time(p0: float) -> float:
            return period_T_plus(
                p0, _opposite_q_big(p0, n_loops, k_big, spec), spec)

        values = []
        for p0 in grid:
            try:
                values.append(arc_time(float(p0)) - target)
            except (BracketError, ValueError):
                values.append(math.nan)
        states = []
        for i in range(len(grid) - 1):
            a, b = values[i], values[i + 1]
            if math.isnan(a) or math.isnan(b):
                continue
            if (a < 0.0) != (b < 0.0) or a == 0.0:
                p0 = brentq(lambda p: arc_time(p) - target,
                            float(grid[i]), float(grid[i + 1]),
                            xtol=1e-15, rtol=_BRENTQ_RTOL)
                states.append(solve_ksplit_opposite(p0, n_loops, k_big, spec))
        return states

    if regime == "same":
        grid = np.linspace(P_STAR + 1e-3, 1.0 - 1e-3, grid_points)
        roots_by_p0 = []
        for p0 in grid:
            try:
                sts = solve_ksplit_same(float(p0), n_loops, k_big, spec,
                                        scan_points=120)
            except (BracketError, ValueError):
                sts = []
            roots_by_p0.append([s.eps for s in sts])
        states = []
        max_roots = max((len(r) for r in roots_by_p0), default=0)
        for j in range(max_roots):
            def branch_eps(p0: float) -> float:
                sts = solve_ksplit_same(float(p0), n_loops, k_big, spec,
                                        scan_points=120)
                if len(sts) <= j:
                    raise BracketError(f"branch {j} lost at p0={p0}")
                return sts[j].eps - eps

            for i in range(len(grid) - 1):
                r0, r1 = roots_by_p0[i], roots_by_p0[i + 1]
                if len(r0) <= j or len(r1) <= j:
                    continue
                h0, h1 = r0[j] - eps, r1[j] - eps
                if (h0 < 0.0) != (h1 < 0.0) or h0 == 0.0:
                    try:
                        p0 = brentq(branch_eps, float(grid[i]), float(grid[i + 1]),
                                    xtol=1e-13, rtol=_BRENTQ_RTOL)
                    except BracketError:
                        continue
                    sts = solve_ksplit_same(p0, n_loops, k_big, spec)
                    if len(sts) > j:
                        states.append(sts[j])
        states.sort(key=lambda s: s.p0)
        return states

    raise ValueError(f"regime must be 'opposite' or 'same', got {regime!r}")


def _opposite_q_big(p0: float, n_loops: int, k_big: int,
                    spec: QuadratureSpec) -> float:
    """q_big of the opposite-regime match at p0 (root only, no state build)."""
    lo, hi = interval_q_big(p0, n_loops, k_big)

    def mismatch(q_big: float) -> float:
        q_small = max(q_small_from_q_big(q_big, p0, n_loops, k_big), 0.0)
        t_minus = period_T_minus(p0, q_small, spec) if q_small > 0.0 else 0.0
        return period_T_plus(p0, q_big, spec) - t_minus

    # At the upper end q_small reaches the homoclinic flux and T_minus
    # diverges -- but only logarithmically, so on deep levels the sign change
    # sits within ~1e-12 of the endpoint.  Walk toward it geometrically.
    f_lo = mismatch(lo)
    f_hi = math.inf
    hi_in = hi
    for shrink in (1e-6, 1e-9, 1e-12, 1e-14, 1e-15, 4e-16, 2e-16):
        hi_in = hi - (hi - lo) * shrink
        f_hi = mismatch(hi_in)
        if f_hi < 0.0:
            break
    if not (f_lo > 0.0 > f_hi):
        raise BracketError(
            f"opposite-regime mismatch does not change sign on [{lo}, {hi_in}] "
            f"for p0={p0}, K={k_big} (values {f_lo}, {f_hi}); the matching "
            "level is closer to the homoclinic flux than double precision resolves"
        )
    return brentq(mismatch, lo, hi_in, xtol=1e-15, rtol=_BRENTQ_RTOL)
