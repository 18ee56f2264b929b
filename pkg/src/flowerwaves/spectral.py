"""Linearized spectrum at a symmetric state, by shooting.

Perturbations of a symmetric state split by symmetry into two families.
Modes that vanish at the junction reduce to a Dirichlet problem on a single
loop; modes that keep all loops equal couple to the half-line tail through
the vertex conditions.  Both reduce to one scalar shooting problem with the
loop profile as potential,

    -v'' + (1 - 6 u(z)^2) v = lam v,    z in [-pi*eps, pi*eps],

with the profile regenerated alongside the mode (no interpolation).  The
Dirichlet family is indexed by interior node count and alternates
even/odd about the loop center starting even; the junction-coupled family
is found as roots of a matching determinant against the exact decaying
half-line solution, which is available in closed form.

Multiplicities: each junction-coupled eigenvalue appears once, each
even-about-center Dirichlet eigenvalue N - 1 times (loop-difference
copies), each odd one N times.  The first even Dirichlet eigenvalue
crossing zero is the symmetry-breaking point; locating that crossing takes
one shot per eps and gives an eigenvalue-free cross-check of the arc-time
route.

The exact point spectrum of the zero-potential graph is included as a
closed-form reference for the vertex conditions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .errors import BracketError, NumericsError, ShootingError
from .levelcurve import DEFAULT_QUADRATURE, QuadratureSpec
from .symmetric_state import SymmetricState, solve_symmetric

__all__ = [
    "v0_tail",
    "sp2_eigenvalues",
    "sp1_eigenvalues",
    "morse_nullity",
    "eps_star_spectral",
    "laplacian_spectrum",
    "SpectralReport",
    "spectral_report",
]

_RTOL = 1e-11
_ATOL = 1e-13
_BRENTQ_RTOL = 4.0 * np.finfo(float).eps
_ZERO_TOL = 1e-8
_LAMBDA_FLOOR = -25.0
_LAMBDA_CEIL = 1.0 - 1e-6


def v0_tail(z: float, lam: float, a: float) -> tuple[float, float]:
    """Decaying half-line solution of the linearized equation, with slope.

    Closed form in kappa = sqrt(1 - lam), normalized so that at lam = 0 it
    equals sech(z + a) tanh(z + a) / 2 exactly — the slope of the shifted
    tail profile.  Returns (value, derivative) at z >= 0.
    """
    if lam >= 1.0:
        raise ValueError(f"tail solution needs lam < 1, got {lam}")
    if z < 0.0:
        raise ValueError(f"tail coordinate must be >= 0, got {z}")
    if a <= 0.0:
        raise ValueError(f"tail shift must be positive, got {a}")
    kappa = math.sqrt(1.0 - lam)
    w = z + a
    th = math.tanh(w)
    sech_sq = 1.0 / math.cosh(w) ** 2
    denom = 3.0 - lam + 3.0 * kappa
    r = 3.0 - lam + 3.0 * kappa * th - 3.0 * sech_sq
    dr = 3.0 * kappa * sech_sq + 6.0 * sech_sq * th
    scale = math.exp(-kappa * w) / denom
    return scale * r, scale * (dr - kappa * r)


def _shoot_linearized(state: SymmetricState, lam: float, parity: str, *,
                      rtol: float = _RTOL,
                      atol: float = _ATOL) -> tuple[float, float, int]:
    """Shoot a linearized mode from the loop center to the junction.

    Returns the mode value and slope at z = pi*eps together with the number
    of sign changes on (0, pi*eps] — the counting function that indexes the
    Dirichlet family.
    """
    half = math.pi * state.eps
    center = state.level.p_plus

    def rhs(z, y):
        u, du, v, dv = y
        return (du, u - 2.0 * u**3, dv, (1.0 - lam - 6.0 * u * u) * v)

    if parity == "even":
        y0 = (center, 0.0, 1.0, 0.0)
    elif parity == "odd":
        y0 = (center, 0.0, 0.0, 1.0)
    else:
        raise ValueError(f"parity must be 'even' or 'odd', got {parity!r}")

    def mode_zero(z, y):
        return y[2]

    sol = solve_ivp(rhs, (0.0, half), y0, method="DOP853",
                    rtol=rtol, atol=atol, events=mode_zero)
    if not sol.success:
        raise ShootingError(
            f"linearized shot failed at lam={lam}: {sol.message}")
    # The odd start v(0) = 0 registers as a crossing at z ~ 0; drop it.
    crossings = sol.t_events[0]
    count = int(np.count_nonzero(crossings > 1e-8 * max(1.0, half)))
    return float(sol.y[2, -1]), float(sol.y[3, -1]), count


def _parity_eigenvalue(state: SymmetricState, parity: str, k: int, *,
                       rtol: float = _RTOL, atol: float = _ATOL) -> float:
    """k-th eigenvalue (k >= 1) of the loop Dirichlet family of one parity.

    The crossing count is a nondecreasing step function of lam that jumps by
    one at each eigenvalue of the family; bisect it down to a unit bracket,
    then refine on the junction boundary value.  The potential never drops
    below 1 - 6 u_max^2 >= -5, so lam = -6 always counts zero.
    """

    def shoot(lam):
        return _shoot_linearized(state, lam, parity, rtol=rtol, atol=atol)

    lo, c_lo = -6.0, shoot(-6.0)[2]
    if c_lo > k - 1:
        raise BracketError(
            f"crossing count {c_lo} at the lower end, cannot isolate "
            f"eigenvalue {k} of the {parity} family")
    hi = 2.0
    c_hi = shoot(hi)[2]
    for _ in range(60):
        if c_hi >= k:
            break
        hi = 2.0 * hi + 4.0
        c_hi = shoot(hi)[2]
    else:
        raise BracketError(
            f"could not bracket eigenvalue {k} of the {parity} family")

    for _ in range(200):
        if c_lo == k - 1 and c_hi == k:
            break
        mid = 0.5 * (lo + hi)
        c_mid = shoot(mid)[2]
        if c_mid >= k:
            hi, c_hi = mid, c_mid
        else:
            lo, c_lo = mid, c_mid
    else:
        raise BracketError(
            f"crossing-count bisection stalled for eigenvalue {k} "
            f"of the {parity} family")

    return float(brentq(lambda lam: shoot(lam)[0], lo, hi,
                        xtol=1e-12, rtol=_BRENTQ_RTOL))


def sp2_eigenvalues(state: SymmetricState, count: int = 4, *,
                    rtol: float = _RTOL, atol: float = _ATOL) -> list[float]:
    """First `count` loop Dirichlet eigenvalues in node-count order.

    Eigenfunctions alternate even/odd about the loop center starting even,
    so the n-th eigenvalue is the ceil(n/2)-th member of one parity family;
    the n-th eigenfunction has exactly n - 1 interior zeros.
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    out = []
    for n in range(1, count + 1):
        parity = "even" if n % 2 == 1 else "odd"
        out.append(_parity_eigenvalue(state, parity, (n + 1) // 2,
                                      rtol=rtol, atol=atol))
    return out


def sp1_eigenvalues(state: SymmetricState, count: int = 3, *,
                    scan_points: int = 500,
                    lam_floor: float = _LAMBDA_FLOOR,
                    rtol: float = _RTOL, atol: float = _ATOL) -> list[float]:
    """Junction-coupled eigenvalues below the continuum edge lam = 1.

    Roots of the matching determinant between the even loop mode and the
    decaying half-line solution, bracketed by a fixed scan.  Fewer than
    `count` roots may exist below the edge; the list is what was found,
    ascending.  The floor is far below the deepest possible eigenvalue
    (the whole-line soliton ground value ~ -3).  The uniform scan carries a
    geometric tail toward the edge because the second eigenvalue approaches
    lam = 1 exponentially fast as eps grows and would otherwise slip past
    the last uniform interval.
    """

    def determinant(lam):
        v_end, dv_end, _ = _shoot_linearized(state, lam, "even",
                                             rtol=rtol, atol=atol)
        val, slope = v0_tail(0.0, lam, state.a)
        return 2.0 * state.n_loops * dv_end * val - v_end * slope

    grid = np.concatenate([np.linspace(lam_floor, _LAMBDA_CEIL, scan_points),
                           1.0 - np.logspace(-7.0, -13.0, 7)])
    values = [determinant(lam) for lam in grid]
    roots: list[float] = []
    for i in range(len(grid) - 1):
        f_left, f_right = values[i], values[i + 1]
        if f_left == 0.0:
            roots.append(float(grid[i]))
        elif f_left * f_right < 0.0:
            roots.append(float(brentq(determinant, grid[i], grid[i + 1],
                                      xtol=1e-13, rtol=_BRENTQ_RTOL)))
    return sorted(roots)[:count]


def morse_nullity(state: SymmetricState, *, zero_tol: float = _ZERO_TOL,
                  rtol: float = _RTOL, atol: float = _ATOL) -> tuple[int, int]:
    """Counts of negative and zero linearized eigenvalues, multiplicities in.

    Junction-coupled roots count once each, even Dirichlet modes N - 1 times,
    odd ones N times.  Each ascending parity family is walked only until it
    clears the zero threshold, so just the eigenvalues that can contribute
    are computed.
    """
    if state.n_loops < 2:
        raise ValueError("index counting needs at least two loops")
    negative, zero = 0, 0
    for g in sp1_eigenvalues(state, count=3, rtol=rtol, atol=atol):
        if g < -zero_tol:
            negative += 1
        elif abs(g) <= zero_tol:
            zero += 1
    for parity, mult in (("even", state.n_loops - 1), ("odd", state.n_loops)):
        for k in range(1, 4):
            lam = _parity_eigenvalue(state, parity, k, rtol=rtol, atol=atol)
            if lam < -zero_tol:
                negative += mult
            elif abs(lam) <= zero_tol:
                zero += mult
            else:
                break
    return negative, zero


def eps_star_spectral(n_loops: int, *,
                      bracket: tuple[float, float] = (0.05, 1.0),
                      scan_points: int = 40,
                      spec: QuadratureSpec = DEFAULT_QUADRATURE,
                      rtol: float = _RTOL, atol: float = _ATOL) -> float:
    """Scale at which the first even loop Dirichlet eigenvalue crosses zero.

    While that eigenvalue is positive the lam = 0 even mode reaches the
    junction without a zero and its value there is positive; past the
    crossing the value is negative.  So the crossing is a root-find on a
    single shot per eps, with no eigenvalue solve inside the loop.
    """
    if n_loops < 2:
        raise ValueError("symmetry breaking needs at least two loops")

    def junction_value(eps):
        st = solve_symmetric(eps, n_loops, spec)
        return _shoot_linearized(st, 0.0, "even", rtol=rtol, atol=atol)[0]

    grid = np.linspace(bracket[0], bracket[1], scan_points)
    values = [junction_value(eps) for eps in grid]
    for i in range(scan_points - 1):
        if values[i] > 0.0 >= values[i + 1]:
            return float(brentq(junction_value, grid[i], grid[i + 1],
                                xtol=1e-12, rtol=_BRENTQ_RTOL))
    raise BracketError(
        f"junction mode value has no sign change for eps in {bracket} "
        f"with {n_loops} loops")


def laplacian_spectrum(n_loops: int, n_max: int) -> list[tuple[float, int]]:
    """Exact point spectrum of the zero-potential graph, first n_max shells.

    Integer-squared values carry one copy per loop; half-integer-squared
    values carry one fewer (they need loop-to-loop differences, which a
    single loop does not have).  A transcendental positivity check rules
    out negative eigenvalues on a grid before returning.
    """
    if n_loops < 1:
        raise ValueError(f"need at least one loop, got {n_loops}")
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    for lam in np.linspace(-100.0, -1e-9, 512):
        if 2.0 * n_loops * math.tanh(math.pi * math.sqrt(-lam)) + 1.0 <= 0.0:
            raise NumericsError(
                f"negative-eigenvalue condition violated at lam={lam}")
    shells: list[tuple[float, int]] = []
    for n in range(1, n_max + 1):
        if n_loops >= 2:
            shells.append(((n - 0.5) ** 2, n_loops - 1))
        shells.append((float(n * n), n_loops))
    return sorted(shells)


@dataclass(frozen=True)
class SpectralReport:
    """Both eigenvalue families at one state, merged with multiplicities."""

    eps: float
    n_loops: int
    beta: tuple[float, ...]
    gamma: tuple[float, ...]
    lambda_ordered: tuple[tuple[float, int], ...]
    morse_n: int
    nullity_z: int


def spectral_report(state: SymmetricState, *, n_beta: int = 4,
                    n_gamma: int = 3, zero_tol: float = _ZERO_TOL,
                    rtol: float = _RTOL, atol: float = _ATOL) -> SpectralReport:
    """Assemble both families, the merged list, and the index counts."""
    beta = sp2_eigenvalues(state, n_beta, rtol=rtol, atol=atol)
    gamma = sp1_eigenvalues(state, n_gamma, rtol=rtol, atol=atol)
    merged = [(g, 1) for g in gamma]
    for n, b in enumerate(beta, start=1):
        mult = state.n_loops - 1 if n % 2 == 1 else state.n_loops
        if mult > 0:
            merged.append((b, mult))
    merged.sort()
    negative = sum(m for lam, m in merged if lam < -zero_tol)
    zero = sum(m for lam, m in merged if abs(lam) <= zero_tol)
    return SpectralReport(eps=state.eps, n_loops=state.n_loops,
                          beta=tuple(beta), gamma=tuple(gamma),
                          lambda_ordered=tuple(merged),
                          morse_n=negative, nullity_z=zero)
