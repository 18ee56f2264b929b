"""Phase-plane primitives for the stationary oscillator u'' = u - 2*u**3.

Orbits of the planar system (u, v) = (u, u') conserve

    E(u, v) = v**2 - A(u),        A(u) = u**2 * (1 - u**2),

and every bounded orbit with E < 0 lives inside the homoclinic loop through
the origin.  A level set with value E intersects the positive u-axis where
u**4 - u**2 - E = 0, i.e. at

    p_plus**2  = (1 + sqrt(1 + 4E)) / 2,
    p_minus**2 = (1 - sqrt(1 + 4E)) / 2,

real turning points requiring E >= -1/4.  The center sits at
(P_STAR, 0) = (1/sqrt(2), 0) with E = E_STAR = -1/4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "P_STAR",
    "E_STAR",
    "potential",
    "potential_deriv",
    "potential_second_deriv",
    "invariant",
    "EnergyLevel",
    "energy_level",
]

P_STAR = 1.0 / math.sqrt(2.0)
E_STAR = -0.25

# Levels closer to the center than this (in 1 + 4E) are treated as the
# degenerate point orbit: both turning points collapse to P_STAR.
_CENTER_DISC_TOL = 4e-14


def potential(u):
    """A(u) = u**2 (1 - u**2), the effective potential of the invariant."""
    u2 = u * u
    return u2 * (1.0 - u2)


def potential_deriv(u):
    """A'(u) = 2u (1 - 2u**2)."""
    return 2.0 * u * (1.0 - 2.0 * u * u)


def potential_second_deriv(u):
    """A''(u) = 2 - 12 u**2."""
    return 2.0 - 12.0 * u * u


def invariant(u, v):
    """E(u, v) = v**2 - A(u), conserved along u'' = u - 2u**3."""
    return v * v - potential(u)


@dataclass(frozen=True)
class EnergyLevel:
    """One level set of the invariant, anchored at a point (p0, q0), q0 >= 0.

    ``p_minus_sq`` is kept even when negative (levels with E > 0 have a single
    positive turning point); ``p_minus`` is None in that case.
    """

    p0: float
    q0: float
    energy: float
    p_plus: float
    p_minus: float | None
    p_plus_sq: float
    p_minus_sq: float

    @property
    def is_closed(self) -> bool:
        """True when the orbit is a closed loop inside the homoclinic orbit."""
        return self.energy < 0.0


def energy_level(p0: float, q0: float) -> EnergyLevel:
    """Build the invariant level through the phase point (p0, q0).

    The discriminant 1 + 4E is evaluated in the algebraically identical form
    4*q0**2 + (1 - 2*p0**2)**2, a sum of squares: the level through any real
    phase point automatically satisfies E >= -1/4 and the turning points never
    go complex through rounding.  p_minus_sq comes from the root product
    p_plus_sq * p_minus_sq = -E, which is cancellation-free near E == 0.
    """
    if not (0.0 < p0 < 1.0):
        raise ValueError(f"p0 must lie in (0, 1), got {p0}")
    if q0 < 0.0:
        raise ValueError(f"q0 must be nonnegative, got {q0}")
    energy = q0 * q0 - potential(p0)
    one_minus_2p2 = 1.0 - 2.0 * p0 * p0
    disc = 4.0 * q0 * q0 + one_minus_2p2 * one_minus_2p2
    if disc < 0.0:  # unreachable for real inputs; guards NaN propagation
        raise ValueError(f"level through ({p0}, {q0}) has E < -1/4")
    if disc <= _CENTER_DISC_TOL:
        return EnergyLevel(
            p0=p0,
            q0=q0,
            energy=energy,
            p_plus=P_STAR,
            p_minus=P_STAR,
            p_plus_sq=0.5,
            p_minus_sq=0.5,
        )
    p_plus_sq = 0.5 * (1.0 + math.sqrt(disc))
    p_minus_sq = -energy / p_plus_sq
    p_minus = math.sqrt(p_minus_sq) if p_minus_sq > 0.0 else None
    return EnergyLevel(
        p0=p0,
        q0=q0,
        energy=energy,
        p_plus=math.sqrt(p_plus_sq),
        p_minus=p_minus,
        p_plus_sq=p_plus_sq,
        p_minus_sq=p_minus_sq,
    )
