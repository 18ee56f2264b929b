"""Standing waves of the cubic NLS equation on flower graphs.

A flower graph ties N loops of circumference 2*pi and one half-line to a
single vertex.  After rescaling by the frequency parameter, every positive
single-lobe standing wave is glued from arcs of one phase-plane oscillator,
and the gluing conditions reduce to root-finding on arc transit times.  This
package computes the symmetric branch (all loops equal), the K-split branches
(K large loops, N-K small ones), their mass/energy observables, the
symmetry-breaking bifurcation point, and the linearized spectra with their
Morse/nullity indices.
"""

from .phase_plane import (
    P_STAR,
    E_STAR,
    EnergyLevel,
    energy_level,
    invariant,
    potential,
    potential_deriv,
    potential_second_deriv,
)
from .levelcurve import (
    DEFAULT_QUADRATURE,
    QuadratureSpec,
    WEIGHT_KERNELS,
    dT_minus_dq0,
    dT_plus_dq0,
    oracle_period_shoot,
    period_T_minus,
    period_T_plus,
    weighted_level_integral,
)
from .errors import BracketError, NumericsError, QuadratureError, ShootingError
from .symmetric_state import (
    SymmetricState,
    arcsech,
    dscript_T_dp0,
    mass_symmetric,
    script_M,
    script_T,
    solve_symmetric,
    solve_symmetric_at_mass,
    symmetric_level,
    symmetric_state_at_p0,
)
from .ksplit_states import (
    KSplitState,
    interval_q_big,
    ksplit_from_symmetric,
    mass_ksplit,
    match_q_big,
    q_small_from_q_big,
    solve_ksplit_at_eps,
    solve_ksplit_opposite,
    solve_ksplit_same,
)
from .profiles_observables import (
    LoopProfile,
    TailProfile,
    WaveProfile,
    energy_of_state,
    loop_energy_integral,
    loop_mass_integral,
    profile_energy,
    profile_mass,
    reconstruct_profile,
    tail_energy,
    tail_mass,
)
from .bifurcation import (
    BifurcationReport,
    DiagramRow,
    find_bifurcation,
    find_p_star_star,
    q_max,
    script_F,
    trace_diagram,
)
from .spectral import (
    SpectralReport,
    eps_star_spectral,
    laplacian_spectrum,
    morse_nullity,
    sp1_eigenvalues,
    sp2_eigenvalues,
    spectral_report,
    v0_tail,
)

__version__ = "0.1.0"
