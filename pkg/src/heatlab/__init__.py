"""Discrete heat flow on the circle and the lazy cyclic random walk behind it.

Finite grids stand in for the continuum: a ``2*eta``-point circle with
counting measure, central differences, a discrete Fourier transform, an
explicit heat scheme with its spectral closed form, the cyclic chain that
the scheme reduces to at stencil weight 1/3, and an exact rational
reverse-martingale extension of that chain's density process.
"""
from .chain import (
    GENERAL,
    ODD,
    CouplingTail,
    CyclicChain,
    Distribution,
    MixingBound,
    coupling_tail_exact,
    delta_n,
    eps_n,
    evolve,
    mixing_bound,
    n_step_matrix,
    simulate_meeting_time,
    steps_to_equilibrium,
    tv_gap,
)
from .exceptions import (
    DimensionError,
    DomainError,
    DomainWarning,
    HeatlabError,
    InvalidVariantError,
    ParityError,
    RangeError,
    ResourceError,
    StabilityError,
)
from .fourier import (
    FourierCoeffs,
    decay_report,
    derivative_coeff_identity_check,
    exp_grid,
    fourier_coeffs,
    inverse,
    modes,
    phi,
    psi,
    restricted_coeff_identity_check,
    restricted_coeffs,
    symbols,
    theta,
    u,
)
from .grid import (
    CircleGrid,
    GridFunction,
    SpaceTimeField,
    TimeGrid,
    calculus_identity_residuals,
    d2_dx2,
    d_dt,
    d_dx,
    d_dx_field,
    field_identity_residuals,
    integrate,
    integrate_field,
    restrict,
    sample,
    shift,
    shift_t,
    shift_x,
)
from .heat import (
    ClassicalSolution,
    HeatSolution,
    SchemeParams,
    classical_solution,
    compare_to_classical,
    comparison_report,
    equilibrium_gap,
    ftcs_step,
    markov_equivalence_check,
    solve_spectral,
    solve_time_domain,
    sublattice_means,
)
from .martingale import (
    AssociationTable,
    ExtendedProcess,
    ProcessGrid,
    build_association,
    build_process,
    conditional_expectation,
    extend_process,
    verify_distribution_equality,
    verify_reverse_martingale,
)
from .presets import get_preset, presets

__version__ = "0.1.0"
