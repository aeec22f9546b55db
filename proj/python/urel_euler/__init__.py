"""Ultra-relativistic Euler equations: state algebra, fluxes, radial and self-similar solvers, DGSEM benchmarks."""

from ._core import (
    DegenerateState,
    InvalidRadialState,
    NoShockFound,
    OriginUndefined,
    SonicDenominator,
    UnrecoverableVacuum,
    UrelError,
    c_of_ab,
    cons_from_prim,
    ec_flux,
    entropy,
    entropy_experiment,
    entropy_flux,
    entropy_hessian,
    entropy_variables,
    flux_jacobian,
    flux_potential,
    physical_flux,
    prim_from_cons,
    reference_profile,
    run_benchmark,
    rusanov_flux,
    shock_solution,
    table2,
    theta_inv,
    theta_map,
)

__all__ = [name for name in dir() if not name.startswith("_")]
