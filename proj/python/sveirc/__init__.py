"""Six-compartment epidemic model with imperfect vaccination and
environmental (fomite) transmission: simulation, equilibrium analysis,
reproduction number, bifurcation diagnostics, fitting and sensitivity."""

from ._core import (
    BranchRow,
    EndemicState,
    FitResult,
    ModelError,
    ModelParams,
    ObservedSeries,
    StateVector,
    Trajectory,
    backward_condition,
    beta_star,
    bifurcation_scan,
    criticality_eigenvectors,
    disease_free_state,
    endemic_polynomial_value,
    endemic_steady_states,
    equilibrium_report,
    fit,
    integrate,
    jacobian_at,
    load_initial_state,
    load_observed_csv,
    load_params,
    next_generation_matrices,
    normal_form_coefficients,
    objective,
    r0,
    response_g,
    rhs,
    routh_hurwitz,
    sensitivity_index,
    sensitivity_table,
    synthesize_observations,
    total_population,
    vaccination_trend,
)

__all__ = [
    "BranchRow",
    "EndemicState",
    "FitResult",
    "ModelError",
    "ModelParams",
    "ObservedSeries",
    "StateVector",
    "Trajectory",
    "backward_condition",
    "beta_star",
    "bifurcation_scan",
    "criticality_eigenvectors",
    "disease_free_state",
    "endemic_polynomial_value",
    "endemic_steady_states",
    "equilibrium_report",
    "fit",
    "integrate",
    "jacobian_at",
    "load_initial_state",
    "load_observed_csv",
    "load_params",
    "next_generation_matrices",
    "normal_form_coefficients",
    "objective",
    "r0",
    "response_g",
    "rhs",
    "routh_hurwitz",
    "sensitivity_index",
    "sensitivity_table",
    "synthesize_observations",
    "total_population",
    "vaccination_trend",
]
