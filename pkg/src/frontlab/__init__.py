"""frontlab: a numerical laboratory for fronts in a three-component
singularly perturbed reaction-diffusion system.

The package covers steady fronts and their leading spectra, the closed-form
singular-limit quantities (existence condition, Evans function, generalized
eigenfunctions), the symmetric Bogdanov-Takens normal form and its parameter
unfolding, the reduced planar velocity dynamics, freezing-method time
integration, and Newton-based continuation with bifurcation detection.
"""

from .params import Params
from .grid import Grid, make_grid
from .model import (
    FieldState,
    jacobian,
    mass_apply,
    mass_inverse_apply,
    reflect,
    residual,
)
from .asymptotics import (
    ClosedEigenfunctions,
    EvansCoeffs,
    ExistenceTaylor,
    KappaTriple,
    asymptotic_front,
    center_params,
    closed_eigenfunctions,
    evans_eval,
    evans_roots,
    evans_taylor_aij,
    existence_gamma,
    kappas,
    organizing_center,
    taylor_existence,
)
from .normal_form import (
    NormalFormCoeffs,
    UnfoldingMap,
    classify_region,
    g_to_params,
    normal_form_coeffs,
    params_to_g,
    unfolding_map,
)
from .reduced import (
    CycleReport,
    ReducedParams,
    ReducedState,
    equilibria_and_stability,
    integrate,
    limit_cycle_scan,
    reduced_rhs,
)

__version__ = "0.1.0"

__all__ = [
    "Params",
    "Grid",
    "make_grid",
    "FieldState",
    "residual",
    "jacobian",
    "mass_apply",
    "mass_inverse_apply",
    "reflect",
    "KappaTriple",
    "EvansCoeffs",
    "ExistenceTaylor",
    "ClosedEigenfunctions",
    "kappas",
    "organizing_center",
    "center_params",
    "asymptotic_front",
    "existence_gamma",
    "taylor_existence",
    "evans_eval",
    "evans_taylor_aij",
    "evans_roots",
    "closed_eigenfunctions",
    "NormalFormCoeffs",
    "UnfoldingMap",
    "normal_form_coeffs",
    "unfolding_map",
    "g_to_params",
    "params_to_g",
    "classify_region",
    "ReducedState",
    "ReducedParams",
    "CycleReport",
    "reduced_rhs",
    "integrate",
    "equilibria_and_stability",
    "limit_cycle_scan",
]
