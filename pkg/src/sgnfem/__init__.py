"""Galerkin finite element solver for the Serre-Green-Naghdi equations."""

__version__ = "0.1.0"

from .mesh import Mesh, make_uniform_mesh
from .quadrature import QuadratureRule, gauss_legendre_rule
from .banded import BandedSymMatrix, solve_banded_spd
from .spaces import (
    CoefficientVector,
    Family,
    FunctionSpace,
    Trace,
    assemble_gram,
    default_rule,
    eval_basis,
    eval_field,
    l2_project,
    lump_mass,
)
from .bathymetry import Bathymetry, DiscreteBathymetry
from .solitary import SolitaryWave
from .assembly import (
    AssemblyContext,
    SgnState,
    assemble_momentum_matrix,
    continuity_rhs,
    energy_integral,
    momentum_rhs,
    nonlinear_discrete_laplacian,
)
from .stepper import RunConfig, RunResult, rk4_step, rkf45_run, run
from .scenarios import Scenario, prepare, scenario, scenario_names
from .diagnostics import (
    ConvergenceTable,
    GaugeRecord,
    convergence_rate,
    crest_point,
    error_norm,
    fit_shoaling_exponent,
    record_gauges,
    reflection_equivalence,
    wall_runup,
)
from .config import Config, emit_config, load_config, parse_config

__all__ = [
    "Mesh",
    "make_uniform_mesh",
    "QuadratureRule",
    "gauss_legendre_rule",
    "BandedSymMatrix",
    "solve_banded_spd",
    "CoefficientVector",
    "Family",
    "FunctionSpace",
    "Trace",
    "assemble_gram",
    "default_rule",
    "eval_basis",
    "eval_field",
    "l2_project",
    "lump_mass",
    "Bathymetry",
    "DiscreteBathymetry",
    "SolitaryWave",
    "AssemblyContext",
    "SgnState",
    "assemble_momentum_matrix",
    "continuity_rhs",
    "energy_integral",
    "momentum_rhs",
    "nonlinear_discrete_laplacian",
    "RunConfig",
    "RunResult",
    "rk4_step",
    "rkf45_run",
    "run",
    "Scenario",
    "prepare",
    "scenario",
    "scenario_names",
    "ConvergenceTable",
    "GaugeRecord",
    "convergence_rate",
    "crest_point",
    "error_norm",
    "fit_shoaling_exponent",
    "record_gauges",
    "reflection_equivalence",
    "wall_runup",
    "Config",
    "emit_config",
    "load_config",
    "parse_config",
    "__version__",
]
