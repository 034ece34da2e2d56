"""Steady states and excitation localization in weakly driven chiral waveguide arrays."""

__version__ = "0.1.0"

from .errors import (
    DomainError,
    NearFieldWarning,
    OverlappingSets,
    SingularSystem,
    ValidationError,
    ZeroExcitation,
)
from .model import (
    ArrayGeometry,
    CouplingMatrix,
    CouplingParams,
    DriveScheme,
    build_coupling_matrix,
    build_drive_vector,
    build_geometry,
    central_site,
    make_asymmetric_scheme,
    make_custom_scheme,
    make_defect_scheme,
    make_uniform_scheme,
)
from .solver import SteadyState, normalized_populations, solve_steady_state
from .dynamics import TrajectoryRecord, integrate
from .metrics import MetricSet, compute_ipr, compute_iipr, compute_metrics, compute_riel, interface_sites
from .analytics import (
    AnalyticDefectSolution,
    analytic_defect_amplitudes,
    analytic_defect_solution,
    analytic_pm,
    analytic_xi_max,
    diagonal_angles,
    predict_riel_minima,
)
from .sweep import Section, SweepAxis, SweepResult, SweepSpec, cross_section, diagonal_section, run_sweep

__all__ = [
    "__version__",
    "AnalyticDefectSolution",
    "ArrayGeometry",
    "CouplingMatrix",
    "CouplingParams",
    "DomainError",
    "DriveScheme",
    "MetricSet",
    "NearFieldWarning",
    "OverlappingSets",
    "Section",
    "SingularSystem",
    "SteadyState",
    "SweepAxis",
    "SweepResult",
    "SweepSpec",
    "TrajectoryRecord",
    "ValidationError",
    "ZeroExcitation",
    "analytic_defect_amplitudes",
    "analytic_defect_solution",
    "analytic_pm",
    "analytic_xi_max",
    "build_coupling_matrix",
    "build_drive_vector",
    "build_geometry",
    "central_site",
    "compute_ipr",
    "compute_iipr",
    "compute_metrics",
    "compute_riel",
    "cross_section",
    "diagonal_angles",
    "diagonal_section",
    "integrate",
    "interface_sites",
    "make_asymmetric_scheme",
    "make_custom_scheme",
    "make_defect_scheme",
    "make_uniform_scheme",
    "normalized_populations",
    "predict_riel_minima",
    "run_sweep",
    "solve_steady_state",
]
