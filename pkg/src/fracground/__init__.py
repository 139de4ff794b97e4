"""Ground states of fractional equations with double power nonlinearities.

``D^sigma phi + c phi - f(phi) = 0`` on the line, discretised on a large
periodic grid with a Fourier-multiplier fractional Laplacian.
"""

from .errors import (
    AuditFailure,
    DivergenceError,
    DomainError,
    FracGroundError,
    GridMismatchError,
    NoRootError,
    PositivityViolation,
    ShapeError,
    StationarityError,
    ThresholdError,
    TrivialityError,
    UnsupportedVariantError,
)
from .functionals import ProblemSpec, action, c_zero, nehari, pohozaev_residual
from .solvers import (
    GroundStateReport,
    SolverConfig,
    minimize_nehari,
    minimize_pohozaev,
    nehari_scaling,
    petviashvili,
)
from .spectral import Field, GridSpec, apply_symbol, kernel, resolvent

__version__ = "0.1.0"

__all__ = [
    "AuditFailure",
    "DivergenceError",
    "DomainError",
    "Field",
    "FracGroundError",
    "GridMismatchError",
    "GridSpec",
    "GroundStateReport",
    "NoRootError",
    "PositivityViolation",
    "ProblemSpec",
    "ShapeError",
    "SolverConfig",
    "StationarityError",
    "ThresholdError",
    "TrivialityError",
    "UnsupportedVariantError",
    "action",
    "apply_symbol",
    "c_zero",
    "kernel",
    "minimize_nehari",
    "minimize_pohozaev",
    "nehari",
    "nehari_scaling",
    "petviashvili",
    "pohozaev_residual",
    "resolvent",
]
