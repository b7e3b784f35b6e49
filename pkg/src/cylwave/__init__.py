"""Dispersionless cylindrical wave packets of the free Schrodinger equation.

Library layout:

* :mod:`cylwave.specialfn` - J0/J1/Y0 and Gauss-Legendre quadrature
* :mod:`cylwave.modes` - single separable modes and their admissibility window
* :mod:`cylwave.packets` - spectral superpositions, window norms, divergence scans
* :mod:`cylwave.oracle` - finite-difference residual and Crank-Nicolson check
* :mod:`cylwave.experiments` - reproducible runners behind the CLI and service
"""

__version__ = "0.1.0"

from .errors import (
    DegenerateSpectrumError,
    DomainError,
    GeometryError,
    NumericalError,
    PropagationConfigError,
    SingularityError,
)
from .modes import (
    AxialWavenumbers,
    Mode,
    PhysicalParams,
    admissible,
    axial_wavenumbers,
    eval_axial,
    eval_mode,
    eval_radial,
)
from .oracle import (
    Boundary,
    PropagatorConfig,
    ResidualReport,
    gaussian_comparator,
    overlap,
    propagate,
    propagate_line,
    schrodinger_residual,
)
from .packets import (
    Field,
    NormScanResult,
    PowerExpWeights,
    TabulatedWeights,
    UniformGrid,
    direct_cylinder_norm,
    eval_packet,
    eval_packet_grid,
    load_weights_table,
    norm_integrand,
    norm_scan,
    save_field_csv,
    save_weights_table,
    window_norm,
)
from .specialfn import QuadratureRule, bessel_j0, bessel_j1, bessel_y0, gauss_legendre

__all__ = [
    "__version__",
    "AxialWavenumbers",
    "Boundary",
    "DegenerateSpectrumError",
    "DomainError",
    "Field",
    "GeometryError",
    "Mode",
    "NormScanResult",
    "NumericalError",
    "PhysicalParams",
    "PowerExpWeights",
    "PropagationConfigError",
    "PropagatorConfig",
    "QuadratureRule",
    "ResidualReport",
    "SingularityError",
    "TabulatedWeights",
    "UniformGrid",
    "admissible",
    "axial_wavenumbers",
    "bessel_j0",
    "bessel_j1",
    "bessel_y0",
    "direct_cylinder_norm",
    "eval_axial",
    "eval_mode",
    "eval_packet",
    "eval_packet_grid",
    "eval_radial",
    "gauss_legendre",
    "gaussian_comparator",
    "load_weights_table",
    "norm_integrand",
    "norm_scan",
    "overlap",
    "propagate",
    "propagate_line",
    "save_field_csv",
    "save_weights_table",
    "schrodinger_residual",
    "window_norm",
]
