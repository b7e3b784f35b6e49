"""Exception hierarchy shared across the package.

Argument/domain problems raise :class:`DomainError` (CLI exit code 2);
numerical failures such as a propagator run that violates its own validity
bound raise :class:`NumericalError` (CLI exit code 3).
"""


class DomainError(ValueError):
    """An argument lies outside the documented domain of an operation."""


class SingularityError(DomainError):
    """Evaluation requested exactly on a known singularity (Y0/log at r=0)."""


class GeometryError(DomainError):
    """A probe point cannot accommodate the finite-difference stencil."""


class DegenerateSpectrumError(DomainError):
    """The admissible spectral window [0, q_max] has zero length (speed=0)."""


class NumericalError(RuntimeError):
    """A numerical procedure cannot produce a trustworthy result."""


class PropagationConfigError(NumericalError):
    """Propagator settings violate the padded-box validity bound."""
