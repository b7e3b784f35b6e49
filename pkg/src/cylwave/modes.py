"""Single dispersionless modes of the free-particle Schrodinger equation.

A mode is the separable solution R(r) f(z - v t): the axial factor is a pair
of unit-modulus complex exponentials whose wavenumbers k+ and k- share the
phase speed v, and the radial factor is J0 (plus an optional Y0/log part that
only the unchecked constructor admits, since it blows up on the axis).  The
separation constant q must sit in [0, (m v / hbar)^2] for the mode to stay
bounded; both interval ends are included.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SingularityError
from .specialfn import bessel_j0, bessel_y0


@dataclass(frozen=True)
class PhysicalParams:
    """Particle mass, ansatz phase speed, and Planck constant."""

    mass: float = 1.0
    speed: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        for name in ("mass", "speed", "hbar"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"PhysicalParams.{name} must be finite")
        if self.mass <= 0.0:
            raise DomainError(f"mass must be positive, got {self.mass}")
        if self.hbar <= 0.0:
            raise DomainError(f"hbar must be positive, got {self.hbar}")

    @property
    def q_max(self) -> float:
        """Upper end of the admissible spectral window, (m v / hbar)^2."""
        ratio = self.mass * self.speed / self.hbar
        return ratio * ratio


def admissible(params: PhysicalParams, q: float) -> bool:
    """True iff 0 <= q <= q_max, the window where modes stay bounded."""
    return bool(0.0 <= q <= params.q_max)


@dataclass(frozen=True)
class AxialWavenumbers:
    """The two axial rates (m v +/- sqrt(m^2 v^2 - q hbar^2)) / hbar."""

    k_plus: float
    k_minus: float


def axial_wavenumbers(params: PhysicalParams, q: float) -> AxialWavenumbers:
    """Both real axial wavenumbers of an admissible mode.

    Their sum is 2 m v / hbar independently of q.
    """
    if not admissible(params, q):
        raise DomainError(
            f"q={q!r} outside the admissible window 0 <= q <= q_max={params.q_max!r}"
        )
    mv = params.mass * params.speed
    root = math.sqrt(max(mv * mv - q * params.hbar * params.hbar, 0.0))
    return AxialWavenumbers(
        k_plus=(mv + root) / params.hbar,
        k_minus=(mv - root) / params.hbar,
    )


@dataclass(frozen=True)
class Mode:
    """One separable solution: spectral parameter q plus coefficients.

    c1/c2 weight the slow/fast axial exponentials, c3/c4 the J0/Y0 radial
    parts.  Direct construction performs no checks; use :meth:`bounded` for
    the checked constructor and :meth:`unchecked` when deliberately building
    a mode that blows up (tests demonstrating why c4 must vanish).
    """

    q: float
    c1: complex
    c2: complex
    c3: complex
    c4: complex = 0j

    @classmethod
    def bounded(cls, params: PhysicalParams, q: float, c1: complex, c2: complex,
                c3: complex, c4: complex = 0j) -> "Mode":
        if not admissible(params, q):
            raise DomainError(
                f"q={q!r} outside the admissible window 0 <= q <= q_max={params.q_max!r}"
            )
        if c4 != 0:
            raise DomainError(
                "bounded modes require c4 = 0: Y0 (or log r at q=0) diverges on the axis"
            )
        return cls(q=float(q), c1=complex(c1), c2=complex(c2), c3=complex(c3), c4=0j)

    @classmethod
    def unchecked(cls, q: float, c1: complex, c2: complex, c3: complex,
                  c4: complex = 0j) -> "Mode":
        return cls(q=float(q), c1=complex(c1), c2=complex(c2), c3=complex(c3),
                   c4=complex(c4))


def eval_axial(params: PhysicalParams, mode: Mode, u: float) -> complex:
    """Axial factor c1 e^{i k- u} + c2 e^{i k+ u} at comoving coordinate u.

    c1 rides the slow branch and c2 the fast one, so the q = 0 limit reads
    c1 + c2 exp(2 i m v u / hbar): dropping the constant part (c1 = 0) leaves
    the plane wave whose phase speed is half its group speed.
    """
    k = axial_wavenumbers(params, mode.q)
    return mode.c1 * cmath.exp(1j * k.k_minus * u) + mode.c2 * cmath.exp(1j * k.k_plus * u)


def eval_radial(params: PhysicalParams, mode: Mode, r: float) -> complex:
    """Radial factor c3 J0(sqrt(q) r) + c4 Y0(sqrt(q) r), or c3 + c4 ln r at q=0."""
    if not math.isfinite(r) or r < 0.0:
        raise DomainError(f"radius must be finite and >= 0, got {r!r}")
    if mode.q < 0.0:
        raise DomainError(f"radial profile undefined for q < 0, got q={mode.q!r}")
    if mode.q == 0.0:
        if mode.c4 == 0:
            return complex(mode.c3)
        if r == 0.0:
            raise SingularityError("log(r) radial part diverges at r=0; set c4=0")
        return mode.c3 + mode.c4 * math.log(r)
    x = math.sqrt(mode.q) * r
    value = mode.c3 * bessel_j0(x)
    if mode.c4 != 0:
        if r == 0.0:
            raise SingularityError("Y0 radial part diverges at r=0; set c4=0")
        value = value + mode.c4 * bessel_y0(x)
    return complex(value)


def eval_mode(params: PhysicalParams, mode: Mode, z: float, r: float, t: float) -> complex:
    """Full mode value R(r) f(z - v t); depends on z, t only through z - v t."""
    u = z - params.speed * t
    return eval_radial(params, mode, r) * eval_axial(params, mode, u)


def mode_sampler(params: PhysicalParams, mode: Mode):
    """Vectorized (z, r, t) -> values evaluator for residual probes.

    Matches eval_mode pointwise; r arrays must satisfy the same domain rules.
    """
    k = axial_wavenumbers(params, mode.q)

    def sample(z, r, t):
        z = np.asarray(z, dtype=float)
        r = np.asarray(r, dtype=float)
        if np.any(r < 0.0):
            raise DomainError("radius must be >= 0")
        u = z - params.speed * t
        axial = mode.c1 * np.exp(1j * k.k_minus * u) + mode.c2 * np.exp(1j * k.k_plus * u)
        if mode.q == 0.0:
            radial = np.full(np.shape(r), complex(mode.c3), dtype=complex)
            if mode.c4 != 0:
                if np.any(r == 0.0):
                    raise SingularityError("log(r) radial part diverges at r=0")
                radial = radial + mode.c4 * np.log(r)
        else:
            x = math.sqrt(mode.q) * r
            radial = mode.c3 * bessel_j0(x)
            if mode.c4 != 0:
                if np.any(r == 0.0):
                    raise SingularityError("Y0 radial part diverges at r=0")
                radial = radial + mode.c4 * bessel_y0(x)
        return radial * axial

    return sample
