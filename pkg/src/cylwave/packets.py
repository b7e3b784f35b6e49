"""Wave packets built from dispersionless modes over the spectral window.

A packet is the integral over q in [0, q_max] of
``(A(q) e^{i k+ u} + B(q) e^{i k- u}) J0(sqrt(q) r)`` with u = z - v t.  All
q-integrals use Gauss-Legendre after the substitution q = kappa^2, which
removes the sqrt(q) kink from the Bessel argument and turns the dq/q weight
of the norm integral into an integrable 2 dkappa / kappa.

The window norm N(Z) truncates the z-integration of the norm expression to
|z| <= Z.  Its integrand is pointwise non-negative, so N(Z) grows without
bound as Z grows: these packets translate rigidly but cannot be normalized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSpectrumError, DomainError, NumericalError
from .modes import PhysicalParams
from .specialfn import bessel_j0, gauss_legendre

WEIGHTS_TABLE_HEADER = "# q  Re(A)  Im(A)  Re(B)  Im(B)"


@dataclass(frozen=True)
class PowerExpWeights:
    """Spectral densities A(q) = amp_a q^s e^{-beta q}, B likewise.

    The exponent floor s >= 1/2 keeps (|A|^2 + |B|^2)/q integrable at q=0.
    """

    amp_a: complex = 1.0 + 0j
    amp_b: complex = 1.0 + 0j
    exponent: float = 1.0
    decay: float = 2.0

    def __post_init__(self):
        if not (math.isfinite(self.exponent) and self.exponent >= 0.5):
            raise DomainError(f"exponent must be >= 0.5, got {self.exponent!r}")
        if not (math.isfinite(self.decay) and self.decay > 0.0):
            raise DomainError(f"decay must be positive, got {self.decay!r}")

    @property
    def kind(self) -> str:
        return "power_exp"

    def evaluate(self, q):
        q = np.asarray(q, dtype=float)
        if np.any(q < 0.0):
            raise DomainError("spectral weights are defined for q >= 0 only")
        base = np.power(q, self.exponent) * np.exp(-self.decay * q)
        return self.amp_a * base, self.amp_b * base


@dataclass(frozen=True)
class TabulatedWeights:
    """Sampled (q, A, B) triples with linear interpolation, no extrapolation."""

    q: np.ndarray
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        q = np.asarray(self.q, dtype=float)
        a = np.asarray(self.a, dtype=complex)
        b = np.asarray(self.b, dtype=complex)
        if q.ndim != 1 or q.size < 2 or a.shape != q.shape or b.shape != q.shape:
            raise DomainError("tabulated weights need matching 1-D q, A, B samples")
        if not (np.all(np.isfinite(q)) and np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
            raise DomainError("tabulated weights must be finite")
        if np.any(np.diff(q) <= 0.0):
            raise DomainError("tabulated q values must be strictly increasing")
        if q[0] != 0.0:
            raise DomainError("weight tables must start at q = 0")
        if a[0] != 0 or b[0] != 0:
            raise DomainError(
                "A(0) and B(0) must vanish so the 1/q norm weight stays integrable"
            )
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def kind(self) -> str:
        return "tabulated"

    def evaluate(self, qs):
        qs = np.asarray(qs, dtype=float)
        if np.any(qs < self.q[0]) or np.any(qs > self.q[-1]):
            raise DomainError(
                f"q outside the tabulated range [{self.q[0]}, {self.q[-1]}]; "
                "extrapolation is refused"
            )
        a = np.interp(qs, self.q, self.a.real) + 1j * np.interp(qs, self.q, self.a.imag)
        b = np.interp(qs, self.q, self.b.real) + 1j * np.interp(qs, self.q, self.b.imag)
        return a, b


SpectralWeights = PowerExpWeights | TabulatedWeights


def validate_weights_domain(weights: SpectralWeights, params: PhysicalParams) -> None:
    """Tabulated weights must span exactly [0, q_max] of the given params."""
    if isinstance(weights, TabulatedWeights):
        qmax = params.q_max
        if abs(weights.q[-1] - qmax) > 1e-9 * max(qmax, 1.0):
            raise DomainError(
                f"weight table ends at q={weights.q[-1]} but q_max={qmax}; "
                "tables must cover exactly [0, q_max]"
            )


def load_weights_table(path) -> TabulatedWeights:
    """Read the whitespace-separated `q Re(A) Im(A) Re(B) Im(B)` table."""
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 5:
                raise DomainError(f"weight table rows need 5 columns, got {line!r}")
            rows.append([float(p) for p in parts])
    if not rows:
        raise DomainError(f"no data rows in weight table {path}")
    data = np.asarray(rows, dtype=float)
    return TabulatedWeights(
        q=data[:, 0],
        a=data[:, 1] + 1j * data[:, 2],
        b=data[:, 3] + 1j * data[:, 4],
    )


def save_weights_table(weights: SpectralWeights, path, q_values=None) -> None:
    """Write the text table; presets are sampled on q_values."""
    if q_values is None:
        if not isinstance(weights, TabulatedWeights):
            raise DomainError("saving preset weights needs explicit q sample points")
        qs = weights.q
    else:
        qs = np.asarray(q_values, dtype=float)
    a, b = weights.evaluate(qs)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(WEIGHTS_TABLE_HEADER + "\n")
        for q, av, bv in zip(qs, np.atleast_1d(a), np.atleast_1d(b)):
            fh.write(
                f"{format(q, '.17g')}  {format(av.real, '.17g')}  {format(av.imag, '.17g')}"
                f"  {format(bv.real, '.17g')}  {format(bv.imag, '.17g')}\n"
            )


@dataclass(frozen=True)
class UniformGrid:
    """Inclusive uniform grid with n >= 2 points on [lo, hi]."""

    lo: float
    hi: float
    n: int

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)) or self.lo >= self.hi:
            raise DomainError(f"grid needs lo < hi, got [{self.lo!r}, {self.hi!r}]")
        if self.n < 2:
            raise DomainError(f"grid needs at least 2 points, got n={self.n!r}")

    @property
    def step(self) -> float:
        return (self.hi - self.lo) / (self.n - 1)

    def points(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.n)


@dataclass(frozen=True)
class Field:
    """Complex samples of the wave function on a (z, r) grid at one time."""

    values: np.ndarray  # shape (n_z, n_r), z-major
    z_grid: UniformGrid
    r_grid: UniformGrid
    time: float
    params: PhysicalParams

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != (self.z_grid.n, self.r_grid.n):
            raise DomainError(
                f"field shape {vals.shape} does not match grids "
                f"({self.z_grid.n}, {self.r_grid.n})"
            )
        if self.r_grid.lo != 0.0:
            raise DomainError("radial grid must start at r = 0")
        if not (np.all(np.isfinite(vals.real)) and np.all(np.isfinite(vals.imag))):
            raise NumericalError("field contains non-finite values")
        object.__setattr__(self, "values", vals)


def _spectral_rule(params: PhysicalParams, weights: SpectralWeights, n_nodes: int):
    """Shared kappa = sqrt(q) Gauss-Legendre discretization of [0, q_max]."""
    if not isinstance(n_nodes, (int, np.integer)) or n_nodes < 1:
        raise DomainError(f"node count must be a positive integer, got {n_nodes!r}")
    qmax = params.q_max
    if qmax <= 0.0:
        raise DegenerateSpectrumError(
            "q_max = (m v / hbar)^2 is zero (speed = 0): the spectral window "
            "degenerates and no packet can be formed"
        )
    validate_weights_domain(weights, params)
    rule = gauss_legendre(int(n_nodes), 0.0, math.sqrt(qmax))
    kappa = rule.nodes
    q = kappa * kappa
    a, b = weights.evaluate(q)
    mv = params.mass * params.speed
    root = np.sqrt(np.maximum(mv * mv - q * params.hbar * params.hbar, 0.0))
    k_plus = (mv + root) / params.hbar
    k_minus = (mv - root) / params.hbar
    return kappa, rule.weights, q, a, b, k_plus, k_minus


def _packet_values(params, weights, n_nodes, z: np.ndarray, r: np.ndarray, t: float):
    kappa, w, _, a, b, k_plus, k_minus = _spectral_rule(params, weights, n_nodes)
    u = np.asarray(z, dtype=float) - params.speed * t
    axial = a[None, :] * np.exp(1j * np.outer(u, k_plus)) \
        + b[None, :] * np.exp(1j * np.outer(u, k_minus))
    radial = bessel_j0(np.outer(kappa, np.asarray(r, dtype=float)))
    return (axial * (2.0 * kappa * w)[None, :]) @ radial


def eval_packet(params: PhysicalParams, weights: SpectralWeights, n_nodes: int,
                z: float, r: float, t: float) -> complex:
    """Packet value at a single point (deterministic for fixed inputs)."""
    vals = _packet_values(params, weights, n_nodes, np.asarray([float(z)]),
                          np.asarray([float(r)]), float(t))
    return complex(vals[0, 0])


def eval_packet_grid(params: PhysicalParams, weights: SpectralWeights, n_nodes: int,
                     z_grid: UniformGrid, r_grid: UniformGrid, t: float) -> Field:
    """Packet sampled on the tensor grid; identical to pointwise evaluation."""
    if r_grid.lo != 0.0:
        raise DomainError("radial grid must start at r = 0")
    vals = _packet_values(params, weights, n_nodes, z_grid.points(), r_grid.points(), float(t))
    return Field(values=vals, z_grid=z_grid, r_grid=r_grid, time=float(t), params=params)


def norm_integrand(weights: SpectralWeights, params: PhysicalParams, z: float, q):
    """The curly-brace part of the norm expression, before the dq/q weight.

    |A|^2 + |B|^2 + 2 Re[A conj(B) exp(2 i z sqrt(m^2 v^2 - q hbar^2) / hbar)],
    which equals (|A|-|B|)^2 + 2|A||B|(1 + cos(phase)) and is never negative.
    """
    qa = np.asarray(q, dtype=float)
    if np.any(qa <= 0.0) or np.any(qa > params.q_max):
        raise DomainError(
            f"norm integrand needs 0 < q <= q_max={params.q_max}; the 1/q weight "
            "is applied by the caller at interior quadrature nodes only"
        )
    a, b = weights.evaluate(qa)
    mv = params.mass * params.speed
    root = np.sqrt(np.maximum(mv * mv - qa * params.hbar * params.hbar, 0.0))
    cross = a * np.conj(b) * np.exp(2j * z * root / params.hbar)
    out = np.abs(a) ** 2 + np.abs(b) ** 2 + 2.0 * np.real(cross)
    return float(out) if qa.ndim == 0 else out


def window_norm(params: PhysicalParams, weights: SpectralWeights, half_length: float,
                n_q: int, n_z: int) -> float:
    """2 pi * int_{-Z}^{Z} dz int_0^{q_max} (brace) dq / q by Gauss-Legendre."""
    if not (math.isfinite(half_length) and half_length > 0.0):
        raise DomainError(f"window half-length must be positive, got {half_length!r}")
    if not isinstance(n_z, (int, np.integer)) or n_z < 1:
        raise DomainError(f"n_z must be a positive integer, got {n_z!r}")
    kappa, wk, q, a, b, *_ = _spectral_rule(params, weights, int(n_q))
    zrule = gauss_legendre(int(n_z), -float(half_length), float(half_length))
    mv = params.mass * params.speed
    root = np.sqrt(np.maximum(mv * mv - q * params.hbar * params.hbar, 0.0))
    osc = np.exp(2j * np.outer(zrule.nodes, root / params.hbar))
    brace = (np.abs(a) ** 2 + np.abs(b) ** 2)[None, :] + 2.0 * np.real(a * np.conj(b) * osc)
    # dq/q becomes 2 dkappa / kappa under q = kappa^2
    return 2.0 * np.pi * float(np.einsum("i,ij,j->", zrule.weights, brace, 2.0 * wk / kappa))


@dataclass(frozen=True)
class NormScanResult:
    """Window norms over increasing half-lengths plus a linear-fit summary."""

    half_lengths: tuple[float, ...]
    norms: tuple[float, ...]
    slope: float
    intercept: float
    r_squared: float

    def __post_init__(self):
        norms = np.asarray(self.norms)
        if np.any(norms < 0.0):
            raise NumericalError("window norms must be non-negative")
        if np.any(np.diff(norms) < 0.0):
            raise NumericalError("window norms must be non-decreasing in Z")


def norm_scan(params: PhysicalParams, weights: SpectralWeights, half_lengths,
              n_q: int, n_z: int) -> NormScanResult:
    """Scan N(Z) over the given half-lengths and fit N = slope * Z + intercept."""
    zs = [float(z) for z in half_lengths]
    if len(zs) < 3:
        raise DomainError("norm scan needs at least 3 half-lengths for a fit")
    if any(z <= 0.0 for z in zs) or any(b <= a for a, b in zip(zs, zs[1:])):
        raise DomainError("half-lengths must be positive and strictly increasing")
    norms = [window_norm(params, weights, z, n_q, n_z) for z in zs]
    design = np.vstack([zs, np.ones(len(zs))]).T
    (slope, intercept), *_ = np.linalg.lstsq(design, np.asarray(norms), rcond=None)
    fitted = design @ np.array([slope, intercept])
    ss_res = float(np.sum((np.asarray(norms) - fitted) ** 2))
    ss_tot = float(np.sum((np.asarray(norms) - np.mean(norms)) ** 2))
    r_squared = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return NormScanResult(
        half_lengths=tuple(zs),
        norms=tuple(float(n) for n in norms),
        slope=float(slope),
        intercept=float(intercept),
        r_squared=float(r_squared),
    )


def cylinder_weights(grid_z: UniformGrid, grid_r: UniformGrid):
    """Trapezoid weights for the cylindrical measure 2 pi r dr dz."""
    wz = np.full(grid_z.n, grid_z.step)
    wz[0] *= 0.5
    wz[-1] *= 0.5
    wr = grid_r.points() * grid_r.step
    wr[0] *= 0.5
    wr[-1] *= 0.5
    return wz, 2.0 * np.pi * wr


def direct_cylinder_norm(field: Field) -> float:
    """Trapezoid-rule <Psi|Psi> over the field's finite cylinder."""
    wz, wr = cylinder_weights(field.z_grid, field.r_grid)
    return float(np.einsum("i,ij,j->", wz, np.abs(field.values) ** 2, wr))


def save_field_csv(field: Field, path, comments=()) -> None:
    """Export as CSV columns z,r,re,im,abs2, row-major in z."""
    z = field.z_grid.points()
    r = field.r_grid.points()
    with open(path, "w", encoding="utf-8") as fh:
        for line in comments:
            fh.write(f"# {line}\n")
        fh.write("z,r,re,im,abs2\n")
        for i in range(field.z_grid.n):
            row = field.values[i]
            for j in range(field.r_grid.n):
                v = row[j]
                fh.write(
                    f"{format(z[i], '.17g')},{format(r[j], '.17g')},"
                    f"{format(v.real, '.17g')},{format(v.imag, '.17g')},"
                    f"{format(v.real * v.real + v.imag * v.imag, '.17g')}\n"
                )
