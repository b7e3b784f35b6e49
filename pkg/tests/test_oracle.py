"""Residual checker and Crank-Nicolson propagator."""

import math

import numpy as np
import pytest

import reference as ref
from cylwave.errors import DomainError, GeometryError, PropagationConfigError
from cylwave.experiments import packet_sampler
from cylwave.modes import Mode, PhysicalParams, mode_sampler
from cylwave.oracle import (
    Boundary,
    PropagatorConfig,
    gaussian_comparator,
    measured_width,
    overlap,
    propagate,
    propagate_line,
    restrict_field,
    schrodinger_residual,
)
from cylwave.packets import (
    Field,
    PowerExpWeights,
    UniformGrid,
    direct_cylinder_norm,
    eval_packet_grid,
)

UNIT = PhysicalParams(1.0, 1.0, 1.0)
DEFAULT = PowerExpWeights()
PROBES = [(0.3, 0.0), (1.1, 1.4), (-2.0, 2.7), (0.0, 0.5)]


def test_residual_zero_field():
    report = schrodinger_residual(UNIT, lambda z, r, t: np.zeros_like(z, dtype=complex),
                                  PROBES, 0.0, (1e-3, 1e-3, 1e-3))
    assert report.max_abs == 0.0
    assert report.scale == 0.0
    assert report.relative_max == 0.0


def test_residual_plane_wave_exact_solution():
    mode = Mode.bounded(UNIT, 0.0, 0j, 1.0, 1.0)
    report = schrodinger_residual(UNIT, mode_sampler(UNIT, mode), PROBES, 0.2,
                                  (1e-3, 1e-3, 1e-3))
    assert report.scale == pytest.approx(2.0, rel=1e-6)  # |H psi| = 2 m v^2 |psi|
    assert report.relative_max < 1e-8


def test_residual_fourth_order_convergence_mode():
    mode = Mode.bounded(UNIT, 0.73, 0.4 - 0.2j, 0.8 + 0.1j, 1.0)
    sampler = mode_sampler(UNIT, mode)
    res = [schrodinger_residual(UNIT, sampler, PROBES, 0.1, (h, h, h)).max_abs
           for h in (0.2, 0.1)]
    assert 10.0 <= res[0] / res[1] <= 24.0


def test_residual_fourth_order_convergence_packet():
    sampler = packet_sampler(UNIT, DEFAULT, 128)
    res = [schrodinger_residual(UNIT, sampler, PROBES, 0.3, (h, h, h)).max_abs
           for h in (0.2, 0.1)]
    assert 10.0 <= res[0] / res[1] <= 24.0


def test_residual_geometry_and_argument_errors():
    sampler = mode_sampler(UNIT, Mode.bounded(UNIT, 0.0, 0j, 1.0, 1.0))
    with pytest.raises(GeometryError):
        schrodinger_residual(UNIT, sampler, [(0.0, 5e-4)], 0.0, (1e-3, 1e-3, 1e-3))
    with pytest.raises(GeometryError):
        schrodinger_residual(UNIT, sampler, [(0.0, -1.0)], 0.0, (1e-3, 1e-3, 1e-3))
    with pytest.raises(DomainError):
        schrodinger_residual(UNIT, sampler, [(0.0, 0.0)], 0.0, (0.0, 1e-3, 1e-3))
    with pytest.raises(DomainError):
        schrodinger_residual(UNIT, sampler, [], 0.0, (1e-3, 1e-3, 1e-3))


def test_propagator_config_validation():
    with pytest.raises(DomainError):
        PropagatorConfig(dt=0.0, steps=1)
    with pytest.raises(DomainError):
        PropagatorConfig(dt=0.1, steps=0)
    with pytest.raises(DomainError):
        PropagatorConfig(dt=0.1, steps=1, pad_fraction=0.1)
    cfg = PropagatorConfig(dt=0.1, steps=10)
    assert cfg.boundary is Boundary.DIRICHLET_PADDED


def _small_box(nz=201, nr=121, lz=20.0, rmax=12.0):
    return UniformGrid(-lz, lz, nz), UniformGrid(0.0, rmax, nr)


def test_propagate_zero_field_stays_zero():
    zg, rg = _small_box()
    zero = Field(np.zeros((zg.n, rg.n), complex), zg, rg, 0.0, UNIT)
    out = propagate(zero, PropagatorConfig(dt=0.01, steps=5))
    assert np.all(out.values == 0)
    assert out.time == pytest.approx(0.05)


def test_propagate_box_invariant_enforced():
    zg, rg = _small_box()
    field = eval_packet_grid(UNIT, DEFAULT, 64, zg, rg, 0.0)
    with pytest.raises(PropagationConfigError):
        propagate(field, PropagatorConfig(dt=0.1, steps=100, pad_fraction=0.2))


def test_plane_wave_phase_advance_periodic():
    # k = 2 m v / hbar = 2 on a periodic line: energy 2 m v^2, phase e^{-2it}
    length = math.pi
    n = 6284
    dz = length / n
    z = np.arange(n) * dz
    psi0 = np.exp(2j * z)
    steps = 2500
    psi1 = propagate_line(psi0, dz, UNIT, dt=1.0 / steps, steps=steps, periodic=True)
    expected = psi0 * np.exp(-2j)
    assert float(np.max(np.abs(psi1 - expected))) < 1e-6


def test_gaussian_comparator_formula():
    assert gaussian_comparator(1.0, UNIT, 0.0) == 1.0
    assert gaussian_comparator(1.0, UNIT, 2.0) == pytest.approx(math.sqrt(2.0), rel=1e-15)
    assert gaussian_comparator(1.0, UNIT, -2.0) == gaussian_comparator(1.0, UNIT, 2.0)
    widths = [gaussian_comparator(1.0, UNIT, t) for t in (0.0, 0.5, 1.0, 2.0, 4.0)]
    assert all(b > a for a, b in zip(widths, widths[1:]))
    with pytest.raises(DomainError):
        gaussian_comparator(0.0, UNIT, 1.0)


def test_gaussian_spreading_matches_prediction():
    sigma0 = 1.0
    half = 18.0
    n = 1801
    z = np.linspace(-half, half, n)
    dz = z[1] - z[0]
    psi0 = np.exp(-z * z / (4.0 * sigma0 * sigma0)).astype(complex)
    assert measured_width(z, psi0) == pytest.approx(sigma0, rel=1e-6)
    psi1 = propagate_line(psi0, dz, UNIT, dt=2e-3, steps=1000)
    predicted = gaussian_comparator(sigma0, UNIT, 2.0)
    assert abs(measured_width(z, psi1) - predicted) / predicted < 0.01


def test_overlap_identities():
    zg, rg = _small_box(nz=101, nr=61, lz=10.0, rmax=6.0)
    field = eval_packet_grid(UNIT, DEFAULT, 64, zg, rg, 0.0)
    assert abs(overlap(field, field) - 1.0) < 1e-12
    negated = Field(-field.values, zg, rg, 0.0, UNIT)
    assert abs(overlap(field, negated) + 1.0) < 1e-12
    shifted = eval_packet_grid(UNIT, DEFAULT, 64, zg, rg, 2.0)
    assert abs(overlap(field, shifted)) < 1.0
    other = eval_packet_grid(UNIT, DEFAULT, 64, UniformGrid(-10.0, 10.0, 99), rg, 0.0)
    with pytest.raises(DomainError):
        overlap(field, other)
    zero = Field(np.zeros((zg.n, rg.n), complex), zg, rg, 0.0, UNIT)
    with pytest.raises(DomainError):
        overlap(field, zero)


def test_restrict_field_window():
    zg, rg = _small_box(nz=101, nr=51, lz=10.0, rmax=10.0)
    field = eval_packet_grid(UNIT, DEFAULT, 64, zg, rg, 0.0)
    inner = restrict_field(field, 0.2)
    assert inner.z_grid.lo >= -8.0 and inner.z_grid.hi <= 8.0
    assert inner.r_grid.hi <= 8.0
    assert inner.values.shape == (inner.z_grid.n, inner.r_grid.n)


def test_dispersionless_packet_propagation_short_run():
    zg = UniformGrid(-30.0, 30.0, 601)
    rg = UniformGrid(0.0, 30.0, 301)
    initial = eval_packet_grid(UNIT, DEFAULT, 256, zg, rg, 0.0)
    config = PropagatorConfig(dt=0.01, steps=50, pad_fraction=0.2)
    evolved = propagate(initial, config)
    reference_field = eval_packet_grid(UNIT, DEFAULT, 256, zg, rg, 0.5)
    ov = overlap(restrict_field(evolved, 0.2), restrict_field(reference_field, 0.2))
    assert abs(ov) >= 0.999

    walls = initial.values.copy()
    walls[0, :] = 0.0
    walls[-1, :] = 0.0
    walls[:, -1] = 0.0
    start = Field(walls, zg, rg, 0.0, UNIT)
    drift = abs(direct_cylinder_norm(evolved) - direct_cylinder_norm(start)) \
        / direct_cylinder_norm(start)
    assert drift < 1e-6


def test_propagated_field_stays_even_at_axis():
    zg = UniformGrid(-15.0, 15.0, 301)
    rg = UniformGrid(0.0, 15.0, 151)
    initial = eval_packet_grid(UNIT, DEFAULT, 128, zg, rg, 0.0)
    evolved = propagate(initial, PropagatorConfig(dt=0.01, steps=20, pad_fraction=0.2))
    # radial derivative on the axis from a one-sided degree-7 fit
    weights = ref.one_sided_derivative_weights(8, evolved.r_grid.step)
    deriv = evolved.values[:, :8] @ weights
    scale = float(np.max(np.abs(evolved.values)))
    assert float(np.max(np.abs(deriv))) < 1e-6 * scale
