"""Independent reference computations used by the tests.

Everything here is deliberately decoupled from the package implementation:
Bessel values come from straight ascending series summed in arbitrary
precision, zeros from bisection on those series, integrals from composite
quadrature or trapezoid rules.
"""

from __future__ import annotations

import numpy as np
from mpmath import mp, mpf

from cylwave.specialfn import bessel_j0, bessel_j1, gauss_legendre


def _dps_for(x: float) -> int:
    # series cancellation loses ~0.4343 |x| digits; keep ~25 spare
    return 30 + int(0.45 * abs(x))


def mp_j0(x: float) -> float:
    """J0 by its ascending series at adaptive precision."""
    with mp.workdps(_dps_for(x)):
        w = (mpf(x) / 2) ** 2
        term = mpf(1)
        total = mpf(1)
        k = 0
        while True:
            k += 1
            term *= -w / (k * k)
            total += term
            if abs(term) < mp.eps * 10 and k > abs(x) / 2:
                break
        return float(total)


def mp_j1(x: float) -> float:
    """J1 by its ascending series at adaptive precision."""
    with mp.workdps(_dps_for(x)):
        w = (mpf(x) / 2) ** 2
        term = mpf(x) / 2
        total = term
        k = 0
        while True:
            k += 1
            term *= -w / (k * (k + 1))
            total += term
            if abs(term) < mp.eps * 10 and k > abs(x) / 2:
                break
        return float(total)


def mp_y0(x: float) -> float:
    """Y0 by the log-coupled ascending series at adaptive precision."""
    with mp.workdps(_dps_for(x)):
        xm = mpf(x)
        w = (xm / 2) ** 2
        # J0 part
        term = mpf(1)
        j0 = mpf(1)
        k = 0
        while True:
            k += 1
            term *= -w / (k * k)
            j0 += term
            if abs(term) < mp.eps * 10 and k > abs(x) / 2:
                break
        # companion sum with harmonic numbers
        term = mpf(1)
        harmonic = mpf(0)
        comp = mpf(0)
        k = 0
        while True:
            k += 1
            term *= -w / (k * k)
            harmonic += mpf(1) / k
            comp += -term * harmonic  # (-1)^{k+1} H_k w^k / (k!)^2
            if abs(term) < mp.eps * 10 and k > abs(x) / 2:
                break
        val = (2 / mp.pi) * ((mp.log(xm / 2) + mp.euler) * j0 + comp)
        return float(val)


def bisect_zero(fn, lo: float, hi: float, iters: int = 200) -> float:
    flo = fn(lo)
    if flo == 0.0:
        return lo
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        fm = fn(mid)
        if fm == 0.0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def composite_gl(fn, lo: float, hi: float, panels: int, nodes_per_panel: int = 24) -> float:
    """Composite Gauss-Legendre for oscillatory integrands."""
    edges = np.linspace(lo, hi, panels + 1)
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        rule = gauss_legendre(nodes_per_panel, float(a), float(b))
        total += float(np.sum(rule.weights * fn(rule.nodes)))
    return total


def bessel_product_integral(u: float, w: float, upper: float) -> float:
    """D_X(u, w) = int_0^X x J0(ux) J0(wx) dx by composite quadrature."""
    panels = max(64, int(2.0 * (u + w) * upper))

    def integrand(x):
        return x * bessel_j0(u * x) * bessel_j0(w * x)

    return composite_gl(integrand, 0.0, upper, panels)


def bessel_product_integral_closed_form(u: float, w: float, upper: float) -> float:
    """The same integral via the standard Bessel product identities."""
    if u == w:
        return 0.5 * upper * upper * (bessel_j0(u * upper) ** 2 + bessel_j1(u * upper) ** 2)
    num = u * bessel_j1(u * upper) * bessel_j0(w * upper) \
        - w * bessel_j0(u * upper) * bessel_j1(w * upper)
    return upper * num / (u * u - w * w)


def trapezoid_window_norm(params, weights, half_length: float,
                          n_q: int = 4001, n_z: int = 6001) -> float:
    """2-D trapezoid evaluation of the window-norm expression.

    Independent of the package's Gauss-Legendre route; the q=0 endpoint is
    handled by the vanishing of (|A|^2+|B|^2)/q there for the presets used.
    """
    qmax = params.q_max
    q = np.linspace(0.0, qmax, n_q)[1:]
    z = np.linspace(-half_length, half_length, n_z)
    a, b = weights.evaluate(q)
    mv = params.mass * params.speed
    root = np.sqrt(np.maximum(mv * mv - q * params.hbar ** 2, 0.0))
    osc = np.exp(2j * np.outer(z, root / params.hbar))
    brace = (np.abs(a) ** 2 + np.abs(b) ** 2)[None, :] + 2.0 * np.real(a * np.conj(b) * osc)
    integ = brace / q
    wq = np.full(q.size, q[1] - q[0])
    wq[-1] *= 0.5  # left edge: integrand -> 0 at q = 0, treat as half cell too
    wq[0] *= 1.0
    wz = np.full(n_z, z[1] - z[0])
    wz[0] *= 0.5
    wz[-1] *= 0.5
    return 2.0 * np.pi * float(np.einsum("i,ij,j->", wz, integ, wq))


def central_derivative(fn, x: float, h: float, order: int) -> float:
    """4th- or 6th-order central first derivative of a scalar function."""
    if order == 4:
        return (fn(x - 2 * h) - 8 * fn(x - h) + 8 * fn(x + h) - fn(x + 2 * h)) / (12 * h)
    if order == 6:
        return (-fn(x - 3 * h) + 9 * fn(x - 2 * h) - 45 * fn(x - h)
                + 45 * fn(x + h) - 9 * fn(x + 2 * h) + fn(x + 3 * h)) / (60 * h)
    raise ValueError(order)


def central_second_derivative(fn, x: float, h: float) -> float:
    """4th-order central second derivative."""
    return (-fn(x - 2 * h) + 16 * fn(x - h) - 30 * fn(x)
            + 16 * fn(x + h) - fn(x + 2 * h)) / (12 * h * h)


def one_sided_derivative_weights(n_points: int, h: float) -> np.ndarray:
    """Weights for d/dx at x=0 from samples at 0, h, ..., (n-1) h.

    Solves the Vandermonde moment system; exact for degree n-1 polynomials.
    """
    k = np.arange(n_points)
    vander = np.vander(k * h, increasing=True).T  # rows: moments
    rhs = np.zeros(n_points)
    rhs[1] = 1.0
    return np.linalg.solve(vander, rhs)
