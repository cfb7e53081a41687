r"""Edge diffraction written as propagation along ``z``.

A scalar wave obeying :math:`[\nabla^2 + E]\psi = 0` and crossing a screen
at ``z = 0`` is carried forward by a kernel in the fictitious time ``z``.

Continuous transverse coordinate
    :math:`G(x-x';z) = \frac{1}{2\pi}\int dk\, e^{ik(x-x') + iz\sqrt{E-k^2}}
    = \frac{iz\sqrt E}{2\rho} H^{(1)}_1(\sqrt E\rho)`,
    with :math:`\rho^2 = (x-x')^2 + z^2`.

Discrete transverse coordinate (a waveguide array)
    :math:`K_E(p;z) = \frac{1}{2\pi}\int_0^{2\pi} dk\, e^{ikp + iz\sqrt{E+2\cos k}}`.
    Expanding the root for large ``E`` turns it into the lattice
    Schrödinger kernel at time :math:`z/\sqrt E` plus an
    :math:`E^{-3/2}` correction.

Square roots are taken on the branch with non-negative imaginary part, so
evanescent components decay with ``z``.
"""

from __future__ import annotations

import cmath
import math

import numpy as np
from scipy import integrate

from . import evolve, kernel, specfun
from .errors import DomainError, QuadratureFailure, RegimeViolation

QUAD_TOL = 1e-6
EVANESCENT_CUTOFF = 1e-12

PARAXIAL_MIN_PHASE = 50.0
PARAXIAL_MAX_ANGLE = 0.04

GAUSS_ORDER = 24
MAX_PANELS = 4096

#: coefficient of the first operational correction, see ``operational_kernel_approx``
CORRECTION_COEFF = 1.0 / 8.0

_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(GAUSS_ORDER)


def _check_query(z, E):
    if not z > 0:
        raise DomainError(f"propagation distance must be positive, got z={z}")
    if not E > 0:
        raise DomainError(f"energy must be positive, got E={E}")


# ---------------------------------------------------------------- continuous


def _quad_parts(func, a, b, **kw):
    re, err_re = integrate.quad(lambda u: func(u).real, a, b, limit=800, **kw)
    im, err_im = integrate.quad(lambda u: func(u).imag, a, b, limit=800, **kw)
    return complex(re, im), math.hypot(err_re, err_im)


def _evanescent_limit(z, root_e):
    # smallest s = sqrt(E) sinh(u) past the peak of s*exp(-z s) with s*exp(-z s) < cutoff
    s = max(1.0 / z, 1.0)
    while s * math.exp(-z * s) >= EVANESCENT_CUTOFF:
        s *= 1.5
    return math.asinh(s / root_e)


def continuous_kernel_quadrature(dx, z, E):
    """Continuous-transverse kernel by direct quadrature of its plane-wave integral.

    The propagating band ``|k| < sqrt(E)`` uses ``k = sqrt(E) sin(theta)``,
    which removes the square-root endpoints.  The two evanescent tails use
    ``k = +-sqrt(E) cosh(u)`` and are combined into one real-weighted integral,
    truncated where the integrand falls below ``EVANESCENT_CUTOFF``.

    Raises
    ------
    QuadratureFailure
        If the combined error estimate exceeds ``QUAD_TOL``.
    """
    _check_query(z, E)
    root_e = math.sqrt(E)

    def propagating(theta):
        c = math.cos(theta)
        return cmath.exp(1j * root_e * (dx * math.sin(theta) + z * c)) * root_e * c

    def evanescent(u):
        s = root_e * math.sinh(u)
        return complex(2 * math.cos(dx * root_e * math.cosh(u)) * s * math.exp(-z * s))

    half_pi = 0.5 * math.pi
    prop, err_p = _quad_parts(propagating, -half_pi, half_pi)
    evan, err_e = _quad_parts(evanescent, 0.0, _evanescent_limit(z, root_e))
    err = err_p + err_e
    if err > QUAD_TOL:
        raise QuadratureFailure(f"error estimate {err:.2e} exceeds {QUAD_TOL}")
    return (prop + evan) / (2 * math.pi)


def continuous_kernel_closed(dx, z, E):
    """Hankel closed form :math:`\\frac{iz\\sqrt E}{2\\rho}H^{(1)}_1(\\sqrt E\\rho)`."""
    _check_query(z, E)
    rho = math.hypot(dx, z)
    root_e = math.sqrt(E)
    return 1j * z * root_e / (2 * rho) * specfun.hankel1_1(root_e * rho)


def paraxial_kernel(dx, z, E):
    """Short-wavelength, small-angle limit of the continuous kernel.

    :math:`e^{iz\\sqrt E}\\sqrt{\\sqrt E/(2\\pi iz)}\\,e^{i\\sqrt E\\,dx^2/(2z)}`.

    Raises
    ------
    RegimeViolation
        Unless ``E * (dx**2 + z**2) >= 50`` and ``dx**2 / z**2 <= 0.04``.
    """
    _check_query(z, E)
    if E * (dx * dx + z * z) < PARAXIAL_MIN_PHASE:
        raise RegimeViolation(f"E*rho^2 = {E * (dx * dx + z * z):.3g} below {PARAXIAL_MIN_PHASE}")
    if (dx / z) ** 2 > PARAXIAL_MAX_ANGLE:
        raise RegimeViolation(f"(dx/z)^2 = {(dx / z) ** 2:.3g} above {PARAXIAL_MAX_ANGLE}")
    root_e = math.sqrt(E)
    amplitude = cmath.sqrt(root_e / (2j * math.pi * z))
    return cmath.exp(1j * z * root_e) * amplitude * cmath.exp(1j * root_e * dx * dx / (2 * z))


# ---------------------------------------------------------------- discrete


def band_root(k, E):
    """:math:`\\sqrt{E + 2\\cos k}` on the branch ``Im >= 0``."""
    return np.sqrt(np.asarray(E + 2 * np.cos(k), dtype=complex))


def band_edges(E):
    """Zone points in ``(0, 2 pi)`` where ``E + 2 cos k`` vanishes."""
    if -2 < E <= 2:
        kc = math.acos(-E / 2)
        return sorted({kc, 2 * math.pi - kc})
    return []


def zone_rule(breaks, panels_per_segment):
    """Nodes and weights covering ``[0, 2 pi]`` split at ``breaks``.

    Every segment is mapped by ``k = a + (b - a)(1 - cos(theta))/2``, which
    clusters nodes at both ends and smooths square-root endpoint behaviour,
    then integrated with composite Gauss-Legendre panels in ``theta``.
    """
    cuts = sorted({0.0, 2 * math.pi, *[b % (2 * math.pi) for b in breaks]})
    edges = np.linspace(0.0, math.pi, panels_per_segment + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    theta = (mid[:, None] + half[:, None] * _NODES[None, :]).ravel()
    w_theta = (half[:, None] * _WEIGHTS[None, :]).ravel()
    nodes, weights = [], []
    for a, b in zip(cuts[:-1], cuts[1:]):
        if b - a < 1e-14:
            continue
        nodes.append(a + (b - a) * 0.5 * (1 - np.cos(theta)))
        weights.append(w_theta * (b - a) * 0.5 * np.sin(theta))
    return np.concatenate(nodes), np.concatenate(weights)


def default_panels(z, E, spread=0):
    """Panels per segment, growing with the number of integrand oscillations."""
    band = math.sqrt(abs(E) + 2)
    return int(min(MAX_PANELS, 4 + math.ceil(z * band / math.pi + abs(spread) / math.pi)))


def _zone_integral(integrand, z, E, breaks=(), spread=0, tol=1e-11):
    panels = default_panels(z, E, spread)
    all_breaks = [*band_edges(E), *breaks]
    previous = None
    while True:
        k, w = zone_rule(all_breaks, panels)
        value = np.tensordot(integrand(k), w, axes=([-1], [0])) / (2 * math.pi)
        if previous is not None:
            change = np.max(np.abs(value - previous))
            if change <= tol * max(1.0, float(np.max(np.abs(value)))):
                return value
        if panels >= MAX_PANELS:
            raise QuadratureFailure(f"zone quadrature not converged with {panels} panels")
        previous = value
        panels = min(MAX_PANELS, 2 * panels)


def discrete_kernel_quadrature(p, z, E):
    """Discrete-transverse kernel :math:`K_E(p; z)` with ``p = n - m``.

    Composite Gauss-Legendre over the Brillouin zone, refined by panel
    doubling until two successive estimates agree.
    """
    if not z > 0:
        raise DomainError("propagation distance must be positive")
    return complex(discrete_kernel_row(np.array([p]), z, E)[0])


def discrete_kernel_row(ps, z, E):
    """:math:`K_E(p; z)` for every ``p`` in ``ps``, sharing one set of nodes."""
    ps = np.asarray(ps)
    spread = int(np.max(np.abs(ps))) if ps.size else 0

    def integrand(k):
        return np.exp(1j * (ps[:, None] * k[None, :]) + 1j * z * band_root(k, E)[None, :])

    return _zone_integral(integrand, z, E, spread=spread)


def edge_window(z, E):
    """Half-lattice truncation: maximal transverse group velocity times ``z`` plus guard."""
    if not E > 2:
        raise DomainError("the site-sum route needs E > 2 (fully propagating band)")
    c = 0.5 * (-E + math.sqrt(E * E - 4))
    v_max = math.sqrt((1 - c * c) / (E + 2 * c))
    return int(math.ceil(z * v_max)) + kernel.GUARD_SITES


def edge_wavefunction(n, z, E, kx, route="sites"):
    r"""Field behind an edge that transmits :math:`\theta(-m)e^{ik_x m}` at ``z = 0``.

    Parameters
    ----------
    n : int
        Transverse site.
    z : float
        Propagation distance, ``z > 0``.
    E : float
        Band parameter.
    kx : float
        Transverse quasi-momentum of the incident wave.
    route : {"sites", "spectral"}
        ``"sites"`` sums :math:`\sum_{m\le0} e^{ik_x m} K_E(n-m;z)` over a
        window of the half-lattice; needs ``E > 2``.  ``"spectral"`` sums
        the geometric series inside the zone integral.  With
        :math:`g(k) = e^{ikn + iz\sqrt{E+2\cos k}}` and the ``m`` sum
        regularised by :math:`k_x \to k_x - i\epsilon`, the
        :math:`\epsilon\to0` limit is
        :math:`g(k_x) + \frac{1}{2\pi}\int (g(k) - g(k_x))/(1 - e^{i(k-k_x)})\,dk`,
        whose integrand is bounded.
    """
    if not z > 0:
        raise DomainError("propagation distance must be positive")
    if route == "sites":
        L = edge_window(z, E)
        ms = np.arange(-L, 1)
        row = discrete_kernel_row(n - ms, z, E)
        return complex(np.sum(np.exp(1j * kx * ms) * row))
    if route == "spectral":
        g_pole = cmath.exp(1j * kx * n + 1j * z * complex(band_root(kx, E)))

        def integrand(k):
            g = np.exp(1j * k * n + 1j * z * band_root(k, E))
            return (g - g_pole) / (1 - np.exp(1j * (k - kx)))

        integral = _zone_integral(integrand, z, E, breaks=(kx,), spread=n)
        return g_pole + complex(integral)
    raise ValueError(f"unknown route {route!r}")


def edge_profile(n_lo, n_hi, z, E, kx):
    """Edge field over ``n_lo..n_hi`` by the spectral route (any ``E``)."""
    sites = np.arange(n_lo, n_hi + 1)
    g_pole = np.exp(1j * kx * sites + 1j * z * complex(band_root(kx, E)))

    def integrand(k):
        g = np.exp(1j * sites[:, None] * k[None, :] + 1j * z * band_root(k, E)[None, :])
        return (g - g_pole[:, None]) / (1 - np.exp(1j * (k - kx)))[None, :]

    spread = max(abs(n_lo), abs(n_hi))
    return g_pole + _zone_integral(integrand, z, E, breaks=(kx,), spread=spread)


def operational_kernel_approx(p, z, E, coeff=CORRECTION_COEFF):
    r"""Large-``E`` approximation of :math:`K_E(p;z)` through the lattice kernel.

    With :math:`\tau = z/\sqrt E`,
    :math:`\sqrt{E+2\cos k} \approx \sqrt E + \cos k/\sqrt E - \cos^2 k/(2E^{3/2})`,
    and :math:`\cos^2 k = (e^{2ik} + e^{-2ik} + 2)/4`, giving

    .. math::
        e^{iz\sqrt E}\Big[K(p;\tau) - \frac{iz}{8E^{3/2}}
        \big(K(p+2;\tau) + K(p-2;\tau) + 2K(p;\tau)\big)\Big].

    ``coeff=0`` returns the zeroth-order term alone.
    """
    if not E > 2:
        raise DomainError("operational approximation needs E > 2")
    if not z > 0:
        raise DomainError("propagation distance must be positive")
    tau = z / math.sqrt(E)
    lead = kernel.k1d(p, 0, tau)
    shifted = kernel.k1d(p + 2, 0, tau) + kernel.k1d(p - 2, 0, tau) + 2 * lead
    correction = coeff * 1j * z / E**1.5 * shifted
    return cmath.exp(1j * z * math.sqrt(E)) * (lead - correction)


def shutter_correspondence_residual(n, z, E, kx, coeff=CORRECTION_COEFF):
    """Compare the edge field with the shutter solution at time ``z / sqrt(E)``.

    Returns ``(corrected, zeroth)``: the residuals of the edge field against
    the shutter solution with and without the first operational correction.
    """
    if not E > 2:
        raise DomainError("shutter correspondence needs E > 2")
    tau = z / math.sqrt(E)
    exact = edge_wavefunction(n, z, E, kx)
    psi = {s: evolve.shutter_psi(s, tau, kx, tail_tol=1e-14) for s in (n - 2, n, n + 2)}
    phase = cmath.exp(1j * z * math.sqrt(E))
    zeroth = phase * psi[n]
    corrected = zeroth - phase * coeff * 1j * z / E**1.5 * (psi[n + 2] + psi[n - 2] + 2 * psi[n])
    return abs(exact - corrected), abs(exact - zeroth)
