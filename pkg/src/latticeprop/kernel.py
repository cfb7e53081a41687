r"""Exact propagator of the discrete Schrödinger equation.

On the integer chain with nearest-neighbour hopping,

.. math::
    -\tfrac12\,[\psi_{n+1}(t) + \psi_{n-1}(t)] = i\,\partial_t \psi_n(t),

the retarded kernel is :math:`K(n,m;t) = \theta(t)\, i^{n-m} J_{n-m}(t)`,
and on cubic lattices of any dimension it factorises into one-dimensional
kernels.  The convention :math:`\theta(0) = 1` makes ``K(n, m, 0)`` the
Kronecker delta.

All infinite lattice sums are truncated to ``window(t) = ceil(|t|) + 40``
sites beyond the light cone, where :math:`J_n(t)` is already far below
double-precision resolution.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import specfun
from .errors import DimensionMismatch, DomainError

GUARD_SITES = 40

_I_POWERS = (1.0 + 0j, 1j, -1.0 + 0j, -1j)


def i_power(p):
    """Exact :math:`i^p` for integer ``p``."""
    return _I_POWERS[p % 4]


def window(t):
    """Truncation half-width used for lattice sums at time ``t``."""
    return int(math.ceil(abs(t))) + GUARD_SITES


def k1d(n, m, t):
    """One-dimensional kernel :math:`K(n, m; t)` as a complex number."""
    if t < 0:
        return 0j
    p = n - m
    if t == 0:
        return 1 + 0j if p == 0 else 0j
    return i_power(p) * specfun.bessel_j(p, t)


def knd(n, m, t):
    """Kernel on the d-dimensional cubic lattice: product of 1D factors."""
    n = tuple(n)
    m = tuple(m)
    if len(n) != len(m):
        raise DimensionMismatch(f"site dimensions differ: {len(n)} vs {len(m)}")
    if not n:
        raise DimensionMismatch("sites must have at least one component")
    value = 1 + 0j
    for nj, mj in zip(n, m):
        value *= k1d(nj, mj, t)
    return value


def kernel_row(p_max, t):
    """Vector of :math:`K(p, 0; t)` for ``p = -p_max .. p_max``."""
    p = np.arange(-p_max, p_max + 1)
    if t < 0:
        return np.zeros(p.size, dtype=complex)
    j = specfun.bessel_j_orders(-p_max, p_max, t)
    phases = np.array(_I_POWERS)[p % 4]
    return phases * j


def composition_residual(n, m, t1, t2, L):
    """Residual of the composition law over a window of ``2L + 1`` sites.

    Returns :math:`|\\sum_{l=-L}^{L} K(n,l;t_1)K(l,m;t_2) - K(n,m;t_1+t_2)|`.
    """
    if not (t1 > 0 and t2 > 0):
        raise DomainError("composition requires t1, t2 > 0")
    if L < 1:
        raise DomainError("window half-width must be >= 1")
    p_max = L + max(abs(n), abs(m))
    row1 = kernel_row(p_max, t1)
    row2 = kernel_row(p_max, t2)
    sites = np.arange(-L, L + 1)
    total = np.sum(row1[n - sites + p_max] * row2[sites - m + p_max])
    return abs(total - k1d(n, m, t1 + t2))


def greens_residual(n, m, t):
    """Residual of the homogeneous lattice Schrödinger equation at ``t > 0``.

    The time derivative is analytic,
    :math:`\\partial_t K = i^{n-m} J'_{n-m}(t)`; the distributional
    :math:`\\delta(t)` source is excluded by requiring ``t > 0``.
    """
    if not t > 0:
        raise DomainError("Green's-function residual is defined for t > 0")
    p = n - m
    hop = -0.5 * (k1d(n + 1, m, t) + k1d(n - 1, m, t))
    dk_dt = i_power(p) * specfun.bessel_j_derivative(p, t)
    return abs(hop - 1j * dk_dt)


@dataclass(frozen=True)
class ContinuumParams:
    """Physical parameters for comparing the lattice and free-particle kernels.

    ``delta`` has units of energy x length^2 and the particle mass is
    ``hbar**2 / delta``.
    """

    a: float
    delta: float
    hbar: float
    x: float
    x_prime: float
    tau: float

    def __post_init__(self):
        for name in ("a", "delta", "hbar", "tau"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive")

    @property
    def mass(self):
        return self.hbar**2 / self.delta

    @property
    def t(self):
        """Dimensionless lattice time ``delta * tau / (hbar * a**2)``."""
        return self.delta * self.tau / (self.hbar * self.a**2)

    @property
    def sites(self):
        """Lattice separation ``(x - x') / a`` rounded to an integer."""
        return int(round((self.x - self.x_prime) / self.a))


def continuum_kernel(cp):
    """Free-particle kernel carried with the lattice gauge factor and cell size.

    :math:`a\\,e^{it}\\sqrt{m/(2\\pi i\\hbar\\tau)}\\,\\exp(i m (x-x')^2/(2\\hbar\\tau))`
    with :math:`\\sqrt{1/i} = e^{-i\\pi/4}`.
    """
    m = cp.mass
    dx = cp.x - cp.x_prime
    prefactor = cp.a * cmath.exp(1j * cp.t)
    amplitude = math.sqrt(m / (2 * math.pi * cp.hbar * cp.tau)) * cmath.exp(-0.25j * math.pi)
    return prefactor * amplitude * cmath.exp(1j * m * dx * dx / (2 * cp.hbar * cp.tau))


def continuum_branch(n, m, t):
    r"""Long-wavelength part of :math:`K(n,m;t)` for ``t > 0``.

    The Bloch integral for the kernel has two stationary points, at the band
    bottom :math:`k = 0` and at the band top :math:`k = \pi`.  Only the
    first survives the continuum limit, and it equals
    :math:`\tfrac12 i^{p} H^{(1)}_{p}(t)` with ``p = n - m``; the kernel is
    that branch plus its :math:`k=\pi` mirror,
    :math:`K = B + (-1)^p \bar B`.
    """
    if not t > 0:
        raise DomainError("continuum branch requires t > 0")
    p = n - m
    return 0.5 * i_power(p) * specfun.hankel1(p, t)
