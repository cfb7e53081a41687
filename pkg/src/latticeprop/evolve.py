r"""Initial-value problems on the infinite chain.

Finite initial data are evolved by convolution with the exact kernel.
Semi-infinite data are never materialised; each has its own series:

* the point source :math:`\psi_n(0)=\delta_{n0}`, with density :math:`J_n(t)^2`;
* the shutter :math:`\psi_n(0)=\theta(-n)e^{ikn}`, with
  :math:`\psi_n(t) = i^n\sum_{m\ge0} J_{n+m}(t)\,\xi^m` and
  :math:`\xi = e^{-i(k-\pi/2)}`;
* the Poissonian edge :math:`\psi_n(0)=\theta(n)b^n/n!`, which sums in
  closed form through a Lommel expansion.

Under :math:`t\mapsto r`, :math:`k\mapsto\varphi` the shutter solution is a
superposition of circular waves
:math:`\Phi_l(r,\varphi) = i^l J_l(r) e^{-il\varphi}`.  This normalisation
follows from matching :math:`\sum_{m\ge0}\Phi_{m+n}` term by term with the
shutter series:
:math:`i^{n+m}e^{-i(n+m)\varphi} = e^{-in\varphi}\, i^n (ie^{-i\varphi})^m`
and :math:`ie^{-i\varphi} = \xi`.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernel, specfun
from .errors import DomainError, GridTooCoarse, NonConvergence, RegimeViolation, SingularRadius

# series truncation
SHUTTER_TAIL_TOL = 1e-10
MAX_SERIES_TERMS = 100_000

# ladder recursion
LADDER_T_MIN = 0.5
LADDER_H_FLOOR = 1e-4

MAX_HELMHOLTZ_SPACING = 0.05

_TWO_PI = 2 * math.pi


@dataclass
class WaveField:
    """Amplitudes on the contiguous sites ``n_lo .. n_lo + len(amplitudes) - 1``.

    ``tail`` tags semi-infinite data: ``None``, ``("bloch", k)`` or
    ``("poisson", b)``.  Tagged fields describe data that continue beyond
    the stored support and can only be evolved by the dedicated solvers.
    """

    n_lo: int
    amplitudes: np.ndarray
    tail: tuple | None = field(default=None)

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.ndim != 1 or self.amplitudes.size == 0:
            raise DomainError("amplitudes must be a non-empty 1D array")
        if not np.all(np.isfinite(self.amplitudes)):
            raise DomainError("amplitudes must be finite")
        if self.tail is not None:
            kind, value = self.tail
            if kind == "bloch":
                if not 0 <= value < _TWO_PI:
                    raise DomainError(f"Bloch momentum must lie in [0, 2pi), got {value}")
            elif kind == "poisson":
                if isinstance(value, complex):
                    raise DomainError("Poisson parameter must be real")
            else:
                raise DomainError(f"unknown tail kind {kind!r}")

    @property
    def n_hi(self):
        return self.n_lo + self.amplitudes.size - 1

    @property
    def support(self):
        return (self.n_lo, self.n_hi)

    @property
    def sites(self):
        return np.arange(self.n_lo, self.n_hi + 1)

    def norm(self):
        return float(np.linalg.norm(self.amplitudes))

    def at(self, n):
        """Amplitude at site ``n`` (zero outside the support)."""
        if self.n_lo <= n <= self.n_hi:
            return complex(self.amplitudes[n - self.n_lo])
        return 0j

    @classmethod
    def delta(cls, site=0):
        return cls(site, np.ones(1))


def evolve_field(init: WaveField, t: float) -> WaveField:
    """Evolve finitely supported data by convolution with the exact kernel.

    The support grows by ``window(t)`` sites on each side, beyond which the
    kernel is below double precision.
    """
    if init.tail is not None:
        raise DomainError("semi-infinite data need their dedicated solver")
    if t < 0:
        raise DomainError("evolution is defined for t >= 0")
    if t == 0:
        return WaveField(init.n_lo, init.amplitudes.copy())
    reach = kernel.window(t)
    row = kernel.kernel_row(reach, t)
    return WaveField(init.n_lo - reach, np.convolve(init.amplitudes, row))


def point_source_density(n, t):
    """:math:`|\\psi_n(t)|^2 = J_n(t)^2` for a particle released from site 0."""
    if t < 0:
        raise DomainError("density is defined for t >= 0")
    return specfun.bessel_j(n, t) ** 2


def point_source_profile(n_lo, n_hi, t):
    """Vector of :math:`J_n(t)^2` over ``n_lo..n_hi``."""
    return specfun.bessel_j_orders(n_lo, n_hi, t) ** 2


# ---------------------------------------------------------------- shutter


def shutter_xi(k):
    """Generating-function parameter :math:`\\xi = e^{-i(k-\\pi/2)}`."""
    return cmath.exp(-1j * (k - 0.5 * math.pi))


def _bessel_tail_bound(order, t):
    # sum_{v >= order} |J_v(t)| <= sum (t/2)^v / v!, geometric once the ratio < 1
    half = abs(t) / 2
    if half == 0:
        return 0.0 if order > 0 else 1.0
    ratio = half / (order + 1)
    if ratio >= 1:
        return math.inf
    log_term = order * math.log(half) - math.lgamma(order + 1)
    return math.exp(log_term) / (1 - ratio)


def shutter_terms(n, t, M=30, tail_tol=SHUTTER_TAIL_TOL):
    """Number of series terms needed at ``(n, t)``.

    Starts from ``M``, always covers the ``m = -n`` term that carries the
    initial data, and grows until the remaining tail is below ``tail_tol``.

    Raises
    ------
    NonConvergence
        If more than ``MAX_SERIES_TERMS`` would be required.
    """
    if M < 1:
        raise DomainError("M must be >= 1")
    terms = max(M, 1 - n)
    while _bessel_tail_bound(n + terms, t) >= tail_tol:
        terms = max(terms + 1, int(math.ceil(abs(t) / 2)) - n + 1)
        if terms > MAX_SERIES_TERMS:
            raise NonConvergence(f"shutter series at (n={n}, t={t}) needs > {MAX_SERIES_TERMS} terms")
    return terms


def _shutter_series(n, t, k, terms):
    orders = specfun.bessel_j_orders(n, n + terms - 1, t)
    powers = shutter_xi(k) ** np.arange(terms)
    return kernel.i_power(n) * complex(np.sum(orders * powers))


def shutter_psi(n, t, k, M=30, tail_tol=SHUTTER_TAIL_TOL):
    """Wave function after a shutter at ``n = 0`` opens on a Bloch wave ``e^{ikn}``.

    Parameters
    ----------
    n : int
        Site.
    t : float
        Time since opening, ``t >= 0``.
    k : float
        Bloch quasi-momentum of the incoming wave.
    M : int
        Minimum number of series terms; raised automatically until the
        neglected tail is below ``tail_tol``.
    """
    if t < 0:
        raise DomainError("shutter solution is defined for t >= 0")
    return _shutter_series(n, t, k, shutter_terms(n, t, M, tail_tol))


def shutter_profile(n_lo, n_hi, t, k, tail_tol=SHUTTER_TAIL_TOL):
    """Shutter wave function over ``n_lo..n_hi`` at one time.

    Uses the suffix recursion :math:`S_n = J_n + \\xi S_{n+1}` with
    :math:`\\psi_n = i^n S_n`, started where the tail bound vanishes.
    """
    if n_hi < n_lo:
        raise DomainError("empty site range")
    top = n_hi + shutter_terms(n_hi, t, 1, tail_tol)
    j = specfun.bessel_j_orders(n_lo, top, t)
    xi = shutter_xi(k)
    suffix = np.empty(j.size, dtype=complex)
    acc = 0j
    for idx in range(j.size - 1, -1, -1):
        acc = j[idx] + xi * acc
        suffix[idx] = acc
    sites = np.arange(n_lo, n_hi + 1)
    phases = np.array([1, 1j, -1, -1j])[sites % 4]
    return phases * suffix[: sites.size]


def shutter_psi_from_origin(n, t, k):
    """Wave function at ``n >= 1`` rebuilt from its value at the shutter.

    :math:`\\psi_n = e^{ikn}[\\psi_0 - \\sum_{m<n} J_m(t)\\xi^m]`, a finite sum.
    """
    if n < 1:
        raise DomainError("the shutter-origin form needs n >= 1")
    if t == 0:
        return 0j
    xi = shutter_xi(k)
    head = specfun.bessel_j_orders(0, n - 1, t)
    partial = complex(np.sum(head * xi ** np.arange(n)))
    return cmath.exp(1j * k * n) * (shutter_psi(0, t, k) - partial)


def psi0_reflection_identity_residual(q, t):
    """Residual of the sum rule for the shutter amplitude at the origin.

    :math:`\\psi_0|_{k=q-\\pi/2} + \\psi_0|_{k=\\pi/2-q} = e^{it\\sin q} + J_0(t)`,
    a consequence of the Jacobi-Anger expansion.
    """
    half_pi = 0.5 * math.pi
    # both sides are compared well below the default series tail
    lhs = shutter_psi(0, t, q - half_pi, tail_tol=1e-15) + shutter_psi(0, t, half_pi - q, tail_tol=1e-15)
    rhs = cmath.exp(1j * t * math.sin(q)) + specfun.bessel_j(0, t)
    return abs(lhs - rhs)


def shutter_k0_closed(n, t):
    """Closed form of the shutter solution at ``k = 0`` for ``n >= 0``.

    At ``k = 0`` the origin amplitude is :math:`(e^{it} + J_0(t))/2`, and
    moving out to site ``n`` subtracts :math:`\\sum_{m<n} i^m J_m(t)`.
    """
    if n < 0:
        raise DomainError("closed form holds for n >= 0")
    origin = 0.5 * (cmath.exp(1j * t) + specfun.bessel_j(0, t))
    if n == 0:
        return origin
    head = specfun.bessel_j_orders(0, n - 1, t)
    phases = np.array([1, 1j, -1, -1j])[np.arange(n) % 4]
    return origin - complex(np.sum(phases * head))


def shutter_density_asymptotic(n, t, k):
    r"""Large-time estimate of :math:`|\psi_n(t)|^2` from the tangent Bessel form.

    Each :math:`J_{n+m}(t)` with order inside the tangent regime is replaced
    by :math:`\sqrt{2/\pi t}\,e^{P}\cos Q`; orders too close to or beyond the
    caustic (``|nu| > t - 3 t**(1/3)``) keep their exact value, since the
    tangent form breaks down there.  This is an estimator with a ~10%
    target, not a precision routine.

    Raises
    ------
    RegimeViolation
        Unless ``(n, t)`` itself is in the tangent regime.
    """
    regime = specfun.AsymptoticRegime.classify(n, t)
    if regime.tag != specfun.TANGENT:
        raise RegimeViolation(f"(n={n}, t={t}) is {regime.tag}; asymptotic density not valid")
    terms = shutter_terms(n, t)
    orders = np.arange(n, n + terms)
    nu_max = math.floor(t - specfun.CAUSTIC_WIDTH * t ** (1.0 / 3.0))
    tangent = np.abs(orders) <= nu_max
    values = np.empty(terms)
    log_amp, phase = specfun.meissel_log_amplitude_phase(orders[tangent], t)
    sign = np.where((orders[tangent] < 0) & (orders[tangent] % 2 == 1), -1.0, 1.0)
    values[tangent] = sign * math.sqrt(2 / (math.pi * t)) * np.exp(log_amp) * np.cos(phase)
    for idx in np.flatnonzero(~tangent):
        values[idx] = specfun.bessel_j(int(orders[idx]), t)
    psi = np.sum(values * shutter_xi(k) ** np.arange(terms))
    return float(abs(psi) ** 2)


def scaled_density_average(n, t, k, samples=33):
    """``t`` times the shutter density averaged over one period ``[t - pi, t + pi]``.

    Raw samples of :math:`t|\\psi_n|^2` oscillate with the interference of
    the origin and front contributions; the period average isolates the
    :math:`1/t` envelope.
    """
    if t <= math.pi:
        raise DomainError("period average needs t > pi")
    times = np.linspace(t - math.pi, t + math.pi, samples)
    dens = [abs(shutter_psi(n, s, k)) ** 2 for s in times]
    return float(t * np.mean(dens))


def short_time_density(n, t):
    """Leading short-time density :math:`(t/2)^{2n}/(n!)^2` ahead of the shutter."""
    if n < 0:
        raise DomainError("short-time law is for n >= 0")
    return math.exp(2 * (n * math.log(t / 2) - math.lgamma(n + 1))) if t > 0 else float(n == 0)


def cone_curve(alpha, n):
    """Times ``(t+, t-)`` where the short-time density at site ``n`` equals ``alpha``.

    Stirling's formula turns :math:`(t/2)^{2n}/(n!)^2 = \\alpha` into
    :math:`t_\\pm = \\pm 2\\alpha^{1/(2n)} n / e`.
    """
    if not 0 < alpha <= 1:
        raise DomainError("alpha must lie in (0, 1]")
    if n < 1:
        raise DomainError("n must be a positive integer")
    t = 2 * alpha ** (1.0 / (2 * n)) * n / math.e
    return t, -t


# ---------------------------------------------------------------- circular waves


def circular_wave(l, r, phi):
    """Circular wave :math:`\\Phi_l(r,\\varphi) = i^l J_l(r) e^{-il\\varphi}`."""
    if r < 0:
        raise DomainError("radius must be non-negative")
    return kernel.i_power(l) * specfun.bessel_j(l, r) * cmath.exp(-1j * l * phi)


def circular_partial_sum(n, r, phi, M=None):
    """:math:`\\Psi_n = \\sum_{m=0}^{M-1}\\Phi_{m+n}(r,\\varphi)`.

    With ``M=None`` the number of terms is chosen from the tail bound.  Pass
    a fixed ``M`` when sampling a grid, so that every point is the same
    finite combination of exact Helmholtz solutions.
    """
    if r < 0:
        raise DomainError("radius must be non-negative")
    if M is None:
        M = shutter_terms(n, r)
    ls = np.arange(n, n + M)
    amps = specfun.bessel_j_orders(n, n + M - 1, r)
    phases = np.array([1, 1j, -1, -1j])[ls % 4] * np.exp(-1j * ls * phi)
    return complex(np.sum(phases * amps))


def sample_circular_field(n, center, half_width, h, M=None):
    """Sample :math:`\\Psi_n` on a square Cartesian patch of spacing ``h``.

    The patch has ``2 * half_width + 1`` points per side around ``center =
    (x0, y0)``, with ``x = r cos(phi)`` and ``y = r sin(phi)``.
    """
    x0, y0 = center
    offsets = h * np.arange(-half_width, half_width + 1)
    if M is None:
        r_max = math.hypot(abs(x0) + offsets[-1], abs(y0) + offsets[-1])
        M = shutter_terms(n, r_max, tail_tol=1e-15)
    out = np.empty((offsets.size, offsets.size), dtype=complex)
    for i, dy in enumerate(offsets):
        for j, dx in enumerate(offsets):
            x, y = x0 + dx, y0 + dy
            out[i, j] = circular_partial_sum(n, math.hypot(x, y), math.atan2(y, x), M)
    return out


def helmholtz_residual(values, h):
    """Max over the interior of :math:`|\\nabla^2\\Psi + \\Psi|` with the five-point stencil.

    ``values[i, j]`` samples the field at ``(x0 + j h, y0 + i h)``.  The
    truncation error is :math:`O(h^2)`.
    """
    if h > MAX_HELMHOLTZ_SPACING:
        raise GridTooCoarse(f"h={h} exceeds {MAX_HELMHOLTZ_SPACING}")
    v = np.asarray(values)
    if v.ndim != 2 or min(v.shape) < 3:
        raise DomainError("need a 2D grid with at least 3 points per side")
    lap = (
        v[1:-1, 2:] + v[1:-1, :-2] + v[2:, 1:-1] + v[:-2, 1:-1] - 4 * v[1:-1, 1:-1]
    ) / (h * h)
    return float(np.max(np.abs(lap + v[1:-1, 1:-1])))


def default_ladder_step(steps):
    """Finite-difference step for ``steps`` nested central differences.

    Truncation error grows like ``h**2`` and rounding like ``eps / h**steps``;
    ``eps**(1/(steps+2))`` balances the two.
    """
    return max(LADDER_H_FLOOR, np.finfo(float).eps ** (1.0 / (steps + 2)))


def ladder_apply(n, t, k, steps, h=None):
    r"""Hop from site ``n`` to ``n + steps`` with the circular ladder operator.

    Applies :math:`\{ie^{-ik}[(i/t)\partial_k - \partial_t]\}^{steps}` to
    :math:`\Psi_n = e^{-ikn}\psi_n` and multiplies by :math:`e^{ik(n+steps)}`.
    On :math:`\Phi_l = i^l J_l(t)e^{-ilk}` the bracket reduces to
    :math:`-i^l J_{l+1} e^{-ilk}` through :math:`J_l' - (l/t)J_l = -J_{l+1}`,
    so the operator maps :math:`\Phi_l \to \Phi_{l+1}` and hence
    :math:`\Psi_n \to \Psi_{n+1}`.
    Derivatives are central differences on a ``(2 steps + 1)**2`` stencil,
    each application consuming one ring of it.  The error per application
    is :math:`O(h^2)` plus rounding that grows like ``eps / h**steps``.

    Raises
    ------
    SingularRadius
        If ``t <= 0.5``, where the ``1/t`` factor amplifies stencil errors.
    """
    if t <= LADDER_T_MIN:
        raise SingularRadius(f"t={t} is at or below the ladder cut-off {LADDER_T_MIN}")
    if steps < 0:
        raise DomainError("steps must be non-negative")
    if steps == 0:
        return shutter_psi(n, t, k)
    if h is None:
        h = default_ladder_step(steps)
    offsets = h * np.arange(-steps, steps + 1)
    ts = t + offsets
    ks = k + offsets
    # one truncation for the whole stencil keeps the sampled function smooth
    terms = shutter_terms(n, ts[-1], tail_tol=1e-16)
    grid = np.empty((ts.size, ks.size), dtype=complex)
    for i, tt in enumerate(ts):
        for j, kk in enumerate(ks):
            grid[i, j] = cmath.exp(-1j * kk * n) * _shutter_series(n, tt, kk, terms)
    for ring in range(1, steps + 1):
        tc = ts[ring:-ring, None]
        kc = ks[ring:-ring][None, :]
        d_t = (grid[2:, 1:-1] - grid[:-2, 1:-1]) / (2 * h)
        d_k = (grid[1:-1, 2:] - grid[1:-1, :-2]) / (2 * h)
        grid = 1j * np.exp(-1j * kc) * (1j / tc * d_k - d_t)
    return cmath.exp(1j * k * (n + steps)) * complex(grid[0, 0])


# ---------------------------------------------------------------- Poissonian edge


def poisson_edge_closed(n, t, b):
    """Evolution of the ramp :math:`\\theta(n) b^n/n!` in closed form.

    :math:`i^n u^n J_n(tu)` with :math:`u = \\sqrt{1 - 2ib/t}` on the
    principal branch.  Writing the two bracketed factors as a single power
    of ``u`` removes any branch ambiguity since ``Re(u**2) = 1 > 0``.
    At ``t = 0`` the initial data are returned.
    """
    if t < 0:
        raise DomainError("Poissonian edge is evolved for t >= 0")
    if t == 0:
        return complex(b**n / math.factorial(n)) if n >= 0 else 0j
    w_sq = t * t - 2j * b * t
    if abs(w_sq) < 1.0:
        return kernel.i_power(n) * _scaled_bessel_small(n, t, b, w_sq)
    u = cmath.sqrt(1 - 2j * b / t)
    return kernel.i_power(n) * u**n * specfun.bessel_j(n, t * u)


def _scaled_bessel_small(n, t, b, w_sq):
    # u^n J_n(tu) from the ascending series with u^n folded into the prefactor;
    # stays finite when t -> 0 and u blows up
    k = abs(n)
    if n >= 0:
        prefactor = (t / 2 - 1j * b) ** k
    else:
        prefactor = (-1) ** k * (t / 2) ** k
    term = 1.0 / math.factorial(k)
    total = term
    x = -w_sq / 4
    for s in range(1, 60):
        term *= x / (s * (s + k))
        total += term
        if abs(term) < 1e-17 * abs(total):
            break
    return prefactor * total


def poisson_edge_direct(n, t, b, terms=None):
    """Oracle: :math:`\\sum_{m\\ge0} (b^m/m!) K(n, m; t)` summed term by term."""
    if terms is None:
        terms = 60
        while abs(b) ** terms / math.factorial(terms) > 1e-18 * max(1.0, math.exp(abs(b))):
            terms += 10
    total = 0j
    weight = 1.0
    for m in range(terms + 1):
        if m:
            weight *= b / m
        total += weight * kernel.k1d(n, m, t)
    return total


def poisson_edge_profile(n_lo, n_hi, t, b):
    """Vector of closed-form Poissonian-edge amplitudes over ``n_lo..n_hi``."""
    return np.array([poisson_edge_closed(n, t, b) for n in range(n_lo, n_hi + 1)])


def lommel_expansion_residual(nu, z, w, M=60):
    """Residual of the Lommel expansion truncated after ``M`` terms.

    :math:`|J_\\nu(z\\sqrt{1+w}) - (1+w)^{\\nu/2}\\sum_{m=0}^{M}
    \\frac{(-wz/2)^m}{m!}J_{\\nu+m}(z)|`
    """
    root = cmath.sqrt(1 + w)
    lhs = specfun.bessel_j(nu, z * root)
    # same J routine on both sides, so w = 0 cancels exactly
    js = [specfun.bessel_j(nu + m, z) for m in range(M + 1)]
    coeff = 1.0
    total = 0j
    x = -w * z / 2
    for m in range(M + 1):
        if m:
            coeff *= x / m
        total += coeff * js[m]
    return abs(lhs - root**nu * total)
