r"""Integer-order Bessel functions and the asymptotics built on them.

Everything downstream (kernels, path sums, diffraction solvers) consumes
:math:`J_n` through this module, so it is written without relying on
``scipy.special``:

* :func:`bessel_j` sums the ascending series and falls back to Miller's
  backward recurrence whenever the series would lose accuracy to
  cancellation (roughly ``|t| > 5`` for low orders).
* :func:`bessel_j_row` returns :math:`J_0, \dots, J_{n_{max}}` from one
  backward sweep normalised by :math:`J_0 + 2\sum_k J_{2k} = 1`.
* :func:`bessel_y0`, :func:`bessel_y1` use the logarithmic series for
  ``x <= 12`` and Hankel's large-argument expansion above; higher orders
  follow by forward recurrence, which is stable for :math:`Y_n`.
* :func:`meissel_j` is the tangent (Debye/Meissel) form valid for
  ``t > n`` away from the turning point ``t ~ n``.

Real and complex arguments are both accepted by the :math:`J` routines.
"""

from __future__ import annotations

import cmath
import math
import operator
from contextlib import contextmanager
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NonConvergence, RegimeViolation

EULER_GAMMA = 0.57721566490153286061

#: Half-width (in units of ``order**(1/3)``) of the band around the turning
#: point where the tangent asymptotics are refused.
CAUSTIC_WIDTH = 3.0

#: Switch point between the logarithmic series and Hankel's expansion for Y.
Y_SPLIT = 12.0

ASCENDING = "ascending"
TANGENT = "tangent"
CAUSTIC = "caustic-adjacent"

# per-term relative rounding assumed when judging series cancellation
_ROUNDING_GUARD = 8 * np.finfo(float).eps
_RESCALE = 1e250
_LOG_START_BOUND = math.log(1e-17)

_fault = {"drop_terms": 0}


@contextmanager
def inject_series_fault(drop_terms=1):
    """Test hook: silently drop low-order correction terms.

    While active, the ascending series skips its terms ``1..drop_terms`` and
    the backward-recurrence normalisation skips :math:`J_2`.  Used to check
    that the verification harness notices a broken special-function kernel.
    """
    previous = _fault["drop_terms"]
    _fault["drop_terms"] = int(drop_terms)
    try:
        yield
    finally:
        _fault["drop_terms"] = previous


@dataclass(frozen=True)
class SeriesTolerance:
    """Truncation control for the ascending series."""

    abs_tol: float = 1e-14
    max_terms: int = 500

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise ValueError(f"abs_tol must be positive, got {self.abs_tol!r}")
        if self.max_terms < 1:
            raise ValueError(f"max_terms must be >= 1, got {self.max_terms!r}")


DEFAULT_TOL = SeriesTolerance()


@dataclass(frozen=True)
class AsymptoticRegime:
    """Which expansion of :math:`J_\\nu(z)` is appropriate at ``(order, argument)``."""

    order: float
    argument: float
    tag: str

    @classmethod
    def classify(cls, order, argument):
        nu = abs(float(order))
        z = float(argument)
        if not z > 0:
            raise DomainError(f"argument must be positive, got {argument!r}")
        if abs(z - nu) <= CAUSTIC_WIDTH * nu ** (1.0 / 3.0):
            tag = CAUSTIC
        elif z > nu:
            tag = TANGENT
        else:
            tag = ASCENDING
        return cls(nu, z, tag)


_TINY_ARGUMENT = 1e-3


def _is_zero(t):
    return t == 0


def _ascending(n, t, tol):
    """Sum the ascending series for J_n(t), n >= 0.

    Returns ``None`` when the largest term is big enough that rounding would
    exceed ``tol.abs_tol``; the caller then switches to backward recurrence.
    """
    half = t / 2
    term = 1.0 + 0 * half
    for j in range(1, n + 1):
        term *= half / j
        if abs(term) > 1e300:
            return None
    x2 = -(half * half)
    ax2 = abs(x2)
    total = term
    peak = abs(term)
    drop = _fault["drop_terms"]
    for s in range(1, tol.max_terms):
        term *= x2 / (s * (s + n))
        if s > drop:
            total += term
        a = abs(term)
        if a > peak:
            peak = a
            if peak * _ROUNDING_GUARD > tol.abs_tol:
                return None
        ratio = ax2 / ((s + 1) * (s + 1 + n))
        if ratio < 1 and a * ratio / (1 - ratio) < 0.1 * tol.abs_tol:
            return total
    raise NonConvergence(
        f"ascending series for J_{n}({t}) not converged after {tol.max_terms} terms"
    )


def _miller_start(n_max, t):
    # contamination of the normalisation sum is ~J_start(t); push start until
    # the bound (|t|/2)^N / N! drops below 1e-17
    a = abs(t)
    start = n_max + int(math.ceil(10 + 1.5 * a))
    log_half = math.log(a / 2.0)
    while start * log_half - math.lgamma(start + 1) > _LOG_START_BOUND:
        start += 2
    return start


def _miller(n_max, t):
    """Backward recurrence for J_0..J_{n_max}(t), t != 0."""
    start = _miller_start(n_max, t)
    dtype = complex if isinstance(t, complex) else float
    out = np.zeros(n_max + 1, dtype=dtype)
    skip_j2 = _fault["drop_terms"] > 0
    j_next = 0.0 * t
    j = 1e-30 + 0.0 * t
    norm = 0.0 * t
    for k in range(start, 0, -1):
        j_prev = (2 * k / t) * j - j_next
        j_next, j = j, j_prev
        order = k - 1
        if order <= n_max:
            out[order] = j
        if order == 0:
            norm += j
        elif order % 2 == 0 and not (skip_j2 and order == 2):
            norm += 2 * j
        if abs(j) > _RESCALE:
            j /= _RESCALE
            j_next /= _RESCALE
            norm /= _RESCALE
            out[order:] /= _RESCALE
    return out / norm


def _as_number(t):
    if isinstance(t, (complex, np.complexfloating)):
        return complex(t)
    return float(t)


def bessel_j(n, t, tol=DEFAULT_TOL):
    """Bessel function of the first kind :math:`J_n(t)` of integer order.

    Parameters
    ----------
    n : int
        Order; negative orders use :math:`J_{-n} = (-1)^n J_n` exactly.
    t : float or complex
        Argument.
    tol : SeriesTolerance
        Absolute tolerance and term budget of the ascending series.

    Raises
    ------
    NonConvergence
        If the series exhausts ``tol.max_terms`` before its tail bound drops
        below ``tol.abs_tol``.
    """
    n = operator.index(n)
    if n < 0:
        value = bessel_j(-n, t, tol)
        return -value if n & 1 else value
    t = _as_number(t)
    if _is_zero(t):
        one = 1.0 if n == 0 else 0.0
        return complex(one) if isinstance(t, complex) else one
    value = _ascending(n, t, tol)
    if value is None:
        value = _miller(n, t)[n]
        value = complex(value) if isinstance(t, complex) else float(value)
    return value


def bessel_j_row(n_max, t):
    """Return ``[J_0(t), ..., J_{n_max}(t)]`` as a numpy array."""
    n_max = operator.index(n_max)
    if n_max < 0:
        raise ValueError(f"n_max must be non-negative, got {n_max}")
    t = _as_number(t)
    if _is_zero(t):
        row = np.zeros(n_max + 1, dtype=complex if isinstance(t, complex) else float)
        row[0] = 1.0
        return row
    if abs(t) < _TINY_ARGUMENT:
        # backward recurrence overflows on 2k/t here; the series is a few terms
        dtype = complex if isinstance(t, complex) else float
        return np.array([_ascending(k, t, DEFAULT_TOL) for k in range(n_max + 1)], dtype=dtype)
    return _miller(n_max, t)


def bessel_j_orders(n_lo, n_hi, t):
    """:math:`J_\\nu(t)` for every integer ``n_lo <= nu <= n_hi`` (any signs)."""
    top = max(abs(n_lo), abs(n_hi))
    row = bessel_j_row(top, t)
    orders = np.arange(n_lo, n_hi + 1)
    values = row[np.abs(orders)]
    odd_negative = (orders < 0) & (orders % 2 == 1)
    values[odd_negative] = -values[odd_negative]
    return values


def bessel_j_derivative(n, t):
    """:math:`J'_n(t) = (J_{n-1}(t) - J_{n+1}(t))/2`."""
    return 0.5 * (bessel_j(n - 1, t) - bessel_j(n + 1, t))


def meissel_j(n, t, second_order=False):
    r"""Tangent-form approximation of :math:`J_n(t)` for ``t > |n|``.

    Writing :math:`t = \nu\sec\beta`, the returned complex number is

    .. math::
        \sqrt{\frac{2}{\pi\nu\tan\beta}}\,
        e^{i[\nu(\tan\beta - \beta) - \pi/4]}

    whose real part estimates :math:`J_n(t)` (the complex value itself
    approximates :math:`H^{(1)}_n(t)`).  With ``second_order`` the next
    Debye term, a factor :math:`1 - \tfrac{i}{24}(3/r + 5\nu^2/r^3)` with
    :math:`r = \sqrt{t^2-\nu^2}`, is included.

    Raises
    ------
    RegimeViolation
        Unless ``(n, t)`` is in the tangent regime, i.e. ``t > |n|`` and
        ``|t - |n|| > CAUSTIC_WIDTH * |n|**(1/3)``.
    """
    n = operator.index(n)
    nu = abs(n)
    regime = AsymptoticRegime.classify(nu, t)
    if regime.tag != TANGENT:
        raise RegimeViolation(f"({n}, {t}) is in the {regime.tag} regime")
    r = math.sqrt(t * t - nu * nu)
    phase = r - nu * math.acos(nu / t) - math.pi / 4
    value = math.sqrt(2.0 / (math.pi * r)) * cmath.exp(1j * phase)
    if second_order:
        value *= 1 - 1j * (3.0 / r + 5.0 * nu * nu / r**3) / 24.0
    if n < 0 and nu & 1:
        value = -value
    return value


def meissel_log_amplitude_phase(nu, t):
    """Return ``(P, Q)`` with :math:`J_\\nu(t) \\approx \\sqrt{2/\\pi t}\\,\\mathrm{Re}\\,e^{P+iQ}`.

    Phases follow the outgoing convention: ``Q`` grows with ``t`` and carries
    the ``-pi/4`` offset, so ``e^{P+iQ}`` tracks :math:`H^{(1)}_\\nu`.
    Vectorised over ``nu``; callers are responsible for staying in the
    tangent regime.
    """
    nu = np.abs(np.asarray(nu, dtype=float))
    ratio = nu / t
    r = np.sqrt(t * t - nu * nu)
    log_amp = -0.25 * np.log1p(-ratio * ratio)
    phase = r - nu * np.arccos(ratio) - np.pi / 4
    return log_amp, phase


def _hankel_pq(nu, x):
    mu = 4.0 * nu * nu
    p = 0.0
    q = 0.0
    term = 1.0
    prev = math.inf
    for k in range(0, 60):
        if k > 0:
            term *= (mu - (2 * k - 1) ** 2) / (k * 8.0 * x)
        a = abs(term)
        if a > prev and k > 2:
            break
        sign = -1.0 if (k // 2) % 2 else 1.0
        if k % 2 == 0:
            p += sign * term
        else:
            q += sign * term
        if a < 1e-17:
            break
        prev = a
    return p, q


def _jy_asymptotic(nu, x):
    p, q = _hankel_pq(nu, x)
    chi = x - (nu / 2.0 + 0.25) * math.pi
    amp = math.sqrt(2.0 / (math.pi * x))
    return amp * (p * math.cos(chi) - q * math.sin(chi)), amp * (
        p * math.sin(chi) + q * math.cos(chi)
    )


def bessel_y0(x):
    """Neumann function :math:`Y_0(x)` for ``x > 0``."""
    x = float(x)
    if not x > 0:
        raise DomainError(f"Y0 requires x > 0, got {x!r}")
    if x > Y_SPLIT:
        return _jy_asymptotic(0, x)[1]
    q = x * x / 4.0
    term = 1.0
    harmonic = 0.0
    acc = 0.0
    for k in range(1, 200):
        term *= q / (k * k)
        harmonic += 1.0 / k
        contrib = term * harmonic
        acc += contrib if k % 2 else -contrib
        if contrib < 1e-18 * max(1.0, abs(acc)):
            break
    return (2.0 / math.pi) * ((math.log(x / 2.0) + EULER_GAMMA) * bessel_j(0, x) + acc)


def bessel_y1(x):
    """Neumann function :math:`Y_1(x)` for ``x > 0``."""
    x = float(x)
    if not x > 0:
        raise DomainError(f"Y1 requires x > 0, got {x!r}")
    if x > Y_SPLIT:
        return _jy_asymptotic(1, x)[1]
    q = -x * x / 4.0
    term = 1.0  # (-x^2/4)^k / (k! (k+1)!)
    h_k = 0.0
    acc = 0.0
    for k in range(0, 200):
        if k > 0:
            term *= q / (k * (k + 1))
            h_k += 1.0 / k
        digamma_sum = 2.0 * (-EULER_GAMMA) + h_k + h_k + 1.0 / (k + 1)
        contrib = digamma_sum * term
        acc += contrib
        if k > 2 and abs(contrib) < 1e-18 * max(1.0, abs(acc)):
            break
    return (
        -2.0 / (math.pi * x)
        + (2.0 / math.pi) * math.log(x / 2.0) * bessel_j(1, x)
        - (x / 2.0) * acc / math.pi
    )


def bessel_y(n, x):
    """Integer-order :math:`Y_n(x)` by forward recurrence from Y0 and Y1."""
    n = operator.index(n)
    if n < 0:
        value = bessel_y(-n, x)
        return -value if n & 1 else value
    y_prev = bessel_y0(x)
    if n == 0:
        return y_prev
    y = bessel_y1(x)
    for k in range(1, n):
        y_prev, y = y, (2.0 * k / x) * y - y_prev
    return y


def hankel1(n, x):
    """:math:`H^{(1)}_n(x) = J_n(x) + i Y_n(x)` for real ``x > 0``."""
    x = float(x)
    if not x > 0:
        raise DomainError(f"H^(1) is singular for x <= 0, got {x!r}")
    return complex(bessel_j(n, x), bessel_y(n, x))


def hankel1_1(x):
    """:math:`H^{(1)}_1(x)`; raises :class:`DomainError` for ``x <= 0``."""
    return hankel1(1, x)
