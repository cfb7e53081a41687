r"""Discrete Feynman sums over lattice paths.

Composing the kernel over ``N + 1`` equal time slices writes
:math:`K(n,m;t)` as a sum over paths :math:`(\nu_0=m, \nu_1, \dots,
\nu_N, \nu_{N+1}=n)` of products of slice kernels.  Each term carries the
phase :math:`e^{i\pi S/2}` of its total length
:math:`S = \sum_j |\nu_{j+1}-\nu_j|` and a real weight built from Bessel
functions of the partial lengths.

The functions here evaluate that sum directly (explicit enumeration or
banded convolution), count paths of fixed length, check the multinomial
collapse of the weights, and rebuild the kernel from the resulting
ascending series in ``t``.
"""

from __future__ import annotations

import cmath
import itertools
import math
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from . import kernel, specfun
from .errors import BudgetExceeded, DomainError

#: largest S accepted by the brute-force unit-step enumerator
MAX_ENUMERATED_LENGTH = 20

#: maximum number of site tuples materialised by explicit enumeration
ENUMERATION_BUDGET = 1_000_000

#: first zero of J_0; below it every J_s(x), s >= 0, is positive
J0_FIRST_ZERO = 2.404825557695773


class PathWeight(NamedTuple):
    """Leading small-``t`` weight of a path: ``w(t) * F[path]``."""

    w: float
    F: Fraction


def action(path: Sequence[int]) -> int:
    """Total length :math:`S=\\sum_j |\\nu_{j+1}-\\nu_j|` of a lattice path."""
    return sum(abs(b - a) for a, b in zip(path[:-1], path[1:]))


def count_paths(S: int, n: int, m: int) -> int:
    """Number of unit-step orderings of total length ``S`` from ``m`` to ``n``.

    Zero when ``S < |n - m|`` or when ``S`` and ``n - m`` differ in parity.
    """
    d = n - m
    if S < abs(d) or (S - d) % 2:
        return 0
    return math.comb(S, (S + d) // 2)


def enumerate_unit_step_paths(S: int, n: int, m: int) -> list[tuple[int, ...]]:
    """All sequences of ``S`` steps of ``+1``/``-1`` leading from ``m`` to ``n``."""
    if S > MAX_ENUMERATED_LENGTH:
        raise BudgetExceeded(f"S={S} exceeds the enumeration guard {MAX_ENUMERATED_LENGTH}")
    d = n - m
    if S < abs(d) or (S - d) % 2:
        return []
    rights = (S + d) // 2
    paths = []
    for positions in itertools.combinations(range(S), rights):
        steps = [-1] * S
        for p in positions:
            steps[p] = 1
        paths.append(tuple(steps))
    return paths


def path_product_term(path: Sequence[int], t: float) -> complex:
    """Product of slice kernels along ``path`` with equal slices ``t/(len-1)``.

    Each factor is written as :math:`i^{|s|} J_{|s|}(\\Delta t)`, which equals
    the kernel by its symmetry, so the phase of the product is carried
    entirely by the total length.
    """
    if not t > 0:
        raise DomainError("path terms are defined for t > 0")
    if len(path) < 2:
        raise DomainError("a path needs at least its two endpoints")
    dt = t / (len(path) - 1)
    value = 1 + 0j
    for a, b in zip(path[:-1], path[1:]):
        s = abs(b - a)
        value *= kernel.i_power(s) * specfun.bessel_j(s, dt)
    return value


def path_weight(path: Sequence[int], t: float) -> PathWeight:
    """Leading-order weight split into a path-independent and a path-dependent part.

    ``w = (t / (2 (N+1)))**S`` depends only on the total length, and
    ``F = prod_j 1 / S_j!`` on the partial lengths.
    """
    slices = len(path) - 1
    F = Fraction(1)
    for a, b in zip(path[:-1], path[1:]):
        F /= math.factorial(abs(b - a))
    return PathWeight((t / (2 * slices)) ** action(path), F)


def phase_law_residual(path: Sequence[int], t: float) -> float:
    """Distance (mod 2 pi) between the term phase and ``pi * S / 2``.

    Only meaningful while every slice time is below the first zero of
    :math:`J_0`, so no Bessel factor changes sign.
    """
    dt = t / (len(path) - 1)
    if dt >= J0_FIRST_ZERO:
        raise DomainError(f"slice time {dt} reaches a Bessel zero; phase law not testable")
    term = path_product_term(path, t)
    delta = cmath.phase(term) - 0.5 * math.pi * action(path)
    return abs(math.remainder(delta, 2 * math.pi))


def iter_paths(n: int, m: int, N: int, site_window: int):
    """Yield every path with ``N`` intermediate sites in ``[m - W, m + W]``."""
    sites = range(m - site_window, m + site_window + 1)
    for middle in itertools.product(sites, repeat=N):
        yield (m, *middle, n)


def _enumerated_sum(n, m, t, N, site_window):
    width = 2 * site_window + 1
    dt = t / (N + 1)
    # kernel values for every possible hop between sites in the window
    span = width + abs(n - m)
    row = kernel.kernel_row(span, dt)
    idx = np.indices((width,) * N).reshape(N, -1) + (m - site_window)
    nodes = np.vstack([np.full(idx.shape[1], m), idx, np.full(idx.shape[1], n)])
    hops = np.diff(nodes, axis=0)
    terms = np.prod(row[hops + span], axis=0)
    return complex(np.sum(terms))


def _convolved_sum(n, m, t, N, site_window):
    dt = t / (N + 1)
    reach = kernel.window(dt)
    row = kernel.kernel_row(reach, dt)
    state = np.zeros(2 * site_window + 1, dtype=complex)
    state[site_window] = 1.0
    for _ in range(N + 1):
        state = np.convolve(state, row, mode="same") if state.size >= row.size else (
            np.convolve(state, row)[reach:reach + state.size]
        )
    offset = n - m + site_window
    if not 0 <= offset < state.size:
        return 0j
    return complex(state[offset])


def multi_slice_sum(n, m, t, N, site_window=None, mode="auto"):
    """Kernel rebuilt from ``N + 1`` equal slices and ``N`` summed intermediate sites.

    Parameters
    ----------
    n, m : int
        End and start sites.
    t : float
        Total time, ``t > 0``.
    N : int
        Number of intermediate slices (``N >= 1``).
    site_window : int, optional
        Intermediate sites range over ``[m - W, m + W]``.  Defaults to
        ``ceil(t) + 40 + |n - m|``.
    mode : {"auto", "enumerate", "convolve"}
        ``"enumerate"`` materialises every site tuple and raises
        :class:`BudgetExceeded` when there are more than
        ``ENUMERATION_BUDGET`` of them; ``"convolve"`` iterates a banded
        convolution; ``"auto"`` enumerates when within budget.
    """
    if not t > 0:
        raise DomainError("multi-slice sum requires t > 0")
    if N < 1:
        raise DomainError("need at least one intermediate slice")
    if site_window is None:
        site_window = kernel.window(t) + abs(n - m)
    tuples = (2 * site_window + 1) ** N
    if mode == "enumerate" or (mode == "auto" and tuples <= ENUMERATION_BUDGET):
        if tuples > ENUMERATION_BUDGET:
            raise BudgetExceeded(
                f"{tuples} site tuples exceed the enumeration budget {ENUMERATION_BUDGET}"
            )
        return _enumerated_sum(n, m, t, N, site_window)
    if mode not in ("auto", "convolve"):
        raise ValueError(f"unknown mode {mode!r}")
    return _convolved_sum(n, m, t, N, site_window)


def _series_term_log(S, d, half_t):
    # log of (t/2)^S / (((S+d)/2)! ((S-d)/2)!)
    return (
        S * math.log(half_t)
        - math.lgamma((S + d) // 2 + 1)
        - math.lgamma((S - d) // 2 + 1)
    )


def default_series_cutoff(n, m, t, tail=1e-18):
    """Smallest admissible ``S_max`` whose next term is below ``tail`` and shrinking."""
    d = abs(n - m)
    half_t = abs(t) / 2
    if half_t == 0:
        return d
    S = d
    while True:
        nxt = S + 2
        decreasing = half_t * half_t < ((nxt + d) // 2) * ((nxt - d) // 2)
        if decreasing and _series_term_log(nxt, d, half_t) < math.log(tail):
            return S
        S = nxt


def series_reconstruction(n, m, t, S_max=None):
    """Kernel rebuilt as the path-length series.

    :math:`\\sum_{S=|n-m|,\\,step\\,2}^{S_{max}} e^{i\\pi S/2}(t/2)^S /
    (((S+d)/2)!\\,((S-d)/2)!)` with ``d = |n - m|``; the kernel's symmetry
    covers ``n < m``.
    """
    d = abs(n - m)
    if S_max is None:
        S_max = default_series_cutoff(n, m, t)
    if S_max < d:
        return 0j
    half_t = t / 2
    # first term (t/2)^d / d!, then ratio (-(t/2)^2) / (((S+d)/2+1)((S-d)/2+1))
    term = 1.0
    for j in range(1, d + 1):
        term *= half_t / j
    total = term
    S = d
    while S + 2 <= S_max:
        a = (S + d) // 2 + 1
        b = (S - d) // 2 + 1
        term *= -(half_t * half_t) / (a * b)
        total += term
        S += 2
    return kernel.i_power(d) * total


def compositions(S: int, parts: int):
    """Ordered tuples of ``parts`` non-negative integers summing to ``S``."""
    if parts == 1:
        yield (S,)
        return
    for first in range(S + 1):
        for rest in compositions(S - first, parts - 1):
            yield (first, *rest)


def multinomial_collapse_check(S: int, N: int, t: float) -> float:
    """Residual of the multinomial collapse of the path weights.

    Sums :math:`(t/(2(N+1)))^S\\, S!/\\prod_j S_j!` over every composition of
    ``S`` into ``N + 1`` partial lengths and compares with :math:`(t/2)^S`.
    """
    if S > 12 or N > 6:
        raise BudgetExceeded(f"(S={S}, N={N}) exceeds the composition budget (12, 6)")
    if S < 0 or N < 0:
        raise DomainError("S and N must be non-negative")
    w = (t / (2 * (N + 1))) ** S
    fact_S = math.factorial(S)
    terms = []
    for parts in compositions(S, N + 1):
        coeff = fact_S
        for s in parts:
            coeff //= math.factorial(s)
        terms.append(w * coeff)
    return abs(math.fsum(terms) - (t / 2) ** S)
