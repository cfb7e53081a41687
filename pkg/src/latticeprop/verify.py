"""Identity suite: every numerical invariant of the library as a named check.

Each check returns its worst residual and the tolerance it must meet.
Random cases come from a single seeded generator, so a report is
reproducible from its recorded seed.
"""

from __future__ import annotations

import cmath
import math
import time
from dataclasses import asdict, dataclass

import numpy as np

from . import evolve, helmholtz, kernel, pathsum, specfun
from .errors import LatticePropError

SUITES = ("specfun", "kernel", "pathsum", "evolve", "helmholtz")
DEFAULT_SEED = 20240611


@dataclass
class CheckResult:
    check_id: str
    anchor: str
    residual: float
    tolerance: float
    passed: bool
    seconds: float
    detail: str = ""


_REGISTRY = []


def check(suite, anchor, tolerance):
    """Register ``func(rng) -> residual`` under ``suite``."""

    def wrap(func):
        _REGISTRY.append((suite, func.__name__, anchor, tolerance, func))
        return func

    return wrap


def registered(suite="all"):
    return [entry for entry in _REGISTRY if suite == "all" or entry[0] == suite]


# ---------------------------------------------------------------- specfun


@check("specfun", "ascending series vs backward recurrence", 1e-13)
def series_vs_recurrence(rng):
    worst = 0.0
    for t in (0.5, 1.0, 2.0, 3.5):
        row = specfun.bessel_j_row(12, t)
        for n in range(13):
            worst = max(worst, abs(specfun.bessel_j(n, t) - row[n]))
    return worst


@check("specfun", "Bessel normalisation sum J0^2 + 2 sum Jn^2 = 1", 1e-13)
def normalisation_sum(rng):
    worst = 0.0
    for t in rng.uniform(0.1, 40.0, 8):
        row = specfun.bessel_j_row(kernel.window(t), t)
        worst = max(worst, abs(row[0] ** 2 + 2 * np.sum(row[1:] ** 2) - 1))
    return worst


@check("specfun", "Jacobi-Anger generating function", 1e-12)
def jacobi_anger(rng):
    worst = 0.0
    for t, theta in zip(rng.uniform(0.1, 30.0, 8), rng.uniform(0, 2 * math.pi, 8)):
        p_max = kernel.window(t)
        orders = np.arange(-p_max, p_max + 1)
        series = np.sum(kernel.kernel_row(p_max, t) * np.exp(1j * orders * theta))
        worst = max(worst, abs(series - cmath.exp(1j * t * math.cos(theta))))
    return worst


@check("specfun", "three-term recurrence in the order", 1e-12)
def three_term_recurrence(rng):
    worst = 0.0
    for t in rng.uniform(0.2, 25.0, 10):
        for n in range(1, 15):
            lhs = specfun.bessel_j(n - 1, t) + specfun.bessel_j(n + 1, t)
            worst = max(worst, abs(lhs - 2 * n / t * specfun.bessel_j(n, t)))
    return worst


@check("specfun", "Wronskian of J and Y", 1e-10)
def wronskian(rng):
    worst = 0.0
    for x in rng.uniform(0.3, 40.0, 10):
        for n in range(4):
            w = specfun.bessel_j(n + 1, x) * specfun.bessel_y(n, x) - specfun.bessel_j(n, x) * specfun.bessel_y(n + 1, x)
            worst = max(worst, abs(w * math.pi * x / 2 - 1))
    return worst


@check("specfun", "tangent asymptotics vs exact J", 2e-3)
def tangent_asymptotics(rng):
    worst = 0.0
    for n, t in ((0, 60.0), (5, 50.0), (10, 100.0), (20, 80.0)):
        r = math.sqrt(t * t - n * n)
        approx = specfun.meissel_j(n, t, second_order=True).real
        worst = max(worst, abs(approx - specfun.bessel_j(n, t)) / math.sqrt(2 / (math.pi * r)))
    return worst


# ---------------------------------------------------------------- kernel


@check("kernel", "identity at t = 0", 0.0)
def identity_at_zero(rng):
    return max(abs(kernel.k1d(n, m, 0.0) - (n == m)) for n in range(-5, 6) for m in range(-5, 6))


@check("kernel", "composition law (Neumann addition)", 1e-10)
def composition_law(rng):
    worst = 0.0
    for _ in range(20):
        n, m = rng.integers(-8, 9, 2)
        t1, t2 = rng.uniform(0.1, 10.0, 2)
        L = kernel.window(t1 + t2) + max(abs(n), abs(m))
        worst = max(worst, kernel.composition_residual(int(n), int(m), t1, t2, L))
    return worst


@check("kernel", "lattice Schrodinger equation for t > 0", 1e-12)
def greens_equation(rng):
    worst = 0.0
    for _ in range(50):
        n, m = rng.integers(-10, 11, 2)
        worst = max(worst, kernel.greens_residual(int(n), int(m), rng.uniform(0.05, 20.0)))
    return worst


@check("kernel", "time derivative by finite differences", 1e-7)
def time_derivative_fd(rng):
    worst = 0.0
    h = 1e-4
    for _ in range(10):
        p = int(rng.integers(-6, 7))
        t = rng.uniform(1.0, 15.0)
        dk = (kernel.k1d(p, 0, t + h) - kernel.k1d(p, 0, t - h)) / (2 * h)
        hop = -0.5 * (kernel.k1d(p + 1, 0, t) + kernel.k1d(p - 1, 0, t))
        worst = max(worst, abs(hop - 1j * dk))
    return worst


@check("kernel", "unitarity of a kernel row", 1e-10)
def unitarity(rng):
    worst = 0.0
    for t in np.linspace(0.0, 20.0, 21):
        row = kernel.kernel_row(kernel.window(t), t)
        worst = max(worst, abs(np.sum(np.abs(row) ** 2) - 1))
    return worst


@check("kernel", "site-exchange symmetry", 1e-15)
def exchange_symmetry(rng):
    return max(
        abs(kernel.k1d(n, 0, t) - kernel.k1d(0, n, t)) for n in range(-7, 8) for t in (0.3, 4.0, 17.0)
    )


@check("kernel", "continuum limit second-order convergence", 0.5)
def continuum_order(rng):
    errs = []
    for a in (0.05, 0.025, 0.0125):
        cp = kernel.ContinuumParams(a, 1.0, 1.0, 0.5, 0.0, 1.0)
        errs.append(abs(kernel.continuum_branch(cp.sites, 0, cp.t) - kernel.continuum_kernel(cp)))
    ratios = [errs[i] / errs[i + 1] for i in range(len(errs) - 1)]
    return max(abs(r - 8.0) / 8.0 for r in ratios)


# ---------------------------------------------------------------- pathsum


@check("pathsum", "path count vs brute-force enumeration", 0.0)
def path_counting(rng):
    mismatches = 0
    for S in range(15):
        for d in range(-S, S + 1):
            if pathsum.count_paths(S, d, 0) != len(pathsum.enumerate_unit_step_paths(S, d, 0)):
                mismatches += 1
    return float(mismatches)


@check("pathsum", "ascending path-length series vs kernel", 1e-10)
def series_reconstruction(rng):
    worst = 0.0
    for d in range(-6, 7):
        for t in np.linspace(0.0, 6.0, 7):
            worst = max(worst, abs(pathsum.series_reconstruction(d, 0, t) - kernel.k1d(d, 0, t)))
    return worst


@check("pathsum", "multinomial collapse of path weights", 1e-12)
def multinomial_collapse(rng):
    return max(
        pathsum.multinomial_collapse_check(S, N, 1.7) for S in range(13) for N in range(7)
    )


@check("pathsum", "multi-slice sum vs kernel", 1e-9)
def slice_invariance(rng):
    worst = 0.0
    cases = [(0, 0, 2.0), (3, 0, 4.0), (-2, 1, 1.5), (5, 5, 6.0), (1, -1, 0.7),
             (4, -2, 3.3), (0, 3, 5.0), (-6, 0, 8.0), (2, 2, 0.2), (7, 1, 9.0)]
    for n, m, t in cases:
        for N in (1, 2, 3):
            worst = max(worst, abs(pathsum.multi_slice_sum(n, m, t, N) - kernel.k1d(n, m, t)))
    return worst


@check("pathsum", "phase of each path term set by its length", 1e-12)
def phase_law(rng):
    worst = 0.0
    for _ in range(40):
        N = int(rng.integers(1, 5))
        path = tuple(int(v) for v in rng.integers(-4, 5, N + 2))
        t = rng.uniform(0.05, 2.3) * (N + 1)
        worst = max(worst, pathsum.phase_law_residual(path, t))
    return worst


# ---------------------------------------------------------------- evolve


def _random_field(rng, size=6):
    amps = rng.normal(size=size) + 1j * rng.normal(size=size)
    return evolve.WaveField(int(rng.integers(-5, 5)), amps / np.linalg.norm(amps))


def _aligned(a, b):
    lo = min(a.n_lo, b.n_lo)
    hi = max(a.n_hi, b.n_hi)
    out = np.zeros((2, hi - lo + 1), dtype=complex)
    out[0, a.n_lo - lo : a.n_hi - lo + 1] = a.amplitudes
    out[1, b.n_lo - lo : b.n_hi - lo + 1] = b.amplitudes
    return out


@check("evolve", "norm conservation under evolution", 1e-10)
def norm_conservation(rng):
    worst = 0.0
    for t in (0.5, 3.0, 11.0, 20.0):
        f = _random_field(rng)
        worst = max(worst, abs(evolve.evolve_field(f, t).norm() - 1))
    return worst


@check("evolve", "linearity of evolution", 1e-12)
def linearity(rng):
    f, g = _random_field(rng), _random_field(rng)
    alpha, beta = complex(*rng.normal(size=2)), complex(*rng.normal(size=2))
    both = _aligned(f, g)
    lo = min(f.n_lo, g.n_lo)
    combo = evolve.WaveField(lo, alpha * both[0] + beta * both[1])
    t = 6.5
    lhs = evolve.evolve_field(combo, t)
    rhs_parts = _aligned(evolve.evolve_field(f, t), evolve.evolve_field(g, t))
    rhs = evolve.WaveField(lhs.n_lo, alpha * rhs_parts[0] + beta * rhs_parts[1])
    diff = _aligned(lhs, rhs)
    return float(np.max(np.abs(diff[0] - diff[1])))


@check("evolve", "time reversal through complex conjugation", 1e-9)
def time_reversal(rng):
    f = _random_field(rng)
    t = 7.0
    forward = evolve.evolve_field(f, t)
    back = evolve.evolve_field(evolve.WaveField(forward.n_lo, np.conj(forward.amplitudes)), t)
    diff = _aligned(back, evolve.WaveField(f.n_lo, np.conj(f.amplitudes)))
    return float(np.max(np.abs(diff[0] - diff[1])))


@check("evolve", "density beyond the light front", 1e-8)
def light_front(rng):
    worst = 0.0
    for t in np.linspace(1.0, 20.0, 20):
        edge = int(math.ceil(t + 25))
        worst = max(worst, max(evolve.point_source_density(n, t) for n in (edge, edge + 5, -edge)))
    return worst


@check("evolve", "shutter series vs direct convolution", 1e-8)
def shutter_vs_convolution(rng):
    worst = 0.0
    for t, k in ((3.0, 0.0), (7.0, 1.1), (12.0, 2.5)):
        L = math.ceil(t) + 60
        field = evolve.WaveField(-L, np.exp(1j * k * np.arange(-L, 1)))
        evolved = evolve.evolve_field(field, t)
        for n in range(-8, 12):
            worst = max(worst, abs(evolve.shutter_psi(n, t, k) - evolved.at(n)))
    return worst


@check("evolve", "shutter amplitude sum rule at the origin", 1e-10)
def origin_sum_rule(rng):
    return max(
        evolve.psi0_reflection_identity_residual(q, t)
        for q, t in zip(rng.uniform(-math.pi, math.pi, 25), rng.uniform(0.0, 30.0, 25))
    )


@check("evolve", "shutter value rebuilt from the origin", 1e-9)
def from_origin(rng):
    return max(
        abs(evolve.shutter_psi_from_origin(n, t, k) - evolve.shutter_psi(n, t, k))
        for n, t, k in ((1, 3.0, 0.4), (5, 10.0, 1.0), (9, 6.0, 2.9), (3, 25.0, 5.0))
    )


@check("evolve", "shutter closed form at k = 0", 1e-10)
def k0_closed_form(rng):
    return max(
        abs(evolve.shutter_k0_closed(n, t) - evolve.shutter_psi(n, t, 0.0))
        for n in range(0, 8)
        for t in (0.0, 1.0, 4.5, 9.0, 20.0)
    )


@check("evolve", "Poissonian edge closed form vs direct sum", 1e-9)
def poisson_closed_form(rng):
    worst = 0.0
    for b in (0.0, 1.0, 2.0, -0.7):
        for n, t in ((0, 0.5), (3, 5.0), (-4, 7.0), (8, 2.0), (2, 12.0)):
            worst = max(worst, abs(evolve.poisson_edge_closed(n, t, b) - evolve.poisson_edge_direct(n, t, b)))
    return worst


@check("evolve", "Lommel expansion", 1e-10)
def lommel(rng):
    cases = [(2, 4.0, 0.5), (0, 1.0, -0.19), (3, 6.0, 1.2), (-2, 3.0, 0.3), (5, 8.0, -0.4)]
    return max(evolve.lommel_expansion_residual(nu, z, w, 60) for nu, z, w in cases)


@check("evolve", "circular waves solve the planar Helmholtz equation", 1e-3)
def circular_helmholtz(rng):
    worst = 0.0
    for n, center in ((0, (2.0, 1.0)), (3, (-1.5, 3.0)), (-2, (4.0, -2.0))):
        values = evolve.sample_circular_field(n, center, 4, 0.02)
        worst = max(worst, evolve.helmholtz_residual(values, 0.02))
    return worst


@check("evolve", "partial sums of circular waves vs shutter series", 1e-9)
def circular_vs_shutter(rng):
    worst = 0.0
    for n, r, phi in ((0, 3.0, 0.4), (4, 7.5, 2.0), (-3, 5.0, 4.0)):
        lhs = evolve.circular_partial_sum(n, r, phi) * cmath.exp(1j * n * phi)
        worst = max(worst, abs(lhs - evolve.shutter_psi(n, r, phi)))
    return worst


@check("evolve", "ladder recursion in the site index", 1e-4)
def ladder(rng):
    worst = 0.0
    for steps in (1, 2, 3):
        for t, k in ((8.0, 1.0), (3.0, 2.5)):
            exact = evolve.shutter_psi(steps, t, k)
            worst = max(worst, abs(evolve.ladder_apply(0, t, k, steps) - exact) / abs(exact))
    return worst


@check("evolve", "inverse-time decay of the averaged density", 3.0)
def inverse_time(rng):
    values = [evolve.scaled_density_average(0, t, 1.5 * math.pi) for t in (50.0, 100.0, 200.0)]
    return max(values) / min(values)


@check("evolve", "short-time density ahead of the shutter", 2.0)
def short_time(rng):
    worst = 1.0
    for n in range(1, 9):
        for t in (0.25, 0.5, 1.0):
            ratio = abs(evolve.shutter_psi(n, t, 0.7)) ** 2 / evolve.short_time_density(n, t)
            worst = max(worst, ratio, 1 / ratio)
    return worst


# ---------------------------------------------------------------- helmholtz


@check("helmholtz", "continuous kernel: Hankel form vs plane-wave quadrature", 1e-5)
def continuous_closed_form(rng):
    worst = 0.0
    for dx, z, E in ((0.0, 1.0, 1.0), (0.7, 2.0, 1.0), (-1.5, 0.5, 1.0), (3.0, 4.0, 1.0),
                     (0.0, 0.5, 4.0), (1.0, 1.0, 4.0), (-2.0, 3.0, 4.0), (0.3, 6.0, 4.0),
                     (0.0, 2.0, 25.0), (0.5, 1.0, 25.0), (-1.0, 4.0, 25.0), (2.5, 0.8, 25.0)):
        closed = helmholtz.continuous_kernel_closed(dx, z, E)
        quad = helmholtz.continuous_kernel_quadrature(dx, z, E)
        worst = max(worst, abs(closed - quad) / abs(closed))
    return worst


@check("helmholtz", "paraxial error decreases with energy", 0.0)
def paraxial_trend(rng):
    errs = []
    for E in (4.0, 25.0, 100.0):
        closed = helmholtz.continuous_kernel_closed(1.0, 20.0, E)
        errs.append(abs(helmholtz.paraxial_kernel(1.0, 20.0, E) - closed) / abs(closed))
    return float(sum(b >= a for a, b in zip(errs, errs[1:])))


@check("helmholtz", "operational correction beats zeroth order", 2.0)
def operational_ordering(rng):
    losses = 0
    for p, tau, E in ((0, 2.0, 25.0), (2, 2.0, 25.0), (1, 1.0, 36.0), (3, 3.0, 49.0), (-2, 2.5, 64.0),
                      (4, 4.0, 100.0), (0, 5.0, 100.0), (1, 2.0, 225.0), (-3, 3.5, 400.0), (5, 6.0, 400.0)):
        z = tau * math.sqrt(E)
        exact = helmholtz.discrete_kernel_quadrature(p, z, E)
        corrected = abs(helmholtz.operational_kernel_approx(p, z, E) - exact)
        zeroth = abs(helmholtz.operational_kernel_approx(p, z, E, coeff=0.0) - exact)
        losses += corrected >= zeroth
    return float(losses)


@check("helmholtz", "edge field: half-lattice sum vs spectral route", 1e-6)
def edge_dual_route(rng):
    worst = 0.0
    for n, z, E, kx in ((0, 5.0, 25.0, 1.0), (3, 10.0, 3.0, 0.5), (-2, 4.0, 10.0, 2.0), (5, 20.0, 100.0, 0.0),
                        (1, 1.0, 2.5, 3.0), (-4, 8.0, 6.0, 4.5), (2, 15.0, 50.0, 5.5), (0, 0.5, 4.0, 0.1),
                        (6, 12.0, 9.0, 1.6), (-1, 30.0, 400.0, 2.2)):
        a = helmholtz.edge_wavefunction(n, z, E, kx, route="sites")
        b = helmholtz.edge_wavefunction(n, z, E, kx, route="spectral")
        worst = max(worst, abs(a - b))
    return worst


@check("helmholtz", "edge field approaches the corrected shutter solution", 0.0)
def shutter_correspondence(rng):
    residuals = [helmholtz.shutter_correspondence_residual(3, 2.0 * math.sqrt(E), E, 1.0)[0] for E in (25.0, 100.0, 400.0)]
    return float(sum(b >= a for a, b in zip(residuals, residuals[1:])))


@check("helmholtz", "evanescent band damps the discrete kernel", 0.0)
def evanescent_decay(rng):
    mags = [abs(helmholtz.discrete_kernel_quadrature(0, z, 1.0)) for z in (1.0, 2.0, 4.0, 8.0)]
    return float(sum(b >= a for a, b in zip(mags, mags[1:])))


# ---------------------------------------------------------------- driver


def run_suite(suite="all", seed=DEFAULT_SEED, tol_scale=1.0):
    """Run every check in ``suite`` and return a JSON-ready report."""
    if suite != "all" and suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    results = []
    for index, (group, name, anchor, tolerance, func) in enumerate(registered(suite)):
        rng = np.random.default_rng([seed, index])
        started = time.perf_counter()
        detail = ""
        try:
            residual = float(func(rng))
        except (LatticePropError, ArithmeticError, ValueError) as exc:
            residual, detail = math.inf, f"{type(exc).__name__}: {exc}"
        limit = tolerance * tol_scale
        passed = bool(np.isfinite(residual) and residual <= limit)
        results.append(
            CheckResult(f"{group}.{name}", anchor, residual, limit, passed, time.perf_counter() - started, detail)
        )
    failed = [r.check_id for r in results if not r.passed]
    return {
        "suite": suite,
        "seed": seed,
        "tol_scale": tol_scale,
        "n_checks": len(results),
        "n_failed": len(failed),
        "passed": not failed,
        "failed": failed,
        "checks": [asdict(r) for r in results],
    }
