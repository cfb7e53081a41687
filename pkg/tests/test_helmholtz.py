import cmath
import math

import pytest
import scipy.special as sp

from latticeprop import helmholtz
from latticeprop.errors import DomainError, RegimeViolation


def test_closed_form_on_axis():
    E, z = 4.0, 1.5
    expected = 1j * math.sqrt(E) / 2 * sp.hankel1(1, math.sqrt(E) * z)
    assert abs(helmholtz.continuous_kernel_closed(0.0, z, E) - expected) < 1e-11


def test_closed_form_vs_quadrature():
    q = helmholtz.continuous_kernel_quadrature(0.7, 2.0, 1.0)
    c = helmholtz.continuous_kernel_closed(0.7, 2.0, 1.0)
    assert abs(q - c) / abs(c) < 1e-5


def test_quadrature_is_even_in_separation():
    a = helmholtz.continuous_kernel_quadrature(1.3, 1.0, 4.0)
    b = helmholtz.continuous_kernel_quadrature(-1.3, 1.0, 4.0)
    assert abs(a - b) < 1e-12


def test_closed_form_regular_near_screen():
    value = helmholtz.continuous_kernel_closed(1.0, 1e-6, 4.0)
    assert cmath.isfinite(value) and abs(value) < 1e-4


def test_paraxial():
    c = helmholtz.continuous_kernel_closed(1.0, 20.0, 100.0)
    p = helmholtz.paraxial_kernel(1.0, 20.0, 100.0)
    assert abs(p - c) / abs(c) < 0.03
    assert abs(helmholtz.paraxial_kernel(0.5, 20.0, 100.0)) == pytest.approx(abs(p))
    with pytest.raises(RegimeViolation):
        helmholtz.paraxial_kernel(0.0, 0.5, 1.0)


def test_domain_errors():
    with pytest.raises(DomainError):
        helmholtz.continuous_kernel_closed(0.0, 0.0, 1.0)
    with pytest.raises(DomainError):
        helmholtz.operational_kernel_approx(0, 1.0, 1.5)


def test_band_root_branch():
    root = helmholtz.band_root(math.pi, 1.0)
    assert root.real == pytest.approx(0.0, abs=1e-15) and root.imag == pytest.approx(1.0)


def test_discrete_kernel_symmetry_and_limit():
    a = helmholtz.discrete_kernel_quadrature(3, 4.0, 10.0)
    b = helmholtz.discrete_kernel_quadrature(-3, 4.0, 10.0)
    assert abs(a - b) < 1e-12
    # a thin slab barely moves the wave
    assert abs(helmholtz.discrete_kernel_quadrature(0, 1e-8, 10.0) - 1) < 1e-7


def test_discrete_kernel_against_operational():
    z, E = 10.0, 25.0
    exact = helmholtz.discrete_kernel_quadrature(2, z, E)
    corrected = helmholtz.operational_kernel_approx(2, z, E)
    zeroth = helmholtz.operational_kernel_approx(2, z, E, coeff=0.0)
    assert abs(corrected - exact) < abs(zeroth - exact)


def test_operational_error_falls_with_energy():
    errs = []
    for E in (25.0, 100.0):
        z = 2.0 * math.sqrt(E)
        errs.append(abs(helmholtz.operational_kernel_approx(2, z, E) - helmholtz.discrete_kernel_quadrature(2, z, E)))
    assert errs[1] < errs[0]


def test_evanescent_band_decays():
    mags = [abs(helmholtz.discrete_kernel_quadrature(0, z, 1.0)) for z in (1.0, 2.0, 4.0, 8.0)]
    assert mags == sorted(mags, reverse=True)


def test_edge_routes_agree():
    for n, z, E, kx in ((0, 5.0, 25.0, 1.0), (3, 10.0, 3.0, 0.5)):
        a = helmholtz.edge_wavefunction(n, z, E, kx, route="sites")
        b = helmholtz.edge_wavefunction(n, z, E, kx, route="spectral")
        assert abs(a - b) < 1e-6
    with pytest.raises(DomainError):
        helmholtz.edge_wavefunction(0, 1.0, 1.0, 0.0, route="sites")


def test_edge_boundary_limit():
    kx = 1.0
    assert abs(helmholtz.edge_wavefunction(-2, 1e-6, 25.0, kx) - cmath.exp(-2j * kx)) < 1e-4
    assert abs(helmholtz.edge_wavefunction(2, 1e-6, 25.0, kx)) < 1e-6


def test_edge_as_convolution_of_kernel():
    import numpy as np

    n, z, E, kx = 1, 6.0, 16.0, 0.7
    ms = np.arange(-helmholtz.edge_window(z, E), 1)
    total = sum(cmath.exp(1j * kx * m) * helmholtz.discrete_kernel_quadrature(n - int(m), z, E) for m in ms)
    assert abs(total - helmholtz.edge_wavefunction(n, z, E, kx, route="spectral")) < 1e-6


def test_edge_profile_matches_pointwise():
    prof = helmholtz.edge_profile(-3, 3, 4.0, 1.5, 0.4)
    for i, n in enumerate(range(-3, 4)):
        assert abs(prof[i] - helmholtz.edge_wavefunction(n, 4.0, 1.5, 0.4, route="spectral")) < 1e-10


def test_shutter_correspondence():
    corrected, zeroth = helmholtz.shutter_correspondence_residual(3, 40.0, 400.0, 1.0)
    assert corrected < zeroth
    res = [helmholtz.shutter_correspondence_residual(3, 2 * math.sqrt(E), E, 1.0)[0] for E in (25.0, 100.0, 400.0)]
    assert res[0] > res[1] > res[2]
    small = helmholtz.shutter_correspondence_residual(0, 1e-6, 25.0, 1.0)
    assert max(small) < 1e-5
