"""Weighted coherent-state transform, its kernel, and the sinogram route."""

import math
import warnings

import numpy as np
import pytest
from numpy.polynomial import polynomial as P

from helgason.bargmann import (BargmannSample, ComplexPoint,
                               fit_exponential_smallness, growth_bound_check,
                               hermite_coefficient_bound, hermite_q,
                               kernel_bound, kernel_g, kernel_matrix,
                               sb_direct, sb_from_radon,
                               sb_from_radon_weighted, sb_sample, sb_weighted,
                               support_side_bound_check)
from helgason.errors import ValidationError
from helgason.phantoms import PhantomSpec, make_phantom
from helgason.radon import Sinogram, radon


def gaussian_phantom(dim, sigma=1.0, trunc=8.0, center=None):
    center = (0.0,) * dim if center is None else center
    return make_phantom(PhantomSpec(kind="gaussian_truncated", center=center,
                                    radius=sigma, amplitude=1.0,
                                    truncation_radius=trunc))


def test_complex_point_accessors():
    z = ComplexPoint(np.array([3.0, 0.0]), np.array([0.0, 4.0]))
    assert z.dim == 2
    assert abs(z.im_norm - 4.0) < 1e-15
    assert z.dot(np.array([1.0, 0.0])) == complex(3.0, 0.0)
    # sum of squared components: (3)^2 + (4i)^2 = -7
    assert z.holomorphic_square() == complex(-7.0, 0.0)
    moved = z.shifted(np.array([1.0, 1.0]))
    assert np.allclose(moved.re, [4.0, 1.0])
    assert np.allclose(moved.im, z.im)


def test_complex_point_validation():
    with pytest.raises(ValidationError):
        ComplexPoint(np.array([1.0, 2.0]), np.array([1.0]))
    with pytest.raises(ValidationError):
        ComplexPoint(np.array([1.0]), np.array([1.0]))
    with pytest.raises(ValidationError):
        ComplexPoint(np.array([np.nan, 0.0]), np.zeros(2))


def test_bargmann_sample_consistency():
    z = ComplexPoint(np.zeros(2), np.array([1.0, 0.0]))
    s = BargmannSample.from_weighted(z, 0.5, complex(0.25, 0.0))
    assert abs(s.weighted - 0.25) < 1e-15
    assert abs(s.value - 0.25 * math.exp(1.0)) < 1e-12
    with pytest.raises(ValidationError):
        BargmannSample(point=z, h=0.5, value=complex(1.0, 0.0), weighted=0.9)


def test_h_validation_and_warning():
    f = gaussian_phantom(2, trunc=2.0)
    z = ComplexPoint(np.zeros(2), np.zeros(2))
    with pytest.raises(ValidationError):
        sb_weighted(f, z, 0.0)
    with pytest.raises(ValidationError):
        sb_weighted(f, z, -0.5)
    with pytest.warns(UserWarning):
        sb_weighted(f, z, 1.5)


def test_transform_gaussian_center_value():
    # int e^{-|x|^2/2} e^{-|x|^2/2} dx = pi in the plane
    f = gaussian_phantom(2)
    val = sb_direct(f, ComplexPoint(np.zeros(2), np.zeros(2)), 1.0)
    assert abs(val - math.pi) / math.pi < 1e-12


@pytest.mark.parametrize("dim", [2, 3])
def test_transform_gaussian_closed_form_complex(dim):
    f = gaussian_phantom(dim)
    re = np.array([0.3, -0.1]) if dim == 2 else np.array([0.2, 0.1, -0.3])
    im = np.array([0.2, 0.5]) if dim == 2 else np.array([0.4, 0.0, 0.2])
    zeta = ComplexPoint(re, im)
    h = 0.5
    # e^{-(zeta-x)^2/2h} against the unit Gaussian: (2 pi h/(1+h))^{n/2}
    # e^{-zeta^2/(2(1+h))} with the holomorphic square
    closed = (2.0 * math.pi * h / (1.0 + h)) ** (0.5 * dim) * np.exp(
        -zeta.holomorphic_square() / (2.0 * (1.0 + h)))
    val = sb_direct(f, zeta, h)
    assert abs(val - closed) / abs(closed) < 1e-12


def test_transform_saturates_on_big_support():
    # support much wider than sqrt(h): the integral is the full Gaussian mass
    f = make_phantom(PhantomSpec(kind="ball_indicator", center=(0.0, 0.0), radius=10.0))
    val = sb_direct(f, ComplexPoint(np.zeros(2), np.zeros(2)), 1.0)
    assert abs(val - 2.0 * math.pi) / (2.0 * math.pi) < 1e-12


def test_weighted_value_and_sample():
    f = gaussian_phantom(2, trunc=4.0)
    z = ComplexPoint(np.array([0.2, 0.0]), np.array([0.0, 1.5]))
    h = 0.5
    raw = sb_direct(f, z, h)
    wv = sb_weighted(f, z, h)
    assert abs(wv - raw * np.exp(-z.im_norm**2 / (2 * h))) < 1e-12 * abs(raw)
    samp = sb_sample(f, z, h)
    assert abs(samp.weighted - abs(wv)) < 1e-12


def test_hermite_q_odd_dimensions():
    u = np.linspace(-3.0, 3.0, 31)
    # iterating p -> p' - u p from 1 gives (-1)^k He_k; the kernel factor
    # matches it up to the dimension-dependent sign
    coef = np.array([1.0])
    for k in range(5):
        if k in (2, 4):
            he = P.polyval(u, coef) * ((-1.0) ** k)
            sign = -1.0 if ((k // 2) % 2) else 1.0
            assert np.max(np.abs(hermite_q(k + 1, u) - sign * he)) < 1e-12
        coef = P.polysub(P.polyder(coef), P.polymulx(coef))
    assert np.allclose(hermite_q(1, u), 1.0)
    assert np.allclose(hermite_q(3, np.array([0.0])), [1.0])
    assert np.allclose(hermite_q(5, np.array([0.0])), [3.0])


def test_hermite_q_even_dimension_rejected():
    with pytest.raises(ValidationError):
        hermite_q(2, np.array([0.0]))


def test_hermite_coefficient_bound_dominates():
    # crude sanity: the bound covers the largest coefficient of Q_3 = 1 - u^2
    assert hermite_coefficient_bound(3) >= 1.0
    assert hermite_coefficient_bound(5) >= 6.0


# Faddeeva-oracle values for the planar kernel, rel err <= 7e-16
KERNEL_CASES = (
    (0.0, 0.0 + 0.0j, 1.0, 0.7978845608028656 + 0.0j),
    (0.7, 0.2 + 0.5j, 0.5, 0.7628912510850496 + 1.0543396239668588j),
    (-1.3, -0.4 + 1.1j, 0.25, -0.7647970274087686 + 12.776207890578513j),
    (2.0, 1.0 - 0.8j, 0.7, -0.5011857172008435 - 1.0178362427564511j),
    (0.3, -1.2 - 1.5j, 1.0, -2.0469730656248397 - 0.0973780680893733j),
    (1.1, 0.9 + 0.3j, 0.1, 2.450880682888206 + 3.826142889368601j),
)


@pytest.mark.parametrize("s,w,h,ref", KERNEL_CASES)
def test_kernel_frozen_values(s, w, h, ref):
    val = complex(kernel_g(2, s, w, h))
    assert abs(val - ref) < 1e-10 * max(1.0, abs(ref))


def test_kernel_symmetries_are_exact():
    rng = np.random.default_rng(11)
    for _ in range(25):
        s = float(rng.uniform(-2, 2))
        w = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        h = float(rng.uniform(0.05, 1.0))
        for dim in (2, 3):
            a = complex(kernel_g(dim, s, w, h))
            assert complex(kernel_g(dim, -s, -w, h)) == a
            assert complex(kernel_g(dim, s, w.conjugate(), h)) == a.conjugate()


def test_kernel_bound_dominates_kernel():
    rng = np.random.default_rng(20260815)
    for _ in range(300):
        s = float(rng.uniform(-6, 6))
        w = complex(rng.uniform(-6, 6), rng.uniform(-4, 4))
        h = float(rng.uniform(0.02, 1.0))
        for dim in (2, 3):
            g = abs(complex(kernel_g(dim, s, w, h)))
            assert g <= float(kernel_bound(dim, s, w, h)) * (1.0 + 1e-12)


def test_kernel_bound_on_diagonal_and_h_scaling():
    assert abs(float(kernel_bound(2, 1.3, 1.3 + 0j, 0.25)) - 1.9947114020071643) < 1e-12
    assert float(kernel_bound(3, 1.3, 1.3 + 0j, 0.25)) == 5.0
    # fixing (s - Re w)/sqrt h and Im w/sqrt h isolates the h power
    for dim, p in ((2, 1), (3, 2)):
        b1 = float(kernel_bound(dim, 1.3, 1.3 + 0j, 0.25))
        b2 = float(kernel_bound(dim, 2.6, 2.6 + 0j, 1.0))
        assert abs(b2 / b1 - 4.0 ** (-0.5 * p)) < 1e-14


def test_radon_route_matches_direct_2d():
    f = gaussian_phantom(2, sigma=0.4, trunc=2.4, center=(0.1, 0.0))
    h = 0.5
    sino = radon(f, np.zeros(2), n_s=321, n_dir=256,
                 s_max=2.5 + 8.0 * math.sqrt(h) + 0.4)
    for re, im in (((0.3, 0.0), (0.0, 0.0)), ((0.2, -0.1), (0.3, 0.4))):
        z = ComplexPoint(np.array(re), np.array(im))
        d = sb_direct(f, z, h)
        r = sb_from_radon(sino, z, h)
        assert abs(d - r) / abs(d) < 1e-9  # measured 1.8e-12


def test_radon_route_matches_direct_3d():
    f = gaussian_phantom(3, sigma=0.4, trunc=2.4, center=(0.1, 0.0, 0.0))
    h = 0.5
    sino = radon(f, np.zeros(3), n_s=161, n_dir=512,
                 s_max=2.5 + 8.0 * math.sqrt(h) + 0.4, n_rho=24)
    om = sino.directions[37]
    z = ComplexPoint(np.array([0.25, -0.05, 0.1]), -0.5 * om)
    d = sb_direct(f, z, h)
    r = sb_from_radon(sino, z, h)
    assert abs(d - r) / abs(d) < 1e-4  # measured 1.6e-6


def test_radon_route_equals_explicit_kernel_sum():
    f = gaussian_phantom(2, sigma=0.5, trunc=2.5)
    h = 0.25
    sino = radon(f, np.zeros(2), n_s=257, n_dir=64,
                 s_max=2.5 + 8.0 * math.sqrt(h))
    z = ComplexPoint(np.array([0.2, 0.1]), np.array([-0.3, 0.2]))
    total = 0.0j
    for j in range(64):
        wj = z.shifted(-sino.y0).dot(sino.directions[j])
        col = kernel_g(2, sino.s_grid, wj, h) * sino.values[:, j]
        total += sino.weights[j] * np.trapezoid(col, sino.s_grid)
    manual = 0.5 * (2.0 * math.pi) ** (-0.5) * math.sqrt(h) * total
    val = sb_from_radon(sino, z, h)
    assert abs(val - manual) < 1e-12 * max(1.0, abs(manual))


def test_radon_route_zero_data_gives_zero():
    s = np.linspace(-9.0, 9.0, 129)
    g = Sinogram(dim=2, s_grid=s, directions=np.array([[1.0, 0.0], [0.0, 1.0]]),
                 weights=np.array([math.pi, math.pi]),
                 values=np.zeros((129, 2)), y0=np.zeros(2))
    val = sb_from_radon(g, ComplexPoint(np.zeros(2), np.zeros(2)), 0.5)
    assert val == 0.0j


def test_radon_route_requires_kernel_coverage():
    f = gaussian_phantom(2, sigma=0.4, trunc=2.0)
    sino = radon(f, np.zeros(2), n_s=129, n_dir=16, s_max=3.2)
    z = ComplexPoint(np.zeros(2), np.zeros(2))
    with pytest.raises(ValidationError):
        sb_from_radon(sino, z, 1.0)  # needs span 8 sqrt h


def test_kernel_matrix_shape():
    s = np.linspace(-4.0, 4.0, 33)
    wv = np.array([0.1 + 0.2j, -0.5 + 0.0j])
    mat = kernel_matrix(2, s, wv, 0.5)
    assert mat.shape == (33, 2)
    assert np.allclose(mat[:, 0], kernel_g(2, s, wv[0], 0.5))


def test_weighted_transform_additive_in_data():
    f1 = make_phantom(PhantomSpec(kind="smooth_bump", center=(0.3, 0.0), radius=0.5))
    f2 = make_phantom(PhantomSpec(kind="gaussian_truncated", center=(-0.2, 0.1),
                                  radius=0.3, amplitude=0.7, truncation_radius=1.8))
    z = ComplexPoint(np.array([0.4, 0.2]), np.array([0.5, -0.3]))
    h = 0.25
    smax = 2.2 + 8.0 * math.sqrt(h)
    g1 = radon(f1, np.zeros(2), n_s=321, n_dir=128, s_max=smax)
    g2 = radon(f2, np.zeros(2), n_s=321, n_dir=128, s_max=smax)
    gsum = Sinogram(dim=2, s_grid=g1.s_grid, directions=g1.directions,
                    weights=g1.weights, values=g1.values + g2.values, y0=g1.y0)
    wsum = sb_weighted(f1, z, h) + sb_weighted(f2, z, h)
    wr = sb_from_radon_weighted(gsum, z, h)
    assert abs(wsum - wr) / abs(wsum) < 1e-5  # measured 5.3e-7


def test_growth_bound_sweep():
    f = make_phantom(PhantomSpec(kind="smooth_bump", center=(0.1, -0.2), radius=0.8))
    rng = np.random.default_rng(3)
    for _ in range(20):
        z = ComplexPoint(rng.uniform(-1, 1, 2), rng.uniform(-1.5, 1.5, 2))
        h = float(rng.uniform(0.05, 1.0))
        assert growth_bound_check(f, z, h)


def test_support_side_bound_needs_halfspace():
    f = make_phantom(PhantomSpec(kind="smooth_bump", center=(0.0, 0.0), radius=0.5))
    z = ComplexPoint(np.zeros(2), np.zeros(2))
    with pytest.raises(ValidationError):
        support_side_bound_check(f, z, 0.5)


def test_support_side_bound_sweep():
    f = make_phantom(PhantomSpec(kind="halfspace_cut_ball", center=(0.0, 0.0), radius=1.0,
                                 cut=((0.0, 0.0), (1.0, 0.0))))
    rng = np.random.default_rng(5)
    for _ in range(20):
        z = ComplexPoint(rng.uniform(-0.5, 2.0, 2), rng.uniform(-1.0, 1.0, 2))
        h = float(rng.uniform(0.05, 1.0))
        assert support_side_bound_check(f, z, h)


def test_exponential_smallness_fit():
    bump = make_phantom(PhantomSpec(kind="smooth_bump", center=(0.0, 0.0), radius=1.0))
    h_grid = tuple(np.geomspace(0.05, 0.4, 6))
    out = fit_exponential_smallness(
        bump, ComplexPoint(np.array([3.0, 0.0]), np.array([-1.0, 0.0])), h_grid)
    # rate at least dist^2/2 = 2 for a point 2 away from the support
    assert out.c > 1.9  # measured 2.46
    assert out.r_squared > 0.99
    assert not out.vacuous
    inside = fit_exponential_smallness(
        bump, ComplexPoint(np.zeros(2), np.array([-1.0, 0.0])), h_grid)
    assert inside.c < out.c  # measured 0.60


def test_exponential_smallness_vacuous_and_validation():
    zero = make_phantom(PhantomSpec(kind="ball_indicator", center=(0.0, 0.0),
                                    radius=1.0, amplitude=0.0))
    z = ComplexPoint(np.array([3.0, 0.0]), np.array([-1.0, 0.0]))
    out = fit_exponential_smallness(zero, z, tuple(np.geomspace(0.05, 0.4, 6)))
    assert out.vacuous
    f = make_phantom(PhantomSpec(kind="smooth_bump", center=(0.0, 0.0), radius=1.0))
    with pytest.raises(ValidationError):
        fit_exponential_smallness(f, z, (0.1, 0.2, 0.3))  # too few h values
