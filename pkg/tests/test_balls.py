import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from potentia.balls import (
    BallDomain,
    ball,
    green_function,
    harmonic_measure,
    poisson_jensen_residual,
    poisson_kernel,
)
from potentia.charges import discrete_charge, point_charge, total_mass, uniform_sphere_measure
from potentia.functions import ExactFunction, HarmonicPolynomial, exact_function, harmonic_basis_size


def rng(seed):
    return np.random.Generator(np.random.Philox(seed))


DISK = ball(2, [0.0, 0.0], 1.0)
BALL3 = ball(3, [0.0, 0.0, 0.0], 1.0)


def unit_ball_points(r, d, count, radius):
    vec = r.normal(size=(count, d))
    vec /= np.sqrt(np.sum(vec**2, axis=1))[:, None]
    return vec * (radius * r.random(count) ** (1.0 / d))[:, None]


def test_ball_validation():
    with pytest.raises(ValueError):
        ball(1, [0.0], 1.0)
    with pytest.raises(ValueError):
        ball(2, [0.0, 0.0], 0.0)


def test_poisson_kernel_uniform_at_center():
    for b in (DISK, BALL3, ball(2, [1.0, -2.0], 3.0), ball(3, [0.5, 0.0, 0.0], 2.0)):
        zeta = b.center + np.array([b.radius] + [0.0] * (b.dimension - 1))
        expected = 1.0 / b.surface_measure()
        assert poisson_kernel(b, b.center, zeta) == pytest.approx(expected, rel=1e-14)


def test_poisson_kernel_value_and_quadrature_normalization():
    val = poisson_kernel(DISK, [0.5, 0.0], [1.0, 0.0])
    assert val == pytest.approx((1.0 - 0.25) / (2.0 * math.pi * 0.25), rel=1e-14)
    assert val == pytest.approx(3.0 / (2.0 * math.pi), rel=1e-14)
    # trapezoid cross-check: the kernel integrates to one over the circle
    n = 512
    ang = 2.0 * math.pi * np.arange(n) / n
    nodes = np.stack([np.cos(ang), np.sin(ang)], axis=1)
    total = sum(
        poisson_kernel(DISK, [0.5, 0.0], z) * (2.0 * math.pi / n) for z in nodes
    )
    assert total == pytest.approx(1.0, abs=1e-12)


def test_poisson_kernel_positive():
    r = rng(31)
    for b in (DISK, BALL3):
        d = b.dimension
        for _ in range(50):
            x = unit_ball_points(r, d, 1, 0.95)[0]
            zeta = r.normal(size=d)
            zeta = zeta / np.linalg.norm(zeta)
            assert poisson_kernel(b, x, zeta) > 0.0


def test_poisson_kernel_rejects_bad_points():
    with pytest.raises(ValueError):
        poisson_kernel(DISK, [1.0, 0.0], [1.0, 0.0])  # x on boundary
    with pytest.raises(ValueError):
        poisson_kernel(DISK, [0.0, 0.0], [0.5, 0.0])  # zeta off sphere


def test_harmonic_measure_is_probability():
    for b, n in ((DISK, 512), (BALL3, 2048)):
        hm = harmonic_measure(b, 0.3 * np.ones(b.dimension) / math.sqrt(b.dimension), n)
        assert math.fsum(hm.quadrature.weights.tolist()) == 1.0
        assert total_mass(hm.quadrature) == 1.0
        assert np.all(hm.quadrature.weights > 0.0)
        radii = np.sqrt(np.sum((hm.quadrature.locations - b.center) ** 2, axis=1))
        assert_allclose(radii, b.radius, rtol=1e-12)


def test_harmonic_measure_at_center_is_uniform():
    hm = harmonic_measure(DISK, [0.0, 0.0], 64)
    uniform = uniform_sphere_measure(2, [0.0, 0.0], 1.0, 1.0, 64)
    assert_allclose(hm.quadrature.weights, uniform.weights, rtol=1e-14)


def test_harmonic_measure_reproduces_harmonics():
    # integral of a harmonic polynomial against the measure equals its value
    hm = harmonic_measure(DISK, [0.5, 0.0], 512)
    vals = hm.quadrature.locations[:, 0]
    integral = math.fsum((hm.quadrature.weights * vals).tolist())
    assert integral == pytest.approx(0.5, abs=1e-10)


@pytest.mark.parametrize(
    "b,n,tol", [(DISK, 512, 1e-9), (BALL3, 2048, 1e-5)]
)
def test_harmonic_extension_full_basis(b, n, tol):
    r = rng(32)
    d = b.dimension
    for _ in range(3):
        x = unit_ball_points(r, d, 1, 0.7)[0]
        hm = harmonic_measure(b, x, n)
        for k in range(harmonic_basis_size(d)):
            coeffs = np.zeros(harmonic_basis_size(d))
            coeffs[k] = 1.0
            p = HarmonicPolynomial(d, coeffs)
            integral = math.fsum(
                (hm.quadrature.weights * p.eval(hm.quadrature.locations)).tolist()
            )
            assert integral == pytest.approx(float(p.eval(x)), abs=tol)


def test_green_disk_closed_form(warm_kernels):
    for radius in (0.25, 0.5, 0.75):
        got = green_function(DISK, [radius, 0.0], [0.0, 0.0], 512)
        assert got == pytest.approx(math.log(1.0 / radius), abs=1e-9)


def test_green_ball3_closed_form(warm_kernels):
    for radius in (0.25, 0.5, 0.75):
        got = green_function(BALL3, [radius, 0.0, 0.0], [0.0, 0.0, 0.0], 2048)
        assert got == pytest.approx(1.0 / radius - 1.0, abs=1e-6)


def test_green_pole_and_positivity():
    assert green_function(DISK, [0.3, 0.1], [0.3, 0.1], 64) == float("inf")
    r = rng(33)
    for _ in range(20):
        y = unit_ball_points(r, 2, 1, 0.9)[0]
        x = unit_ball_points(r, 2, 1, 0.9)[0]
        if np.array_equal(x, y):
            continue
        assert green_function(DISK, y, x, 256) >= -1e-9


def test_green_symmetry_d2():
    r = rng(34)
    worst = 0.0
    for _ in range(20):
        y = unit_ball_points(r, 2, 1, 0.85)[0]
        x = unit_ball_points(r, 2, 1, 0.85)[0]
        worst = max(
            worst,
            abs(green_function(DISK, y, x, 512) - green_function(DISK, x, y, 512)),
        )
    assert worst <= 1e-8


def test_green_exterior_vanishes():
    r = rng(35)
    for _ in range(10):
        x = unit_ball_points(r, 2, 1, 0.8)[0]
        direction = r.normal(size=2)
        direction /= np.linalg.norm(direction)
        y = direction * r.uniform(1.1, 3.0)
        assert abs(green_function(DISK, y, x, 512)) <= 1e-9
    for _ in range(5):
        x = unit_ball_points(r, 3, 1, 0.7)[0]
        direction = r.normal(size=3)
        direction /= np.linalg.norm(direction)
        y = direction * r.uniform(1.3, 3.0)
        assert abs(green_function(BALL3, y, x, 2048)) <= 1e-6


def test_green_requires_interior_pole():
    with pytest.raises(ValueError):
        green_function(DISK, [0.5, 0.0], [1.0, 0.0], 64)


def test_poisson_jensen_harmonic_case():
    # charge entirely outside the closed ball: the identity degenerates to
    # the mean-value property
    charge = discrete_charge(2, [[2.0, 0.0], [0.0, -3.0]], [1.0, 0.5])
    u = ExactFunction(charge, HarmonicPolynomial(2, [1.0, -2.0, 0.5, 1.0, 0.25]))
    res = poisson_jensen_residual(u, DISK, [0.3, -0.2], 512)
    assert res <= 1e-10


def test_poisson_jensen_single_atom():
    u = exact_function(charge=point_charge(2, [0.0, 0.0], 1.0))
    x = np.array([0.3, 0.0])
    res = poisson_jensen_residual(u, DISK, x, 512)
    assert res <= 1e-9
    # closed-form cross-check of the two sides
    lhs = math.log(0.3)
    g_at_atom = green_function(DISK, [0.0, 0.0], x, 512)
    assert g_at_atom == pytest.approx(-math.log(0.3), abs=1e-9)
    assert lhs == pytest.approx(0.0 - g_at_atom, abs=1e-9)


def test_poisson_jensen_random_cases_d2(warm_kernels):
    r = rng(36)
    for _ in range(3):
        k = int(r.integers(1, 4))
        locs = unit_ball_points(r, 2, k, 0.8)
        u = ExactFunction(
            discrete_charge(2, locs, r.uniform(0.2, 1.5, size=k)),
            HarmonicPolynomial(2, r.uniform(-1, 1, size=5)),
        )
        for _ in range(5):
            x = unit_ball_points(r, 2, 1, 0.8)[0]
            if np.min(np.sqrt(np.sum((locs - x) ** 2, axis=1))) < 0.05:
                continue
            assert poisson_jensen_residual(u, DISK, x, 512) <= 1e-8


def test_poisson_jensen_convergence_d3(warm_kernels):
    # base point near the boundary so the harmonic-extension error of the
    # quadrature sits well above rounding noise
    r = rng(37)
    locs = unit_ball_points(r, 3, 2, 0.7)
    u = ExactFunction(
        discrete_charge(3, locs, [1.0, 0.7]),
        HarmonicPolynomial(3, r.uniform(-1, 1, size=9)),
    )
    x = np.array([0.8, 0.0, 0.1])
    res_n = poisson_jensen_residual(u, BALL3, x, 2048)
    res_2n = poisson_jensen_residual(u, BALL3, x, 4096)
    assert res_n <= 1e-4
    assert res_2n <= res_n / 4.0


def test_poisson_jensen_spectral_decay_d2(warm_kernels):
    r = rng(38)
    u = ExactFunction(
        discrete_charge(2, unit_ball_points(r, 2, 2, 0.6), [0.8, 1.1]),
        HarmonicPolynomial(2, r.uniform(-1, 1, size=5)),
    )
    x = np.array([0.95, 0.0])
    res_n = poisson_jensen_residual(u, DISK, x, 512)
    res_2n = poisson_jensen_residual(u, DISK, x, 1024)
    assert res_n <= 1e-8
    # trapezoid rule on an analytic periodic integrand: far faster than 4x
    assert res_2n <= res_n / 16.0


def test_poisson_jensen_rejects_boundary_atom():
    u = exact_function(charge=point_charge(2, [1.0, 0.0], 1.0))
    with pytest.raises(ValueError, match="boundary atom"):
        poisson_jensen_residual(u, DISK, [0.2, 0.2], 64)


def test_poisson_jensen_rejects_base_on_atom():
    u = exact_function(charge=point_charge(2, [0.3, 0.0], 1.0))
    with pytest.raises(ValueError):
        poisson_jensen_residual(u, DISK, [0.3, 0.0], 64)


def test_poisson_jensen_dimension_mismatch():
    u = exact_function(charge=point_charge(3, [0.0, 0.0, 0.0], 1.0))
    with pytest.raises(ValueError):
        poisson_jensen_residual(u, DISK, [0.0, 0.1], 64)
