import numpy as np
import pytest
from numpy.testing import assert_allclose

from potentia.charges import empty_charge, point_charge
from potentia.functions import (
    HarmonicPolynomial,
    ExactFunction,
    harmonic_basis_labels,
    harmonic_basis_size,
    exact_function,
)


def test_basis_sizes():
    assert harmonic_basis_size(1) == 2
    assert harmonic_basis_size(2) == 5
    assert harmonic_basis_size(3) == 9


def test_basis_labels_d2():
    assert harmonic_basis_labels(2) == ["1", "x1", "x2", "x1*x2", "x1^2-x2^2"]


def test_polynomial_eval_d2():
    # 2 + 3 x1 - x2 + 0.5 x1 x2 + 2 (x1^2 - x2^2)
    p = HarmonicPolynomial(2, [2.0, 3.0, -1.0, 0.5, 2.0])
    pts = np.array([[1.0, 2.0], [0.0, 0.0], [-1.0, 0.5]])
    expected = (
        2.0
        + 3.0 * pts[:, 0]
        - pts[:, 1]
        + 0.5 * pts[:, 0] * pts[:, 1]
        + 2.0 * (pts[:, 0] ** 2 - pts[:, 1] ** 2)
    )
    assert_allclose(p.eval(pts), expected, rtol=0, atol=0)
    assert p.eval(pts[0]) == expected[0]


def test_polynomial_lattice_laplacian_vanishes():
    # the 5-point stencil is exact on quadratics, so harmonic basis members
    # have exactly zero stencil Laplacian on a dyadic lattice
    h = 0.25
    xs = np.arange(-1.0, 1.0 + h / 2, h)
    for d in (1, 2, 3):
        for k in range(harmonic_basis_size(d)):
            coeffs = np.zeros(harmonic_basis_size(d))
            coeffs[k] = 1.0
            p = HarmonicPolynomial(d, coeffs)
            x0 = np.full(d, 0.25)
            acc = 0.0
            for j in range(d):
                up, dn = x0.copy(), x0.copy()
                up[j] += h
                dn[j] -= h
                acc += p.eval(up) - 2.0 * p.eval(x0) + p.eval(dn)
            assert acc == 0.0


def test_polynomial_coefficient_count_enforced():
    with pytest.raises(ValueError):
        HarmonicPolynomial(2, [1.0, 2.0])


def test_exact_function_eval_mixes_parts():
    u = ExactFunction(point_charge(2, [0.0, 0.0], 1.0), HarmonicPolynomial(2, [1, 0, 0, 0, 0]))
    vals, status = u.eval_arrays([[np.e, 0.0]])
    assert status[0] == 0
    assert vals[0] == pytest.approx(2.0, abs=1e-14)
    vals, status = u.eval_arrays([[0.0, 0.0]])
    assert status[0] == 1
    assert vals[0] == -np.inf


def test_exact_function_point_eval():
    u = exact_function(charge=point_charge(2, [0.0, 0.0], -1.0))
    v = u.eval_point([0.0, 0.0])
    assert v.status == "plus-infinity"


def test_exact_function_dimension_mismatch():
    with pytest.raises(ValueError):
        ExactFunction(point_charge(2, [0, 0], 1.0), HarmonicPolynomial.zero(3))


def test_exact_function_convenience():
    f = exact_function(d=2)
    assert f.charge.is_empty and f.harmonic.is_zero
    g = exact_function(harmonic=HarmonicPolynomial.zero(3))
    assert g.dimension == 3
    with pytest.raises(ValueError):
        exact_function()


def test_empty_charge_function_is_polynomial():
    p = HarmonicPolynomial(2, [0.0, 3.0, 0.0, 0.0, 0.0])
    u = ExactFunction(empty_charge(2), p)
    pts = np.array([[1.5, -2.0], [0.25, 0.75]])
    vals, status = u.eval_arrays(pts)
    assert np.all(status == 0)
    assert_allclose(vals, 3.0 * pts[:, 0], rtol=0, atol=0)
