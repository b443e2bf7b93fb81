"""Exactly evaluable functions: harmonic polynomials of degree <= 2 and
sums "potential of a charge + harmonic polynomial"."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fastsum
from .charges import DiscreteCharge, empty_charge
from .kernels import validate_dimension
from .potentials import PotentialValue, _wrap, potential_arrays


def harmonic_basis_terms(d: int) -> list[tuple]:
    """Basis of harmonic polynomials up to degree 2.

    Order: constant 1; linears x_i; cross terms x_i x_j (i < j); consecutive
    square differences x_i^2 - x_{i+1}^2.  Every term has zero Laplacian, and
    the second-order lattice stencil is exact on all of them.
    """
    d = validate_dimension(d)
    terms: list[tuple] = [("const",)]
    for i in range(d):
        terms.append(("lin", i))
    for i in range(d):
        for j in range(i + 1, d):
            terms.append(("cross", i, j))
    for i in range(d - 1):
        terms.append(("sqdiff", i, i + 1))
    return terms


def harmonic_basis_size(d: int) -> int:
    return len(harmonic_basis_terms(d))


def harmonic_basis_labels(d: int) -> list[str]:
    labels = []
    for term in harmonic_basis_terms(d):
        if term[0] == "const":
            labels.append("1")
        elif term[0] == "lin":
            labels.append(f"x{term[1] + 1}")
        elif term[0] == "cross":
            labels.append(f"x{term[1] + 1}*x{term[2] + 1}")
        else:
            labels.append(f"x{term[1] + 1}^2-x{term[2] + 1}^2")
    return labels


@dataclass(frozen=True)
class HarmonicPolynomial:
    """Coefficient vector over the degree-<=2 harmonic basis."""

    dimension: int
    coeffs: np.ndarray

    def __post_init__(self):
        d = validate_dimension(self.dimension)
        c = np.asarray(self.coeffs, dtype=float).reshape(-1)
        if c.shape != (harmonic_basis_size(d),):
            raise ValueError(
                f"expected {harmonic_basis_size(d)} coefficients for d={d}, "
                f"got {c.shape[0]}"
            )
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def zero(cls, d: int) -> "HarmonicPolynomial":
        return cls(d, np.zeros(harmonic_basis_size(d)))

    @property
    def is_zero(self) -> bool:
        return bool(np.all(self.coeffs == 0.0))

    def eval(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        squeeze = pts.ndim == 1
        if squeeze:
            pts = pts.reshape(1, -1)
        if pts.shape[1] != self.dimension:
            raise ValueError("point dimension mismatch")
        out = np.zeros(pts.shape[0])
        for coeff, term in zip(self.coeffs, harmonic_basis_terms(self.dimension)):
            if coeff == 0.0:
                continue
            if term[0] == "const":
                out += coeff
            elif term[0] == "lin":
                out += coeff * pts[:, term[1]]
            elif term[0] == "cross":
                out += coeff * pts[:, term[1]] * pts[:, term[2]]
            else:
                out += coeff * (pts[:, term[1]] ** 2 - pts[:, term[2]] ** 2)
        return float(out[0]) if squeeze else out


@dataclass(frozen=True)
class ExactFunction:
    """Sum of the potential of a discrete charge and a harmonic polynomial."""

    charge: DiscreteCharge
    harmonic: HarmonicPolynomial

    def __post_init__(self):
        if self.charge.dimension != self.harmonic.dimension:
            raise ValueError("charge and harmonic part must share a dimension")

    @property
    def dimension(self) -> int:
        return self.charge.dimension

    def eval_arrays(self, points) -> tuple[np.ndarray, np.ndarray]:
        """(values, status codes) at each point; infinite statuses only at atoms."""
        pts = np.asarray(points, dtype=float)
        if pts.ndim == 1:
            pts = pts.reshape(1, -1)
        vals, status = potential_arrays(self.charge, pts)
        finite = status == fastsum.STATUS_FINITE
        if not self.harmonic.is_zero:
            vals = vals.copy()
            vals[finite] = vals[finite] + self.harmonic.eval(pts[finite])
        return vals, status

    def eval_point(self, y) -> PotentialValue:
        vals, status = self.eval_arrays(np.asarray(y, dtype=float).reshape(1, -1))
        return _wrap(vals, status)[0]


def exact_function(
    charge: DiscreteCharge | None = None,
    harmonic: HarmonicPolynomial | None = None,
    d: int | None = None,
) -> ExactFunction:
    """Convenience constructor filling in a zero charge or zero polynomial."""
    if charge is None and harmonic is None:
        if d is None:
            raise ValueError("need at least one of charge, harmonic, d")
        charge = empty_charge(d)
    if charge is None:
        charge = empty_charge(harmonic.dimension)
    if harmonic is None:
        harmonic = HarmonicPolynomial.zero(charge.dimension)
    return ExactFunction(charge, harmonic)
