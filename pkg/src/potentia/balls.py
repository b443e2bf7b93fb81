"""Ball domains: harmonic measure by the Poisson kernel, the Green's function
through the potential of (harmonic measure minus the point mass), and the
Poisson-Jensen residual check."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import fastsum
from .charges import DiscreteCharge, discrete_charge, uniform_sphere_measure
from .functions import ExactFunction
from .kernels import riesz_kernel
from .potentials import potential_arrays

# surface measure of the unit sphere per dimension
_UNIT_SPHERE_AREA = {2: 2.0 * math.pi, 3: 4.0 * math.pi}

# quadrature noise below this magnitude is clamped to zero outside the ball
NEGATIVE_CLAMP = 1e-9


@dataclass(frozen=True)
class BallDomain:
    dimension: int
    center: np.ndarray
    radius: float

    def __post_init__(self):
        if self.dimension not in (2, 3):
            raise ValueError(f"ball domains support d in {{2,3}}, got {self.dimension}")
        c = np.asarray(self.center, dtype=float).reshape(-1)
        if c.shape != (self.dimension,):
            raise ValueError("center must match the ball dimension")
        if self.radius <= 0.0:
            raise ValueError(f"ball radius must be > 0, got {self.radius}")
        c.setflags(write=False)
        object.__setattr__(self, "center", c)

    def surface_measure(self) -> float:
        return _UNIT_SPHERE_AREA[self.dimension] * self.radius ** (self.dimension - 1)

    def contains_interior(self, x) -> bool:
        xa = np.asarray(x, dtype=float).reshape(-1)
        return float(np.sqrt(np.sum((xa - self.center) ** 2))) < self.radius


def ball(d: int, center, radius: float) -> BallDomain:
    return BallDomain(d, np.asarray(center, dtype=float), float(radius))


@dataclass(frozen=True)
class HarmonicMeasure:
    """Probability quadrature on the boundary sphere reproducing harmonic
    functions at the base point."""

    domain: BallDomain
    base_point: np.ndarray
    quadrature: DiscreteCharge
    nodes: int


def _require_interior(b: BallDomain, x) -> np.ndarray:
    xa = np.asarray(x, dtype=float).reshape(-1)
    if xa.shape != (b.dimension,):
        raise ValueError("point dimension mismatch")
    if float(np.sqrt(np.sum((xa - b.center) ** 2))) >= b.radius:
        raise ValueError("base point must lie strictly inside the ball")
    return xa


def poisson_kernel(b: BallDomain, x, zeta) -> float:
    """Density of the harmonic measure with respect to boundary surface
    measure: ``(R^2 - |x-c|^2) / (omega_d R |x - zeta|^d)`` with omega_d the
    unit-sphere area, so the kernel integrates to one over the sphere."""
    xa = _require_interior(b, x)
    za = np.asarray(zeta, dtype=float).reshape(-1)
    if za.shape != (b.dimension,):
        raise ValueError("boundary point dimension mismatch")
    rz = float(np.sqrt(np.sum((za - b.center) ** 2)))
    if abs(rz - b.radius) > 1e-9 * b.radius:
        raise ValueError("zeta must lie on the boundary sphere")
    rx2 = float(np.sum((xa - b.center) ** 2))
    dist = float(np.sqrt(np.sum((xa - za) ** 2)))
    omega = _UNIT_SPHERE_AREA[b.dimension]
    return (b.radius**2 - rx2) / (omega * b.radius * dist**b.dimension)


def _poisson_density(b: BallDomain, xa: np.ndarray, boundary: np.ndarray) -> np.ndarray:
    rx2 = float(np.sum((xa - b.center) ** 2))
    dist = np.sqrt(np.sum((boundary - xa[None, :]) ** 2, axis=1))
    omega = _UNIT_SPHERE_AREA[b.dimension]
    return (b.radius**2 - rx2) / (omega * b.radius * dist**b.dimension)


def harmonic_measure(b: BallDomain, x, n: int) -> HarmonicMeasure:
    """Poisson-kernel-weighted sphere rule, renormalized to total mass one."""
    xa = _require_interior(b, x)
    if n < 4:
        raise ValueError(f"need at least 4 quadrature nodes, got {n}")
    rule = uniform_sphere_measure(b.dimension, b.center, b.radius, b.surface_measure(), n)
    w = rule.weights * _poisson_density(b, xa, rule.locations)
    scale = 1.0 / math.fsum(w.tolist())
    w = w * scale
    w[-1] = 1.0 - math.fsum(w[:-1].tolist())
    charge = discrete_charge(b.dimension, rule.locations, w)
    return HarmonicMeasure(b, xa, charge, n)


def integrate_against(measure: HarmonicMeasure, func) -> float:
    """fsum of a vectorized boundary function against the measure weights."""
    vals = np.asarray(func(measure.quadrature.locations), dtype=float).reshape(-1)
    return math.fsum((measure.quadrature.weights * vals).tolist())


def green_function(b: BallDomain, y, x, n: int = 512) -> float:
    """Green's function with pole at x: potential of the harmonic measure at y
    minus the kernel at (y, x); +inf at the pole, tiny negative quadrature
    noise outside the closed ball clamped to zero."""
    xa = _require_interior(b, x)
    ya = np.asarray(y, dtype=float).reshape(-1)
    if ya.shape != (b.dimension,):
        raise ValueError("point dimension mismatch")
    if np.array_equal(ya, xa):
        return float("inf")
    measure = harmonic_measure(b, xa, n)
    return _green_from_measure(measure, ya)


def _green_from_measure(measure: HarmonicMeasure, ya: np.ndarray) -> float:
    b = measure.domain
    vals, status = potential_arrays(measure.quadrature, ya.reshape(1, -1))
    if status[0] != fastsum.STATUS_FINITE:
        raise ValueError("evaluation point coincides with a quadrature node")
    g = float(vals[0]) - riesz_kernel(b.dimension, ya, measure.base_point)
    outside = float(np.sqrt(np.sum((ya - b.center) ** 2))) > b.radius
    if outside and -NEGATIVE_CLAMP <= g < 0.0:
        return 0.0
    return g


def poisson_jensen_residual(u: ExactFunction, b: BallDomain, x, n: int = 512) -> float:
    """Absolute defect of the ball mean-value identity
    ``u(x) = integral of u against the harmonic measure at x
    minus sum of atom weights times the Green's function at the atoms``.

    Atoms exactly on the boundary sphere are rejected; the base point must be
    interior and off the atoms.
    """
    if u.dimension != b.dimension:
        raise ValueError("function and ball dimensions differ")
    xa = _require_interior(b, x)
    locs = u.charge.locations
    if len(u.charge):
        if np.any(np.all(locs == xa, axis=1)):
            raise ValueError("base point coincides with an atom of the function")
        dist_c = np.sqrt(np.sum((locs - b.center) ** 2, axis=1))
        tol = 1e-12 * max(b.radius, 1.0)
        if np.any(np.abs(dist_c - b.radius) <= tol):
            raise ValueError("boundary atom unsupported")
        inside = dist_c < b.radius
    else:
        inside = np.zeros(0, dtype=bool)

    lhs_vals, lhs_status = u.eval_arrays(xa.reshape(1, -1))
    if lhs_status[0] != fastsum.STATUS_FINITE:
        raise ValueError("function is not finite at the base point")
    lhs = float(lhs_vals[0])

    measure = harmonic_measure(b, xa, n)
    boundary_vals, boundary_status = u.eval_arrays(measure.quadrature.locations)
    if np.any(boundary_status != fastsum.STATUS_FINITE):
        raise ValueError("quadrature node coincides with an atom of the function")
    integral = math.fsum((measure.quadrature.weights * boundary_vals).tolist())

    green_term = 0.0
    if np.any(inside):
        terms = [
            float(u.charge.weights[i]) * _green_from_measure(measure, locs[i])
            for i in np.nonzero(inside)[0]
        ]
        green_term = math.fsum(terms)

    return abs(lhs - (integral - green_term))
