"""Sampled functions on regular box lattices: discrete Laplacian, charge
extraction from the Laplacian, harmonic residuals, and flux-based mass
accounting near singular nodes."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .charges import DiscreteCharge, jordan_decomposition, uniform_sphere_measure
from .functions import ExactFunction
from .kernels import riesz_normalization


@dataclass(frozen=True)
class Box:
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lo = np.asarray(self.lower, dtype=float).reshape(-1)
        hi = np.asarray(self.upper, dtype=float).reshape(-1)
        if lo.shape != hi.shape or lo.size == 0:
            raise ValueError("box corners must be points of equal dimension")
        if not np.all(lo < hi):
            raise ValueError("box lower corner must be strictly below upper corner")
        lo.setflags(write=False)
        hi.setflags(write=False)
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @property
    def dimension(self) -> int:
        return self.lower.size


def box(lower, upper) -> Box:
    return Box(np.asarray(lower, dtype=float), np.asarray(upper, dtype=float))


@dataclass(frozen=True)
class GridFunction:
    """Finite values on the lattice of ``box`` with spacing ``h``; nodes with
    ``valid == False`` (singular or stencil-incomplete) carry value 0."""

    box: Box
    h: float
    values: np.ndarray
    valid: np.ndarray

    @property
    def dimension(self) -> int:
        return self.box.dimension

    @property
    def shape(self) -> tuple[int, ...]:
        return self.values.shape

    def axis_coordinates(self) -> list[np.ndarray]:
        return [
            self.box.lower[j] + self.h * np.arange(self.shape[j])
            for j in range(self.dimension)
        ]

    def node_points(self) -> np.ndarray:
        """All lattice nodes as an (n_nodes, d) array in C order."""
        axes = self.axis_coordinates()
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=1)


def _lattice_shape(b: Box, h: float) -> tuple[int, ...]:
    if h <= 0.0:
        raise ValueError(f"grid spacing must be > 0, got {h}")
    # tiny nudge absorbs float noise in (upper - lower) / h
    return tuple(
        int(math.floor((b.upper[j] - b.lower[j]) / h + 1e-9)) + 1
        for j in range(b.dimension)
    )


def sample(f: ExactFunction, b: Box, h: float) -> GridFunction:
    """Sample an exactly evaluable function; nodes within ``h`` of any charge
    atom are flagged singular and carry value 0."""
    if f.dimension != b.dimension:
        raise ValueError("function and box dimensions differ")
    shape = _lattice_shape(b, h)
    g = GridFunction(b, float(h), np.zeros(shape), np.ones(shape, dtype=bool))
    pts = g.node_points()
    valid = np.ones(pts.shape[0], dtype=bool)
    if len(f.charge):
        for i in range(len(f.charge)):
            dist = np.sqrt(np.sum((pts - f.charge.locations[i]) ** 2, axis=1))
            valid &= dist > h
    values = np.zeros(pts.shape[0])
    idx_valid = np.nonzero(valid)[0]
    if idx_valid.size:
        vals, status = f.eval_arrays(pts[idx_valid])
        finite = status == 0
        values[idx_valid[finite]] = vals[finite]
        valid[idx_valid[~finite]] = False
    return GridFunction(b, float(h), values.reshape(shape), valid.reshape(shape))


def sample_values(
    func, b: Box, h: float, valid: np.ndarray | None = None
) -> GridFunction:
    """Sample a plain vectorized callable ``points (m, d) -> values (m,)``."""
    shape = _lattice_shape(b, h)
    g = GridFunction(b, float(h), np.zeros(shape), np.ones(shape, dtype=bool))
    pts = g.node_points()
    values = np.asarray(func(pts), dtype=float).reshape(-1)
    if values.shape[0] != pts.shape[0]:
        raise ValueError("callable returned wrong number of values")
    v = np.ones(shape, dtype=bool) if valid is None else valid
    return GridFunction(b, float(h), values.reshape(shape), v)


def discrete_laplacian(g: GridFunction) -> GridFunction:
    """Second-order (2d+1)-point stencil; boundary nodes and nodes touching a
    singular node are flagged invalid in the result."""
    d = g.dimension
    if any(s < 3 for s in g.shape):
        raise ValueError("grid too small for the Laplacian stencil (< 3 nodes per axis)")
    inner = tuple(slice(1, -1) for _ in range(d))
    acc = np.zeros(np.asarray(g.shape) - 2)
    ok = g.valid[inner].copy()
    center = g.values[inner]
    for j in range(d):
        up = tuple(slice(2, None) if k == j else slice(1, -1) for k in range(d))
        dn = tuple(slice(0, -2) if k == j else slice(1, -1) for k in range(d))
        acc = acc + (g.values[up] - 2.0 * center + g.values[dn])
        ok &= g.valid[up] & g.valid[dn]
    lap = np.zeros(g.shape)
    valid = np.zeros(g.shape, dtype=bool)
    lap[inner] = np.where(ok, acc / (g.h * g.h), 0.0)
    valid[inner] = ok
    return GridFunction(g.box, g.h, lap, valid)


@dataclass(frozen=True)
class ExtractedMeasure:
    """Signed cell masses recovered from the discrete Laplacian of a grid."""

    dimension: int
    centers: np.ndarray
    masses: np.ndarray

    def __len__(self) -> int:
        return self.masses.size

    def total_mass(self) -> float:
        return math.fsum(self.masses.tolist())

    def mass_in_ball(self, center, radius: float) -> float:
        c = np.asarray(center, dtype=float).reshape(1, -1)
        dist = np.sqrt(np.sum((self.centers - c) ** 2, axis=1))
        return math.fsum(self.masses[dist <= radius].tolist())


def riesz_measure_extract(g: GridFunction) -> ExtractedMeasure:
    """Per-node cell masses ``c_d * lap * h^d`` on stencil-complete nodes."""
    lap = discrete_laplacian(g)
    pts = lap.node_points()
    mask = lap.valid.ravel()
    c_d = riesz_normalization(g.dimension)
    masses = c_d * lap.values.ravel()[mask] * g.h**g.dimension
    return ExtractedMeasure(g.dimension, pts[mask], masses)


def weyl_residual(f: ExactFunction, b: Box, h: float) -> tuple[GridFunction, float]:
    """Grid of ``f`` minus the potential of its own charge (its harmonic
    polynomial part, exactly), plus the max absolute stencil defect."""
    residual = sample_values(lambda pts: f.harmonic.eval(pts), b, h)
    lap = discrete_laplacian(residual)
    defect = float(np.max(np.abs(lap.values[lap.valid]))) if np.any(lap.valid) else 0.0
    return residual, defect


def delta_subharmonic_decompose(
    w_charge: DiscreteCharge,
) -> tuple[DiscreteCharge, DiscreteCharge]:
    """Canonical decomposition of a signed charge into the mutually singular
    pair driving the representation ``w = P - Q``; equals the Jordan pair."""
    return jordan_decomposition(w_charge)


def _multilinear_interp(g: GridFunction, pts: np.ndarray) -> np.ndarray:
    d = g.dimension
    rel = (pts - g.box.lower[None, :]) / g.h
    base = np.floor(rel).astype(np.int64)
    shape = np.asarray(g.shape)
    if np.any(base < 0) or np.any(base + 1 > shape - 1):
        raise ValueError("interpolation point outside the grid")
    frac = rel - base
    out = np.zeros(pts.shape[0])
    for corner in range(1 << d):
        offs = np.array([(corner >> j) & 1 for j in range(d)], dtype=np.int64)
        idx = tuple((base + offs[None, :])[:, j] for j in range(d))
        if not np.all(g.valid[idx]):
            raise ValueError("interpolation stencil touches an invalid node")
        weight = np.ones(pts.shape[0])
        for j in range(d):
            weight = weight * (frac[:, j] if offs[j] else 1.0 - frac[:, j])
        out += weight * g.values[idx]
    return out


def flux_mass(g: GridFunction, center, radius: float, nodes: int = 256) -> float:
    """Enclosed charge mass by the divergence identity: ``c_d`` times the
    outward flux of the gradient through the sphere, with the normal
    derivative taken by central differences of interpolated grid values."""
    d = g.dimension
    c = np.asarray(center, dtype=float).reshape(-1)
    if c.shape != (d,):
        raise ValueError("center dimension mismatch")
    if radius <= 0.0:
        raise ValueError("flux radius must be > 0")
    surface = {1: 2.0, 2: 2.0 * math.pi * radius, 3: 4.0 * math.pi * radius**2}[d]
    rule = uniform_sphere_measure(d, c, radius, surface, nodes)
    normals = (rule.locations - c[None, :]) / radius
    step = g.h
    outer = _multilinear_interp(g, rule.locations + step * normals)
    inner = _multilinear_interp(g, rule.locations - step * normals)
    dn = (outer - inner) / (2.0 * step)
    flux = math.fsum((rule.weights * dn).tolist())
    return riesz_normalization(d) * flux


def grid_to_csv(g: GridFunction, path) -> None:
    """Dump as CSV with header ``x1,...,xd,value,flag`` (flag 1 = invalid)."""
    pts = g.node_points()
    vals = g.values.ravel()
    flags = (~g.valid.ravel()).astype(int)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([f"x{j + 1}" for j in range(g.dimension)] + ["value", "flag"])
        for i in range(pts.shape[0]):
            writer.writerow(
                [repr(float(v)) for v in pts[i]] + [repr(float(vals[i])), flags[i]]
            )
