"""Finite signed atomic measures (charges) and quadrature sphere fixtures."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .kernels import validate_dimension


@dataclass(frozen=True)
class DiscreteCharge:
    """Immutable finite atomic charge: locations (n, d) and nonzero weights (n,).

    Construction goes through :func:`discrete_charge`, which coalesces atoms at
    exactly equal coordinates and drops atoms whose (coalesced) weight is zero.
    """

    dimension: int
    locations: np.ndarray
    weights: np.ndarray

    def __len__(self) -> int:
        return self.locations.shape[0]

    @property
    def is_empty(self) -> bool:
        return len(self) == 0

    def scaled(self, factor: float) -> "DiscreteCharge":
        return discrete_charge(self.dimension, self.locations, self.weights * factor)

    def add(self, other: "DiscreteCharge") -> "DiscreteCharge":
        if other.dimension != self.dimension:
            raise ValueError("cannot add charges of different dimensions")
        locs = np.concatenate([self.locations, other.locations], axis=0)
        ws = np.concatenate([self.weights, other.weights])
        return discrete_charge(self.dimension, locs, ws)

    def subtract(self, other: "DiscreteCharge") -> "DiscreteCharge":
        return self.add(other.scaled(-1.0))


def discrete_charge(d: int, locations, weights) -> DiscreteCharge:
    """Build a charge from atom arrays, coalescing exact duplicate locations.

    Coalescing keeps the first-encounter order of locations and accumulates
    duplicate weights in list order; exact floating-point coordinate equality
    is used (no epsilon merging).
    """
    d = validate_dimension(d)
    locs = np.asarray(locations, dtype=float)
    ws = np.asarray(weights, dtype=float)
    if locs.size == 0:
        locs = locs.reshape(0, d)
    if locs.ndim != 2 or locs.shape[1] != d:
        raise ValueError(f"locations must have shape (n, {d}), got {locs.shape}")
    if ws.shape != (locs.shape[0],):
        raise ValueError("weights must be a vector matching the atom count")
    if not np.all(np.isfinite(locs)):
        raise ValueError("atom locations must be finite")
    if not np.all(np.isfinite(ws)):
        raise ValueError("atom weights must be finite")

    slots: dict[tuple, int] = {}
    out_locs: list[np.ndarray] = []
    out_ws: list[float] = []
    for i in range(locs.shape[0]):
        key = tuple(locs[i])
        j = slots.get(key)
        if j is None:
            slots[key] = len(out_locs)
            out_locs.append(locs[i])
            out_ws.append(float(ws[i]))
        else:
            out_ws[j] += float(ws[i])

    keep = [i for i, w in enumerate(out_ws) if w != 0.0]
    final_locs = np.array([out_locs[i] for i in keep], dtype=float).reshape(len(keep), d)
    final_ws = np.array([out_ws[i] for i in keep], dtype=float)
    final_locs.setflags(write=False)
    final_ws.setflags(write=False)
    return DiscreteCharge(d, final_locs, final_ws)


def point_charge(d: int, location, weight: float) -> DiscreteCharge:
    loc = np.asarray(location, dtype=float).reshape(1, -1)
    return discrete_charge(d, loc, [weight])


def empty_charge(d: int) -> DiscreteCharge:
    return discrete_charge(d, np.zeros((0, d)), [])


def jordan_decomposition(c: DiscreteCharge) -> tuple[DiscreteCharge, DiscreteCharge]:
    """Split into (positive part, negated negative part); the parts are disjoint."""
    pos = c.weights > 0.0
    neg = ~pos
    plus = discrete_charge(c.dimension, c.locations[pos], c.weights[pos])
    minus = discrete_charge(c.dimension, c.locations[neg], -c.weights[neg])
    return plus, minus


def total_mass(c: DiscreteCharge) -> float:
    return math.fsum(c.weights.tolist())


def total_variation_mass(c: DiscreteCharge) -> float:
    return math.fsum(np.abs(c.weights).tolist())


def ball_mass(c: DiscreteCharge, x, t: float) -> float:
    """Mass carried by the closed ball of radius t around x."""
    if t < 0.0:
        raise ValueError(f"ball radius must be >= 0, got {t}")
    if c.is_empty:
        return 0.0
    xa = np.asarray(x, dtype=float).reshape(1, -1)
    if xa.shape[1] != c.dimension:
        raise ValueError("center dimension mismatch")
    dist = np.sqrt(np.sum((c.locations - xa) ** 2, axis=1))
    return math.fsum(c.weights[dist <= t].tolist())


def support_radius(c: DiscreteCharge, origin) -> float:
    """Radius of the smallest origin-centered closed ball containing all atoms."""
    if c.is_empty:
        return 0.0
    oa = np.asarray(origin, dtype=float).reshape(1, -1)
    if oa.shape[1] != c.dimension:
        raise ValueError("origin dimension mismatch")
    return float(np.max(np.sqrt(np.sum((c.locations - oa) ** 2, axis=1))))


def _pin_total(ws: np.ndarray, mass: float) -> np.ndarray:
    # Nudge the last weight so fsum of the rule equals the prescribed mass
    # exactly; the correction is at rounding level.
    if ws.size >= 1:
        ws = ws.copy()
        ws[-1] = mass - math.fsum(ws[:-1].tolist())
    return ws


def sphere_node_counts(nodes: int) -> tuple[int, int]:
    """Split a total node budget into (polar, azimuthal) counts, ratio ~1:2."""
    if nodes < 1:
        raise ValueError(f"node budget must be >= 1, got {nodes}")
    n_polar = max(1, round(math.sqrt(nodes / 2.0)))
    n_az = max(1, nodes // n_polar)
    return n_polar, n_az


def uniform_sphere_measure(
    d: int, center, radius: float, mass: float, nodes: int
) -> DiscreteCharge:
    """Quadrature realization of the uniform measure on a sphere.

    d=1: the two endpoints, half mass each (nodes is ignored).
    d=2: ``nodes`` equally spaced points on the circle, equal weights.
    d=3: Gauss-Legendre in the polar cosine times a uniform azimuthal rule,
         with the total budget ``nodes`` split roughly 1:2.

    Weights sum exactly (fsum) to ``mass``.
    """
    d = validate_dimension(d)
    if d not in (1, 2, 3):
        raise ValueError(f"sphere rules exist for d in {{1,2,3}}, got {d}")
    if radius <= 0.0:
        raise ValueError(f"sphere radius must be > 0, got {radius}")
    if nodes < 1:
        raise ValueError(f"node count must be >= 1, got {nodes}")
    c = np.asarray(center, dtype=float).reshape(-1)
    if c.shape != (d,):
        raise ValueError(f"center must be a point of dimension {d}")

    if d == 1:
        locs = np.array([[c[0] - radius], [c[0] + radius]])
        ws = np.array([mass / 2.0, mass / 2.0])
    elif d == 2:
        ang = 2.0 * math.pi * np.arange(nodes) / nodes
        locs = c[None, :] + radius * np.stack([np.cos(ang), np.sin(ang)], axis=1)
        ws = np.full(nodes, mass / nodes)
    else:
        n_polar, n_az = sphere_node_counts(nodes)
        gl_x, gl_w = np.polynomial.legendre.leggauss(n_polar)
        phi = 2.0 * math.pi * np.arange(n_az) / n_az
        sin_t = np.sqrt(1.0 - gl_x**2)
        # node (j, k): polar cosine gl_x[j], azimuth phi[k]
        xs = radius * np.outer(sin_t, np.cos(phi))
        ys = radius * np.outer(sin_t, np.sin(phi))
        zs = radius * np.repeat(gl_x[:, None], n_az, axis=1)
        locs = c[None, :] + np.stack([xs.ravel(), ys.ravel(), zs.ravel()], axis=1)
        ws = (mass * np.repeat(gl_w, n_az) / (2.0 * n_az)).ravel()

    return discrete_charge(d, locs, _pin_total(ws, mass))


def charge_to_json(c: DiscreteCharge) -> dict:
    return {
        "d": c.dimension,
        "atoms": [
            {"x": [float(v) for v in c.locations[i]], "w": float(c.weights[i])}
            for i in range(len(c))
        ],
    }


def charge_from_json(obj) -> DiscreteCharge:
    """Parse the charge JSON format; rejects coordinate-length mismatches."""
    if not isinstance(obj, dict):
        raise ValueError("charge JSON must be an object")
    if "d" not in obj or "atoms" not in obj:
        raise ValueError("charge JSON needs 'd' and 'atoms' fields")
    d = obj["d"]
    if not isinstance(d, int) or isinstance(d, bool) or d < 1:
        raise ValueError(f"charge dimension must be an integer >= 1, got {d!r}")
    atoms = obj["atoms"]
    if not isinstance(atoms, list):
        raise ValueError("'atoms' must be a list")
    locs = []
    ws = []
    for k, atom in enumerate(atoms):
        if not isinstance(atom, dict) or "x" not in atom or "w" not in atom:
            raise ValueError(f"atom {k} must be an object with 'x' and 'w'")
        x = atom["x"]
        if not isinstance(x, list) or len(x) != d:
            raise ValueError(f"atom {k}: coordinate array length must equal d={d}")
        try:
            locs.append([float(v) for v in x])
            ws.append(float(atom["w"]))
        except (TypeError, ValueError) as exc:
            raise ValueError(f"atom {k}: non-numeric entry ({exc})") from None
    return discrete_charge(d, np.array(locs, dtype=float).reshape(len(ws), d), ws)
