"""Potentials of discrete charges: direct sums, treecode, line closed form,
asymptotic leading term, and tail-decay fits."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import fastsum
from .charges import DiscreteCharge, support_radius, total_mass
from .kernels import radial_kernel
from .treecode import build_tree

FINITE = "finite"
MINUS_INF = "minus-infinity"
PLUS_INF = "plus-infinity"

_STATUS_NAMES = {
    fastsum.STATUS_FINITE: FINITE,
    fastsum.STATUS_MINUS_INF: MINUS_INF,
    fastsum.STATUS_PLUS_INF: PLUS_INF,
}

IN_DOMAIN = "in-domain"
NOT_IN_DOMAIN = "not-in-domain"


@dataclass(frozen=True)
class PotentialValue:
    status: str  # finite | minus-infinity | plus-infinity
    value: float

    @property
    def is_finite(self) -> bool:
        return self.status == FINITE


def _as_targets(targets, d: int) -> np.ndarray:
    a = np.asarray(targets, dtype=float)
    if a.size == 0:
        return a.reshape(0, d)
    if a.ndim == 1:
        a = a.reshape(1, -1) if d > 1 else a.reshape(-1, 1)
    if a.ndim != 2 or a.shape[1] != d:
        raise ValueError(f"targets must have shape (m, {d}), got {a.shape}")
    return a


def _wrap(vals: np.ndarray, status: np.ndarray) -> list[PotentialValue]:
    return [
        PotentialValue(_STATUS_NAMES[int(s)], float(v)) for v, s in zip(vals, status)
    ]


def potential_arrays(c: DiscreteCharge, targets) -> tuple[np.ndarray, np.ndarray]:
    """Raw (values, status-codes) of the potential at each target point."""
    t = _as_targets(targets, c.dimension)
    return fastsum.direct_sum(c.locations, c.weights, t)


def potential_direct(c: DiscreteCharge, y) -> PotentialValue:
    """Potential at a single point, summed in atom-list order."""
    vals, status = potential_arrays(c, [np.asarray(y, dtype=float).reshape(-1)])
    return _wrap(vals, status)[0]


def potential_batch(c: DiscreteCharge, targets) -> list[PotentialValue]:
    """Potential at many points; element i is bitwise potential_direct(c, targets[i])."""
    vals, status = potential_arrays(c, targets)
    return _wrap(vals, status)


def potential_treecode_arrays(
    c: DiscreteCharge, targets, theta: float, leaf_size: int = 48
) -> tuple[np.ndarray, np.ndarray]:
    if not (0.0 < theta < 1.0):
        raise ValueError(f"theta must lie in (0, 1), got {theta}")
    t = _as_targets(targets, c.dimension)
    if c.is_empty or t.shape[0] == 0:
        return fastsum.direct_sum(c.locations, c.weights, t)
    tree = build_tree(c.locations, c.weights, leaf_size=leaf_size)
    return fastsum.tree_sum(tree, c.locations, c.weights, t, float(theta))


def potential_treecode(
    c: DiscreteCharge, targets, theta: float, leaf_size: int = 48
) -> list[PotentialValue]:
    """Monopole treecode potential; opens every cell as theta -> 0 and is then
    bitwise equal to the direct sum."""
    vals, status = potential_treecode_arrays(c, targets, theta, leaf_size)
    return _wrap(vals, status)


def potential_domain_status(c: DiscreteCharge, y) -> str:
    """Atomic specialization of the domain test: a point is outside the
    domain only when d >= 2 and it sits exactly on an atom."""
    if c.dimension == 1 or c.is_empty:
        return IN_DOMAIN
    ya = np.asarray(y, dtype=float).reshape(-1)
    if ya.shape != (c.dimension,):
        raise ValueError("point dimension mismatch")
    on_atom = np.any(np.all(c.locations == ya, axis=1))
    return NOT_IN_DOMAIN if on_atom else IN_DOMAIN


def potential_line_closed_form(c: DiscreteCharge, x: float) -> float:
    """Closed-form line potential outside the support hull of a positive charge:
    ``M*x - sum(w_i x_i)`` to the right, ``-M*x + sum(w_i x_i)`` to the left."""
    if c.dimension != 1:
        raise ValueError("closed-form line potential requires d = 1")
    if len(c) and not np.all(c.weights > 0.0):
        raise ValueError("closed-form line potential requires a positive charge")
    if c.is_empty:
        return 0.0
    xs = c.locations[:, 0]
    s_left = float(np.min(xs))
    s_right = float(np.max(xs))
    mass = total_mass(c)
    first_moment = math.fsum((c.weights * xs).tolist())
    if x >= s_right:
        return mass * x - first_moment
    if x <= s_left:
        return -mass * x + first_moment
    raise ValueError(
        f"point {x} lies strictly inside the support hull ({s_left}, {s_right}); "
        "the closed form only applies outside"
    )


def asymptotic_leading(c: DiscreteCharge, x) -> float:
    """Leading far-field term: total mass times the radial kernel at |x|."""
    xa = np.asarray(x, dtype=float).reshape(-1)
    if xa.shape != (c.dimension,):
        raise ValueError("point dimension mismatch")
    r = float(np.sqrt(np.sum(xa**2)))
    if r == 0.0:
        raise ValueError("asymptotic leading term is undefined at the origin")
    return total_mass(c) * radial_kernel(float(c.dimension - 2), r)


@dataclass(frozen=True)
class TailFit:
    """Far-field error fit: errors of the leading-term approximation at
    increasing radii and the slope of log error against log radius."""

    total_mass: float
    radii: np.ndarray
    errors: np.ndarray
    slope: float
    all_exact: bool


def tail_decay_exponent(c: DiscreteCharge, radii, directions) -> TailFit:
    """Fit the decay rate of ``max_dir |pt(r dir) - leading(r dir)|``.

    Radii must be >= 4 values, strictly increasing, all beyond twice the
    support radius.  Exactly-zero errors are excluded from the fit; if every
    error vanishes the slope is the -inf sentinel and ``all_exact`` is set.
    """
    r_arr = np.asarray(radii, dtype=float).reshape(-1)
    if r_arr.size < 4:
        raise ValueError("need at least 4 radii")
    if np.any(np.diff(r_arr) <= 0.0):
        raise ValueError("radii must be strictly increasing")
    sup = support_radius(c, np.zeros(c.dimension))
    if r_arr[0] <= 2.0 * sup:
        raise ValueError(
            f"all radii must exceed twice the support radius ({2.0 * sup})"
        )
    dirs = np.asarray(directions, dtype=float)
    if dirs.ndim == 1:
        dirs = dirs.reshape(1, -1)
    if dirs.shape[1] != c.dimension:
        raise ValueError("direction dimension mismatch")
    norms = np.sqrt(np.sum(dirs**2, axis=1))
    if np.any(np.abs(norms - 1.0) > 1e-9):
        raise ValueError("directions must be unit vectors")

    errors = np.zeros(r_arr.size)
    for i, r in enumerate(r_arr):
        pts = r * dirs
        vals, status = potential_arrays(c, pts)
        if np.any(status != fastsum.STATUS_FINITE):
            raise ValueError("tail sample hit an atom; radii precondition violated")
        leading = np.array([asymptotic_leading(c, p) for p in pts])
        errors[i] = float(np.max(np.abs(vals - leading)))

    mass = total_mass(c)
    nonzero = errors > 0.0
    if not np.any(nonzero):
        return TailFit(mass, r_arr, errors, float("-inf"), True)
    if np.count_nonzero(nonzero) < 2:
        return TailFit(mass, r_arr, errors, float("-inf"), False)
    slope = float(
        np.polyfit(np.log(r_arr[nonzero]), np.log(errors[nonzero]), 1)[0]
    )
    return TailFit(mass, r_arr, errors, slope, False)
