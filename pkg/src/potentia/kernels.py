"""Riesz kernels, their normalization constant, and gradients.

The radial profile is ``ln t`` in the logarithmic dimension (``s = 0``) and
``-(s/|s|) t^{-s}`` otherwise, so for ``d >= 3`` the kernel is the *negative*
power ``-t^{2-d}``.  All downstream formulas (shell values, Green functions)
use this sign convention consistently.
"""

from __future__ import annotations

import math

import numpy as np

NEG_INF = float("-inf")
POS_INF = float("inf")


def validate_dimension(d: int) -> int:
    if not isinstance(d, (int, np.integer)) or isinstance(d, bool) or d < 1:
        raise ValueError(f"dimension must be an integer >= 1, got {d!r}")
    return int(d)


def _as_point(p, d: int) -> np.ndarray:
    a = np.atleast_1d(np.asarray(p, dtype=float))
    if a.shape != (d,):
        raise ValueError(f"expected a point of dimension {d}, got shape {a.shape}")
    return a


def radial_kernel(s: float, t: float) -> float:
    """Radial kernel profile at distance ``t > 0`` for exponent parameter ``s``."""
    if t <= 0.0:
        raise ValueError(f"radial_kernel needs t > 0, got {t}")
    if s == 0.0:
        return math.log(t)
    return -(s / abs(s)) * t ** (-s)


def riesz_kernel(d: int, y, x) -> float:
    """Kernel value at the point pair (y, x); -inf on the diagonal for d >= 2."""
    d = validate_dimension(d)
    ya = _as_point(y, d)
    xa = _as_point(x, d)
    r = float(np.sqrt(np.sum((ya - xa) ** 2)))
    if r == 0.0:
        return 0.0 if d == 1 else NEG_INF
    return radial_kernel(float(d - 2), r)


def gamma_half_integer(n: int) -> float:
    """Gamma(n/2) for integer n >= 1 via the half-integer recurrence."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if n % 2 == 0:
        g, z = 1.0, 1.0
    else:
        g, z = math.sqrt(math.pi), 0.5
    while z < n / 2:
        g *= z
        z += 1.0
    return g


def riesz_normalization(d: int) -> float:
    """Constant turning the distributional Laplacian into the charge density."""
    d = validate_dimension(d)
    return gamma_half_integer(d) / (2.0 * math.pi ** (d / 2.0) * max(1, d - 2))


def riesz_kernel_gradient(d: int, y, x) -> np.ndarray:
    """Gradient in y of the kernel; undefined on the diagonal."""
    d = validate_dimension(d)
    ya = _as_point(y, d)
    xa = _as_point(x, d)
    diff = ya - xa
    r = float(np.sqrt(np.sum(diff**2)))
    if r == 0.0:
        raise ValueError("kernel gradient is undefined at y == x")
    if d == 1:
        return np.sign(diff)
    if d == 2:
        return diff / (r * r)
    return (d - 2) * diff / r**d


def extended_add(a: float, b: float) -> float:
    """Add extended reals; opposite infinities are an error, never a silent nan."""
    if math.isinf(a) and math.isinf(b) and (a > 0) != (b > 0):
        raise ValueError("indeterminate sum: +inf + -inf")
    return a + b
