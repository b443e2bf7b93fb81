"""Named verification checks behind the CLI: each builds seeded fixtures,
runs one identity or bound, and returns a JSON-ready report dict."""

from __future__ import annotations

import math

import numpy as np

from .balls import BallDomain, poisson_jensen_residual
from .charges import discrete_charge, point_charge
from .functions import HarmonicPolynomial, ExactFunction, harmonic_basis_size
from .grid import Box, discrete_laplacian, flux_mass, riesz_measure_extract, sample, sample_values
from .potentials import (
    potential_arrays,
    potential_line_closed_form,
    tail_decay_exponent,
)
from .uniqueness import build_shell_delta_instance, check_conclusions

CHECK_NAMES = ("lemma2", "asymptotics", "poisson-jensen", "uniqueness", "riesz-extract")


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


def make_report(name: str, parameters: dict, residuals: dict, tolerance: float) -> dict:
    passed = all(v <= tolerance for v in residuals.values())
    return {
        "check": name,
        "parameters": parameters,
        "residuals": residuals,
        "tolerance": tolerance,
        "pass": bool(passed),
    }


def check_lemma2(seed: int = 0, n: int = 100, points: int = 100, tol: float | None = None) -> dict:
    """Closed-form line potentials against the direct sum on random positive
    charges, evaluated outside the support hull."""
    if tol is None:
        tol = 1e-12
    rng = _rng(seed)
    xs = rng.uniform(2.0, 100.0, size=points) * rng.choice([-1.0, 1.0], size=points)
    worst = 0.0
    for _ in range(n):
        atoms = int(rng.integers(1, 51))
        locs = rng.uniform(-1.0, 1.0, size=(atoms, 1))
        weights = 2.0 - 2.0 * rng.random(atoms)  # (0, 2]
        c = discrete_charge(1, locs, weights)
        direct, _ = potential_arrays(c, xs.reshape(-1, 1))
        closed = np.array([potential_line_closed_form(c, float(x)) for x in xs])
        worst = max(worst, float(np.max(np.abs(closed - direct) / np.abs(direct))))
    return make_report(
        "lemma2",
        {"seed": seed, "n": n, "points": points},
        {"max_rel_error": worst},
        tol,
    )


def _offcenter_charge(d: int):
    locs = np.zeros((2, d))
    locs[0, 0] = 0.7
    locs[1, 0] = -0.5
    if d >= 2:
        locs[1, 1] = 0.3
    return discrete_charge(d, locs, [1.0, 0.5])


def check_asymptotics(tol: float | None = None) -> dict:
    """Far-field decay of the leading-term error: slope bounded by -(d-1) up
    to margin ``tol`` for off-center charges; exact cancellation flagged for
    centered single atoms."""
    if tol is None:
        tol = 0.1
    radii = [10.0, 100.0, 1000.0, 10000.0]
    residuals: dict[str, float] = {}
    for d in (1, 2, 3):
        dirs = np.concatenate([np.eye(d), -np.eye(d)], axis=0)
        fit = tail_decay_exponent(_offcenter_charge(d), radii, dirs)
        residuals[f"slope_margin_d{d}"] = fit.slope + (d - 1)
        centered = tail_decay_exponent(point_charge(d, np.zeros(d), 1.0), radii, dirs)
        residuals[f"centered_exact_d{d}"] = 0.0 if centered.all_exact else 1.0
    return make_report("asymptotics", {"radii": radii}, residuals, tol)


def _random_ball_points(rng, d: int, count: int, radius: float) -> np.ndarray:
    vec = rng.normal(size=(count, d))
    vec /= np.sqrt(np.sum(vec**2, axis=1))[:, None]
    rad = radius * rng.random(count) ** (1.0 / d)
    return vec * rad[:, None]


def check_poisson_jensen(
    d: int = 2,
    n: int | None = None,
    cases: int = 5,
    seed: int = 0,
    base_points: int = 20,
    tol: float | None = None,
) -> dict:
    """Residual of the ball mean-value identity on random test functions with
    interior atoms and a degree-<=2 harmonic part."""
    if d not in (2, 3):
        raise ValueError("poisson-jensen check supports d in {2,3}")
    if n is None:
        n = 512 if d == 2 else 2048
    if tol is None:
        tol = 1e-8 if d == 2 else 1e-4
    rng = _rng(seed)
    b = BallDomain(d, np.zeros(d), 1.0)
    atom_radius = 0.8 if d == 2 else 0.7
    worst = 0.0
    for _ in range(cases):
        k = int(rng.integers(1, 4))
        locs = _random_ball_points(rng, d, k, atom_radius)
        weights = rng.uniform(0.2, 1.5, size=k)
        coeffs = rng.uniform(-1.0, 1.0, size=harmonic_basis_size(d))
        u = ExactFunction(discrete_charge(d, locs, weights), HarmonicPolynomial(d, coeffs))
        drawn = 0
        while drawn < base_points:
            x = _random_ball_points(rng, d, 1, 0.8)[0]
            if np.min(np.sqrt(np.sum((locs - x) ** 2, axis=1))) < 0.05:
                continue
            drawn += 1
            worst = max(worst, poisson_jensen_residual(u, b, x, n))
    return make_report(
        "poisson-jensen",
        {"d": d, "n": n, "cases": cases, "seed": seed, "base_points": base_points},
        {"max_residual": worst},
        tol,
    )


def check_uniqueness(
    d: int = 2,
    r: float = 0.5,
    nodes: int | None = None,
    mass: float = 1.0,
    samples: int = 200,
    seed: int = 0,
    tol: float | None = None,
    h_coeffs=None,
) -> dict:
    """Shell-against-point instance run through the conclusion checks;
    emits the uniqueness report schema."""
    if nodes is None:
        nodes = {1: 2, 2: 512, 3: 2048}[d]
    inst = build_shell_delta_instance(d, r, mass, h_coeffs, nodes)
    report = check_conclusions(inst, samples, seed, tol)
    return report.to_json_dict()


def check_riesz_extract(h_flux: float = 0.02, tol: float | None = None) -> dict:
    """Charge extraction from lattice Laplacians: exact zero measure for a
    harmonic polynomial, the closed-form density for the squared norm, and
    flux-based recovery of a unit atom's mass.

    Residuals are normalized against their individual bounds, so the report
    tolerance is 1.0.
    """
    if tol is None:
        tol = 1.0
    window = Box(np.array([-1.0, -1.0]), np.array([1.0, 1.0]))
    h_poly = 0.125  # dyadic spacing keeps the stencil arithmetic exact

    poly = HarmonicPolynomial(2, [0.0, 0.0, 0.0, 0.5, 1.0])
    g_poly = sample_values(lambda p: poly.eval(p), window, h_poly)
    harmonic_max = float(np.max(np.abs(riesz_measure_extract(g_poly).masses)))

    g_sq = sample_values(lambda p: np.sum(p * p, axis=1), window, h_poly)
    density = riesz_measure_extract(g_sq).masses / h_poly**2
    density_err = float(np.max(np.abs(density - 2.0 / math.pi)))

    spike = ExactFunction(point_charge(2, [0.0, 0.0], 1.0), HarmonicPolynomial.zero(2))
    flux_errs = []
    for h in (h_flux, h_flux / 2.0):
        g = sample(spike, window, h)
        flux_errs.append(abs(flux_mass(g, [0.0, 0.0], 0.75, 256) - 1.0))

    residuals = {
        "harmonic_zero_ratio": harmonic_max / 1e-15,
        "density_ratio": density_err / 1e-12,
        "flux_ratio": flux_errs[0] / 0.05,
        "flux_improvement_ratio": flux_errs[1] / flux_errs[0] if flux_errs[0] else 0.0,
    }
    return make_report(
        "riesz-extract",
        {
            "h_flux": h_flux,
            "h_poly": h_poly,
            "bounds": {
                "harmonic_zero": 1e-15,
                "density": 1e-12,
                "flux": 0.05,
                "flux_improvement": 1.0,
            },
        },
        residuals,
        tol,
    )


def run_check(name: str, **kwargs) -> dict:
    if name == "lemma2":
        return check_lemma2(**kwargs)
    if name == "asymptotics":
        return check_asymptotics(**kwargs)
    if name == "poisson-jensen":
        return check_poisson_jensen(**kwargs)
    if name == "uniqueness":
        return check_uniqueness(**kwargs)
    if name == "riesz-extract":
        return check_riesz_extract(**kwargs)
    raise ValueError(f"unknown check {name!r}")
