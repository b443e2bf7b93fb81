"""Desk-scale computational potential theory.

Riesz kernels and potentials of finite atomic charges, a Barnes-Hut style
treecode for fast summation, lattice Laplacians with charge extraction,
ball-domain harmonic measures and Green's functions, and a numerical harness
for the uniqueness of subharmonic functions agreeing off a compact set.
"""

from .backend import backend_name, set_threads
from .balls import (
    BallDomain,
    HarmonicMeasure,
    ball,
    green_function,
    harmonic_measure,
    poisson_jensen_residual,
    poisson_kernel,
)
from .charges import (
    DiscreteCharge,
    ball_mass,
    charge_from_json,
    charge_to_json,
    discrete_charge,
    empty_charge,
    jordan_decomposition,
    point_charge,
    support_radius,
    total_mass,
    total_variation_mass,
    uniform_sphere_measure,
)
from .functions import HarmonicPolynomial, ExactFunction, harmonic_basis_labels, exact_function
from .grid import (
    Box,
    ExtractedMeasure,
    GridFunction,
    box,
    delta_subharmonic_decompose,
    discrete_laplacian,
    flux_mass,
    grid_to_csv,
    riesz_measure_extract,
    sample,
    weyl_residual,
)
from .kernels import (
    radial_kernel,
    riesz_kernel,
    riesz_kernel_gradient,
    riesz_normalization,
)
from .potentials import (
    PotentialValue,
    TailFit,
    asymptotic_leading,
    potential_batch,
    potential_direct,
    potential_domain_status,
    potential_line_closed_form,
    potential_treecode,
    tail_decay_exponent,
)
from .uniqueness import (
    UniquenessInstance,
    UniquenessReport,
    build_mismatched_instance,
    build_shell_delta_instance,
    check_conclusions,
    recover_common_H,
    verify_hypothesis,
)

__version__ = "0.1.0"
