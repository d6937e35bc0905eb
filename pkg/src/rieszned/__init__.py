"""Executable Riesz-space stochastic processes on finite atomic probability spaces."""

from .errors import *  # noqa: F401,F403
from .lattice import (
    BandProjection,
    CondExpOperator,
    Partition,
    SampleSpace,
    cond_exp,
    dyadic_lower,
    global_mean,
    identity_operator,
    is_compatible,
    make_space,
    multiply,
    positive_part_projection,
    sqrt_dyadic,
    sqrt_exact,
    uniform_space,
)
from .norms import norm, verify_holder, verify_jensen, verify_lyapunov, verify_norm_axioms
from .mixing import (
    alpha,
    enumerate_band_projections,
    phi,
    sequence_alpha,
    sequence_phi,
    verify_strong_mixing_inequality,
    verify_uniform_mixing_inequality,
)
from .process import (
    FamilyOperators,
    Filtration,
    MixingaleCertificate,
    NedCertificate,
    ProcessWindow,
    cesaro_norm,
    generated_family,
    lln_check,
    mixingale_from_ned,
    ned_defect,
    ned_product_certificate,
    ned_shift_certificate,
    ned_sum_certificate,
    t_uniform_profile,
    verify_mixingale,
    verify_ned,
    verify_two_sided_projection_bound,
)
from .ar1 import (
    Ar1Instance,
    ar1_ned_certificate,
    center_noise,
    generate_ar1,
    geometric_sum,
    power_decay_check,
    random_noise,
    verify_averaging_pull,
    verify_projection_optimality,
)
from .io import (
    Ar1Scenario,
    Instance,
    generate_random_instance,
    parse_instance,
    parse_scenario,
    serialize_instance,
)
from .report import Report

__version__ = "0.1.0"
