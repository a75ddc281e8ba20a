"""Exact construction of entire functions with prescribed values and exceptional sets."""

from .bundle import (
    FunctionBundle,
    PointSpec,
    PsiBundle,
    build_bundle,
    eval_exact,
    exceptional_pipeline,
    partition_by_support,
    projection_closure,
    symmetrize,
    theta,
)
from .errors import ExsetError, SteeringStuck, ValidationError, ZeroDivisor
from .geometry import Hyperplane, build_annihilator, build_hyperplane, is_complex_collinear
from .intervals import Cert, ComplexBox, RatInterval, cert_abs_lt, enclose, pi_enclosure
from .poly import MPoly, homogeneous_layer, length_upper, lex_monomials
from .scalars import GaussRat, PiExpr, is_zero
from .selectors import ExplicitValue, GaussianK, PiPowerScaled, Policy
from .steering import (
    ConstructionState,
    extend_prefix,
    finalize_degree,
    pinned_value,
    run,
    s_bound,
    stage_advance,
)
from .verify import Certificate, certified_eval, check_all, tail_bound, transcendence_verdict

__version__ = "0.1.0"

__all__ = [
    "Cert",
    "Certificate",
    "ComplexBox",
    "ConstructionState",
    "ExplicitValue",
    "ExsetError",
    "FunctionBundle",
    "GaussRat",
    "GaussianK",
    "Hyperplane",
    "MPoly",
    "PiExpr",
    "PiPowerScaled",
    "PointSpec",
    "Policy",
    "PsiBundle",
    "RatInterval",
    "SteeringStuck",
    "ValidationError",
    "ZeroDivisor",
    "build_annihilator",
    "build_bundle",
    "build_hyperplane",
    "cert_abs_lt",
    "certified_eval",
    "check_all",
    "enclose",
    "eval_exact",
    "exceptional_pipeline",
    "extend_prefix",
    "finalize_degree",
    "homogeneous_layer",
    "is_complex_collinear",
    "is_zero",
    "length_upper",
    "lex_monomials",
    "partition_by_support",
    "pi_enclosure",
    "pinned_value",
    "projection_closure",
    "run",
    "s_bound",
    "stage_advance",
    "symmetrize",
    "tail_bound",
    "theta",
    "transcendence_verdict",
]
