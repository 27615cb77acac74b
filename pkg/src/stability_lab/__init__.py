"""Exact numerical stability criteria on explicitly presented compact Kähler manifolds."""

__version__ = "0.1.0"

from .arith import RationalFormatError, format_rational, parse_rational  # noqa: E402
from .cones import Verdict, in_cone, projection  # noqa: E402
from .dhym import central_charge, complementary_lifted_angle, dhym_test  # noqa: E402
from .geometry import (  # noqa: E402
    CohClass,
    ManifoldPresentation,
    SubvarietyCandidate,
    blowup_pn,
    load_manifold,
    parse_class,
    save_manifold,
    wu_bundle,
)
from .gma import GmaCoefficients, classify_gma, factorize, gma_test  # noqa: E402
from .jstab import classify, effective_test, slope, stability_threshold  # noqa: E402
from .walls import ParameterSegment, chambers, sweep_oracle  # noqa: E402

__all__ = [
    "__version__",
    "RationalFormatError",
    "format_rational",
    "parse_rational",
    "Verdict",
    "in_cone",
    "projection",
    "central_charge",
    "complementary_lifted_angle",
    "dhym_test",
    "CohClass",
    "ManifoldPresentation",
    "SubvarietyCandidate",
    "blowup_pn",
    "load_manifold",
    "parse_class",
    "save_manifold",
    "wu_bundle",
    "GmaCoefficients",
    "classify_gma",
    "factorize",
    "gma_test",
    "classify",
    "effective_test",
    "slope",
    "stability_threshold",
    "ParameterSegment",
    "chambers",
    "sweep_oracle",
]
