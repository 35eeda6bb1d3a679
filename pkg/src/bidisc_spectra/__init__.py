"""Spectra of weighted automorphisms of the bidisc algebra.

T f = w * (f o Phi) with Phi(z1, z2) = (phi(z1), psi(z2)) or its coordinate
swap, phi and psi Möbius automorphisms of the disc and w a polynomial.
"""

from ._accel import USE_NUMBA
from .errors import (
    BudgetExhausted,
    Inconclusive,
    SpectraError,
    UnsupportedCase,
    WeightSyntaxError,
)
from .mobius import (
    Independent,
    Irrational,
    MixedRelation,
    MobiusMap,
    PositiveRelation,
    Rational,
    classify,
    from_matrix,
    hyperbolic,
    parabolic,
    rotation,
)
from .regions import (
    Annulus,
    Circle,
    Disk,
    ParamAnnulusUnion,
    PointZero,
    RootImage,
    SpectralRegion,
    SpectrumReport,
    from_json,
    to_json,
    to_svg,
)
from .spectra import CaseTag, Options, classify_case, compute_report
from .weight import WeightPoly, parse_weight

__version__ = "0.1.0"

__all__ = [
    "USE_NUMBA",
    "BudgetExhausted",
    "Inconclusive",
    "SpectraError",
    "UnsupportedCase",
    "WeightSyntaxError",
    "Independent",
    "Irrational",
    "MixedRelation",
    "MobiusMap",
    "PositiveRelation",
    "Rational",
    "classify",
    "from_matrix",
    "hyperbolic",
    "parabolic",
    "rotation",
    "Annulus",
    "Circle",
    "Disk",
    "ParamAnnulusUnion",
    "PointZero",
    "RootImage",
    "SpectralRegion",
    "SpectrumReport",
    "from_json",
    "to_json",
    "to_svg",
    "CaseTag",
    "Options",
    "classify_case",
    "compute_report",
    "WeightPoly",
    "parse_weight",
    "__version__",
]
