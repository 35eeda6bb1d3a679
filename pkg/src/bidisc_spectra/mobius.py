"""Möbius automorphisms of the closed unit disc.

Maps are stored as SU(1,1)-normalised 2x2 complex matrices.  Whether an
elliptic map is a rational or irrational rotation cannot be read off a
float, so elliptic maps carry an explicit :class:`AngleSpec`.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .errors import (
    AmbiguousClass,
    DegenerateMap,
    MissingAngleSpec,
    NotDiscAutomorphism,
    NotElliptic,
)

PARABOLIC_TOL = 1e-9
_PROBES = np.exp(2j * np.pi * np.arange(16) / 16)


# ---------------------------------------------------------------------------
# angles and relations


@dataclass(frozen=True)
class Independent:
    """No multiplicative relation between the two rotation angles."""


@dataclass(frozen=True)
class PositiveRelation:
    """alpha1**p == alpha2**q with p, q >= 1."""

    p: int
    q: int


@dataclass(frozen=True)
class MixedRelation:
    """alpha1**p * alpha2**q == 1."""

    p: int
    q: int


RelationTag = Union[Independent, PositiveRelation, MixedRelation]


def relation_exponents(rel: RelationTag):
    """Exponents (p, q) with alpha1**p * alpha2**q == 1."""
    if isinstance(rel, PositiveRelation):
        return rel.p, -rel.q
    if isinstance(rel, MixedRelation):
        return rel.p, rel.q
    raise TypeError(rel)


@dataclass(frozen=True)
class Rational:
    """Rotation by exp(2 pi i numerator / denominator), kept in lowest terms."""

    numerator: int
    denominator: int

    def __post_init__(self):
        if self.denominator <= 0:
            raise ValueError("denominator must be positive")
        n = self.numerator % self.denominator
        g = math.gcd(n, self.denominator)
        object.__setattr__(self, "numerator", n // g)
        object.__setattr__(self, "denominator", self.denominator // g)

    @property
    def order(self) -> int:
        return self.denominator

    @property
    def rotation(self) -> complex:
        return cmath.exp(2j * math.pi * self.numerator / self.denominator)

    @property
    def radians(self) -> float:
        return 2 * math.pi * self.numerator / self.denominator


@dataclass(frozen=True)
class Irrational:
    """Rotation by exp(i value) declared not to be a root of unity."""

    value: float
    relation: Optional[RelationTag] = None

    @property
    def rotation(self) -> complex:
        return cmath.exp(1j * self.value)

    @property
    def radians(self) -> float:
        return self.value


AngleSpec = Union[Rational, Irrational]


def add_angles(a: AngleSpec, b: AngleSpec) -> AngleSpec:
    """Angle of the composed rotation, or None when it is undetermined."""
    if isinstance(a, Rational) and isinstance(b, Rational):
        d = a.denominator * b.denominator // math.gcd(a.denominator, b.denominator)
        return Rational(a.numerator * (d // a.denominator) + b.numerator * (d // b.denominator), d)
    if isinstance(a, Rational) or isinstance(b, Rational):
        return Irrational(a.radians + b.radians)
    rel = a.relation or b.relation
    if isinstance(rel, Independent):
        return Irrational(a.value + b.value)
    return None


def negate_angle(a: AngleSpec) -> AngleSpec:
    if isinstance(a, Rational):
        return Rational(-a.numerator, a.denominator)
    rel = a.relation
    return Irrational(-a.value, rel)


# ---------------------------------------------------------------------------
# classification payloads


@dataclass(frozen=True)
class EllipticRational:
    order: int
    rotation: complex


@dataclass(frozen=True)
class EllipticIrrational:
    rotation: complex
    relation: Optional[RelationTag] = None


@dataclass(frozen=True)
class Parabolic:
    fixed_point: complex


@dataclass(frozen=True)
class Hyperbolic:
    attracting: complex
    repelling: complex
    multiplier: float


MapClass = Union[EllipticRational, EllipticIrrational, Parabolic, Hyperbolic]


@dataclass(frozen=True)
class FixedPoint:
    point: complex
    derivative: complex
    exterior: bool = False

    def __post_init__(self):
        object.__setattr__(self, "point", complex(self.point))
        object.__setattr__(self, "derivative", complex(self.derivative))
        object.__setattr__(self, "exterior", bool(self.exterior))


class _AllPointsFixed:
    def __repr__(self):
        return "AllPointsFixed"


AllPointsFixed = _AllPointsFixed()


# ---------------------------------------------------------------------------
# the map


def _normalize(m):
    m = np.asarray(m, dtype=np.complex128).reshape(2, 2)
    scale = np.abs(m).max()
    if scale == 0:
        raise DegenerateMap("zero matrix")
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    if abs(det) < 1e-14 * scale * scale:
        raise DegenerateMap("singular matrix")
    m = m / np.sqrt(det)
    a = m[0, 0]
    if a.real < 0 or (a.real == 0 and a.imag < 0):
        m = -m
    return m


@dataclass(frozen=True, eq=False)
class MobiusMap:
    """Disc automorphism z -> (a z + b) / (c z + d) with ad - bc = 1."""

    matrix: np.ndarray
    angle: Optional[AngleSpec] = None
    kind: str = "matrix"
    hint: dict = field(default_factory=dict)

    def __call__(self, z):
        (a, b), (c, d) = self.matrix
        return (a * z + b) / (c * z + d)

    def derivative(self, z):
        c, d = self.matrix[1]
        return 1.0 / (c * z + d) ** 2

    @property
    def is_rotation(self) -> bool:
        return abs(self.matrix[0, 1]) < 1e-14 and abs(self.matrix[1, 0]) < 1e-14

    def inverse(self) -> "MobiusMap":
        (a, b), (c, d) = self.matrix
        angle = negate_angle(self.angle) if self.angle is not None else None
        hint = dict(self.hint)
        if "attracting" in hint:
            hint["attracting"], hint["repelling"] = hint["repelling"], hint["attracting"]
        return MobiusMap(_normalize([[d, -b], [-c, a]]), angle, self.kind, hint)

    def compose(self, other: "MobiusMap") -> "MobiusMap":
        """self o other."""
        angle = None
        if self.angle is not None and other.angle is not None:
            angle = add_angles(self.angle, other.angle)
        return MobiusMap(_normalize(self.matrix @ other.matrix), angle)

    def power(self, n: int) -> np.ndarray:
        if n >= 0:
            return np.linalg.matrix_power(self.matrix, n)
        return np.linalg.matrix_power(self.inverse().matrix, -n)

    def __repr__(self):
        return f"MobiusMap(kind={self.kind!r}, angle={self.angle!r}, matrix={self.matrix.tolist()!r})"


def _check_disc(m: np.ndarray, tol=1e-9):
    (a, b), (c, d) = m
    img = (a * _PROBES + b) / (c * _PROBES + d)
    if np.max(np.abs(np.abs(img) - 1.0)) > tol or abs(b / d) >= 1.0:
        raise NotDiscAutomorphism("matrix does not map the unit disc onto itself")


def rotation(angle: AngleSpec) -> MobiusMap:
    half = cmath.exp(0.5j * angle.radians)
    return MobiusMap(_normalize([[half, 0], [0, 1 / half]]), angle, "rotation")


def hyperbolic(a: float, axis: float = 0.0) -> MobiusMap:
    """z -> (z + a)/(1 + a z) conjugated so the fixed points are +-exp(i axis)."""
    if not -1.0 < a < 1.0 or a == 0.0:
        raise NotDiscAutomorphism("hyperbolic parameter must satisfy 0 < |a| < 1")
    e = cmath.exp(1j * axis)
    m = np.array([[1, a * e], [a / e, 1]], dtype=np.complex128)
    att = e if a > 0 else -e
    return MobiusMap(_normalize(m), None, "hyperbolic", {"attracting": att, "repelling": -att})


def parabolic(fixed_point_angle: float = 0.0, shift: float = 1.0) -> MobiusMap:
    """Cayley pull-back of the half-plane translation w -> w + shift."""
    if shift == 0.0:
        raise DegenerateMap("parabolic shift must be nonzero")
    cay = np.array([[1j, 1j], [-1, 1]], dtype=np.complex128)
    cay_inv = np.array([[1, -1j], [1, 1j]], dtype=np.complex128)
    tr = np.array([[1, shift], [0, 1]], dtype=np.complex128)
    m = cay_inv @ tr @ cay
    zeta = cmath.exp(1j * fixed_point_angle)
    rot = np.array([[zeta, 0], [0, 1]])
    rot_inv = np.array([[1 / zeta, 0], [0, 1]])
    m = rot @ m @ rot_inv
    return MobiusMap(_normalize(m), None, "parabolic", {"fixed_point": zeta})


def from_matrix(matrix, angle: Optional[AngleSpec] = None) -> MobiusMap:
    m = _normalize(matrix)
    _check_disc(m)
    M = MobiusMap(m, angle, "matrix")
    cls = classify(M)
    if isinstance(cls, (EllipticRational, EllipticIrrational)) and angle is None:
        raise MissingAngleSpec("elliptic map requires a declared AngleSpec")
    return M


def _parse_complex(x) -> complex:
    if isinstance(x, (list, tuple)):
        return complex(x[0], x[1])
    return complex(x)


def parse_angle(spec) -> AngleSpec:
    if "rational" in spec:
        n, d = spec["rational"]
        return Rational(int(n), int(d))
    if "irrational" in spec:
        return Irrational(float(spec["irrational"]), parse_relation(spec.get("relation")))
    raise ValueError(f"unknown angle spec {spec!r}")


def parse_relation(spec) -> Optional[RelationTag]:
    if spec is None:
        return None
    if spec == "independent":
        return Independent()
    if isinstance(spec, dict) and "positive" in spec:
        p, q = spec["positive"]
        return PositiveRelation(int(p), int(q))
    if isinstance(spec, dict) and "mixed" in spec:
        p, q = spec["mixed"]
        return MixedRelation(int(p), int(q))
    raise ValueError(f"unknown relation tag {spec!r}")


def parse_mobius(spec: dict) -> MobiusMap:
    """Build a map from its canonical dictionary form or a raw matrix."""
    kind = spec.get("kind")
    if kind == "rotation":
        if "angle" not in spec:
            raise MissingAngleSpec("rotation requires an angle")
        return rotation(parse_angle(spec["angle"]))
    if kind == "hyperbolic":
        return hyperbolic(float(spec["a"]), float(spec.get("axis", 0.0)))
    if kind == "parabolic":
        return parabolic(float(spec.get("fixed_point", 0.0)), float(spec.get("shift", 1.0)))
    if kind == "matrix":
        rows = spec["matrix"]
        m = [[_parse_complex(x) for x in row] for row in rows]
        angle = parse_angle(spec["angle"]) if "angle" in spec else None
        return from_matrix(m, angle)
    raise ValueError(f"unknown Möbius kind {kind!r}")


# ---------------------------------------------------------------------------
# classification


def _trace_half(M: MobiusMap) -> float:
    return float(M.matrix[0, 0].real)


def fixed_points(M: MobiusMap):
    """Fixed points with the derivative at each, or ``AllPointsFixed``."""
    (a, b), (c, d) = M.matrix
    if abs(b) < 1e-14 and abs(c) < 1e-14 and abs(a - d) < 1e-14:
        return AllPointsFixed
    if abs(c) < 1e-14:
        z = b / (d - a)
        fps = [FixedPoint(z, M.derivative(z), abs(z) > 1)]
        fps.append(FixedPoint(complex(math.inf, 0.0), 1 / M.derivative(z), True))
        return fps
    if M.kind == "parabolic":
        z = M.hint["fixed_point"]
        return [FixedPoint(z, M.derivative(z))]
    disc = cmath.sqrt((d - a) ** 2 + 4 * b * c)
    if abs(disc) < 1e-10:
        z = (a - d) / (2 * c)
        z = z / abs(z)
        return [FixedPoint(z, M.derivative(z))]
    roots = [(a - d + disc) / (2 * c), (a - d - disc) / (2 * c)]
    t = _trace_half(M)
    if t < 1:
        z = min(roots, key=abs)
        zr = 1 / z.conjugate() if z != 0 else complex(math.inf, 0.0)
        return [FixedPoint(z, M.derivative(z)), FixedPoint(zr, M.derivative(zr) if z != 0 else 0j, True)]
    roots = [r / abs(r) for r in roots]
    roots.sort(key=lambda z: abs(M.derivative(z)))
    return [FixedPoint(z, M.derivative(z)) for z in roots]


def classify(M: MobiusMap) -> MapClass:
    t = _trace_half(M)
    if M.is_rotation or (M.kind == "rotation"):
        if M.angle is None:
            raise MissingAngleSpec("elliptic map requires a declared AngleSpec")
        return _elliptic_class(M.angle)
    if abs(t - 1.0) <= PARABOLIC_TOL:
        if M.kind != "parabolic":
            raise AmbiguousClass(f"trace within {PARABOLIC_TOL} of the parabolic boundary")
        return Parabolic(M.hint["fixed_point"])
    if M.kind == "parabolic":
        raise AmbiguousClass("canonical parabolic map lost its parabolic trace")
    if t < 1.0:
        if M.angle is None:
            raise MissingAngleSpec("elliptic map requires a declared AngleSpec")
        return _elliptic_class(M.angle)
    fps = fixed_points(M)
    z1, z2 = fps[0], fps[1]
    return Hyperbolic(z1.point, z2.point, abs(z1.derivative))


def _elliptic_class(angle: AngleSpec) -> MapClass:
    if isinstance(angle, Rational):
        return EllipticRational(angle.order, angle.rotation)
    return EllipticIrrational(angle.rotation, angle.relation)


def disc_automorphism_to_zero(c: complex) -> MobiusMap:
    """g(z) = (z - c) / (1 - conj(c) z)."""
    return MobiusMap(_normalize([[1, -c], [-c.conjugate(), 1]]))


def conjugate_elliptic_to_rotation(M: MobiusMap):
    """Return (alpha, g) with g o M o g^-1 (z) = alpha z."""
    cls = classify(M)
    if not isinstance(cls, (EllipticRational, EllipticIrrational)):
        raise NotElliptic(f"map is {type(cls).__name__}")
    fps = fixed_points(M)
    if fps is AllPointsFixed:
        return 1 + 0j, MobiusMap(np.eye(2, dtype=np.complex128))
    c = fps[0].point
    alpha = complex(M.derivative(c))
    if abs(alpha - cls.rotation) > 1e-9:
        raise ValueError(f"declared rotation {cls.rotation} disagrees with multiplier {alpha}")
    if abs(c) < 1e-15:
        return alpha, MobiusMap(np.eye(2, dtype=np.complex128))
    return alpha, disc_automorphism_to_zero(c)


def iterate(M: MobiusMap, z: complex, n: int) -> complex:
    if n == 0:
        return z
    (a, b), (c, d) = M.power(n)
    return complex((a * z + b) / (c * z + d))
