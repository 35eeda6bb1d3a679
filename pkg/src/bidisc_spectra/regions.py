"""Spectral regions: unions of radial primitives with an exactness flag.

All primitives are centred at 0.  Everything except ``RootImage`` is
invariant under rotations, so it is described by radius intervals alone.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .certify import BIDISC, TORUS2, certified_max_modulus, certified_min_modulus
from .errors import BudgetExhausted
from .weight import WeightPoly

IN, OUT, BOUNDARY = "In", "Out", "Boundary"

EXACT = "exact"
SUPERSET = "superset_of_truth"
SUBSET = "subset_of_truth"
ORACLE = "oracle_estimate"
EXACTNESS = (EXACT, SUPERSET, SUBSET, ORACLE)

SNAP = 1e-12

# ---------------------------------------------------------------------------
# primitives


@dataclass(frozen=True)
class PointZero:
    def intervals(self):
        return [(0.0, 0.0)]


@dataclass(frozen=True)
class Disk:
    R: float

    def __post_init__(self):
        object.__setattr__(self, "R", float(self.R))
        if not self.R >= 0:
            raise ValueError("Disk radius must be nonnegative")

    def intervals(self):
        return [(0.0, self.R)]


@dataclass(frozen=True)
class Circle:
    r: float

    def __post_init__(self):
        object.__setattr__(self, "r", float(self.r))
        if not self.r >= 0:
            raise ValueError("Circle radius must be nonnegative")

    def intervals(self):
        return [(self.r, self.r)]


@dataclass(frozen=True)
class Annulus:
    r: float
    R: float

    def __post_init__(self):
        object.__setattr__(self, "r", float(self.r))
        object.__setattr__(self, "R", float(self.R))
        if not (0 <= self.r <= self.R):
            raise ValueError(f"Annulus needs 0 <= r <= R, got ({self.r}, {self.R})")

    def intervals(self):
        return [(self.r, self.R)]


@dataclass(frozen=True)
class RootImage:
    """{lambda : lambda**m = poly(t) for some t in domain}, domain 'bidisc' or 'torus2'."""

    m: int
    poly: WeightPoly
    domain: str

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("m must be positive")
        if self.domain not in ("bidisc", "torus2"):
            raise ValueError("domain must be 'bidisc' or 'torus2'")

    def intervals(self):
        lo, hi = root_image_bounds(self.poly, self.domain, self.m)
        return [(lo, hi)]


@dataclass(frozen=True)
class ParamAnnulusUnion:
    """Union over selected parameter samples of AN(min(a,b), max(a,b)).

    ``a`` and ``b`` are profiles sampled at equally spaced points of the
    parameter circle; ``selector`` picks samples with a >= b or a < b.
    """

    a: Tuple[float, ...]
    b: Tuple[float, ...]
    selector: str

    def __post_init__(self):
        a = tuple(float(x) for x in self.a)
        b = tuple(float(x) for x in self.b)
        if len(a) != len(b) or not a:
            raise ValueError("profiles must be nonempty and of equal length")
        if self.selector not in ("a>=b", "a<b"):
            raise ValueError("selector must be 'a>=b' or 'a<b'")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def mask(self):
        a, b = np.array(self.a), np.array(self.b)
        return a >= b if self.selector == "a>=b" else a < b

    def bands(self):
        a, b = np.array(self.a), np.array(self.b)
        m = self.mask()
        return np.minimum(a, b)[m], np.maximum(a, b)[m]

    def sampling_error(self) -> float:
        a, b = np.array(self.a), np.array(self.b)
        return float(max(np.abs(np.diff(np.append(a, a[0]))).max(), np.abs(np.diff(np.append(b, b[0]))).max()))

    def is_empty(self) -> bool:
        return not self.mask().any()

    def intervals(self):
        lo, hi = self.bands()
        return merge_intervals(list(zip(lo.tolist(), hi.tolist())), self.sampling_error())


Primitive = Union[PointZero, Disk, Circle, Annulus, RootImage, ParamAnnulusUnion]


def canonical(p: Primitive) -> Primitive:
    """Rewrite degenerate primitives into their simplest equal form."""
    if isinstance(p, Annulus):
        if p.R <= SNAP:
            return PointZero()
        if p.R - p.r <= SNAP * max(1.0, p.R):
            return Circle(p.R)
        if p.r <= SNAP:
            return Disk(p.R)
    if isinstance(p, (Disk,)) and p.R <= SNAP:
        return PointZero()
    if isinstance(p, Circle) and p.r <= SNAP:
        return PointZero()
    return p


def annulus(r: float, R: float) -> Primitive:
    r, R = float(r), float(R)
    if r > R:
        r, R = R, r
    return canonical(Annulus(max(r, 0.0), R))


def disk(R: float) -> Primitive:
    return canonical(Disk(R))


def circle(r: float) -> Primitive:
    return canonical(Circle(r))


# ---------------------------------------------------------------------------
# radial helpers


def merge_intervals(intervals, gap: float = 0.0):
    ivs = sorted((float(a), float(b)) for a, b in intervals)
    out: List[Tuple[float, float]] = []
    for a, b in ivs:
        if out and a <= out[-1][1] + gap:
            out[-1] = (out[-1][0], max(out[-1][1], b))
        else:
            out.append((a, b))
    return out


_BOUNDS_BUDGET = 200_000


@lru_cache(maxsize=256)
def _poly_bounds(poly: WeightPoly, domain: str):
    """Attained (min, max) of |poly|, accurate relative to the max modulus.

    Both values are moduli at actual points, so the reported radii are
    always realised; on budget exhaustion the best attained values are used.
    On the bidisc the max lives on the torus, and so does the min unless
    poly has a zero (minimum principle).
    """
    if domain == "bidisc":
        low, hi = _poly_bounds(poly, "torus2")
        try:
            zb = certified_min_modulus(poly, BIDISC, tol=max(1e-12, 1e-7 * hi), budget=_BOUNDS_BUDGET,
                                       stop_when_positive=True, stop_on_zero=True)
            return (0.0 if zb.certified_zero else min(low, zb.upper)), hi
        except BudgetExhausted as e:
            return min(low, e.upper), hi
    try:
        hi = certified_max_modulus(poly, TORUS2, tol=1e-7 * max(poly.coefficient_norm, 1e-300), budget=_BOUNDS_BUDGET).lower
    except BudgetExhausted as e:
        hi = e.lower
    try:
        lo = certified_min_modulus(poly, TORUS2, tol=max(1e-12, 1e-7 * hi), budget=_BOUNDS_BUDGET, stop_on_zero=True)
        low = 0.0 if lo.certified_zero else lo.upper
    except BudgetExhausted as e:
        low = e.upper
    return low, hi


def root_image_bounds(poly: WeightPoly, domain: str, m: int):
    if poly.is_zero():
        return 0.0, 0.0
    lo, hi = _poly_bounds(poly, domain)
    return lo ** (1.0 / m), hi ** (1.0 / m)


def _contains_primitive(p: Primitive, lam: complex, tol: float) -> str:
    x = abs(lam)
    if isinstance(p, RootImage):
        return _root_image_contains(p, complex(lam), tol)
    if isinstance(p, ParamAnnulusUnion):
        if p.is_empty():
            return OUT
        lo, hi = p.bands()
        if np.any((lo - tol <= x) & (x <= hi + tol)):
            return IN
        err = p.sampling_error()
        if np.any((lo - tol - err <= x) & (x <= hi + tol + err)):
            return BOUNDARY
        return OUT
    for a, b in p.intervals():
        if a - tol <= x <= b + tol:
            return IN
    return OUT


def _root_image_contains(p: RootImage, lam: complex, tol: float) -> str:
    target = WeightPoly.constant(lam**p.m)
    diff = p.poly - target
    if diff.is_zero():
        return IN
    dom = BIDISC if p.domain == "bidisc" else TORUS2
    slack = max(tol, 1e-9) * p.m * max(abs(lam), 1.0) ** (p.m - 1)
    try:
        res = certified_min_modulus(diff, dom, tol=min(1e-6, slack), budget=200_000, stop_when_positive=False)
    except BudgetExhausted as e:
        return IN if e.upper <= slack else BOUNDARY
    if res.certified_zero or res.upper <= slack:
        return IN
    if res.lower > slack:
        return OUT
    return BOUNDARY


# ---------------------------------------------------------------------------
# regions


@dataclass(frozen=True)
class SpectralRegion:
    primitives: Tuple[Primitive, ...]
    exactness: str = EXACT

    def __post_init__(self):
        if self.exactness not in EXACTNESS:
            raise ValueError(f"unknown exactness {self.exactness!r}")
        prims = tuple(canonical(p) for p in self.primitives)
        object.__setattr__(self, "primitives", prims)

    @classmethod
    def of(cls, *prims, exactness: str = EXACT) -> "SpectralRegion":
        return cls(tuple(prims), exactness)

    def union(self, other: "SpectralRegion", exactness: Optional[str] = None) -> "SpectralRegion":
        if exactness is None:
            exactness = self.exactness if self.exactness == other.exactness else _weaker(self.exactness, other.exactness)
        return SpectralRegion(self.primitives + other.primitives, exactness)

    def with_exactness(self, exactness: str) -> "SpectralRegion":
        return SpectralRegion(self.primitives, exactness)

    def is_empty(self) -> bool:
        return all(isinstance(p, ParamAnnulusUnion) and p.is_empty() for p in self.primitives)

    def is_rotation_invariant(self) -> bool:
        return not any(isinstance(p, RootImage) for p in self.primitives)

    def intervals(self, gap: float = 0.0):
        ivs = []
        for p in self.primitives:
            if isinstance(p, ParamAnnulusUnion) and p.is_empty():
                continue
            ivs.extend(p.intervals())
        return merge_intervals(ivs, gap)

    def radial_bounds(self) -> Tuple[float, float]:
        ivs = self.intervals()
        if not ivs:
            raise ValueError("empty region has no radial bounds")
        return ivs[0][0], max(b for _, b in ivs)

    def contains(self, lam: complex, tol: float = 0.0) -> str:
        verdicts = [_contains_primitive(p, lam, tol) for p in self.primitives]
        if IN in verdicts:
            return IN
        if BOUNDARY in verdicts:
            return BOUNDARY
        return OUT

    def same_set(self, other: "SpectralRegion", tol: float = 1e-9) -> bool:
        """Radial equality after merging; only meaningful for rotation-invariant regions."""
        a, b = self.intervals(tol), other.intervals(tol)
        return len(a) == len(b) and all(abs(x0 - y0) <= tol and abs(x1 - y1) <= tol for (x0, x1), (y0, y1) in zip(a, b))

    def radial_sqrt(self) -> "SpectralRegion":
        """{lambda : lambda**2 in self} for a rotation-invariant region."""
        out = []
        for p in self.primitives:
            if isinstance(p, PointZero):
                out.append(p)
            elif isinstance(p, Disk):
                out.append(Disk(math.sqrt(p.R)))
            elif isinstance(p, Circle):
                out.append(Circle(math.sqrt(p.r)))
            elif isinstance(p, Annulus):
                out.append(Annulus(math.sqrt(p.r), math.sqrt(p.R)))
            elif isinstance(p, ParamAnnulusUnion):
                out.append(ParamAnnulusUnion(tuple(math.sqrt(x) for x in p.a), tuple(math.sqrt(x) for x in p.b), p.selector))
            else:
                raise ValueError("radial square root needs a rotation-invariant region")
        return SpectralRegion(tuple(out), self.exactness)


def _weaker(a: str, b: str) -> str:
    for e in (ORACLE, SUPERSET, SUBSET):
        if e in (a, b):
            return e
    return EXACT


def interval_subset(inner: SpectralRegion, outer: SpectralRegion, tol: float = 1e-9) -> bool:
    """Radial containment: every radius interval of ``inner`` lies in one of ``outer``."""
    outs = outer.intervals(tol)
    for a, b in inner.intervals():
        if not any(c - tol <= a and b <= d + tol for c, d in outs):
            return False
    return True


@dataclass(frozen=True)
class OracleEntry:
    quantity: str
    closed_form: Optional[float]
    lower: Optional[float]
    upper: Optional[float]
    agree: bool

    def __post_init__(self):
        for name in ("closed_form", "lower", "upper"):
            v = getattr(self, name)
            if v is not None:
                v = float(v)
                object.__setattr__(self, name, v if math.isfinite(v) else None)
        object.__setattr__(self, "agree", bool(self.agree))


@dataclass
class SpectrumReport:
    case_tag: str
    sigma: SpectralRegion
    sigma_ap: SpectralRegion
    sigma_usf: SpectralRegion
    sigma_lsf: SpectralRegion
    oracle_record: List[OracleEntry] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    SPECTRA = ("sigma", "sigma_ap", "sigma_usf", "sigma_lsf")

    def regions(self):
        return {k: getattr(self, k) for k in self.SPECTRA}

    def all_exact(self) -> bool:
        return all(r.exactness == EXACT for r in self.regions().values())

    def sigma_sf(self) -> Optional[SpectralRegion]:
        """Radial intersection of the semi-Fredholm spectra when both are exact and rotation invariant."""
        u, l = self.sigma_usf, self.sigma_lsf
        if u.exactness != EXACT or l.exactness != EXACT or not (u.is_rotation_invariant() and l.is_rotation_invariant()):
            return None
        prims = []
        for a, b in u.intervals():
            for c, d in l.intervals():
                lo, hi = max(a, c), min(b, d)
                if lo <= hi:
                    prims.append(annulus(lo, hi))
        return SpectralRegion(tuple(prims), EXACT)

    def disagreements(self) -> List[OracleEntry]:
        return [e for e in self.oracle_record if not e.agree]


# ---------------------------------------------------------------------------
# JSON


def _num(x: float) -> float:
    return float(x)


def primitive_to_dict(p: Primitive) -> dict:
    if isinstance(p, PointZero):
        return {"primitive": "point_zero"}
    if isinstance(p, Disk):
        return {"primitive": "disk", "R": _num(p.R)}
    if isinstance(p, Circle):
        return {"primitive": "circle", "r": _num(p.r)}
    if isinstance(p, Annulus):
        return {"primitive": "annulus", "r": _num(p.r), "R": _num(p.R)}
    if isinstance(p, RootImage):
        poly = [[i, j, _num(c.real), _num(c.imag)] for (i, j), c in p.poly.items()]
        return {"primitive": "root_image", "m": int(p.m), "domain": p.domain, "poly": poly}
    if isinstance(p, ParamAnnulusUnion):
        return {"primitive": "param_annulus_union", "a": [_num(x) for x in p.a], "b": [_num(x) for x in p.b], "selector": p.selector}
    raise TypeError(f"unknown primitive {p!r}")


def primitive_from_dict(d: dict) -> Primitive:
    kind = d["primitive"]
    if kind == "point_zero":
        return PointZero()
    if kind == "disk":
        return Disk(d["R"])
    if kind == "circle":
        return Circle(d["r"])
    if kind == "annulus":
        return Annulus(d["r"], d["R"])
    if kind == "root_image":
        poly = WeightPoly({(int(i), int(j)): complex(re, im) for i, j, re, im in d["poly"]})
        return RootImage(int(d["m"]), poly, d["domain"])
    if kind == "param_annulus_union":
        return ParamAnnulusUnion(tuple(d["a"]), tuple(d["b"]), d["selector"])
    raise ValueError(f"unknown primitive {kind!r}")


def region_to_dict(r: SpectralRegion) -> dict:
    return {"exactness": r.exactness, "primitives": [primitive_to_dict(p) for p in r.primitives]}


def region_from_dict(d: dict) -> SpectralRegion:
    return SpectralRegion(tuple(primitive_from_dict(p) for p in d["primitives"]), d["exactness"])


def report_to_dict(rep: SpectrumReport) -> dict:
    out = {k: region_to_dict(v) for k, v in rep.regions().items()}
    out["case_tag"] = rep.case_tag
    out["oracle_record"] = [
        {"quantity": e.quantity, "closed_form": e.closed_form, "lower": e.lower, "upper": e.upper, "agree": e.agree}
        for e in rep.oracle_record
    ]
    out["notes"] = list(rep.notes)
    return out


def report_from_dict(d: dict) -> SpectrumReport:
    return SpectrumReport(
        case_tag=d["case_tag"],
        sigma=region_from_dict(d["sigma"]),
        sigma_ap=region_from_dict(d["sigma_ap"]),
        sigma_usf=region_from_dict(d["sigma_usf"]),
        sigma_lsf=region_from_dict(d["sigma_lsf"]),
        oracle_record=[OracleEntry(**e) for e in d["oracle_record"]],
        notes=list(d["notes"]),
    )


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)


def to_json(x) -> str:
    """Canonical JSON for a report, region or primitive."""
    if isinstance(x, SpectrumReport):
        return dumps(report_to_dict(x))
    if isinstance(x, SpectralRegion):
        return dumps(region_to_dict(x))
    return dumps(primitive_to_dict(x))


def from_json(text: str):
    d = json.loads(text)
    if "case_tag" in d:
        return report_from_dict(d)
    if "primitives" in d:
        return region_from_dict(d)
    return primitive_from_dict(d)


# ---------------------------------------------------------------------------
# SVG


def _f(x: float) -> str:
    s = f"{x:.5f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


@lru_cache(maxsize=64)
def _root_image_cells(p: RootImage, outer: float, nbins: int):
    """Occupied raster bins of a root image, by forward sampling of the domain."""
    if p.domain == "torus2":
        nt, rs = 128, np.array([1.0])
    else:
        nt, rs = 64, np.linspace(0.0, 1.0, 12)
    t = 2 * np.pi * np.arange(nt) / nt
    r1, t1, r2, t2 = np.meshgrid(rs, t, rs, t, indexing="ij")
    vals = p.poly(r1 * np.exp(1j * t1), r2 * np.exp(1j * t2)).ravel()
    mod = np.abs(vals) ** (1.0 / p.m)
    arg = np.angle(vals) / p.m
    ext = 1.1 * outer
    # bin the principal branch first; the other branches are rotations of it
    pos = np.unique(np.round(np.stack([mod, arg]) * nbins).T, axis=0) / nbins
    mod, arg = pos[:, 0], pos[:, 1]
    pts = np.concatenate([mod * np.exp(1j * (arg + 2 * np.pi * k / p.m)) for k in range(p.m)])
    ix = np.floor((pts.real + ext) / (2 * ext) * nbins).astype(np.int64)
    iy = np.floor((ext - pts.imag) / (2 * ext) * nbins).astype(np.int64)
    ok = (ix >= 0) & (ix < nbins) & (iy >= 0) & (iy < nbins)
    code = np.unique(ix[ok] * nbins + iy[ok])
    return [(int(c // nbins), int(c % nbins)) for c in code]


def _panel(name: str, region: SpectralRegion, x0: int, size: int) -> List[str]:
    try:
        outer = region.radial_bounds()[1]
    except ValueError:
        outer = 0.0
    if outer <= 0:
        outer = 1.0
    ext = 1.1 * outer
    stroke = ext * 0.01
    out = [
        f'<svg x="{x0}" y="0" width="{size}" height="{size}" viewBox="{_f(-ext)} {_f(-ext)} {_f(2 * ext)} {_f(2 * ext)}">',
        f'<rect x="{_f(-ext)}" y="{_f(-ext)}" width="{_f(2 * ext)}" height="{_f(2 * ext)}" fill="white" stroke="black" stroke-width="{_f(stroke)}"/>',
        f'<line x1="{_f(-ext)}" y1="0" x2="{_f(ext)}" y2="0" stroke="#bbb" stroke-width="{_f(stroke / 2)}"/>',
        f'<line x1="0" y1="{_f(-ext)}" x2="0" y2="{_f(ext)}" stroke="#bbb" stroke-width="{_f(stroke / 2)}"/>',
    ]
    fill = {"exact": "#3060c0", "subset_of_truth": "#30a060", "superset_of_truth": "#c09030", "oracle_estimate": "#a040a0"}[
        region.exactness
    ]
    for p in region.primitives:
        if isinstance(p, RootImage):
            nb = 96
            cell = 2 * ext / nb
            for ix, iy in _root_image_cells(p, outer, nb):
                out.append(
                    f'<rect x="{_f(-ext + ix * cell)}" y="{_f(-ext + iy * cell)}" width="{_f(cell)}" height="{_f(cell)}" fill="{fill}"/>'
                )
            continue
        for a, b in p.intervals():
            if b - a <= SNAP * max(1.0, b):
                if b <= SNAP:
                    out.append(f'<circle cx="0" cy="0" r="{_f(3 * stroke)}" fill="{fill}"/>')
                else:
                    out.append(f'<circle cx="0" cy="0" r="{_f(b)}" fill="none" stroke="{fill}" stroke-width="{_f(2 * stroke)}"/>')
            elif a <= SNAP:
                out.append(f'<circle cx="0" cy="0" r="{_f(b)}" fill="{fill}" fill-opacity="0.6"/>')
            else:
                d = (
                    f"M {_f(b)} 0 A {_f(b)} {_f(b)} 0 1 0 {_f(-b)} 0 A {_f(b)} {_f(b)} 0 1 0 {_f(b)} 0 Z "
                    f"M {_f(a)} 0 A {_f(a)} {_f(a)} 0 1 0 {_f(-a)} 0 A {_f(a)} {_f(a)} 0 1 0 {_f(a)} 0 Z"
                )
                out.append(f'<path d="{d}" fill="{fill}" fill-opacity="0.6" fill-rule="evenodd"/>')
    label_size = ext * 0.09
    out.append(
        f'<text x="{_f(-ext * 0.95)}" y="{_f(-ext * 0.85)}" font-family="sans-serif" font-size="{_f(label_size)}">{name} ({region.exactness})</text>'
    )
    out.append("</svg>")
    return out


def to_svg(report: SpectrumReport, size: int = 256) -> str:
    """Four side-by-side panels, one per spectrum."""
    if size < 64:
        raise ValueError("size must be at least 64")
    names = SpectrumReport.SPECTRA
    width = size * len(names)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{size}" viewBox="0 0 {width} {size}">',
        f"<title>{report.case_tag}</title>",
    ]
    for k, name in enumerate(names):
        lines.extend(_panel(name, getattr(report, name), k * size, size))
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
