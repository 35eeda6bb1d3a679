"""Case classification and closed-form spectra.

The operator is ``T f = w * (f o Phi)`` on the bidisc algebra, with
``Phi = (phi, psi)`` acting coordinatewise or, for the swap case, as
``(z1, z2) -> (psi(z2), phi(z1))``.  Every engine returns the four spectra
``sigma``, ``sigma_ap``, ``sigma_usf`` and ``sigma_lsf`` as regions tagged
with how far they can be trusted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

import numpy as np

from .certify import (
    DEFAULT_BUDGET,
    INVERTIBLE_A2,
    INVERTIBLE_CT2_ONLY,
    NOT_INVERTIBLE_CT2,
    InvertibilityStatus,
    circle_extrema,
    refine_zero,
    require_status,
)
from .errors import AmbiguousClass, Inconclusive, UnsupportedCase
from .mobius import (
    EllipticIrrational,
    EllipticRational,
    Hyperbolic,
    Independent,
    Irrational,
    MixedRelation,
    MobiusMap,
    Parabolic,
    PositiveRelation,
    Rational,
    RelationTag,
    add_angles,
    classify,
    relation_exponents,
)
from .mobius import rotation as rotation_map
from . import oracle
from .oracle import BidiscMap
from .regions import (
    EXACT,
    ORACLE,
    SUBSET,
    OracleEntry,
    ParamAnnulusUnion,
    PointZero,
    RootImage,
    SpectralRegion,
    SpectrumReport,
    annulus,
    circle,
    disk,
    interval_subset,
)
from .weight import (
    FactoredWeight,
    WeightPoly,
    factor_monomial,
    log_integral_is_finite,
    restrict,
    rotation_cocycle,
)

PROFILE_SAMPLES = 1024
SNAP_REL = 1e-9

# case kinds
RAT_RAT = "EE-rat-rat"
RAT_IRR = "EE-rat-irr"
IRR_GENERIC = "EE-irr-irr-generic"
IRR_A = "EE-irr-irr-A"
IRR_B = "EE-irr-irr-B"
IRR_MIXED = "EE-irr-irr-mixed-relation"
ERAT_P = "Erat-P"
EIRR_P = "Eirr-P"
P_P = "P-P"
ERAT_H = "Erat-H"
EIRR_H = "Eirr-H"
P_H = "P-H"
H_H = "H-H"

CASE_KINDS = (
    RAT_RAT, RAT_IRR, IRR_GENERIC, IRR_A, IRR_B, IRR_MIXED,
    ERAT_P, EIRR_P, P_P, ERAT_H, EIRR_H, P_H, H_H,
)
_NEEDS_HYPOTHESIS = {RAT_IRR, IRR_A, IRR_B, EIRR_P, EIRR_H}


# ---------------------------------------------------------------------------
# case tags


def _rank(cls) -> int:
    if isinstance(cls, EllipticRational):
        return 0
    if isinstance(cls, EllipticIrrational):
        return 1
    if isinstance(cls, Parabolic):
        return 2
    return 3


def _class_name(cls) -> str:
    return ("rotation-rational", "rotation-irrational", "parabolic", "hyperbolic")[_rank(cls)]


def _relation_str(rel) -> Optional[str]:
    if rel is None:
        return None
    if isinstance(rel, Independent):
        return "independent"
    if isinstance(rel, PositiveRelation):
        return f"positive({rel.p},{rel.q})"
    return f"mixed({rel.p},{rel.q})"


@dataclass(frozen=True, eq=False)
class CaseTag:
    """Which closed form applies, plus the data the engines need."""

    kind: str
    classes: Tuple[object, object]
    relation: Optional[RelationTag] = None
    exponents: Optional[Tuple[int, int]] = None
    m: Optional[int] = None
    p: Optional[int] = None
    q: Optional[int] = None
    status: Optional[InvertibilityStatus] = None
    hypothesis: Optional[bool] = None
    coords_swapped: bool = False
    case_b: bool = False

    @property
    def label(self) -> str:
        s = self.kind
        if self.kind == RAT_RAT:
            s += f" m={self.m}"
        elif self.kind in (RAT_IRR, ERAT_P, ERAT_H):
            s += f" p={self.p}"
        elif self.kind == IRR_B:
            s += f" p={self.p} q={self.q}"
        return f"swap[{s}]" if self.case_b else s

    def __str__(self):
        return self.label

    def to_dict(self) -> dict:
        return {
            "case": self.kind,
            "label": self.label,
            "factors": [_class_name(c) for c in self.classes],
            "relation": _relation_str(self.relation),
            "exponents": list(self.exponents) if self.exponents else None,
            "m": self.m,
            "p": self.p,
            "q": self.q,
            "invertibility": self.status.kind if self.status is not None else None,
            "monomial_hypothesis": self.hypothesis,
            "coordinates_swapped": self.coords_swapped,
            "swap_reduced": self.case_b,
        }


@dataclass(eq=False)
class Problem:
    """A weighted automorphism in canonical coordinates together with its case."""

    tag: CaseTag
    phi: MobiusMap
    psi: MobiusMap
    w: object
    factored: Optional[FactoredWeight] = None

    @property
    def Phi(self) -> BidiscMap:
        return BidiscMap(self.phi, self.psi)

    @property
    def alpha(self) -> complex:
        return _multiplier(self.phi)

    @property
    def beta(self) -> complex:
        return _multiplier(self.psi)


def _multiplier(M: MobiusMap) -> complex:
    if M.angle is not None:
        return complex(M.angle.rotation)
    return complex(M.matrix[0, 0] / M.matrix[1, 1])


def _classify_factor(M: MobiusMap):
    try:
        cls = classify(M)
    except AmbiguousClass as e:
        raise UnsupportedCase(f"factor class is ambiguous: {e}") from e
    if isinstance(cls, (EllipticRational, EllipticIrrational)) and not M.is_rotation:
        raise UnsupportedCase("elliptic factors must be rotations about 0 (conjugate them first)")
    return cls


def _swap_relation(rel):
    if isinstance(rel, PositiveRelation):
        return PositiveRelation(rel.q, rel.p)
    if isinstance(rel, MixedRelation):
        return MixedRelation(rel.q, rel.p)
    return rel


def _check_relation(rel, a1: Irrational, a2: Irrational):
    if rel is None or isinstance(rel, Independent):
        return
    p, q = relation_exponents(rel)
    if p == 0 or q == 0:
        raise ValueError("relation exponents must be nonzero for irrational rotations")
    err = abs(complex(np.exp(1j * (p * a1.value + q * a2.value))) - 1.0)
    if err > 1e-8 * (abs(p) + abs(q)):
        raise ValueError(f"declared relation {_relation_str(rel)} does not hold for the given angles")


def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def prepare(
    phi: MobiusMap,
    psi: MobiusMap,
    w,
    relation: Optional[RelationTag] = None,
    status: Optional[InvertibilityStatus] = None,
    budget: int = DEFAULT_BUDGET,
    case_b: bool = False,
) -> Problem:
    """Classify and put the problem in canonical coordinate order.

    Order is rational rotation < irrational rotation < parabolic < hyperbolic;
    when ``phi`` ranks above ``psi`` the coordinates are exchanged and the
    weight transposed, which leaves all spectra unchanged.
    """
    c1, c2 = _classify_factor(phi), _classify_factor(psi)
    swapped = False
    if _rank(c1) > _rank(c2):
        phi, psi, c1, c2 = psi, phi, c2, c1
        w = w.transpose()
        relation = _swap_relation(relation)
        swapped = True
    r1, r2 = _rank(c1), _rank(c2)

    rel = None
    exps = m = p = q = None
    if (r1, r2) == (0, 0):
        kind, m = RAT_RAT, _lcm(c1.order, c2.order)
    elif (r1, r2) == (0, 1):
        kind, p = RAT_IRR, c1.order
    elif (r1, r2) == (1, 1):
        rel = relation or phi.angle.relation or psi.angle.relation
        _check_relation(rel, phi.angle, psi.angle)
        if rel is None:
            kind = IRR_GENERIC
        elif isinstance(rel, Independent):
            kind = IRR_A
        else:
            a, b = relation_exponents(rel)
            exps = (a, b)
            if a * b > 0:
                kind = IRR_MIXED
            else:
                if a < 0:
                    a, b = -a, -b
                kind, p, q = IRR_B, a, -b
    elif r2 == 2:
        kind = {0: ERAT_P, 1: EIRR_P, 2: P_P}[r1]
        if r1 == 0:
            p = c1.order
    else:
        kind = {0: ERAT_H, 1: EIRR_H, 2: P_H, 3: H_H}[r1]
        if r1 == 0:
            p = c1.order

    factored = None
    hyp = None
    if isinstance(w, WeightPoly):
        factored = factor_monomial(w)
        hyp = factored.hypothesis
    if kind in _NEEDS_HYPOTHESIS and hyp is False:
        raise UnsupportedCase(f"{kind}: the monomial-free part w~ vanishes at the origin")

    if status is None and kind != RAT_RAT:
        try:
            status = require_status(w, budget=budget)
        except Inconclusive:
            if kind != IRR_MIXED:
                raise
    tag = CaseTag(kind, (c1, c2), rel, exps, m, p, q, status, hyp, swapped, case_b)
    return Problem(tag, phi, psi, w, factored)


def classify_case(phi, psi, w, relation=None, swap: bool = False, budget: int = DEFAULT_BUDGET) -> CaseTag:
    """The case tag that decides which closed form is used."""
    if swap:
        return reduce_case_b(phi, psi, w, relation, budget).problem.tag
    return prepare(phi, psi, w, relation, budget=budget).tag


# ---------------------------------------------------------------------------
# small helpers


def _region(*prims, exactness=EXACT) -> SpectralRegion:
    return SpectralRegion.of(*prims, exactness=exactness)


def _empty(exactness=SUBSET) -> SpectralRegion:
    return SpectralRegion((), exactness)


def _report(tag, sigma, ap, usf, lsf, notes=()) -> SpectrumReport:
    return SpectrumReport(tag.label, sigma, ap, usf, lsf, [], list(notes))


def _status_kind(prob: Problem) -> str:
    return prob.tag.status.kind


def _three_way(tag, status, full, ap_ct2, sigma_ct2, zero_torus, notes=(), exactness=EXACT):
    """The common pattern: all equal when invertible in A^2, ap/usf vs sigma/lsf split otherwise."""
    if status == INVERTIBLE_A2:
        r = _region(full, exactness=exactness)
        return _report(tag, r, r, r, r, notes)
    if status == NOT_INVERTIBLE_CT2:
        r = _region(zero_torus, exactness=exactness)
        return _report(tag, r, r, r, r, notes)
    small = _region(ap_ct2, exactness=exactness)
    big = _region(sigma_ct2, exactness=exactness)
    return _report(tag, big, small, small, big, notes)


def _slice_z1(w: WeightPoly, zeta: complex) -> WeightPoly:
    """w(z1, zeta) as a polynomial in z1."""
    return WeightPoly({(k, 0): c for k, c in enumerate(restrict(w, "z2", zeta).coef)})


def _snap(r: float, R: float):
    if abs(R - r) <= SNAP_REL * max(1.0, R):
        return R, R
    return r, R


def _fmt(z: complex) -> str:
    z = complex(z)
    return f"{z.real:.6g}{z.imag:+.6g}i"


# ---------------------------------------------------------------------------
# rotations on both coordinates


def spectra_p12(prob: Problem, opts=None):
    """Both rotations rational: T**m is a multiplication operator."""
    tag = prob.tag
    m = tag.m
    wm = rotation_cocycle(prob.w, prob.alpha, prob.beta, m)
    big = _region(RootImage(m, wm, "bidisc"))
    small = _region(RootImage(m, wm, "torus2"))
    notes = [f"T^{m} is multiplication by w_{m}; the spectra are m-th roots of its range"]
    return _report(tag, big, small, small, big, notes), {}


def spectra_p1(prob: Problem, opts=None):
    """Rational rotation on z1, irrational on z2."""
    tag = prob.tag
    p = tag.p
    wt = prob.factored.w_tilde
    prof = rotation_cocycle(_slice_z1(wt, 0.0), prob.alpha, 1.0, p)
    lo, hi, _ = circle_extrema(prof)
    g_min, g_max = _snap(lo ** (1.0 / p), hi ** (1.0 / p))
    notes = [f"profile g(z1) = |w~_{p}(z1, 0)|^(1/{p}) ranges over [{g_min:.12g}, {g_max:.12g}]"]
    full = annulus(g_min, g_max)
    if _status_kind(prob) == INVERTIBLE_CT2_ONLY:
        rep = _three_way(tag, INVERTIBLE_CT2_ONLY, full, full, disk(g_max), None, notes)
    else:
        rep = _three_way(tag, INVERTIBLE_A2, full, None, None, None, notes)
    return rep, {"jensen": _jensen_rat_irr(prob, prof, p)}


def _jensen_rat_irr(prob: Problem, prof: WeightPoly, p: int, samples: int = 64):
    """(closed, quadrature) at the base point with the largest relative gap."""
    wt = prob.factored.w_tilde
    base = np.exp(2j * np.pi * (np.arange(samples) + 0.25) / samples)
    best = None
    for z in base:
        closed = abs(complex(prof(z, 0.0))) ** (1.0 / p)
        orbit = tuple(complex(z * prob.alpha**k) for k in range(p))
        quad = oracle.measure_quadrature(wt, oracle.CircleSliceMeasure(orbit)) ** (1.0 / p)
        gap = (quad - closed) / max(closed, 1e-300)
        if best is None or gap > best[0]:
            best = (gap, closed, quad)
    return best[1], best[2]


def spectra_p4(prob: Problem, opts=None):
    """Irrational rotations with no declared relation: radii come from the oracle."""
    opts = opts or Options()
    tag = prob.tag
    status = _status_kind(prob)
    rho = oracle.birkhoff_radius(prob.w, prob.Phi, opts.n_max, opts.grid)
    R = rho.lower
    if status == NOT_INVERTIBLE_CT2:
        r = 0.0
    else:
        r = oracle.rho_min_estimate(prob.w, prob.Phi, opts.n_max, opts.grid, True).upper
    r, R = _snap(min(r, R), R)
    notes = [
        "no relation tag: radii are oracle estimates",
        f"rho in [{rho.lower:.6g}, {rho.upper:.6g}]",
        "the half-open radial interval is reported as a closed annulus",
    ]
    full = annulus(r, R)
    rep = _three_way(tag, status, full, full, disk(R), disk(R), notes, exactness=ORACLE)
    return rep, {}


def spectra_p2(prob: Problem, opts=None):
    """Irrational rotations, independent (A) or with alpha1**p == alpha2**q (B)."""
    tag = prob.tag
    wt = prob.factored.w_tilde
    status = _status_kind(prob)
    if tag.kind == IRR_B:
        q = tag.q
        wq = rotation_cocycle(wt, prob.alpha, prob.beta, q)
        v = abs(complex(wq(0.0, 0.0))) ** (1.0 / q)
        notes = [f"evaluated through the {q}-th power cocycle"]
    else:
        v = abs(complex(wt(0.0, 0.0)))
        notes = []
    if status == INVERTIBLE_A2:
        notes.append(f"sigma = w(0,0) T with w(0,0) = {_fmt(prob.w(0.0, 0.0))}")
    return _three_way(tag, status, circle(v), circle(v), disk(v), disk(v), notes), {}


def spectra_mixed(prob: Problem, opts=None):
    """alpha1**p * alpha2**q == 1 with p, q of the same sign: oracle-only."""
    opts = opts or Options()
    tag = prob.tag
    measures = oracle.enumerate_measures(tag, prob.Phi, opts.samples)
    vals = [oracle.measure_quadrature(prob.w, mu) for mu in measures]
    R = max(vals)
    status = tag.status.kind if tag.status is not None else None
    r = 0.0 if status in (NOT_INVERTIBLE_CT2, None) else min(vals)
    r, R = _snap(r, R)
    notes = [
        "no closed form for this relation; radii from orbit-closure measure quadrature",
        "the half-open radial interval is reported as a closed annulus",
    ]
    if status is None:
        notes.append("invertibility undecided; inner radius set to 0")
        status = NOT_INVERTIBLE_CT2
    full = annulus(r, R)
    rep = _three_way(tag, status, full, full, disk(R), disk(R), notes, exactness=ORACLE)
    return rep, {}


# ---------------------------------------------------------------------------
# rotation or parabolic times parabolic


def _boundary_fixed(cls) -> Tuple[complex, complex]:
    if isinstance(cls, Parabolic):
        z = complex(cls.fixed_point)
        return z, z
    return complex(cls.attracting), complex(cls.repelling)


def spectra_p5(prob: Problem, opts=None):
    """Rational rotation times parabolic."""
    tag = prob.tag
    p = tag.p
    zeta = _boundary_fixed(tag.classes[1])[0]
    prof = rotation_cocycle(_slice_z1(prob.w, zeta), prob.alpha, 1.0, p) if not prob.w.is_zero() else prob.w
    lo, hi, _ = circle_extrema(prof)
    r, R = _snap(lo ** (1.0 / p), hi ** (1.0 / p))
    notes = [f"h(z1) = |w_{p}(z1, {_fmt(zeta)})|^(1/{p}) ranges over [{r:.12g}, {R:.12g}]"]
    full = annulus(r, R)
    return _three_way(tag, _status_kind(prob), full, full, disk(R), disk(R), notes), {}


def spectra_p6(prob: Problem, opts=None):
    """Irrational rotation times parabolic."""
    tag = prob.tag
    zeta = _boundary_fixed(tag.classes[1])[0]
    wt = prob.factored.w_tilde
    status = _status_kind(prob)
    v_full = abs(complex(prob.w(0.0, zeta)))
    v = abs(complex(wt(0.0, zeta)))
    if status == INVERTIBLE_A2:
        notes = [f"sigma = w(0, zeta) T with w(0, zeta) = {_fmt(prob.w(0.0, zeta))}"]
        return _three_way(tag, status, circle(v_full), None, None, None, notes), {}
    if status == NOT_INVERTIBLE_CT2:
        if log_integral_is_finite(prob.w, zeta):
            return _three_way(tag, status, None, None, None, disk(v)), {}
        notes = ["w vanishes identically on the invariant circle: spectrum {0}"]
        return _three_way(tag, status, None, None, None, PointZero(), notes), {}
    return _three_way(tag, status, None, circle(v), disk(v), None), {}


def spectra_p7(prob: Problem, opts=None):
    """Parabolic times parabolic."""
    tag = prob.tag
    s = _boundary_fixed(tag.classes[0])[0]
    z = _boundary_fixed(tag.classes[1])[0]
    v = abs(complex(prob.w(s, z)))
    notes = [f"value at the fixed point ({_fmt(s)}, {_fmt(z)}) has modulus {v:.12g}"]
    return _three_way(tag, _status_kind(prob), circle(v), circle(v), disk(v), disk(v), notes), {}


# ---------------------------------------------------------------------------
# rational rotation times hyperbolic


@dataclass(frozen=True)
class HyperbolicProfile:
    """Profiles a, b on the parameter circle for a rational rotation times hyperbolic map."""

    a: Tuple[float, ...]
    b: Tuple[float, ...]
    r: float
    R: float
    p: int
    polys: Tuple[WeightPoly, WeightPoly]

    def value(self, which: int, s: complex) -> float:
        return abs(complex(self.polys[which](s, 0.0))) ** (1.0 / self.p)


def hyperbolic_profile(w: WeightPoly, alpha: complex, p: int, zetas, samples: int = PROFILE_SAMPLES):
    polys = tuple(rotation_cocycle(_slice_z1(w, z), alpha, 1.0, p) for z in zetas)
    s = np.exp(2j * np.pi * np.arange(samples) / samples)
    prof = [np.abs(P(s, np.zeros_like(s))) ** (1.0 / p) for P in polys]
    lo, hi = math.inf, 0.0
    for P in polys:
        a, b, _ = circle_extrema(P)
        lo, hi = min(lo, a), max(hi, b)
    r, R = _snap(lo ** (1.0 / p), hi ** (1.0 / p))
    return HyperbolicProfile(tuple(prof[0]), tuple(prof[1]), r, R, p, polys)


def torus_zero_fibres(w: WeightPoly, samples: int = PROFILE_SAMPLES, extra=()) -> List[complex]:
    """Points s of the circle where w(s, .) has a zero on the circle.

    Samples whose slice has a root of modulus 1 are kept; between samples a
    change in the number of roots inside the disc is located by bisection.
    Each point is confirmed by Newton refinement to |w| < 1e-10.
    """
    deg2 = w.deg2
    if deg2 == 0:
        P = np.polynomial.Polynomial(restrict(w, "z2", 1.0).coef)
        return [complex(r / abs(r)) for r in P.roots() if abs(abs(r) - 1) < 1e-9]
    scale = max(w.coefficient_norm, 1e-300)

    def info(theta):
        s = complex(np.exp(1j * theta))
        c = restrict(w, "z1", s).coef
        if np.all(np.abs(c) <= 1e-13 * scale):
            return s, 0, 0.0, None
        nz = np.nonzero(np.abs(c) > 1e-13 * scale)[0]
        c = c[: nz[-1] + 1]
        if len(c) == 1:
            return s, 0, math.inf, None
        roots = np.polynomial.Polynomial(c).roots()
        gaps = np.abs(np.abs(roots) - 1.0)
        k = int(np.argmin(gaps))
        return s, int(np.sum(np.abs(roots) < 1.0)), float(gaps[k]), roots[k]

    def confirm(s, root):
        if root is None:
            return True
        t = [1.0, math.atan2(s.imag, s.real), 1.0, math.atan2(root.imag, root.real)]
        _, v = refine_zero(w, t, [False, True, False, True])
        return v < 1e-10

    thetas = 2 * np.pi * np.arange(samples) / samples
    data = [info(t) for t in thetas]
    found = []
    for k, (s, cnt, gap, root) in enumerate(data):
        if gap < 1e-8 and confirm(s, root):
            found.append(s)
        nxt = data[(k + 1) % samples]
        if nxt[1] != cnt and gap >= 1e-8 and nxt[2] >= 1e-8:
            lo, hi = thetas[k], thetas[k] + 2 * np.pi / samples
            for _ in range(60):
                mid = 0.5 * (lo + hi)
                if info(mid)[1] == cnt:
                    lo = mid
                else:
                    hi = mid
            s2, _, _, root2 = info(0.5 * (lo + hi))
            if confirm(s2, root2):
                found.append(s2)
    found.extend(complex(x) for x in extra)
    return found


def spectra_p8(prob: Problem, opts=None):
    """Rational rotation times hyperbolic."""
    opts = opts or Options()
    tag = prob.tag
    p = tag.p
    z_att, z_rep = _boundary_fixed(tag.classes[1])
    prof = hyperbolic_profile(prob.w, prob.alpha, p, (z_att, z_rep), opts.profile_samples)
    status = _status_kind(prob)
    r, R = prof.r, prof.R
    upper_part = ParamAnnulusUnion(prof.a, prof.b, "a>=b")
    lower_part = ParamAnnulusUnion(prof.a, prof.b, "a<b")
    notes = [
        f"profiles sampled at {len(prof.a)} points; r = {r:.12g}, R = {R:.12g}",
        f"profile sampling error {upper_part.sampling_error():.3g}",
    ]
    usf = _region(upper_part)
    lsf = _region(lower_part, exactness=SUBSET)
    if status == INVERTIBLE_A2:
        sigma = _region(annulus(r, R))
    else:
        sigma = _region(disk(R))
        if status == INVERTIBLE_CT2_ONLY:
            lsf = _region(lower_part, disk(r), exactness=SUBSET)
        else:
            wit = tag.status.witness
            extra = [wit[0]] if wit is not None else []
            fib = torus_zero_fibres(prob.w, opts.profile_samples, extra)
            amax = max((prof.value(0, s) for s in fib), default=0.0)
            bmax = max((prof.value(1, s) for s in fib), default=0.0)
            notes.append(f"{len(fib)} fibre points with a torus zero; max a = {amax:.12g}, max b = {bmax:.12g}")
            usf = _region(upper_part, disk(amax))
            lsf = _region(lower_part, disk(bmax), exactness=SUBSET)
    return _report(tag, sigma, usf, usf, lsf, notes), {}


# ---------------------------------------------------------------------------
# irrational rotation or parabolic times hyperbolic


def _ab_regions(A, B, r, R, status, lsf_exact_when_disc=False):
    """usf and lsf for the A/B comparison shared by the two hyperbolic-second cases."""
    both_circles = (circle(r), circle(R))
    if status == INVERTIBLE_A2:
        usf = _region(annulus(r, R)) if B <= A else _region(*both_circles)
        lsf = _region(annulus(r, R), exactness=SUBSET) if A <= B else _region(*both_circles, exactness=SUBSET)
        return usf, lsf
    if status == INVERTIBLE_CT2_ONLY:
        usf = _region(annulus(r, R)) if B <= A else _region(*both_circles)
        lsf = _region(disk(R), exactness=SUBSET) if A <= B else _region(disk(r), circle(R), exactness=SUBSET)
        return usf, lsf
    raise AssertionError(status)


def spectra_p9(prob: Problem, opts=None):
    """Irrational rotation times hyperbolic."""
    tag = prob.tag
    z1, z2 = _boundary_fixed(tag.classes[1])
    wt = prob.factored.w_tilde
    A = abs(complex(wt(0.0, z1)))
    B = abs(complex(wt(0.0, z2)))
    r, R = min(A, B), max(A, B)
    status = _status_kind(prob)
    notes = [f"A = |w~(0, {_fmt(z1)})| = {A:.12g}, B = |w~(0, {_fmt(z2)})| = {B:.12g}"]
    if status == NOT_INVERTIBLE_CT2:
        sigma = _region(disk(R))
        usf = _region(disk(A), circle(B))
        lsf = _region(disk(B), circle(A), exactness=SUBSET)
    else:
        sigma = _region(annulus(r, R) if status == INVERTIBLE_A2 else disk(R))
        usf, lsf = _ab_regions(A, B, r, R, status)
    return _report(tag, sigma, usf, usf, lsf, notes), {}


def spectra_p10(prob: Problem, opts=None):
    """Parabolic times hyperbolic."""
    tag = prob.tag
    s = _boundary_fixed(tag.classes[0])[0]
    z1, z2 = _boundary_fixed(tag.classes[1])
    A = abs(complex(prob.w(s, z1)))
    B = abs(complex(prob.w(s, z2)))
    r, R = min(A, B), max(A, B)
    status = _status_kind(prob)
    notes = [f"A = |w({_fmt(s)}, {_fmt(z1)})| = {A:.12g}, B = |w({_fmt(s)}, {_fmt(z2)})| = {B:.12g}"]
    if status == NOT_INVERTIBLE_CT2:
        sigma = _region(disk(R))
        if B <= A:
            usf = _region(disk(R))
            lsf = _region(disk(r), circle(R), exactness=SUBSET)
        else:
            lsf = _region(disk(R))
            usf = _region(disk(r), circle(R))
    else:
        sigma = _region(annulus(r, R) if status == INVERTIBLE_A2 else disk(R))
        usf, lsf = _ab_regions(A, B, r, R, status)
    return _report(tag, sigma, usf, usf, lsf, notes), {}


# ---------------------------------------------------------------------------
# hyperbolic times hyperbolic


@dataclass(frozen=True)
class FixedPointGrid:
    """|w| at the four pairs of boundary fixed points (attracting first)."""

    s: Tuple[complex, complex]
    z: Tuple[complex, complex]
    values: Tuple[Tuple[float, float], Tuple[float, float]]

    @property
    def moduli(self) -> List[float]:
        return [v for row in self.values for v in row]

    def strictly_ordered(self) -> bool:
        (g11, g12), (g21, g22) = self.values
        return (g11 < g12 < g21 < g22) or (g11 < g21 < g12 < g22)


def fixed_point_grid(w, phi_cls, psi_cls) -> FixedPointGrid:
    s = _boundary_fixed(phi_cls)
    z = _boundary_fixed(psi_cls)
    vals = tuple(tuple(abs(complex(w(a, b))) for b in z) for a in s)
    return FixedPointGrid(s, z, vals)


def spectra_hh(prob: Problem, opts=None, torus_zero: Optional[Callable] = None):
    """Hyperbolic times hyperbolic."""
    tag = prob.tag
    grid = fixed_point_grid(prob.w, *tag.classes)
    mods = grid.moduli
    r, R = min(mods), max(mods)
    status = _status_kind(prob)
    sigma = _region(annulus(r, R) if status == INVERTIBLE_A2 else disk(R))
    notes = ["fixed-point moduli " + ", ".join(f"{v:.12g}" for v in mods)]
    if status == INVERTIBLE_A2 and grid.strictly_ordered():
        lsf = _region(annulus(r, R))
        usf = _region(*(circle(v) for v in mods))
        return _report(tag, sigma, usf, usf, lsf, notes), {}
    att = oracle.attractor_data(prob.w, prob.phi, prob.psi, torus_zero=torus_zero)
    up, lo = [], []
    for reg, which in oracle.attractor_inclusions(att):
        if which in ("usf", "sf"):
            up.extend(reg.primitives)
        if which in ("lsf", "sf"):
            lo.extend(reg.primitives)
    notes.append("semi-Fredholm spectra are lower bounds from attractor-repeller radii")
    usf = _region(*up, exactness=SUBSET)
    lsf = _region(*lo, exactness=SUBSET)
    return _report(tag, sigma, usf, usf, lsf, notes), {}


ENGINES = {
    RAT_RAT: spectra_p12,
    RAT_IRR: spectra_p1,
    IRR_GENERIC: spectra_p4,
    IRR_A: spectra_p2,
    IRR_B: spectra_p2,
    IRR_MIXED: spectra_mixed,
    ERAT_P: spectra_p5,
    EIRR_P: spectra_p6,
    P_P: spectra_p7,
    ERAT_H: spectra_p8,
    EIRR_H: spectra_p9,
    P_H: spectra_p10,
    H_H: spectra_hh,
}


# ---------------------------------------------------------------------------
# the swap case


class ComposedWeight:
    """w2(z) = w(z) * w(Phi(z)) for the swap map, evaluated pointwise."""

    def __init__(self, w: WeightPoly, Phi: BidiscMap):
        self.w, self.Phi = w, Phi

    def __call__(self, z1, z2):
        u1, u2 = self.Phi.apply(z1, z2)
        return self.w(z1, z2) * self.w(u1, u2)

    def transpose(self):
        return _Transposed(self)

    def is_zero(self) -> bool:
        return self.w.is_zero()


class _Transposed:
    def __init__(self, f):
        self.f = f

    def __call__(self, z1, z2):
        return self.f(z2, z1)

    def transpose(self):
        return self.f

    def is_zero(self) -> bool:
        return self.f.is_zero()


@dataclass(eq=False)
class CaseBReduction:
    """Diagonal square of a swap map; sigma(T) is the radial square root of sigma(T^2)."""

    problem: Problem
    weight: object
    original_status: Optional[InvertibilityStatus]
    instruction: str = "radial_sqrt"


def _compose_factor(outer: MobiusMap, inner: MobiusMap) -> MobiusMap:
    M = outer.compose(inner)
    kind, hint = "matrix", {}
    if outer.kind == "parabolic" and inner.kind == "parabolic":
        fo, fi = outer.hint["fixed_point"], inner.hint["fixed_point"]
        if abs(fo - fi) < 1e-12:
            kind, hint = "parabolic", {"fixed_point": fo}
    return MobiusMap(M.matrix, M.angle, kind, hint)


def reduce_case_b(phi, psi, w: WeightPoly, relation=None, budget: int = DEFAULT_BUDGET) -> CaseBReduction:
    """Reduce T f = w f(psi(z2), phi(z1)) to T^2, which acts diagonally by (psi o phi, phi o psi)."""
    Phi = BidiscMap(phi, psi, True)
    if phi.is_rotation and psi.is_rotation and phi.angle is not None and psi.angle is not None:
        gamma = add_angles(phi.angle, psi.angle)
        if gamma is None:
            raise UnsupportedCase("swap of two irrational rotations needs an independence tag")
        if isinstance(gamma, Rational):
            raise UnsupportedCase("the square of the swap map is periodic")
        gamma = Irrational(gamma.value, PositiveRelation(1, 1))
        a, b = _multiplier(phi), _multiplier(psi)
        w2 = w * w.rotate(b, a).transpose()
        R = rotation_map(gamma)
        prob = prepare(R, R, w2, PositiveRelation(1, 1), budget=budget, case_b=True)
        return CaseBReduction(prob, w2, None)
    chi1 = _compose_factor(psi, phi)
    chi2 = _compose_factor(phi, psi)
    for chi in (chi1, chi2):
        if chi.is_rotation or abs(chi.matrix[0, 0].real) < 1.0 - 1e-9:
            raise UnsupportedCase("the square of the swap map has an elliptic factor of unknown angle")
    status = require_status(w, budget=budget)
    w2 = ComposedWeight(w, Phi)
    prob = prepare(chi1, chi2, w2, status=status, budget=budget, case_b=True)
    return CaseBReduction(prob, w2, status)


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class Options:
    grid: int = oracle.DEFAULT_GRID
    n_max: int = oracle.DEFAULT_N_MAX
    horizon: int = oracle.DEFAULT_HORIZON
    tolerance: float = oracle.RADIUS_TOL
    samples: int = 64
    profile_samples: int = PROFILE_SAMPLES
    budget: int = DEFAULT_BUDGET
    cross_check: bool = True
    probes: bool = True


def run_engine(prob: Problem, opts: Optional[Options] = None, **kw):
    opts = opts or Options()
    rep, aux = ENGINES[prob.tag.kind](prob, opts, **kw)
    return _add_boundary(rep), aux


def _boundary_circles(sigma: SpectralRegion):
    """Circles of the boundary of an exact rotation-invariant sigma (the origin excluded)."""
    if sigma.exactness != EXACT or not sigma.is_rotation_invariant():
        return []
    out = []
    for a, b in sigma.intervals():
        if a > 0:
            out.append(a)
        if b > a:
            out.append(b)
    return out


def _add_boundary(rep: SpectrumReport) -> SpectrumReport:
    """Add the boundary of sigma to spectra known only from below.

    A non-isolated boundary point of sigma at which T - lambda were semi-Fredholm
    would have a punctured neighbourhood of constant index, forcing it to be
    isolated; so the boundary circles lie in sigma_ap, sigma_usf and sigma_lsf.
    """
    radii = _boundary_circles(rep.sigma)
    added = False
    for name in ("sigma_ap", "sigma_usf", "sigma_lsf"):
        reg = getattr(rep, name)
        if reg.exactness != SUBSET:
            continue
        ivs = reg.intervals()
        new = [circle(r) for r in radii if not any(c - 1e-12 <= r <= d + 1e-12 for c, d in ivs)]
        if new:
            setattr(rep, name, SpectralRegion(reg.primitives + tuple(new), SUBSET))
            added = True
    if added:
        rep.notes.append("boundary circles of sigma added to the lower bounds")
    return rep


def _sqrt_region(reg: SpectralRegion) -> SpectralRegion:
    out = reg.radial_sqrt()
    if reg.exactness != EXACT:
        out = out.with_exactness(ORACLE)
    return out


def containment_entries(rep: SpectrumReport) -> List[OracleEntry]:
    """Check ap within sigma, usf within ap and usf, lsf within sigma where the regions are exact."""
    out = []

    def check(name, inner, outer):
        if inner.is_empty():
            return
        if outer.exactness != EXACT or inner.exactness not in (EXACT, SUBSET):
            return
        ok = interval_subset(inner, outer, 1e-6)
        out.append(OracleEntry(f"containment[{name}]", None, None, None, ok))

    check("ap<=sigma", rep.sigma_ap, rep.sigma)
    check("usf<=ap", rep.sigma_usf, rep.sigma_ap)
    check("usf<=sigma", rep.sigma_usf, rep.sigma)
    check("lsf<=sigma", rep.sigma_lsf, rep.sigma)
    return out


def _attractor_entries(prob: Problem, rep: SpectrumReport, torus_zero=None) -> List[OracleEntry]:
    kind = prob.tag.kind
    if kind not in (ERAT_H, EIRR_H, P_H):
        return []
    try:
        att = oracle.attractor_data(prob.w, prob.phi, prob.psi, torus_zero=torus_zero)
    except Exception:  # pragma: no cover - attractor data is advisory
        return []
    out = []
    for reg, which in oracle.attractor_inclusions(att):
        targets = {"usf": [rep.sigma_usf], "lsf": [rep.sigma_lsf], "sf": [rep.sigma_usf, rep.sigma_lsf]}[which]
        for t in targets:
            if t.exactness != EXACT:
                continue
            ok = interval_subset(reg, t, 1e-6)
            lo, hi = reg.radial_bounds()
            out.append(OracleEntry(f"attractor_inclusion[{which}]", None, lo, hi, ok))
    return out


def compute_report(
    phi: MobiusMap,
    psi: MobiusMap,
    w: WeightPoly,
    swap: bool = False,
    relation: Optional[RelationTag] = None,
    options: Optional[Options] = None,
) -> SpectrumReport:
    """Classify, evaluate the closed form, and attach the oracle cross-checks."""
    opts = options or Options()
    if swap:
        red = reduce_case_b(phi, psi, w, relation, opts.budget)
        prob = red.problem
        torus_zero = None
        if red.original_status is not None:
            wit = red.original_status.witness if red.original_status.kind == NOT_INVERTIBLE_CT2 else None
            torus_zero = lambda: wit  # noqa: E731
        kw = {"torus_zero": torus_zero} if prob.tag.kind == H_H else {}
        sq, aux = run_engine(prob, opts, **kw)
        rep = SpectrumReport(
            prob.tag.label,
            _sqrt_region(sq.sigma),
            _sqrt_region(sq.sigma_ap),
            _sqrt_region(sq.sigma_usf),
            _sqrt_region(sq.sigma_lsf),
            [],
            ["spectra of T are radial square roots of those of T^2"] + sq.notes,
        )
        if opts.cross_check:
            status = red.original_status or prob.tag.status
            measures = oracle.enumerate_measures(prob.tag, prob.Phi, opts.samples)
            rec = oracle.cross_check(
                rep, w, BidiscMap(phi, psi, True),
                grid=opts.grid, n_max=opts.n_max, horizon=opts.horizon,
                invertible_ct2=status.invertible_ct2 if status else None,
                measures=measures, measure_weight=red.weight, measure_power=2,
                probes=opts.probes, tol=opts.tolerance,
            )
            rep.oracle_record.extend(rec)
        rep.oracle_record.extend(containment_entries(rep))
        return rep

    prob = prepare(phi, psi, w, relation, budget=opts.budget)
    rep, aux = run_engine(prob, opts)
    if opts.cross_check:
        tag = prob.tag
        status = tag.status
        measures = oracle.enumerate_measures(tag, prob.Phi, opts.samples)
        rec = oracle.cross_check(
            rep, prob.w, prob.Phi, tag,
            grid=opts.grid, n_max=opts.n_max, horizon=opts.horizon,
            invertible_ct2=status.invertible_ct2 if status else None,
            measures=measures, jensen=aux.get("jensen"), probes=opts.probes, tol=opts.tolerance,
        )
        rep.oracle_record.extend(rec)
        rep.oracle_record.extend(_attractor_entries(prob, rep))
    rep.oracle_record.extend(containment_entries(rep))
    return rep
