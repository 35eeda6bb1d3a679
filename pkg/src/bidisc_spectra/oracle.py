"""Numerical oracles used to cross-check the closed-form spectra.

Everything here works on the torus, which is enough: the operator norm of
``T**n`` is ``max |w_n|`` over the torus and the approximate point
spectrum can be read off the boundary dynamics.  Cocycle products are
accumulated as sums of ``log|w|``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize

from . import kernels
from .certify import TORUS2, CircleSlice, certified_max_modulus, certified_min_modulus
from .errors import BudgetExhausted
from .mobius import (
    EllipticIrrational,
    EllipticRational,
    Hyperbolic,
    MobiusMap,
    Parabolic,
    classify,
)
from .regions import (
    EXACT,
    IN,
    ORACLE,
    SUBSET,
    Annulus,
    Circle,
    Disk,
    OracleEntry,
    SpectralRegion,
    SpectrumReport,
    annulus,
    circle,
    disk,
)
from .weight import WeightPoly, mahler_measure, restrict, rotation_cocycle

DEFAULT_GRID = 64
DEFAULT_N_MAX = 256
DEFAULT_HORIZON = 64
QUAD_NODES = 2**12
PROBE_SLACK = 1e-6
LOG_FLOOR = -40.0
RADIUS_TOL = 0.05


# ---------------------------------------------------------------------------
# automorphisms of the bidisc


@dataclass(frozen=True, eq=False)
class BidiscMap:
    """(z1, z2) -> (phi(z1), psi(z2)), or (psi(z2), phi(z1)) when ``swap``."""

    phi: MobiusMap
    psi: MobiusMap
    swap: bool = False

    def apply(self, z1, z2):
        if self.swap:
            return self.psi(z2), self.phi(z1)
        return self.phi(z1), self.psi(z2)

    def inverse(self) -> "BidiscMap":
        if self.swap:
            return BidiscMap(self.psi.inverse(), self.phi.inverse(), True)
        return BidiscMap(self.phi.inverse(), self.psi.inverse(), False)

    @property
    def is_isometric(self) -> bool:
        """Both factors are rotations, so the map is a torus isometry."""
        return self.phi.is_rotation and self.psi.is_rotation

    def iterate(self, z1, z2, n: int):
        f = self if n >= 0 else self.inverse()
        for _ in range(abs(n)):
            z1, z2 = f.apply(z1, z2)
        return z1, z2


def as_bidisc_map(Phi) -> BidiscMap:
    if isinstance(Phi, BidiscMap):
        return Phi
    phi, psi = Phi
    return BidiscMap(phi, psi)


# ---------------------------------------------------------------------------
# cell bounds along orbits


def _torus_grid(grid: int):
    t = (np.arange(grid) + 0.5) * (2 * np.pi / grid)
    t1, t2 = np.meshgrid(t, t, indexing="ij")
    return np.exp(1j * t1.ravel()), np.exp(1j * t2.ravel()), math.pi / grid


def _angle_consts(w: WeightPoly):
    D1 = D2 = A11 = A12 = A22 = 0.0
    for (i, j), c in w.items():
        m = abs(c)
        D1 += m * i
        D2 += m * j
        A11 += m * i * i
        A12 += m * i * j
        A22 += m * j * j
    return D1, D2, A11, A12, A22


class OrbitBounds:
    """Per-cell bounds on S_n = sum_k log|w(Phi^k t)| over square torus cells.

    With ``backward`` the sum runs over Phi^-1 t, ..., Phi^-n t instead.
    Isometric maps use a second-order model of log|w|; general Möbius
    maps use a first-order bound on the exact image arcs.
    """

    def __init__(self, w: WeightPoly, Phi: BidiscMap, z1, z2, h: float, backward: bool = False):
        self.w = w
        self.Phi = Phi.inverse() if backward else Phi
        self.backward = backward
        self.iso = Phi.is_isometric
        self.h = h
        self.D1, self.D2, self.A11, self.A12, self.A22 = _angle_consts(w)
        self.c1 = np.array(z1, dtype=np.complex128)
        self.c2 = np.array(z2, dtype=np.complex128)
        shape = self.c1.shape
        self.n = 0
        self.center = np.zeros(shape)
        if self.iso:
            self.parity = False
            self.sv = np.zeros(shape)
            self.g1 = np.zeros(shape)
            self.g2 = np.zeros(shape)
            self.hs = np.zeros(shape)
            self.u_inv = np.zeros(shape)
            self.l_bad = np.zeros(shape, dtype=bool)
            self.first = np.zeros(shape)
        else:
            e = np.exp(1j * h)
            self.l1, self.r1 = self.c1 / e, self.c1 * e
            self.l2, self.r2 = self.c2 / e, self.c2 * e
            self.up = np.zeros(shape)
            self.lo = np.zeros(shape)

    def _advance(self):
        self.c1, self.c2 = self.Phi.apply(self.c1, self.c2)
        if self.iso:
            if self.Phi.swap:
                self.parity = not self.parity
        else:
            self.l1, self.l2 = self.Phi.apply(self.l1, self.l2)
            self.r1, self.r2 = self.Phi.apply(self.r1, self.r2)

    @staticmethod
    def _arc(l, c, r):
        a = np.mod(np.angle(c / l), 2 * np.pi)
        b = np.mod(np.angle(r / c), 2 * np.pi)
        return np.maximum(a, b)

    def step(self):
        if self.backward:
            self._advance()
        c1, c2 = self.c1, self.c2
        a, w1, w2 = self.w.eval_grad(c1, c2)
        aa = np.abs(a)
        with np.errstate(divide="ignore", invalid="ignore"):
            la = np.log(aa)
            self.center += la
            if self.iso:
                h = self.h
                L = (self.D1 + self.D2) * h
                m = aa - L
                ok = m > 0
                safe = np.where(ok, aa, 1.0)
                f1 = np.real(1j * c1 * w1 / np.where(ok, a, 1.0))
                f2 = np.real(1j * c2 * w2 / np.where(ok, a, 1.0))
                if self.parity:
                    f1, f2 = f2, f1
                ms = np.where(ok, m, 1.0)
                H = (
                    (self.A11 + 2 * self.A12 + self.A22) / ms
                    + (self.D1 + self.D2) ** 2 / ms**2
                )
                self.sv += np.where(ok, np.log(safe), 0.0)
                self.g1 += np.where(ok, f1, 0.0)
                self.g2 += np.where(ok, f2, 0.0)
                self.hs += np.where(ok, H, 0.0)
                self.u_inv += np.where(ok, 0.0, np.log(aa + L))
                self.l_bad |= ~ok
                # first-order fallback; the quadratic model blows up near zeros
                self.first += np.log(aa + L)
            else:
                h1 = self._arc(self.l1, c1, self.r1)
                h2 = self._arc(self.l2, c2, self.r2)
                L = self.D1 * h1 + self.D2 * h2
                self.up += np.log(aa + L)
                self.lo += np.log(np.maximum(aa - L, 0.0))
        self.n += 1
        if not self.backward:
            self._advance()

    def upper(self):
        if self.iso:
            h = self.h
            second = self.sv + h * (np.abs(self.g1) + np.abs(self.g2)) + 0.5 * h * h * self.hs + self.u_inv
            return np.minimum(second, self.first)
        return self.up.copy()

    def lower(self):
        if self.iso:
            h = self.h
            v = self.sv - h * (np.abs(self.g1) + np.abs(self.g2)) - 0.5 * h * h * self.hs
            return np.where(self.l_bad, -np.inf, v)
        return self.lo.copy()


# ---------------------------------------------------------------------------
# spectral radius


@dataclass(frozen=True)
class OracleEstimate:
    quantity: str
    lower: float
    upper: float
    n_used: int
    grid: int
    converged: bool
    history: Tuple[Tuple[int, float], ...] = ()


def _check_pow2(n_max: int):
    if n_max < 1 or n_max & (n_max - 1):
        raise ValueError("n_max must be a power of two")


def birkhoff_radius(w: WeightPoly, Phi, n_max: int = DEFAULT_N_MAX, grid: int = DEFAULT_GRID) -> OracleEstimate:
    """Bracket the spectral radius by max |w_n|**(1/n) over the torus.

    ``upper`` is certified (cell bounds, chained through submultiplicativity
    B_2n <= B_n**2).  ``lower`` is the largest sampled |w_n|**(1/n) on the
    cell centres at ``n_max``.
    """
    _check_pow2(n_max)
    if grid < 16:
        raise ValueError("grid must be at least 16")
    Phi = as_bidisc_map(Phi)
    z1, z2, h = _torus_grid(grid)
    ob = OrbitBounds(w, Phi, z1, z2, h)
    hist = []
    logB = math.inf
    best = math.inf
    n = 0
    while n < n_max:
        ob.step()
        n += 1
        if n & (n - 1) == 0:
            raw = float(np.max(ob.upper()))
            logB = min(raw, 2 * logB) if hist else raw
            best = min(best, logB / n)
            hist.append((n, math.exp(logB / n)))
    with np.errstate(over="ignore"):
        lower = math.exp(float(np.max(ob.center)) / n_max)
    upper = math.exp(best)
    lower = min(lower, upper)
    return OracleEstimate("rho", lower, upper, n_max, grid, upper - lower <= RADIUS_TOL * upper, tuple(hist))


def rho_min_estimate(
    w: WeightPoly, Phi, n_max: int = DEFAULT_N_MAX, grid: int = DEFAULT_GRID, invertible_ct2: Optional[bool] = None
) -> OracleEstimate:
    """Bracket rho_min = 1/rho(T^-1) on C(T^2), or 0 when w vanishes on the torus.

    rho(T^-1) is governed by max |1/w_n|, i.e. by min |w_n| over the torus,
    so this runs the mirror image of ``birkhoff_radius``.
    """
    _check_pow2(n_max)
    Phi = as_bidisc_map(Phi)
    if invertible_ct2 is None:
        try:
            res = certified_min_modulus(w, TORUS2, stop_when_positive=True, budget=200_000)
            invertible_ct2 = res.lower > 0 and not res.certified_zero
        except BudgetExhausted:
            invertible_ct2 = False
    if not invertible_ct2:
        return OracleEstimate("rho_min", 0.0, 0.0, 0, grid, True, ())
    z1, z2, h = _torus_grid(grid)
    ob = OrbitBounds(w, Phi, z1, z2, h)
    hist = []
    logL = -math.inf
    best = -math.inf
    n = 0
    while n < n_max:
        ob.step()
        n += 1
        if n & (n - 1) == 0:
            raw = float(np.min(ob.lower()))
            logL = max(raw, 2 * logL) if hist else raw
            best = max(best, logL / n)
            hist.append((n, math.exp(logL / n) if logL > -math.inf else 0.0))
    lower = math.exp(best) if best > -math.inf else 0.0
    upper = math.exp(float(np.min(ob.center)) / n_max)
    upper = max(upper, lower)
    return OracleEstimate("rho_min", lower, upper, n_max, grid, upper - lower <= RADIUS_TOL * upper, tuple(hist))


# ---------------------------------------------------------------------------
# invariant measures


@dataclass(frozen=True)
class TorusLebesgue:
    kind = "TorusLebesgue"


@dataclass(frozen=True)
class CircleSliceMeasure:
    """Uniform on the finite z1-orbit times Lebesgue measure in z2."""

    z1_orbit: Tuple[complex, ...]
    kind = "CircleSlice"


@dataclass(frozen=True)
class DiagonalOrbit:
    """Haar measure on the coset base * {(u, v) : u**p v**q = 1}."""

    base: Tuple[complex, complex]
    p: int
    q: int
    kind = "DiagonalOrbit"


@dataclass(frozen=True)
class FixedPointAtom:
    point: Tuple[complex, complex]
    kind = "FixedPointAtom"


@dataclass(frozen=True)
class BoundaryCircleAtFixedPoint:
    """Measures on T x {zeta}: orbit atoms when ``orbit`` is given, Lebesgue otherwise."""

    zeta: complex
    orbit: Optional[Tuple[complex, ...]] = None
    kind = "BoundaryCircleAtFixedPoint"


@dataclass(frozen=True)
class PeriodicOrbit:
    points: Tuple[Tuple[complex, complex], ...]
    kind = "PeriodicOrbit"


MeasureFamily = object


def _circle_nodes(n: int, offset: float = 0.5):
    return np.exp(2j * np.pi * (np.arange(n) + offset) / n)


def _ext_gcd(a: int, b: int):
    if b == 0:
        return (1 if a >= 0 else -1), 0
    x, y = _ext_gcd(b, a % b)
    return y, x - (a // b) * y


def measure_nodes(family, nodes: int = QUAD_NODES):
    """Quadrature nodes (z1, z2) with equal weights for a measure family."""
    if isinstance(family, TorusLebesgue):
        u = _circle_nodes(nodes)
        z1, z2 = np.meshgrid(u, u, indexing="ij")
        return z1.ravel(), z2.ravel()
    if isinstance(family, CircleSliceMeasure):
        u = _circle_nodes(nodes)
        o = np.array(family.z1_orbit)
        z1, z2 = np.meshgrid(o, u, indexing="ij")
        return z1.ravel(), z2.ravel()
    if isinstance(family, DiagonalOrbit):
        p, q = family.p, family.q
        g = math.gcd(p, q)
        pp, qq = p // g, q // g
        a, b = _ext_gcd(pp, qq)
        s = 2 * np.pi * (np.arange(nodes) + 0.5) / nodes
        z1s, z2s = [], []
        for j in range(g):
            om = np.exp(2j * np.pi * j / g)
            u0, v0 = om**a, om**b
            z1s.append(family.base[0] * u0 * np.exp(1j * qq * s))
            z2s.append(family.base[1] * v0 * np.exp(-1j * pp * s))
        return np.concatenate(z1s), np.concatenate(z2s)
    if isinstance(family, FixedPointAtom):
        return np.array([family.point[0]]), np.array([family.point[1]])
    if isinstance(family, BoundaryCircleAtFixedPoint):
        z1 = np.array(family.orbit) if family.orbit is not None else _circle_nodes(nodes)
        return z1, np.full(z1.shape, family.zeta, dtype=np.complex128)
    if isinstance(family, PeriodicOrbit):
        pts = np.array(family.points)
        return pts[:, 0], pts[:, 1]
    raise TypeError(f"unknown measure family {family!r}")


def integrate(f: Callable, family, nodes: int = QUAD_NODES) -> complex:
    z1, z2 = measure_nodes(family, nodes)
    return complex(np.mean(f(z1, z2)))


def measure_quadrature(w, family, nodes: int = QUAD_NODES) -> float:
    """exp of the integral of log|w| against the family member (0 when it diverges)."""
    if isinstance(family, TorusLebesgue) and isinstance(w, WeightPoly):
        u = _circle_nodes(nodes)
        m = kernels.log_abs_mean(np.ascontiguousarray(w.array), u, u)
    else:
        z1, z2 = measure_nodes(family, nodes)
        with np.errstate(divide="ignore"):
            m = float(np.mean(np.log(np.abs(w(z1, z2)))))
    if not m > LOG_FLOOR:
        return 0.0
    return math.exp(m)


def enumerate_measures(case, Phi, samples: int = 64) -> list:
    """The ergodic invariant measures relevant to ``case`` (sampled where they form a continuum)."""
    Phi = as_bidisc_map(Phi)
    kind = case.kind
    base = np.exp(2j * np.pi * np.arange(samples) / samples)
    if kind == "EE-rat-rat":
        out = []
        g = int(round(math.sqrt(samples)))
        for a in base[:: max(1, samples // g)]:
            for b in base[:: max(1, samples // g)]:
                pts, z = [], (complex(a), complex(b))
                for _ in range(case.m):
                    pts.append(z)
                    z = tuple(complex(x) for x in Phi.apply(*z))
                out.append(PeriodicOrbit(tuple(pts)))
        return out
    if kind == "EE-rat-irr":
        alpha = Phi.phi.matrix[0, 0] / Phi.phi.matrix[1, 1]
        p = case.p
        return [CircleSliceMeasure(tuple(complex(z * alpha**k) for k in range(p))) for z in base]
    if kind in ("EE-irr-irr-A", "EE-irr-irr-generic"):
        return [TorusLebesgue()]
    if kind in ("EE-irr-irr-B", "EE-irr-irr-mixed-relation"):
        p, q = case.exponents
        return [DiagonalOrbit((1 + 0j, complex(b)), p, q) for b in base]
    zetas = _fixed_boundary_points(Phi.psi)
    if kind in ("Erat-P", "Erat-H"):
        alpha = Phi.phi.matrix[0, 0] / Phi.phi.matrix[1, 1]
        p = case.p
        return [
            BoundaryCircleAtFixedPoint(z, tuple(complex(s * alpha**k) for k in range(p))) for z in zetas for s in base
        ]
    if kind in ("Eirr-P", "Eirr-H"):
        return [BoundaryCircleAtFixedPoint(z) for z in zetas]
    firsts = _fixed_boundary_points(Phi.phi)
    return [FixedPointAtom((a, b)) for a in firsts for b in zetas]


def _fixed_boundary_points(M: MobiusMap):
    cls = classify(M)
    if isinstance(cls, Parabolic):
        return [complex(cls.fixed_point)]
    if isinstance(cls, Hyperbolic):
        return [complex(cls.attracting), complex(cls.repelling)]
    raise ValueError("map has no boundary fixed points")


# ---------------------------------------------------------------------------
# membership tests


@dataclass(frozen=True)
class MembershipResult:
    verdict: str
    witness: Optional[Tuple[complex, complex]] = None
    violation: float = 0.0
    n_violation: int = 0


CERTIFIED_OUT = "CertifiedOut"
PLAUSIBLE_IN = "PlausibleIn"
NO_WITNESS = "NoWitnessFound"


def _orbit_log_sums(w, Phi: BidiscMap, z1, z2, n: int, backward: bool):
    """Cumulative sums of log|w| along the forward orbit or the backward orbit Phi^-1..Phi^-n."""
    f = Phi.inverse() if backward else Phi
    out = np.empty((n,) + np.shape(z1))
    acc = np.zeros(np.shape(z1))
    for k in range(n):
        if backward:
            z1, z2 = f.apply(z1, z2)
        with np.errstate(divide="ignore"):
            acc = acc + np.log(np.abs(w(z1, z2)))
        out[k] = acc
        if not backward:
            z1, z2 = f.apply(z1, z2)
    return out


def _violation(w, Phi, t, N, L, s, lsf: bool):
    z1 = np.exp(1j * np.asarray(t[..., 0]))
    z2 = np.exp(1j * np.asarray(t[..., 1]))
    ns = np.arange(1, N + 1).reshape((N,) + (1,) * np.ndim(z1))
    F = _orbit_log_sums(w, Phi, z1, z2, N, False) / ns
    B = _orbit_log_sums(w, Phi, z1, z2, N, True) / ns
    with np.errstate(invalid="ignore"):
        if lsf:
            v = np.maximum(F - L - s, L - s - B)
        else:
            v = np.maximum(L - s - F, B - L - s)
    v = np.where(np.isnan(v), np.inf, v)
    return v.max(axis=0)


def _membership(lam, w, Phi, horizon, grid, lsf):
    Phi = as_bidisc_map(Phi)
    L = math.log(max(abs(lam), 1e-300))
    s = math.log1p(PROBE_SLACK)
    z1, z2, h = _torus_grid(grid)
    fw = OrbitBounds(w, Phi, z1, z2, h)
    bw = OrbitBounds(w, Phi, z1, z2, h, backward=True)
    violated = np.zeros(z1.shape, dtype=bool)
    first = np.zeros(z1.shape, dtype=int)
    vc = np.full(z1.shape, -np.inf)
    for n in range(1, horizon + 1):
        fw.step()
        bw.step()
        if not lsf:
            cert = (fw.upper() < n * (L - s)) | (bw.lower() > n * (L + s))
            newly = cert & ~violated
            first[newly] = n
            violated |= cert
            with np.errstate(invalid="ignore"):
                v = np.maximum(L - s - fw.center / n, bw.center / n - L - s)
        else:
            with np.errstate(invalid="ignore"):
                v = np.maximum(fw.center / n - L - s, L - s - bw.center / n)
        vc = np.maximum(vc, np.where(np.isnan(v), np.inf, v))
    if not lsf and violated.all():
        return MembershipResult(CERTIFIED_OUT, None, float(vc.min()), int(first.max()))
    tt = np.stack([np.angle(z1), np.angle(z2)], axis=1)
    order = np.argsort(vc, kind="stable")
    k = int(order[0])
    if vc[k] <= 0 or not lsf:
        # an uncertified cell already makes the ap verdict PlausibleIn
        return MembershipResult(PLAUSIBLE_IN, (complex(z1[k]), complex(z2[k])), float(vc[k]))
    best_t, best_v = tt[k], float(vc[k])

    def fun(t):
        return float(_violation(w, Phi, np.asarray(t)[None, :], horizon, L, s, lsf)[0])

    for k in order[:4]:
        res = minimize(fun, tt[int(k)], method="Nelder-Mead", options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 400})
        if res.fun < best_v:
            best_t, best_v = res.x, float(res.fun)
        if best_v <= 0:
            break
    wit = (complex(np.exp(1j * best_t[0])), complex(np.exp(1j * best_t[1])))
    if best_v <= 0:
        return MembershipResult(PLAUSIBLE_IN, wit, best_v)
    return MembershipResult(NO_WITNESS, wit, best_v)


def ap_membership_test(lam: complex, w, Phi, horizon: int = DEFAULT_HORIZON, grid: int = DEFAULT_GRID) -> MembershipResult:
    """Finite-horizon test of |w_n(t)| >= |lam|^n and |w_n(Phi^-n t)| <= |lam|^n.

    Returns CertifiedOut only if every torus cell violates one inequality
    with a certified margin at some n <= horizon; otherwise PlausibleIn
    with the best witness found (``violation <= 0`` means it satisfies
    every inequality up to the horizon).
    """
    return _membership(lam, w, Phi, horizon, grid, lsf=False)


def lsf_membership_test(lam: complex, w, Phi, horizon: int = DEFAULT_HORIZON, grid: int = DEFAULT_GRID) -> MembershipResult:
    """Mirror of ``ap_membership_test``; never returns CertifiedOut."""
    return _membership(lam, w, Phi, horizon, grid, lsf=True)


# ---------------------------------------------------------------------------
# attractor / repeller inclusions


@dataclass(frozen=True)
class AttractorData:
    K1: str
    K2: str
    rho_K1: float
    rho_min_K1: float
    rho_K2: float
    rho_min_K2: float
    wandering_zero: bool = False
    hypotheses_verified: bool = False

    @property
    def radii(self):
        return (self.rho_K1, self.rho_min_K1, self.rho_K2, self.rho_min_K2)


def _slice_poly(w: WeightPoly, zeta: complex) -> WeightPoly:
    return WeightPoly({(k, 0): c for k, c in enumerate(restrict(w, "z2", zeta).coef)})


def _circle_radii(poly: WeightPoly, irrational: bool, p: int = 1):
    """(rho, rho_min) of the weighted rotation restricted to a boundary circle."""
    if poly.is_zero():
        return 0.0, 0.0
    try:
        mn = certified_min_modulus(poly, CircleSlice("z2", [1.0]), stop_on_zero=True)
    except BudgetExhausted:
        mn = None
    zero = mn is None or mn.certified_zero or mn.upper == 0.0
    if irrational:
        m = mahler_measure(restrict(poly, "z2", 1.0))
        return m, (0.0 if zero else m)
    mx = certified_max_modulus(poly, CircleSlice("z2", [1.0]))
    return mx.lower ** (1.0 / p), (0.0 if zero else mn.upper ** (1.0 / p))


def attractor_data(w, phi: MobiusMap, psi: MobiusMap, torus_zero: Optional[Callable] = None) -> AttractorData:
    """K1/K2 data for Phi = (phi, psi) with psi hyperbolic on the second coordinate.

    ``torus_zero`` overrides the torus zero search (it returns a witness or
    None); it is needed when ``w`` is not a polynomial.
    """
    hc = classify(psi)
    if not isinstance(hc, Hyperbolic):
        raise ValueError("second factor must be hyperbolic")
    z1a, z1r = complex(hc.attracting), complex(hc.repelling)
    fc = classify(phi)
    verified = False
    if isinstance(fc, (EllipticRational, EllipticIrrational)):
        alpha = complex(phi.matrix[0, 0] / phi.matrix[1, 1])
        irr = isinstance(fc, EllipticIrrational)
        p = 1 if irr else fc.order
        radii = []
        for zeta in (z1a, z1r):
            poly = _slice_poly(w, zeta)
            if not irr:
                poly = rotation_cocycle(poly, alpha, 1.0, p)
            radii.append(_circle_radii(poly, irr, p))
        (r1, m1), (r2, m2) = radii
        K1, K2 = f"T x {{{_fmt(z1a)}}}", f"T x {{{_fmt(z1r)}}}"
        nonzero_K = m1 > 0 and m2 > 0
        verified = irr
    else:
        if isinstance(fc, Parabolic):
            a = b = complex(fc.fixed_point)
        elif isinstance(fc, Hyperbolic):
            a, b = complex(fc.attracting), complex(fc.repelling)
        else:
            raise ValueError("unsupported first factor")
        r1 = m1 = abs(w(a, z1a))
        r2 = m2 = abs(w(b, z1r))
        K1, K2 = f"{{({_fmt(a)}, {_fmt(z1a)})}}", f"{{({_fmt(b)}, {_fmt(z1r)})}}"
        nonzero_K = m1 > 0 and m2 > 0
    wandering = False
    if nonzero_K:
        if torus_zero is not None:
            t = torus_zero()
            wandering = t is not None and _off_limit_sets(t, phi, psi, fc, z1a, z1r)
        else:
            try:
                res = certified_min_modulus(w, TORUS2, stop_on_zero=True, stop_when_positive=True, budget=200_000)
                wandering = res.certified_zero and _off_limit_sets(res.witness, phi, psi, fc, z1a, z1r)
            except BudgetExhausted:
                wandering = False
    return AttractorData(K1, K2, r1, m1, r2, m2, wandering, verified)


def _off_limit_sets(t, phi, psi, fc, za, zr) -> bool:
    """The orbit of t converges to the limit sets (where w does not vanish) in both directions."""
    z1, z2 = t
    if min(abs(z2 - za), abs(z2 - zr)) < 1e-9:
        return False
    if isinstance(fc, (Parabolic, Hyperbolic)):
        pts = [complex(fc.fixed_point)] if isinstance(fc, Parabolic) else [complex(fc.attracting), complex(fc.repelling)]
        if min(abs(z1 - p) for p in pts) < 1e-9:
            return False
    return True


def _fmt(z: complex) -> str:
    return f"{z.real:.6g}{z.imag:+.6g}i"


def attractor_inclusions(att: AttractorData, tol: float = 1e-12):
    """Regions guaranteed inside sigma_usf / sigma_lsf from attractor-repeller radii."""
    out = []
    rK1, mK1, rK2, mK2 = att.radii

    def band(r, R):
        return SpectralRegion.of(disk(R) if r <= tol else annulus(r, R), exactness=SUBSET)

    if rK2 < mK1 - tol * max(1.0, mK1):
        out.append((band(rK2, mK1), "usf"))
    if rK1 < mK2 - tol * max(1.0, mK2):
        out.append((band(rK1, mK2), "lsf"))
    vals = att.radii
    if max(vals) - min(vals) <= tol * max(1.0, max(vals)):
        out.append((SpectralRegion.of(circle(vals[0]), exactness=SUBSET), "sf"))
    if att.wandering_zero:
        out.append((SpectralRegion.of(disk(rK2), exactness=SUBSET), "usf"))
        out.append((SpectralRegion.of(disk(rK1), exactness=SUBSET), "lsf"))
    return out


# ---------------------------------------------------------------------------
# cross-checks


def _radius_agree(value: float, est: OracleEstimate, tol: float = RADIUS_TOL, scale: float = 0.0) -> bool:
    """Relative agreement; a zero radius only needs the sampled bound below ``tol * scale``."""
    if value <= 1e-12:
        return est.lower <= tol * scale + 1e-12
    return est.upper >= value * (1 - tol) - 1e-12 and est.lower <= value * (1 + tol) + 1e-12


def probe_radii(region: SpectralRegion) -> List[float]:
    """Radii just inside/outside each boundary of the region plus interior midpoints."""
    out = set()
    for a, b in region.intervals(1e-9):
        for x in (a, b):
            if x > 0:
                out.add(round(0.9 * x, 12))
                out.add(round(1.1 * x, 12))
        if b > a:
            out.add(round(0.5 * (a + b), 12))
    return sorted(out)


def cross_check(
    report: SpectrumReport,
    w: WeightPoly,
    Phi,
    case=None,
    *,
    grid: int = DEFAULT_GRID,
    n_max: int = DEFAULT_N_MAX,
    horizon: int = DEFAULT_HORIZON,
    invertible_ct2: Optional[bool] = None,
    measures: Optional[list] = None,
    measure_weight=None,
    measure_power: int = 1,
    jensen: Optional[Tuple[float, float]] = None,
    probes: bool = True,
    tol: float = RADIUS_TOL,
) -> List[OracleEntry]:
    """Compare the closed-form report with the numerical oracles.

    ``measure_weight``/``measure_power`` let a caller quadrature a reduced
    problem (e.g. the square of a swap map) and compare its ``power``-th root.
    ``jensen`` is ``(closed_form, quadrature)`` for a slice value that the
    closed form uses in place of a circle average.
    """
    Phi = as_bidisc_map(Phi)
    out: List[OracleEntry] = []
    sig = report.sigma
    rho = birkhoff_radius(w, Phi, n_max, grid)
    g1, g2, _ = _torus_grid(grid)
    scale = float(np.max(np.abs(w(g1, g2))))
    try:
        outer = sig.radial_bounds()[1]
    except ValueError:
        outer = None
    if outer is not None:
        out.append(OracleEntry("rho", outer, rho.lower, rho.upper, _radius_agree(outer, rho, tol, scale)))
    rmin = rho_min_estimate(w, Phi, n_max, grid, invertible_ct2)
    ap = report.sigma_ap
    if ap.exactness in (EXACT, ORACLE) and not ap.is_empty():
        inner = ap.radial_bounds()[0]
        if rmin.upper == 0.0:
            agree = inner <= 1e-9
        elif inner <= 1e-12:
            agree = rmin.lower <= tol * scale + 1e-12
        else:
            agree = rmin.lower <= inner * (1 + tol) + 1e-12 and rmin.upper >= inner * (1 - tol) - 1e-12
        out.append(OracleEntry("rho_min", inner, rmin.lower, rmin.upper, agree))
    if measures:
        mw = measure_weight if measure_weight is not None else w
        vals = [measure_quadrature(mw, m) ** (1.0 / measure_power) for m in measures]
        top = max(vals)
        if top <= 1e-12:
            agree = rho.lower <= tol * scale + 1e-12
        else:
            agree = top <= rho.upper * (1 + tol) + 1e-12 and top >= rho.lower * (1 - tol) - 1e-12
        out.append(OracleEntry(f"max_measure[{measures[0].kind}]", top, rho.lower, rho.upper, agree))
        if rmin.upper > 0:
            bot = min(vals)
            agree = bot <= rmin.upper * (1 + tol) + 1e-12 and bot >= rmin.lower * (1 - tol) - 1e-12
            out.append(OracleEntry(f"min_measure[{measures[0].kind}]", bot, rmin.lower, rmin.upper, agree))
    if jensen is not None:
        closed, quad = jensen
        agree = quad <= closed * (1 + 1e-6) + 1e-12
        out.append(OracleEntry("jensen_gap", closed, quad, quad, agree))
    if probes and ap.exactness == EXACT and ap.is_rotation_invariant() and not ap.is_empty():
        for x in probe_radii(ap):
            res = ap_membership_test(x, w, Phi, horizon, grid)
            inside = ap.contains(x, 1e-9) == IN
            certified_out = res.verdict == CERTIFIED_OUT
            out.append(
                OracleEntry(
                    f"ap_membership(|lambda|={x:.6g})",
                    1.0 if inside else 0.0,
                    0.0 if certified_out else 1.0,
                    0.0 if certified_out else 1.0,
                    not (certified_out and inside),
                )
            )
    return out
