"""Certified min/max modulus of a polynomial by branch and bound.

Cells are boxes in polar parameters ``(r1, t1, r2, t2)``.  Each cell gets a
guaranteed enclosure of ``|w|`` from a first-order Taylor model around its
centre plus a second-order remainder bounded by coefficient sums (see
``kernels.cell_bounds``).  Only the dimension with the largest contribution
to the enclosure width is split, which keeps cell counts low when the
extremum is attained on a curve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from . import kernels
from .errors import BudgetExhausted, Inconclusive, ZeroWeight
from .weight import WeightPoly

EPS_ZERO = 1e-12
DEFAULT_TOL = 1e-6
DEFAULT_BUDGET = 1_000_000
TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------------------
# domains


@dataclass(frozen=True)
class Torus2:
    def initial_cells(self):
        return _grid_cells([(1.0, 0.0)], 16, [(1.0, 0.0)], 16)

    def __str__(self):
        return "Torus2"


@dataclass(frozen=True)
class Bidisc:
    def initial_cells(self):
        rs = [(0.125 + 0.25 * k, 0.125) for k in range(4)]
        return _grid_cells(rs, 8, rs, 8)

    def __str__(self):
        return "Bidisc"


@dataclass(frozen=True)
class CircleSlice:
    """One coordinate fixed to each of ``values``; the other runs over the unit circle."""

    axis: str
    values: Tuple[complex, ...]

    def __init__(self, axis: str, values):
        if axis not in ("z1", "z2"):
            raise ValueError("axis must be 'z1' or 'z2'")
        if np.ndim(values) == 0:
            values = (values,)
        object.__setattr__(self, "axis", axis)
        object.__setattr__(self, "values", tuple(complex(v) for v in values))

    def initial_cells(self):
        n = 32
        ht = math.pi / n
        ts = (np.arange(n) + 0.5) * 2 * ht
        centers, half = [], []
        for v in self.values:
            r, t = abs(v), math.atan2(v.imag, v.real)
            for s in ts:
                if self.axis == "z1":
                    centers.append((r, t, 1.0, s))
                    half.append((0.0, 0.0, 0.0, ht))
                else:
                    centers.append((1.0, s, r, t))
                    half.append((0.0, ht, 0.0, 0.0))
        return np.array(centers, dtype=float), np.array(half, dtype=float)

    def __str__(self):
        return f"CircleSlice({self.axis})"


TORUS2 = Torus2()
BIDISC = Bidisc()


def _grid_cells(r1s, n1, r2s, n2):
    h1, h2 = math.pi / n1, math.pi / n2
    t1 = (np.arange(n1) + 0.5) * 2 * h1
    t2 = (np.arange(n2) + 0.5) * 2 * h2
    centers, half = [], []
    for r1, hr1 in r1s:
        for r2, hr2 in r2s:
            for a in t1:
                for b in t2:
                    centers.append((r1, a, r2, b))
                    half.append((hr1, h1, hr2, h2))
    return np.array(centers, dtype=float), np.array(half, dtype=float)


def _to_points(centers):
    z1 = centers[..., 0] * np.exp(1j * centers[..., 1])
    z2 = centers[..., 2] * np.exp(1j * centers[..., 3])
    return z1, z2


# ---------------------------------------------------------------------------
# results


@dataclass(frozen=True)
class ModulusBounds:
    lower: float
    upper: float
    witness: Tuple[complex, complex]
    cells: int = 0
    certified_zero: bool = False

    def __iter__(self):
        return iter((self.lower, self.upper, self.witness))


# ---------------------------------------------------------------------------
# local refinement


def refine_zero(w: WeightPoly, params, free, iters: int = 40):
    """Gauss-Newton on the free polar parameters towards a zero of ``w``.

    Radii are clamped to [0, 1].  Returns the refined parameters and |w| there.
    """
    x = np.array(params, dtype=float)
    free = [k for k in range(4) if free[k]]
    best_x, best_v = x.copy(), abs(w(*_to_points(x)))
    if not free:
        return best_x, best_v
    for _ in range(iters):
        z1, z2 = _to_points(x)
        a, w1, w2 = w.eval_grad(z1, z2)
        a = complex(a)
        e1, e2 = np.exp(1j * x[1]), np.exp(1j * x[3])
        g = np.array([w1 * e1, w1 * 1j * z1, w2 * e2, w2 * 1j * z2], dtype=complex)[free]
        J = np.vstack([g.real, g.imag])
        step = -np.linalg.pinv(J) @ np.array([a.real, a.imag])
        x[free] += step
        x[0] = min(max(x[0], 0.0), 1.0)
        x[2] = min(max(x[2], 0.0), 1.0)
        v = abs(w(*_to_points(x)))
        if v < best_v:
            best_x, best_v = x.copy(), v
        if best_v < 1e-15 or np.max(np.abs(step)) < 1e-16:
            break
    return best_x, best_v


# ---------------------------------------------------------------------------
# branch and bound


def certified_min_modulus(
    w: WeightPoly,
    domain=TORUS2,
    tol: float = DEFAULT_TOL,
    budget: int = DEFAULT_BUDGET,
    stop_when_positive: bool = False,
    stop_on_zero: bool = True,
) -> ModulusBounds:
    """Bounds ``lower <= min |w| <= upper = |w(witness)|`` over ``domain``.

    With ``stop_when_positive`` the search returns as soon as the lower
    bound is strictly positive.  With ``stop_on_zero`` it returns once a
    point with ``|w| < 1e-12`` is found.  Raises ``BudgetExhausted``.
    """
    if w.is_zero():
        raise ZeroWeight("weight is identically zero")
    coef = np.ascontiguousarray(w.array)
    consts = np.array(w.lipschitz_constants(), dtype=float)
    centers, half = domain.initial_cells()
    free = half[0] > 0

    best = math.inf
    best_x = centers[0].copy()
    pruned_lower = math.inf
    used = 0
    zero = False

    while True:
        used += len(centers)
        absval, lower, upper, split = kernels.cell_bounds(coef, consts, centers, half)
        k = int(np.argmin(absval))
        if absval[k] < best:
            best, best_x = float(absval[k]), centers[k].copy()
            if best > EPS_ZERO:
                x, v = refine_zero(w, best_x, free | (half[k] > 0))
                if v < best:
                    best, best_x = float(v), x
            if best < EPS_ZERO:
                zero = True
        active_lower = float(lower.min()) if len(lower) else math.inf
        glob = max(min(active_lower, pruned_lower), 0.0)
        done = (
            (zero and stop_on_zero)
            or (stop_when_positive and glob > 0.0)
            or best - glob < tol
        )
        if done:
            return ModulusBounds(glob, best, _witness(best_x), used, zero)
        if used > budget:
            raise BudgetExhausted(glob, best, _witness(best_x), used)

        keep = lower < best - tol
        if not keep.all():
            pruned_lower = min(pruned_lower, float(lower[~keep].min()))
        centers, half, split = centers[keep], half[keep], split[keep]
        centers, half = _bisect(centers, half, split)


def certified_max_modulus(
    w: WeightPoly,
    domain=TORUS2,
    tol: float = DEFAULT_TOL,
    budget: int = DEFAULT_BUDGET,
) -> ModulusBounds:
    """Bounds ``|w(witness)| = lower <= max |w| <= upper``.

    On the bidisc the maximum is attained on the torus, so ``Bidisc``
    searches the torus.
    """
    if w.is_zero():
        return ModulusBounds(0.0, 0.0, (0j, 0j), 0)
    if isinstance(domain, Bidisc):
        domain = TORUS2
    coef = np.ascontiguousarray(w.array)
    consts = np.array(w.lipschitz_constants(), dtype=float)
    centers, half = domain.initial_cells()
    best = -math.inf
    best_x = centers[0].copy()
    pruned_upper = -math.inf
    used = 0
    while True:
        used += len(centers)
        absval, lower, upper, split = kernels.cell_bounds(coef, consts, centers, half)
        k = int(np.argmax(absval))
        if absval[k] > best:
            best, best_x = float(absval[k]), centers[k].copy()
        glob = max(float(upper.max()) if len(upper) else -math.inf, pruned_upper)
        if glob - best < tol * max(1.0, best):
            return ModulusBounds(best, max(glob, best), _witness(best_x), used)
        if used > budget:
            raise BudgetExhausted(best, glob, _witness(best_x), used)
        keep = upper > best + tol * max(1.0, best)
        if not keep.all():
            pruned_upper = max(pruned_upper, float(upper[~keep].max()))
        centers, half, split = centers[keep], half[keep], split[keep]
        centers, half = _bisect(centers, half, split)


def _bisect(centers, half, split):
    n = len(centers)
    rows = np.arange(n)
    h = half[rows, split] * 0.5
    half = half.copy()
    half[rows, split] = h
    left = centers.copy()
    right = centers.copy()
    left[rows, split] -= h
    right[rows, split] += h
    return np.concatenate([left, right]), np.concatenate([half, half])


def _witness(x):
    z1, z2 = _to_points(np.asarray(x))
    return complex(z1), complex(z2)


# ---------------------------------------------------------------------------
# invertibility


INVERTIBLE_A2 = "InvertibleA2"
INVERTIBLE_CT2_ONLY = "InvertibleCT2Only"
NOT_INVERTIBLE_CT2 = "NotInvertibleCT2"
INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class InvertibilityStatus:
    kind: str
    torus_lower: float = 0.0
    bidisc_lower: float = 0.0
    witness: Optional[Tuple[complex, complex]] = None
    budget: int = 0
    best_bounds: Tuple[float, float] = (0.0, 0.0)

    @property
    def invertible_a2(self) -> bool:
        return self.kind == INVERTIBLE_A2

    @property
    def invertible_ct2(self) -> bool:
        return self.kind in (INVERTIBLE_A2, INVERTIBLE_CT2_ONLY)

    def __str__(self):
        return self.kind


def invertibility_status(w: WeightPoly, budget: int = DEFAULT_BUDGET, tol: float = DEFAULT_TOL) -> InvertibilityStatus:
    """Classify ``w`` as invertible in the bidisc algebra, only on the torus, or neither."""
    if w.is_zero():
        raise ZeroWeight("weight is identically zero")
    try:
        t = certified_min_modulus(w, TORUS2, tol=tol, budget=budget, stop_when_positive=True)
    except BudgetExhausted as e:
        return InvertibilityStatus(INCONCLUSIVE, witness=e.witness, budget=budget, best_bounds=(e.lower, e.upper))
    if t.certified_zero:
        return InvertibilityStatus(NOT_INVERTIBLE_CT2, witness=t.witness, budget=budget, best_bounds=(t.lower, t.upper))
    if t.lower <= 0.0:
        return InvertibilityStatus(INCONCLUSIVE, witness=t.witness, budget=budget, best_bounds=(t.lower, t.upper))
    try:
        b = certified_min_modulus(w, BIDISC, tol=tol, budget=budget, stop_when_positive=True)
    except BudgetExhausted as e:
        return InvertibilityStatus(
            INCONCLUSIVE, torus_lower=t.lower, witness=e.witness, budget=budget, best_bounds=(e.lower, e.upper)
        )
    if b.certified_zero:
        return InvertibilityStatus(
            INVERTIBLE_CT2_ONLY, torus_lower=t.lower, witness=b.witness, budget=budget, best_bounds=(b.lower, b.upper)
        )
    if b.lower > 0.0:
        return InvertibilityStatus(
            INVERTIBLE_A2, torus_lower=t.lower, bidisc_lower=b.lower, witness=b.witness, budget=budget,
            best_bounds=(b.lower, b.upper),
        )
    return InvertibilityStatus(INCONCLUSIVE, torus_lower=t.lower, witness=b.witness, budget=budget, best_bounds=(b.lower, b.upper))


def require_status(w: WeightPoly, budget: int = DEFAULT_BUDGET) -> InvertibilityStatus:
    s = invertibility_status(w, budget=budget)
    if s.kind == INCONCLUSIVE:
        raise Inconclusive(
            f"invertibility undecided within {budget} cells; best bounds on min|w| {s.best_bounds}"
        )
    return s


def circle_extrema(poly: WeightPoly, tol: Optional[float] = None, budget: int = DEFAULT_BUDGET):
    """(min |p|, max |p|, has_zero) of a polynomial in z1 alone over the unit circle.

    The min is the attained value at the witness (within ``tol`` of the
    certified bound), or 0 with ``has_zero`` when a zero was certified.
    """
    if poly.deg2 != 0:
        raise ValueError("expected a polynomial in z1 only")
    if poly.is_zero():
        return 0.0, 0.0, True
    if tol is None:
        # one-dimensional, so a tight default is cheap
        tol = 1e-10 * max(1.0, poly.coefficient_norm)
    dom = CircleSlice("z2", [1.0])
    lo = certified_min_modulus(poly, dom, tol=tol, budget=budget)
    hi = certified_max_modulus(poly, dom, tol=tol, budget=budget)
    if lo.certified_zero:
        return 0.0, hi.lower, True
    return lo.upper, hi.lower, False
