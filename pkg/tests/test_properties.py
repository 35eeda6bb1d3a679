import cmath
import math

import numpy as np
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from bidisc_spectra import kernels
from bidisc_spectra.regions import SpectralRegion, annulus, circle, disk, from_json, interval_subset, to_json
from bidisc_spectra.weight import WeightPoly, format_weight, parse_weight, rotation_cocycle

small = st.floats(-3, 3, allow_nan=False, allow_infinity=False).map(lambda x: round(x, 3))
coeff = st.builds(complex, small, small)
monomial = st.tuples(st.integers(0, 3), st.integers(0, 3))
weights = st.dictionaries(monomial, coeff, min_size=1, max_size=5).map(WeightPoly).filter(lambda w: not w.is_zero())
angles = st.floats(0, 2 * math.pi, allow_nan=False)

SETTINGS = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@SETTINGS
@given(weights)
def test_format_parse_round_trip(w):
    assert parse_weight(format_weight(w)) == w


@SETTINGS
@given(weights, angles, angles)
def test_eval_matches_definition(w, t1, t2):
    z1, z2 = cmath.exp(1j * t1), 0.7 * cmath.exp(1j * t2)
    direct = sum(c * z1**i * z2**j for (i, j), c in w.items())
    assert abs(w(z1, z2) - direct) <= 1e-9 * (1 + abs(direct))


@SETTINGS
@given(weights, angles, angles, st.integers(1, 6), st.integers(1, 6), angles, angles)
def test_rotation_cocycle_identity(w, a, b, n, k, t1, t2):
    # w_{n+k}(z) = w_n(z) w_k(R^n z)
    a1, a2 = cmath.exp(1j * a), cmath.exp(1j * b)
    z = (cmath.exp(1j * t1), cmath.exp(1j * t2))
    lhs = rotation_cocycle(w, a1, a2, n + k)(*z)
    rhs = rotation_cocycle(w, a1, a2, n)(*z) * rotation_cocycle(w, a1, a2, k)(a1**n * z[0], a2**n * z[1])
    assert abs(lhs - rhs) <= 1e-8 * (1 + abs(lhs))


@SETTINGS
@given(weights, st.lists(st.tuples(st.floats(0, 1), angles, st.floats(0, 1), angles), min_size=1, max_size=8))
def test_cell_bounds_sound(w, pts):
    coef = np.ascontiguousarray(w.array)
    consts = np.array(w.lipschitz_constants(), dtype=float)
    centers = np.array(pts, dtype=float)
    half = np.tile([0.05, 0.2, 0.05, 0.2], (len(pts), 1))
    _, lo, hi, _ = kernels.cell_bounds(coef, consts, centers, half)
    rng = np.random.default_rng(0)
    for c, h, l, u in zip(centers, half, lo, hi):
        s = c + h * rng.uniform(-1, 1, (32, 4))
        v = np.abs(w(s[:, 0] * np.exp(1j * s[:, 1]), s[:, 2] * np.exp(1j * s[:, 3])))
        assert v.min() >= l - 1e-9 and v.max() <= u + 1e-9


radii = st.floats(0, 10, allow_nan=False).map(lambda x: round(x, 4))
primitive = st.one_of(
    st.builds(lambda r, R: annulus(r, R), radii, radii),
    st.builds(disk, radii),
    st.builds(circle, radii),
)


@SETTINGS
@given(st.lists(primitive, min_size=1, max_size=4))
def test_region_json_round_trip(ps):
    r = SpectralRegion(tuple(ps))
    text = to_json(r)
    assert to_json(from_json(text)) == text
    assert interval_subset(r, r)


@SETTINGS
@given(st.lists(primitive, min_size=1, max_size=4), radii)
def test_contains_agrees_with_intervals(ps, x):
    r = SpectralRegion(tuple(ps))
    inside = any(a <= x <= b for a, b in r.intervals())
    assert (r.contains(x) == "In") == inside
