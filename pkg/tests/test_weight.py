import cmath

import numpy as np
import pytest

from bidisc_spectra.errors import ExponentTooLarge, WeightSyntaxError
from bidisc_spectra.mobius import Rational, hyperbolic, rotation
from bidisc_spectra.weight import (
    WeightPoly,
    cocycle,
    eval_naive,
    factor_monomial,
    format_weight,
    mahler_measure,
    mahler_quadrature,
    parse_weight,
    restrict,
    rotation_cocycle,
)


@pytest.mark.parametrize(
    "text, coeffs",
    [
        ("2 + z1*z2", {(0, 0): 2, (1, 1): 1}),
        ("(z1 + i)^2", {(0, 0): -1, (1, 0): 2j, (2, 0): 1}),
        ("z1 - 0.5", {(0, 0): -0.5, (1, 0): 1}),
        ("  3 +  2i * z2 ", {(0, 0): 3, (0, 1): 2j}),
        ("(1+2i)*(1-2i)", {(0, 0): 5}),
        ("-z1^2 + z1^2", {}),
        ("z1^0", {(0, 0): 1}),
    ],
)
def test_parse_expands(text, coeffs):
    assert parse_weight(text) == WeightPoly(coeffs)


@pytest.mark.parametrize(
    "text, pos",
    [("3z1", 1), ("2 + ", 4), ("z3", 0), ("(z1 + 1", 7), ("z1^-1", 3), ("1e-3", 1), ("", 0)],
)
def test_parse_errors_have_positions(text, pos):
    with pytest.raises(WeightSyntaxError) as ei:
        parse_weight(text)
    assert ei.value.position == pos
    assert f"position {pos}" in str(ei.value)


def test_exponent_cap():
    with pytest.raises(ExponentTooLarge):
        parse_weight("z1^65")
    assert parse_weight("z2^64") == WeightPoly({(0, 64): 1})


def test_format_round_trip():
    w = WeightPoly({(0, 0): 1 - 2j, (1, 2): -3.5j, (2, 0): 0.25})
    assert parse_weight(format_weight(w)) == w


def test_eval_matches_naive():
    w = parse_weight("1 + 2*z1 - i*z2^3 + 0.5*z1^2*z2")
    rng = np.random.default_rng(1)
    for _ in range(20):
        z1, z2 = complex(*rng.normal(size=2)), complex(*rng.normal(size=2))
        assert abs(w(z1, z2) - eval_naive(w, z1, z2)) < 1e-12 * (1 + abs(eval_naive(w, z1, z2)))


def test_arithmetic():
    a, b = parse_weight("1 + z1"), parse_weight("1 - z1")
    assert a * b == parse_weight("1 - z1^2")
    assert a**3 == parse_weight("(1 + z1)^3")
    assert (a - a).is_zero()
    assert parse_weight("z1 + 2*z2").transpose() == parse_weight("z2 + 2*z1")


def test_rotation_cocycle_matches_pointwise():
    w = parse_weight("2 + z1*z2 - 0.3*z2")
    a1, a2 = cmath.exp(0.7j), cmath.exp(-1.3j)
    wn = rotation_cocycle(w, a1, a2, 5)
    z = (cmath.exp(0.2j), cmath.exp(2.1j))
    direct = 1
    for k in range(5):
        direct *= w(a1**k * z[0], a2**k * z[1])
    assert abs(wn(*z) - direct) < 1e-10


def test_cocycle_general_map():
    w = parse_weight("3 + z1 - z2")
    phi, psi = hyperbolic(0.4), rotation(Rational(1, 3))
    z = (0.3 + 0.1j, -0.2j)
    direct, p = 1, z
    for _ in range(4):
        direct *= w(*p)
        p = (phi(p[0]), psi(p[1]))
    assert abs(cocycle(w, (phi, psi), 4, z) - direct) < 1e-10


def test_factor_monomial():
    f = factor_monomial(parse_weight("z1^2*z2 + 3*z1^3*z2^2"))
    assert f.reconstruct() == parse_weight("z1^2*z2 + 3*z1^3*z2^2")


def test_mahler_measure_examples():
    assert mahler_measure(restrict(parse_weight("z1 - 0.5"), "z2", 1.0)) == pytest.approx(1.0)
    assert mahler_measure(restrict(parse_weight("z1 - 3"), "z2", 1.0)) == pytest.approx(3.0)
    p = restrict(parse_weight("2 + z1 - 4*z1^2"), "z2", 1.0)
    assert mahler_measure(p) == pytest.approx(mahler_quadrature(p), rel=1e-6)
