import cmath
import math

import numpy as np
import pytest

from bidisc_spectra.errors import AmbiguousClass, DegenerateMap, MissingAngleSpec, NotDiscAutomorphism
from bidisc_spectra.mobius import (
    EllipticIrrational,
    EllipticRational,
    Hyperbolic,
    Independent,
    Irrational,
    MixedRelation,
    Parabolic,
    PositiveRelation,
    Rational,
    classify,
    conjugate_elliptic_to_rotation,
    fixed_points,
    from_matrix,
    hyperbolic,
    iterate,
    parabolic,
    parse_mobius,
    parse_relation,
    rotation,
)


def test_rotation_classes():
    assert isinstance(classify(rotation(Rational(1, 6))), EllipticRational)
    assert classify(rotation(Rational(2, 6))).order == 3
    c = classify(rotation(Irrational(1.0, Independent())))
    assert isinstance(c, EllipticIrrational)
    assert c.rotation == pytest.approx(cmath.exp(1j))


def test_hyperbolic_fixed_points():
    M = hyperbolic(0.5)
    c = classify(M)
    assert isinstance(c, Hyperbolic)
    assert c.attracting == pytest.approx(1.0)
    assert c.repelling == pytest.approx(-1.0)
    assert c.multiplier == pytest.approx(1 / 3)
    assert iterate(M, 0.2 + 0.3j, 200) == pytest.approx(1.0, abs=1e-9)


def test_hyperbolic_axis_rotates_fixed_points():
    c = classify(hyperbolic(0.3, axis=math.pi / 2))
    assert c.attracting == pytest.approx(1j)


def test_parabolic():
    M = parabolic(0.0, 1.0)
    c = classify(M)
    assert isinstance(c, Parabolic)
    assert c.fixed_point == pytest.approx(1.0)
    fps = fixed_points(M)
    assert len(fps) == 1 and abs(fps[0].derivative - 1) < 1e-12
    assert abs(iterate(M, 0.0, 5000) - 1) < 1e-2


def test_disc_preserved():
    rng = np.random.default_rng(3)
    for M in (hyperbolic(0.6, 1.0), parabolic(2.0, -0.7), rotation(Rational(1, 5))):
        for _ in range(20):
            z = cmath.rect(rng.uniform(0, 1), rng.uniform(0, 2 * math.pi))
            assert abs(M(z)) < 1 + 1e-12
            assert abs(abs(M(cmath.exp(1j * rng.uniform(0, 6.3)))) - 1) < 1e-12


def test_inverse_and_compose():
    M = hyperbolic(0.4, 0.3)
    z = 0.1 - 0.2j
    assert M.inverse()(M(z)) == pytest.approx(z)
    N = M.compose(M.inverse())
    assert N(z) == pytest.approx(z)


def test_conjugate_elliptic():
    # a rotation conjugated away from the origin
    g = hyperbolic(0.5)
    R = rotation(Rational(1, 4))
    M = from_matrix(g.inverse().compose(R).compose(g).matrix, Rational(1, 4))
    alpha, h = conjugate_elliptic_to_rotation(M)
    assert alpha == pytest.approx(1j)
    z = 0.3 + 0.1j
    assert h(M(h.inverse()(z))) == pytest.approx(alpha * z)


def test_errors():
    with pytest.raises(NotDiscAutomorphism):
        hyperbolic(1.0)
    with pytest.raises(DegenerateMap):
        parabolic(0.0, 0.0)
    with pytest.raises(MissingAngleSpec):
        from_matrix([[1j, 0], [0, -1j]])
    with pytest.raises(NotDiscAutomorphism):
        from_matrix([[1, 2], [0, 1]])
    with pytest.raises(AmbiguousClass):
        classify(from_matrix(hyperbolic(1e-12).matrix))


def test_parse():
    assert classify(parse_mobius({"kind": "rotation", "angle": {"rational": [1, 3]}})).order == 3
    M = parse_mobius({"kind": "hyperbolic", "a": 0.5})
    assert isinstance(classify(M), Hyperbolic)
    assert parse_relation("independent") == Independent()
    assert parse_relation({"positive": [1, 2]}) == PositiveRelation(1, 2)
    assert parse_relation({"mixed": [2, 1]}) == MixedRelation(2, 1)
    with pytest.raises(ValueError):
        parse_mobius({"kind": "loxodromic"})
    with pytest.raises(MissingAngleSpec):
        parse_mobius({"kind": "rotation"})
