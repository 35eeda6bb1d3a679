import math

import numpy as np
import pytest

from bidisc_spectra import oracle
from bidisc_spectra.mobius import Irrational, Rational, hyperbolic, parabolic, rotation
from bidisc_spectra.oracle import (
    CERTIFIED_OUT,
    BidiscMap,
    CircleSliceMeasure,
    DiagonalOrbit,
    FixedPointAtom,
    TorusLebesgue,
    ap_membership_test,
    birkhoff_radius,
    measure_quadrature,
    rho_min_estimate,
)
from bidisc_spectra.weight import parse_weight

GOLDEN = math.pi * (3 - math.sqrt(5))


def test_birkhoff_converges_to_mahler_radius():
    Phi = BidiscMap(rotation(Irrational(GOLDEN)), rotation(Irrational(math.sqrt(2))))
    est = birkhoff_radius(parse_weight("2 + z1*z2"), Phi, 128, 32)
    # lower is a sampled max |w_n|^(1/n), upper is certified; both approach 2
    assert 2 - 1e-9 <= est.upper < 2.1
    assert est.lower == pytest.approx(2.0, rel=0.05)
    uppers = [u for _, u in est.history]
    assert all(b <= a * (1 + 1e-12) for a, b in zip(uppers, uppers[1:]))


def test_birkhoff_rejects_bad_parameters():
    Phi = BidiscMap(rotation(Rational(1, 2)), rotation(Rational(1, 3)))
    with pytest.raises(ValueError):
        birkhoff_radius(parse_weight("1 + z1"), Phi, 100, 32)
    with pytest.raises(ValueError):
        birkhoff_radius(parse_weight("1 + z1"), Phi, 64, 8)


def test_rho_min_zero_when_not_invertible():
    Phi = BidiscMap(rotation(Irrational(GOLDEN)), rotation(Irrational(1.0)))
    assert rho_min_estimate(parse_weight("z1 - z2"), Phi).upper == 0.0


def test_rho_min_brackets_mixed_example():
    Phi = BidiscMap(rotation(Irrational(GOLDEN)), rotation(Irrational(-GOLDEN)))
    est = rho_min_estimate(parse_weight("2 + z1*z2"), Phi, 256, 64)
    assert est.lower - 1e-9 <= 1 <= est.upper + 1e-9


def test_measure_quadrature():
    w = parse_weight("2 + z1*z2")
    assert measure_quadrature(w, TorusLebesgue()) == pytest.approx(2.0, abs=1e-6)
    # on the anti-diagonal z1 z2 = -1 the weight is 1
    assert measure_quadrature(w, DiagonalOrbit((1.0, -1.0), 1, 1)) == pytest.approx(1.0, abs=1e-9)
    assert measure_quadrature(w, FixedPointAtom((1.0, 1.0))) == pytest.approx(3.0)
    # z1 in {1, -1}, z2 Lebesgue: geometric mean of |3 + z2| and |1 + z2|
    v = measure_quadrature(parse_weight("2 + z1 + 0*z2"), CircleSliceMeasure((1.0, -1.0)))
    assert v == pytest.approx(math.sqrt(3.0), rel=1e-9)


def test_ap_membership_certifies_out():
    Phi = BidiscMap(rotation(Rational(1, 2)), rotation(Rational(1, 2)))
    res = ap_membership_test(0.3, parse_weight("z1"), Phi, 16, 16)
    assert res.verdict == CERTIFIED_OUT


def test_attractor_data_hyperbolic():
    att = oracle.attractor_data(parse_weight("z2 + 3"), rotation(Irrational(GOLDEN)), hyperbolic(0.5))
    assert att.radii == pytest.approx((4, 4, 2, 2))
    regs = [reg for reg, which in oracle.attractor_inclusions(att) if which == "usf"]
    assert regs and all(reg.radial_bounds() == (2.0, 4.0) for reg in regs)


def test_cross_check_agrees_on_exact_case():
    from bidisc_spectra.spectra import Options, compute_report

    phi, psi = rotation(Irrational(GOLDEN)), rotation(Irrational(math.sqrt(2)))
    rep = compute_report(phi, psi, parse_weight("2 + z1*z2"), options=Options(grid=32, n_max=64, horizon=16, probes=False))
    assert rep.oracle_record
    assert not rep.disagreements()


def test_parabolic_orbit_bounds_sound():
    Phi = BidiscMap(parabolic(0.0, 1.0), hyperbolic(0.4))
    w = parse_weight("2 + z1 - 0.5*z2")
    est = birkhoff_radius(w, Phi, 32, 16)
    rng = np.random.default_rng(0)
    for _ in range(10):
        t = rng.uniform(0, 2 * np.pi, 2)
        z = (complex(np.exp(1j * t[0])), complex(np.exp(1j * t[1])))
        v, p = 1.0, z
        for _ in range(32):
            v *= abs(w(*p))
            p = Phi.apply(*p)
        assert v ** (1 / 32) <= est.upper * (1 + 1e-9)
