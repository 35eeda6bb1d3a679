import math

import pytest

from bidisc_spectra.errors import Inconclusive, UnsupportedCase
from bidisc_spectra.mobius import (
    Independent,
    Irrational,
    MixedRelation,
    PositiveRelation,
    Rational,
    from_matrix,
    hyperbolic,
    parabolic,
    rotation,
)
from bidisc_spectra.regions import EXACT, ORACLE, SUBSET, Annulus, Circle, Disk, ParamAnnulusUnion, PointZero, RootImage
from bidisc_spectra.spectra import CASE_KINDS, Options, classify_case, compute_report
from bidisc_spectra.weight import parse_weight as P

G = math.pi * (3 - math.sqrt(5))
S2 = math.sqrt(2)
QUICK = Options(grid=32, n_max=64, horizon=16, probes=False)


def R(a, b):
    return rotation(Rational(a, b))


def I(v, rel=None):
    return rotation(Irrational(v, rel))


def prims(region):
    return set(region.primitives)


def test_case_kinds_complete():
    assert len(CASE_KINDS) == 13


@pytest.mark.parametrize(
    "phi, psi, w, rel, label",
    [
        (R(1, 2), R(1, 3), "2 + z1", None, "EE-rat-rat m=6"),
        (R(0, 1), I(G), "3 + z2", None, "EE-rat-irr p=1"),
        (I(G), R(0, 1), "3 + z1", None, "EE-rat-irr p=1"),
        (I(G), I(S2), "2 + z1*z2", None, "EE-irr-irr-generic"),
        (I(G), I(S2), "2 + z1*z2", Independent(), "EE-irr-irr-A"),
        (I(2 * G), I(G), "3 + z1*z2^2", PositiveRelation(1, 2), "EE-irr-irr-B p=1 q=2"),
        (I(G), I(-G), "2 + z1*z2", MixedRelation(1, 1), "EE-irr-irr-mixed-relation"),
        (R(1, 2), parabolic(0, 1), "3 + z2", None, "Erat-P p=2"),
        (I(G), parabolic(0, 1), "3 + z2", None, "Eirr-P"),
        (parabolic(0, 1), parabolic(1, 1), "3 + z1 - z2", None, "P-P"),
        (R(1, 2), hyperbolic(0.5), "3 + z1 + z2", None, "Erat-H p=2"),
        (I(G), hyperbolic(0.5), "z2 + 3", None, "Eirr-H"),
        (parabolic(0, 1), hyperbolic(0.5), "z1 - z2", None, "P-H"),
        (hyperbolic(0.3), hyperbolic(0.5), "2.5 - z1 - 0.5*z2", None, "H-H"),
    ],
)
def test_classify_labels(phi, psi, w, rel, label):
    assert classify_case(phi, psi, P(w), rel).label == label


def test_classify_to_dict():
    d = classify_case(R(1, 2), R(1, 3), P("2 + z1")).to_dict()
    assert d["case"] == "EE-rat-rat" and d["m"] == 6


def test_rat_rat_root_image():
    rep = compute_report(R(1, 2), R(1, 3), P("2 + z1"), options=QUICK)
    (p,) = rep.sigma.primitives
    assert isinstance(p, RootImage) and p.m == 6 and p.domain == "bidisc"
    (lo, hi), = rep.sigma_ap.intervals()
    # w_6 = (4 - z1^2)^3, so |w_6|^(1/6) ranges over [sqrt 3, sqrt 5] on the torus
    assert lo == pytest.approx(math.sqrt(3), rel=1e-7)
    assert hi == pytest.approx(math.sqrt(5), rel=1e-6)
    assert rep.all_exact() and not rep.disagreements()


@pytest.mark.parametrize(
    "phi, psi, w, rel, radius",
    [
        (R(0, 1), I(G), "3 + z2", None, 3.0),
        (I(G), I(S2), "2 + z1*z2", Independent(), 2.0),
        (I(2 * G), I(G), "3 + z1*z2^2", PositiveRelation(1, 2), 3.0),
        (R(1, 2), parabolic(0, 1), "3 + z2", None, 4.0),
        (I(G), parabolic(0, 1), "3 + z2", None, 4.0),
        (parabolic(0, 1), parabolic(1, 1), "3 + z1 - z2", None, abs(4 - complex(math.cos(1), math.sin(1)))),
    ],
)
def test_single_circle_cases(phi, psi, w, rel, radius):
    rep = compute_report(phi, psi, P(w), relation=rel)
    for name, reg in rep.regions().items():
        assert reg.exactness == EXACT, name
        assert reg.primitives == (Circle(radius),), name
    assert not rep.disagreements()


def test_generic_irrational_is_oracle_estimate():
    rep = compute_report(I(G), I(S2), P("2 + z1*z2"), options=QUICK)
    assert rep.sigma.exactness == ORACLE
    r, R_ = rep.sigma.radial_bounds()
    assert r <= 2.0 + 0.05 and R_ >= 2.0 - 0.05


def test_mixed_relation_annulus():
    rep = compute_report(I(G), I(-G), P("2 + z1*z2"), relation=MixedRelation(1, 1), options=QUICK)
    r, R_ = rep.sigma.radial_bounds()
    assert r == pytest.approx(1.0, abs=1e-9) and R_ == pytest.approx(3.0, abs=1e-9)


def test_eirr_h_flip():
    rep = compute_report(I(G), hyperbolic(0.5), P("z2 + 3"))
    assert rep.sigma_usf.primitives == (Annulus(2, 4),) and rep.sigma_usf.exactness == EXACT
    assert prims(rep.sigma_lsf) >= {Circle(2), Circle(4)} and rep.sigma_lsf.exactness == SUBSET
    inv = compute_report(I(G), hyperbolic(0.5).inverse(), P("z2 + 3"), options=QUICK)
    assert prims(inv.sigma_usf) == {Circle(2), Circle(4)}
    assert not rep.disagreements()


def test_erat_h_profile_union():
    rep = compute_report(R(1, 2), hyperbolic(0.5), P("3 + z1 + z2"), options=QUICK)
    assert rep.case_tag == "Erat-H p=2"
    (p,) = rep.sigma_ap.primitives
    assert isinstance(p, ParamAnnulusUnion)
    (lo, hi), = rep.sigma_ap.intervals()
    assert lo == pytest.approx(math.sqrt(3), rel=1e-9)
    assert hi == pytest.approx(math.sqrt(17), rel=1e-9)
    # the boundary of sigma is always part of the lower bound
    assert {round(c.r, 6) for c in rep.sigma_lsf.primitives if isinstance(c, Circle)} == {1.732051, 4.123106}


def test_p_h_zero_on_torus():
    rep = compute_report(parabolic(0, 1), hyperbolic(0.5), P("z1 - z2"))
    assert rep.sigma.primitives == (Disk(2),)
    assert prims(rep.sigma_usf) == {PointZero(), Circle(2)}
    assert rep.sigma_lsf.primitives == (Disk(2),)
    assert not rep.disagreements()


def test_h_h_strict_order():
    rep = compute_report(hyperbolic(0.3), hyperbolic(0.5), P("2.5 - z1 - 0.5*z2"))
    assert prims(rep.sigma_usf) == {Circle(1), Circle(2), Circle(3), Circle(4)}
    assert rep.sigma_lsf.primitives == (Annulus(1, 4),)
    assert rep.all_exact() and not rep.disagreements()


def test_swap_independent_rotations():
    rep = compute_report(I(G, Independent()), I(S2, Independent()), P("2 + z1"), swap=True, options=QUICK)
    assert rep.case_tag.startswith("swap[")
    assert rep.sigma.primitives == (Circle(2),)
    assert not rep.disagreements()


def test_swap_hyperbolic_lower_bounds_nonempty():
    rep = compute_report(hyperbolic(0.3), hyperbolic(0.5), P("3 + z1"), swap=True, options=QUICK)
    assert rep.sigma.primitives == (Annulus(2, 4),)
    assert prims(rep.sigma_lsf) >= {Circle(2), Circle(4)}


def test_unsupported_and_invalid():
    with pytest.raises(UnsupportedCase):
        compute_report(I(G), I(S2), P("2 + z1"), swap=True)
    with pytest.raises(ValueError):
        classify_case(I(G), I(2 * G), P("2 + z1"), PositiveRelation(1, 3))
    # elliptic but not a rotation about the origin
    g = hyperbolic(0.5)
    M = from_matrix(g.inverse().compose(R(1, 4)).compose(g).matrix, Rational(1, 4))
    with pytest.raises(UnsupportedCase):
        classify_case(M, I(G), P("2 + z1"))


def test_inconclusive_with_tiny_budget():
    with pytest.raises(Inconclusive):
        compute_report(I(G), hyperbolic(0.5), P("2.001 + z1 + z2"), options=Options(budget=50, cross_check=False))


def test_containment_entries_present():
    rep = compute_report(R(1, 2), R(1, 3), P("2 + z1"), options=QUICK)
    names = {e.quantity for e in rep.oracle_record}
    assert {"containment[ap<=sigma]", "containment[usf<=ap]", "containment[lsf<=sigma]"} <= names
