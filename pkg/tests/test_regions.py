import math
import xml.etree.ElementTree as ET

import pytest

from bidisc_spectra.regions import (
    BOUNDARY,
    EXACT,
    IN,
    ORACLE,
    OUT,
    SUBSET,
    Annulus,
    Circle,
    Disk,
    OracleEntry,
    ParamAnnulusUnion,
    PointZero,
    RootImage,
    SpectralRegion,
    SpectrumReport,
    annulus,
    from_json,
    interval_subset,
    merge_intervals,
    to_json,
    to_svg,
)
from bidisc_spectra.weight import parse_weight


def test_canonical_forms():
    assert annulus(0, 0) == PointZero()
    assert annulus(2, 2) == Circle(2)
    assert annulus(0, 3) == Disk(3)
    assert annulus(3, 1) == Annulus(1, 3)
    with pytest.raises(ValueError):
        Annulus(2, 1)
    with pytest.raises(ValueError):
        Disk(-1)


def test_merge_intervals():
    assert merge_intervals([(2, 3), (0, 1), (0.5, 1.5)]) == [(0, 1.5), (2, 3)]
    assert merge_intervals([(0, 1), (1.05, 2)], gap=0.1) == [(0, 2)]


def test_contains_and_subset():
    r = SpectralRegion.of(Annulus(1, 2), Circle(3))
    assert r.contains(1.5j) == IN
    assert r.contains(-3) == IN
    assert r.contains(2.5) == OUT
    assert r.radial_bounds() == (1.0, 3.0)
    assert interval_subset(SpectralRegion.of(Circle(1.2)), r)
    assert not interval_subset(SpectralRegion.of(Disk(1)), r)


def test_radial_sqrt():
    r = SpectralRegion.of(Annulus(1, 4), Circle(9)).radial_sqrt()
    assert r.primitives == (Annulus(1, 2), Circle(3))
    with pytest.raises(ValueError):
        SpectralRegion.of(RootImage(1, parse_weight("1 + z1"), "torus2")).radial_sqrt()


def test_root_image_bounds_and_membership():
    # {lambda : lambda^2 = 2 + z1, |z1| = 1} has radii in [1, sqrt 3]
    p = RootImage(2, parse_weight("2 + z1"), "torus2")
    (lo, hi), = p.intervals()
    assert lo == pytest.approx(1.0, abs=1e-6)
    assert hi == pytest.approx(math.sqrt(3), abs=1e-6)
    r = SpectralRegion.of(p)
    assert r.contains(math.sqrt(3)) == IN
    assert r.contains(-1) == IN
    assert r.contains(1j) == OUT  # (1j)^2 = -1 needs z1 = -3, off the torus
    assert r.contains(0.5) == OUT
    assert not r.is_rotation_invariant()


def test_root_image_bidisc_contains_interior():
    p = RootImage(1, parse_weight("2 + z1"), "bidisc")
    (lo, hi), = p.intervals()
    assert lo == pytest.approx(1.0, abs=1e-6) and hi == pytest.approx(3.0, abs=1e-6)
    assert SpectralRegion.of(p).contains(2) == IN


def test_param_annulus_union():
    p = ParamAnnulusUnion((1.0, 2.0, 3.0, 2.0), (2.0, 2.0, 1.0, 1.0), "a<b")
    assert p.intervals() == [(1.0, 2.0)]
    r = SpectralRegion.of(p)
    assert r.contains(1.5) == IN
    assert r.contains(2.5) == BOUNDARY  # within the sampling error
    assert r.contains(10) == OUT
    empty = ParamAnnulusUnion((1.0,), (2.0,), "a>=b")
    assert SpectralRegion.of(empty).is_empty()


def test_exactness_validation():
    with pytest.raises(ValueError):
        SpectralRegion.of(Disk(1), exactness="probably")
    a = SpectralRegion.of(Disk(1))
    b = SpectralRegion.of(Circle(2), exactness=SUBSET)
    assert a.union(b).exactness == SUBSET
    assert a.union(b.with_exactness(ORACLE)).exactness == ORACLE


def _report():
    return SpectrumReport(
        "EE-rat-rat m=2",
        SpectralRegion.of(RootImage(2, parse_weight("2 + z1*z2 - 0.5i*z2"), "bidisc")),
        SpectralRegion.of(RootImage(2, parse_weight("2 + z1*z2 - 0.5i*z2"), "torus2")),
        SpectralRegion.of(Annulus(1, 2), PointZero()),
        SpectralRegion.of(ParamAnnulusUnion((1.0, 2.0), (2.0, 0.5), "a<b"), exactness=SUBSET),
        [OracleEntry("rho", 2.0, 1.9, 2.1, True), OracleEntry("rho_min", 1.0, None, float("inf"), False)],
        ["note"],
    )


def test_json_round_trip_is_byte_identical():
    rep = _report()
    text = to_json(rep)
    back = from_json(text)
    assert to_json(back) == text
    assert back.oracle_record[1].upper is None
    assert from_json(to_json(rep.sigma_usf)) == rep.sigma_usf
    assert from_json(to_json(Circle(2))) == Circle(2)


def test_svg_is_well_formed_and_deterministic():
    rep = _report()
    svg = to_svg(rep)
    root = ET.fromstring(svg.split("\n", 1)[1])
    assert root.tag.endswith("svg")
    assert svg == to_svg(rep)
    assert svg.count("<title>") == 1
    with pytest.raises(ValueError):
        to_svg(rep, size=10)
