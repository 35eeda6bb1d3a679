import numpy as np
import pytest

from bidisc_spectra import kernels
from bidisc_spectra.certify import (
    BIDISC,
    INCONCLUSIVE,
    INVERTIBLE_A2,
    INVERTIBLE_CT2_ONLY,
    NOT_INVERTIBLE_CT2,
    TORUS2,
    circle_extrema,
    certified_max_modulus,
    certified_min_modulus,
    invertibility_status,
    require_status,
)
from bidisc_spectra.errors import BudgetExhausted, Inconclusive, ZeroWeight
from bidisc_spectra.weight import WeightPoly, parse_weight


def test_min_max_on_torus():
    w = parse_weight("3 + z1 - z2")
    lo = certified_min_modulus(w, TORUS2, tol=1e-8)
    hi = certified_max_modulus(w, TORUS2, tol=1e-8)
    assert lo.lower <= 1.0 <= lo.upper + 1e-12
    assert lo.upper - 1.0 < 1e-6
    assert hi.lower <= 5.0 <= hi.upper + 1e-12
    assert 5.0 - hi.lower < 1e-6


def test_zero_detection_bidisc():
    w = parse_weight("z1 - 0.5")
    res = certified_min_modulus(w, BIDISC, stop_on_zero=True)
    assert res.certified_zero
    z1, _ = res.witness
    assert abs(z1 - 0.5) < 1e-6


def test_budget_exhausted_carries_bounds():
    w = parse_weight("2 + z1*z2 - 0.7*z1^3")
    with pytest.raises(BudgetExhausted) as ei:
        certified_min_modulus(w, BIDISC, tol=1e-14, budget=200)
    e = ei.value
    assert 0 <= e.lower <= e.upper
    assert e.witness is not None


@pytest.mark.parametrize(
    "text, kind",
    [("2 + z1*z2", INVERTIBLE_A2), ("z1 - 0.5", INVERTIBLE_CT2_ONLY), ("z1 - z2", NOT_INVERTIBLE_CT2), ("3", INVERTIBLE_A2)],
)
def test_invertibility(text, kind):
    assert invertibility_status(parse_weight(text)).kind == kind


def test_inconclusive_under_tiny_budget():
    w = parse_weight("2.001 + z1 + z2")  # min modulus 0.001
    s = invertibility_status(w, budget=50)
    assert s.kind == INCONCLUSIVE
    with pytest.raises(Inconclusive):
        require_status(w, budget=50)


def test_zero_weight_rejected():
    with pytest.raises(ZeroWeight):
        certified_min_modulus(WeightPoly({}), TORUS2)


def test_circle_extrema():
    lo, hi, has_zero = circle_extrema(parse_weight("z1 - 0.5"))
    assert lo == pytest.approx(0.5, abs=1e-6)
    assert hi == pytest.approx(1.5, abs=1e-6)
    assert not has_zero
    assert circle_extrema(parse_weight("z1 - 1"))[2]


def test_cell_bounds_enclose_samples():
    rng = np.random.default_rng(7)
    w = parse_weight("1 + 2*z1 - i*z2^3 + 0.5*z1^2*z2")
    coef = np.ascontiguousarray(w.array)
    consts = np.array(w.lipschitz_constants(), dtype=float)
    centers = np.column_stack(
        [rng.uniform(0.2, 0.8, 50), rng.uniform(0, 6.3, 50), rng.uniform(0.2, 0.8, 50), rng.uniform(0, 6.3, 50)]
    )
    half = np.tile([0.1, 0.3, 0.1, 0.3], (50, 1))
    _, lo, hi, _ = kernels.cell_bounds(coef, consts, centers, half)
    for k in range(50):
        u = centers[k] + half[k] * rng.uniform(-1, 1, (200, 4))
        v = np.abs(w(u[:, 0] * np.exp(1j * u[:, 1]), u[:, 2] * np.exp(1j * u[:, 3])))
        assert v.min() >= lo[k] - 1e-12
        assert v.max() <= hi[k] + 1e-12
