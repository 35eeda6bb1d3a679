"""The numba kernels and their numpy fallbacks must agree."""

import json
import os
import subprocess
import sys

import numpy as np
import pytest

from bidisc_spectra import kernels
from bidisc_spectra._accel import HAVE_NUMBA
from bidisc_spectra.weight import parse_weight

W = parse_weight("3 + z1 - 0.5*z2 + 0.25*z1^3*z2^2 - 0.1i*z1^2*z2^4")


def _inputs():
    rng = np.random.default_rng(5)
    t = rng.uniform(0, 2 * np.pi, (2, 500))
    z1, z2 = 0.9 * np.exp(1j * t[0]), np.exp(1j * t[1])
    centers = np.column_stack([rng.uniform(0, 1, 200), rng.uniform(0, 6.3, 200), rng.uniform(0, 1, 200), rng.uniform(0, 6.3, 200)])
    half = np.tile([0.02, 0.05, 0.02, 0.05], (200, 1))
    return z1, z2, centers, half


@pytest.mark.skipif(not HAVE_NUMBA, reason="numba not available")
def test_kernel_parity():
    coef = np.ascontiguousarray(W.array)
    consts = np.array(W.lipschitz_constants(), dtype=float)
    z1, z2, centers, half = _inputs()
    for a, b in zip(kernels.poly_eval_grad_np(coef, z1, z2), kernels.poly_eval_grad_nb(coef, z1, z2)):
        np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-12)
    for a, b in zip(kernels.cell_bounds_np(coef, consts, centers, half), kernels.cell_bounds_nb(coef, consts, centers, half)):
        np.testing.assert_allclose(np.asarray(a, dtype=float), np.asarray(b, dtype=float), rtol=1e-10, atol=1e-12)
    nodes = np.exp(2j * np.pi * (np.arange(64) + 0.5) / 64)
    assert kernels.log_abs_mean_np(coef, nodes, nodes) == pytest.approx(kernels.log_abs_mean_nb(coef, nodes, nodes), rel=1e-12)


_SCRIPT = """
import json, math
from bidisc_spectra._accel import USE_NUMBA
from bidisc_spectra.mobius import Irrational, Rational, hyperbolic, rotation
from bidisc_spectra.regions import to_json
from bidisc_spectra.spectra import Options, compute_report
from bidisc_spectra.weight import parse_weight
opts = Options(grid=16, n_max=32, horizon=16, probes=False)
g = math.pi * (3 - math.sqrt(5))
reps = [
    compute_report(rotation(Rational(1, 2)), rotation(Rational(1, 3)), parse_weight("2 + z1"), options=opts),
    compute_report(rotation(Irrational(g)), hyperbolic(0.5), parse_weight("z2 + 3"), options=opts),
]
print(json.dumps({"numba": USE_NUMBA, "reports": [json.loads(to_json(r)) for r in reps]}))
"""


def _run(env_flag):
    env = dict(os.environ)
    env.pop("BIDISC_SPECTRA_NO_NUMBA", None)
    if env_flag:
        env["BIDISC_SPECTRA_NO_NUMBA"] = "1"
    out = subprocess.run([sys.executable, "-c", _SCRIPT], env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout)


def test_env_flag_disables_numba():
    assert _run(True)["numba"] is False


@pytest.mark.skipif(not HAVE_NUMBA, reason="numba not available")
def test_reports_agree_across_backends():
    a, b = _run(False), _run(True)
    assert a["numba"] and not b["numba"]
    for ra, rb in zip(a["reports"], b["reports"]):
        assert ra["case_tag"] == rb["case_tag"]
        for name in ("sigma", "sigma_ap", "sigma_usf", "sigma_lsf"):
            assert ra[name]["exactness"] == rb[name]["exactness"]
            assert [p["primitive"] for p in ra[name]["primitives"]] == [p["primitive"] for p in rb[name]["primitives"]]
