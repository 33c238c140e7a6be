import math

import numpy as np
import pytest

import maryland as ml


def test_u_at_one_site():
    p = ml.default_params(eps=0.0, E=0.0)
    assert ml.u_function(p, 1, 0.25) == pytest.approx(math.log(math.sin(math.pi / 4) + 0.1), rel=1e-14)


def test_determinant_identity():
    r = ml.det_identity_check(ml.default_params(eps=0.1, E=1.0), 16)
    assert r.identity_ok
    assert r.discrepancy < 1e-8


def test_greens_matches_dense_inverse():
    p = ml.default_params(eps=0.05, E=0.3)
    G = ml.greens_values(p, 0.17, (0, 19))
    B = ml.b_matrix(p, 0.17, (0, 19))
    c = np.array([math.cos(math.pi * (0.17 + n * p.freq.omega)) for n in range(20)])
    assert np.allclose(G, np.linalg.solve(B, np.diag(c)), rtol=1e-10, atol=1e-12)
    fit = ml.decay_fit(p, G)
    assert fit.rate > 0


def test_symbol_errors_are_value_errors():
    with pytest.raises(ValueError):
        ml.LongRangeSymbol.explicit_list(1.0, {0: 2.0})


def test_eigensystem_and_orbit_hits():
    p = ml.default_params(eps=0.01)
    rep = ml.eigensystem(p, 0.1234, 20)
    assert len(rep.energies) == 41
    assert rep.vectors.shape == (41, 41)
    assert rep.max_scaled_residual < 1e-12
    assert ml.orbit_hit_count([(0.0, 1.0)], 0.1, ml.golden_mean(), 100) == 100


def test_singular_integral_identity():
    for eta in (1e-3, 0.1):
        assert ml.singular_integral(eta) == pytest.approx(ml.log_cos_integral(eta) + math.log(2.0), rel=1e-8)


def test_small_sweep(tmp_path):
    code, summary = ml.run_sweep("N_list = 16\ngrid = 4096\njobs = dk,localize\n", str(tmp_path))
    assert code == 0
    assert (tmp_path / "summary.json").exists()
    with pytest.raises(ValueError):
        ml.run_sweep("eps = 0.9\n")
