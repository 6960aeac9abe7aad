import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from honeycomb_search.estimators import HoneycombSearch, ScalingRegressor
from honeycomb_search.lattice import LatticeConfig
from honeycomb_search.search import run_search


def test_get_params_round_trip():
    est = HoneycombSearch(m=6, mode="tulsi", delta=0.4)
    params = est.get_params()
    assert params["m"] == 6 and params["mode"] == "tulsi" and params["delta"] == 0.4
    assert clone(est).get_params() == params


def test_fit_matches_run_search():
    est = HoneycombSearch(m=8).fit()
    run = run_search(LatticeConfig(8))
    assert est.t_star_ == run.t_star
    assert est.p_star_ == run.p_star
    assert est.report_.passed
    np.testing.assert_array_equal(est.predict([0, est.t_star_]), [run.p_support[0], run.p_star])


def test_predict_before_fit():
    with pytest.raises(NotFittedError):
        HoneycombSearch().predict([0])


def test_predict_range_checked():
    est = HoneycombSearch(m=4).fit()
    with pytest.raises(ValueError):
        est.predict([10_000])


def test_set_params_refit():
    est = HoneycombSearch(m=4).fit()
    est.set_params(mode="tulsi").fit()
    assert est.run_.mode == "tulsi"


def test_scaling_regressor():
    N = np.array([128, 512, 2048, 8192])
    t = 2.0 * N**0.55
    reg = ScalingRegressor().fit(N, t)
    assert reg.coef_ == pytest.approx(0.55)
    assert np.exp(reg.intercept_) == pytest.approx(2.0)
    np.testing.assert_allclose(reg.predict(N), t)
    assert reg.score(N.reshape(-1, 1), t) == pytest.approx(1.0)


def test_scaling_regressor_validation():
    with pytest.raises(ValueError):
        ScalingRegressor().fit([1, 2, 3], [1, 2, 3])
    with pytest.raises(ValueError):
        ScalingRegressor().fit([1, 2, 3, -4], [1, 2, 3, 4])
    with pytest.raises(NotFittedError):
        ScalingRegressor().predict([1.0])
