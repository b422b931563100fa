import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from cyclecent import CentralityFeatures, CycleCentrality

from conftest import ring_cloud


@pytest.fixture
def clouds():
    return [ring_cloud([(1.0, 8, 0.0), (1.6, 20, 0.1)]),
            ring_cloud([(1.0, 10, 0.3)]),
            np.random.default_rng(0).random((12, 2))]


class TestCycleCentrality:
    def test_fit_attributes(self, two_rings):
        est = CycleCentrality().fit(two_rings)
        assert est.n_features_in_ == 2
        assert len(est.pairs_) > 0
        assert est.diagram_.shape[1] == 2
        assert set(est.curves_) == set(est.clusters_.ordering)

    def test_get_set_params_clone(self):
        est = CycleCentrality(order=2, scaling="late")
        params = est.get_params()
        assert params["order"] == 2 and params["scaling"] == "late"
        est2 = clone(est).set_params(order=1)
        assert est2.get_params()["order"] == 1

    def test_norms_and_signal(self, two_rings):
        est = CycleCentrality().fit(two_rings)
        norms = est.centrality_norms(p=2)
        assert norms and all(v >= 0 for v in norms.values())
        rep = est.signal_report(alpha=0.05)
        assert rep.dgm_size == len(est.pairs_)

    def test_not_fitted(self):
        with pytest.raises(NotFittedError):
            CycleCentrality().centrality_norms()

    def test_invalid_scaling_at_fit(self, two_rings):
        with pytest.raises(ValueError):
            CycleCentrality(scaling="bogus").fit(two_rings)

    def test_merge_rule_passthrough(self, two_rings):
        exact = CycleCentrality(merge_rule="exact").fit(two_rings)
        near = CycleCentrality(merge_rule="near").fit(two_rings)
        assert exact.pairs_ == near.pairs_  # pairs identical; clusters may differ


class TestCentralityFeatures:
    def test_transform_shape_and_padding(self, clouds):
        tr = CentralityFeatures(n_features=6, p=2)
        F = tr.fit_transform(clouds)
        assert F.shape == (3, 6)
        for row in F:
            assert all(a >= b for a, b in zip(row, row[1:]))  # sorted desc
        assert (F >= 0).all()

    def test_requires_fit(self, clouds):
        with pytest.raises(NotFittedError):
            CentralityFeatures().transform(clouds)

    def test_deterministic(self, clouds):
        a = CentralityFeatures(n_features=4).fit_transform(clouds)
        b = CentralityFeatures(n_features=4).fit_transform(clouds)
        assert np.array_equal(a, b)

    def test_pipeline_composition(self, clouds):
        from sklearn.pipeline import make_pipeline
        from sklearn.preprocessing import StandardScaler
        pipe = make_pipeline(CentralityFeatures(n_features=3), StandardScaler())
        F = pipe.fit_transform(clouds)
        assert F.shape == (3, 3)
