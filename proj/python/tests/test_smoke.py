"""Smoke tests for the crsp_core extension module."""

import math

import numpy as np
import pytest

cc = pytest.importorskip("crsp_core")


def two_node_path():
    return np.array([[0.0, 1.0], [1.0, 0.0]])


def test_two_node_dissimilarity_is_one_for_any_beta():
    for beta in (0.02, 1.0, 20.0):
        delta = cc.rsp_dissimilarity(two_node_path(), beta=beta)
        assert delta[0, 1] == pytest.approx(1.0, abs=1e-12)
        assert delta[0, 0] == 0.0


def test_single_view_crsp_reduces_to_rsp():
    rng = np.random.default_rng(5)
    a = (rng.random((8, 8)) < 0.6).astype(float)
    a = np.triu(a, 1)
    a += a.T
    a[0, 1] = a[1, 0] = 1.0  # keep it connected enough
    for i in range(7):
        a[i, i + 1] = a[i + 1, i] = 1.0
    direct = cc.rsp_dissimilarity(a, beta=0.05)
    fused = cc.crsp_dissimilarity([a], beta=0.05)
    assert np.abs(direct - fused).max() <= 1e-12


def test_gaussian_affinity_median_bandwidth():
    x = np.array([[0.0], [1.0], [3.0]])
    a = cc.gaussian_affinity(x)
    assert a[0, 1] == pytest.approx(math.exp(-1.0 / 8.0), abs=1e-15)
    assert a[0, 0] == 0.0


def test_transition_and_cost():
    a = np.array([[0.0, 4.0, 1.0], [4.0, 0.0, 1.0], [1.0, 1.0, 0.0]])
    p = cc.transition_matrix(a)
    assert p[0, 1] == pytest.approx(0.8)
    c = cc.cost_matrix(a)
    assert c[0, 2] == pytest.approx(1.0)
    assert c[0, 0] == 0.0


def test_sbm_pipeline_end_to_end():
    views, labels = cc.generate_sbm(90, 2, 12.0, 0.9, m=3, seed=7)
    delta = cc.crsp_dissimilarity(views, beta=0.02)
    affinity = cc.affinity_from_dissimilarity(delta)
    pred = cc.spectral_clustering(affinity, 2, seed=0)
    assert cc.ccr(pred, labels) >= 90.0
    assert 0.0 <= cc.nmi(pred, labels) <= 1.0


def test_mds_reconstructs_euclidean_distances():
    rng = np.random.default_rng(11)
    points = rng.random((20, 2)) * 10
    delta = np.sqrt(((points[:, None, :] - points[None, :, :]) ** 2).sum(-1))
    np.fill_diagonal(delta, 0.0)
    coords, info = cc.classical_mds(delta, dim=2)
    recovered = np.sqrt(((coords[:, None, :] - coords[None, :, :]) ** 2).sum(-1))
    mask = ~np.eye(20, dtype=bool)
    assert np.abs(recovered - delta)[mask].max() <= 1e-8 * delta[mask].max()
    assert not info["deficient"]


def test_metrics_match_reference_values():
    assert cc.ccr([1, 1, 2, 2], [2, 2, 1, 1]) == 100.0
    assert cc.ccr([1, 1, 1, 2], [1, 1, 2, 2]) == 75.0
    assert cc.nmi([0, 0, 1, 1], [0, 0, 0, 1]) == pytest.approx(0.34559202994421136, abs=1e-12)


def test_swiss_roll_surface_identity():
    points, t = cc.generate_swiss_roll(100, cc.default_swiss_roll_holes(), seed=1)
    assert np.abs(points[:, 0] ** 2 + points[:, 2] ** 2 - t**2).max() <= 1e-9 * (t**2).max()
    views = cc.project_views(points, t, [0.0, math.pi / 2])
    assert len(views) == 2 and views[0].shape == (100, 2)


def test_run_pipeline_from_config(tmp_path):
    import json

    config = {
        "input": {"sbm": {"n": 70, "k": 2, "c": 12.0, "lambda": 0.9, "m": 2}},
        "beta": 0.02,
        "k": 2,
        "seed": 3,
        "output_dir": str(tmp_path / "run"),
    }
    result = cc.run_pipeline(json.dumps(config))
    assert (tmp_path / "run" / "metrics.json").exists()
    assert result["ccr"] >= 50.0
    assert result["delta"].shape[0] == result["nodes"]
    assert "dissimilarity" in result["timings"]


def test_errors_surface_as_python_exceptions():
    with pytest.raises(ValueError):
        cc.rsp_dissimilarity(two_node_path(), beta=-1.0)
    with pytest.raises(ArithmeticError):
        cc.rsp_dissimilarity(two_node_path(), beta=1e9)  # exponent underflow
