import math

import numpy as np
import pytest
import scipy.sparse as sp

import gsig


def test_graph_round_trip_and_degrees():
    g = gsig.Graph(4, [(0, 1, 1.0), (2, 1, 2.0), (2, 3, 0.5)])
    assert g.n_vertices == 4
    assert g.edges() == [(0, 1, 1.0), (1, 2, 2.0), (2, 3, 0.5)]
    assert g.neighbors(2) == [(1, 2.0), (3, 0.5)]
    np.testing.assert_allclose(g.degrees, [1.0, 3.0, 2.5, 0.5])
    w = g.weight_matrix()
    assert sp.issparse(w)
    assert w.shape == (4, 4)
    assert w[0, 1] == 1.0 and w[1, 0] == 1.0


def test_invalid_edges_raise_gsig_error():
    with pytest.raises(gsig.Error):
        gsig.Graph(3, [(0, 0, 1.0)])
    with pytest.raises(gsig.Error, match="weight"):
        gsig.Graph(3, [(0, 1, -1.0)])


def test_laplacian_matches_dense_definition():
    g = gsig.ring_graph(6)
    lap = gsig.Laplacian(g)
    L = lap.matrix.toarray()
    W = g.weight_matrix().toarray()
    np.testing.assert_allclose(L, np.diag(W.sum(axis=1)) - W, atol=1e-14)
    assert lap.lambda_max_bound >= 4.0 - 1e-12


def test_gradient_operator_energy_identity():
    g = gsig.random_geometric_graph(40, 5, seed=7)
    grad = gsig.gradient_operator(g)
    L = gsig.Laplacian(g).matrix.toarray()
    x = gsig.gaussian_vector(40, seed=3)
    gx = grad @ x
    assert math.isclose(float(gx @ gx), float(x @ (L @ x)), rel_tol=1e-12)


def test_eigendecomposition_orthonormal_with_zero_first_eigenvalue():
    lap = gsig.Laplacian(gsig.ring_graph(12))
    basis = gsig.eigendecompose(lap)
    assert basis.lambdas[0] == 0.0
    assert np.all(np.diff(basis.lambdas) >= 0)
    np.testing.assert_allclose(basis.U.T @ basis.U, np.eye(12), atol=1e-12)
    assert basis.clusters[0][0] == 0


def test_gft_igft_round_trip():
    basis = gsig.eigendecompose(gsig.Laplacian(gsig.ring_graph(10)))
    x = gsig.gaussian_vector(10, seed=21)
    np.testing.assert_allclose(gsig.igft(basis, gsig.gft(basis, x)), x,
                               atol=1e-12)


def test_kernel_shapes_and_json_round_trip():
    k = gsig.Kernel.heat(0.5)
    assert k(0.0) == 1.0
    assert k(-1.0) == 1.0
    vals = k(np.array([0.0, 1.0, 2.0]))
    np.testing.assert_allclose(vals, np.exp(-0.5 * np.array([0.0, 1.0, 2.0])))
    k2 = gsig.Kernel.from_json(k.to_json())
    assert k2.kind == "heat" and k2.param0 == 0.5

    s = gsig.Kernel.sampled([(0.0, 1.0), (2.0, 3.0)])
    assert s(1.0) == 2.0
    assert s(5.0) == 3.0

    with pytest.raises(gsig.Error):
        gsig.Kernel.custom(lambda lam: lam).to_json()


def test_chebyshev_filter_tracks_exact_filter():
    lap = gsig.Laplacian(gsig.random_geometric_graph(60, 6, seed=11))
    basis = gsig.eigendecompose(lap)
    g = gsig.Kernel.heat(2.0 / basis.lambda_max)
    X = gsig.gaussian_matrix(60, 3, seed=12)
    exact = gsig.filter_exact(basis, g, X)
    cheb = gsig.filter_chebyshev(lap, g, X, order=40)
    assert np.linalg.norm(cheb - exact) < 1e-8 * np.linalg.norm(exact)


def test_stationary_ensemble_has_diagonal_spectral_covariance():
    lap = gsig.Laplacian(gsig.random_geometric_graph(30, 5, seed=31))
    basis = gsig.eigendecompose(lap)
    g = gsig.Kernel.heat(1.0 / basis.lambda_max)
    ens = gsig.generate_stationary(basis, g, K=400, mean=0.0, seed=32)
    assert ens.data.shape == (30, 400)
    rep = gsig.stationarity_report(basis, ens)
    assert 0.0 < rep.s_r <= 1.0
    assert rep.s_r > 0.8
    assert rep.to_json()["n"] == 30

    again = gsig.generate_stationary(basis, g, K=400, mean=0.0, seed=32)
    assert np.array_equal(ens.data, again.data)


def test_psd_estimate_stays_near_bias_oracle():
    lap = gsig.Laplacian(gsig.random_geometric_graph(80, 6, seed=41))
    basis = gsig.eigendecompose(lap)
    fb = gsig.design_filterbank(basis.lambda_max, 5)
    g = gsig.Kernel.heat(1.0 / basis.lambda_max)
    ens = gsig.generate_stationary(basis, g, K=200, mean=0.0, seed=42)
    ens.centered = True
    est = gsig.estimate_psd_with_norms(lap, ens, fb,
                                       gsig.exact_filter_norms(basis, fb))
    want = gsig.bias_oracle(basis, fb, gsig.kernel_squared(g))
    got = np.array([v for _, v in est.points])
    np.testing.assert_allclose(got, want, rtol=0.35)
    k = gsig.psd_to_kernel(est)
    assert k(fb.tau) > 0.0


def test_wiener_filter_and_optimizer_agree_on_denoising():
    lap = gsig.Laplacian(gsig.random_geometric_graph(40, 5, seed=51))
    basis = gsig.eigendecompose(lap)
    s2 = gsig.kernel_squared(gsig.Kernel.heat(1.0 / basis.lambda_max))
    x = gsig.generate_stationary(basis, gsig.Kernel.heat(1.0 / basis.lambda_max),
                                 K=1, mean=0.0, seed=52).data[:, 0]
    y = x + 0.1 * gsig.gaussian_vector(40, seed=53)
    p = gsig.WienerProblem(H=gsig.LinearOperator.identity(40), s2=s2, y=y,
                           noise=gsig.Kernel.constant(0.01))
    direct = gsig.wiener_filter(basis, p)
    res = gsig.wiener_optimize(basis, p,
                               gsig.SolveOptions(eps=1e-16, max_iter=20000))
    assert res.converged
    assert len(res.objective) == res.iterations
    assert np.linalg.norm(res.x - direct) < 1e-6 * np.linalg.norm(direct)
    assert gsig.snr_db(x, direct) > gsig.snr_db(x, y)


def test_masked_recovery_meets_residual_budget():
    g = gsig.random_geometric_graph(50, 5, seed=61)
    lap = gsig.Laplacian(g)
    basis = gsig.eigendecompose(lap)
    x = gsig.filter_exact(basis, gsig.Kernel.heat(4.0 / basis.lambda_max),
                          gsig.gaussian_vector(50, seed=62)).ravel()
    keep = list(range(0, 50, 2))
    H = gsig.LinearOperator.mask(50, keep)
    y = H.apply(x)

    fit = gsig.tikhonov_solve(lap, H, y, eps=0.0)
    assert fit.residual == 0.0
    np.testing.assert_array_equal(fit.x[keep], y)

    eps = 0.25 * np.linalg.norm(y)
    for res in (gsig.tikhonov_solve(lap, H, y, eps),
                gsig.tv_solve(lap, gsig.gradient_operator(g), H, y, eps)):
        assert res.converged
        assert res.residual <= eps * (1 + 1e-6)


def test_filter_operators_blur_and_invert():
    g = gsig.random_geometric_graph(30, 5, seed=65)
    lap = gsig.Laplacian(g)
    basis = gsig.eigendecompose(lap)
    h = gsig.Kernel.heat(2.0 / basis.lambda_max)
    exact = gsig.LinearOperator.graph_filter(basis, h)
    cheb = gsig.LinearOperator.graph_filter(lap, h, order=40)
    assert exact.kind == "filter" and exact.is_filter
    x = gsig.gaussian_vector(30, seed=66)
    assert np.linalg.norm(exact.apply(x) - cheb.apply(x)) < 1e-8
    np.testing.assert_allclose(exact.to_dense() @ x, exact.apply(x),
                               atol=1e-12)

    y = exact.apply(x)
    p = gsig.WienerProblem(H=exact, s2=gsig.Kernel.constant(1.0), y=y)
    np.testing.assert_allclose(gsig.wiener_filter(basis, p), x, atol=1e-7)

    sub = gsig.LinearOperator.masked_filter(exact, [0, 3, 4])
    assert sub.kind == "masked_filter"
    assert sub.rows == 3 and sub.cols == 30
    np.testing.assert_allclose(sub.apply(x), y[[0, 3, 4]], atol=1e-12)


def test_lmmse_matches_wiener_filter_for_identity_measurements():
    basis = gsig.eigendecompose(gsig.Laplacian(gsig.ring_graph(16)))
    s2 = gsig.kernel_squared(gsig.Kernel.heat(0.5))
    y = gsig.gaussian_vector(16, seed=71)
    p = gsig.WienerProblem(H=gsig.LinearOperator.identity(16), s2=s2, y=y,
                           noise=gsig.Kernel.constant(0.05))
    a = gsig.wiener_filter(basis, p)
    b = gsig.lmmse_closed_form(basis, p)
    np.testing.assert_allclose(a, b, atol=1e-10)


def test_degrade_is_deterministic_in_the_model_seed():
    H = gsig.LinearOperator.identity(20)
    x = gsig.gaussian_vector(20, seed=81)
    m = gsig.DegradationModel(H, sigma=0.3, seed=82)
    np.testing.assert_array_equal(gsig.degrade(x, m), gsig.degrade(x, m))
    assert not np.array_equal(gsig.degrade(x, m),
                              gsig.degrade(x, gsig.DegradationModel(H, 0.3, 83)))


def test_csv_round_trips(tmp_path):
    g = gsig.random_geometric_graph(25, 4, seed=91)
    path = str(tmp_path / "g.csv")
    gsig.write_edge_csv(path, g)
    assert gsig.read_edge_csv(path).edges() == g.edges()

    m = gsig.gaussian_matrix(7, 3, seed=92)
    mpath = str(tmp_path / "m.csv")
    gsig.write_matrix_csv(mpath, m)
    np.testing.assert_array_equal(gsig.read_matrix_csv(mpath), m)


def test_tiny_experiment_reports_are_well_formed():
    rep = gsig.experiment_deconvolution(
        gsig.DeconvParams(n_nodes=40, knn=6, noise_levels=[0.1], trials=2,
                          seed=5))
    assert rep.methods == ["wiener", "tikhonov", "tv"]
    assert rep.mean_snr_db.shape == (3, 1)
    assert np.all(np.isfinite(rep.mean_snr_db))
    assert rep.to_csv().splitlines()[0] == "method,noise_std,mean_snr_db,stderr_db,trials"
    assert rep.to_json()["trials"] == 2
