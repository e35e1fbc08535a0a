import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from imvs import (DataError, Dataset, DegenerateResidual, SingularDesign, TooFewRows, center,
                  fit, read_csv)
from conftest import random_dataset

PROSTATE_ABS_T = {
    "lcavol": 6.715, "lweight": 2.688, "age": 1.768, "lbph": 1.842,
    "svi": 3.154, "lcp": 1.165, "gleason": 0.288, "pgg45": 1.029,
}


def test_center_simple():
    ds = center(Dataset([1.0, 2.0, 3.0], [[1.0], [5.0], [0.0]]))
    np.testing.assert_allclose(ds.y, [-1.0, 0.0, 1.0])
    assert ds.n == 3 and ds.p == 1 and ds.names == ("x1",)


def test_center_idempotent():
    rng = np.random.default_rng(3)
    once = center(Dataset(rng.normal(5, 2, 30), rng.normal(-1, 3, (30, 4))))
    twice = center(once)
    np.testing.assert_allclose(twice.X, once.X, atol=1e-14)
    np.testing.assert_allclose(twice.y, once.y, atol=1e-14)


def test_prostate_centered_means(prostate):
    assert prostate.n == 97 and prostate.p == 8
    assert np.all(np.abs(prostate.X.mean(axis=0)) < 1e-10)
    assert abs(prostate.y.mean()) < 1e-10


def test_prostate_t_statistics(prostate_fit):
    got = dict(zip(prostate_fit.names, np.round(np.abs(prostate_fit.T), 3)))
    assert got == PROSTATE_ABS_T
    assert prostate_fit.nu == 88


def test_textbook_divisor_option(prostate):
    alt = fit(prostate, sigma_divisor="n-p-1")
    assert round(abs(alt.T[0]), 3) == 6.677
    assert alt.sigma_df == 88


def test_exact_fit_is_degenerate():
    Q, _ = np.linalg.qr(np.random.default_rng(0).standard_normal((10, 3)))
    with pytest.raises(DegenerateResidual):
        fit(Dataset(Q[:, 0], Q))


def test_normal_equations_oracle():
    rng = np.random.default_rng(20)
    ds = random_dataset(rng, n=20, p=3)
    beta_ne = np.linalg.solve(ds.X.T @ ds.X, ds.X.T @ ds.y)
    np.testing.assert_allclose(fit(ds).beta_hat, beta_ne, atol=1e-8)


def test_too_few_rows():
    rng = np.random.default_rng(1)
    with pytest.raises(TooFewRows):
        fit(Dataset(rng.standard_normal(4), rng.standard_normal((4, 3))))


def test_singular_design():
    rng = np.random.default_rng(1)
    X = rng.standard_normal((30, 2))
    X = np.column_stack([X, X[:, 0] + X[:, 1]])
    with pytest.raises(SingularDesign):
        fit(center(Dataset(rng.standard_normal(30), X)))


def test_fit_quantities(prostate_fit):
    f = prostate_fit
    np.testing.assert_allclose(np.diag(f.L), 1.0, atol=1e-12)
    np.testing.assert_array_equal(f.L, f.L.T)
    np.linalg.cholesky(f.L)
    np.testing.assert_allclose(f.T, f.theta_hat / f.sigma_hat)
    np.testing.assert_array_equal(np.sign(f.theta_hat), np.sign(f.beta_hat))
    np.testing.assert_allclose(f.D, np.diag(f.M))


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), c=st.floats(0.01, 100.0))
def test_scale_equivariance(seed, c):
    ds = random_dataset(np.random.default_rng(seed), n=25, p=3)
    base, scaled = fit(ds), fit(Dataset(c * ds.y, ds.X))
    np.testing.assert_allclose(scaled.beta_hat, c * base.beta_hat, rtol=1e-10, atol=1e-12)
    np.testing.assert_allclose(scaled.sigma_hat, c * base.sigma_hat, rtol=1e-10)
    np.testing.assert_allclose(scaled.theta_hat, c * base.theta_hat, rtol=1e-10, atol=1e-12)
    np.testing.assert_allclose(scaled.T, base.T, rtol=1e-10, atol=1e-12)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_permutation_equivariance(seed):
    rng = np.random.default_rng(seed)
    ds = random_dataset(rng, n=30, p=5)
    perm = rng.permutation(5)
    base, permuted = fit(ds), fit(ds.take(perm))
    P = np.eye(5)[perm]
    for attr in ("beta_hat", "theta_hat", "T", "D"):
        np.testing.assert_allclose(getattr(permuted, attr), getattr(base, attr)[perm], atol=1e-10)
    np.testing.assert_allclose(permuted.M, P @ base.M @ P.T, atol=1e-10)
    np.testing.assert_allclose(permuted.L, P @ base.L @ P.T, atol=1e-10)
    assert permuted.names == tuple(ds.names[j] for j in perm)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), p=st.integers(1, 6))
def test_residual_orthogonality(seed, p):
    ds = random_dataset(np.random.default_rng(seed), n=30, p=p)
    f = fit(ds)
    grad = ds.X.T @ (ds.y - ds.X @ f.beta_hat)
    assert np.max(np.abs(grad)) <= 1e-8 * np.linalg.norm(ds.y)
    assert np.all(np.abs(np.diag(f.L) - 1.0) <= 1e-12)
    np.testing.assert_array_equal(f.L, f.L.T)


def test_read_csv_selects_response(tmp_path):
    path = tmp_path / "d.csv"
    path.write_text("a,y,b\n1,2,3\n4,5,6.5\n")
    ds = read_csv(path, "y")
    assert ds.names == ("a", "b")
    np.testing.assert_array_equal(ds.y, [2, 5])
    np.testing.assert_array_equal(ds.X, [[1, 3], [4, 6.5]])


@pytest.mark.parametrize("body, fragment", [
    ("a,y\n1,2\n3,\n", "row 3, column 'y'"),
    ("a,y\n1,2\nfoo,4\n", "row 3, column 'a'"),
    ("a,y\n1,2\n3\n", "row 3 has 1 cells"),
])
def test_read_csv_bad_cells(tmp_path, body, fragment):
    path = tmp_path / "d.csv"
    path.write_text(body)
    with pytest.raises(DataError, match=fragment):
        read_csv(path, "y")


def test_read_csv_missing_response(tmp_path):
    path = tmp_path / "d.csv"
    path.write_text("a,b\n1,2\n")
    with pytest.raises(DataError, match="response column"):
        read_csv(path, "y")
