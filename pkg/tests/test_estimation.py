import numpy as np
import pytest

from surrocast import (
    InsufficientSample,
    RankDeficient,
    benchmark_dgp,
    d_residual,
    fit_arx,
    fit_joint,
    fit_surrogate,
    generate,
    joint_fit_from_dict,
    joint_fit_to_dict,
    ols_solve,
    residual_pairs,
)
from surrocast.simulation import Ar1Spec, DgpSpec

from conftest import build_panels


# ---------------------------------------------------------------------------
# ols_solve
# ---------------------------------------------------------------------------

def test_ols_identity_design():
    coef = ols_solve(np.eye(3), np.array([1.0, 2.0, 3.0]))
    np.testing.assert_allclose(coef, [1.0, 2.0, 3.0])


def test_ols_column_of_ones_gives_mean():
    coef = ols_solve(np.ones((4, 1)), np.array([1.0, 2.0, 3.0, 4.0]))
    assert coef[0] == pytest.approx(2.5)


def test_ols_duplicated_column_rank_deficient(rng):
    col = rng.standard_normal(20)
    design = np.column_stack([col, col, rng.standard_normal(20)])
    with pytest.raises(RankDeficient) as exc:
        ols_solve(design, rng.standard_normal(20))
    assert set(exc.value.columns) >= {0, 1}


def test_ols_more_columns_than_rows():
    with pytest.raises(InsufficientSample):
        ols_solve(np.ones((2, 3)), np.ones(2))


# ---------------------------------------------------------------------------
# fit_surrogate
# ---------------------------------------------------------------------------

def test_surrogate_exact_recovery_noiseless_transient():
    # y_t = 0.2 y_{t-1}, started at 1: a single decaying column, no noise.
    T = 30
    ys = 0.2 ** np.arange(T)
    _, sp = build_panels(np.zeros(T), ys.reshape(-1, 1))
    sf = fit_surrogate(sp, np.zeros((T, 0)), q2=1)
    assert abs(sf.A_hat[0, 0, 0] - 0.2) < 1e-10
    np.testing.assert_allclose(sf.residuals, 0.0, atol=1e-12)


def test_surrogate_recovery_benchmark_dgp():
    # average estimate over 20 seeds should sit within 0.05 of every entry
    A_sum = np.zeros((3, 3))
    B_sum = np.zeros((3, 2))
    n_seeds = 20
    for seed in range(n_seeds):
        mp, sp, _ = generate(benchmark_dgp(0.2, T=5000, seed=seed))
        sf = fit_surrogate(sp, mp.x, q2=1)
        A_sum += sf.A_hat[0]
        B_sum += sf.B_hat
    A_true = np.array([[0.2, 0.2, 0.2], [-0.2, -0.2, -0.2], [-0.1, -0.1, -0.1]])
    B_true = np.array([[0.1, 0.1], [-0.1, -0.1], [-0.3, -0.3]])
    assert np.max(np.abs(A_sum / n_seeds - A_true)) < 0.05
    assert np.max(np.abs(B_sum / n_seeds - B_true)) < 0.05


def test_surrogate_insufficient_sample():
    _, sp = build_panels(np.zeros(2), np.ones((2, 3)))
    with pytest.raises(InsufficientSample):
        fit_surrogate(sp, np.zeros((2, 0)), q2=1)


# ---------------------------------------------------------------------------
# d_residual
# ---------------------------------------------------------------------------

def _toy_surrogate_fit(a, K=1):
    from surrocast import SurrogateFit

    return SurrogateFit(A_hat=np.full((1, K, K), a), B_hat=np.zeros((K, 0)),
                        residuals=np.zeros((1, K)), q2=1)


def test_d_residual_zero_lag_coefficients(rng):
    ys = rng.standard_normal((10, 2))
    _, sp = build_panels(np.zeros(10), ys)
    sf = _toy_surrogate_fit(0.0, K=2)
    np.testing.assert_allclose(d_residual(sp, sf, 5), ys[4])


def test_d_residual_hand_value():
    ys = np.array([[2.0], [3.0]])
    _, sp = build_panels(np.zeros(2), ys)
    sf = _toy_surrogate_fit(0.5)
    assert d_residual(sp, sf, 2)[0] == pytest.approx(2.0)  # 3 - 0.5*2


def test_d_residual_needs_lags():
    ys = np.array([[2.0], [3.0]])
    _, sp = build_panels(np.zeros(2), ys)
    sf = _toy_surrogate_fit(0.5)
    with pytest.raises(IndexError):
        d_residual(sp, sf, 1)


# ---------------------------------------------------------------------------
# fit_joint
# ---------------------------------------------------------------------------

def test_joint_gamma_vanishes_without_error_correlation():
    gamma_sum = np.zeros(3)
    n_seeds = 20
    for seed in range(n_seeds):
        mp, sp, _ = generate(benchmark_dgp(0.0, T=10000, seed=100 + seed))
        jf, _ = fit_joint(mp, sp, 2, 1)
        gamma_sum += jf.gamma_hat
    assert np.max(np.abs(gamma_sum / n_seeds)) < 0.05


def test_joint_alpha_recovery():
    alpha_sum = np.zeros(2)
    n_seeds = 20
    for seed in range(n_seeds):
        mp, sp, _ = generate(benchmark_dgp(0.4, T=5000, seed=200 + seed))
        jf, _ = fit_joint(mp, sp, 2, 1)
        alpha_sum += jf.alpha_hat
    np.testing.assert_allclose(alpha_sum / n_seeds, [0.5, -0.3], atol=0.05)


def test_joint_reduces_residual_variance():
    mp, sp, _ = generate(benchmark_dgp(0.4, T=5000, seed=7))
    jf, _ = fit_joint(mp, sp, 2, 1)
    arx = fit_arx(mp.y, 2, x=mp.x)
    # error variance drops by Sigma_ts Sigma_ss^{-1} Sigma_st = 3rho^2/(1+2rho)
    assert jf.sigma_e_hat**2 < 0.9 * arx.sigma_e_hat**2


def test_joint_sigma_denominator_is_t_minus_q1():
    mp, sp, _ = generate(benchmark_dgp(0.2, T=200, seed=3))
    jf, _ = fit_joint(mp, sp, 2, 1)
    expected = np.sqrt(np.sum(jf.residuals**2) / (mp.T - 2))
    assert jf.sigma_e_hat == pytest.approx(expected, rel=1e-12)


def test_joint_orthogonality_invariant():
    mp, sp, _ = generate(benchmark_dgp(0.3, T=400, seed=11))
    jf, sf = fit_joint(mp, sp, 2, 1)
    q1 = 2
    lags = np.column_stack([mp.y[q1 - l: mp.T - l] for l in range(1, q1 + 1)])
    design = np.hstack([lags, mp.z[q1:], mp.x[q1:], jf.d_hat[q1 - 1:]])
    np.testing.assert_allclose(design.T @ jf.residuals, 0.0, atol=1e-8)
    sur_design = np.hstack([sp.ys[:-1], mp.x[1:]])
    np.testing.assert_allclose(sur_design.T @ sf.residuals, 0.0, atol=1e-8)


def test_joint_x_scaling_invariance():
    mp, sp, _ = generate(benchmark_dgp(0.3, T=300, seed=13))
    jf, sf = fit_joint(mp, sp, 2, 1)
    from surrocast import MonthlyPanel

    c = 37.5
    x_scaled = mp.x.copy()
    x_scaled[:, 1] *= c
    mp2 = MonthlyPanel(mp.times, mp.y, mp.z, x_scaled)
    jf2, sf2 = fit_joint(mp2, sp, 2, 1)
    assert jf2.delta_hat[1] == pytest.approx(jf.delta_hat[1] / c, rel=1e-8)
    np.testing.assert_allclose(sf2.B_hat[:, 1], sf.B_hat[:, 1] / c, rtol=1e-8)
    np.testing.assert_allclose(jf2.residuals, jf.residuals, atol=1e-8)
    assert jf2.sigma_e_hat == pytest.approx(jf.sigma_e_hat, abs=1e-10)


def test_joint_root_t_consistency_rate():
    # doubling T should shrink the median coefficient error by about sqrt(2)
    spec = benchmark_dgp(0.3, T=500)
    gamma_true = np.full(3, 0.3 / 1.6)  # equicorrelated errors at rho=0.3
    delta_true = spec.beta - spec.B_S.T @ gamma_true
    truth = np.concatenate([spec.alpha, delta_true, gamma_true])
    errs = {500: [], 1000: []}
    for seed in range(50):
        for T in (500, 1000):
            mp, sp, _ = generate(benchmark_dgp(0.3, T=T, seed=(seed, T)))
            jf, _ = fit_joint(mp, sp, 2, 1)
            coef = np.concatenate([jf.alpha_hat, jf.delta_hat, jf.gamma_hat])
            errs[T].append(np.linalg.norm(coef - truth))
    ratio = np.median(errs[500]) / np.median(errs[1000])
    assert 1.2 <= ratio <= 1.7


def test_joint_misaligned_panels_rejected():
    from surrocast import PanelMismatch

    mp, sp, _ = generate(benchmark_dgp(0.2, T=50, seed=1))
    sp_shifted = type(sp)(times=tuple(["2018-12"] + list(sp.times[:-1])),
                          ys=sp.ys)
    with pytest.raises(PanelMismatch):
        fit_joint(mp, sp_shifted, 2, 1)


# ---------------------------------------------------------------------------
# residual_pairs
# ---------------------------------------------------------------------------

def _no_x_dgp(rho, T, seed):
    return DgpSpec(
        alpha=np.array([0.5, -0.3]),
        beta=np.zeros(0),
        A_S=np.array([[[0.2, 0.2, 0.2], [-0.2, -0.2, -0.2], [-0.1, -0.1, -0.1]]]),
        B_S=np.zeros((3, 0)),
        Sigma=np.full((4, 4), rho) + (1 - rho) * np.eye(4),
        T=T,
        x_gen=Ar1Spec(0),
        seed=seed,
    )


def test_residual_pairs_cardinality():
    mp, sp, _ = generate(_no_x_dgp(0.2, 7 + 2, seed=5))
    # K=3 here; check row count = T - q1 and width 1 + K
    jf, sf = fit_joint(mp, sp, 2, 1)
    pairs = residual_pairs(jf, sf)
    assert pairs.shape == (mp.T - 2, 4)


def test_residual_pairs_uncorrelated_when_independent():
    mp, sp, _ = generate(_no_x_dgp(0.0, 10000, seed=21))
    jf, sf = fit_joint(mp, sp, 2, 1)
    pairs = residual_pairs(jf, sf)
    for k in range(1, 4):
        r = np.corrcoef(pairs[:, 0], pairs[:, k])[0, 1]
        assert abs(r) < 0.05


def test_residual_pairs_correlated_dgp():
    mp, sp, _ = generate(_no_x_dgp(0.4, 5000, seed=22))
    jf, sf = fit_joint(mp, sp, 2, 1)
    pairs = residual_pairs(jf, sf)
    for k in range(1, 4):
        r = np.corrcoef(pairs[:, 0], pairs[:, k])[0, 1]
        assert abs(r) > 0.3


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def test_fit_document_roundtrip():
    mp, sp, _ = generate(benchmark_dgp(0.2, T=80, seed=9))
    jf, sf = fit_joint(mp, sp, 2, 1)
    doc = joint_fit_to_dict(jf, sf)
    jf2, sf2 = joint_fit_from_dict(doc)
    np.testing.assert_array_equal(jf.alpha_hat, jf2.alpha_hat)
    np.testing.assert_array_equal(jf.gamma_hat, jf2.gamma_hat)
    np.testing.assert_array_equal(jf.d_hat, jf2.d_hat)
    np.testing.assert_array_equal(sf.A_hat, sf2.A_hat)
    assert jf.sigma_e_hat == jf2.sigma_e_hat
