import numpy as np
import pytest

from surrocast import (
    Ar1Spec,
    BaselineDegenerate,
    DgpSpec,
    ExperimentGrid,
    InvalidCovariance,
    NonStationarySpec,
    benchmark_dgp,
    coverage_length,
    equicorrelated,
    generate,
    rpmse,
    rsign,
    run_experiment,
)


# ---------------------------------------------------------------------------
# generate
# ---------------------------------------------------------------------------

def _iid_spec(T, seed=0):
    return DgpSpec(
        alpha=[0.0], beta=np.zeros(0), A_S=np.zeros((1, 3, 3)),
        B_S=np.zeros((3, 0)), Sigma=np.eye(4), T=T, x_gen=Ar1Spec(0),
        seed=seed,
    )


def test_generate_iid_when_all_coefficients_zero():
    mp, sp, _ = generate(_iid_spec(5000))
    for series in [mp.y] + [sp.ys[:, k] for k in range(3)]:
        r = np.corrcoef(series[:-1], series[1:])[0, 1]
        assert abs(r) < 0.05


def test_generate_innovation_covariance_matches_sigma():
    spec = benchmark_dgp(0.3, T=5000, seed=1)
    _, _, truth = generate(spec)
    sample = np.cov(truth.eps.T)
    assert np.max(np.abs(sample - spec.Sigma)) < 0.05


def test_generate_student_t_covariance_matches_sigma():
    spec = benchmark_dgp(0.3, T=5000, error_kind="student-t", df=10, seed=2)
    _, _, truth = generate(spec)
    sample = np.cov(truth.eps.T)
    assert np.max(np.abs(sample - spec.Sigma)) < 0.05


def test_generate_rejects_nonstationary_target():
    with pytest.raises(NonStationarySpec):
        DgpSpec(alpha=[1.1], beta=np.zeros(0), A_S=np.zeros((1, 2, 2)),
                B_S=np.zeros((2, 0)), Sigma=np.eye(3), T=50, x_gen=Ar1Spec(0))


def test_generate_rejects_nonstationary_surrogate():
    with pytest.raises(NonStationarySpec):
        DgpSpec(alpha=[0.5], beta=np.zeros(0), A_S=1.2 * np.eye(2)[None],
                B_S=np.zeros((2, 0)), Sigma=np.eye(3), T=50, x_gen=Ar1Spec(0))


def test_generate_rejects_non_pd_sigma():
    sigma = equicorrelated(4, 0.9)
    sigma[0, 1] = 0.2  # asymmetric
    with pytest.raises(InvalidCovariance):
        DgpSpec(alpha=[0.5], beta=np.zeros(0), A_S=np.zeros((1, 3, 3)),
                B_S=np.zeros((3, 0)), Sigma=sigma, T=50, x_gen=Ar1Spec(0))


def test_generate_deterministic_given_seed():
    a = generate(benchmark_dgp(0.2, T=100, seed=42))[0]
    b = generate(benchmark_dgp(0.2, T=100, seed=42))[0]
    np.testing.assert_array_equal(a.y, b.y)


def test_x_generator_stationary_scale():
    x = Ar1Spec(2, 0.5, 6.0).draw(np.random.default_rng(0), 200000)
    np.testing.assert_allclose(x.std(axis=0), 6.0, rtol=0.02)
    r = np.corrcoef(x[:-1, 0], x[1:, 0])[0, 1]
    assert r == pytest.approx(0.5, abs=0.02)


# ---------------------------------------------------------------------------
# metrics
# ---------------------------------------------------------------------------

def test_rpmse_identical_to_baseline_is_one(rng):
    truth = rng.standard_normal((20, 5))
    fc = truth + rng.standard_normal((20, 5))
    assert rpmse(fc, truth, fc) == pytest.approx(1.0)


def test_rpmse_half_errors():
    truth = np.zeros((10, 4))
    base = np.full((10, 4), 2.0)
    assert rpmse(base / 2, truth, base) == pytest.approx(0.5)


def test_rpmse_perfect_method():
    truth = np.ones((5, 3))
    base = np.zeros((5, 3))
    assert rpmse(truth, truth, base) == 0.0


def test_rpmse_degenerate_baseline():
    truth = np.ones((5, 3))
    with pytest.raises(BaselineDegenerate):
        rpmse(np.zeros((5, 3)), truth, truth)


def test_rsign_identical_forecasts():
    truth = np.array([[1.0, -1.0], [1.0, 1.0]])
    fc = np.array([[2.0, 1.0], [1.0, -3.0]])
    assert rsign(fc, truth, fc) == pytest.approx(1.0)


def test_rsign_perfect_method_vs_fallible_baseline():
    truth = np.array([[1.0, -2.0]])
    good = np.array([[0.5, -0.1]])
    bad = np.array([[-0.5, -0.1]])
    assert rsign(good, truth, bad) == 0.0


def test_rsign_both_always_wrong():
    truth = np.ones((3, 2))
    wrong = -np.ones((3, 2))
    assert rsign(wrong, truth, wrong) == pytest.approx(1.0)


def test_coverage_length_truth_always_inside():
    truth = np.zeros((6, 4))
    cov, length = coverage_length(truth - 1.0, truth + 2.0, truth)
    assert cov == 1.0
    assert length == pytest.approx(3.0)


def test_coverage_length_constant_width():
    rng = np.random.default_rng(1)
    truth = rng.standard_normal((8, 3))
    cov, length = coverage_length(truth - 0.25, truth - 0.05, truth)
    assert cov == 0.0
    assert length == pytest.approx(0.2)


# ---------------------------------------------------------------------------
# run_experiment
# ---------------------------------------------------------------------------

def _small_grid(**kw):
    base = dict(rhos=(0.2,), horizons=(8,), B=100, include_boot=False)
    base.update(kw)
    return ExperimentGrid(**base)


def test_experiment_single_repetition_runs():
    report = run_experiment(_small_grid(), Q=1, seed=0)
    assert report.Q == 1
    assert report.value(0.2, 8, "JOINT", "rpmse") >= 0.0


def test_experiment_deterministic():
    a = run_experiment(_small_grid(include_boot=True), Q=3, seed=5)
    b = run_experiment(_small_grid(include_boot=True), Q=3, seed=5)
    assert a == b


def test_experiment_worker_count_invariant(tmp_path):
    grid1 = _small_grid(rhos=(0.1, 0.3), workers=1)
    grid2 = _small_grid(rhos=(0.1, 0.3), workers=3)
    a = run_experiment(grid1, Q=4, seed=9)
    b = run_experiment(grid2, Q=4, seed=9)
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    a.to_csv(p1)
    b.to_csv(p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_experiment_holdout_hygiene_mode():
    report = run_experiment(_small_grid(check_holdout=True), Q=2, seed=1)
    assert len(report.rows) > 0


def test_experiment_variants_run():
    for variant in ("omitted", "overfit", "student-t"):
        report = run_experiment(_small_grid(variant=variant), Q=2, seed=2)
        assert report.value(0.2, 8, "JOINT", "rpmse") > 0.0


def test_experiment_metrics_improve_with_correlation():
    grid = ExperimentGrid(rhos=(0.1, 0.4), horizons=(8,), include_boot=False)
    report = run_experiment(grid, Q=80, seed=3)
    assert (report.value(0.4, 8, "JOINT", "rpmse")
            <= report.value(0.1, 8, "JOINT", "rpmse") + 0.01)
    assert (report.value(0.4, 8, "JOINT_BJ", "length")
            <= report.value(0.1, 8, "JOINT_BJ", "length"))


def test_report_csv_schema(tmp_path):
    report = run_experiment(_small_grid(), Q=2, seed=4)
    path = tmp_path / "report.csv"
    report.to_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "variant,rho,H,method,metric,value"
    assert all(line.startswith("base,0.2,8,") for line in lines[1:])
