"""Prediction intervals and the surrogate efficiency-gain calculator.

Two constructions are provided: a normal-quantile interval whose width
accumulates the first-entry powers of the companion matrix, and a residual
bootstrap that rebuilds the series from resampled centered residuals, refits,
and takes empirical quantiles of the bootstrap forecast errors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import norm

from .errors import BootstrapUnstable, InvalidCovariance, InvalidData
from .estimation import (
    JointFit,
    SurrogateFit,
    RANK_TOL,
    companion_matrix,
    d_residual_matrix,
)
from .forecasting import ForecastResult, FutureExogenous, forecast_joint
from .panels import MonthlyPanel, SurrogatePanel

__all__ = [
    "IntervalResult",
    "BootstrapConfig",
    "companion_weight",
    "bj_interval",
    "boot_interval",
    "efficiency_gain",
]


@dataclass(frozen=True)
class IntervalResult:
    """Per-horizon interval bounds at miss rate alpha.

    kind 'bj' intervals are symmetric about the point forecast; 'boot'
    intervals need not be.
    """

    lower: np.ndarray
    upper: np.ndarray
    alpha: float
    kind: str

    def __post_init__(self):
        lower = np.asarray(self.lower, dtype=float)
        upper = np.asarray(self.upper, dtype=float)
        if lower.shape != upper.shape or np.any(lower > upper):
            raise InvalidData("interval bounds must satisfy lower <= upper")
        if not 0.0 < self.alpha < 1.0:
            raise InvalidData("alpha must lie in (0, 1)")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @property
    def length(self) -> np.ndarray:
        return self.upper - self.lower


@dataclass(frozen=True)
class BootstrapConfig:
    """Residual-bootstrap settings.

    quantile_rule 'ceil' takes the order statistic with 1-based index
    ceil(B*q); 'linear' interpolates. burn_in > 0 prepends that many
    covariate-free warm-up steps to each rebuilt series and drops them,
    instead of starting the recursion directly from resampled residuals.
    """

    B: int = 500
    seed: int = 0
    quantile_rule: str = "ceil"
    burn_in: int = 0

    def __post_init__(self):
        if self.B < 100:
            raise InvalidData("bootstrap needs B >= 100 replicates")
        if self.quantile_rule not in ("ceil", "linear"):
            raise InvalidData(f"unknown quantile_rule {self.quantile_rule!r}")
        if self.burn_in < 0:
            raise InvalidData("burn_in must be >= 0")


def companion_weight(alpha_hat: np.ndarray, h: int) -> float:
    """sqrt of the summed squared (1,1) entries of companion powers 0..h-1."""
    if h < 1:
        raise InvalidData("h must be >= 1")
    A = companion_matrix(alpha_hat)
    row = np.zeros(A.shape[0])
    row[0] = 1.0  # first row of A^0
    total = 0.0
    for _ in range(h):
        total += row[0] ** 2
        row = row @ A
    return math.sqrt(total)


def bj_interval(forecast: ForecastResult, fit, alpha: float) -> IntervalResult:
    """Normal-quantile interval around each point forecast.

    ``fit`` is any fitted model exposing alpha_hat and sigma_e_hat (the joint
    fit or an ARX benchmark fit). Half-width at step h is
    |z_{alpha/2}| * companion_weight(h) * sigma_e_hat.
    """
    if not 0.0 < alpha < 1.0:
        raise InvalidData("alpha must lie in (0, 1)")
    z = abs(float(norm.ppf(alpha / 2.0)))
    weights = np.array([companion_weight(fit.alpha_hat, h)
                        for h in range(1, forecast.horizon + 1)])
    half = z * weights * fit.sigma_e_hat
    return IntervalResult(
        lower=forecast.point - half,
        upper=forecast.point + half,
        alpha=alpha,
        kind="bj",
    )


def _empirical_quantile(sorted_vals: np.ndarray, q: float, rule: str) -> float:
    n = sorted_vals.shape[0]
    if rule == "ceil":
        idx = min(max(math.ceil(n * q), 1), n)
        return float(sorted_vals[idx - 1])
    return float(np.quantile(sorted_vals, q))


def boot_interval(
    jf: JointFit,
    sf: SurrogateFit,
    mp: MonthlyPanel,
    sp: SurrogatePanel,
    fut: FutureExogenous,
    H: int,
    cfg: BootstrapConfig,
    alpha: float,
) -> IntervalResult:
    """Residual-bootstrap interval for the joint model.

    Each replicate resamples centered fit residuals, rebuilds the series
    recursively along the observed covariate path (surrogate innovations are
    frozen at their original-fit values), refits the joint regression on the
    rebuilt sample, forecasts H steps, and records the bootstrap forecast
    error at each horizon. Interval endpoints add the empirical alpha/2 and
    1-alpha/2 error quantiles to the original point forecast. Replicates
    whose refit is rank deficient are dropped; more than 5% of them failing
    raises BootstrapUnstable.
    """
    if not 0.0 < alpha < 1.0:
        raise InvalidData("alpha must lie in (0, 1)")
    point = forecast_joint(jf, sf, mp, sp, fut, H).point  # validates fut
    q1, q2 = jf.q1, jf.q2
    T = mp.T
    d, p, K = len(jf.theta_hat), len(jf.delta_hat), sf.K
    n_resid = T - q1

    resid = jf.residuals
    centered = resid - resid.mean()

    # Covariate contribution per month (zero until the first fitted month).
    d_used = jf.d_hat[q1 - q2:]
    hist_driver = mp.z[q1:] @ jf.theta_hat + mp.x[q1:] @ jf.delta_hat \
        + d_used @ jf.gamma_hat
    ys_all = np.vstack([sp.ys[-q2:], fut.ys_future[:H]])
    d_fut = d_residual_matrix(ys_all, sf.A_hat, q2)
    z_fut = fut.z_future[:H] if d else np.zeros((H, 0))
    x_fut = fut.x_future[:H] if p else np.zeros((H, 0))
    fut_driver = z_fut @ jf.theta_hat + x_fut @ jf.delta_hat + d_fut @ jf.gamma_hat

    burn = cfg.burn_in
    n_total = burn + T + H
    driver = np.zeros(n_total)
    driver[burn + q1: burn + T] = hist_driver
    driver[burn + T:] = fut_driver

    B = cfg.B
    rng = np.random.default_rng(cfg.seed)
    e_star = centered[rng.integers(0, n_resid, size=(B, n_total))]

    ystar = np.empty((B, n_total))
    ystar[:, :q1] = e_star[:, :q1]
    alpha_hat = jf.alpha_hat
    for t in range(q1, n_total):
        acc = driver[t] + e_star[:, t]
        for l in range(1, q1 + 1):
            acc = acc + alpha_hat[l - 1] * ystar[:, t - l]
        ystar[:, t] = acc
    Y = ystar[:, burn:]  # months 1..T+H

    # Refit design: lag block varies per replicate, covariate block is fixed.
    fixed = np.hstack([mp.z[q1:], mp.x[q1:], d_used])
    lag_cols = np.stack([Y[:, q1 - l: T - l] for l in range(1, q1 + 1)], axis=2)
    response = Y[:, q1:T]

    m = q1 + d + p + K
    errors = np.empty((B, H))
    kept = np.zeros(B, dtype=bool)
    fut_cov = np.hstack([z_fut, x_fut, d_fut])
    for b in range(B):
        design = np.hstack([lag_cols[b], fixed])
        coef, _, rank, sv = np.linalg.lstsq(design, response[b], rcond=RANK_TOL)
        if rank < m or sv[0] <= 0.0 or sv[-1] < RANK_TOL * sv[0]:
            continue
        a_star = coef[:q1]
        drv = fut_cov @ coef[q1:]
        buf = np.concatenate([Y[b, T - q1:T], np.zeros(H)])
        for h in range(H):
            buf[q1 + h] = a_star @ buf[h:q1 + h][::-1] + drv[h]
        errors[b] = Y[b, T:] - buf[q1:]
        kept[b] = True

    n_failed = B - int(kept.sum())
    if n_failed > 0.05 * B:
        raise BootstrapUnstable(
            f"{n_failed} of {B} bootstrap replicates failed to refit"
        )

    lower = np.empty(H)
    upper = np.empty(H)
    surviving = errors[kept]
    for h in range(H):
        vals = np.sort(surviving[:, h])
        lower[h] = point[h] + _empirical_quantile(vals, alpha / 2.0, cfg.quantile_rule)
        upper[h] = point[h] + _empirical_quantile(vals, 1.0 - alpha / 2.0,
                                                  cfg.quantile_rule)
    return IntervalResult(lower=lower, upper=upper, alpha=alpha, kind="boot")


def efficiency_gain(
    sigma_tt: float, Sigma_ts: np.ndarray, Sigma_ss: np.ndarray
) -> float:
    """Prediction-error variance ratio without vs with the surrogate.

    sigma_tt / (sigma_tt - Sigma_ts Sigma_ss^{-1} Sigma_st); always >= 1 for
    a jointly positive-definite error covariance.
    """
    Sigma_ts = np.atleast_1d(np.asarray(Sigma_ts, dtype=float))
    Sigma_ss = np.atleast_2d(np.asarray(Sigma_ss, dtype=float))
    if sigma_tt <= 0.0:
        raise InvalidCovariance("sigma_tt must be positive")
    if not np.allclose(Sigma_ss, Sigma_ss.T):
        raise InvalidCovariance("surrogate covariance must be symmetric")
    try:
        chol = np.linalg.cholesky(Sigma_ss)
    except np.linalg.LinAlgError as exc:
        raise InvalidCovariance("surrogate covariance is not positive definite") from exc
    w = np.linalg.solve(chol, Sigma_ts)
    explained = float(w @ w)
    denom = sigma_tt - explained
    if denom <= 0.0:
        raise InvalidCovariance(
            "joint covariance is not positive definite "
            f"(explained {explained:.6g} >= sigma_tt {sigma_tt:.6g})"
        )
    return sigma_tt / denom
