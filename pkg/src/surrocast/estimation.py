"""Two-step least-squares estimation of the surrogate and joint models.

Step one fits the surrogate vector autoregression with exogenous features

    ys_t = sum_l A_l ys_{t-l} + B x_t + eps_t,        t = q2+1..T,

step two removes the estimated autoregressive part from the surrogate,
d_t = ys_t - sum_l A_hat_l ys_{t-l}, and regresses the target on its own
lags, the covariates, and d_t:

    y_t = sum_l alpha_l y_{t-l} + z_t'theta + x_t'delta + gamma'd_t + e_t,

over t = q1+1..T. Both solves share one orthogonal-factorization kernel.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InsufficientSample, InvalidData, PanelMismatch, RankDeficient
from .panels import MonthlyPanel, SurrogatePanel, check_aligned

__all__ = [
    "ols_solve",
    "companion_matrix",
    "SurrogateFit",
    "JointFit",
    "ArxFit",
    "fit_surrogate",
    "d_residual",
    "d_residual_matrix",
    "fit_joint",
    "fit_joint_step2",
    "fit_arx",
    "residual_pairs",
    "joint_fit_to_dict",
    "joint_fit_from_dict",
]

# Relative singular-value cutoff below which a design is treated as singular.
RANK_TOL = 1e-10


def ols_solve(design: np.ndarray, response: np.ndarray) -> np.ndarray:
    """Least-squares coefficients minimizing ||response - design @ coef||_F.

    Solved through an orthogonal factorization (never the normal equations).
    Raises RankDeficient, listing the near-collinear columns, when the
    smallest singular value is below RANK_TOL relative to the largest.
    """
    design = np.asarray(design, dtype=float)
    response = np.asarray(response, dtype=float)
    n, m = design.shape
    if n < m:
        raise InsufficientSample(f"{n} rows cannot identify {m} coefficients")
    coef, _, rank, sv = np.linalg.lstsq(design, response, rcond=RANK_TOL)
    if rank < m or sv[0] <= 0.0 or sv[-1] < RANK_TOL * sv[0]:
        raise RankDeficient(
            f"design is rank deficient (rank {rank} of {m})",
            columns=_collinear_columns(design),
        )
    return coef


def _collinear_columns(design: np.ndarray) -> tuple[int, ...]:
    """Columns with large loadings on the near-null singular directions."""
    _, sv, vt = np.linalg.svd(design, full_matrices=False)
    cutoff = RANK_TOL * sv[0] if sv[0] > 0 else np.inf
    cols: set[int] = set()
    for i, s in enumerate(sv):
        if s < cutoff:
            load = np.abs(vt[i])
            cols.update(np.nonzero(load > 0.1 * load.max())[0].tolist())
    return tuple(sorted(cols))


def companion_matrix(alpha: np.ndarray) -> np.ndarray:
    """q x q companion form: first row alpha, identity subdiagonal."""
    alpha = np.atleast_1d(np.asarray(alpha, dtype=float))
    q = alpha.shape[0]
    A = np.zeros((q, q))
    A[0] = alpha
    if q > 1:
        A[np.arange(1, q), np.arange(q - 1)] = 1.0
    return A


@dataclass(frozen=True)
class SurrogateFit:
    """Estimated surrogate VARX coefficients and residuals.

    A_hat:     q2 lag matrices, shape (q2, K, K).
    B_hat:     exogenous coefficients, shape (K, p).
    residuals: shape (T - q2, K), row t is ys_t minus the fitted value.
    """

    A_hat: np.ndarray
    B_hat: np.ndarray
    residuals: np.ndarray
    q2: int

    @property
    def K(self) -> int:
        return self.A_hat.shape[1]


@dataclass(frozen=True)
class JointFit:
    """Estimated joint model: target lags, covariates, surrogate innovations.

    sigma_e_hat is the residual standard deviation with denominator T - q1;
    companion is the q1 x q1 matrix whose powers weight multi-step errors;
    d_hat holds the surrogate innovation regressor for t = q2+1..T (only the
    last T - q1 rows enter the fit).
    """

    alpha_hat: np.ndarray
    theta_hat: np.ndarray
    delta_hat: np.ndarray
    gamma_hat: np.ndarray
    sigma_e_hat: float
    residuals: np.ndarray
    companion: np.ndarray
    d_hat: np.ndarray
    q1: int
    q2: int


@dataclass(frozen=True)
class ArxFit:
    """Plain ARX fit (no surrogate term), used by the benchmark models."""

    alpha_hat: np.ndarray
    theta_hat: np.ndarray
    beta_hat: np.ndarray
    sigma_e_hat: float
    residuals: np.ndarray
    companion: np.ndarray
    q1: int


def _lag_block(series: np.ndarray, q: int, start: int) -> np.ndarray:
    """Rows [series[t-1], ..., series[t-q]] for t = start..len(series)-1."""
    cols = [series[start - l: len(series) - l] for l in range(1, q + 1)]
    if series.ndim == 1:
        return np.column_stack(cols)
    return np.hstack(cols)


def fit_surrogate(sp: SurrogatePanel, x: np.ndarray, q2: int) -> SurrogateFit:
    """Row-wise least squares for the surrogate VARX over t = q2+1..T."""
    if q2 < 1:
        raise InvalidData("q2 must be >= 1")
    ys = sp.ys
    T, K = ys.shape
    x = np.asarray(x, dtype=float).reshape(T, -1)
    p = x.shape[1]
    n_coef = K * q2 + p
    if T - q2 < n_coef or T <= q2:
        raise InsufficientSample(
            f"surrogate fit needs T - q2 > K*q2 + p rows "
            f"(T={T}, q2={q2}, K={K}, p={p})"
        )
    design = np.hstack([_lag_block(ys, q2, q2), x[q2:]])
    response = ys[q2:]
    coef = ols_solve(design, response)
    A_hat = np.stack([coef[l * K:(l + 1) * K].T for l in range(q2)])
    B_hat = coef[K * q2:].T.reshape(K, p)
    residuals = response - design @ coef
    return SurrogateFit(A_hat=A_hat, B_hat=B_hat, residuals=residuals, q2=q2)


def d_residual_matrix(ys: np.ndarray, A_hat: np.ndarray, q2: int) -> np.ndarray:
    """Surrogate innovations ys_t - sum_l A_hat_l ys_{t-l} for t = q2+1..T.

    The exogenous part B x_t is deliberately not removed: the regressor feeds
    the joint model exactly as the lag-adjusted surrogate value.
    """
    out = ys[q2:].copy()
    for l in range(1, q2 + 1):
        out -= ys[q2 - l: len(ys) - l] @ A_hat[l - 1].T
    return out


def d_residual(sp: SurrogatePanel, fit: SurrogateFit, t: int) -> np.ndarray:
    """Innovation vector for 1-based month index t (requires t > q2)."""
    if t <= fit.q2:
        raise IndexError(f"t={t} has no {fit.q2} preceding surrogate lags")
    if t > sp.T:
        raise IndexError(f"t={t} beyond panel length {sp.T}")
    value = sp.ys[t - 1].copy()
    for l in range(1, fit.q2 + 1):
        value -= fit.A_hat[l - 1] @ sp.ys[t - 1 - l]
    return value


def _joint_design(
    y: np.ndarray, z: np.ndarray, x: np.ndarray, d_rows: np.ndarray, q1: int
) -> np.ndarray:
    return np.hstack([_lag_block(y, q1, q1), z[q1:], x[q1:], d_rows])


def fit_joint_step2(
    mp: MonthlyPanel, sp: SurrogatePanel, sf: SurrogateFit, q1: int
) -> JointFit:
    """Second estimation step given an already-fitted surrogate model.

    Useful when the surrogate design differs from the target covariates
    (withheld or augmented columns); fit_joint covers the standard case.
    """
    check_aligned(mp, sp)
    q2 = sf.q2
    if q1 < 1:
        raise InvalidData("q1 must be >= 1")
    if q2 > q1:
        raise InvalidData(f"q2={q2} must not exceed q1={q1}")
    T, K, d, p = mp.T, sf.K, mp.d, mp.p
    if T - q1 < q1 + d + p + K:
        raise InsufficientSample(
            f"joint fit needs T - q1 >= q1 + d + p + K rows "
            f"(T={T}, q1={q1}, d={d}, p={p}, K={K})"
        )
    d_hat = d_residual_matrix(sp.ys, sf.A_hat, q2)
    design = _joint_design(mp.y, mp.z, mp.x, d_hat[q1 - q2:], q1)
    response = mp.y[q1:]
    coef = ols_solve(design, response)
    residuals = response - design @ coef
    sigma_e = float(np.sqrt(np.sum(residuals**2) / (T - q1)))
    alpha = coef[:q1]
    return JointFit(
        alpha_hat=alpha,
        theta_hat=coef[q1:q1 + d],
        delta_hat=coef[q1 + d:q1 + d + p],
        gamma_hat=coef[q1 + d + p:],
        sigma_e_hat=sigma_e,
        residuals=residuals,
        companion=companion_matrix(alpha),
        d_hat=d_hat,
        q1=q1,
        q2=q2,
    )


def fit_joint(
    mp: MonthlyPanel, sp: SurrogatePanel, q1: int, q2: int
) -> tuple[JointFit, SurrogateFit]:
    """Two-step fit: surrogate VARX first, then the surrogate-augmented ARX."""
    check_aligned(mp, sp)
    sf = fit_surrogate(sp, mp.x, q2)
    return fit_joint_step2(mp, sp, sf, q1), sf


def fit_arx(
    y: np.ndarray,
    q1: int,
    z: np.ndarray | None = None,
    x: np.ndarray | None = None,
) -> ArxFit:
    """Least-squares ARX fit on the target alone (benchmark models)."""
    y = np.asarray(y, dtype=float)
    T = y.shape[0]
    z = np.zeros((T, 0)) if z is None else np.asarray(z, dtype=float).reshape(T, -1)
    x = np.zeros((T, 0)) if x is None else np.asarray(x, dtype=float).reshape(T, -1)
    if q1 < 1:
        raise InvalidData("q1 must be >= 1")
    d, p = z.shape[1], x.shape[1]
    if T - q1 < q1 + d + p:
        raise InsufficientSample(
            f"ARX fit needs T - q1 >= q1 + d + p rows (T={T}, q1={q1})"
        )
    design = np.hstack([_lag_block(y, q1, q1), z[q1:], x[q1:]])
    response = y[q1:]
    coef = ols_solve(design, response)
    residuals = response - design @ coef
    sigma_e = float(np.sqrt(np.sum(residuals**2) / (T - q1)))
    alpha = coef[:q1]
    return ArxFit(
        alpha_hat=alpha,
        theta_hat=coef[q1:q1 + d],
        beta_hat=coef[q1 + d:],
        sigma_e_hat=sigma_e,
        residuals=residuals,
        companion=companion_matrix(alpha),
        q1=q1,
    )


def residual_pairs(jf: JointFit, sf: SurrogateFit) -> np.ndarray:
    """Aligned residual matrix, one row per month t = q1+1..T.

    Column 0 is the target-equation residual (the joint-fit residual with the
    surrogate contribution added back, i.e. y_t minus lags, z, and x terms);
    columns 1..K are the surrogate-model residuals for the same month. Their
    joint scatter exposes the error correlation the two-step fit exploits.
    Suitable for CSV export and density plots.
    """
    n_joint = jf.residuals.shape[0]
    n_sur = sf.residuals.shape[0]
    if n_joint + jf.q1 != n_sur + sf.q2:
        raise PanelMismatch(
            "joint and surrogate fits do not come from panels of equal length"
        )
    offset = jf.q1 - sf.q2
    target_resid = jf.residuals + jf.d_hat[offset:] @ jf.gamma_hat
    return np.column_stack([target_resid, sf.residuals[offset:]])


# ---------------------------------------------------------------------------
# Serialization: a versioned flat JSON document for fit -> forecast pipelines.
# ---------------------------------------------------------------------------

FIT_SCHEMA = "surrocast-fit/1"


def joint_fit_to_dict(jf: JointFit, sf: SurrogateFit) -> dict:
    return {
        "schema": FIT_SCHEMA,
        "q1": jf.q1,
        "q2": jf.q2,
        "alpha_hat": jf.alpha_hat.tolist(),
        "theta_hat": jf.theta_hat.tolist(),
        "delta_hat": jf.delta_hat.tolist(),
        "gamma_hat": jf.gamma_hat.tolist(),
        "sigma_e_hat": jf.sigma_e_hat,
        "residuals": jf.residuals.tolist(),
        "d_hat": jf.d_hat.tolist(),
        "A_hat": sf.A_hat.tolist(),
        "B_hat": sf.B_hat.tolist(),
        "surrogate_residuals": sf.residuals.tolist(),
    }


def joint_fit_from_dict(doc: dict) -> tuple[JointFit, SurrogateFit]:
    schema = doc.get("schema")
    if schema != FIT_SCHEMA:
        raise InvalidData(f"unsupported fit document schema {schema!r}")
    alpha = np.array(doc["alpha_hat"], dtype=float)
    jf = JointFit(
        alpha_hat=alpha,
        theta_hat=np.array(doc["theta_hat"], dtype=float),
        delta_hat=np.array(doc["delta_hat"], dtype=float),
        gamma_hat=np.array(doc["gamma_hat"], dtype=float),
        sigma_e_hat=float(doc["sigma_e_hat"]),
        residuals=np.array(doc["residuals"], dtype=float),
        companion=companion_matrix(alpha),
        d_hat=np.array(doc["d_hat"], dtype=float),
        q1=int(doc["q1"]),
        q2=int(doc["q2"]),
    )
    A_hat = np.array(doc["A_hat"], dtype=float)
    sf = SurrogateFit(
        A_hat=A_hat,
        B_hat=np.array(doc["B_hat"], dtype=float),
        residuals=np.array(doc["surrogate_residuals"], dtype=float),
        q2=int(doc["q2"]),
    )
    return jf, sf
