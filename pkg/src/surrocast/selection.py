"""Lag-order and embedding-feature selection with a corrected AIC.

Feature search is a correlation pursuit: candidate columns are ranked once by
absolute correlation with the baseline autoregression residuals, then added
greedily while the corrected AIC keeps strictly decreasing. The criterion's
penalty grows slowly with the feature count, so at the default threshold weak
features are accepted on noisy data; raise ``min_decrease`` for stricter
selection.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import InsufficientSample, InvalidData, PenaltyUndefined, RankDeficient
from .estimation import fit_arx, ols_solve

__all__ = [
    "corrected_aic",
    "select_ar_order",
    "SelectionResult",
    "correlation_pursuit",
]

logger = logging.getLogger(__name__)


def corrected_aic(residuals: np.ndarray, m: int) -> float:
    """Small-sample information criterion for a model with m added features.

    T1 log(RSS/T1 + 1) + 2 (m+1)(m+2) / (T1 - m - 2), where T1 is the number
    of residuals. The +1 inside the logarithm keeps the criterion finite for
    residual-free fits.
    """
    residuals = np.asarray(residuals, dtype=float)
    t1 = residuals.shape[0]
    if t1 <= m + 2:
        raise PenaltyUndefined(f"penalty needs T1 > m + 2 (T1={t1}, m={m})")
    rss = float(np.sum(residuals**2))
    return t1 * np.log(rss / t1 + 1.0) + 2.0 * (m + 1) * (m + 2) / (t1 - m - 2)


def select_ar_order(y: np.ndarray, q_max: int) -> int:
    """Smallest corrected-AIC lag order among AR(1)..AR(q_max).

    All candidate orders are scored on the common sample that leaves room
    for q_max lags, so the criterion values are comparable; ties break
    toward the smaller order.
    """
    y = np.asarray(y, dtype=float)
    if q_max < 1:
        raise InvalidData("q_max must be >= 1")
    T = y.shape[0]
    if T <= q_max + 2:
        raise InsufficientSample(f"need T > q_max + 2 (T={T}, q_max={q_max})")
    response = y[q_max:]
    lags = np.column_stack([y[q_max - l: T - l] for l in range(1, q_max + 1)])
    best_q, best_aic = 1, np.inf
    for q in range(1, q_max + 1):
        design = lags[:, :q]
        coef = ols_solve(design, response)
        aic = corrected_aic(response - design @ coef, q)
        if aic < best_aic:
            best_q, best_aic = q, aic
    return best_q


@dataclass(frozen=True)
class SelectionResult:
    """Outcome of a correlation-pursuit run.

    aic_path[0] is the criterion of the lag-only baseline; each further entry
    is the criterion after one accepted feature. rejected_aic is the value of
    the first refused step (None when every candidate was accepted), and
    skipped lists columns dropped for making the design singular.
    """

    chosen: tuple[int, ...]
    aic_path: tuple[float, ...]
    ranking: tuple[int, ...]
    ar_order: int
    rejected_aic: float | None = None
    skipped: tuple[int, ...] = ()


def _abs_correlations(cols: np.ndarray, target: np.ndarray) -> np.ndarray:
    centered = cols - cols.mean(axis=0)
    tc = target - target.mean()
    denom = np.sqrt(np.sum(centered**2, axis=0) * np.sum(tc**2))
    with np.errstate(invalid="ignore", divide="ignore"):
        corr = np.abs(centered.T @ tc) / denom
    corr[~np.isfinite(corr)] = 0.0
    return corr


def correlation_pursuit(
    y: np.ndarray,
    x: np.ndarray,
    q_max: int,
    min_decrease: float = 1e-8,
    rerank_each_step: bool = False,
) -> SelectionResult:
    """Greedy feature selection against autoregression residuals.

    Pass training rows only: every correlation and refit sees nothing beyond
    the provided sample. A candidate that makes the design rank deficient is
    skipped and the next-ranked one is tried.
    """
    y = np.asarray(y, dtype=float)
    x = np.asarray(x, dtype=float)
    if x.ndim != 2 or x.shape[0] != y.shape[0]:
        raise InvalidData("x must be a (T, p) matrix aligned with y")
    if x.shape[1] < 1:
        raise InvalidData("need at least one candidate column")

    q = select_ar_order(y, q_max)
    base = fit_arx(y, q)
    x_trim = x[q:]
    residuals = base.residuals
    ranking = tuple(int(j) for j in np.argsort(-_abs_correlations(x_trim, residuals)))

    chosen: list[int] = []
    skipped: list[int] = []
    aic_path = [corrected_aic(residuals, 0)]
    rejected_aic = None
    queue = list(ranking)
    while queue:
        if rerank_each_step:
            remaining = np.array(queue, dtype=int)
            order = np.argsort(-_abs_correlations(x_trim[:, remaining], residuals))
            queue = [int(remaining[i]) for i in order]
        j = queue.pop(0)
        try:
            fit = fit_arx(y, q, x=x[:, chosen + [j]])
        except RankDeficient:
            logger.info("column %d skipped: design became rank deficient", j)
            skipped.append(j)
            continue
        aic = corrected_aic(fit.residuals, len(chosen) + 1)
        if aic < aic_path[-1] - min_decrease:
            chosen.append(j)
            aic_path.append(aic)
            residuals = fit.residuals
        else:
            rejected_aic = aic
            break
    return SelectionResult(
        chosen=tuple(chosen),
        aic_path=tuple(aic_path),
        ranking=ranking,
        ar_order=q,
        rejected_aic=rejected_aic,
        skipped=tuple(skipped),
    )
