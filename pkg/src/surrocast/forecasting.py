"""Multi-step point forecasts for the joint model and the benchmark models.

All autoregressive forecasts use the rolling recursion: the h-step value is
computed from earlier forecasts, with observed history substituted for every
index at or before the forecast origin.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import InsufficientSample, InvalidData, MissingExogenous
from .estimation import ArxFit, JointFit, SurrogateFit, d_residual_matrix
from .panels import MonthlyPanel, SurrogatePanel

__all__ = [
    "Method",
    "FutureExogenous",
    "ForecastResult",
    "forecast_joint",
    "forecast_arx",
    "forecast_rw",
    "forecast_ave",
]


class Method(str, enum.Enum):
    JOINT = "JOINT"          # surrogate-augmented ARX
    AR = "AR"                # pure autoregression
    ARX = "ARX"              # autoregression with macro covariates
    TEXT_ARX = "TEXT_ARX"    # autoregression with embedding covariates
    RW = "RW"                # random walk (last observation)
    AVE = "AVE"              # historical average of the last h observations


@dataclass(frozen=True)
class FutureExogenous:
    """Covariate paths for months T+1..T+H.

    ys_future is only consulted by the joint model; pass an empty (H, 0)
    array when forecasting covariate-free benchmarks.
    """

    z_future: np.ndarray
    x_future: np.ndarray
    ys_future: np.ndarray

    def __post_init__(self):
        for name in ("z_future", "x_future", "ys_future"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.ndim == 1:
                arr = arr.reshape(len(arr), -1) if arr.size else arr.reshape(0, 0)
            object.__setattr__(self, name, arr)
        H = self.z_future.shape[0] or self.x_future.shape[0] or self.ys_future.shape[0]
        for name in ("z_future", "x_future", "ys_future"):
            arr = getattr(self, name)
            if arr.shape[0] not in (0, H):
                raise InvalidData("future covariate blocks must have equal row counts")

    @property
    def horizon(self) -> int:
        return max(self.z_future.shape[0], self.x_future.shape[0],
                   self.ys_future.shape[0])


@dataclass(frozen=True)
class ForecastResult:
    method: Method
    point: np.ndarray
    horizon: int

    def __post_init__(self):
        point = np.asarray(self.point, dtype=float)
        if point.shape != (self.horizon,) or not np.all(np.isfinite(point)):
            raise InvalidData("forecast must be a finite vector of length H")
        object.__setattr__(self, "point", point)


def _future_block(arr: np.ndarray, H: int, width: int, name: str) -> np.ndarray:
    if width == 0:
        return np.zeros((H, 0))
    if arr.shape[0] < H or arr.shape[1] != width:
        raise MissingExogenous(
            f"{name}: need {H} rows x {width} columns, got {arr.shape}"
        )
    return arr[:H]


def _ar_recursion(
    alpha: np.ndarray, history: np.ndarray, driver: np.ndarray
) -> np.ndarray:
    """Roll y_{T+h} = sum_l alpha_l y_{T+h-l} + driver_h forward H steps."""
    q1 = len(alpha)
    H = len(driver)
    buf = np.concatenate([history[-q1:], np.zeros(H)]) if q1 else np.zeros(H)
    for h in range(H):
        t = q1 + h
        buf[t] = alpha @ buf[t - q1:t][::-1] + driver[h]
    return buf[q1:]


def forecast_joint(
    jf: JointFit,
    sf: SurrogateFit,
    mp: MonthlyPanel,
    sp: SurrogatePanel,
    fut: FutureExogenous,
    H: int,
) -> ForecastResult:
    """h-step forecasts from the joint model, h = 1..H.

    Future surrogate observations are reduced to innovations with the lag
    coefficients estimated on history; lags straddling the forecast origin
    are taken from the observed surrogate panel.
    """
    if H < 1:
        raise InvalidData("H must be >= 1")
    d, p, K = len(jf.theta_hat), len(jf.delta_hat), sf.K
    z_fut = _future_block(fut.z_future, H, d, "z_future")
    x_fut = _future_block(fut.x_future, H, p, "x_future")
    ys_fut = _future_block(fut.ys_future, H, K, "ys_future")
    if sp.T < jf.q2:
        raise MissingExogenous(
            f"surrogate history must supply at least q2={jf.q2} months of lags"
        )
    ys_all = np.vstack([sp.ys[-jf.q2:], ys_fut])
    d_fut = d_residual_matrix(ys_all, sf.A_hat, sf.q2)
    driver = z_fut @ jf.theta_hat + x_fut @ jf.delta_hat + d_fut @ jf.gamma_hat
    point = _ar_recursion(jf.alpha_hat, mp.y, driver)
    return ForecastResult(method=Method.JOINT, point=point, horizon=H)


def forecast_arx(
    fit: ArxFit,
    y: np.ndarray,
    fut: FutureExogenous | None,
    H: int,
    method: Method = Method.ARX,
) -> ForecastResult:
    """h-step forecasts from a plain ARX fit (no surrogate term).

    Serves the pure AR benchmark (empty covariates), the macro-covariate
    benchmark, and the embedding-covariate benchmarks alike.
    """
    if H < 1:
        raise InvalidData("H must be >= 1")
    d, p = len(fit.theta_hat), len(fit.beta_hat)
    if fut is None:
        fut = FutureExogenous(np.zeros((H, 0)), np.zeros((H, 0)), np.zeros((H, 0)))
    z_fut = _future_block(fut.z_future, H, d, "z_future")
    x_fut = _future_block(fut.x_future, H, p, "x_future")
    driver = z_fut @ fit.theta_hat + x_fut @ fit.beta_hat
    point = _ar_recursion(fit.alpha_hat, np.asarray(y, dtype=float), driver)
    return ForecastResult(method=method, point=point, horizon=H)


def forecast_rw(y: np.ndarray, H: int) -> ForecastResult:
    """Random walk: every horizon repeats the last observation."""
    y = np.asarray(y, dtype=float)
    if y.size < 1 or H < 1:
        raise InsufficientSample("random walk needs at least one observation")
    return ForecastResult(method=Method.RW, point=np.full(H, y[-1]), horizon=H)


def forecast_ave(y: np.ndarray, H: int) -> ForecastResult:
    """Historical average: the h-step value is the mean of the last h points."""
    y = np.asarray(y, dtype=float)
    if y.size < H:
        raise InsufficientSample(f"historical-average forecast needs T >= H={H}")
    tail = y[::-1][:H]
    point = np.cumsum(tail) / np.arange(1, H + 1)
    return ForecastResult(method=Method.AVE, point=point, horizon=H)
