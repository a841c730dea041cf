"""Monthly target panels, surrogate panels, and data-preparation utilities.

The target series is observed once per month together with macro covariates
``z`` and embedding covariates ``x``; the surrogate series is a K-vector per
month obtained by averaging a daily index over K within-month day blocks
(K=3: days 1-10, 11-20, 21-end). All containers are immutable after
construction and safe for concurrent reads.
"""

from __future__ import annotations

import calendar
import csv
import datetime as _dt
import functools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateSeries,
    InvalidData,
    MissingPeriod,
    PanelMismatch,
)

__all__ = [
    "MonthlyPanel",
    "SurrogatePanel",
    "DailyIndex",
    "StandardizedSeries",
    "standardize_cpi",
    "standardize_z",
    "aggregate_daily",
    "month_range",
    "check_aligned",
    "read_monthly_csv",
    "read_surrogate_csv",
    "read_daily_csv",
    "write_surrogate_csv",
]


def _parse_month(label: str) -> int:
    """Month label 'YYYY-MM' -> month ordinal (year*12 + month-1)."""
    try:
        y, m = label.split("-")
        year, month = int(y), int(m)
    except ValueError as exc:
        raise InvalidData(f"bad month label {label!r}, expected YYYY-MM") from exc
    if not 1 <= month <= 12:
        raise InvalidData(f"bad month label {label!r}, month out of range")
    return year * 12 + (month - 1)


def _format_month(ordinal: int) -> str:
    return f"{ordinal // 12:04d}-{ordinal % 12 + 1:02d}"


@functools.lru_cache(maxsize=64)
def month_range(start: str, n: int) -> tuple[str, ...]:
    """n consecutive month labels beginning at ``start`` ('YYYY-MM')."""
    first = _parse_month(start)
    return tuple(_format_month(first + i) for i in range(n))


# Simulation pipelines construct panels with identical label tuples thousands
# of times; caching makes revalidation O(1). Failures are never cached.
@functools.lru_cache(maxsize=256)
def _check_consecutive(times: tuple[str, ...]) -> None:
    ordinals = [_parse_month(t) for t in times]
    for prev, cur in zip(ordinals, ordinals[1:]):
        if cur != prev + 1:
            raise InvalidData(
                f"month labels must be consecutive; gap between "
                f"{_format_month(prev)} and {_format_month(cur)}"
            )


def _require_finite(name: str, arr: np.ndarray) -> None:
    if not np.all(np.isfinite(arr)):
        raise InvalidData(f"{name} contains NaN or Inf")


@dataclass(frozen=True)
class MonthlyPanel:
    """Monthly target series with exogenous covariates.

    times: T consecutive month labels ('YYYY-MM').
    y:     target value per month, shape (T,).
    z:     macro covariates, shape (T, d); d may be 0.
    x:     embedding covariates, shape (T, p); p may be 0.
    """

    times: tuple[str, ...]
    y: np.ndarray
    z: np.ndarray
    x: np.ndarray

    def __post_init__(self):
        T = len(self.times)
        if T < 1:
            raise InvalidData("panel must contain at least one month")
        _check_consecutive(self.times)
        y = np.asarray(self.y, dtype=float)
        z = np.asarray(self.z, dtype=float)
        x = np.asarray(self.x, dtype=float)
        if z.ndim == 1:
            z = z.reshape(T, -1) if z.size else np.zeros((T, 0))
        if x.ndim == 1:
            x = x.reshape(T, -1) if x.size else np.zeros((T, 0))
        if y.shape != (T,):
            raise InvalidData(f"y must have shape ({T},), got {y.shape}")
        if z.shape[0] != T or x.shape[0] != T:
            raise InvalidData("z and x must have one row per month")
        for name, arr in (("y", y), ("z", z), ("x", x)):
            _require_finite(name, arr)
        for name, arr in (("y", y), ("z", z), ("x", x)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def T(self) -> int:
        return len(self.times)

    @property
    def d(self) -> int:
        return self.z.shape[1]

    @property
    def p(self) -> int:
        return self.x.shape[1]

    def slice(self, start: int, stop: int) -> "MonthlyPanel":
        return MonthlyPanel(
            self.times[start:stop], self.y[start:stop],
            self.z[start:stop], self.x[start:stop],
        )


@dataclass(frozen=True)
class SurrogatePanel:
    """K surrogate observations per month, aligned with a MonthlyPanel.

    ys: shape (T, K); row t holds the per-block averages for month t.
    """

    times: tuple[str, ...]
    ys: np.ndarray
    K: int = field(default=0)  # 0 -> inferred from ys

    def __post_init__(self):
        T = len(self.times)
        if T < 1:
            raise InvalidData("surrogate panel must contain at least one month")
        _check_consecutive(self.times)
        ys = np.asarray(self.ys, dtype=float)
        if ys.ndim != 2 or ys.shape[0] != T:
            raise InvalidData(f"ys must be a (T, K) matrix with T={T}, got {ys.shape}")
        K = self.K or ys.shape[1]
        if K < 1 or ys.shape[1] != K:
            raise InvalidData(f"K={K} inconsistent with ys shape {ys.shape}")
        _require_finite("ys", ys)
        ys.setflags(write=False)
        object.__setattr__(self, "ys", ys)
        object.__setattr__(self, "K", K)

    @property
    def T(self) -> int:
        return len(self.times)

    def slice(self, start: int, stop: int) -> "SurrogatePanel":
        return SurrogatePanel(self.times[start:stop], self.ys[start:stop])


def check_aligned(mp: MonthlyPanel, sp: SurrogatePanel) -> None:
    """Reject a target/surrogate pairing whose month labels differ."""
    if mp.times != sp.times:
        raise PanelMismatch(
            f"monthly panel covers {mp.times[0]}..{mp.times[-1]} (T={mp.T}) but "
            f"surrogate covers {sp.times[0]}..{sp.times[-1]} (T={sp.T})"
        )


@dataclass(frozen=True)
class DailyIndex:
    """Daily sentiment/index observations used to build a surrogate panel."""

    dates: tuple[_dt.date, ...]
    scores: np.ndarray

    def __post_init__(self):
        scores = np.asarray(self.scores, dtype=float)
        if len(self.dates) != scores.shape[0]:
            raise InvalidData("dates and scores must have equal length")
        if scores.ndim != 1 or scores.size < 1:
            raise InvalidData("scores must be a non-empty vector")
        _require_finite("scores", scores)
        for prev, cur in zip(self.dates, self.dates[1:]):
            if cur <= prev:
                raise InvalidData(f"dates must be strictly increasing ({prev} !< {cur})")
        scores.setflags(write=False)
        object.__setattr__(self, "scores", scores)


@dataclass(frozen=True)
class StandardizedSeries:
    """A standardized series together with the transform that produced it.

    values = (raw - offset) / scale, so raw = values * scale + offset.
    """

    values: np.ndarray
    offset: float
    scale: float

    def inverse(self, values: np.ndarray | None = None) -> np.ndarray:
        v = self.values if values is None else np.asarray(values, dtype=float)
        return v * self.scale + self.offset


def _window_sd(centered: np.ndarray, train_size: int | None) -> float:
    window = centered if train_size is None else centered[:train_size]
    if window.size < 2:
        raise DegenerateSeries("need at least 2 observations to estimate a spread")
    sd = float(np.std(window, ddof=1))
    if sd == 0.0 or not math.isfinite(sd):
        raise DegenerateSeries("series has zero sample variance; cannot standardize")
    return sd


def standardize_cpi(
    raw: np.ndarray, base: float = 100.0, train_size: int | None = None
) -> StandardizedSeries:
    """Center a raw index at ``base`` and divide by the sample sd (ddof=1).

    ``train_size`` restricts the sd estimate to the first ``train_size``
    observations so out-of-sample pipelines avoid lookahead; by default the
    whole provided series is the estimation window.
    """
    raw = np.asarray(raw, dtype=float)
    _require_finite("series", raw)
    centered = raw - base
    sd = _window_sd(centered, train_size)
    return StandardizedSeries(values=centered / sd, offset=float(base), scale=sd)


def standardize_z(raw: np.ndarray, train_size: int | None = None) -> StandardizedSeries:
    """Standardize a covariate by its (training-window) mean and sd."""
    raw = np.asarray(raw, dtype=float)
    _require_finite("series", raw)
    window = raw if train_size is None else raw[:train_size]
    if window.size < 2:
        raise DegenerateSeries("need at least 2 observations to estimate a spread")
    mean = float(np.mean(window))
    sd = _window_sd(raw - mean, train_size)
    return StandardizedSeries(values=(raw - mean) / sd, offset=mean, scale=sd)


def _month_blocks(n_days: int, K: int) -> list[range]:
    """Day-of-month blocks. K=3 uses the fixed split 1-10 / 11-20 / 21-end;
    other K split the month into K near-equal contiguous runs."""
    if K == 3:
        bounds = [0, 10, 20, n_days]
    else:
        bounds = [round(k * n_days / K) for k in range(K + 1)]
    return [range(bounds[k] + 1, bounds[k + 1] + 1) for k in range(K)]


def aggregate_daily(idx: DailyIndex, K: int = 3) -> SurrogatePanel:
    """Average a daily index into K per-month blocks.

    Every month between the first and last observed date must have at least
    one observation in each of its K blocks; an empty block raises
    MissingPeriod naming the month and block.
    """
    if K < 1:
        raise InvalidData("K must be >= 1")
    first = idx.dates[0]
    last = idx.dates[-1]
    start_ord = first.year * 12 + (first.month - 1)
    stop_ord = last.year * 12 + (last.month - 1)
    times = tuple(_format_month(o) for o in range(start_ord, stop_ord + 1))
    T = len(times)

    by_month: dict[int, list[tuple[int, float]]] = {}
    for date, score in zip(idx.dates, idx.scores):
        ordinal = date.year * 12 + (date.month - 1)
        by_month.setdefault(ordinal, []).append((date.day, float(score)))

    ys = np.empty((T, K))
    for t, ordinal in enumerate(range(start_ord, stop_ord + 1)):
        year, month = ordinal // 12, ordinal % 12 + 1
        n_days = calendar.monthrange(year, month)[1]
        blocks = _month_blocks(n_days, K)
        records = by_month.get(ordinal, [])
        for k, block in enumerate(blocks):
            vals = [s for day, s in records if day in block]
            if not vals:
                raise MissingPeriod(
                    f"no daily observations in {_format_month(ordinal)} "
                    f"block {k + 1} (days {block.start}-{block.stop - 1})"
                )
            ys[t, k] = float(np.mean(vals))
    return SurrogatePanel(times=times, ys=ys)


# ---------------------------------------------------------------------------
# CSV ingestion. Numeric fields must be plain decimals; NaN/Inf are rejected.
# ---------------------------------------------------------------------------

def _parse_float(text: str, where: str) -> float:
    try:
        value = float(text)
    except ValueError as exc:
        raise InvalidData(f"{where}: {text!r} is not a number") from exc
    if not math.isfinite(value):
        raise InvalidData(f"{where}: non-finite value {text!r}")
    return value


def _read_rows(path: str) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise InvalidData(f"{path}: empty file") from None
        rows = [row for row in reader if row]
    return [h.strip() for h in header], rows


def _numbered_columns(header: list[str], prefix: str) -> list[int]:
    cols = [(int(name[len(prefix):]), i) for i, name in enumerate(header)
            if name.startswith(prefix) and name[len(prefix):].isdigit()]
    cols.sort()
    if [c for c, _ in cols] != list(range(1, len(cols) + 1)):
        raise InvalidData(f"columns {prefix}1..{prefix}N must be complete and ordered")
    return [i for _, i in cols]


def read_monthly_csv(path: str) -> MonthlyPanel:
    """Read ``month,y,z_1..z_d,x_1..x_p`` (month as YYYY-MM)."""
    header, rows = _read_rows(path)
    if header[:2] != ["month", "y"]:
        raise InvalidData(f"{path}: header must start with 'month,y'")
    z_cols = _numbered_columns(header, "z_")
    x_cols = _numbered_columns(header, "x_")
    times, y, z, x = [], [], [], []
    for ln, row in enumerate(rows, start=2):
        if len(row) != len(header):
            raise InvalidData(f"{path}:{ln}: expected {len(header)} fields")
        times.append(row[0].strip())
        y.append(_parse_float(row[1], f"{path}:{ln} y"))
        z.append([_parse_float(row[i], f"{path}:{ln} {header[i]}") for i in z_cols])
        x.append([_parse_float(row[i], f"{path}:{ln} {header[i]}") for i in x_cols])
    T = len(times)
    return MonthlyPanel(
        times=tuple(times),
        y=np.array(y),
        z=np.array(z).reshape(T, len(z_cols)),
        x=np.array(x).reshape(T, len(x_cols)),
    )


def read_surrogate_csv(path: str) -> SurrogatePanel:
    """Read ``month,ys_1..ys_K`` (month as YYYY-MM)."""
    header, rows = _read_rows(path)
    if header[:1] != ["month"]:
        raise InvalidData(f"{path}: header must start with 'month'")
    ys_cols = _numbered_columns(header, "ys_")
    if not ys_cols:
        raise InvalidData(f"{path}: no ys_1..ys_K columns found")
    times, ys = [], []
    for ln, row in enumerate(rows, start=2):
        if len(row) != len(header):
            raise InvalidData(f"{path}:{ln}: expected {len(header)} fields")
        times.append(row[0].strip())
        ys.append([_parse_float(row[i], f"{path}:{ln} {header[i]}") for i in ys_cols])
    return SurrogatePanel(times=tuple(times), ys=np.array(ys))


def read_daily_csv(path: str) -> DailyIndex:
    """Read ``date,score`` (date as YYYY-MM-DD)."""
    header, rows = _read_rows(path)
    if header != ["date", "score"]:
        raise InvalidData(f"{path}: header must be 'date,score'")
    dates, scores = [], []
    for ln, row in enumerate(rows, start=2):
        if len(row) != 2:
            raise InvalidData(f"{path}:{ln}: expected 2 fields")
        try:
            dates.append(_dt.date.fromisoformat(row[0].strip()))
        except ValueError as exc:
            raise InvalidData(f"{path}:{ln}: bad date {row[0]!r}") from exc
        scores.append(_parse_float(row[1], f"{path}:{ln} score"))
    return DailyIndex(dates=tuple(dates), scores=np.array(scores))


def write_surrogate_csv(path: str, sp: SurrogatePanel) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["month"] + [f"ys_{k + 1}" for k in range(sp.K)])
        for t, label in enumerate(sp.times):
            writer.writerow([label] + [repr(float(v)) for v in sp.ys[t]])
