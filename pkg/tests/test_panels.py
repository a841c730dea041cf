import datetime as dt

import numpy as np
import pytest

from surrocast import (
    DailyIndex,
    DegenerateSeries,
    InvalidData,
    MissingPeriod,
    MonthlyPanel,
    PanelMismatch,
    SurrogatePanel,
    aggregate_daily,
    month_range,
    standardize_cpi,
    standardize_z,
)
from surrocast.panels import check_aligned


# ---------------------------------------------------------------------------
# standardize_cpi / standardize_z
# ---------------------------------------------------------------------------

def test_standardize_cpi_zero_variance_rejected():
    with pytest.raises(DegenerateSeries):
        standardize_cpi(np.array([100.0, 100.0, 100.0]), base=100.0)


def test_standardize_cpi_hand_values():
    # centered = (-1, 1); sample sd (ddof=1) = sqrt(2)
    std = standardize_cpi(np.array([99.0, 101.0]), base=100.0)
    np.testing.assert_allclose(std.values, [-0.7071, 0.7071], atol=5e-5)
    assert std.scale == pytest.approx(np.sqrt(2.0))


def test_standardize_cpi_shift_invariance(rng):
    x = rng.standard_normal(40)
    x -= x.mean()
    std = standardize_cpi(x + 100.0, base=100.0)
    ratio = std.values[x != 0] / x[x != 0]
    np.testing.assert_allclose(ratio, ratio[0])


def test_standardize_z_hand_values():
    std = standardize_z(np.array([1.0, 2.0, 3.0]))
    np.testing.assert_allclose(std.values, [-1.0, 0.0, 1.0], atol=1e-12)
    assert std.offset == pytest.approx(2.0)


def test_standardize_z_constant_rejected():
    with pytest.raises(DegenerateSeries):
        standardize_z(np.full(10, 3.25))


def test_standardize_z_idempotent(rng):
    raw = rng.standard_normal(100)
    once = standardize_z(raw).values
    twice = standardize_z(once).values
    np.testing.assert_allclose(twice, once, atol=1e-12)


def test_standardize_roundtrip(rng):
    raw = 100.0 + rng.standard_normal(60) * 0.7
    std = standardize_cpi(raw, base=100.0)
    np.testing.assert_allclose(std.inverse(), raw, rtol=1e-10)
    stdz = standardize_z(raw)
    np.testing.assert_allclose(stdz.inverse(), raw, rtol=1e-10)


def test_standardize_train_window_only():
    raw = np.array([99.0, 101.0, 150.0, 50.0])
    std = standardize_cpi(raw, base=100.0, train_size=2)
    assert std.scale == pytest.approx(np.sqrt(2.0))  # holdout rows ignored


# ---------------------------------------------------------------------------
# aggregate_daily
# ---------------------------------------------------------------------------

def _daily(year, month, scores_by_day):
    dates = tuple(dt.date(year, month, d) for d in sorted(scores_by_day))
    scores = np.array([scores_by_day[d] for d in sorted(scores_by_day)])
    return DailyIndex(dates=dates, scores=scores)


def test_aggregate_constant_month():
    idx = _daily(2021, 4, {d: 0.5 for d in range(1, 31)})
    sp = aggregate_daily(idx, K=3)
    np.testing.assert_allclose(sp.ys, [[0.5, 0.5, 0.5]])
    assert sp.times == ("2021-04",)


def test_aggregate_linear_scores_block_means():
    # 31-day month, score = day/31: block means 5.5/31, 15.5/31, 26/31
    idx = _daily(2021, 1, {d: d / 31 for d in range(1, 32)})
    sp = aggregate_daily(idx, K=3)
    np.testing.assert_allclose(sp.ys[0], [0.17742, 0.5, 0.83871], atol=5e-6)


def test_aggregate_missing_block():
    idx = _daily(2021, 1, {d: 0.3 for d in range(1, 21)})  # nothing after day 20
    with pytest.raises(MissingPeriod, match="2021-01.*block 3"):
        aggregate_daily(idx, K=3)


def test_aggregate_permutation_within_block_irrelevant():
    base = {d: float(d % 7) for d in range(1, 31)}
    swapped = dict(base)
    swapped[2], swapped[9] = base[9], base[2]  # both in block 1
    a = aggregate_daily(_daily(2021, 6, base), K=3)
    b = aggregate_daily(_daily(2021, 6, swapped), K=3)
    np.testing.assert_array_equal(a.ys, b.ys)


def test_aggregate_k_other_than_three():
    idx = _daily(2021, 4, {d: float(d) for d in range(1, 31)})  # 30 days
    sp = aggregate_daily(idx, K=2)
    np.testing.assert_allclose(sp.ys[0], [8.0, 23.0])  # mean(1..15), mean(16..30)


def test_aggregate_multi_month_gap_detected():
    scores = {}
    dates = [dt.date(2021, 1, d) for d in range(1, 32)]
    dates += [dt.date(2021, 3, d) for d in range(1, 32)]  # February absent
    idx = DailyIndex(dates=tuple(dates), scores=np.full(len(dates), 0.2))
    with pytest.raises(MissingPeriod, match="2021-02"):
        aggregate_daily(idx, K=3)


# ---------------------------------------------------------------------------
# container invariants
# ---------------------------------------------------------------------------

def test_month_labels_must_be_consecutive():
    with pytest.raises(InvalidData):
        MonthlyPanel(("2020-01", "2020-03"), np.zeros(2), np.zeros((2, 0)),
                     np.zeros((2, 0)))


def test_nan_rejected_everywhere():
    with pytest.raises(InvalidData):
        MonthlyPanel(month_range("2020-01", 2), np.array([1.0, np.nan]),
                     np.zeros((2, 0)), np.zeros((2, 0)))
    with pytest.raises(InvalidData):
        SurrogatePanel(month_range("2020-01", 1), np.array([[np.inf, 0.0]]))


def test_mismatched_pairing_rejected():
    mp = MonthlyPanel(month_range("2020-01", 3), np.zeros(3), np.zeros((3, 0)),
                      np.zeros((3, 0)))
    sp = SurrogatePanel(month_range("2020-02", 3), np.zeros((3, 2)))
    with pytest.raises(PanelMismatch):
        check_aligned(mp, sp)


def test_daily_index_dates_strictly_increasing():
    with pytest.raises(InvalidData):
        DailyIndex((dt.date(2021, 1, 2), dt.date(2021, 1, 2)), np.array([0.1, 0.2]))
