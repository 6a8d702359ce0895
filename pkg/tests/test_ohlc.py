import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ohlcpca.errors import (
    DegenerateLambda,
    DegenerateRange,
    InconsistentBounds,
    NegativePrice,
    NonFinite,
    NonPositiveLow,
    OutOfRangeOpenClose,
)
from ohlcpca.ohlc import (
    DROPPED,
    OhlcBar,
    PreprocessConfig,
    from_feature,
    from_features,
    preprocess,
    to_feature,
    to_features,
    validate_ohlc,
)


@pytest.mark.parametrize("bar", [(62, 72, 58, 72), (1.5, 2, 1, 1.5)])
def test_validate_accepts(bar):
    assert validate_ohlc(bar) == OhlcBar(*map(float, bar))


@pytest.mark.parametrize("bar, error", [
    ((1.5, 1, 2, 1.5), DegenerateRange),
    ((1, 1, 1, 1), DegenerateRange),
    ((0.5, 1, 0, 0.5), NonPositiveLow),
    ((-1, 1, -2, 0), NonPositiveLow),
    ((3, 2, 1, 1.5), OutOfRangeOpenClose),
    ((1.5, 2, 1, 0.5), OutOfRangeOpenClose),
])
def test_validate_rejects(bar, error):
    with pytest.raises(error):
        validate_ohlc(bar)


def test_preprocess_drops_suspended_bar():
    assert preprocess((0, 0, 0, 0)) is DROPPED


def test_preprocess_flat_limit_up():
    # high = 58 * 1.1; open rebuilt at lambda=0.01, close at lambda=0.99
    bar = preprocess((58, 58, 58, 58), PreprocessConfig(epsilon=0.01))
    assert bar.low == 58
    assert bar.high == pytest.approx(63.8, rel=1e-12)
    assert bar.open == pytest.approx(58.058, rel=1e-12)
    assert bar.close == pytest.approx(63.742, rel=1e-12)
    assert bar.lambda_open == pytest.approx(0.01, rel=1e-9)
    assert bar.lambda_close == pytest.approx(0.99, rel=1e-9)


def test_preprocess_flat_limit_down():
    bar = preprocess((58, 58, 58, 58), PreprocessConfig(flat_policy="limit-down"))
    assert bar.high == pytest.approx(63.8)
    assert bar.lambda_open == pytest.approx(0.99)
    assert bar.lambda_close == pytest.approx(0.01)


def test_preprocess_close_at_high():
    bar = preprocess((62, 72, 58, 72))
    assert bar == pytest.approx((62, 72, 58, 58 + 0.99 * 14))
    assert bar.close == pytest.approx(71.86, rel=1e-12)


def test_preprocess_open_at_low():
    bar = preprocess((1.4, 3, 1.4, 3), PreprocessConfig(epsilon=0.02))
    assert bar.lambda_open == pytest.approx(0.02)
    assert bar.lambda_close == pytest.approx(0.98)


def test_preprocess_leaves_interior_bar_alone():
    assert preprocess((60, 60.5, 56, 59)) == (60, 60.5, 56, 59)


@pytest.mark.parametrize("bar, error", [
    ((-1, 2, 1, 1.5), NegativePrice),
    ((3, 2, 1, 1.5), InconsistentBounds),
    ((1.5, 1, 2, 1.5), InconsistentBounds),
])
def test_preprocess_errors(bar, error):
    with pytest.raises(error):
        preprocess(bar)


def test_preprocess_jitter_is_seeded_and_bounded():
    cfg = PreprocessConfig(epsilon=0.01, jitter_seed=7)
    a = preprocess((62, 72, 58, 72), cfg)
    b = preprocess((62, 72, 58, 72), cfg)
    assert a == b
    assert 1 - 0.01 < a.lambda_close < 1 - 0.005
    rng = cfg.make_rng()
    draws = {preprocess((58, 58, 58, 58), cfg, rng).lambda_open for _ in range(5)}
    assert len(draws) == 5
    assert all(0.005 < d < 0.01 for d in draws)


def test_preprocess_config_validation():
    with pytest.raises(ValueError):
        PreprocessConfig(epsilon=0.5)
    with pytest.raises(ValueError):
        PreprocessConfig(flat_policy="sideways")


# range at least 1e-6 of the low price so a 0.01 nudge is representable
relaxed_bars = st.tuples(
    st.floats(0.01, 1e4), st.floats(0, 1), st.floats(0, 1), st.floats(1e-6, 5), st.booleans()
).map(lambda t: (
    (t[0] * 2, t[0] * 2, t[0] * 2, t[0] * 2) if t[4] else
    (t[0] + t[1] * t[0] * t[3], t[0] + t[0] * t[3], t[0], t[0] + t[2] * t[0] * t[3])
))


@given(relaxed_bars)
def test_preprocess_is_idempotent_and_valid(bar):
    once = preprocess(bar)
    assert 0 < once.lambda_open < 1 and 0 < once.lambda_close < 1
    validate_ohlc(once)
    assert preprocess(once) == once


def test_to_feature_zero():
    assert to_feature((1.5, 2, 1, 1.5)) == pytest.approx([0, 0, 0, 0], abs=1e-15)


def test_to_feature_changji_beef():
    # lambda_open = 4/4.5 = 8/9 -> odds 8; lambda_close = 3/4.5 = 2/3 -> odds 2
    expected = [math.log(56), math.log(4.5), math.log(8), math.log(2)]
    got = to_feature((60, 60.5, 56, 59))
    assert got == pytest.approx(expected, rel=1e-12)
    assert got == pytest.approx([4.02535, 1.50408, 2.07944, 0.69315], abs=5e-6)


def test_to_feature_close_position():
    assert to_feature((1.5, 2, 1, 1.8)) == pytest.approx([0, 0, 0, math.log(4)], abs=1e-12)


def test_to_feature_rejects_boundary_lambda():
    with pytest.raises(DegenerateLambda):
        to_feature((62, 72, 58, 72))
    with pytest.raises(DegenerateRange):
        to_feature((58, 58, 58, 58))


def test_from_feature_examples():
    assert from_feature((0, 0, 0, 0)) == pytest.approx((1.5, 2, 1, 1.5), rel=1e-15)
    y = [math.log(56), math.log(4.5), math.log(8), math.log(2)]
    assert from_feature(y) == pytest.approx((60, 60.5, 56, 59), rel=1e-9)
    assert from_feature((0, 0, 0, math.log(4))) == pytest.approx((1.5, 2, 1, 1.8), rel=1e-9)
    # the 5-decimal published feature vector lands within rounding of the bar
    assert from_feature((4.02535, 1.50408, 2.07944, 0.69315)) == pytest.approx(
        (60, 60.5, 56, 59), rel=1e-4)


def test_from_feature_overflow():
    with pytest.raises(NonFinite):
        from_feature((800, 0, 0, 0))
    with pytest.raises(NonFinite):
        from_feature((float("nan"), 0, 0, 0))


def test_vectorized_matches_scalar():
    rng = np.random.default_rng(3)
    y = rng.uniform(-5, 5, size=(7, 3, 4))
    bars = from_features(y)
    for idx in np.ndindex(7, 3):
        assert from_feature(y[idx]) == pytest.approx(tuple(bars[idx]), rel=1e-15)
    np.testing.assert_allclose(to_features(bars), y, atol=1e-9)


def test_bijection_fuzz():
    rng = np.random.default_rng(2024)
    n = 10_000
    low = np.exp(rng.uniform(-5, 8, n))
    rng_ = low * np.exp(rng.uniform(-6, 2, n))
    lam = rng.uniform(1e-6, 1 - 1e-6, size=(n, 2))
    bars = np.column_stack([low + lam[:, 0] * rng_, low + rng_, low, low + lam[:, 1] * rng_])
    back = from_features(to_features(bars))
    assert np.max(np.abs(back - bars) / np.abs(bars)) < 1e-9
    y = np.empty((n, 4))
    y[:, 0] = rng.uniform(-10, 10, n)
    y[:, 1] = y[:, 0] + rng.uniform(-5, 5, n)
    y[:, 2:] = rng.uniform(-6, 6, size=(n, 2))
    assert np.max(np.abs(to_features(from_features(y)) - y)) < 1e-9


def test_bijection_on_fixture_bars(fixture_raw):
    bars = np.array([preprocess(r.values) for r in fixture_raw.records])
    back = from_features(to_features(bars))
    assert np.max(np.abs(back - bars) / bars) < 1e-12


feature_vectors = st.lists(st.floats(-20, 20), min_size=4, max_size=4)


def _resolvable(y):
    # smallest gap between open/close and a range end, relative to the price level
    lam = [1 / (1 + math.exp(-v)) for v in y[2:]]
    gap = math.exp(y[1]) * min(min(x, 1 - x) for x in lam)
    return gap > 1e-12 * (math.exp(y[0]) + math.exp(y[1]))


@given(feature_vectors)
def test_inverse_always_satisfies_constraints(y):
    try:
        o, h, l, c = from_feature(y)
    except NonFinite:
        assert not _resolvable(y)
        return
    assert l > 0 and l < h
    assert l < o < h and l < c < h


moderate_vectors = st.lists(st.floats(-5, 5), min_size=4, max_size=4)


@settings(max_examples=200)
@given(moderate_vectors, st.floats(0.01, 5))
def test_close_is_increasing_in_y4(y, step):
    lo = from_feature(y).close
    hi = from_feature(y[:3] + [y[3] + step]).close
    assert hi > lo


def test_direction():
    assert OhlcBar(1.5, 2, 1, 1.8).direction == "bull"
    assert OhlcBar(1.8, 2, 1, 1.5).direction == "bear"
    assert OhlcBar(1.5, 2, 1, 1.5).direction == "flat"
