"""OHLC bars and their unconstrained feature representation.

A bar ``(open, high, low, close)`` with ``0 < low < high`` and open/close
inside ``[low, high]`` maps one-to-one onto a vector of four free reals::

    y1 = ln(low)
    y2 = ln(high - low)
    y3 = logit(lambda_open)     lambda_open  = (open  - low) / (high - low)
    y4 = logit(lambda_close)    lambda_close = (close - low) / (high - low)

Array helpers (:func:`to_features`, :func:`from_features`) work on the last
axis of arrays laid out as ``(..., 4)`` in OHLC order; the scalar functions
wrap them for single bars.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .errors import (
    DegenerateLambda,
    DegenerateRange,
    InconsistentBounds,
    NegativePrice,
    NonFinite,
    NonPositiveLow,
    OutOfRangeOpenClose,
)

FLAT_POLICIES = ("limit-up", "limit-down")
FLAT_MULTIPLIER = 1.1


class OhlcBar(NamedTuple):
    open: float
    high: float
    low: float
    close: float

    @property
    def lambda_open(self) -> float:
        return (self.open - self.low) / (self.high - self.low)

    @property
    def lambda_close(self) -> float:
        return (self.close - self.low) / (self.high - self.low)

    @property
    def direction(self) -> str:
        """``"bull"`` if close > open, ``"bear"`` if open > close, else ``"flat"``."""
        return bar_direction(self.open, self.close)


class _Dropped:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "DROPPED"

    def __bool__(self):
        return False


#: Returned by :func:`preprocess` for all-zero (suspended trading) bars.
DROPPED = _Dropped()


@dataclass(frozen=True)
class PreprocessConfig:
    """Settings for :func:`preprocess`.

    Parameters
    ----------
    epsilon : float
        Replacement for a convex coefficient that lands on 0 (``1 - epsilon``
        for one that lands on 1).
    flat_policy : {"limit-up", "limit-down"}
        Which prices are stretched by 1.1 when all four prices coincide.
    jitter_seed : int, optional
        When set, each nudge is drawn uniformly from ``(epsilon/2, epsilon)``
        by a generator seeded with this value.
    """

    epsilon: float = 0.01
    flat_policy: str = "limit-up"
    jitter_seed: Optional[int] = None

    def __post_init__(self):
        if not 0.0 < self.epsilon < 0.5:
            raise ValueError(f"epsilon must lie in (0, 0.5), got {self.epsilon}")
        if self.flat_policy not in FLAT_POLICIES:
            raise ValueError(
                f"flat_policy must be one of {FLAT_POLICIES}, got {self.flat_policy!r}"
            )

    def make_rng(self) -> Optional[np.random.Generator]:
        if self.jitter_seed is None:
            return None
        return np.random.default_rng(self.jitter_seed)


def bar_direction(open_, close):
    if close > open_:
        return "bull"
    if open_ > close:
        return "bear"
    return "flat"


def _as_bar(bar) -> OhlcBar:
    if isinstance(bar, OhlcBar):
        return bar
    values = tuple(float(v) for v in bar)
    if len(values) != 4:
        raise ValueError(f"an OHLC bar needs 4 values, got {len(values)}")
    return OhlcBar(*values)


def validate_ohlc(bar: Sequence[float]) -> OhlcBar:
    """Check the three OHLC constraints and return the bar.

    Raises
    ------
    NonPositiveLow
        ``low <= 0``.
    DegenerateRange
        ``high <= low``.
    OutOfRangeOpenClose
        open or close outside ``[low, high]``.
    """
    b = _as_bar(bar)
    if not all(math.isfinite(v) for v in b):
        raise NonFinite(f"non-finite price in {tuple(b)}")
    if not b.low > 0:
        raise NonPositiveLow(f"constraint low > 0 violated: low={b.low}")
    if not b.low < b.high:
        raise DegenerateRange(f"constraint low < high violated: low={b.low}, high={b.high}")
    for name in ("open", "close"):
        v = getattr(b, name)
        if not b.low <= v <= b.high:
            raise OutOfRangeOpenClose(
                f"constraint low <= {name} <= high violated: "
                f"{name}={v}, low={b.low}, high={b.high}"
            )
    return b


def preprocess(bar, config: PreprocessConfig = PreprocessConfig(),
               rng: Optional[np.random.Generator] = None):
    """Regularize a bar so it can enter :func:`to_feature`.

    Steps, in order: an all-zero bar is dropped; a flat nonzero bar has two
    of its prices multiplied by 1.1 according to ``config.flat_policy``; a
    convex coefficient equal to 0 becomes ``epsilon`` and one equal to 1
    becomes ``1 - epsilon``, with the open/close price rebuilt from the new
    coefficient.

    Parameters
    ----------
    bar : sequence of 4 floats
        ``(open, high, low, close)``.
    config : PreprocessConfig
    rng : numpy.random.Generator, optional
        Source of jittered nudges. Defaults to a fresh generator seeded with
        ``config.jitter_seed`` (if any); pass one generator when processing a
        whole table so successive bars draw different nudges.

    Returns
    -------
    OhlcBar or DROPPED
    """
    o, h, l, c = (float(v) for v in bar)
    if any(v < 0 for v in (o, h, l, c)):
        raise NegativePrice(f"negative price in {(o, h, l, c)}")
    if o == h == l == c:
        if o == 0:
            return DROPPED
        if config.flat_policy == "limit-up":
            c *= FLAT_MULTIPLIER
            h *= FLAT_MULTIPLIER
        else:
            o *= FLAT_MULTIPLIER
            h *= FLAT_MULTIPLIER
    if h < l or not (l <= o <= h and l <= c <= h):
        raise InconsistentBounds(f"open/close outside [low, high] in {(o, h, l, c)}")
    if h == l:
        raise DegenerateRange(f"high equals low in {(o, h, l, c)}")
    if rng is None:
        rng = config.make_rng()

    def nudge():
        if rng is None:
            return config.epsilon
        return float(rng.uniform(config.epsilon / 2, config.epsilon))

    def regularize(price):
        lam = (price - l) / (h - l)
        if lam <= 0.0:
            lam = nudge()
        elif lam >= 1.0:
            lam = 1.0 - nudge()
        else:
            return price
        return lam * h + (1.0 - lam) * l

    out = validate_ohlc(OhlcBar(regularize(o), h, l, regularize(c)))
    if not (0.0 < out.lambda_open < 1.0 and 0.0 < out.lambda_close < 1.0):
        raise DegenerateRange(
            f"range of {(o, h, l, c)} is too narrow to place open/close strictly inside"
        )
    return out


def _logit_position(price, low, high):
    return np.log(price - low) - np.log(high - price)


def _expit(y):
    y = np.asarray(y, dtype=float)
    out = np.empty_like(y)
    pos = y >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-y[pos]))
    ey = np.exp(y[~pos])
    out[~pos] = ey / (1.0 + ey)
    return out


def to_features(bars) -> np.ndarray:
    """Vectorized forward transform of an ``(..., 4)`` OHLC array.

    Bars must be strictly valid with open/close strictly inside the range.
    """
    x = np.asarray(bars, dtype=float)
    if x.shape[-1] != 4:
        raise ValueError(f"last axis must have length 4, got shape {x.shape}")
    o, h, l, c = (x[..., k] for k in range(4))
    if not np.all(np.isfinite(x)):
        raise NonFinite("non-finite price")
    if np.any(l <= 0):
        raise NonPositiveLow("constraint low > 0 violated")
    if np.any(h <= l):
        raise DegenerateRange("constraint low < high violated")
    if np.any((o < l) | (o > h) | (c < l) | (c > h)):
        raise OutOfRangeOpenClose("open or close outside [low, high]")
    if np.any((o == l) | (o == h) | (c == l) | (c == h)):
        raise DegenerateLambda(
            "open or close sits on the low/high boundary; run preprocess first"
        )
    out = np.empty_like(x)
    out[..., 0] = np.log(l)
    out[..., 1] = np.log(h - l)
    out[..., 2] = _logit_position(o, l, h)
    out[..., 3] = _logit_position(c, l, h)
    return out


def from_features(features) -> np.ndarray:
    """Vectorized inverse transform; returns ``(..., 4)`` in OHLC order.

    Raises :class:`NonFinite` when ``exp`` overflows or when the resulting
    prices cannot be kept strictly apart in double precision (a range far
    below the resolution of the price level).
    """
    y = np.asarray(features, dtype=float)
    if y.shape[-1] != 4:
        raise ValueError(f"last axis must have length 4, got shape {y.shape}")
    if not np.all(np.isfinite(y)):
        raise NonFinite("non-finite feature value")
    with np.errstate(over="ignore", under="ignore"):
        low = np.exp(y[..., 0])
        rng_ = np.exp(y[..., 1])
        high = low + rng_
        out = np.empty_like(y)
        out[..., 0] = low + _expit(y[..., 2]) * rng_
        out[..., 1] = high
        out[..., 2] = low
        out[..., 3] = low + _expit(y[..., 3]) * rng_
    if not np.all(np.isfinite(out)):
        raise NonFinite("exp overflow while inverting features")
    o, c = out[..., 0], out[..., 3]
    strict = (low > 0) & (low < o) & (o < high) & (low < c) & (c < high)
    if not np.all(strict):
        raise NonFinite(
            "feature vector maps to prices closer together than double precision resolves"
        )
    return out


def to_feature(bar) -> np.ndarray:
    """Feature vector ``(y1, y2, y3, y4)`` of a single bar."""
    b = validate_ohlc(bar)
    if b.lambda_open in (0.0, 1.0) or b.lambda_close in (0.0, 1.0):
        raise DegenerateLambda(
            f"convex coefficient on the boundary for {tuple(b)}; run preprocess first"
        )
    return to_features(np.array(b))


def from_feature(fv) -> OhlcBar:
    """Inverse of :func:`to_feature`."""
    return OhlcBar(*(float(v) for v in from_features(np.asarray(fv, dtype=float))))
