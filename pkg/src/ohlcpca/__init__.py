"""Pseudo principal component analysis for open-high-low-close data."""
from .eigen import EigenDecomposition, orient_signs, symmetric_eigen
from .errors import OhlcPcaError
from .ohlc import (
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
from .ppca import (
    OhlcScores,
    PseudoPcModel,
    ScoreMatrix,
    cumulative_contribution,
    fit,
    scores,
    scores_to_ohlc,
)
from .space import (
    FeatureMatrix,
    SummaryStats,
    corr_matrix,
    sample_cov,
    sample_mean,
    sample_var,
    series_add,
    series_inner,
    series_scale,
    series_subtract,
    standardize,
)

__version__ = "0.1.0"
