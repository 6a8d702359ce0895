import numpy as np
import pytest

from ohlcpca.tables import fixture_path, parse_feature_csv, parse_ohlc_csv

VARIABLES = ("beef", "lamb", "pork", "cucumber", "potato", "onion")


@pytest.fixture(scope="session")
def fixture_features():
    return parse_feature_csv(fixture_path("features_std.csv")).to_feature_matrix()


@pytest.fixture(scope="session")
def fixture_raw():
    return parse_ohlc_csv(fixture_path("raw_ohlc.csv"))


def random_matrix(rng, n, p):
    """Feature matrix with correlated columns and per-column offsets/scales."""
    from ohlcpca.space import FeatureMatrix

    mix = rng.normal(size=(p, p))
    base = rng.normal(size=(n, 4, p)) @ mix
    values = np.transpose(base, (0, 2, 1)) * rng.uniform(0.5, 3.0, size=(1, p, 1))
    values += rng.normal(scale=5.0, size=(1, p, 4))
    return FeatureMatrix(values)


# Acceptance outcomes, keyed by criterion number, printed after the run.
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        name, ok, detail = ACCEPTANCE[number]
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"criterion {number} {status}: {name} ({detail})")
