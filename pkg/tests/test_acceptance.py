"""Acceptance criteria 1-9, one test each.

Each test records its outcome so a PASS/FAIL line per criterion is printed
in the terminal summary (and immediately with ``pytest -s``).
"""
import time

import numpy as np
import pytest

from ohlcpca.cli import main
from ohlcpca.eigen import symmetric_eigen
from ohlcpca.ohlc import from_feature, to_feature
from ohlcpca.ppca import fit, scores
from ohlcpca.simulate import SimConfig, run_study
from ohlcpca.space import (
    sample_cov,
    sample_mean,
    sample_var,
    series_add,
    series_inner,
    series_scale,
)
from ohlcpca.tables import fixture_path

from conftest import ACCEPTANCE, random_matrix
from test_eigen import roots_2x2, roots_3x3

FIXTURE_EIGENVALUES = np.array([2.065, 1.376, 0.950, 0.705, 0.619, 0.285])
FIXTURE_PC1 = np.array([0.221, 0.116, 0.250, 0.543, 0.599, 0.471])
FIXTURE_PC2 = np.array([0.564, 0.687, 0.328, -0.200, -0.130, -0.213])
SIZES = (50, 100, 150, 200)


def record(number, name, ok, detail):
    ACCEPTANCE[number] = (name, bool(ok), detail)
    print(f"criterion {number} {'PASS' if ok else 'FAIL'}: {name} ({detail})")
    assert ok, detail


@pytest.fixture(scope="module")
def study():
    start = time.perf_counter()
    report = run_study(SimConfig(sample_sizes=SIZES, repeats=300, seed=42))
    return report, time.perf_counter() - start


def test_criterion_1_eigenvalues(fixture_features):
    start = time.perf_counter()
    model = fit(fixture_features)
    elapsed = time.perf_counter() - start
    ev = model.all_eigenvalues
    err = float(np.max(np.abs(ev - FIXTURE_EIGENVALUES)))
    trace = float(np.trace(model.correlation))
    ok = err <= 0.05 and abs(ev.sum() - trace) < 1e-9 and abs(trace - 6.0) < 1e-9 and elapsed < 1
    record(1, "eigenvalue reproduction", ok,
           f"max deviation {err:.4f}, sum {ev.sum():.12f}, {elapsed:.3f} s")


def test_criterion_2_loadings(fixture_features):
    start = time.perf_counter()
    model = fit(fixture_features, 2)
    elapsed = time.perf_counter() - start
    u = model.loadings
    err = float(max(np.max(np.abs(u[:, 0] - FIXTURE_PC1)), np.max(np.abs(u[:, 1] - FIXTURE_PC2))))
    labels = fixture_features.column_labels

    def top3(h):
        return {labels[j] for j in np.argsort(-np.abs(u[:, h]))[:3]}

    ok = (err <= 0.05 and top3(0) == {"cucumber", "potato", "onion"}
          and top3(1) == {"beef", "lamb", "pork"} and elapsed < 1)
    record(2, "loading reproduction", ok, f"max deviation {err:.4f}, {elapsed:.3f} s")


def test_criterion_3_contribution_rates(fixture_features):
    q = fit(fixture_features, 3).cumulative_contribution
    ok = abs(q[1] - 0.574) <= 0.01 and abs(q[2] - 0.732) <= 0.01
    record(3, "contribution rates", ok, f"Q2={q[1]:.4f}, Q3={q[2]:.4f}")


def test_criterion_4_simulation_rank(study):
    report, elapsed = study
    worst_q = max(abs(report.by_size(n).q_mean - 1.0) for n in SIZES)
    counts = {c for n in SIZES for c in report.by_size(n).zero_eigenvalue_counts}
    repeats = {len(report.by_size(n).zero_eigenvalue_counts) for n in SIZES}
    ok = worst_q <= 1e-8 and counts == {2} and repeats == {300} and elapsed < 30
    record(4, "simulation rank check", ok,
           f"max |Q4-1|={worst_q:.2e}, zero-eigenvalue counts {sorted(counts)}, {elapsed:.2f} s")


def test_criterion_5_mape_trend(study):
    report, _ = study
    pc1 = [report.by_size(n).mape_mean[0] for n in SIZES]
    tail = np.array([report.by_size(n).mape_mean[4:] for n in SIZES])
    ok = (all(a > b for a, b in zip(pc1, pc1[1:])) and abs(pc1[-1] - 8.9) <= 10
          and np.all(np.isfinite(tail)))
    record(5, "MAPE trend", ok, "PC1 MAPE " + " -> ".join(f"{x:.1f}%" for x in pc1))


def test_criterion_6_bijection():
    rng = np.random.default_rng(6)
    worst = 0.0
    for _ in range(10_000):
        low = float(np.exp(rng.uniform(-5, 8)))
        width = low * float(np.exp(rng.uniform(-6, 2)))
        lo, lc = rng.uniform(1e-6, 1 - 1e-6, 2)
        bar = np.array([low + lo * width, low + width, low, low + lc * width])
        back = np.array(from_feature(to_feature(bar)))
        worst = max(worst, float(np.max(np.abs(back - bar) / bar)))
    record(6, "bijection suite", worst < 1e-9, f"max relative error {worst:.2e}")


def _rel(x, y, scale):
    return abs(x - y) <= 1e-10 * max(1.0, abs(scale))


def test_criterion_7_property_suites():
    rng = np.random.default_rng(7)
    failures = []
    for trial in range(100):
        n, p = int(rng.integers(2, 51)), int(rng.integers(1, 9))
        m = random_matrix(rng, n, p)
        a, b, c = (m.column(j % p) for j in range(3))
        beta = float(rng.normal())
        scale = series_inner(a, a) + series_inner(b, b) + series_inner(c, c)
        axioms = [
            series_inner(a, a) >= 0,
            _rel(series_inner(a, b), series_inner(b, a), scale),
            _rel(series_inner(a, series_add(b, c)), series_inner(a, b) + series_inner(a, c), scale),
            _rel(series_inner(series_scale(beta, a), b), beta * series_inner(a, b), scale),
        ]
        model = fit(m)
        s = scores(model, m)
        score_props = [abs(model.eigenvalues.sum() - p) < 1e-10]
        for h in range(p):
            score_props.append(np.max(np.abs(sample_mean(s.column(h)))) < 1e-10)
            score_props.append(abs(sample_var(s.column(h)) - model.eigenvalues[h]) < 1e-10)
            score_props.extend(abs(sample_cov(s.column(h), s.column(k))) < 1e-10 for k in range(h))
        if not (all(axioms) and all(score_props)):
            failures.append(trial)
    record(7, "inner-product and score property suites", not failures,
           f"{100 - len(failures)}/100 random matrices")


def test_criterion_8_eigensolver():
    rng = np.random.default_rng(8)
    worst = 0.0
    for k in range(1000):
        size = 2 + k % 2
        a = rng.normal(size=(size, size))
        w = (a + a.T) / 2
        roots = roots_2x2(w) if size == 2 else roots_3x3(w)
        worst = max(worst, float(np.max(np.abs(symmetric_eigen(w).eigenvalues - roots))))
    residual = 0.0
    for _ in range(100):
        a = rng.normal(size=(6, 6))
        w = (a + a.T) / 2
        ev, u = symmetric_eigen(w)
        residual = max(residual, float(np.max(np.abs(u @ np.diag(ev) @ u.T - w))))
    ok = worst < 1e-9 and residual < 1e-10
    record(8, "eigensolver oracle", ok,
           f"max root error {worst:.2e}, max reconstruction residual {residual:.2e}")


def test_criterion_9_determinism(tmp_path):
    raw = str(fixture_path("raw_ohlc.csv"))
    for run in ("a", "b"):
        d = tmp_path / run
        d.mkdir()
        assert main(["simulate", "--n", "50", "--n", "200", "--repeats", "300", "--seed", "42",
                     "--output", str(d / "sim.csv")]) == 0
        assert main(["ppca", "--input", raw, "--jitter-seed", "1",
                     "--outdir", str(d / "model")]) == 0
    files = sorted(p.relative_to(tmp_path / "a") for p in (tmp_path / "a").rglob("*") if p.is_file())
    differ = [str(f) for f in files
              if (tmp_path / "a" / f).read_bytes() != (tmp_path / "b" / f).read_bytes()]
    record(9, "determinism", len(files) == 8 and not differ,
           f"{len(files)} files compared, {len(differ)} differ")
