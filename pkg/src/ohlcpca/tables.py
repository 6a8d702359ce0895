"""Long-format CSV tables, bundled fixtures and model output files."""
from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional

import numpy as np

from .errors import BadNumeric, CsvError, DuplicateKey, MissingHeader, RaggedPivot
from .space import FeatureMatrix

OHLC_COLUMNS = ("open", "high", "low", "close")
FEATURE_COLUMNS = ("y1", "y2", "y3", "y4")
KEY_COLUMNS = ("entity", "variable")


@dataclass(frozen=True)
class Record:
    entity: str
    variable: str
    values: tuple
    row: int


@dataclass(frozen=True)
class Table:
    """Records keyed by ``(entity, variable)``, in file order.

    ``value_columns`` is either :data:`OHLC_COLUMNS` or :data:`FEATURE_COLUMNS`.
    """

    records: tuple
    value_columns: tuple

    @property
    def entities(self) -> tuple:
        return tuple(dict.fromkeys(r.entity for r in self.records))

    @property
    def variables(self) -> tuple:
        return tuple(dict.fromkeys(r.variable for r in self.records))

    def pivot(self) -> np.ndarray:
        """``(n_entities, n_variables, 4)`` grid in first-appearance order."""
        entities, variables = self.entities, self.variables
        ei = {e: i for i, e in enumerate(entities)}
        vi = {v: j for j, v in enumerate(variables)}
        grid = np.full((len(entities), len(variables), 4), np.nan)
        seen = np.zeros(grid.shape[:2], dtype=bool)
        for r in self.records:
            grid[ei[r.entity], vi[r.variable]] = r.values
            seen[ei[r.entity], vi[r.variable]] = True
        if not seen.all():
            i, j = np.argwhere(~seen)[0]
            raise RaggedPivot(
                f"entity {entities[i]!r} has no row for variable {variables[j]!r}"
            )
        return grid

    def to_feature_matrix(self) -> FeatureMatrix:
        return FeatureMatrix(self.pivot(), self.entities, self.variables)


# Aliases matching the two schemas.
OhlcTable = Table
FeatureTable = Table


def table_from_grid(grid, entities, variables, value_columns) -> Table:
    grid = np.asarray(grid, dtype=float)
    records = []
    for i, e in enumerate(entities):
        for j, v in enumerate(variables):
            records.append(Record(e, v, tuple(float(x) for x in grid[i, j]), len(records) + 2))
    return Table(tuple(records), tuple(value_columns))


def _parse(path, value_columns) -> Table:
    expected = list(KEY_COLUMNS + value_columns)
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise MissingHeader(f"{path}: file is empty")
        if [h.strip() for h in header] != expected:
            raise MissingHeader(f"{path}: header must be {','.join(expected)}, got {','.join(header)}")
        records, keys = [], set()
        for rownum, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(expected):
                raise CsvError(f"{path}: row {rownum} has {len(row)} fields, expected {len(expected)}")
            entity, variable = row[0].strip(), row[1].strip()
            values = []
            for name, cell in zip(value_columns, row[2:]):
                try:
                    x = float(cell)
                except ValueError:
                    raise BadNumeric(rownum, name, cell) from None
                if not math.isfinite(x):
                    raise BadNumeric(rownum, name, cell)
                values.append(x)
            if (entity, variable) in keys:
                raise DuplicateKey(entity, variable, rownum)
            keys.add((entity, variable))
            records.append(Record(entity, variable, tuple(values), rownum))
    return Table(tuple(records), tuple(value_columns))


def parse_ohlc_csv(path) -> Table:
    return _parse(path, OHLC_COLUMNS)


def parse_feature_csv(path) -> Table:
    return _parse(path, FEATURE_COLUMNS)


def format_number(x: float, digits: Optional[int] = 6) -> str:
    """Fixed significant-digit text, or the shortest exact repr when ``digits`` is None."""
    x = float(x)
    if digits is None:
        return repr(x)
    text = f"{x:.{digits}g}"
    return "0" if text == "-0" else text


def write_table_csv(table: Table, path, digits: Optional[int] = 6) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(KEY_COLUMNS + tuple(table.value_columns))
        for r in table.records:
            writer.writerow([r.entity, r.variable] + [format_number(v, digits) for v in r.values])


def fixture_path(name: str) -> Path:
    """Path of a bundled data file: ``raw_ohlc.csv``, ``features_std.csv`` or ``abbreviations.csv``."""
    return Path(str(resources.files("ohlcpca") / "fixtures" / name))


def load_abbreviations() -> dict:
    with open(fixture_path("abbreviations.csv"), newline="", encoding="utf-8") as fh:
        return {row["abbreviation"]: row["market"] for row in csv.DictReader(fh)}


# -- model output -----------------------------------------------------------

def _write_rows(path, header, rows):
    try:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
    except OSError as exc:
        raise OSError(exc.errno, f"cannot write {path}: {exc.strerror}") from exc


def write_model(model, scores_ohlc, outdir) -> dict:
    """Write ``eigenvalues.csv``, ``loadings.csv`` and ``scores_ohlc.csv``.

    ``eigenvalues.csv`` lists the whole spectrum; the other two cover the
    retained components. Returns the written paths keyed by file stem.
    """
    os.makedirs(outdir, exist_ok=True)
    paths = {stem: os.path.join(outdir, f"{stem}.csv")
             for stem in ("eigenvalues", "loadings", "scores_ohlc")}
    ev = model.all_eigenvalues
    vcr = ev / ev.size
    cvcr = np.cumsum(ev) / ev.size
    _write_rows(paths["eigenvalues"], ("component", "eigenvalue", "vcr", "cvcr"),
                [(h + 1, format_number(ev[h]), format_number(vcr[h]), format_number(cvcr[h]))
                 for h in range(ev.size)])
    _write_rows(paths["loadings"],
                ("variable",) + tuple(f"pc{h + 1}" for h in range(model.m)),
                [(label,) + tuple(format_number(x) for x in model.loadings[j])
                 for j, label in enumerate(model.column_labels)])
    bars = scores_ohlc.bars
    _write_rows(paths["scores_ohlc"], ("entity", "component") + OHLC_COLUMNS,
                [(entity, h + 1) + tuple(format_number(x) for x in bars[i, h])
                 for i, entity in enumerate(scores_ohlc.row_labels)
                 for h in range(bars.shape[1])])
    return paths


def read_eigenvalues(path) -> np.ndarray:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or "eigenvalue" not in reader.fieldnames:
            raise MissingHeader(f"{path}: expected an 'eigenvalue' column")
        out = []
        for rownum, row in enumerate(reader, start=2):
            try:
                out.append(float(row["eigenvalue"]))
            except (TypeError, ValueError):
                raise BadNumeric(rownum, "eigenvalue", row["eigenvalue"]) from None
    return np.array(out)


def read_scores_ohlc(path, component: int):
    """Bars of one component from ``scores_ohlc.csv``: ``(labels, (n, 4) array)``."""
    expected = ["entity", "component", *OHLC_COLUMNS]
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != expected:
            raise MissingHeader(f"{path}: header must be {','.join(expected)}")
        labels, bars = [], []
        for rownum, row in enumerate(reader, start=2):
            try:
                comp = int(row[1])
            except ValueError:
                raise BadNumeric(rownum, "component", row[1]) from None
            if comp != component:
                continue
            values = []
            for name, cell in zip(OHLC_COLUMNS, row[2:]):
                try:
                    values.append(float(cell))
                except ValueError:
                    raise BadNumeric(rownum, name, cell) from None
            labels.append(row[0])
            bars.append(values)
    return labels, np.array(bars).reshape(-1, 4)
