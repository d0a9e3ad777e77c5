"""Load raw observations and group them into a distinct-value table.

The pipeline works on a population sorted by a size variable x, with a study
variable y riding along (y defaults to x when the caller names no y column).
All downstream stages see only the per-distinct-value aggregates, never the
raw rows.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from itertools import groupby
from typing import Iterable

from .errors import DataError, EmptyPopulationError, InputSchemaError


@dataclass(frozen=True, slots=True)
class Observation:
    """One population unit: size variable x and study variable y."""

    x: float
    y: float


@dataclass(frozen=True, slots=True)
class Population:
    """All units, sorted ascending by x. Ties keep their input order."""

    observations: tuple[Observation, ...]

    @property
    def N(self) -> int:
        return len(self.observations)


@dataclass(frozen=True, slots=True)
class FrequencyTable:
    """Per-distinct-x aggregates, ascending in x.

    q holds the K distinct values, count their multiplicities, and y_sum and
    y_sumsq the per-group totals of y and y squared. Groups are formed by
    exact float equality, never by an epsilon merge.
    """

    q: tuple[float, ...]
    count: tuple[int, ...]
    y_sum: tuple[float, ...]
    y_sumsq: tuple[float, ...]

    @property
    def K(self) -> int:
        return len(self.q)

    @property
    def N(self) -> int:
        return sum(self.count)


def load_population(
    source: Iterable[str],
    x_column: str = "x",
    y_column: str | None = None,
    delimiter: str = ",",
) -> Population:
    """Read delimiter-separated text with a header row into a Population.

    Args:
        source: iterable of text lines (an open file works).
        x_column: header name of the size variable.
        y_column: header name of the study variable, or None to reuse x.
        delimiter: field separator, "," or "\\t" in practice.

    Returns:
        Population sorted ascending by x.

    Raises:
        InputSchemaError: a named column is missing from the header.
        DataError: a cell fails to parse to a finite number (the message
            names the offending row).
        EmptyPopulationError: the input has no data rows.
    """
    reader = csv.reader(source, delimiter=delimiter)
    try:
        header = [cell.strip() for cell in next(reader)]
    except StopIteration:
        raise EmptyPopulationError("input has no header row") from None

    x_index = _column_index(header, x_column)
    y_index = None if y_column is None else _column_index(header, y_column)

    observations: list[Observation] = []
    for row_number, row in enumerate(reader, start=2):
        if not row or all(cell.strip() == "" for cell in row):
            continue
        x = _parse_cell(row, x_index, x_column, row_number)
        y = x if y_index is None else _parse_cell(row, y_index, y_column, row_number)
        observations.append(Observation(x, y))

    if not observations:
        raise EmptyPopulationError("input has a header but no data rows")
    observations.sort(key=lambda o: o.x)  # stable, so ties keep input order
    return Population(tuple(observations))


def build_frequency_table(population: Population) -> FrequencyTable:
    """Collapse a sorted population into per-distinct-value aggregates."""
    if population.N == 0:
        raise EmptyPopulationError("cannot tabulate an empty population")
    q: list[float] = []
    count: list[int] = []
    y_sum: list[float] = []
    y_sumsq: list[float] = []
    for value, group in groupby(population.observations, key=lambda o: o.x):
        ys = [o.y for o in group]
        total_sq = math.fsum(y * y for y in ys)
        if not math.isfinite(total_sq):
            raise DataError(f"sum of squared y overflows in group x={value!r}")
        q.append(value)
        count.append(len(ys))
        y_sum.append(math.fsum(ys))
        y_sumsq.append(total_sq)
    return FrequencyTable(tuple(q), tuple(count), tuple(y_sum), tuple(y_sumsq))


def _column_index(header: list[str], name: str) -> int:
    try:
        return header.index(name)
    except ValueError:
        raise InputSchemaError(
            f"column {name!r} not found in header {header}"
        ) from None


def _parse_cell(row: list[str], index: int, name: str | None, row_number: int) -> float:
    if index >= len(row):
        raise DataError(f"row {row_number}: missing value for column {name!r}")
    text = row[index].strip()
    try:
        value = float(text)
    except ValueError:
        raise DataError(
            f"row {row_number}: cannot parse {name}={text!r} as a number"
        ) from None
    if not math.isfinite(value):
        raise DataError(f"row {row_number}: non-finite {name}={text!r}")
    return value
