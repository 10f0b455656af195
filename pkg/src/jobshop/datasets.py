"""Access to the packaged benchmark suites and their reference makespans."""

from __future__ import annotations

import csv
from pathlib import Path

from .instance import Instance
from .io import load_suite

SUITES = ("taillard", "demirkol", "lawrence")


def data_dir() -> Path:
    """Root of the packaged benchmark data."""
    return Path(__file__).resolve().parent / "data"


def suite_dir(name: str) -> Path:
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; available: {', '.join(SUITES)}")
    return data_dir() / name


def load_benchmark(name: str) -> list[Instance]:
    """All instances of a packaged suite, sorted by name."""
    return load_suite(suite_dir(name))


def load_ub_table(source: str | Path) -> dict[str, int]:
    """Read a `name,ub` CSV into a dict; suite names resolve to packaged tables."""
    path = Path(source)
    if not path.exists() and str(source) in SUITES:
        path = data_dir() / "ub" / f"{source}.csv"
    table: dict[str, int] = {}
    with open(path, newline="") as f:
        for i, row in enumerate(csv.reader(f), start=1):
            if not row or row[0].strip().lower() == "name":
                continue
            if len(row) < 2:
                raise ValueError(f"{path}:{i}: expected 'name,ub'")
            name, ub = row[0].strip(), int(row[1])
            if ub <= 0:
                raise ValueError(f"{path}:{i}: upper bound must be positive")
            if name in table:
                raise ValueError(f"{path}:{i}: duplicate instance name {name!r}")
            table[name] = ub
    return table
