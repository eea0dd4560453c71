"""Plain CSV formats (UTF-8, LF, ``.`` decimal point, 17 significant digits)."""
from __future__ import annotations

import csv

import numpy as np

from .errors import DomainError
from .gaussgen import TimeSeries


def fmt(x) -> str:
    return f"{float(x):.17g}"


def _writer(fh):
    return csv.writer(fh, lineterminator="\n")


def write_series(series: TimeSeries, path, include_driver: bool = True) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = _writer(fh)
        with_driver = include_driver and series.driver is not None
        w.writerow(["index", "value", "driver"] if with_driver else ["index", "value"])
        for i, v in enumerate(series.values):
            row = [i, fmt(v)]
            if with_driver:
                row.append(fmt(series.driver[i]))
            w.writerow(row)


def read_series(path) -> TimeSeries:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or header[:2] != ["index", "value"]:
            raise DomainError(f"{path}: expected header 'index,value[,driver]'")
        has_driver = len(header) > 2 and header[2] == "driver"
        values, driver = [], []
        for row in reader:
            if not row:
                continue
            values.append(float(row[1]))
            if has_driver:
                driver.append(float(row[2]))
    if not values:
        raise DomainError(f"{path}: no observations")
    return TimeSeries(np.array(values), np.array(driver) if has_driver else None)


def write_region(region, path) -> None:
    """Bands: one row per grid point.  Intervals: a single row with ``x = p``."""
    level = fmt(region.level)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = _writer(fh)
        w.writerow(["x", "lower", "upper", "center", "method", "level"])
        if region.kind == "band":
            for x, lo, hi, c in zip(region.x_grid, region.lower, region.upper, region.center):
                w.writerow([fmt(x), fmt(lo), fmt(hi), fmt(c), region.method, level])
        else:
            w.writerow([fmt(region.p), fmt(region.lower), fmt(region.upper), fmt(region.center), region.method, level])


def write_histogram(samples, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = _writer(fh)
        w.writerow(["rep", "value"])
        for i, v in enumerate(samples):
            w.writerow([i, fmt(v)])
