"""CSV price ingestion, intersection alignment and simple returns."""

from __future__ import annotations

import csv
import datetime as dt
import io
import json
import math
import os
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from chebfolio.errors import (
    AlignmentError,
    DuplicateDateError,
    EmptyFileError,
    InputError,
    InsufficientOverlapError,
    NonPositivePriceError,
    ParseError,
)

EPOCH = dt.date(1970, 1, 1)
HEADER = ("date", "close")


def date_to_day(d: dt.date) -> int:
    """Days since 1970-01-01."""
    return (d - EPOCH).days


def day_to_date(day) -> dt.date:
    return EPOCH + dt.timedelta(days=int(day))


@dataclass(frozen=True)
class PriceSeries:
    """Observed prices of one asset.

    ``timestamps`` are real time coordinates, normally integer day numbers
    since 1970-01-01, strictly increasing.  ``values`` are positive prices.
    """

    asset_id: str
    timestamps: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        t = np.array(self.timestamps, dtype=float).ravel()
        v = np.array(self.values, dtype=float).ravel()
        if t.size != v.size:
            raise InputError(f"{self.asset_id}: {t.size} timestamps but {v.size} values")
        if t.size < 2:
            raise InputError(f"{self.asset_id}: need at least 2 observations, got {t.size}")
        if not np.all(np.isfinite(t)):
            raise InputError(f"{self.asset_id}: timestamps must be finite")
        if np.any(np.diff(t) <= 0):
            raise InputError(f"{self.asset_id}: timestamps must be strictly increasing")
        if not np.all(np.isfinite(v)) or np.any(v <= 0):
            raise NonPositivePriceError(f"{self.asset_id}: prices must be positive and finite")
        t.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "timestamps", t)
        object.__setattr__(self, "values", v)

    def __len__(self):
        return self.values.size

    def with_index_time(self) -> "PriceSeries":
        """Copy whose time coordinate is the sample index 0..T-1."""
        return PriceSeries(self.asset_id, np.arange(len(self), dtype=float), self.values)

    def scaled(self, factor: float) -> "PriceSeries":
        return PriceSeries(self.asset_id, self.timestamps, self.values * factor)


def parse_csv(source, asset_id: str | None = None) -> PriceSeries:
    """Read a ``date,close`` CSV into a validated :class:`PriceSeries`.

    ``source`` is a path or a text stream.  The asset id defaults to the
    file stem.  Rows may appear in any order; they are sorted by date.
    """
    if isinstance(source, (str, os.PathLike)):
        path = Path(source)
        name = str(path)
        if asset_id is None:
            asset_id = path.stem
        with open(path, "r", encoding="utf-8-sig", newline="") as fh:
            text = fh.read()
    else:
        name = getattr(source, "name", "<stream>")
        text = source.read()
        if isinstance(text, bytes):
            text = text.decode("utf-8-sig")
        text = text.lstrip("\ufeff")
    if asset_id is None:
        raise InputError("asset_id is required when reading from a stream")

    rows = list(csv.reader(io.StringIO(text, newline="")))
    rows = [(i + 1, r) for i, r in enumerate(rows) if r and any(c.strip() for c in r)]
    if not rows:
        raise EmptyFileError("file is empty", name)
    line, header = rows[0]
    if tuple(c.strip().lower() for c in header) != HEADER:
        raise ParseError(f"expected header 'date,close', got {','.join(header)!r}", name, line)
    if len(rows) == 1:
        raise EmptyFileError("no data rows", name)

    seen: dict[int, int] = {}
    records = []
    for line, row in rows[1:]:
        if len(row) != 2:
            raise ParseError(f"expected 2 fields, got {len(row)}", name, line)
        raw_date, raw_close = row[0].strip(), row[1].strip()
        try:
            day = date_to_day(dt.date.fromisoformat(raw_date))
        except ValueError:
            raise ParseError(f"bad date {raw_date!r}, expected YYYY-MM-DD", name, line) from None
        try:
            close = float(raw_close)
        except ValueError:
            raise ParseError(f"bad price {raw_close!r}", name, line) from None
        if not math.isfinite(close):
            raise ParseError(f"non-finite price {raw_close!r}", name, line)
        if close <= 0:
            raise NonPositivePriceError(f"nonpositive price {raw_close!r}", name, line)
        if day in seen:
            raise DuplicateDateError(
                f"duplicate date {raw_date} (first seen on line {seen[day]})", name, line
            )
        seen[day] = line
        records.append((day, close))

    if len(records) < 2:
        raise InputError(f"{name}: need at least 2 observations, got {len(records)}")
    records.sort()
    return PriceSeries(
        asset_id,
        np.array([d for d, _ in records], dtype=float),
        np.array([c for _, c in records], dtype=float),
    )


def to_csv(series: PriceSeries) -> str:
    """Serialize a day-number series back to ``date,close`` text."""
    lines = ["date,close"]
    for t, v in zip(series.timestamps, series.values):
        lines.append(f"{day_to_date(t).isoformat()},{float(v)!r}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class AlignedPanel:
    """Several series restricted to their common timestamps."""

    asset_ids: tuple
    timestamps: np.ndarray
    values: np.ndarray  # shape (m, T)
    dropped: dict = field(default_factory=dict)

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        t = np.array(self.timestamps, dtype=float)
        v.setflags(write=False)
        t.setflags(write=False)
        object.__setattr__(self, "asset_ids", tuple(self.asset_ids))
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "timestamps", t)

    def __len__(self):
        return len(self.asset_ids)

    def series(self, asset_id: str) -> PriceSeries:
        i = self.asset_ids.index(asset_id)
        return PriceSeries(asset_id, self.timestamps, self.values[i])

    def as_series_list(self) -> list[PriceSeries]:
        return [PriceSeries(a, self.timestamps, v) for a, v in zip(self.asset_ids, self.values)]


def align(series: Sequence[PriceSeries], min_overlap: int = 3) -> AlignedPanel:
    """Restrict ``series`` to the intersection of their timestamp sets.

    Row order follows the input order.  ``dropped`` records, per asset, how
    many observations fell outside the common grid.
    """
    series = list(series)
    if len(series) < 2:
        raise AlignmentError(f"need at least 2 series to align, got {len(series)}")
    ids = [s.asset_id for s in series]
    dupes = sorted({a for a in ids if ids.count(a) > 1})
    if dupes:
        raise AlignmentError(f"duplicate asset ids: {', '.join(dupes)}")

    common = set(series[0].timestamps.tolist())
    for s in series[1:]:
        common &= set(s.timestamps.tolist())
    if len(common) < min_overlap:
        sizes = ", ".join(
            f"{a.asset_id}/{b.asset_id}={len(set(a.timestamps.tolist()) & set(b.timestamps.tolist()))}"
            for a, b in combinations(series, 2)
        )
        raise InsufficientOverlapError(
            f"common timestamps: {len(common)} (need >= {min_overlap}); pairwise overlaps: {sizes}"
        )

    grid = np.array(sorted(common), dtype=float)
    rows = []
    dropped = {}
    for s in series:
        mask = np.isin(s.timestamps, grid)
        rows.append(s.values[mask])
        dropped[s.asset_id] = int(len(s) - mask.sum())
    return AlignedPanel(tuple(ids), grid, np.vstack(rows), dropped)


def simple_returns(series) -> np.ndarray:
    """Fractional price changes ``(p[t+1] - p[t]) / p[t]``.

    Accepts a :class:`PriceSeries` or a plain sequence of prices.
    """
    p = np.asarray(series.values if isinstance(series, PriceSeries) else series, dtype=float)
    if p.size < 2:
        raise InputError("need at least 2 prices to form returns")
    return (p[1:] - p[:-1]) / p[:-1]


@dataclass(frozen=True)
class ManifestEntry:
    ticker: str
    path: Path
    is_market: bool = False


def load_manifest(path) -> list[ManifestEntry]:
    """Read a JSON manifest: a list of ``{ticker, path, is_market}`` objects.

    Relative paths are resolved against the manifest's directory.
    """
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", str(path), exc.lineno) from None
    if not isinstance(data, list):
        raise ParseError("manifest must be a JSON list", str(path))
    entries = []
    for i, item in enumerate(data):
        if not isinstance(item, dict) or "ticker" not in item or "path" not in item:
            raise ParseError(f"entry {i} needs 'ticker' and 'path'", str(path))
        p = Path(item["path"])
        if not p.is_absolute():
            p = path.parent / p
        entries.append(ManifestEntry(str(item["ticker"]), p, bool(item.get("is_market", False))))
    markets = [e.ticker for e in entries if e.is_market]
    if len(markets) > 1:
        raise ParseError(f"more than one market entry: {', '.join(markets)}", str(path))
    return entries


def load_all(entries: Iterable[ManifestEntry]) -> list[PriceSeries]:
    return [parse_csv(e.path, asset_id=e.ticker) for e in entries]
