"""Cosine similarity of coefficient vectors, Pearson correlation of series,
and the agreement statistic between the two resulting matrices."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from chebfolio.errors import (
    AlignmentError,
    DegenerateError,
    LabelMismatchError,
    LengthMismatchError,
    NumericalError,
    ZeroVarianceError,
    ZeroVectorError,
)
from chebfolio.fitting import CoefficientVector
from chebfolio.ingestion import simple_returns

ZERO_NORM = 1e-300
# spread below this fraction of the data's magnitude counts as zero variance
REL_SPREAD = 1e-12
BASES = ("prices", "returns")


@dataclass(frozen=True)
class LabeledMatrix:
    """Square symmetric matrix with unit diagonal, rows and columns labelled."""

    labels: tuple
    entries: np.ndarray

    def __post_init__(self):
        e = np.array(self.entries, dtype=float)
        labels = tuple(self.labels)
        if e.ndim != 2 or e.shape != (len(labels), len(labels)):
            raise ValueError(f"entries of shape {e.shape} do not match {len(labels)} labels")
        e.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "entries", e)

    def __getitem__(self, pair):
        i, j = (self.labels.index(k) if isinstance(k, str) else k for k in pair)
        return float(self.entries[i, j])

    def upper_triangle(self) -> np.ndarray:
        """Strict upper-triangle entries in row-major order."""
        return self.entries[np.triu_indices(len(self.labels), 1)]

    def check(self, tol: float = 1e-12) -> None:
        """Raise ``NumericalError`` if symmetry, unit diagonal or bounds fail."""
        e = self.entries
        if np.max(np.abs(e - e.T), initial=0.0) > tol:
            raise NumericalError("matrix is not symmetric")
        if np.max(np.abs(np.diag(e) - 1.0), initial=0.0) > tol:
            raise NumericalError("diagonal is not 1")
        if np.any(np.abs(e) > 1.0 + tol):
            raise NumericalError("entries outside [-1, 1]")


@dataclass(frozen=True)
class AgreementReport:
    statistic: float
    pair_count: int


def _norm(c):
    n = float(np.linalg.norm(c))
    if not n > ZERO_NORM:
        raise ZeroVectorError("coefficient vector has zero norm")
    return n


def drop_constant_term(cv: CoefficientVector) -> CoefficientVector:
    """Copy of ``cv`` without c_0, so that only the shape of the series counts."""
    if cv.coefficients.size < 2:
        raise ZeroVectorError(f"{cv.asset_id}: nothing left after dropping c_0")
    return replace(cv, coefficients=cv.coefficients[1:], rank=None)


def normalize(cv: CoefficientVector) -> CoefficientVector:
    """Scale the coefficient vector to unit Euclidean norm."""
    c = cv.coefficients
    unit = c / _norm(c)
    # one refinement step pulls the norm to within an ulp of 1
    unit = unit / np.linalg.norm(unit)
    return replace(cv, coefficients=unit, rank=cv.rank)


def _cosine(a, b):
    if a.size != b.size:
        raise LengthMismatchError(f"coefficient lengths differ: {a.size} vs {b.size}")
    na, nb = _norm(a), _norm(b)
    if np.array_equal(a, b):
        return 1.0
    value = float(np.dot(a / na, b / nb))
    return min(1.0, max(-1.0, value))


def cosine(a: CoefficientVector, b: CoefficientVector, drop_constant: bool = False) -> float:
    """Cosine of the angle between two coefficient vectors, clamped to [-1, 1].

    Both vectors are scaled to unit length before the dot product, which
    makes the result exactly symmetric in its arguments.  Identical vectors
    give exactly 1.
    """
    ca, cb = a.coefficients, b.coefficients
    if drop_constant:
        ca, cb = ca[1:], cb[1:]
    try:
        return _cosine(ca, cb)
    except (ZeroVectorError, LengthMismatchError) as exc:
        raise type(exc)(f"{a.asset_id} vs {b.asset_id}: {exc}") from None


def cosine_matrix(cvs: Sequence[CoefficientVector], drop_constant: bool = False) -> LabeledMatrix:
    """Pairwise cosines of all coefficient vectors."""
    cvs = list(cvs)
    if len(cvs) < 2:
        raise ValueError("need at least 2 coefficient vectors")
    m = len(cvs)
    out = np.eye(m)
    for i in range(m):
        for j in range(i + 1, m):
            out[i, j] = out[j, i] = cosine(cvs[i], cvs[j], drop_constant)
    # self-cosine is 1 by construction; recompute only to surface zero vectors
    for cv in cvs:
        cosine(cv, cv, drop_constant)
    return LabeledMatrix(tuple(cv.asset_id for cv in cvs), out)


def _unit_centered(r):
    """Centre ``r`` and scale it to unit length; None if it has no spread."""
    d = r - r.mean()
    sd = math.sqrt(float(np.dot(d, d)))
    scale = float(np.max(np.abs(r), initial=0.0))
    if sd <= REL_SPREAD * scale * math.sqrt(r.size) or sd == 0.0:
        return None
    return d / sd


def pearson(x, y) -> float:
    """Pearson correlation of two equal-length sequences, clamped to [-1, 1]."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size != y.size:
        raise LengthMismatchError(f"lengths differ: {x.size} vs {y.size}")
    ux, uy = _unit_centered(x), _unit_centered(y)
    if ux is None or uy is None:
        raise ZeroVarianceError("zero variance")
    return min(1.0, max(-1.0, float(np.dot(ux, uy))))


def pearson_matrix(series, basis: str = "prices") -> LabeledMatrix:
    """Pearson correlations between aligned price series.

    ``basis`` is ``"prices"`` (raw values) or ``"returns"`` (simple returns).
    """
    series = list(series)
    if basis not in BASES:
        raise ValueError(f"basis must be one of {BASES}, got {basis!r}")
    if len(series) < 2:
        raise ValueError("need at least 2 series")
    ref = series[0].timestamps
    for s in series[1:]:
        if s.timestamps.shape != ref.shape or np.any(s.timestamps != ref):
            raise AlignmentError(
                f"{s.asset_id} and {series[0].asset_id} have different timestamps; align first"
            )
    if len(ref) < 3:
        raise ValueError("need at least 3 observations")

    rows = [s.values if basis == "prices" else simple_returns(s) for s in series]
    centered = []
    for s, r in zip(series, rows):
        u = _unit_centered(np.asarray(r, dtype=float))
        if u is None:
            raise ZeroVarianceError(f"{s.asset_id}: zero variance on {basis} basis")
        centered.append(u)

    m = len(series)
    out = np.eye(m)
    for i in range(m):
        for j in range(i + 1, m):
            out[i, j] = out[j, i] = min(1.0, max(-1.0, float(np.dot(centered[i], centered[j]))))
    return LabeledMatrix(tuple(s.asset_id for s in series), out)


def agreement(m1: LabeledMatrix, m2: LabeledMatrix) -> AgreementReport:
    """Pearson correlation between the strict upper triangles of two matrices."""
    if m1.labels != m2.labels:
        raise LabelMismatchError(f"labels differ: {m1.labels} vs {m2.labels}")
    a, b = m1.upper_triangle(), m2.upper_triangle()
    if a.size < 2:
        raise DegenerateError("degenerate: zero variance (fewer than 2 off-diagonal pairs)")
    try:
        stat = pearson(a, b)
    except ZeroVarianceError:
        raise DegenerateError("degenerate: zero variance in off-diagonal entries") from None
    return AgreementReport(stat, int(a.size))
