"""Least-squares Chebyshev expansions of sampled price series."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from chebfolio.chebyshev_core import ChebSum, DomainMap, eval_sum, vander
from chebfolio.errors import (
    DegenerateDomainError,
    DomainError,
    InputError,
    InsufficientSamplesError,
)

log = logging.getLogger(__name__)

DEFAULT_DEGREE = 226
ILL_CONDITIONED = 1e12


@dataclass(frozen=True)
class FitConfig:
    """Expansion degree; the number of terms is ``degree + 1``."""

    degree: int = DEFAULT_DEGREE

    def __post_init__(self):
        if int(self.degree) != self.degree or self.degree < 0:
            raise InputError(f"degree must be a nonnegative integer, got {self.degree!r}")


@dataclass(frozen=True)
class CoefficientVector:
    """Chebyshev coefficients c_0..c_N of one asset plus fit diagnostics.

    ``condition_number`` is the 2-norm condition estimate of the design
    matrix and ``rank`` the numerical rank used by the solver; a rank below
    ``degree + 1`` means trailing directions were unresolvable and their
    coefficients were set to zero.
    """

    asset_id: str
    coefficients: np.ndarray
    domain: DomainMap
    rmse: float = 0.0
    max_abs_residual: float = 0.0
    condition_number: float = 1.0
    rank: int | None = None

    def __post_init__(self):
        c = np.array(self.coefficients, dtype=float).ravel()
        if c.size < 1 or not np.all(np.isfinite(c)):
            raise ValueError(f"{self.asset_id}: coefficients must be a non-empty finite vector")
        if self.rmse < 0 or self.max_abs_residual < 0:
            raise ValueError("residual diagnostics must be nonnegative")
        c.setflags(write=False)
        object.__setattr__(self, "coefficients", c)
        if self.rank is None:
            object.__setattr__(self, "rank", c.size)

    @property
    def degree(self):
        return self.coefficients.size - 1

    @property
    def ill_conditioned(self):
        return self.condition_number > ILL_CONDITIONED

    def as_chebsum(self) -> ChebSum:
        return ChebSum(self.coefficients, self.domain)


def _lstsq_qr(A, y):
    """Minimum-residual solution of ``A c = y`` by column-pivoted Householder QR.

    Columns whose pivot falls below ``eps * max(A.shape) * |R[0, 0]|`` are
    treated as numerically dependent and get a zero coefficient.
    """
    Q, R, perm = scipy.linalg.qr(A, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R))
    tol = diag[0] * max(A.shape) * np.finfo(float).eps
    rank = int(np.count_nonzero(diag > tol))
    c = np.zeros(A.shape[1])
    c[perm[:rank]] = scipy.linalg.solve_triangular(R[:rank, :rank], Q[:, :rank].T @ y)
    # Condition of A equals that of R (Q is orthonormal).
    sv = scipy.linalg.svdvals(R)
    cond = float(sv[0] / sv[-1]) if sv[-1] > 0 else float("inf")
    return c, rank, cond


def fit_values(times, values, cfg: FitConfig = FitConfig(), asset_id: str = "") -> CoefficientVector:
    """Fit ``sum_k c_k T_k`` to samples ``(times, values)`` in the least-squares sense.

    The window [t0, t1] is the first and last sample time.  Values need
    not be positive.
    """
    t = np.asarray(times, dtype=float).ravel()
    y = np.asarray(values, dtype=float).ravel()
    if t.size != y.size:
        raise InputError(f"{asset_id}: {t.size} times but {y.size} values")
    if not (np.all(np.isfinite(t)) and np.all(np.isfinite(y))):
        raise InputError(f"{asset_id}: times and values must be finite")
    n_terms = cfg.degree + 1
    if n_terms > t.size:
        raise InsufficientSamplesError(
            f"{asset_id}: insufficient samples: degree {cfg.degree} needs at least "
            f"{n_terms} samples, got {t.size}"
        )
    if t.size and t[0] == t[-1] and np.all(t == t[0]):
        raise DegenerateDomainError(f"{asset_id}: all timestamps are equal")
    if np.any(np.diff(t) <= 0):
        raise InputError(f"{asset_id}: timestamps must be strictly increasing")

    domain = DomainMap(t[0], t[-1])
    A = vander(domain.forward(t), cfg.degree)
    c, rank, cond = _lstsq_qr(A, y)
    resid = A @ c - y
    rmse = float(np.sqrt(np.mean(resid**2)))
    max_abs = float(np.max(np.abs(resid)))
    if cond > ILL_CONDITIONED:
        log.warning(
            "%s: design matrix condition %.3g exceeds %.0e (numerical rank %d of %d)",
            asset_id, cond, ILL_CONDITIONED, rank, n_terms,
        )
    return CoefficientVector(asset_id, c, domain, rmse, max(max_abs, rmse), cond, rank)


def fit(series, cfg: FitConfig = FitConfig()) -> CoefficientVector:
    """Fit a Chebyshev expansion to a :class:`~chebfolio.ingestion.PriceSeries`."""
    return fit_values(series.timestamps, series.values, cfg, series.asset_id)


def reconstruct(cv: CoefficientVector, times) -> np.ndarray:
    """Evaluate the fitted expansion at ``times`` (all inside the fit window)."""
    t = np.atleast_1d(np.asarray(times, dtype=float))
    if not cv.domain.contains(t):
        raise DomainError(
            f"{cv.asset_id}: times must lie within [{cv.domain.t0!r}, {cv.domain.t1!r}]"
        )
    return np.asarray(eval_sum(cv.as_chebsum(), t))
