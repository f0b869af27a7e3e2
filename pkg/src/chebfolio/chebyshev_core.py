"""Chebyshev polynomials of the first kind and finite Chebyshev sums.

Single polynomials are evaluated with the three-term recurrence
``T_{n+1} = 2x T_n - T_{n-1}``; sums are evaluated with Clenshaw's backward
recurrence so that degree-200+ expansions keep their digits.  The direct
definition ``cos(n arccos x)`` is kept alongside as an independent check.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from chebfolio.errors import DegenerateDomainError, DomainError

#: Inputs this far outside [-1, 1] are clamped instead of rejected.
CLAMP_TOL = 1e-12


def _as_unit(x):
    """Validate ``x`` against [-1, 1] and clamp rounding-level overshoot."""
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("argument must be finite")
    if np.any(arr < -1.0 - CLAMP_TOL) or np.any(arr > 1.0 + CLAMP_TOL):
        bad = arr[(arr < -1.0 - CLAMP_TOL) | (arr > 1.0 + CLAMP_TOL)].ravel()[0]
        raise DomainError(f"x={bad!r} lies outside [-1, 1]")
    return np.clip(arr, -1.0, 1.0)


def _check_degree(n):
    if int(n) != n or n < 0:
        raise ValueError(f"degree must be a nonnegative integer, got {n!r}")
    return int(n)


def _unwrap(result, x):
    return float(result) if np.ndim(x) == 0 else result


def eval_T(n, x):
    """Evaluate T_n(x) by the three-term recurrence.

    Parameters
    ----------
    n : int
        Polynomial degree, ``n >= 0``.
    x : float or array_like
        Points in [-1, 1].

    Returns
    -------
    float or ndarray
        ``T_n(x)``, with the same shape as ``x``.
    """
    n = _check_degree(n)
    xs = _as_unit(x)
    t_prev = np.ones_like(xs)
    if n == 0:
        return _unwrap(t_prev, x)
    t_cur = xs.copy()
    two_x = 2.0 * xs
    for _ in range(n - 1):
        t_prev, t_cur = t_cur, two_x * t_cur - t_prev
    return _unwrap(t_cur, x)


def eval_T_trig(n, x):
    """Evaluate T_n(x) as ``cos(n * arccos(x))``."""
    n = _check_degree(n)
    xs = _as_unit(x)
    return _unwrap(np.cos(n * np.arccos(xs)), x)


def vander(x, degree):
    """Chebyshev-Vandermonde matrix ``V[i, k] = T_k(x_i)`` for k = 0..degree."""
    degree = _check_degree(degree)
    xs = _as_unit(x).ravel()
    V = np.empty((xs.size, degree + 1))
    V[:, 0] = 1.0
    if degree >= 1:
        V[:, 1] = xs
    for k in range(1, degree):
        V[:, k + 1] = 2.0 * xs * V[:, k] - V[:, k - 1]
    return V


def clenshaw(coefficients, x):
    """Evaluate ``sum_k c_k T_k(x)`` on [-1, 1] by Clenshaw's recurrence."""
    c = np.asarray(coefficients, dtype=float)
    xs = _as_unit(x)
    b1 = np.zeros_like(xs)
    b2 = np.zeros_like(xs)
    two_x = 2.0 * xs
    for ck in c[:0:-1]:
        b1, b2 = ck + two_x * b1 - b2, b1
    return _unwrap(c[0] + xs * b1 - b2, x)


def gauss_nodes(count):
    """The ``count`` Chebyshev-Gauss nodes ``cos(pi (j + 1/2) / count)``."""
    j = np.arange(count)
    return np.cos(np.pi * (j + 0.5) / count)


@dataclass(frozen=True)
class DomainMap:
    """Affine bijection between the window [t0, t1] and [-1, 1]."""

    t0: float
    t1: float

    def __post_init__(self):
        t0, t1 = float(self.t0), float(self.t1)
        if not (np.isfinite(t0) and np.isfinite(t1)):
            raise DegenerateDomainError("domain endpoints must be finite")
        if not t1 > t0:
            raise DegenerateDomainError(f"need t1 > t0, got [{t0!r}, {t1!r}]")
        object.__setattr__(self, "t0", t0)
        object.__setattr__(self, "t1", t1)

    @property
    def width(self):
        return self.t1 - self.t0

    def forward(self, t):
        """Map time(s) to [-1, 1]; the endpoints map to -1 and +1 exactly."""
        t = np.asarray(t, dtype=float)
        x = ((t - self.t0) - (self.t1 - t)) / self.width
        return _unwrap(x, t)

    def inverse(self, x):
        x = np.asarray(x, dtype=float)
        t = 0.5 * ((1.0 - x) * self.t0 + (1.0 + x) * self.t1)
        return _unwrap(t, x)

    def contains(self, t):
        t = np.asarray(t, dtype=float)
        return bool(np.all((t >= self.t0) & (t <= self.t1)))


@dataclass(frozen=True)
class ChebSum:
    """A finite Chebyshev series ``sum_k c_k T_k`` over a time window."""

    coefficients: np.ndarray
    domain: DomainMap = field(default_factory=lambda: DomainMap(-1.0, 1.0))

    def __post_init__(self):
        c = np.array(self.coefficients, dtype=float).ravel()
        if c.size < 1:
            raise ValueError("a Chebyshev sum needs at least one coefficient")
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "coefficients", c)

    @property
    def degree(self):
        return self.coefficients.size - 1

    def __call__(self, t):
        return eval_sum(self, t)


def eval_sum(s: ChebSum, t):
    """Evaluate a Chebyshev sum at time(s) ``t`` inside its window.

    Raises
    ------
    DomainError
        If any ``t`` lies outside ``[t0, t1]``; sums are never extrapolated.
    """
    t_arr = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(t_arr)) or not s.domain.contains(t_arr):
        raise DomainError(
            f"time outside window [{s.domain.t0!r}, {s.domain.t1!r}]; "
            "extrapolation is not supported"
        )
    return clenshaw(s.coefficients, s.domain.forward(t_arr))
