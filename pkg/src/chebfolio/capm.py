"""Classical CAPM beta and the coefficient-cosine variant phi.

Both feed the same expected-return line ``R_f + k * (E(R_m) - R_f)``; only
the sensitivity ``k`` differs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from chebfolio.errors import AlignmentError, InputError, ZeroVarianceError
from chebfolio.fitting import CoefficientVector
from chebfolio.ingestion import PriceSeries, simple_returns
from chebfolio.similarity import cosine


@dataclass(frozen=True)
class CapmInputs:
    """Per-period decimal rates: risk-free ``R_f`` and expected market ``E(R_m)``."""

    risk_free_rate: float
    expected_market_return: float

    def __post_init__(self):
        if not (math.isfinite(self.risk_free_rate) and math.isfinite(self.expected_market_return)):
            raise InputError("risk-free rate and expected market return must be finite")

    @property
    def premium(self):
        return self.expected_market_return - self.risk_free_rate


@dataclass(frozen=True)
class CapmEstimate:
    asset_id: str
    beta: float
    phi: float
    expected_return_beta: float
    expected_return_phi: float


def beta(asset: PriceSeries, market: PriceSeries) -> float:
    """``cov(R_i, R_m) / var(R_m)`` on simple returns, population moments."""
    if asset.timestamps.shape != market.timestamps.shape or np.any(
        asset.timestamps != market.timestamps
    ):
        raise AlignmentError(f"{asset.asset_id} and {market.asset_id} are not aligned")
    if len(market) < 3:
        raise InputError("need at least 3 observations")
    ra = simple_returns(asset)
    rm = simple_returns(market)
    dm = rm - rm.mean()
    var_m = float(np.dot(dm, dm)) / rm.size
    if not var_m > 0.0:
        raise ZeroVarianceError(f"{market.asset_id}: market returns have zero variance")
    cov = float(np.dot(ra - ra.mean(), dm)) / rm.size
    return cov / var_m


def phi(asset_cv: CoefficientVector, market_cv: CoefficientVector, drop_constant: bool = False) -> float:
    """Cosine between the asset's and the market's coefficient vectors."""
    return cosine(asset_cv, market_cv, drop_constant)


def expected_return(coefficient: float, inputs: CapmInputs) -> float:
    if not math.isfinite(coefficient):
        raise InputError(f"sensitivity coefficient must be finite, got {coefficient!r}")
    return inputs.risk_free_rate + coefficient * inputs.premium


def estimate(
    asset: PriceSeries,
    market: PriceSeries,
    asset_cv: CoefficientVector,
    market_cv: CoefficientVector,
    inputs: CapmInputs,
    drop_constant: bool = False,
) -> CapmEstimate:
    b = beta(asset, market)
    p = phi(asset_cv, market_cv, drop_constant)
    return CapmEstimate(
        asset.asset_id, b, p, expected_return(b, inputs), expected_return(p, inputs)
    )
