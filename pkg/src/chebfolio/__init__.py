"""Chebyshev coefficient-vector analysis of price series.

Each asset's price path is expanded in Chebyshev polynomials of the first
kind; assets are then compared by the cosine of the angle between their
coefficient vectors, alongside ordinary Pearson correlation and a CAPM-style
expected return that uses the cosine in place of beta.
"""

from chebfolio.capm import CapmEstimate, CapmInputs, beta, expected_return, phi
from chebfolio.chebyshev_core import ChebSum, DomainMap, eval_sum, eval_T, eval_T_trig
from chebfolio.fitting import CoefficientVector, FitConfig, fit, fit_values, reconstruct
from chebfolio.ingestion import AlignedPanel, PriceSeries, align, parse_csv, simple_returns
from chebfolio.similarity import (
    AgreementReport,
    LabeledMatrix,
    agreement,
    cosine,
    cosine_matrix,
    normalize,
    pearson_matrix,
)

__version__ = "0.1.0"
