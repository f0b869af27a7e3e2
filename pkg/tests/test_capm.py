import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import PANEL
from chebfolio.capm import CapmEstimate, CapmInputs, beta, estimate, expected_return, phi
from chebfolio.chebyshev_core import DomainMap
from chebfolio.errors import AlignmentError, InputError, ZeroVarianceError
from chebfolio.fitting import CoefficientVector, FitConfig, fit
from chebfolio.ingestion import PriceSeries, align, parse_csv

INPUTS = CapmInputs(0.02, 0.08)


def prices_from_returns(r, p0=100.0):
    return p0 * np.cumprod(np.concatenate([[1.0], 1 + np.asarray(r)]))


@pytest.fixture(scope="module")
def fixture_panel():
    panel = align([parse_csv(PANEL / f"{t}.csv") for t in ("MKT", "FOXT", "GOLF")])
    return {s.asset_id: s for s in panel.as_series_list()}


class TestBeta:
    def test_market_with_itself(self):
        t = np.arange(6.0)
        m = PriceSeries("M", t, prices_from_returns([0.01, -0.02, 0.03, 0.0, 0.015]))
        assert beta(m, m) == pytest.approx(1.0, abs=1e-15)

    def test_twice_market(self):
        rm = np.array([0.01, -0.02, 0.03, 0.0, 0.015])
        t = np.arange(6.0)
        m = PriceSeries("M", t, prices_from_returns(rm))
        a = PriceSeries("A", t, prices_from_returns(2 * rm))
        assert beta(a, m) == pytest.approx(2.0, abs=1e-12)

    def test_fixture_golden(self, fixture_panel):
        # frozen from tests/oracles.beta on the committed fixture CSVs
        m = fixture_panel["MKT"]
        assert beta(fixture_panel["FOXT"], m) == pytest.approx(1.840427849451673, abs=1e-12)
        assert beta(fixture_panel["GOLF"], m) == pytest.approx(-1.0664478511906863, abs=1e-12)

    def test_zero_market_variance(self):
        t = np.arange(5.0)
        flat = PriceSeries("M", t, np.full(5, 10.0))
        a = PriceSeries("A", t, [1, 2, 3, 2, 1])
        with pytest.raises(ZeroVarianceError):
            beta(a, flat)

    def test_alignment(self):
        a = PriceSeries("A", np.arange(5.0), [1, 2, 3, 2, 1])
        b = PriceSeries("B", np.arange(1.0, 6.0), [1, 2, 3, 2, 1])
        with pytest.raises(AlignmentError):
            beta(a, b)

    @settings(max_examples=50, deadline=None)
    @given(st.floats(1e-3, 1e3), st.integers(0, 2**32 - 1))
    def test_price_scale_invariance(self, alpha, seed):
        rng = np.random.default_rng(seed)
        t = np.arange(40.0)
        m = PriceSeries("M", t, prices_from_returns(0.01 * rng.standard_normal(39)))
        a = PriceSeries("A", t, prices_from_returns(0.02 * rng.standard_normal(39)))
        assert beta(a.scaled(alpha), m) == pytest.approx(beta(a, m), abs=1e-10)


class TestPhi:
    def test_market_is_one(self):
        m = CoefficientVector("M", np.array([3.0, -0.2, 0.7, 1e-3]), DomainMap(0, 1))
        assert phi(m, m) == 1.0

    def test_orthogonal(self):
        d = DomainMap(0, 1)
        assert phi(CoefficientVector("A", [0, 1], d), CoefficientVector("M", [1, 0], d)) == 0.0

    def test_fixture_golden(self, fixture_panel):
        # frozen from the chebfit + fsum cosine oracle at degree 30
        cvs = {k: fit(s, FitConfig(30)) for k, s in fixture_panel.items()}
        assert phi(cvs["FOXT"], cvs["MKT"]) == pytest.approx(0.9954079075684554, abs=1e-10)
        assert phi(cvs["GOLF"], cvs["MKT"]) == pytest.approx(0.9731543543605057, abs=1e-10)
        assert phi(cvs["FOXT"], cvs["MKT"], drop_constant=True) == pytest.approx(
            0.12383945559159203, abs=1e-9
        )

    @settings(max_examples=100, deadline=None)
    @given(st.lists(st.tuples(st.floats(-1e3, 1e3), st.floats(-1e3, 1e3)), min_size=1, max_size=20))
    def test_symmetric_and_bounded(self, pairs):
        a = np.array([p[0] for p in pairs])
        m = np.array([p[1] for p in pairs])
        if np.linalg.norm(a) < 1e-100 or np.linalg.norm(m) < 1e-100:
            return
        d = DomainMap(0, 1)
        ca, cm = CoefficientVector("A", a, d), CoefficientVector("M", m, d)
        assert abs(phi(ca, cm) - phi(cm, ca)) <= 1e-12
        assert -1.0 <= phi(ca, cm) <= 1.0


class TestExpectedReturn:
    @pytest.mark.parametrize("k, expected", [(1.0, 0.08), (0.0, 0.02), (0.5, 0.05)])
    def test_values(self, k, expected):
        assert expected_return(k, INPUTS) == pytest.approx(expected, abs=1e-15)

    def test_non_finite(self):
        with pytest.raises(InputError):
            expected_return(float("nan"), INPUTS)
        with pytest.raises(InputError):
            CapmInputs(float("inf"), 0.1)

    @settings(max_examples=100, deadline=None)
    @given(st.floats(-2, 2), st.floats(-2, 2), st.floats(0, 1))
    def test_affine(self, a, b, lam):
        lhs = expected_return(lam * a + (1 - lam) * b, INPUTS)
        rhs = lam * expected_return(a, INPUTS) + (1 - lam) * expected_return(b, INPUTS)
        assert abs(lhs - rhs) <= 1e-12


def test_estimate_self_consistent(fixture_panel):
    cvs = {k: fit(s, FitConfig(30)) for k, s in fixture_panel.items()}
    e = estimate(fixture_panel["FOXT"], fixture_panel["MKT"], cvs["FOXT"], cvs["MKT"], INPUTS)
    assert isinstance(e, CapmEstimate)
    assert e.expected_return_phi == INPUTS.risk_free_rate + e.phi * INPUTS.premium
    assert e.expected_return_beta == INPUTS.risk_free_rate + e.beta * INPUTS.premium
    m = estimate(fixture_panel["MKT"], fixture_panel["MKT"], cvs["MKT"], cvs["MKT"], INPUTS)
    assert m.phi == 1.0 and m.beta == pytest.approx(1.0, abs=1e-15)
