import pytest

from ctrwpricer import DEModel


@pytest.fixture
def de_model() -> DEModel:
    """Reference two-sided exponential market: rho=2, gamma=9, r=4%."""
    return DEModel.risk_neutral(2.0, 9.0, 0.04)
