import pytest

from ebcsim.codes import split_support_code
from ebcsim.params import ProtocolParams


@pytest.fixture
def code16():
    """The [16,2,10] code with g1 = 1^10 0^6, g2 = 0^6 1^10."""
    return split_support_code(16, 10)


@pytest.fixture
def params16():
    return ProtocolParams(n=16, m=8, t=1, gamma=0.0, k=2, d=10, ell=1)
