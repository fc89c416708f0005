import pytest


@pytest.fixture(scope="session")
def engine_comparison():
    """Every braid word of length <= 3 through both engines (slow; shared)."""
    from twistcc.deform import ExchangeGeometry, compare_engines, small_braiding_code
    code = small_braiding_code(4)
    return code, compare_engines(code, 3, ExchangeGeometry(2, 1))
