import pytest

from capwaves import FluidParams, enumerate_triads


@pytest.fixture(scope="session")
def params_unit():
    return FluidParams(1.0)


@pytest.fixture(scope="session")
def triads_100(params_unit):
    return enumerate_triads(100, params_unit)


@pytest.fixture(scope="session")
def triads_by_wn(triads_100):
    return {t.wavenumbers: t for t in triads_100}
