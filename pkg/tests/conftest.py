import pytest

from ringheat.core import PhysicalParams, ReferenceCase


@pytest.fixture
def ref():
    return ReferenceCase()


@pytest.fixture
def ref_phys():
    """Dimensional embedding of the reference parameters (nu = 1, R20 = 1, T0 = 1)."""
    return PhysicalParams(rho=1.0, Cp=3.0, k_cond=24.0, mu=1.0, mu0=0.5,
                          T0=1.0, R10=2.0 ** 0.5, R20=1.0)
