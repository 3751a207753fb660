import pytest
from hypothesis import settings

from classinv.reciprocity import OrderContext, build_group, class_invariant_basis
from classinv.weber import FunctionBasis

settings.register_profile("suite", deadline=None, max_examples=25)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def g_basis():
    return FunctionBasis.g_family()


@pytest.fixture(scope="session")
def nu5_basis():
    return FunctionBasis.nu_family(5)


@pytest.fixture(scope="session")
def nu7_basis():
    return FunctionBasis.nu_family(7)


@pytest.fixture(scope="session")
def ctx571():
    return OrderContext.make(-571, 72)


@pytest.fixture(scope="session")
def grp571(ctx571):
    return build_group(ctx571)


@pytest.fixture(scope="session")
def ctx91_120():
    return OrderContext.make(-91, 120)


@pytest.fixture(scope="session")
def grp91_120(ctx91_120):
    return build_group(ctx91_120)


@pytest.fixture(scope="session")
def ctx91_168():
    return OrderContext.make(-91, 168)


@pytest.fixture(scope="session")
def grp91_168(ctx91_168):
    return build_group(ctx91_168)


@pytest.fixture(scope="session")
def ctx299():
    return OrderContext.make(-299, 72)


@pytest.fixture(scope="session")
def grp299(ctx299):
    return build_group(ctx299)


@pytest.fixture(scope="session")
def descent571(grp571, g_basis):
    return class_invariant_basis(grp571, g_basis, seed=0)


@pytest.fixture(scope="session")
def descent91_5(grp91_120, nu5_basis):
    return class_invariant_basis(grp91_120, nu5_basis, seed=0)


@pytest.fixture(scope="session")
def descent91_7(grp91_168, nu7_basis):
    return class_invariant_basis(grp91_168, nu7_basis, seed=0)


@pytest.fixture(scope="session")
def descent299(grp299, g_basis):
    return class_invariant_basis(grp299, g_basis, seed=0)
