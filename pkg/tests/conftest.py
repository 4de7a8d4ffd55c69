import pytest

from binfty.cli.fileformat import catalog_algebra, catalog_morphism


@pytest.fixture(scope="session")
def ground():
    return catalog_algebra("k")


@pytest.fixture(scope="session")
def dual():
    return catalog_algebra("dual")


@pytest.fixture(scope="session")
def trunc3():
    return catalog_algebra("trunc3")


@pytest.fixture(scope="session")
def dga():
    return catalog_algebra("dg")


@pytest.fixture(scope="session")
def unit_dual():
    return catalog_morphism("unit_dual")


@pytest.fixture(scope="session")
def id_dual():
    return catalog_morphism("id_dual")
