import numpy as np
import pytest

from zcaq.catalog import DEFAULT_CATALOG_PATH, Catalog
from zcaq.construct import QuadRecipe, build_quad


@pytest.fixture(scope='function')
def catalog():
    """Packaged seed catalog"""
    yield Catalog.load(DEFAULT_CATALOG_PATH)


@pytest.fixture(scope='function')
def rng():
    yield np.random.default_rng(20240517)


@pytest.fixture(scope='function')
def ex1_quad(catalog):
    """7x3 quad from the length-3 quaternary GCP and the (7,4)-ZCP"""
    yield build_quad(QuadRecipe(catalog.get('gcp3'), catalog.get('ex1_7_4')))


@pytest.fixture(scope='function')
def ex2_quad(catalog):
    """24x32 quad from the length-32 GCP and the (24,16)-ZCP"""
    yield build_quad(QuadRecipe(catalog.get('ex2_gcp32'), catalog.get('ex2_24_16')))


@pytest.fixture(scope='function')
def ex3_quad(catalog):
    """18x26 quad from the length-26 GCP and the (18,13)-ZCP"""
    yield build_quad(QuadRecipe(catalog.get('gcp26'), catalog.get('ex3_18_13')))
