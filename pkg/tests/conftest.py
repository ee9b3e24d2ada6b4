"""Test helpers for pytest"""
import pytest

from pyfreegroups.homomorphism import Homomorphism
from pyfreegroups.stallings import StallingsGraph, build
from pyfreegroups.words import parse_word

from .const import EXAMPLE_A2_GENERATORS, INDEX_TWO_IMAGES


@pytest.fixture(name="a2_graph")
def a2_graph_fixture() -> StallingsGraph:
    """Create the subgroup graph of <abAB, bbbb, aaa>"""
    return build(2, [parse_word(text, 2) for text in EXAMPLE_A2_GENERATORS])


@pytest.fixture(name="index_two_hom")
def index_two_hom_fixture() -> Homomorphism:
    """Create the injective homomorphism a -> aa, b -> b, c -> abA"""
    return Homomorphism.parse(INDEX_TWO_IMAGES, 2)
