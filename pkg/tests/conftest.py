"""Shared fixtures: the two-element worked example used across modules.

Universe pair A = B = {0,1}; the base class holds both unary constants
and the unary identity.  The function `fat_id` extends the identity by
an extra value at 0, `fat_both` takes both values everywhere.
"""

import pytest

from mvcon import MultiFunction, Universe, function_class


@pytest.fixture(scope="session")
def two_a():
    return Universe("A", 2)


@pytest.fixture(scope="session")
def two_b():
    return Universe("B", 2)


@pytest.fixture(scope="session")
def base_funcs(two_a, two_b):
    const0 = MultiFunction(two_a, two_b, 1, (0b01, 0b01))
    const1 = MultiFunction(two_a, two_b, 1, (0b10, 0b10))
    ident = MultiFunction(two_a, two_b, 1, (0b01, 0b10))
    return const0, const1, ident


@pytest.fixture(scope="session")
def base_class(two_a, two_b, base_funcs):
    return function_class(two_a, two_b, 1, base_funcs)


@pytest.fixture(scope="session")
def fat_id(two_a, two_b):
    # value {0,1} at 0, value {1} at 1
    return MultiFunction(two_a, two_b, 1, (0b11, 0b10))


@pytest.fixture(scope="session")
def fat_both(two_a, two_b):
    # value {0,1} everywhere
    return MultiFunction(two_a, two_b, 1, (0b11, 0b11))
