from __future__ import annotations

from fractions import Fraction

import pytest

from treecodes.constructions import eks_code, eks_params


@pytest.fixture(scope="session")
def eks3():
    """Certified delta=1/2 layered-code parameters at k=3, built once."""
    return eks_params(3, Fraction(1, 2), seed=0)


@pytest.fixture(scope="session")
def eks3_code(eks3):
    return eks_code(eks3)


@pytest.fixture(scope="session")
def eks2():
    return eks_params(2, Fraction(1, 2), seed=0)
