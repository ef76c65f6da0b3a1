from fractions import Fraction

import numpy as np
import pytest

from app.models.algebra_model import FiniteAbelianAlgebra
from app.utils.streams import StreamFactory


@pytest.fixture
def streams():
    return StreamFactory(seed=20240611)


@pytest.fixture
def rng():
    return np.random.default_rng(7)


@pytest.fixture
def half_pair():
    """Two algebras C^2 with weights (1/2, 1/2) and their projections p, q."""
    a1 = FiniteAbelianAlgebra(id=1, atom_weights=(Fraction(1, 2), Fraction(1, 2)))
    a2 = FiniteAbelianAlgebra(id=2, atom_weights=(Fraction(1, 2), Fraction(1, 2)))
    return a1, a2, a1.projection([0]), a2.projection([0])
