from fractions import Fraction

import numpy as np
import pytest

from app.core.errors import DomainError, WordTooLongError
from app.models.algebra_model import FiniteAbelianAlgebra, FreeWord
from app.utils.functional_calculus import matrix_sign
from app.utils.freeprod import FreeProduct
from app.utils.twoproj import (
    anticommutator_defect,
    build_two_projection_model,
    moment_with_error,
    node_identity_defects,
    node_matrices,
    sign_unitary_moment,
    swap_identity_defect,
)


@pytest.fixture(scope="module", params=[Fraction(1, 2), Fraction(1, 4), Fraction(1, 3)])
def model(request):
    return build_two_projection_model(request.param)


def test_weights_sum_to_one(model):
    assert model.total_weight == pytest.approx(1.0, abs=1e-8)
    assert np.all(model.weights >= 0)
    assert model.node_count == 256


def test_basic_moments(model):
    a = float(model.alpha)
    assert sign_unitary_moment(model, "p") == pytest.approx(a, abs=1e-8)
    assert sign_unitary_moment(model, "q") == pytest.approx(a, abs=1e-8)
    assert sign_unitary_moment(model, "pq") == pytest.approx(a * a, abs=1e-8)
    assert sign_unitary_moment(model, "pqpq") == pytest.approx(2 * a**3 - a**4, abs=1e-8)
    assert sign_unitary_moment(model, "u") == pytest.approx(-(1 - 2 * a), abs=1e-8)
    assert sign_unitary_moment(model, "uu") == pytest.approx(1.0, abs=1e-8)
    assert sign_unitary_moment(model, "upuq") == pytest.approx(a, abs=1e-8)


def test_agrees_with_exact_engine(model):
    alpha = model.alpha
    a1 = FiniteAbelianAlgebra(id=1, atom_weights=(alpha, 1 - alpha))
    a2 = FiniteAbelianAlgebra(id=2, atom_weights=(alpha, 1 - alpha))
    letters = {"p": a1.projection([0]), "q": a2.projection([0])}
    product = FreeProduct([a1, a2])
    for word in ("pqpqpq", "pqqppq", "ppqpqqpq"):
        exact = float(product.trace(FreeWord(tuple(letters[c] for c in word))))
        assert sign_unitary_moment(model, word) == pytest.approx(exact, abs=1e-6)


def test_node_identities(model):
    defects = node_identity_defects(model)
    assert set(defects) == {"u_selfadjoint", "u_squared", "u_p_u_equals_q", "u_q_u_equals_p"}
    assert max(defects.values()) < 1e-12
    assert swap_identity_defect(model) < 1e-12


def test_anticommutators_vanish_on_nodes(model):
    defects = anticommutator_defect(model)
    assert defects["x"] < 1e-12
    assert defects["sign"] < 1e-12


def test_node_u_is_the_sign_of_p_plus_q_minus_one(model):
    mats = node_matrices(model)
    x = mats["p"] + mats["q"] - np.eye(2)
    # away from the degenerate end the eigendecomposition is well conditioned
    keep = np.cos(model.angles) > 1e-2
    assert np.allclose(matrix_sign(x[keep], 1e-10), mats["u"][keep], atol=1e-10)
    # the nodes closest to t = pi/2 are where the intertwining is most delicate
    worst = np.argsort(np.cos(model.angles))[:4]
    u, p, q = mats["u"][worst], mats["p"][worst], mats["q"][worst]
    assert np.max(np.abs(u @ p @ u - q)) < 1e-13


def test_u_intertwines_inside_words(model):
    for suffix in ("p", "qu", "pqp", "uqpu"):
        assert sign_unitary_moment(model, "upu" + suffix) == pytest.approx(
            sign_unitary_moment(model, "q" + suffix), abs=1e-10
        )


def test_node_matrices_are_read_only(model):
    mats = node_matrices(model)
    with pytest.raises(ValueError):
        mats["u"][0, 0, 0] = 2.0


def test_resolution_error_is_small(model):
    estimate = moment_with_error(model, "upq")
    assert estimate.word == "upq"
    assert estimate.est_error < 1e-6


def test_model_is_cached():
    assert build_two_projection_model(Fraction(1, 2)) is build_two_projection_model("1/2")


def test_invalid_words(model):
    with pytest.raises(DomainError):
        sign_unitary_moment(model, "")
    with pytest.raises(DomainError):
        sign_unitary_moment(model, "pxq")
    with pytest.raises(WordTooLongError):
        sign_unitary_moment(model, "pq" * 7)


def test_invalid_parameters():
    with pytest.raises(DomainError):
        build_two_projection_model(Fraction(3, 4))
    with pytest.raises(DomainError):
        build_two_projection_model(Fraction(1, 2), node_count=8)
