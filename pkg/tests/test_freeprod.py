import itertools
import math
from fractions import Fraction

import pytest

from app.core.errors import DomainError, PartitionError
from app.models.algebra_model import FiniteAbelianAlgebra, FreeWord
from app.utils.exact_field import field_for_sqrt
from app.utils.freeprod import (
    FreeProduct,
    center,
    conditional_expectation,
    free_sum_moments,
    generator_constant,
    make_centered_generator,
    normal_form,
    odd_sign_unitary,
    trace_word,
    weak_fc_exact_check,
)


def _pair(alpha):
    a1 = FiniteAbelianAlgebra(id=1, atom_weights=(alpha, 1 - alpha))
    a2 = FiniteAbelianAlgebra(id=2, atom_weights=(alpha, 1 - alpha))
    return a1, a2, a1.projection([0]), a2.projection([0])


def test_pqpq_at_one_half(half_pair):
    a1, a2, p, q = half_pair
    assert trace_word(FreeWord((p, q, p, q)), [a1, a2]) == Fraction(3, 16)


@pytest.mark.parametrize("alpha", [Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(2, 3)])
def test_two_projection_words(alpha):
    a1, a2, p, q = _pair(alpha)
    product = FreeProduct([a1, a2])
    assert product.trace(FreeWord((p, q))) == alpha**2
    assert product.trace(FreeWord((p, q, p, q))) == 2 * alpha**3 - alpha**4
    # p is idempotent, so ppq reduces to pq
    assert product.trace(FreeWord((p, p, q))) == alpha**2


def test_empty_word_has_trace_one(half_pair):
    a1, a2, _, _ = half_pair
    assert trace_word(FreeWord(()), [a1, a2]) == 1


def test_alternating_centered_words_vanish():
    algebras = [
        FiniteAbelianAlgebra(id=1, atom_weights=(Fraction(1, 2), Fraction(1, 4), Fraction(1, 4))),
        FiniteAbelianAlgebra(id=2, atom_weights=(Fraction(1, 3), Fraction(2, 3))),
        FiniteAbelianAlgebra(id=3, atom_weights=(Fraction(1, 4),) * 4),
    ]
    centered = {
        1: [center(algebras[0].element([1, 2, 5])), center(algebras[0].element([0, 3, -1]))],
        2: [center(algebras[1].element([2, -1]))],
        3: [center(algebras[2].element([1, 0, 0, 4])), center(algebras[2].element([complex(0, 1), 1, 2, 0]))],
    }
    product = FreeProduct(algebras)
    for length in range(2, 7):
        for tags in itertools.product((1, 2, 3), repeat=length):
            if any(a == b for a, b in zip(tags, tags[1:])):
                continue
            letters = tuple(centered[t][k % len(centered[t])] for k, t in enumerate(tags))
            assert product.trace(FreeWord(letters)).is_zero, tags


def test_trace_is_cyclic():
    a1, a2, p, q = _pair(Fraction(1, 3))
    x = a1.element([2, -1])
    y = a2.element([1, 5])
    product = FreeProduct([a1, a2])
    word = FreeWord((p, y, x, q, x, y))
    for k in range(len(word)):
        assert product.trace(word.rotate(k)) == product.trace(word)


def test_normal_form_of_pq(half_pair):
    a1, a2, p, q = half_pair
    form = normal_form(FreeWord((p, q)), [a1, a2])
    assert form.scalar == Fraction(1, 4)
    assert [len(w) for _, w in form.terms] == [1, 1, 2]
    assert [c == Fraction(1, 2) for c, _ in form.terms[:2]] == [True, True]
    assert form.terms[2][0] == 1
    assert form.terms[2][1].algebra_ids == (1, 2)


def test_conditional_expectation_averages_blocks():
    alg = FiniteAbelianAlgebra(id=1, atom_weights=(Fraction(1, 4), Fraction(1, 4), Fraction(1, 2)))
    a = alg.element([1, 3, 5])
    e = conditional_expectation(a, [[0, 1], [2]])
    assert list(e.values) == [2, 2, 5]
    assert e.trace() == a.trace()


def test_conditional_expectation_needs_a_partition():
    alg = FiniteAbelianAlgebra(id=1, atom_weights=(Fraction(1, 4), Fraction(1, 4), Fraction(1, 2)))
    with pytest.raises(PartitionError):
        conditional_expectation(alg.element([1, 3, 5]), [[0], [2]])


@pytest.mark.parametrize("alpha", [Fraction(1, 2), Fraction(1, 4), Fraction(1, 5)])
def test_centered_generator_relation(alpha):
    v = make_centered_generator(1, alpha)
    c = generator_constant(alpha)
    assert v.trace() == 0
    assert (v * v).trace() == 1
    assert (v * v).values == (v * c).shift(-1).values


def test_generator_constant_values():
    assert generator_constant(Fraction(1, 2)) == 0
    assert abs(float(generator_constant(Fraction(1, 4))) - 2 / math.sqrt(3)) < 1e-14


def test_centered_generator_in_a_given_algebra():
    alg = FiniteAbelianAlgebra(id=4, atom_weights=(Fraction(1, 8), Fraction(1, 8), Fraction(3, 4)))
    v = make_centered_generator(4, Fraction(1, 4), alg)
    assert v.values[0] == v.values[1]
    assert v.trace() == 0
    with pytest.raises(DomainError):
        make_centered_generator(4, Fraction(1, 3), alg)


def test_free_sum_moments_arcsine():
    moments = free_sum_moments(Fraction(1, 2), 5)
    assert moments == [Fraction(math.comb(2 * k, k), 2**k) for k in range(1, 6)]


def test_odd_sign_unitary():
    alg, w, blocks = odd_sign_unitary(1, 3)
    assert (w * w).values == alg.unit().values
    assert w.trace() == 0
    assert conditional_expectation(w, blocks).is_zero


def test_weak_fc_exact_check_is_all_zero():
    values = weak_fc_exact_check(m=2, max_blocks=4)
    assert len(values) == 4 * 4 + 16 * 16
    assert all(v.is_zero for v in values.values())


def test_duplicate_or_unknown_algebras():
    a1, a2, p, _ = _pair(Fraction(1, 2))
    with pytest.raises(DomainError):
        FreeProduct([a1, a1])
    stray = FiniteAbelianAlgebra(id=9, atom_weights=(Fraction(1),))
    with pytest.raises(DomainError):
        FreeProduct([a1, a2]).trace(FreeWord((p, stray.unit())))


# -------------------------------------------------
# Random words: positivity, traciality, normal forms
# -------------------------------------------------
def _three_algebras():
    return [
        FiniteAbelianAlgebra(id=1, atom_weights=(Fraction(1, 2), Fraction(1, 4), Fraction(1, 4))),
        FiniteAbelianAlgebra(id=2, atom_weights=(Fraction(1, 3), Fraction(2, 3))),
        FiniteAbelianAlgebra(id=3, atom_weights=(Fraction(1, 5), Fraction(4, 5))),
    ]


def _random_word(rng, algebras, max_length, gaussian=False):
    letters = []
    for _ in range(int(rng.integers(1, max_length + 1))):
        alg = algebras[int(rng.integers(len(algebras)))]
        re = rng.integers(-3, 4, size=alg.size)
        if gaussian:
            im = rng.integers(-2, 3, size=alg.size)
            values = [complex(int(a), int(b)) for a, b in zip(re, im)]
        else:
            values = [int(a) for a in re]
        letters.append(alg.element(values))
    return FreeWord(tuple(letters))


def test_trace_of_w_times_its_adjoint_is_nonnegative(rng):
    algebras = _three_algebras()
    product = FreeProduct(algebras)
    for _ in range(25):
        word = _random_word(rng, algebras, 5, gaussian=True)
        value = product.trace(word * word.adjoint())
        assert value.conjugate() == value
        assert value.as_fraction() >= 0


def test_trace_is_cyclic_on_random_words(rng):
    algebras = _three_algebras()
    product = FreeProduct(algebras)
    for _ in range(12):
        word = _random_word(rng, algebras, 8)
        expected = product.trace(word)
        for k in range(1, len(word)):
            assert product.trace(word.rotate(k)) == expected


def test_normal_form_keeps_the_trace(rng):
    algebras = _three_algebras()
    product = FreeProduct(algebras)
    for _ in range(15):
        word = _random_word(rng, algebras, 5)
        form = product.normal_form(word)
        assert form.scalar == product.trace(word)
        for _, term in form.terms:
            assert all(a != b for a, b in zip(term.algebra_ids, term.algebra_ids[1:]))
            assert all(letter.trace().is_zero for letter in term)


def test_centered_letter_under_a_projection_times_the_generator():
    alpha = Fraction(1, 4)
    a1 = FiniteAbelianAlgebra(id=1, atom_weights=(Fraction(1, 8), Fraction(1, 8), Fraction(3, 4)))
    a2 = FiniteAbelianAlgebra(id=2, atom_weights=(alpha, 1 - alpha))
    p11 = a1.projection([0, 1])
    x = a1.element([1, -1, 0])
    v1 = make_centered_generator(1, alpha, a1)
    assert (x * p11).trace() == 0

    form = normal_form(FreeWord((x * p11, v1)), [a1, a2])
    assert form.scalar == 0
    assert len(form.terms) == 1
    coef, term = form.terms[0]
    assert len(term) == 1
    # v1 equals (1 - alpha) / sqrt(alpha - alpha^2) on the support of p11
    field = field_for_sqrt(alpha - alpha**2)
    scale = field.rational(1 - alpha) / field.sqrt(alpha - alpha**2)
    assert [coef * v for v in term.letters[0].values] == [scale, -scale, 0]
