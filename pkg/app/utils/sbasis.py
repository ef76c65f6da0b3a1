"""
Multiplication of alternating words in two centered projection generators.

For a free pair of projections of trace alpha, v_k = (p_k - alpha)/sqrt(alpha - alpha^2)
satisfies v_k^2 = 1 + c v_k. Alternating words in v_1, v_2 together with the empty
word form a basis of the generated algebra, and every non-empty basis word has
trace zero.
"""
from __future__ import annotations

from functools import lru_cache

from app.core.errors import DomainError
from app.models.algebra_model import AlgebraElement, FreeWord, LinearCombination, SBasisWord
from app.utils.freeprod import generator_constant


@lru_cache(maxsize=4096)
def _multiply(a: tuple[int, ...], b: tuple[int, ...], alpha) -> LinearCombination:
    c = generator_constant(alpha)
    if not a or not b or a[-1] != b[0]:
        return LinearCombination([(SBasisWord(indices=a + b, alpha=alpha), c.field.one)])
    # a' v_k * v_k b' = a' (1 + c v_k) b'
    inner = _multiply(a[:-1], b[1:], alpha)
    return inner + LinearCombination([(SBasisWord(indices=a + b[1:], alpha=alpha), c)])


def sbasis_multiply(w1: SBasisWord, w2: SBasisWord) -> LinearCombination:
    """Product of two basis words as a combination of basis words."""
    if w1.alpha != w2.alpha:
        raise DomainError(f"words at different alpha: {w1.alpha} and {w2.alpha}")
    return _multiply(w1.indices, w2.indices, w1.alpha)


def sbasis_product(x: LinearCombination, y: LinearCombination) -> LinearCombination:
    out = LinearCombination()
    for w1, c1 in x.items():
        for w2, c2 in y.items():
            out = out + sbasis_multiply(w1, w2).scale(c1 * c2)
    return out


def sbasis_trace(x: LinearCombination):
    """Coefficient of the empty word."""
    for w, c in x.items():
        if len(w) == 0:
            return c
    return 0


def sbasis_swap(w: SBasisWord) -> SBasisWord:
    """v_1 <-> v_2, the automorphism implemented by the sign unitary."""
    return SBasisWord(indices=tuple(3 - i for i in w.indices), alpha=w.alpha)


def sbasis_words(alpha, max_length: int) -> list[SBasisWord]:
    """All basis words of length <= max_length, shortest first."""
    words = [SBasisWord(indices=(), alpha=alpha)]
    for length in range(1, max_length + 1):
        for first in (1, 2):
            indices = tuple(first if k % 2 == 0 else 3 - first for k in range(length))
            words.append(SBasisWord(indices=indices, alpha=alpha))
    return words


def sbasis_from_pairs(pairs, alpha) -> LinearCombination:
    """Build a combination from ``(indices, coefficient)`` pairs."""
    return LinearCombination((SBasisWord(indices=tuple(ix), alpha=alpha), c) for ix, c in pairs)


def sbasis_to_free_word(w: SBasisWord, generators: dict[int, AlgebraElement]) -> FreeWord:
    """Realize a basis word as a word in the given centered generators."""
    missing = {i for i in w.indices if i not in generators}
    if missing:
        raise DomainError(f"no generator for index {sorted(missing)}")
    return FreeWord(tuple(generators[i] for i in w.indices))
