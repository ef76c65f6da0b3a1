"""
Exact traces in reduced free products of finite abelian algebras.

The engine works on raw field elements internally: a letter is
``(algebra_id, values)`` with values in one common sympy algebraic field.
Words are reduced by merging adjacent letters from the same algebra and then
expanding the leftmost letter with non-zero trace as

    tau(... a ...) = tau(... a_centered ...) + tau(a) * tau(... removed ...)

which terminates because every step either lowers the number of non-centered
letters or shortens the word. A word whose letters are all centered and whose
neighbours come from different algebras has trace zero.
"""
from __future__ import annotations

import itertools
import logging
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Sequence

from sympy import Rational

from app.core.errors import DomainError, PartitionError
from app.models.algebra_model import AlgebraElement, FiniteAbelianAlgebra, FreeWord
from app.utils.exact_field import ExactField, ExactScalar, as_fraction, exact_field, field_for_sqrt

logger = logging.getLogger(__name__)


# -------------------------------------------------
# Single-algebra operations
# -------------------------------------------------
def center(a: AlgebraElement) -> AlgebraElement:
    """a - tau(a) 1"""
    return a.shift(a.trace())


def conditional_expectation(a: AlgebraElement, blocks: Sequence[Iterable[int]]) -> AlgebraElement:
    """
    Trace-preserving expectation onto the subalgebra of functions constant on
    each block. ``blocks`` must partition the atoms (0-based indices).
    """
    blocks = [tuple(sorted(set(b))) for b in blocks]
    seen = sorted(k for b in blocks for k in b)
    if seen != list(range(a.algebra.size)) or any(not b for b in blocks):
        raise PartitionError(f"blocks {blocks} do not partition {a.algebra.size} atoms")

    weights = a.algebra.atom_weights
    values: list[Any] = [None] * a.algebra.size
    for block in blocks:
        mass = sum(weights[k] for k in block)
        avg = a.field.zero
        for k in block:
            avg = avg + a.values[k] * (weights[k] / mass)
        for k in block:
            values[k] = avg
    return AlgebraElement(a.algebra, tuple(values))


def generator_constant(alpha: Any) -> ExactScalar:
    """c = (1 - 2 alpha) / sqrt(alpha - alpha^2), so that v^2 = 1 + c v."""
    alpha = _check_alpha(alpha)
    field = field_for_sqrt(alpha - alpha * alpha)
    return field.rational(1 - 2 * alpha) / field.sqrt(alpha - alpha * alpha)


def make_centered_generator(
    i: int, alpha: Any, algebra: FiniteAbelianAlgebra | None = None
) -> AlgebraElement:
    """
    The normalized centered projection v = (p - alpha) / sqrt(alpha - alpha^2)
    for a projection p of trace alpha.

    Without an algebra a two-atom algebra with weights (alpha, 1 - alpha) and
    id ``i`` is built. With one, the first set of atoms (in size order) whose
    weights sum to alpha is used.
    """
    alpha = _check_alpha(alpha)
    if algebra is None:
        algebra = FiniteAbelianAlgebra(id=i, atom_weights=(alpha, 1 - alpha))
        support: tuple[int, ...] = (0,)
    else:
        support = _find_support(algebra, alpha)

    s2 = alpha - alpha * alpha
    field = field_for_sqrt(s2)
    s = field.sqrt(s2)
    on = field.rational(1 - alpha) / s
    off = field.rational(-alpha) / s
    return AlgebraElement(algebra, tuple(on if k in support else off for k in range(algebra.size)))


def _find_support(algebra: FiniteAbelianAlgebra, alpha: Fraction) -> tuple[int, ...]:
    atoms = range(algebra.size)
    for size in range(1, algebra.size + 1):
        for subset in itertools.combinations(atoms, size):
            if sum(algebra.atom_weights[k] for k in subset) == alpha:
                return subset
    raise DomainError(f"algebra {algebra.id} has no projection of trace {alpha}")


def _check_alpha(alpha: Any) -> Fraction:
    alpha = as_fraction(alpha)
    if not 0 < alpha <= Fraction(1, 2):
        raise DomainError(f"alpha must lie in (0, 1/2], got {alpha}")
    return alpha


# -------------------------------------------------
# Free product of an indexed set of algebras
# -------------------------------------------------
@dataclass(frozen=True)
class NormalForm:
    """tau(w) 1 plus a combination of reduced centered words."""

    scalar: ExactScalar
    terms: tuple[tuple[ExactScalar, FreeWord], ...]


class FreeProduct:
    """
    An indexed family of finite abelian algebras and the free-product trace on
    words over them. Instances keep a subword memo; the memo is guarded by a
    lock so one instance can be shared between threads.
    """

    def __init__(self, algebras: Iterable[FiniteAbelianAlgebra]):
        self.algebras: dict[int, FiniteAbelianAlgebra] = {}
        for alg in algebras:
            if alg.id in self.algebras:
                raise DomainError(f"duplicate algebra id {alg.id}")
            self.algebras[alg.id] = alg
        self._field: ExactField | None = None
        self._weights: dict[int, tuple] = {}
        self._trace_memo: dict = {}
        self._form_memo: dict = {}
        self._lock = threading.RLock()

    # ---------- setup ----------

    def _prepare(self, word: FreeWord) -> list:
        for letter in word:
            alg = self.algebras.get(letter.algebra_id)
            if alg is None:
                raise DomainError(f"letter from unknown algebra {letter.algebra_id}")
            if alg.atom_weights != letter.algebra.atom_weights:
                raise DomainError(f"letter does not match algebra {alg.id}")

        field = self._field or exact_field()
        for letter in word:
            field = field.join(letter.field)
        if field is not self._field:
            # memo entries are raw field elements; a larger field invalidates them
            self._field = field
            self._trace_memo.clear()
            self._form_memo.clear()
            K = field.domain
            self._weights = {
                aid: tuple(K.from_sympy(Rational(w.numerator, w.denominator)) for w in alg.atom_weights)
                for aid, alg in self.algebras.items()
            }
        return [(a.algebra_id, tuple(field.coerce(v).rep for v in a.values)) for a in word]

    # ---------- public ----------

    def trace(self, word: FreeWord) -> ExactScalar:
        with self._lock:
            letters = self._prepare(word)
            value = self._trace(letters)
            return ExactScalar(self._field, value)

    def normal_form(self, word: FreeWord) -> NormalForm:
        with self._lock:
            letters = self._prepare(word)
            form = self._normal_form(letters)
        field = self._field
        scalar = field.zero
        terms = []
        for key, (coef, letters) in form.items():
            if not key:
                scalar = ExactScalar(field, coef)
                continue
            elements = tuple(
                AlgebraElement(self.algebras[aid], tuple(ExactScalar(field, v) for v in vals))
                for aid, vals in letters
            )
            terms.append((ExactScalar(field, coef), FreeWord(elements)))
        terms.sort(key=lambda t: (len(t[1]), t[1].algebra_ids))
        return NormalForm(scalar=scalar, terms=tuple(terms))

    # ---------- internals ----------

    def _tr(self, letter) -> Any:
        aid, vals = letter
        K = self._field.domain
        total = K.zero
        for w, v in zip(self._weights[aid], vals):
            total += w * v
        return total

    @staticmethod
    def _merge(letters: list) -> list:
        out: list = []
        for aid, vals in letters:
            if out and out[-1][0] == aid:
                _, prev = out.pop()
                vals = tuple(x * y for x, y in zip(prev, vals))
            out.append((aid, vals))
        return out

    @staticmethod
    def _key(letters: list) -> tuple:
        return tuple((aid, tuple(tuple(v.to_list()) for v in vals)) for aid, vals in letters)

    def _trace(self, letters: list):
        K = self._field.domain
        letters = self._merge(letters)
        # tau is cyclic: fold the last letter into the first while they share an algebra
        while len(letters) > 1 and letters[0][0] == letters[-1][0]:
            (aid, first), (_, last) = letters[0], letters[-1]
            letters = self._merge([(aid, tuple(x * y for x, y in zip(last, first)))] + letters[1:-1])
        if not letters:
            return K.one
        if any(not any(vals) for _, vals in letters):
            return K.zero
        if len(letters) == 1:
            return self._tr(letters[0])

        key = self._key(letters)
        cached = self._trace_memo.get(key)
        if cached is not None:
            return cached

        result = K.zero
        for idx, letter in enumerate(letters):
            t = self._tr(letter)
            if t:
                aid, vals = letter
                centered = (aid, tuple(v - t for v in vals))
                result = self._trace(letters[:idx] + [centered] + letters[idx + 1 :])
                result += t * self._trace(letters[:idx] + letters[idx + 1 :])
                break
        self._trace_memo[key] = result
        return result

    def _normal_form(self, letters: list) -> dict:
        K = self._field.domain
        letters = self._merge(letters)
        if not letters:
            return {(): (K.one, ())}
        if any(not any(vals) for _, vals in letters):
            return {}

        key = self._key(letters)
        cached = self._form_memo.get(key)
        if cached is not None:
            return cached

        result = None
        for idx, letter in enumerate(letters):
            t = self._tr(letter)
            if t:
                aid, vals = letter
                centered = (aid, tuple(v - t for v in vals))
                result = dict(self._normal_form(letters[:idx] + [centered] + letters[idx + 1 :]))
                for k, (coef, ls) in self._normal_form(letters[:idx] + letters[idx + 1 :]).items():
                    if k in result:
                        total = result[k][0] + t * coef
                        if total:
                            result[k] = (total, ls)
                        else:
                            del result[k]
                    else:
                        result[k] = (t * coef, ls)
                break
        if result is None:
            result = {key: (K.one, tuple(letters))}
        self._form_memo[key] = result
        return result


def trace_word(word: FreeWord, algebras: Iterable[FiniteAbelianAlgebra]) -> ExactScalar:
    """Exact free-product trace of ``word``."""
    return FreeProduct(algebras).trace(word)


def normal_form(word: FreeWord, algebras: Iterable[FiniteAbelianAlgebra]) -> NormalForm:
    return FreeProduct(algebras).normal_form(word)


# -------------------------------------------------
# Odd sign unitaries on discretized circles
# -------------------------------------------------
def odd_sign_unitary(algebra_id: int, m: int):
    """
    A 2m-atom uniform algebra modelling m symmetric angle pairs on the circle.

    Atom j sits at angle 2 pi (j + 1/2) / (2m); atoms j and 2m - 1 - j are
    mirror images. Returns ``(algebra, w, blocks)`` where w = sign(sin theta)
    and ``blocks`` are the mirror pairs (the even subalgebra).
    """
    if m < 1:
        raise DomainError(f"m must be positive, got {m}")
    algebra = FiniteAbelianAlgebra(id=algebra_id, atom_weights=(Fraction(1, 2 * m),) * (2 * m))
    w = algebra.element([1 if j < m else -1 for j in range(2 * m)])
    blocks = [(j, 2 * m - 1 - j) for j in range(m)]
    return algebra, w, blocks


def weak_fc_exact_check(m: int = 2, max_blocks: int = 4) -> dict[str, ExactScalar]:
    """
    Exact traces of alternating words between powers of u = w1 w2 and centered
    elements of the even subalgebras B1 * B2. Every value should be zero.
    """
    alg1, w1, blocks1 = odd_sign_unitary(1, m)
    alg2, w2, blocks2 = odd_sign_unitary(2, m)
    product = FreeProduct([alg1, alg2])

    def even_element(alg, blocks):
        values = [0] * alg.size
        for rank, block in enumerate(blocks):
            for k in block:
                values[k] = rank + 1
        return center(alg.element(values))

    b1, b2 = even_element(alg1, blocks1), even_element(alg2, blocks2)
    u_powers = {
        "u": (w1, w2),
        "u*": (w2, w1),
        "u^2": (w1, w2, w1, w2),
        "u*^2": (w2, w1, w2, w1),
    }
    b_words = {"b1": (b1,), "b2": (b2,), "b1b2": (b1, b2), "b2b1": (b2, b1)}

    results: dict[str, ExactScalar] = {}
    for blocks in range(2, max_blocks + 1, 2):
        for us in itertools.product(u_powers, repeat=blocks // 2):
            for bs in itertools.product(b_words, repeat=blocks // 2):
                letters: list[AlgebraElement] = []
                label = []
                for u_name, b_name in zip(us, bs):
                    letters += u_powers[u_name] + b_words[b_name]
                    label += [u_name, b_name]
                results[" ".join(label)] = product.trace(FreeWord(tuple(letters)))
    logger.debug("exact weak-fc check: %d words", len(results))
    return results


def free_sum_moments(alpha: Any, k_max: int) -> list[ExactScalar]:
    """tau((p + q)^k) for k = 1..k_max, p and q free projections of trace alpha."""
    alpha = as_fraction(alpha)
    if not 0 < alpha < 1:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")
    a1 = FiniteAbelianAlgebra(id=1, atom_weights=(alpha, 1 - alpha))
    a2 = FiniteAbelianAlgebra(id=2, atom_weights=(alpha, 1 - alpha))
    p, q = a1.projection([0]), a2.projection([0])
    product = FreeProduct([a1, a2])

    out = []
    for k in range(1, k_max + 1):
        total = exact_field().zero
        for letters in itertools.product((p, q), repeat=k):
            total = total + product.trace(FreeWord(letters))
        out.append(total)
    return out
