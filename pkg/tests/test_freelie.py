from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache
from itertools import product

import pytest

from tanaka import linalg
from tanaka.freelie import (
    DegreeBoundError,
    FreeLieAlgebra,
    GradedIdeal,
    LieElement,
    compute_W,
    free_ideal,
    ideal_close,
    is_lyndon,
    lyndon_basis,
    standard_factorization,
    validate_ideal,
    witt_dimension,
)

# ---------------------------------------------------------------- oracle
# Embed the free Lie algebra in the tensor algebra: P(a) = a, P(w) = P(u)P(v) - P(v)P(u).


def _assoc_mul(x: dict, y: dict) -> dict:
    out: dict = {}
    for a, c in x.items():
        for b, d in y.items():
            out[a + b] = out.get(a + b, 0) + c * d
    return {k: v for k, v in out.items() if v}


def _assoc_commutator(x: dict, y: dict) -> dict:
    out = dict(_assoc_mul(x, y))
    for k, v in _assoc_mul(y, x).items():
        out[k] = out.get(k, 0) - v
    return {k: v for k, v in out.items() if v}


@lru_cache(maxsize=None)
def _expand_word(w: tuple) -> tuple:
    if len(w) == 1:
        return ((w, 1),)
    u, v = standard_factorization(w)
    return tuple(_assoc_commutator(dict(_expand_word(u)), dict(_expand_word(v))).items())


def expand(x: LieElement) -> dict:
    out: dict = {}
    for w, c in x.coeffs.items():
        for k, v in _expand_word(w):
            out[k] = out.get(k, 0) + c * v
    return {k: v for k, v in out.items() if v}


def random_element(alg: FreeLieAlgebra, p: int, rng: random.Random) -> LieElement:
    return alg.element(p, [Fraction(rng.randint(-2, 2)) for _ in range(alg.dim(p))])


# ----------------------------------------------------------------- tests

def _naive_lyndon_count(n: int, p: int) -> int:
    return sum(1 for w in product(range(n), repeat=p) if is_lyndon(w))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_witt_dimensions(n):
    for p in range(1, 7):
        assert len(lyndon_basis(n, p)) == witt_dimension(n, p)
        if n ** p <= 5000:
            assert witt_dimension(n, p) == _naive_lyndon_count(n, p)


def test_witt_known_values():
    assert [witt_dimension(2, p) for p in range(1, 7)] == [2, 1, 2, 3, 6, 9]
    assert [witt_dimension(3, p) for p in range(1, 5)] == [3, 3, 8, 18]


def test_lyndon_basis_sorted_and_lyndon():
    words = lyndon_basis(3, 4)
    assert list(words) == sorted(words)
    assert all(is_lyndon(w) for w in words)


def test_standard_factorization_pieces_are_lyndon():
    for w in lyndon_basis(3, 5):
        u, v = standard_factorization(w)
        assert u + v == w and is_lyndon(u) and is_lyndon(v) and u < v


def test_known_brackets():
    alg = FreeLieAlgebra(2, 4)
    e0, e1 = alg.generator(0), alg.generator(1)
    e01 = alg.bracket(e0, e1)
    assert e01.coeffs == {(0, 1): 1}
    assert alg.bracket(e01, e0).coeffs == {(0, 0, 1): -1}


@pytest.mark.parametrize("n,p,q", [(2, 1, 1), (2, 2, 3), (3, 1, 2), (3, 2, 2), (3, 1, 4), (4, 2, 1)])
def test_bracket_matches_tensor_algebra(n, p, q):
    alg = FreeLieAlgebra(n, p + q)
    rng = random.Random(n * 100 + p * 10 + q)
    for _ in range(5):
        x, y = random_element(alg, p, rng), random_element(alg, q, rng)
        assert expand(alg.bracket(x, y)) == _assoc_commutator(expand(x), expand(y))


def test_antisymmetry():
    alg = FreeLieAlgebra(3, 5)
    rng = random.Random(1)
    for p, q in [(1, 1), (1, 2), (2, 3), (1, 4)]:
        x, y = random_element(alg, p, rng), random_element(alg, q, rng)
        assert alg.bracket(x, y) == -alg.bracket(y, x)


def test_jacobi_on_random_triples():
    alg = FreeLieAlgebra(3, 6)
    rng = random.Random(7)
    for _ in range(100):
        p, q, r = (rng.randint(1, 2) for _ in range(3))
        x, y, z = (random_element(alg, d, rng) for d in (p, q, r))
        total = (alg.bracket(x, alg.bracket(y, z))
                 + alg.bracket(y, alg.bracket(z, x))
                 + alg.bracket(z, alg.bracket(x, y)))
        assert total.is_zero()


def test_degree_bound():
    alg = FreeLieAlgebra(2, 2)
    with pytest.raises(DegreeBoundError):
        alg.bracket(alg.generator(0), alg.element(2, [1]))


def test_derivation_is_a_derivation():
    alg = FreeLieAlgebra(3, 4)
    rng = random.Random(3)
    a = [[Fraction(rng.randint(-2, 2)) for _ in range(3)] for _ in range(3)]
    for _ in range(5):
        x, y = random_element(alg, 1, rng), random_element(alg, 2, rng)
        lhs = alg.derivation(a, alg.bracket(x, y))
        rhs = alg.bracket(alg.derivation(a, x), y) + alg.bracket(x, alg.derivation(a, y))
        assert lhs == rhs


def test_ideal_close_is_a_fixed_point():
    alg = FreeLieAlgebra(3, 4)
    gen = alg.bracket(alg.generator(0), alg.generator(1))
    k = ideal_close(3, 3, [(2, gen)])
    assert validate_ideal(k)
    again = ideal_close(3, 3, [(p, r) for p in (2, 3) for r in k.slices[p]])
    assert again.slices == k.slices
    assert k.dim(3) == 3  # [e_i, [e0, e1]] for i = 0, 1, 2


def test_validate_rejects_non_ideal():
    # K_{-2} = span e0∧e1 with K_{-3} = 0 is not closed under brackets
    k = GradedIdeal(3, 3, {2: ((Fraction(1), Fraction(0), Fraction(0)),), 3: ()})
    assert not validate_ideal(k)


def test_validate_rejects_full_degree_two():
    k = GradedIdeal(2, 2, {2: ((Fraction(1),),)})
    assert not validate_ideal(k)


def test_quotient_dims():
    k = free_ideal(2, 3)
    assert [k.quotient_dim(p) for p in (1, 2, 3)] == [2, 1, 2]
    assert k.quotient_dim(4) == 0


def test_W_of_free_kind_three_is_zero():
    assert compute_W(free_ideal(2, 3)) == []


def test_W_is_everything_in_kind_two():
    assert compute_W(free_ideal(3, 2)) == linalg.identity(3)


def test_W_of_a_partial_ideal():
    # K_{-3} = span P(001) contains [e0, [e0, e1]] but not [e1, [e0, e1]]: W = span e0
    alg = FreeLieAlgebra(2, 4)
    k = ideal_close(2, 3, [(3, alg.vector(LieElement(3, {(0, 0, 1): 1})))])
    assert compute_W(k) == [[1, 0]]


def test_W_is_monotone_in_K():
    alg = FreeLieAlgebra(3, 4)
    rng = random.Random(11)
    for _ in range(10):
        small = ideal_close(3, 3, [(3, [rng.randint(-1, 1) for _ in range(alg.dim(3))])])
        extra = [(3, [rng.randint(-1, 1) for _ in range(alg.dim(3))])]
        big = ideal_close(3, 3, [(p, r) for p in (2, 3) for r in small.slices[p]] + extra)
        assert small.is_subideal_of(big)
        w_small, w_big = compute_W(small), compute_W(big)
        for v in w_small:
            assert linalg.reducer(w_big, 3).contains(v) if w_big else False
