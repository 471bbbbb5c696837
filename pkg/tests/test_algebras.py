from __future__ import annotations

import random
from fractions import Fraction

import pytest

from tanaka import linalg
from tanaka.algebras import (
    MatrixSubspace,
    a0_compute,
    a0_direct,
    co,
    co_form,
    csp,
    g0_compute,
    gl,
    ideal_from_perp,
    k_perp,
    o_form,
    rho,
    sl,
    so,
    sp,
    ta_on_wedge,
    trace_orth,
    trace_pair,
    wedge_pairs,
)
from tanaka.freelie import FreeLieAlgebra, compute_W, free_ideal, ideal_close
from tanaka.problem import preset


def rand_matrix(n, rng, lo=-2, hi=2):
    return [[Fraction(rng.randint(lo, hi)) for _ in range(n)] for _ in range(n)]


@pytest.mark.parametrize("make,n,dim", [
    (gl, 3, 9), (sl, 3, 8), (so, 3, 3), (co, 2, 2), (co, 3, 4),
    (sp, 4, 10), (csp, 4, 11), (sp, 2, 3),
])
def test_classical_dimensions(make, n, dim):
    s = make(n)
    assert s.dim == dim
    assert s.is_lie_closed()


@pytest.mark.parametrize("make,n", [(sl, 3), (so, 3), (co, 3), (sp, 4), (csp, 4)])
def test_trace_orth_dimension_and_pairing(make, n):
    s = make(n)
    perp = trace_orth(s)
    assert perp.dim == n * n - s.dim
    for a in s.matrices():
        for y in perp.matrices():
            assert trace_pair(a, y) == 0
    assert trace_orth(perp).basis == s.basis


def test_co2_perp():
    perp = trace_orth(co(2))
    assert perp.contains([[1, 0], [0, -1]])
    assert perp.contains([[0, 1], [1, 0]])


def test_co_form_matches_definition():
    b = [[Fraction(1), Fraction(2)], [Fraction(0), Fraction(3)]]
    s = co_form(2, b)
    for x in s.matrices():
        lhs = linalg.matmul(linalg.transpose(x), b)
        lhs = [[u + v for u, v in zip(r1, r2)] for r1, r2 in zip(lhs, linalg.matmul(b, x))]
        # X^T B + B X is a multiple of B
        assert linalg.rank([sum(lhs, []), sum(b, [])], 4) == 1
    assert s.dim == 2


def test_rho_equivariance():
    rng = random.Random(5)
    n = 4
    for _ in range(10):
        a = rand_matrix(n, rng)
        x = [Fraction(rng.randint(-2, 2)) for _ in wedge_pairs(n)]
        tx = linalg.matvec(ta_on_wedge(a), x)
        r = rho(x, n)
        expected = [[u + v for u, v in zip(r1, r2)]
                    for r1, r2 in zip(linalg.matmul(a, r), linalg.matmul(r, linalg.transpose(a)))]
        assert rho(tx, n) == expected


def test_trace_adjunction_on_o():
    rng = random.Random(6)
    n = 3
    for _ in range(10):
        a = rand_matrix(n, rng)
        x = [Fraction(rng.randint(-2, 2)) for _ in wedge_pairs(n)]
        y = rho([Fraction(rng.randint(-2, 2)) for _ in wedge_pairs(n)], n)
        tx = linalg.matvec(ta_on_wedge(a), x)
        adj = [[u + v for u, v in zip(r1, r2)]
               for r1, r2 in zip(linalg.matmul(y, a), linalg.matmul(linalg.transpose(a), y))]
        assert trace_pair(rho(tx, n), y) == trace_pair(rho(x, n), adj)


def test_ta_on_wedge_agrees_with_free_lie_derivation():
    rng = random.Random(8)
    alg = FreeLieAlgebra(4, 2)
    for _ in range(5):
        a = rand_matrix(4, rng)
        assert ta_on_wedge(a) == alg.derivation_matrix(a, 2)


def test_perp_round_trip():
    k = preset("heisenberg", n=4).ideal()
    perp = k_perp(k)
    assert perp.dim == 1
    assert [list(r) for r in k.slices[2]] == linalg.rref(ideal_from_perp(4, perp.matrices()), 6)[0]


@pytest.mark.parametrize("n", [2, 4])
def test_heisenberg_reduced_algebras(n):
    k = preset("heisenberg", n=n).ideal()
    a0 = a0_compute(gl(n), k, compute_W(k))
    assert a0.basis == sp(n).basis
    assert a0.dim == n * (n + 1) // 2
    assert g0_compute(gl(n), k).basis == csp(n).basis


def test_a0_routes_agree():
    rng = random.Random(12)
    for _ in range(6):
        n, mu = rng.choice([(2, 3), (3, 2), (3, 3)])
        alg = FreeLieAlgebra(n, mu)
        gens = [(2, [rng.randint(-1, 1) for _ in range(alg.dim(2))])]
        k = ideal_close(n, mu, gens)
        if k.dim(2) == alg.dim(2):
            continue
        for lam in (gl(n), sl(n), co(n)):
            w = compute_W(k)
            assert a0_compute(lam, k, w).basis == a0_direct(lam, k).basis
            assert a0_compute(lam, k, w).issubspace(g0_compute(lam, k))


def test_a0_is_monotone():
    rng = random.Random(13)
    n, mu = 3, 3
    alg = FreeLieAlgebra(n, mu)
    pairs = 0
    while pairs < 10:
        g1 = [(3, [rng.randint(-1, 1) for _ in range(alg.dim(3))])]
        g2 = g1 + [(3, [rng.randint(-1, 1) for _ in range(alg.dim(3))]),
                   (2, [rng.randint(-1, 1) for _ in range(alg.dim(2))])]
        small, big = ideal_close(n, mu, g1), ideal_close(n, mu, g2)
        if big.dim(2) == alg.dim(2):
            continue
        lam_small, lam_big = rng.choice([(sl(n), gl(n)), (so(n), co(n)), (co(n), gl(n))])
        a_small = a0_compute(lam_small, small, compute_W(small))
        a_big = a0_compute(lam_big, big, compute_W(big))
        assert a_small.issubspace(a_big)
        pairs += 1


def test_a0_of_free_kind_three_is_zero():
    k = free_ideal(2, 3)
    assert a0_compute(gl(2), k, compute_W(k)).dim == 0


def test_o_form_of_identity_is_so():
    assert o_form(3, linalg.identity(3)).basis == so(3).basis


def test_matrix_subspace_algebra():
    s = MatrixSubspace.from_matrices(2, [[[1, 0], [0, 0]]])
    t = MatrixSubspace.from_matrices(2, [[[0, 0], [0, 1]], [[1, 0], [0, 0]]])
    assert s.issubspace(t)
    assert (s + t).dim == 2
    assert s.intersect(t).dim == 1
