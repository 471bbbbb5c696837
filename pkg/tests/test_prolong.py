from __future__ import annotations

from fractions import Fraction
from math import comb

import pytest

from _configs import CONFIGS, config_id

from tanaka.algebras import MatrixSubspace, a0_compute, co, csp, g0_compute, gl, o_standard, sl, so, sp
from tanaka.freelie import compute_W, free_ideal
from tanaka.problem import preset
from tanaka.prolong import (
    FINITE,
    UNBOUNDED,
    DimTable,
    full_symmetric_dim,
    oracle_verdict,
    sym_prolong_dims,
    sym_prolong_dims_recursive,
    tanaka_layers,
    tanaka_prolong_dims,
)


def contact_layer(n: int, p: int) -> int:
    """Weighted monomials of degree p+2 in n variables of weight 1 and one of weight 2."""
    d = p + 2
    return sum(comb(d - 2 * j + n - 1, n - 1) for j in range(d // 2 + 1))


@pytest.mark.parametrize("make,n", [(gl, 2), (co, 2), (co, 3), (so, 3), (sl, 2), (sp, 2), (sp, 4)])
def test_direct_and_recursive_layers_agree(make, n):
    a0 = make(n)
    pmax = 3 if n == 4 else 4
    assert sym_prolong_dims(a0, pmax).positive == sym_prolong_dims_recursive(a0, pmax)


def test_gl_layers_are_everything():
    for n in (2, 3):
        t = sym_prolong_dims(gl(n), 4)
        assert t.positive == [full_symmetric_dim(n, p) for p in range(1, 5)]
        assert full_symmetric_dim(n, 1) == n * comb(n + 1, 2)


@pytest.mark.parametrize("n", [3, 4])
def test_conformal_layers(n):
    t = sym_prolong_dims(co(n), 6)
    assert t.positive[:2] == [n, 0]
    assert t.total == n + co(n).dim + n


@pytest.mark.parametrize("n", [3, 4])
def test_orthogonal_has_no_prolongation(n):
    assert sym_prolong_dims(o_standard(n), 3).positive[0] == 0


def test_symplectic_never_stops():
    t = sym_prolong_dims(sp(4), 5)
    assert all(d > 0 for d in t.positive)
    assert oracle_verdict(t) == UNBOUNDED


def test_zero_algebra():
    t = sym_prolong_dims(MatrixSubspace(3, ()), 3)
    assert t.positive == [0, 0, 0]
    assert oracle_verdict(t) == FINITE


@pytest.mark.parametrize("make,n", [(gl, 2), (co, 3), (so, 3), (sp, 4)])
def test_tanaka_matches_first_kind(make, n):
    lam = make(n)
    pmax = 4
    t = tanaka_prolong_dims(free_ideal(n, 1), lam, pmax)
    s = sym_prolong_dims(lam, pmax)
    assert t.negative == [n] and t.g0 == lam.dim
    assert t.positive == s.positive
    assert t.checks["effective"]


def test_g2_table():
    t = tanaka_prolong_dims(free_ideal(2, 3), gl(2), 6)
    assert t.negative == [2, 1, 2]
    assert t.g0 == 4
    assert t.positive == [2, 1, 2, 0, 0, 0]
    assert t.total == 14
    assert t.checks["effective"]


@pytest.mark.parametrize("n,pmax", [(2, 6), (4, 4)])
def test_heisenberg_is_the_contact_algebra(n, pmax):
    k = preset("heisenberg", n=n).ideal()
    t = tanaka_prolong_dims(k, gl(n), pmax)
    assert t.negative == [1, n]
    assert t.g0 == csp(n).dim == g0_compute(gl(n), k).dim
    assert t.positive == [contact_layer(n, p) for p in range(1, pmax + 1)]


def test_smaller_structure_algebra_gives_smaller_layers():
    k = preset("heisenberg", n=2).ideal()
    big = tanaka_prolong_dims(k, gl(2), 4)
    small = tanaka_prolong_dims(k, sl(2), 4)
    assert small.g0 <= big.g0
    assert all(a <= b for a, b in zip(small.positive, big.positive))


def test_dim_table_round_trip():
    t = DimTable([2, 1, 2], 4, [2, 1, 2, 0])
    assert DimTable.from_dict(t.to_dict()).to_dict() == t.to_dict()
    assert t.stabilized_zero and t.total == 14


# ---- every derivation found from generator pairs is a derivation on all pairs

def _m_bracket(k, q1, x, q2, y):
    """[x, y] in m = f(V)/K for x in g_{-q1}, y in g_{-q2} in quotient coordinates."""
    if q1 + q2 > k.mu:
        return []
    alg = k.algebra

    def lift(q, coords):
        v = [Fraction(0)] * alg.dim(q)
        for c, j in zip(coords, k.quotient_basis(q)):
            v[j] = c
        return v

    return k.quotient_coords(q1 + q2, alg.bracket_vectors(q1, lift(q1, x), q2, lift(q2, y)))


def _apply(layers, s, u, q, v):
    """[u, v] for u in layer s >= 0 (coordinates) and v in g_{-q} (coordinates)."""
    out = [Fraction(0)] * layers.dim(s - q)
    for l, cu in enumerate(u):
        if not cu:
            continue
        for b, cv in enumerate(v):
            if cv:
                for t, w in enumerate(layers.value(s, l, q, b)):
                    out[t] += cu * cv * w
    return out


def _bracket_into(layers, k, deg_u, u, q, v):
    """[u, v] where v lies in g_{-q} and u has degree deg_u (negative or not)."""
    if deg_u >= 0:
        return _apply(layers, deg_u, u, q, v)
    return _m_bracket(k, -deg_u, u, q, v)


def _unit(d, i):
    return [Fraction(int(j == i)) for j in range(d)]


@pytest.mark.parametrize("name,params,lam", [
    ("g2", {}, gl(2)),
    ("heisenberg", {"n": 2}, gl(2)),
    ("heisenberg", {"n": 2}, sl(2)),
    ("ex4.8", {}, gl(4)),
])
def test_layers_are_derivations_on_all_pairs(name, params, lam):
    k = preset(name, **params).ideal()
    layers, injective = tanaka_layers(k, lam, 3)
    assert injective
    sym = layers.sym
    for p, basis in layers.basis.items():
        for l in range(len(basis)):
            phi = _unit(len(basis), l)
            for q1 in range(1, k.mu + 1):
                for q2 in range(1, k.mu + 1):
                    for b1 in range(sym.dims[q1]):
                        for b2 in range(sym.dims[q2]):
                            x, y = _unit(sym.dims[q1], b1), _unit(sym.dims[q2], b2)
                            target = p - q1 - q2
                            xy = _m_bracket(k, q1, x, q2, y)
                            lhs = _apply(layers, p, phi, q1 + q2, xy) if xy else [Fraction(0)] * layers.dim(target)
                            phix = _apply(layers, p, phi, q1, x)
                            phiy = _apply(layers, p, phi, q2, y)
                            # [φx, y] + [x, φy] = [φx, y] - [φy, x]
                            a = _bracket_into(layers, k, p - q1, phix, q2, y)
                            b = _bracket_into(layers, k, p - q2, phiy, q1, x)
                            a = a or [Fraction(0)] * layers.dim(target)
                            b = b or [Fraction(0)] * layers.dim(target)
                            assert lhs == [s - t for s, t in zip(a, b)]


@pytest.mark.parametrize("cfg", CONFIGS, ids=config_id)
def test_first_kind_layers_bound_the_full_layers(cfg):
    name, params, _ = cfg
    spec = preset(name, **params)
    lam, k = spec.structure_algebra(), spec.ideal()
    a0 = a0_compute(lam, k, compute_W(k))
    full = tanaka_prolong_dims(k, lam, 3).positive
    reduced = sym_prolong_dims(a0, 3).positive
    assert all(r <= f for r, f in zip(reduced, full))


@pytest.mark.parametrize("cfg", CONFIGS, ids=config_id)
def test_oracle_agrees_with_criterion(cfg):
    name, params, finite = cfg
    spec = preset(name, **params)
    lam, k = spec.structure_algebra(), spec.ideal()
    table = tanaka_prolong_dims(k, lam, 6)
    assert table.stabilized_zero == finite
    assert table.checks["effective"]
    a0 = a0_compute(lam, k, compute_W(k))
    assert sym_prolong_dims(a0, 6).stabilized_zero == finite
