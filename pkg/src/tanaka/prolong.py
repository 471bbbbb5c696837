"""Degreewise prolongation dimensions, computed independently of the rank criterion.

Two oracles live here:

* :func:`sym_prolong_dims` for a first-kind algebra V ⊕ a0: the p-th
  prolongation a_p is the space of ξ in S^{p+1}(V*) ⊗ V all of whose
  p-fold contractions lie in a0;
* :func:`tanaka_prolong_dims` for m = f(V)/K with structure algebra Λ: the
  layers g_p (p >= 0) are the degree-p derivations from m into the already
  built part of the prolongation, with the degree-zero layer confined to Λ.

Both are finite linear-algebra computations per degree. The oracle can only
ever prove finiteness (a vanishing layer); non-vanishing up to ``pmax`` is
evidence, not proof.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from . import linalg
from .algebras import MatrixSubspace, trace_orth
from .freelie import GradedIdeal, _algebra
from .poly import monomials

FINITE = "FINITE"
UNBOUNDED = "INFINITE-UP-TO-BOUND"


@dataclass
class DimTable:
    """negative lists dim g_{-mu}, ..., dim g_{-1}; positive lists p = 1..pmax."""

    negative: list[int]
    g0: int
    positive: list[int]
    checks: dict = field(default_factory=dict)

    @property
    def stabilized_zero(self) -> bool:
        return 0 in self.positive

    @property
    def total(self) -> int | None:
        if not self.stabilized_zero:
            return None
        return sum(self.negative) + self.g0 + sum(self.positive)

    def to_dict(self) -> dict:
        return {
            "negative": list(self.negative),
            "g0": self.g0,
            "positive": list(self.positive),
            "stabilized_zero": self.stabilized_zero,
            "total": self.total,
        }

    @classmethod
    def from_dict(cls, d: dict) -> DimTable:
        return cls(list(d["negative"]), d["g0"], list(d["positive"]))


def oracle_verdict(t: DimTable) -> str:
    return FINITE if t.stabilized_zero else UNBOUNDED


def _fill_zeros(dims: list[int], pmax: int) -> list[int]:
    """Once a layer vanishes all later ones do; stop computing there."""
    return dims + [0] * (pmax - len(dims))


# --------------------------------------------------------- first kind

def _index(n: int, d: int) -> dict:
    return {e: i for i, e in enumerate(monomials(n, d))}


def sym_prolong_layer(a0: MatrixSubspace, p: int) -> int:
    """dim a_p for p >= 1, as the kernel of one linear system.

    ξ = Σ_k u_k ⊗ e_k with u_k of degree p+1. For every multi-index μ of
    degree p, the matrix (∂_j ∂^μ u_k)_{k,j} must lie in a0, i.e. be
    trace-orthogonal to every Y in a0⁰. After rescaling the coefficient of
    x^β in u_k by β!, the condition reads Σ_{j,k} Y_jk c_{k, μ+e_j} = 0.
    """
    n = a0.n
    perp = trace_orth(a0).matrices()
    top = _index(n, p + 1)
    ncols = n * len(top)
    if not perp:
        return ncols
    red = linalg.RowReducer(ncols)
    for mu in monomials(n, p):
        for y in perp:
            row = {}
            for j in range(n):
                beta = list(mu)
                beta[j] += 1
                b = top[tuple(beta)]
                for k in range(n):
                    if y[j][k]:
                        col = k * len(top) + b
                        row[col] = row.get(col, 0) + y[j][k]
            row = {c: v for c, v in row.items() if v}
            if row:
                red.add(row)
    return ncols - red.rank


def sym_prolong_dims(a0: MatrixSubspace, pmax: int = 6) -> DimTable:
    n = a0.n
    dims: list[int] = []
    for p in range(1, pmax + 1):
        d = sym_prolong_layer(a0, p)
        dims.append(d)
        if d == 0:
            break
    return DimTable([n], a0.dim, _fill_zeros(dims, pmax))


def sym_prolong_dims_recursive(a0: MatrixSubspace, pmax: int = 4) -> list[int]:
    """a_p = {ξ in S^{p+1} ⊗ V : ∂_i ξ in a_{p-1} for all i}, with a_0 = a0.

    Elements are stored with plain (unscaled) polynomial coefficients. Slow;
    used to cross-check :func:`sym_prolong_layer` on small inputs.
    """
    n = a0.n
    # a_0 in S^1 ⊗ V: u_k = Σ_j A_kj x_j
    idx1 = _index(n, 1)
    prev = []
    for a in a0.matrices():
        v = [Fraction(0)] * (n * n)
        for k in range(n):
            for j in range(n):
                v[k * n + idx1[tuple(int(t == j) for t in range(n))]] = a[k][j]
        prev.append(v)
    prev_idx = idx1
    out = []
    for p in range(1, pmax + 1):
        cur_idx = _index(n, p + 1)
        ncols = n * len(cur_idx)
        prev_len = n * len(prev_idx)
        ann = linalg.kernel(prev, prev_len) if prev else linalg.identity(prev_len)
        rows = []
        for i in range(n):
            # derivative ∂_i as a matrix from degree p+1 coefficients to degree p
            deriv = []
            for k in range(n):
                for e, b in cur_idx.items():
                    if e[i]:
                        f = list(e)
                        f[i] -= 1
                        deriv.append((k * len(cur_idx) + b, k * len(prev_idx) + prev_idx[tuple(f)], e[i]))
            for alpha in ann:
                row = [Fraction(0)] * ncols
                for src, dst, c in deriv:
                    if alpha[dst]:
                        row[src] += c * alpha[dst]
                if any(row):
                    rows.append(row)
        basis = linalg.kernel(rows, ncols) if rows else linalg.identity(ncols)
        out.append(len(basis))
        if not basis:
            out += [0] * (pmax - p)
            break
        prev, prev_idx = basis, cur_idx
    return out


def full_symmetric_dim(n: int, p: int) -> int:
    """dim S^{p+1}(V*) ⊗ V."""
    return n * comb(n + p, p + 1)


# ---------------------------------------------------------- Tanaka layers

class _Symbol:
    """Structure of m = f(V)/K: graded dims and the action of generators."""

    def __init__(self, k: GradedIdeal):
        self.k = k
        self.n = k.n
        self.mu = k.mu
        alg = _algebra(k.n, k.mu + 1)
        self.dims = {q: k.quotient_dim(q) for q in range(1, k.mu + 1)}
        # ad[i][q][b] = coords of [e_i, b] in g_{-(q+1)} for b in the basis of g_{-q}
        self.ad: list[dict[int, list[list[Fraction]]]] = []
        for i in range(self.n):
            per = {}
            for q in range(1, k.mu):
                cols = []
                for j in k.quotient_basis(q):
                    act = alg.generator_action(i, q)[j]
                    cols.append(k.quotient_coords(q + 1, list(act)))
                per[q] = cols
            self.ad.append(per)

    def bracket_gen(self, i: int, q: int, coords) -> list[Fraction]:
        """[e_i, x] for x in g_{-q} given by coordinates."""
        if q >= self.mu:
            return []
        out = [Fraction(0)] * self.dims[q + 1]
        for c, col in zip(coords, self.ad[i][q]):
            if c:
                for u, v in enumerate(col):
                    if v:
                        out[u] += c * v
        return out


class _Layers:
    def __init__(self, sym: _Symbol):
        self.sym = sym
        self.basis: dict[int, list[list[Fraction]]] = {}
        self.offsets: dict[int, dict[tuple[int, int], int]] = {}

    def dim(self, t: int) -> int:
        if t < 0:
            return self.sym.dims.get(-t, 0)
        return len(self.basis.get(t, []))

    def layout(self, p: int) -> tuple[dict[tuple[int, int], int], int]:
        off = {}
        pos = 0
        for q in range(1, self.sym.mu + 1):
            for b in range(self.sym.dims[q]):
                off[(q, b)] = pos
                pos += self.dim(p - q)
        return off, pos

    def value(self, s: int, l: int, q: int, b: int) -> list[Fraction]:
        """Value of the l-th basis element of layer s at the b-th basis vector of g_{-q}."""
        start = self.offsets[s][(q, b)]
        return self.basis[s][l][start:start + self.dim(s - q)]


def _derivation_rows(layers: _Layers, p: int, off: dict) -> list[dict[int, Fraction]]:
    sym = layers.sym
    rows: list[dict[int, Fraction]] = []
    for i in range(sym.n):
        for q in range(1, sym.mu + 1):
            t = p - q - 1
            dt = layers.dim(t)
            if dt == 0:
                continue
            for b in range(sym.dims[q]):
                acc = [dict() for _ in range(dt)]

                def add(col: int, vec, sign: int) -> None:
                    for u, v in enumerate(vec):
                        if v:
                            acc[u][col] = acc[u].get(col, 0) + sign * v

                # φ([e_i, b])
                if q < sym.mu:
                    for j, c in enumerate(sym.ad[i][q][b]):
                        if c:
                            start = off[(q + 1, j)]
                            for u in range(dt):
                                acc[u][start + u] = acc[u].get(start + u, 0) + c
                # - [φ(e_i), b]
                start = off[(1, i)]
                if p >= 1:
                    for l in range(layers.dim(p - 1)):
                        add(start + l, layers.value(p - 1, l, q, b), -1)
                else:
                    for j in range(sym.n):
                        if q < sym.mu:
                            add(start + j, sym.ad[j][q][b], -1)
                # - [e_i, φ(b)]
                start = off[(q, b)]
                if p - q >= 0:
                    for l in range(layers.dim(p - q)):
                        add(start + l, layers.value(p - q, l, 1, i), +1)
                else:
                    r = q - p
                    for l in range(sym.dims[r]):
                        unit = [Fraction(0)] * sym.dims[r]
                        unit[l] = Fraction(1)
                        add(start + l, sym.bracket_gen(i, r, unit), -1)
                for row in acc:
                    row = {c: v for c, v in row.items() if v}
                    if row:
                        rows.append(row)
    return rows


def _structure_rows(lam: MatrixSubspace, off: dict, n: int) -> list[dict[int, Fraction]]:
    """φ|g_{-1} = A with A e_i = φ(e_i) must lie in Λ: tr(Y A) = 0 for Y in Λ⊥."""
    rows = []
    for y in trace_orth(lam).matrices():
        row = {}
        for i in range(n):
            for j in range(n):
                # tr(Y A) = Σ_{i,j} Y_ij A_ji and A_ji is coordinate j of φ(e_i)
                if y[i][j]:
                    row[off[(1, i)] + j] = y[i][j]
        if row:
            rows.append(row)
    return rows


def tanaka_layers(k: GradedIdeal, lam: MatrixSubspace, pmax: int = 6) -> tuple[_Layers, bool]:
    """Bases of the layers g_0..g_p (stopping at the first zero layer past g_0).

    Each basis element is stored by its values on the basis of m, see
    :meth:`_Layers.value`. The flag reports whether every layer acts
    injectively on g_{-1}.
    """
    sym = _Symbol(k)
    layers = _Layers(sym)
    injective = True
    for p in range(0, pmax + 1):
        off, size = layers.layout(p)
        red = linalg.RowReducer(size)
        for row in _derivation_rows(layers, p, off):
            red.add(row)
        if p == 0:
            for row in _structure_rows(lam, off, sym.n):
                red.add(row)
        basis = red.kernel()
        layers.basis[p] = basis
        layers.offsets[p] = off
        if basis:
            gen_cols = [off[(1, i)] + u for i in range(sym.n) for u in range(layers.dim(p - 1))]
            restricted = [[v[c] for c in gen_cols] for v in basis]
            if linalg.rank(restricted, len(gen_cols)) != len(basis):
                injective = False
        if p >= 1 and not basis:
            break
    return layers, injective


def tanaka_prolong_dims(k: GradedIdeal, lam: MatrixSubspace, pmax: int = 6) -> DimTable:
    """Dimensions of the maximal effective Λ-prolongation of f(V)/K up to degree pmax."""
    layers, injective = tanaka_layers(k, lam, pmax)
    dims = [len(layers.basis[p]) for p in sorted(layers.basis)]
    sym = layers.sym
    negative = [sym.dims[q] for q in range(sym.mu, 0, -1)]
    return DimTable(negative, dims[0], _fill_zeros(dims[1:], pmax), {"effective": injective})
