"""Subspaces of gl(n) and the Lie-theoretic constructions built on them.

Matrices are ``n x n`` lists of :class:`~fractions.Fraction`. A
:class:`MatrixSubspace` stores the row-major flattening of its basis in
reduced row echelon form, so two subspaces are equal exactly when their
stored bases are.

Second exterior power coordinates are indexed by pairs ``i < j`` in
lexicographic order, matching the degree-two Lyndon words of
:mod:`tanaka.freelie`, and ``rho(e_i ∧ e_j) = E_ij - E_ji``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from . import linalg
from .freelie import GradedIdeal, _algebra
from .linalg import Matrix, Vector


class StructureAlgebraWarning(UserWarning):
    pass


# ------------------------------------------------------------------ helpers

def flatten(a: Sequence[Sequence[Fraction]]) -> Vector:
    return [Fraction(x) for row in a for x in row]


def unflatten(v: Sequence[Fraction], n: int) -> Matrix:
    return [list(v[i * n:(i + 1) * n]) for i in range(n)]


def unit(n: int, i: int, j: int) -> Matrix:
    m = linalg.zeros(n, n)
    m[i][j] = Fraction(1)
    return m


def commutator(a: Matrix, b: Matrix) -> Matrix:
    ab = linalg.matmul(a, b)
    ba = linalg.matmul(b, a)
    return [[x - y for x, y in zip(r, s)] for r, s in zip(ab, ba)]


def as_matrix(rows: Iterable[Iterable]) -> Matrix:
    return [[linalg.to_fraction(x) for x in r] for r in rows]


@dataclass(frozen=True)
class MatrixSubspace:
    """A linear subspace of n x n rational matrices."""

    n: int
    basis: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def from_matrices(cls, n: int, mats: Iterable[Sequence[Sequence[Fraction]]]) -> MatrixSubspace:
        rows = []
        for m in mats:
            if len(m) != n or any(len(r) != n for r in m):
                raise linalg.ShapeError(f"expected {n}x{n} matrices")
            rows.append(flatten(m))
        return cls.from_vectors(n, rows)

    @classmethod
    def from_vectors(cls, n: int, rows: Iterable[Sequence[Fraction]]) -> MatrixSubspace:
        rows = [list(r) for r in rows]
        basis = linalg.rref(rows, n * n)[0] if rows else []
        return cls(n, tuple(tuple(r) for r in basis))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def matrices(self) -> list[Matrix]:
        return [unflatten(r, self.n) for r in self.basis]

    def contains(self, a: Sequence[Sequence[Fraction]]) -> bool:
        return self._reducer().contains(flatten(a))

    def _reducer(self):
        return _subspace_reducer(self)

    def issubspace(self, other: MatrixSubspace) -> bool:
        return all(other._reducer().contains(list(r)) for r in self.basis)

    def __add__(self, other: MatrixSubspace) -> MatrixSubspace:
        return MatrixSubspace.from_vectors(self.n, list(self.basis) + list(other.basis))

    def intersect(self, other: MatrixSubspace) -> MatrixSubspace:
        rows = linalg.intersect(self.basis, other.basis, self.n * self.n)
        return MatrixSubspace.from_vectors(self.n, rows)

    def is_lie_closed(self) -> bool:
        mats = self.matrices()
        red = self._reducer()
        for i, a in enumerate(mats):
            for b in mats[i + 1:]:
                if not red.contains(flatten(commutator(a, b))):
                    return False
        return True


@lru_cache(maxsize=256)
def _subspace_reducer(s: MatrixSubspace):
    return linalg.reducer([list(r) for r in s.basis], s.n * s.n)


def coordinates(s: MatrixSubspace, a: Sequence[Sequence[Fraction]]) -> Vector | None:
    """Coefficients of ``a`` in the stored basis of ``s`` (None if not a member)."""
    if not s.basis:
        return [] if linalg.is_zero(a) else None
    return linalg.solve(linalg.transpose(s.basis), flatten(a))


def warn_if_not_subalgebra(s: MatrixSubspace, name: str = "structure algebra") -> bool:
    closed = s.is_lie_closed()
    if not closed:
        warnings.warn(f"{name} is not closed under the commutator; using it as a linear subspace",
                      StructureAlgebraWarning, stacklevel=2)
    return closed


# ------------------------------------------------------- classical algebras

def gl(n: int) -> MatrixSubspace:
    return MatrixSubspace.from_vectors(n, linalg.identity(n * n))


def scalars(n: int) -> MatrixSubspace:
    return MatrixSubspace.from_matrices(n, [linalg.identity(n)])


def sl(n: int) -> MatrixSubspace:
    row = flatten(linalg.identity(n))
    return MatrixSubspace.from_vectors(n, linalg.kernel([row], n * n))


def _form_conditions(n: int, form: Matrix) -> list[Vector]:
    """Rows of the linear map X ↦ Xᵀ B + B X, one per output entry."""
    rows = []
    for r in range(n):
        for c in range(n):
            row = [Fraction(0)] * (n * n)
            # (XᵀB)_{rc} = Σ_k X_{kr} B_{kc};  (BX)_{rc} = Σ_k B_{rk} X_{kc}
            for k in range(n):
                row[k * n + r] += form[k][c]
                row[k * n + c] += form[r][k]
            rows.append(row)
    return rows


def o_family(n: int, forms: Sequence[Sequence[Sequence]]) -> MatrixSubspace:
    """{X : Xᵀ B + B X = 0 for every B in ``forms``}."""
    rows = []
    for b in forms:
        rows += _form_conditions(n, as_matrix(b))
    return MatrixSubspace.from_vectors(n, linalg.kernel(rows, n * n)) if rows else gl(n)


def co_family(n: int, forms: Sequence[Sequence[Sequence]]) -> MatrixSubspace:
    """{X : Xᵀ B + B X ∈ span(forms) for every B in ``forms``}."""
    forms = [as_matrix(b) for b in forms]
    if not forms:
        return gl(n)
    span = linalg.rref([flatten(b) for b in forms], n * n)[0]
    k = len(span)
    # unknowns: X (n²) then for each form B_i the coefficients c_{i,1..k}
    nunk = n * n + k * len(forms)
    rows = []
    for i, b in enumerate(forms):
        for r, cond in enumerate(_form_conditions(n, b)):
            row = cond + [Fraction(0)] * (k * len(forms))
            for l in range(k):
                row[n * n + i * k + l] = -span[l][r]
            rows.append(row)
    sol = linalg.kernel(rows, nunk)
    return MatrixSubspace.from_vectors(n, [v[: n * n] for v in sol])


def o_form(n: int, form: Sequence[Sequence]) -> MatrixSubspace:
    return o_family(n, [form])


def co_form(n: int, form: Sequence[Sequence]) -> MatrixSubspace:
    """{X : Xᵀ B + B X = c B for some scalar c}."""
    return co_family(n, [form])


def symplectic_form(n: int) -> Matrix:
    if n % 2:
        raise ValueError("symplectic algebras need an even dimension")
    k = n // 2
    om = linalg.zeros(n, n)
    for i in range(k):
        om[i][k + i] = Fraction(1)
        om[k + i][i] = Fraction(-1)
    return om


def so(n: int) -> MatrixSubspace:
    return o_form(n, linalg.identity(n))


def co(n: int) -> MatrixSubspace:
    return co_form(n, linalg.identity(n))


def sp(n: int) -> MatrixSubspace:
    return o_form(n, symplectic_form(n))


def csp(n: int) -> MatrixSubspace:
    return co_form(n, symplectic_form(n))


def antisymmetric_basis(n: int) -> list[Matrix]:
    """E_ij - E_ji for i < j in lexicographic order (a basis of o(n))."""
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            m = unit(n, i, j)
            m[j][i] = Fraction(-1)
            out.append(m)
    return out


def o_standard(n: int) -> MatrixSubspace:
    return MatrixSubspace.from_matrices(n, antisymmetric_basis(n))


# ----------------------------------------------------------- trace pairings

def trace_pair(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> Fraction:
    """tr(AB)."""
    n = len(a)
    return sum((a[i][k] * b[k][i] for i in range(n) for k in range(n) if a[i][k] and b[k][i]), Fraction(0))


def trace_orth(s: MatrixSubspace, within: MatrixSubspace | None = None) -> MatrixSubspace:
    """{X in ``within`` : tr(A X) = 0 for every A in ``s``}; ``within`` defaults to gl(n)."""
    n = s.n
    if within is None:
        if not s.basis:
            return gl(n)
        rows = [flatten(linalg.transpose(a)) for a in s.matrices()]
        return MatrixSubspace.from_vectors(n, linalg.kernel(rows, n * n))
    amb = within.matrices()
    if not amb:
        return within
    if not s.basis:
        return within
    rows = [[trace_pair(a, u) for u in amb] for a in s.matrices()]
    combos = linalg.kernel(rows, len(amb))
    vecs = []
    for c in combos:
        v = [Fraction(0)] * (n * n)
        for cl, u in zip(c, within.basis):
            if cl:
                for j, x in enumerate(u):
                    if x:
                        v[j] += cl * x
        vecs.append(v)
    return MatrixSubspace.from_vectors(n, vecs)


# ------------------------------------------------------------- Λ²V and o(V)

@lru_cache(maxsize=None)
def wedge_pairs(n: int) -> tuple[tuple[int, int], ...]:
    return tuple((i, j) for i in range(n) for j in range(i + 1, n))


def wedge(v: Sequence[Fraction], w: Sequence[Fraction]) -> Vector:
    """Coordinates of v ∧ w: entry (i, j) is v_i w_j - v_j w_i."""
    n = len(v)
    return [Fraction(v[i]) * w[j] - Fraction(v[j]) * w[i] for i, j in wedge_pairs(n)]


def rho(x: Sequence[Fraction], n: int) -> Matrix:
    """The antisymmetric matrix Σ x_ij (E_ij - E_ji)."""
    m = linalg.zeros(n, n)
    for c, (i, j) in zip(x, wedge_pairs(n)):
        m[i][j] += c
        m[j][i] -= c
    return m


def rho_inv(m: Sequence[Sequence[Fraction]]) -> Vector:
    n = len(m)
    for i in range(n):
        for j in range(n):
            if m[i][j] != -m[j][i]:
                raise ValueError("matrix is not antisymmetric")
    return [Fraction(m[i][j]) for i, j in wedge_pairs(n)]


def ta_on_wedge(a: Sequence[Sequence[Fraction]]) -> Matrix:
    """Matrix of T_A on Λ²V (columns are images of e_i ∧ e_j)."""
    n = len(a)
    cols = []
    for i, j in wedge_pairs(n):
        ai = [a[k][i] for k in range(n)]
        aj = [a[k][j] for k in range(n)]
        ei = [Fraction(int(k == i)) for k in range(n)]
        ej = [Fraction(int(k == j)) for k in range(n)]
        img = [x + y for x, y in zip(wedge(ai, ej), wedge(ei, aj))]
        cols.append(img)
    return linalg.transpose(cols) if cols else []


def wedge_subspace_to_o(k: GradedIdeal) -> MatrixSubspace:
    """ρ(K_{-2}) as a subspace of o(V)."""
    if k.mu < 2:
        return MatrixSubspace.from_matrices(k.n, antisymmetric_basis(k.n))
    return MatrixSubspace.from_matrices(k.n, [rho(r, k.n) for r in k.slices[2]])


def k_perp(k: GradedIdeal) -> MatrixSubspace:
    """{Y in o(V) : tr(Y X) = 0 for X in ρ(K_{-2})}."""
    return trace_orth(wedge_subspace_to_o(k), o_standard(k.n))


def ideal_from_perp(n: int, perp: Iterable[Sequence[Sequence[Fraction]]]) -> list[Vector]:
    """K_{-2} coordinates recovered from a spanning set of its complement in o(V)."""
    space = MatrixSubspace.from_matrices(n, perp)
    for y in space.matrices():
        rho_inv(y)
    orth = trace_orth(space, o_standard(n))
    return [rho_inv(m) for m in orth.matrices()]


# ---------------------------------------------------- reduced algebras a0, g0

def _combination_rows(images: list[list[Vector]]) -> list[Vector]:
    """Turn per-basis-element condition vectors into rows over the coefficients."""
    rows = []
    if not images:
        return rows
    for block in zip(*images):
        for coord in range(len(block[0])):
            row = [img[coord] for img in block]
            if any(row):
                rows.append(row)
    return rows


def _combine(space: MatrixSubspace, coeffs: list[Vector]) -> MatrixSubspace:
    n = space.n
    vecs = []
    for c in coeffs:
        v = [Fraction(0)] * (n * n)
        for cl, u in zip(c, space.basis):
            if cl:
                for j, x in enumerate(u):
                    if x:
                        v[j] += cl * x
        vecs.append(v)
    return MatrixSubspace.from_vectors(n, vecs)


def a0_compute(lam: MatrixSubspace, k: GradedIdeal, w: Sequence[Sequence[Fraction]]) -> MatrixSubspace:
    """{A in Λ : T_A(Λ²V) ⊆ K_{-2} and A(V) ⊆ W}, as a single kernel problem."""
    n = k.n
    mats = lam.matrices()
    if not mats:
        return lam
    wred = linalg.reducer([list(r) for r in w], n)
    kred = k.reducer(2) if k.mu >= 2 else None
    images = []
    for a in mats:
        conds: list[Vector] = []
        if kred is not None:
            t = ta_on_wedge(a)
            for col in linalg.transpose(t):
                conds.append(kred.normal_form(col))
        for i in range(n):
            conds.append(wred.normal_form([a[r][i] for r in range(n)]))
        images.append(conds)
    rows = _combination_rows(images)
    if not rows:
        return lam
    return _combine(lam, linalg.kernel(rows, len(mats)))


def a0_direct(lam: MatrixSubspace, k: GradedIdeal) -> MatrixSubspace:
    """{A in Λ : T_A(f_{-p}) ⊆ K_{-p} for 2 <= p <= mu}, degree by degree."""
    mats = lam.matrices()
    if not mats or k.mu < 2:
        return lam
    alg = _algebra(k.n, k.mu)
    images = []
    for a in mats:
        conds = []
        for p in range(2, k.mu + 1):
            red = k.reducer(p)
            for col in linalg.transpose(alg.derivation_matrix(a, p)):
                conds.append(red.normal_form(col))
        images.append(conds)
    rows = _combination_rows(images)
    return _combine(lam, linalg.kernel(rows, len(mats))) if rows else lam


def g0_compute(lam: MatrixSubspace, k: GradedIdeal) -> MatrixSubspace:
    """{A in Λ : T_A(K_{-p}) ⊆ K_{-p} for 2 <= p <= mu}."""
    mats = lam.matrices()
    if not mats or k.mu < 2:
        return lam
    alg = _algebra(k.n, k.mu)
    images = []
    for a in mats:
        conds = []
        for p in range(2, k.mu + 1):
            red = k.reducer(p)
            if not k.slices[p]:
                continue
            t = alg.derivation_matrix(a, p)
            for r in k.slices[p]:
                conds.append(red.normal_form(linalg.matvec(t, r)))
        images.append(conds)
    rows = _combination_rows(images) if images and images[0] else []
    return _combine(lam, linalg.kernel(rows, len(mats))) if rows else lam
