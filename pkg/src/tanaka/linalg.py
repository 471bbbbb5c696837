"""Exact linear algebra over the rationals.

Everything here works on :class:`fractions.Fraction` entries. Rows are stored
sparsely (dicts from column index to nonzero coefficient) while being reduced,
which keeps the large, mostly-empty systems produced by the prolongation
oracle tractable. Dense ``list[list[Fraction]]`` is the exchange format.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from typing import Iterable, Sequence

Vector = list[Fraction]
Matrix = list[list[Fraction]]


class ShapeError(ValueError):
    pass


def to_fraction(value) -> Fraction:
    """Parse an exact rational from an int, a Fraction or a ``"p/q"`` string.

    Floats are refused: they have no place in an exact computation.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if "/" in text:
            num, _, den = text.partition("/")
            num, den = int(num), int(den)
            if den == 0:
                raise ZeroDivisionError(f"zero denominator in {value!r}")
            return Fraction(num, den)
        return Fraction(int(text))
    raise TypeError(f"cannot read {value!r} as an exact rational")


def fraction_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def zeros(rows: int, cols: int) -> Matrix:
    return [[Fraction(0)] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = Fraction(1)
    return m


def matmul(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> Matrix:
    if a and len(a[0]) != len(b):
        raise ShapeError(f"cannot multiply {len(a)}x{len(a[0])} by {len(b)}x?")
    cols = len(b[0]) if b else 0
    out = zeros(len(a), cols)
    for i, row in enumerate(a):
        target = out[i]
        for k, aik in enumerate(row):
            if aik:
                for j, bkj in enumerate(b[k]):
                    if bkj:
                        target[j] += aik * bkj
    return out


def matvec(a: Sequence[Sequence[Fraction]], v: Sequence[Fraction]) -> Vector:
    return [sum((x * y for x, y in zip(row, v) if x and y), Fraction(0)) for row in a]


def transpose(a: Sequence[Sequence[Fraction]]) -> Matrix:
    return [list(col) for col in zip(*a)]


def trace(a: Sequence[Sequence[Fraction]]) -> Fraction:
    return sum((a[i][i] for i in range(len(a))), Fraction(0))


def _sparse(row: Iterable[Fraction]) -> dict[int, Fraction]:
    return {j: Fraction(x) for j, x in enumerate(row) if x}


class RowReducer:
    """Incremental row echelon form.

    Rows are inserted one at a time. Each stored row has coefficient 1 at its
    pivot and only columns greater than the pivot otherwise, so reducing an
    incoming row never revisits a column it already cleared.
    """

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.pivots: dict[int, dict[int, Fraction]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: dict[int, Fraction], full: bool = True) -> dict[int, Fraction]:
        """Eliminate pivot columns from ``row`` (a sparse dict, consumed).

        With ``full=False`` only the leading entries are cleared, which is
        enough for rank decisions.
        """
        heap = list(row)
        heapq.heapify(heap)
        seen = set()
        while heap:
            col = heapq.heappop(heap)
            if col in seen:
                continue
            seen.add(col)
            coeff = row.get(col)
            if not coeff:
                continue
            prow = self.pivots.get(col)
            if prow is None:
                if not full:
                    return row
                continue
            for j, v in prow.items():
                new = row.get(j, 0) - coeff * v
                if new:
                    if j not in row:
                        heapq.heappush(heap, j)
                    row[j] = new
                else:
                    row.pop(j, None)
        return row

    def add(self, row) -> bool:
        """Insert a row (dense sequence or sparse dict). True if it was independent."""
        if not isinstance(row, dict):
            row = _sparse(row)
        else:
            row = dict(row)
        row = self.reduce(row, full=False)
        if not row:
            return False
        lead = min(row)
        inv = 1 / row[lead]
        self.pivots[lead] = {j: v * inv for j, v in row.items()}
        return True

    def normal_form(self, vec: Sequence[Fraction]) -> Vector:
        """Canonical representative of ``vec`` modulo the row space."""
        res = self.reduce(_sparse(vec))
        out = [Fraction(0)] * self.ncols
        for j, v in res.items():
            out[j] = v
        return out

    def contains(self, vec: Sequence[Fraction]) -> bool:
        return not self.reduce(_sparse(vec))

    def reduced_rows(self) -> tuple[Matrix, list[int]]:
        """Fully reduced row echelon form as dense rows with their pivot columns."""
        order = sorted(self.pivots)
        done: dict[int, dict[int, Fraction]] = {}
        for p in reversed(order):
            row = dict(self.pivots[p])
            for j in sorted(k for k in row if k != p and k in done):
                c = row.get(j)
                if not c:
                    continue
                for k, v in done[j].items():
                    new = row.get(k, 0) - c * v
                    if new:
                        row[k] = new
                    else:
                        row.pop(k, None)
            done[p] = row
        dense = []
        for p in order:
            r = [Fraction(0)] * self.ncols
            for j, v in done[p].items():
                r[j] = v
            dense.append(r)
        return dense, order

    def kernel(self) -> Matrix:
        """Basis of the right null space, one vector per free column."""
        order = sorted(self.pivots, reverse=True)
        free = [j for j in range(self.ncols) if j not in self.pivots]
        basis = []
        for f in free:
            x = {f: Fraction(1)}
            for p in order:
                s = Fraction(0)
                for j, v in self.pivots[p].items():
                    if j != p:
                        xj = x.get(j)
                        if xj:
                            s += v * xj
                if s:
                    x[p] = -s
            vec = [Fraction(0)] * self.ncols
            for j, v in x.items():
                vec[j] = v
            basis.append(vec)
        return basis


def _ncols(rows: Sequence[Sequence[Fraction]], ncols: int | None) -> int:
    if ncols is not None:
        return ncols
    if not rows:
        raise ShapeError("column count needed for an empty matrix")
    return len(rows[0])


def reducer(rows: Sequence[Sequence[Fraction]], ncols: int | None = None) -> RowReducer:
    n = _ncols(rows, ncols)
    red = RowReducer(n)
    for r in rows:
        if len(r) != n:
            raise ShapeError(f"row of length {len(r)} in a matrix with {n} columns")
        red.add(r)
    return red


def rref(rows: Sequence[Sequence[Fraction]], ncols: int | None = None) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form: nonzero rows and their pivot columns."""
    return reducer(rows, ncols).reduced_rows()


def rank(rows: Sequence[Sequence[Fraction]], ncols: int | None = None) -> int:
    if not rows:
        return 0
    return reducer(rows, ncols).rank


def kernel(rows: Sequence[Sequence[Fraction]], ncols: int | None = None) -> Matrix:
    """Basis of ``{x : A x = 0}``."""
    return reducer(rows, ncols).kernel()


def left_kernel(rows: Sequence[Sequence[Fraction]], ncols: int | None = None) -> Matrix:
    """Basis of ``{y : y^T A = 0}``."""
    if not rows:
        return []
    return kernel(transpose(rows), len(rows))


def row_basis(rows: Sequence[Sequence[Fraction]], ncols: int | None = None) -> Matrix:
    return rref(rows, ncols)[0]


def span_sum(*spaces: Sequence[Sequence[Fraction]], ncols: int) -> Matrix:
    return rref([r for s in spaces for r in s], ncols)[0]


def intersect(u: Sequence[Sequence[Fraction]], w: Sequence[Sequence[Fraction]], ncols: int) -> Matrix:
    """Row-reduced basis of span(u) ∩ span(w)."""
    if not u or not w:
        return []
    # a·U = b·W  <=>  (a, b) in the left kernel of [U; -W]
    stacked = [list(r) for r in u] + [[-x for x in r] for r in w]
    rel = left_kernel(stacked, ncols)
    vecs = []
    for coeffs in rel:
        v = [Fraction(0)] * ncols
        for c, r in zip(coeffs[: len(u)], u):
            if c:
                for j, x in enumerate(r):
                    if x:
                        v[j] += c * x
        vecs.append(v)
    return rref(vecs, ncols)[0] if vecs else []


def solve(a: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> Vector | None:
    """One solution of ``A x = b`` or ``None`` when inconsistent."""
    ncols = len(a[0]) if a else 0
    aug = [list(r) + [Fraction(bi)] for r, bi in zip(a, b)]
    rows, piv = rref(aug, ncols + 1)
    if ncols in piv:
        return None
    x = [Fraction(0)] * ncols
    for r, p in zip(rows, piv):
        x[p] = r[ncols]
    return x


def is_zero(a: Sequence[Sequence[Fraction]]) -> bool:
    return all(not x for row in a for x in row)
