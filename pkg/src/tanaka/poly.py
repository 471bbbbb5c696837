"""Sparse multivariate polynomials over Q and matrices of linear forms."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from . import linalg
from .linalg import Vector

Exp = tuple[int, ...]


def degrevlex_key(exp: Exp) -> tuple:
    """Sort key: larger key means larger monomial in graded reverse lex order."""
    return (sum(exp), tuple(-e for e in reversed(exp)))


class Poly:
    """Immutable polynomial in ``nvars`` variables with rational coefficients."""

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[Exp, Fraction] | None = None):
        self.nvars = nvars
        clean = {}
        for e, c in (terms or {}).items():
            if c:
                if len(e) != nvars:
                    raise ValueError(f"exponent {e} does not have {nvars} entries")
                clean[tuple(e)] = Fraction(c)
        self.terms = clean
        self._hash = None

    # construction
    @classmethod
    def constant(cls, nvars: int, c) -> Poly:
        return cls(nvars, {(0,) * nvars: Fraction(c)})

    @classmethod
    def var(cls, nvars: int, i: int) -> Poly:
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): Fraction(1)})

    @classmethod
    def linear(cls, coeffs: Sequence[Fraction]) -> Poly:
        n = len(coeffs)
        out = {}
        for i, c in enumerate(coeffs):
            if c:
                e = [0] * n
                e[i] = 1
                out[tuple(e)] = Fraction(c)
        return cls(n, out)

    @classmethod
    def monomial(cls, exp: Exp, c=1) -> Poly:
        return cls(len(exp), {tuple(exp): Fraction(c)})

    # queries
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def lead(self) -> tuple[Exp, Fraction]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        e = max(self.terms, key=degrevlex_key)
        return e, self.terms[e]

    def __call__(self, point: Sequence) -> object:
        total = 0
        for e, c in self.terms.items():
            t = c
            for x, k in zip(point, e):
                if k:
                    t = t * x ** k
            total = total + t
        return total

    # arithmetic
    def _check(self, other: Poly) -> None:
        if other.nvars != self.nvars:
            raise ValueError("polynomials live in different rings")

    def __add__(self, other: Poly) -> Poly:
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return Poly(self.nvars, out)

    def __neg__(self) -> Poly:
        return Poly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: Poly) -> Poly:
        return self + (-other)

    def scale(self, c) -> Poly:
        c = Fraction(c)
        return Poly(self.nvars, {e: c * x for e, x in self.terms.items()})

    def __mul__(self, other: Poly) -> Poly:
        if not isinstance(other, Poly):
            return self.scale(other)
        self._check(other)
        out: dict[Exp, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Poly(self.nvars, out)

    def __rmul__(self, other) -> Poly:
        return self.scale(other)

    def monic(self) -> Poly:
        return self.scale(1 / self.lead()[1]) if self.terms else self

    def primitive(self) -> Poly:
        """Scale to coprime integer coefficients with a positive leading coefficient."""
        if not self.terms:
            return self
        from math import gcd, lcm

        den = 1
        for c in self.terms.values():
            den = lcm(den, c.denominator)
        ints = {e: int(c * den) for e, c in self.terms.items()}
        g = 0
        for c in ints.values():
            g = gcd(g, c)
        if ints[self.lead()[0]] < 0:
            g = -g
        return Poly(self.nvars, {e: Fraction(c, g) for e, c in ints.items()})

    def substitute_linear(self, images: Sequence[Poly]) -> Poly:
        """Replace z_i by ``images[i]`` (all in a common ring)."""
        m = images[0].nvars if images else 0
        out = Poly(m)
        for e, c in self.terms.items():
            t = Poly.constant(m, c)
            for i, k in enumerate(e):
                for _ in range(k):
                    t = t * images[i]
            out = out + t
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def __repr__(self):
        return f"Poly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, key=degrevlex_key, reverse=True):
            c = self.terms[e]
            mono = "*".join(f"z{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(e) if k)
            if not mono:
                parts.append(linalg.fraction_str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{linalg.fraction_str(c)}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def monomials(nvars: int, d: int) -> list[Exp]:
    """All exponent vectors of total degree ``d``, in decreasing degrevlex order."""
    out: list[Exp] = []

    def rec(prefix: list[int], left: int, slots: int):
        if slots == 1:
            out.append(tuple(prefix + [left]))
            return
        for k in range(left, -1, -1):
            rec(prefix + [k], left - k, slots - 1)

    if nvars == 0:
        return [()] if d == 0 else []
    rec([], d, nvars)
    out.sort(key=degrevlex_key, reverse=True)
    return out


# --------------------------------------------------------- linear-form matrices

@dataclass(frozen=True)
class LinFormMatrix:
    """A rows x cols matrix whose entries are linear forms in ``nvars`` variables.

    ``entries[r][c]`` is the coefficient vector of the form at (r, c).
    """

    rows: int
    cols: int
    nvars: int
    entries: tuple[tuple[tuple[Fraction, ...], ...], ...]

    @classmethod
    def from_columns(cls, rows: int, nvars: int, columns: Iterable[Sequence[Sequence[Fraction]]]) -> LinFormMatrix:
        """Build from columns, each a list of ``rows`` coefficient vectors."""
        cols = [list(c) for c in columns]
        entries = tuple(tuple(tuple(Fraction(x) for x in cols[c][r]) for c in range(len(cols))) for r in range(rows))
        return cls(rows, len(cols), nvars, entries)

    @classmethod
    def from_matrices(cls, mats: Sequence[Sequence[Sequence[Fraction]]], nvars: int | None = None) -> LinFormMatrix:
        """Columns A_j z for the given square matrices A_j."""
        if not mats:
            n = nvars or 0
            return cls(n, 0, n, tuple(() for _ in range(n)))
        n = len(mats[0])
        return cls.from_columns(n, n, [[list(a[r]) for r in range(n)] for a in mats])

    @classmethod
    def empty(cls, rows: int, nvars: int) -> LinFormMatrix:
        return cls(rows, 0, nvars, tuple(() for _ in range(rows)))

    def entry(self, r: int, c: int) -> Poly:
        return Poly.linear(self.entries[r][c]) if self.nvars else Poly(0)

    def column(self, c: int) -> list[tuple[Fraction, ...]]:
        return [self.entries[r][c] for r in range(self.rows)]

    def hconcat(self, other: LinFormMatrix) -> LinFormMatrix:
        if other.rows != self.rows or other.nvars != self.nvars:
            raise linalg.ShapeError("cannot concatenate matrices of different shapes")
        entries = tuple(a + b for a, b in zip(self.entries, other.entries))
        return LinFormMatrix(self.rows, self.cols + other.cols, self.nvars, entries)

    def left_multiply(self, x: Sequence[Sequence[Fraction]]) -> LinFormMatrix:
        """X · M for a constant rows x rows matrix X."""
        entries = []
        for i in range(self.rows):
            row = []
            for c in range(self.cols):
                acc = [Fraction(0)] * self.nvars
                for k in range(self.rows):
                    xik = x[i][k]
                    if xik:
                        for v, a in enumerate(self.entries[k][c]):
                            if a:
                                acc[v] += xik * a
                row.append(tuple(acc))
            entries.append(tuple(row))
        return LinFormMatrix(self.rows, self.cols, self.nvars, tuple(entries))

    def evaluate(self, point: Sequence) -> list[list]:
        """Numeric matrix at ``point`` (entries may be any ring elements supporting + and *)."""
        out = []
        for r in range(self.rows):
            row = []
            for c in range(self.cols):
                acc = 0
                for a, x in zip(self.entries[r][c], point):
                    if a:
                        acc = acc + a * x
                row.append(acc)
            out.append(row)
        return out

    def substitute(self, basis: Sequence[Sequence[Fraction]]) -> LinFormMatrix:
        """Restrict to z = Σ t_i basis[i], giving forms in len(basis) variables."""
        m = len(basis)
        entries = []
        for r in range(self.rows):
            row = []
            for c in range(self.cols):
                coeffs = self.entries[r][c]
                row.append(tuple(sum((a * w[v] for v, a in enumerate(coeffs) if a), Fraction(0)) for w in basis))
            entries.append(tuple(row))
        return LinFormMatrix(self.rows, self.cols, m, tuple(entries))

    def column_vector(self, c: int) -> Vector:
        """Column c flattened to rows*nvars constant coordinates."""
        return [x for r in range(self.rows) for x in self.entries[r][c]]

    def column_basis(self) -> LinFormMatrix:
        """A subset of columns spanning the same constant-coefficient column space.

        Every column of the original is a rational combination of the kept
        columns (and vice versa), so the ideals of maximal minors agree.
        """
        red = linalg.RowReducer(self.rows * self.nvars)
        keep = [c for c in range(self.cols) if red.add(self.column_vector(c))]
        return self.select_columns(keep)

    def select_columns(self, keep: Sequence[int]) -> LinFormMatrix:
        entries = tuple(tuple(self.entries[r][c] for c in keep) for r in range(self.rows))
        return LinFormMatrix(self.rows, len(keep), self.nvars, entries)

    def select_rows(self, keep: Sequence[int]) -> LinFormMatrix:
        return LinFormMatrix(len(keep), self.cols, self.nvars, tuple(self.entries[r] for r in keep))

    def is_zero(self) -> bool:
        return all(not any(e) for row in self.entries for e in row)

    def to_strings(self) -> list[list[str]]:
        return [[str(Poly.linear(e)) if self.nvars else "0" for e in row] for row in self.entries]


def rank_at(m: LinFormMatrix, point: Sequence[Fraction]) -> int:
    if m.cols == 0:
        return 0
    return linalg.rank(m.evaluate([Fraction(x) for x in point]), m.cols)


def _minor_dets(m: LinFormMatrix, rows: Sequence[int], r: int, limit: int | None):
    """Yield (column subset, det) for all r x r minors on the given rows.

    Laplace expansion along the last row, memoised over column subsets so that
    overlapping minors share their sub-determinants.
    """
    memo: dict[tuple[int, ...], Poly] = {(): Poly.constant(m.nvars, 1)}
    forms = [[m.entry(i, c) for c in range(m.cols)] for i in rows]

    def det(cols: tuple[int, ...]) -> Poly:
        got = memo.get(cols)
        if got is not None:
            return got
        k = len(cols)
        row = forms[k - 1]
        acc = Poly(m.nvars)
        for j, c in enumerate(cols):
            e = row[c]
            if e.is_zero():
                continue
            sub = det(cols[:j] + cols[j + 1:])
            if sub.is_zero():
                continue
            term = e * sub
            acc = acc - term if (k - 1 + j) % 2 else acc + term
        memo[cols] = acc
        return acc

    count = 0
    for cols in combinations(range(m.cols), r):
        if limit is not None and count >= limit:
            return
        count += 1
        yield cols, det(cols)


class MinorCapExceeded(RuntimeError):
    pass


def minors(m: LinFormMatrix, r: int, limit: int | None = None) -> list[Poly]:
    """All nonzero r x r minors, deduplicated up to sign, in a stable order.

    With ``limit`` set, raises :class:`MinorCapExceeded` when more than ``limit``
    determinants would be needed.
    """
    if r < 1 or r > min(m.rows, m.cols):
        if r > m.cols and r <= m.rows:
            return []
        raise ValueError(f"minor order {r} does not fit a {m.rows}x{m.cols} matrix")
    from math import comb

    if limit is not None and comb(m.rows, r) * comb(m.cols, r) > limit:
        raise MinorCapExceeded(f"{comb(m.rows, r) * comb(m.cols, r)} minors exceed the cap {limit}")
    seen = set()
    out = []
    for rows in combinations(range(m.rows), r):
        for _, d in _minor_dets(m, rows, r, None):
            if d.is_zero():
                continue
            key = d.primitive()
            if key in seen:
                continue
            seen.add(key)
            out.append(d)
    return out


def linear_span_basis(polys: Sequence[Poly]) -> list[Poly]:
    """A basis (as polynomials) of the Q-span of ``polys``; generates the same ideal."""
    if not polys:
        return []
    nvars = polys[0].nvars
    monos = sorted({e for p in polys for e in p.terms}, key=degrevlex_key, reverse=True)
    index = {e: i for i, e in enumerate(monos)}
    rows = []
    for p in polys:
        v = [Fraction(0)] * len(monos)
        for e, c in p.terms.items():
            v[index[e]] = c
        rows.append(v)
    basis, _ = linalg.rref(rows, len(monos))
    return [Poly(nvars, {monos[j]: c for j, c in enumerate(r) if c}) for r in basis]


def minor_ideal_generators(m: LinFormMatrix, r: int, limit: int | None = None) -> list[Poly]:
    """Generators of the ideal of r x r minors after exact, ideal-preserving reductions.

    For maximal minors (r = rows) the columns are first cut down to a basis of
    their constant-coefficient span; the resulting homogeneous minors are then
    replaced by a basis of their linear span.
    """
    if r == m.rows:
        m = m.column_basis()
        if m.cols < r:
            return []
    return linear_span_basis(minors(m, r, limit))
