"""Arithmetic in quadratic fields Q(√d) and common zeros of homogeneous systems.

Rank deficiency of a matrix of linear forms can happen only at irrational
points (``z1² + z2² = 0`` has the solution ``(1, i)``). To produce explicit
evidence in such cases we slice the zero cone with random hyperplanes and an
affine chart until the system is zero-dimensional, and read off points whose
coordinates lie in Q or in a quadratic extension from the eigenvectors of a
multiplication matrix.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

import sympy

from . import linalg
from .grobner import buchberger
from .poly import Poly


class QuadraticNumber:
    """a + b√d with rational a, b and a fixed non-square integer d."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b=0, d: int = -1):
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.d = d

    def _lift(self, other) -> QuadraticNumber:
        if isinstance(other, QuadraticNumber):
            if other.d != self.d and other.b and self.b:
                raise ValueError("mixing different quadratic fields")
            return other
        return QuadraticNumber(other, 0, self.d)

    def _field(self, other: QuadraticNumber) -> int:
        return self.d if self.b else other.d

    def __add__(self, other):
        o = self._lift(other)
        return QuadraticNumber(self.a + o.a, self.b + o.b, self._field(o))

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber(-self.a, -self.b, self.d)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        d = self._field(o)
        return QuadraticNumber(self.a * o.a + self.b * o.b * d, self.a * o.b + self.b * o.a, d)

    __rmul__ = __mul__

    def inverse(self) -> QuadraticNumber:
        norm = self.a * self.a - self.b * self.b * self.d
        if not norm:
            raise ZeroDivisionError("division by zero in a quadratic field")
        return QuadraticNumber(self.a / norm, -self.b / norm, self.d)

    def __truediv__(self, other):
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def __pow__(self, k: int):
        out = QuadraticNumber(1, 0, self.d)
        for _ in range(k):
            out = out * self
        return out

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return not self.b and self.a == other
        if isinstance(other, QuadraticNumber):
            return self.a == other.a and self.b == other.b and (not self.b or self.d == other.d)
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b, self.d if self.b else None))

    def is_rational(self) -> bool:
        return not self.b

    def __repr__(self):
        return f"QuadraticNumber({self})"

    def __str__(self):
        a, b = linalg.fraction_str(self.a), linalg.fraction_str(abs(self.b))
        root = "i" if self.d == -1 else f"sqrt({self.d})"
        if not self.b:
            return a
        tail = root if abs(self.b) == 1 else f"{b}*{root}"
        if not self.a:
            return tail if self.b > 0 else f"-{tail}"
        return f"{a} {'+' if self.b > 0 else '-'} {tail}"

    def to_json(self) -> list[str]:
        return [linalg.fraction_str(self.a), linalg.fraction_str(self.b), str(self.d)]


def split(x) -> tuple[Fraction, Fraction]:
    """(a, b) with x = a + b√d."""
    if isinstance(x, QuadraticNumber):
        return x.a, x.b
    return Fraction(x), Fraction(0)


def field_rank(rows: Sequence[Sequence]) -> int:
    return len(_echelon([list(r) for r in rows])[1])


def field_left_kernel(rows: Sequence[Sequence], zero_like=0) -> list[list]:
    """Basis of {y : yᵀ A = 0} over whatever field the entries live in."""
    if not rows:
        return []
    cols = list(map(list, zip(*rows)))
    return field_kernel(cols, len(rows))


def field_kernel(rows: Sequence[Sequence], ncols: int) -> list[list]:
    mat, piv = _echelon([list(r) for r in rows], reduced=True)
    free = [j for j in range(ncols) if j not in piv]
    out = []
    for f in free:
        v: list = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, p in zip(mat, piv):
            v[p] = -r[f]
        out.append(v)
    return out


def _echelon(mat: list[list], reduced: bool = False) -> tuple[list[list], list[int]]:
    piv = []
    r = 0
    ncols = len(mat[0]) if mat else 0
    for c in range(ncols):
        sel = next((i for i in range(r, len(mat)) if mat[i][c]), None)
        if sel is None:
            continue
        mat[r], mat[sel] = mat[sel], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] and (reduced or i > r):
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        piv.append(c)
        r += 1
        if r == len(mat):
            break
    return mat[:r], piv


def _square_free(num: int) -> tuple[int, int]:
    """num = s² · d with d square-free (trial division on small primes)."""
    sign = -1 if num < 0 else 1
    num = abs(num)
    s = 1
    p = 2
    while p * p <= num and p < 10_000:
        while num % (p * p) == 0:
            num //= p * p
            s *= p
        p += 1
    return s, sign * num


def quadratic_roots(b: Fraction, c: Fraction) -> list:
    """Roots of x² + b x + c, rational or in Q(√d)."""
    disc = b * b - 4 * c
    num = disc.numerator * disc.denominator
    s, d = _square_free(num)
    scale = Fraction(s, disc.denominator)
    if d == 1:
        return [(-b + scale) / 2, (-b - scale) / 2]
    if d == 0:
        return [-b / 2]
    return [QuadraticNumber(-b / 2, scale / 2, d), QuadraticNumber(-b / 2, -scale / 2, d)]


def _rational_factor_roots(coeffs: Sequence[Fraction]) -> list:
    """Roots of degree <= 2 irreducible factors of the polynomial (coefficients high to low)."""
    x = sympy.Symbol("x")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * x ** (len(coeffs) - 1 - i) for i, c in enumerate(coeffs))
    _, factors = sympy.factor_list(sympy.Poly(expr, x, domain="QQ"))
    roots = []
    for fac, _ in factors:
        deg = fac.degree()
        cs = [Fraction(int(sympy.fraction(q)[0]), int(sympy.fraction(q)[1])) for q in fac.all_coeffs()]
        lead = cs[0]
        cs = [q / lead for q in cs]
        if deg == 1:
            roots.append(-cs[1])
        elif deg == 2:
            roots.extend(quadratic_roots(cs[1], cs[2]))
    return roots


def _points_of_zero_dim(gb, nvars: int, rng: random.Random) -> list[list]:
    basis = gb.normal_set()
    if not basis:
        return []
    index = {e: i for i, e in enumerate(basis)}
    size = len(basis)
    form = Poly.linear([Fraction(rng.randint(-5, 5)) for _ in range(nvars)])

    def coords(p: Poly) -> list[Fraction]:
        nf = gb.reduce(p)
        v = [Fraction(0)] * size
        for e, c in nf.terms.items():
            v[index[e]] = c
        return v

    cols = [coords(form * Poly.monomial(e)) for e in basis]
    mult = linalg.transpose(cols)
    charpoly = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in mult]).charpoly()
    coeffs = [Fraction(int(sympy.fraction(q)[0]), int(sympy.fraction(q)[1])) for q in charpoly.all_coeffs()]
    var_coords = [coords(Poly.var(nvars, i)) for i in range(nvars)]
    one = index.get((0,) * nvars)
    if one is None:
        return []
    points = []
    multt = linalg.transpose(mult)  # Mᵀ
    for theta in _rational_factor_roots(coeffs):
        shifted = [[x - theta if i == j else x for j, x in enumerate(row)] for i, row in enumerate(multt)]
        ker = field_kernel(shifted, size)
        if len(ker) != 1:
            continue
        phi = ker[0]
        if not phi[one]:
            continue
        norm = 1 / phi[one]
        phi = [x * norm for x in phi]
        pt = [sum((c * p for c, p in zip(vc, phi) if c), Fraction(0)) for vc in var_coords]
        points.append(pt)
    return points


def find_common_zero(gens: Sequence[Poly], tries: int = 6, seed: int = 0) -> list | None:
    """A nonzero common zero of homogeneous ``gens`` with coordinates in Q or Q(√d), if found."""
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return None
    nvars = gens[0].nvars
    for attempt in range(tries):
        rng = random.Random(seed * 1009 + attempt)
        chart = Poly.linear([Fraction(rng.randint(-3, 3) or 1) for _ in range(nvars)])
        affine = chart - Poly.constant(nvars, 1)
        for k in range(nvars):
            slices = [Poly.linear([Fraction(rng.randint(-4, 4)) for _ in range(nvars)]) for _ in range(k)]
            gb = buchberger(list(gens) + slices + [affine])
            if gb.is_unit():
                break
            if not gb.is_zero_dimensional():
                continue
            for pt in _points_of_zero_dim(gb, nvars, rng):
                if all(not g(pt) for g in gens) and any(pt):
                    return pt
            break
    return None
