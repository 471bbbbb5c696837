"""The graded free Lie algebra on ``n`` generators, its graded ideals, and W(K).

Basis convention
----------------
The degree-``p`` piece is spanned by the Lyndon words of length ``p`` on the
letters ``0..n-1`` (sorted lexicographically). A Lyndon word ``w`` of length
at least two has the standard factorisation ``w = uv`` with ``v`` its longest
proper Lyndon suffix, and the basis element attached to ``w`` is
``P(w) = [P(u), P(v)]`` with ``P(i) = e_i``. Hence ``P(01) = [e0, e1]``,
``P(001) = [e0, [e0, e1]]`` and ``[[e0, e1], e0] = -P(001)``.

In degree two the Lyndon words are the pairs ``i < j`` in lexicographic
order, so coordinates of ``f_{-2}(V)`` coincide with the ``e_i ∧ e_j``
coordinates of the second exterior power used in :mod:`tanaka.algebras`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from . import linalg
from .linalg import Matrix, RowReducer, Vector

Word = tuple[int, ...]


class DegreeBoundError(ValueError):
    pass


class IdealError(ValueError):
    pass


# --------------------------------------------------------------------- words

def is_lyndon(word: Sequence[int]) -> bool:
    w = tuple(word)
    return bool(w) and all(w < w[i:] + w[:i] for i in range(1, len(w)))


@lru_cache(maxsize=None)
def lyndon_basis(n: int, p: int) -> tuple[Word, ...]:
    """Lyndon words of length ``p`` over ``n`` letters, in lexicographic order (Duval)."""
    if n < 1 or p < 1:
        raise ValueError("need n >= 1 and p >= 1")
    out = []
    w = [-1]
    while w:
        w[-1] += 1
        if len(w) == p:
            out.append(tuple(w))
        m = len(w)
        while len(w) < p:
            w.append(w[len(w) - m])
        while w and w[-1] == n - 1:
            w.pop()
    return tuple(out)


def witt_dimension(n: int, p: int) -> int:
    """(1/p) Σ_{d|p} möbius(d) n^{p/d}."""
    total = 0
    for d in range(1, p + 1):
        if p % d == 0:
            total += _mobius(d) * n ** (p // d)
    return total // p


def _mobius(k: int) -> int:
    result, q = 1, 2
    while q * q <= k:
        if k % q == 0:
            k //= q
            if k % q == 0:
                return 0
            result = -result
        q += 1
    return -result if k > 1 else result


@lru_cache(maxsize=None)
def standard_factorization(word: Word) -> tuple[Word, Word]:
    for i in range(1, len(word)):
        if is_lyndon(word[i:]):
            return word[:i], word[i:]
    raise ValueError(f"{word} has no standard factorisation")


# ------------------------------------------------------------------ elements

@dataclass(frozen=True)
class LieElement:
    """A homogeneous element of the free Lie algebra in Lyndon coordinates."""

    degree: int
    coeffs: Mapping[Word, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {w: Fraction(c) for w, c in self.coeffs.items() if c}
        for w in clean:
            if len(w) != self.degree:
                raise ValueError(f"word {w} does not have degree {self.degree}")
        object.__setattr__(self, "coeffs", clean)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: LieElement) -> LieElement:
        if other.degree != self.degree and not other.is_zero():
            raise ValueError("cannot add elements of different degrees")
        out = dict(self.coeffs)
        for w, c in other.coeffs.items():
            out[w] = out.get(w, 0) + c
        return LieElement(self.degree, out)

    def __neg__(self) -> LieElement:
        return LieElement(self.degree, {w: -c for w, c in self.coeffs.items()})

    def __sub__(self, other: LieElement) -> LieElement:
        return self + (-other)

    def scale(self, c) -> LieElement:
        c = Fraction(c)
        return LieElement(self.degree, {w: c * x for w, x in self.coeffs.items()})

    def __repr__(self):
        if not self.coeffs:
            return f"LieElement({self.degree}, 0)"
        terms = " + ".join(f"{linalg.fraction_str(c)}*P{''.join(map(str, w))}" for w, c in sorted(self.coeffs.items()))
        return f"LieElement({self.degree}, {terms})"


def _combine(acc: dict, part: Mapping[Word, Fraction], c: Fraction) -> None:
    for w, x in part.items():
        v = acc.get(w, 0) + c * x
        if v:
            acc[w] = v
        else:
            acc.pop(w, None)


@lru_cache(maxsize=None)
def _bracket_words(u: Word, v: Word) -> tuple[tuple[Word, Fraction], ...]:
    """[P(u), P(v)] in the Lyndon basis, by recursive rewriting.

    For u < v the product u·v is Lyndon, and its standard factorisation is
    (u, v) exactly when u is a letter or the right factor of u is >= v.
    Otherwise Jacobi moves the bracket inside: with P(u) = [P(u1), P(u2)],
    [P(u), P(v)] = [P(u1), [P(u2), P(v)]] - [P(u2), [P(u1), P(v)]].
    """
    if u == v:
        return ()
    if u > v:
        return tuple((w, -c) for w, c in _bracket_words(v, u))
    if len(u) == 1 or standard_factorization(u)[1] >= v:
        return ((u + v, Fraction(1)),)
    u1, u2 = standard_factorization(u)
    acc: dict[Word, Fraction] = {}
    for w, c in _bracket_words(u2, v):
        _combine(acc, dict(_bracket_words(u1, w)), c)
    for w, c in _bracket_words(u1, v):
        _combine(acc, dict(_bracket_words(u2, w)), -c)
    return tuple(sorted(acc.items()))


class FreeLieAlgebra:
    """Free Lie algebra on ``n`` generators, truncated at ``max_degree``."""

    def __init__(self, n: int, max_degree: int):
        if n < 1:
            raise ValueError("need at least one generator")
        self.n = n
        self.max_degree = max_degree
        self._index: dict[int, dict[Word, int]] = {}

    def basis(self, p: int) -> tuple[Word, ...]:
        self._check(p)
        return lyndon_basis(self.n, p)

    def dim(self, p: int) -> int:
        return len(self.basis(p))

    def index(self, p: int) -> dict[Word, int]:
        if p not in self._index:
            self._index[p] = {w: i for i, w in enumerate(self.basis(p))}
        return self._index[p]

    def _check(self, p: int) -> None:
        if p < 1 or p > self.max_degree:
            raise DegreeBoundError(f"degree {p} outside 1..{self.max_degree}")

    def generator(self, i: int) -> LieElement:
        return LieElement(1, {(i,): Fraction(1)})

    def element(self, p: int, vec: Sequence[Fraction]) -> LieElement:
        return LieElement(p, {w: c for w, c in zip(self.basis(p), vec) if c})

    def vector(self, x: LieElement) -> Vector:
        idx = self.index(x.degree)
        v = [Fraction(0)] * len(idx)
        for w, c in x.coeffs.items():
            v[idx[w]] = c
        return v

    def bracket(self, x: LieElement, y: LieElement) -> LieElement:
        deg = x.degree + y.degree
        self._check(deg)
        acc: dict[Word, Fraction] = {}
        for u, a in x.coeffs.items():
            for v, b in y.coeffs.items():
                _combine(acc, dict(_bracket_words(u, v)), a * b)
        return LieElement(deg, acc)

    def bracket_vectors(self, p: int, x: Sequence[Fraction], q: int, y: Sequence[Fraction]) -> Vector:
        return self.vector(self.bracket(self.element(p, x), self.element(q, y)))

    @lru_cache(maxsize=None)
    def generator_action(self, i: int, p: int) -> tuple[tuple[Fraction, ...], ...]:
        """Matrix (rows = basis of degree p) of ad(e_i): f_{-p} -> f_{-(p+1)}, x ↦ [e_i, x]."""
        gi = self.generator(i)
        rows = []
        for w in self.basis(p):
            rows.append(tuple(self.vector(self.bracket(gi, LieElement(p, {w: Fraction(1)})))))
        return tuple(rows)

    def derivation(self, a: Sequence[Sequence[Fraction]], x: LieElement) -> LieElement:
        """T_A(x) for the degree-zero derivation extending v ↦ A v."""
        acc = LieElement(x.degree)
        for w, c in x.coeffs.items():
            acc = acc + self._derivation_word(a, w).scale(c)
        return acc

    def _derivation_word(self, a, w: Word) -> LieElement:
        if len(w) == 1:
            (i,) = w
            return LieElement(1, {(k,): a[k][i] for k in range(self.n) if a[k][i]})
        u, v = standard_factorization(w)
        pu = LieElement(len(u), {u: Fraction(1)})
        pv = LieElement(len(v), {v: Fraction(1)})
        return self.bracket(self._derivation_word(a, u), pv) + self.bracket(pu, self._derivation_word(a, v))

    def derivation_matrix(self, a: Sequence[Sequence[Fraction]], p: int) -> Matrix:
        """Matrix of T_A on f_{-p} acting on column coordinate vectors."""
        cols = [self.vector(self.derivation(a, LieElement(p, {w: Fraction(1)}))) for w in self.basis(p)]
        return linalg.transpose(cols)


# -------------------------------------------------------------------- ideals

@dataclass(frozen=True)
class GradedIdeal:
    """Slices K_{-2}..K_{-mu} of a mu-cofinite graded ideal of f(V).

    Each slice is an rref basis (rows) in Lyndon coordinates. Degrees above mu
    are implicitly everything. ``mu == 1`` means K = f_[2](V).
    """

    n: int
    mu: int
    slices: Mapping[int, tuple[tuple[Fraction, ...], ...]]

    def __post_init__(self):
        if self.mu < 1:
            raise IdealError("kind must be at least 1")
        clean = {}
        for p in range(2, self.mu + 1):
            rows = [list(r) for r in self.slices.get(p, ())]
            dim = len(lyndon_basis(self.n, p))
            basis = linalg.rref(rows, dim)[0] if rows else []
            clean[p] = tuple(tuple(r) for r in basis)
        extra = set(self.slices) - set(clean)
        if extra:
            raise IdealError(f"slices given for degrees {sorted(extra)} outside 2..{self.mu}")
        object.__setattr__(self, "slices", clean)

    @property
    def algebra(self) -> FreeLieAlgebra:
        return _algebra(self.n, self.mu + 1)

    def ambient_dim(self, p: int) -> int:
        return len(lyndon_basis(self.n, p))

    def dim(self, p: int) -> int:
        """dim K_{-p}; degrees above mu are the full free piece."""
        if p > self.mu or (self.mu == 1 and p >= 2):
            return self.ambient_dim(p)
        return len(self.slices.get(p, ()))

    def quotient_dim(self, p: int) -> int:
        """dim g_{-p} = dim f_{-p} - dim K_{-p}."""
        if p == 1:
            return self.n
        return self.ambient_dim(p) - self.dim(p)

    def reducer(self, p: int) -> RowReducer:
        return _reducer(self, p)

    def contains(self, p: int, vec: Sequence[Fraction]) -> bool:
        if p > self.mu:
            return True
        return self.reducer(p).contains(vec)

    def quotient_basis(self, p: int) -> list[int]:
        """Indices of Lyndon words whose classes form a basis of g_{-p} (non-pivot columns)."""
        if p == 1:
            return list(range(self.n))
        if p > self.mu:
            return []
        piv = self.reducer(p).pivots
        return [j for j in range(self.ambient_dim(p)) if j not in piv]

    def quotient_coords(self, p: int, vec: Sequence[Fraction]) -> Vector:
        """Coordinates of the class of ``vec`` in the basis :meth:`quotient_basis`."""
        if p == 1:
            return list(vec)
        if p > self.mu:
            return []
        nf = self.reducer(p).normal_form(vec)
        return [nf[j] for j in self.quotient_basis(p)]

    def is_subideal_of(self, other: GradedIdeal) -> bool:
        if self.n != other.n:
            return False
        top = max(self.mu, other.mu)
        for p in range(2, top + 1):
            if p > self.mu:
                if other.dim(p) != other.ambient_dim(p):
                    return False
                continue
            for r in self.slices[p]:
                if not other.contains(p, r):
                    return False
        return True


@lru_cache(maxsize=None)
def _algebra(n: int, max_degree: int) -> FreeLieAlgebra:
    return FreeLieAlgebra(n, max_degree)


_REDUCERS: dict = {}


def _reducer(k: GradedIdeal, p: int) -> RowReducer:
    key = (k.n, k.mu, p, k.slices.get(p, ()))
    red = _REDUCERS.get(key)
    if red is None:
        red = linalg.reducer([list(r) for r in k.slices.get(p, ())], k.ambient_dim(p))
        _REDUCERS[key] = red
    return red


def free_ideal(n: int, mu: int) -> GradedIdeal:
    """K = f_[mu+1](V): the free FGLA of kind mu."""
    return GradedIdeal(n, mu, {})


def ideal_close(n: int, mu: int, generators: Iterable[tuple[int, Sequence[Fraction] | LieElement]]) -> GradedIdeal:
    """Smallest graded ideal with slices in degrees 2..mu containing ``generators``.

    Generators are ``(degree, element)`` pairs, the element given either as a
    :class:`LieElement` or as a coordinate vector in the Lyndon basis.
    """
    alg = _algebra(n, mu + 1)
    gens: dict[int, list[Vector]] = {}
    for p, g in generators:
        if not 2 <= p <= mu:
            raise IdealError(f"generator degree {p} outside 2..{mu}")
        vec = alg.vector(g) if isinstance(g, LieElement) else [linalg.to_fraction(x) for x in g]
        if len(vec) != alg.dim(p):
            raise IdealError(f"degree-{p} generator has {len(vec)} coordinates, expected {alg.dim(p)}")
        gens.setdefault(p, []).append(vec)
    slices: dict[int, tuple] = {}
    prev: list[Vector] = []
    for p in range(2, mu + 1):
        rows = list(gens.get(p, []))
        if p > 2:
            for r in prev:
                x = alg.element(p - 1, r)
                for i in range(n):
                    rows.append(alg.vector(alg.bracket(alg.generator(i), x)))
        basis = linalg.rref(rows, alg.dim(p))[0] if rows else []
        slices[p] = tuple(tuple(r) for r in basis)
        prev = basis
    return GradedIdeal(n, mu, slices)


def validate_ideal(k: GradedIdeal) -> bool:
    """Closure under ad(V) and properness of K_{-2}."""
    try:
        check_ideal(k)
    except IdealError:
        return False
    return True


def check_ideal(k: GradedIdeal) -> None:
    if k.mu >= 2 and k.dim(2) >= k.ambient_dim(2):
        raise IdealError("K_{-2} must be a proper subspace of the second exterior power")
    alg = k.algebra
    for p in range(2, k.mu):
        for r in k.slices[p]:
            x = alg.element(p, r)
            for i in range(k.n):
                y = alg.vector(alg.bracket(alg.generator(i), x))
                if not k.contains(p + 1, y):
                    raise IdealError(f"[K_-{p}, e{i}] is not contained in K_-{p + 1}")


def compute_W(k: GradedIdeal) -> Matrix:
    """rref basis of W(K) = {v in V : [v, f_{-p}] ⊆ K_{-(p+1)} for 2 <= p <= mu-1}."""
    n = k.n
    conditions: list[Vector] = []
    alg = k.algebra
    for p in range(2, k.mu):
        red = k.reducer(p + 1)
        acts = [alg.generator_action(i, p) for i in range(n)]
        for b in range(alg.dim(p)):
            images = [red.normal_form(list(acts[i][b])) for i in range(n)]
            for coord in range(alg.dim(p + 1)):
                row = [images[i][coord] for i in range(n)]
                if any(row):
                    conditions.append(row)
    if not conditions:
        return linalg.identity(n)
    ker = linalg.kernel(conditions, n)
    return linalg.rref(ker, n)[0] if ker else []
