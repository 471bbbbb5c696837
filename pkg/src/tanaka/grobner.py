"""Buchberger's algorithm over Q in degrevlex order, and the origin-only test.

Internally polynomials are dicts from exponent tuples to Python ints; every
reduction step is fraction-free and the result is divided by its content,
which keeps coefficient growth in check. The public result is the reduced
monic basis with :class:`~fractions.Fraction` coefficients.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb, gcd, lcm
from typing import Iterable, Sequence

from . import linalg
from .poly import Exp, Poly, degrevlex_key, monomials

IntPoly = dict[Exp, int]


def _to_int(p: Poly) -> IntPoly:
    den = 1
    for c in p.terms.values():
        den = lcm(den, c.denominator)
    return _primitive({e: int(c * den) for e, c in p.terms.items()})


def _primitive(f: IntPoly) -> IntPoly:
    g = 0
    for c in f.values():
        g = gcd(g, c)
        if g == 1:
            break
    if g > 1:
        f = {e: c // g for e, c in f.items()}
    return f


def _lead(f: IntPoly) -> Exp:
    return max(f, key=degrevlex_key)


def _divides(a: Exp, b: Exp) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm_exp(a: Exp, b: Exp) -> Exp:
    return tuple(max(x, y) for x, y in zip(a, b))


def _sub_exp(a: Exp, b: Exp) -> Exp:
    return tuple(x - y for x, y in zip(a, b))


class _Basis:
    """Working basis: polynomials with cached leading monomials and coefficients."""

    def __init__(self):
        self.polys: list[IntPoly] = []
        self.leads: list[Exp] = []
        self.alive: list[bool] = []

    def add(self, f: IntPoly) -> int:
        self.polys.append(f)
        self.leads.append(_lead(f))
        self.alive.append(True)
        return len(self.polys) - 1

    def reducer_for(self, m: Exp) -> int | None:
        for i, lm in enumerate(self.leads):
            if self.alive[i] and _divides(lm, m):
                return i
        return None


def _reduce(f: IntPoly, basis: _Basis) -> IntPoly:
    """Full fraction-free reduction of ``f`` modulo the live elements of ``basis``."""
    f = dict(f)
    done: IntPoly = {}
    while f:
        m = _lead(f)
        c = f[m]
        i = basis.reducer_for(m)
        if i is None:
            done[m] = c
            del f[m]
            continue
        g = basis.polys[i]
        lg = basis.leads[i]
        cg = g[lg]
        k = gcd(c, cg)
        mult_f, mult_g = cg // k, c // k
        shift = _sub_exp(m, lg)
        if mult_f != 1:
            f = {e: v * mult_f for e, v in f.items()}
            done = {e: v * mult_f for e, v in done.items()}
        for e, v in g.items():
            t = tuple(a + b for a, b in zip(e, shift))
            nv = f.get(t, 0) - mult_g * v
            if nv:
                f[t] = nv
            else:
                f.pop(t, None)
        if len(f) > 8:
            g2 = 0
            for v in itertools.chain(f.values(), done.values()):
                g2 = gcd(g2, v)
                if g2 == 1:
                    break
            if g2 > 1:
                f = {e: v // g2 for e, v in f.items()}
                done = {e: v // g2 for e, v in done.items()}
    return _primitive(done) if done else done


def _spoly(f: IntPoly, lf: Exp, g: IntPoly, lg: Exp) -> IntPoly:
    l = _lcm_exp(lf, lg)
    cf, cg = f[lf], g[lg]
    k = gcd(cf, cg)
    a, b = cg // k, cf // k
    sf, sg = _sub_exp(l, lf), _sub_exp(l, lg)
    out: IntPoly = {}
    for e, v in f.items():
        t = tuple(x + y for x, y in zip(e, sf))
        out[t] = out.get(t, 0) + a * v
    for e, v in g.items():
        t = tuple(x + y for x, y in zip(e, sg))
        nv = out.get(t, 0) - b * v
        if nv:
            out[t] = nv
        else:
            out.pop(t, None)
    return {e: v for e, v in out.items() if v}


@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced, monic degrevlex Gröbner basis."""

    nvars: int
    gens: tuple[Poly, ...]

    @property
    def leads(self) -> list[Exp]:
        return [g.lead()[0] for g in self.gens]

    def is_unit(self) -> bool:
        return any(sum(e) == 0 for e in self.leads)

    def reduce(self, p: Poly) -> Poly:
        """Normal form of ``p`` (monic scaling not applied)."""
        out: dict[Exp, Fraction] = {}
        f = dict(p.terms)
        leads = [(g.lead()[0], g) for g in self.gens]
        while f:
            m = max(f, key=degrevlex_key)
            c = f[m]
            for lm, g in leads:
                if _divides(lm, m):
                    shift = _sub_exp(m, lm)
                    for e, v in g.terms.items():
                        t = tuple(a + b for a, b in zip(e, shift))
                        nv = f.get(t, 0) - c * v
                        if nv:
                            f[t] = nv
                        else:
                            f.pop(t, None)
                    break
            else:
                out[m] = c
                del f[m]
        return Poly(self.nvars, out)

    def contains(self, p: Poly) -> bool:
        return self.reduce(p).is_zero()

    def pure_powers(self) -> dict[int, int]:
        """Variable index -> smallest k with z_i^k a leading monomial."""
        out: dict[int, int] = {}
        for e in self.leads:
            nz = [i for i, k in enumerate(e) if k]
            if len(nz) == 1:
                i = nz[0]
                out[i] = min(out.get(i, e[i]), e[i])
        return out

    def is_zero_dimensional(self) -> bool:
        return self.is_unit() or len(self.pure_powers()) == self.nvars

    def normal_set(self) -> list[Exp]:
        """Standard monomials (finite only for zero-dimensional ideals)."""
        if not self.is_zero_dimensional():
            raise ValueError("ideal is not zero-dimensional")
        if self.is_unit():
            return []
        bounds = self.pure_powers()
        leads = self.leads
        out = []
        for e in itertools.product(*(range(bounds[i]) for i in range(self.nvars))):
            if not any(_divides(lm, e) for lm in leads):
                out.append(tuple(e))
        out.sort(key=degrevlex_key)
        return out


def buchberger(gens: Iterable[Poly], max_pairs: int | None = None) -> GroebnerBasis:
    """Reduced degrevlex Gröbner basis of the ideal generated by ``gens``."""
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        raise ValueError("need at least one nonzero generator")
    nvars = gens[0].nvars
    if any(g.nvars != nvars for g in gens):
        raise ValueError("generators live in different rings")

    basis = _Basis()
    pairs: list = []
    counter = itertools.count()
    treated: set[tuple[int, int]] = set()

    def push_pairs(j: int) -> None:
        lj = basis.leads[j]
        for i in range(j):
            if not basis.alive[i]:
                continue
            li = basis.leads[i]
            l = _lcm_exp(li, lj)
            heapq.heappush(pairs, (sum(l), degrevlex_key(l), next(counter), i, j))

    def insert(f: IntPoly) -> None:
        j = basis.add(f)
        lj = basis.leads[j]
        push_pairs(j)
        # elements whose lead is a multiple of the new lead leave the basis;
        # their pairs with the new element stay queued
        for i in range(j):
            if basis.alive[i] and _divides(lj, basis.leads[i]):
                basis.alive[i] = False

    for g in sorted((_to_int(g) for g in gens), key=lambda f: degrevlex_key(_lead(f))):
        r = _reduce(g, basis)
        if r:
            insert(r)
            if sum(_lead(r)) == 0:
                break

    processed = 0
    while pairs:
        _, _, _, i, j = heapq.heappop(pairs)
        treated.add((i, j))
        li, lj = basis.leads[i], basis.leads[j]
        l = _lcm_exp(li, lj)
        if all(a == 0 or b == 0 for a, b in zip(li, lj)):
            continue
        if _chain_criterion(basis, treated, i, j, l):
            continue
        processed += 1
        if max_pairs is not None and processed > max_pairs:
            raise RuntimeError("pair budget exhausted")
        s = _spoly(basis.polys[i], li, basis.polys[j], lj)
        r = _reduce(s, basis) if s else s
        if r:
            insert(r)
            if sum(_lead(r)) == 0:
                break
    return _finalize(nvars, basis)


def _chain_criterion(basis: _Basis, treated: set, i: int, j: int, l: Exp) -> bool:
    """Buchberger's second criterion: some live lead divides lcm and both side pairs are done."""
    for k, lk in enumerate(basis.leads):
        if k in (i, j) or not basis.alive[k] or not _divides(lk, l):
            continue
        if (min(i, k), max(i, k)) in treated and (min(j, k), max(j, k)) in treated:
            return True
    return False


def _finalize(nvars: int, basis: _Basis) -> GroebnerBasis:
    polys = [basis.polys[i] for i in range(len(basis.polys)) if basis.alive[i]]
    if any(sum(_lead(f)) == 0 for f in polys):
        return GroebnerBasis(nvars, (Poly.constant(nvars, 1),))
    # minimal basis: drop elements whose lead is divisible by another lead
    polys.sort(key=lambda f: degrevlex_key(_lead(f)))
    minimal: list[IntPoly] = []
    for f in polys:
        lf = _lead(f)
        if not any(_divides(_lead(g), lf) for g in minimal):
            minimal.append(f)
    # interreduce
    reduced = []
    for idx, f in enumerate(minimal):
        others = _Basis()
        for k, g in enumerate(minimal):
            if k != idx:
                others.add(g)
        lf = _lead(f)
        tail = dict(f)
        del tail[lf]
        rt = _reduce_keep_scale(tail, f[lf], others)
        reduced.append(rt | {lf: Fraction(1)})
    gens = [Poly(nvars, r) for r in reduced]
    gens.sort(key=lambda g: degrevlex_key(g.lead()[0]))
    return GroebnerBasis(nvars, tuple(gens))


def _reduce_keep_scale(tail: IntPoly, lc: int, others: _Basis) -> dict[Exp, Fraction]:
    """Reduce the tail of a basis element over Q and divide by its leading coefficient."""
    f = {e: Fraction(v, lc) for e, v in tail.items()}
    out: dict[Exp, Fraction] = {}
    while f:
        m = max(f, key=degrevlex_key)
        c = f[m]
        i = others.reducer_for(m)
        if i is None:
            out[m] = c
            del f[m]
            continue
        g = others.polys[i]
        lg = others.leads[i]
        factor = c / g[lg]
        shift = _sub_exp(m, lg)
        for e, v in g.items():
            t = tuple(a + b for a, b in zip(e, shift))
            nv = f.get(t, 0) - factor * v
            if nv:
                f[t] = nv
            else:
                f.pop(t, None)
    return out


# ------------------------------------------------------------ decisions

def origin_only(gens: Sequence[Poly]) -> bool:
    """True iff the common zero set of homogeneous ``gens`` over the algebraic closure is {0}."""
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return False
    nvars = gens[0].nvars
    if nvars == 0:
        return True
    if any(not g.is_homogeneous() for g in gens):
        raise ValueError("origin_only expects homogeneous generators")
    gb = buchberger(gens)
    return gb.is_unit() or len(gb.pure_powers()) == nvars


def missing_pure_powers(gb: GroebnerBasis) -> list[int]:
    """Variables with no pure power among the leading monomials."""
    have = gb.pure_powers()
    return [i for i in range(gb.nvars) if i not in have]


def graded_piece_dim(gens: Sequence[Poly], d: int) -> int:
    """dim J_d for the homogeneous ideal J generated by ``gens``."""
    nvars = gens[0].nvars
    target = monomials(nvars, d)
    index = {e: i for i, e in enumerate(target)}
    red = linalg.RowReducer(len(target))
    for g in gens:
        gd = g.degree()
        if gd > d:
            continue
        for m in monomials(nvars, d - gd):
            row = {}
            for e, c in g.terms.items():
                row[index[tuple(a + b for a, b in zip(e, m))]] = c
            red.add(row)
            if red.rank == len(target):
                return red.rank
    return red.rank


def small_points(nvars: int, height: int = 1):
    """Nonzero integer points with coordinates in [-height, height], one per line through 0.

    The first nonzero coordinate is positive, so opposite points are not repeated.
    """
    rng = range(-height, height + 1)
    for pt in itertools.product(rng, repeat=nvars):
        nz = next((x for x in pt if x), 0)
        if nz <= 0:
            continue
        if height > 1:
            g = 0
            for x in pt:
                g = gcd(g, x)
            if g != 1:
                continue
        yield tuple(Fraction(x) for x in pt)


def saturation_oracle(gens: Sequence[Poly], dmax: int, height: int = 2) -> bool | None:
    """Independent origin-only decision by degreewise linear algebra.

    Returns True once some graded piece J_d is the full space of degree-d
    forms, False if a common rational zero of small height is found, and
    None (undecided) otherwise.
    """
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return False
    nvars = gens[0].nvars
    if nvars == 0:
        return True
    start = max(g.degree() for g in gens)
    for d in range(start, dmax + 1):
        if graded_piece_dim(gens, d) == comb(d + nvars - 1, nvars - 1):
            return True
    for pt in small_points(nvars, height):
        if all(g(pt) == 0 for g in gens):
            return False
    return None
