"""The rank criterion for finiteness of the maximal effective Λ-prolongation.

Given V = Q^n, a structure algebra Λ ⊆ gl(V) and a graded ideal K of the free
Lie algebra, the prolongation is finite dimensional exactly when the matrix
of linear forms

    (M1(Λ, z) | M2(K, z))

has rank n at every nonzero point z of W(K) over the algebraic closure. Here

* M1 has columns A z for A in a basis of the trace-orthogonal Λ⊥;
* Φ_K has columns Y z for Y in a basis of K⊥, the trace-orthogonal of
  ρ(K_{-2}) inside o(V);
* M2 has columns X Y z for X in the basis E_ij - E_ji of o(V), i.e. it is
  the concatenation of the blocks X Φ_K(z).

Instead of adapting a basis of V to W and appending the blocks z_j·Id for
the transverse coordinates, the matrix is restricted to W by substituting
z = Σ t_i w_i; the blocks z_j·Id have rank n off W, so the two formulations
have the same bad locus.

The rank condition is decided exactly: first a cheap search for a rational
point of rank deficiency (a sound certificate of infiniteness), then a
Gröbner basis of the ideal of maximal minors, which has only the origin as
common zero iff every variable has a pure power among its leading terms.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg
from .algebraic import QuadraticNumber, field_left_kernel, field_rank, find_common_zero, split
from .algebras import (
    MatrixSubspace,
    a0_compute,
    antisymmetric_basis,
    coordinates,
    k_perp,
    trace_orth,
    unflatten,
)
from .freelie import GradedIdeal, compute_W
from .grobner import buchberger, missing_pure_powers, small_points
from .linalg import Matrix
from .poly import LinFormMatrix, MinorCapExceeded, linear_span_basis, minor_ideal_generators, minors, rank_at

ROUTE_W_ZERO = "w-zero"
ROUTE_TWO_COLUMNS = "two-columns"
ROUTE_FIRST_KIND = "first-kind"
ROUTE_COMBINED = "combined"
ROUTE_MIN_RANK = "min-rank"
ROUTE_REDUCED = "reduced-algebra"

DEFAULT_MINOR_CAP = 200_000


@dataclass
class Verdict:
    finite: bool
    route: str
    witness: list | None = None
    algebraic_witness: list | None = None
    evidence: dict = field(default_factory=dict)
    dims: object = None

    @property
    def label(self) -> str:
        return "FINITE" if self.finite else "INFINITE"


@dataclass
class CheckOptions:
    shortcuts: bool = True
    random_points: int = 24
    witness_search: bool = True
    seed: int = 0
    minor_cap: int | None = DEFAULT_MINOR_CAP
    algebraic_witness: bool = True


# --------------------------------------------------------------- builders

def is_full_gl(lam: MatrixSubspace) -> bool:
    return lam.dim == lam.n * lam.n


def build_M1(lam: MatrixSubspace) -> LinFormMatrix:
    """Columns A z over a basis of the trace-orthogonal of Λ."""
    perp = trace_orth(lam)
    if not perp.basis:
        return LinFormMatrix.empty(lam.n, lam.n)
    return LinFormMatrix.from_matrices(perp.matrices())


def perp_matrices(k: GradedIdeal, perp_basis: Sequence[Matrix] | None = None) -> list[Matrix]:
    if perp_basis is not None:
        return [list(map(list, y)) for y in perp_basis]
    if k.mu < 2:
        return []
    return k_perp(k).matrices()


def build_Phi(k: GradedIdeal, perp_basis: Sequence[Matrix] | None = None) -> LinFormMatrix:
    """Columns Y z for Y over a basis of K⊥ ⊆ o(V); empty for kind one.

    ``perp_basis`` lets a caller keep the basis in which K⊥ was given.
    """
    ys = perp_matrices(k, perp_basis)
    if not ys:
        return LinFormMatrix.empty(k.n, k.n)
    return LinFormMatrix.from_matrices(ys)


def build_M2(k: GradedIdeal, perp_basis: Sequence[Matrix] | None = None) -> LinFormMatrix:
    """The blocks X_a Φ_K(z) for X_a = E_ij - E_ji, i < j."""
    phi = build_Phi(k, perp_basis)
    out = LinFormMatrix.empty(k.n, k.n)
    if phi.cols == 0:
        return out
    for x in antisymmetric_basis(k.n):
        out = out.hconcat(phi.left_multiply(x))
    return out


def build_M3(k: GradedIdeal, w: Sequence[Sequence[Fraction]] | None = None) -> LinFormMatrix:
    """Blocks α(z)·Id for α over a basis of the annihilator of W(K).

    In a basis whose first vectors span W these are the blocks z_j·Id for the
    transverse coordinates j.
    """
    n = k.n
    if w is None:
        w = compute_W(k)
    out = LinFormMatrix.empty(n, n)
    alphas = linalg.kernel(w, n) if w else linalg.identity(n)
    for alpha in alphas:
        cols = []
        for i in range(n):
            cols.append([tuple(alpha) if r == i else (Fraction(0),) * n for r in range(n)])
        out = out.hconcat(LinFormMatrix.from_columns(n, n, cols))
    return out


def restrict_to_W(m: LinFormMatrix, w: Sequence[Sequence[Fraction]]) -> LinFormMatrix:
    """Substitute z = Σ t_i w_i; the result is a matrix of forms in t_1..t_m."""
    if not w:
        raise ValueError("W is zero; nothing to restrict to")
    return m.substitute(w)


def build_combined(lam: MatrixSubspace, k: GradedIdeal, perp_basis=None) -> LinFormMatrix:
    m = build_M1(lam)
    if k.mu >= 2:
        m = m.hconcat(build_M2(k, perp_basis))
    return m


def build_M_from_a0(a0: MatrixSubspace) -> LinFormMatrix:
    """Columns X z for X over a basis of the trace-orthogonal of a0."""
    return build_M1(a0)


def lift_point(t: Sequence, w: Sequence[Sequence[Fraction]]) -> list:
    """z = Σ t_i w_i."""
    n = len(w[0])
    out = [Fraction(0)] * n
    for ti, wi in zip(t, w):
        if ti:
            out = [a + ti * b for a, b in zip(out, wi)]
    return out


# ---------------------------------------------------------- rank decision

def _candidate_points(m: int, opts: CheckOptions):
    yield from small_points(m, 1)
    rng = random.Random(opts.seed)
    for _ in range(opts.random_points):
        pt = tuple(Fraction(rng.randint(-3, 3)) for _ in range(m))
        if any(pt):
            yield pt


def find_rational_witness(m: LinFormMatrix, r: int, opts: CheckOptions) -> list | None:
    """A small rational point where rank(m) < r, checked exactly."""
    for pt in _candidate_points(m.nvars, opts):
        if rank_at(m, pt) < r:
            return list(pt)
    return None


def _algebraic_rank(m: LinFormMatrix, pt: Sequence) -> int:
    if m.cols == 0:
        return 0
    return field_rank(m.evaluate(pt))


def _greedy_columns(m: LinFormMatrix, r: int, rng: random.Random, start: Sequence[int] = ()) -> list[int]:
    """Columns chosen so the rank at a random point is as large as possible."""
    pt = [Fraction(rng.randint(-9, 9)) for _ in range(m.nvars)]
    val = m.evaluate(pt)
    red = linalg.RowReducer(m.rows)
    chosen = list(start)
    for c in chosen:
        red.add([val[i][c] for i in range(m.rows)])
    for c in range(m.cols):
        if c in chosen:
            continue
        if red.add([val[i][c] for i in range(m.rows)]):
            chosen.append(c)
        if red.rank == r:
            break
    return sorted(chosen)


def decide_full_rank(m: LinFormMatrix, r: int, opts: CheckOptions) -> dict:
    """Decide whether ``m`` has rank >= r at every nonzero point over the closure.

    Returns a dict with ``full`` (bool), optional ``witness`` (rational),
    optional ``algebraic_witness`` and Gröbner evidence.
    """
    ev: dict = {"rows": m.rows, "columns": m.cols, "variables": m.nvars, "minor_order": r}
    if m.nvars == 0:
        return {"full": True, **ev}
    reduced = m.column_basis() if r == m.rows else m
    ev["independent_columns"] = reduced.cols
    if reduced.cols < r:
        pt = [Fraction(1)] + [Fraction(0)] * (m.nvars - 1)
        return {"full": False, "witness": pt, "reason": "fewer independent columns than the required rank", **ev}
    wit = find_rational_witness(reduced, r, opts) if opts.witness_search else None
    if wit is not None:
        return {"full": False, "witness": wit, "reason": "rank deficiency at a rational point", **ev}

    try:
        gens = minor_ideal_generators(reduced, r, opts.minor_cap)
        capped = False
    except MinorCapExceeded:
        gens, capped = None, True

    if capped:
        rng = random.Random(opts.seed + 1)
        cols: list[int] = []
        for _ in range(3):
            cols = _greedy_columns(reduced, r, rng, cols)
            sub = reduced.select_columns(cols)
            try:
                sub_gens = minor_ideal_generators(sub, r, opts.minor_cap)
            except MinorCapExceeded:
                break
            if sub_gens:
                gb = buchberger(sub_gens)
                if gb.is_unit() or not missing_pure_powers(gb):
                    ev.update(_gb_evidence(gb, sub_gens))
                    ev["column_subset"] = cols
                    return {"full": True, **ev}
        # submatrix inconclusive: fall back to the full minor set
        gens = minor_ideal_generators(reduced, r, None)
        ev["cap_exceeded"] = True

    if not gens:
        pt = [Fraction(1)] + [Fraction(0)] * (m.nvars - 1)
        return {"full": False, "witness": pt, "reason": "all minors vanish", **ev}
    gb = buchberger(gens)
    ev.update(_gb_evidence(gb, gens))
    if gb.is_unit() or not missing_pure_powers(gb):
        return {"full": True, **ev}
    out = {"full": False, "reason": "minor ideal has a nonzero common zero", **ev}
    if opts.algebraic_witness:
        pt = find_common_zero(gens, seed=opts.seed)
        if pt is not None and _algebraic_rank(reduced, pt) < r:
            out["algebraic_witness"] = pt
    return out


def _gb_evidence(gb, gens) -> dict:
    return {
        "minor_generators": len(gens),
        "groebner_size": len(gb.gens),
        "pure_powers": {f"t{i + 1}": k for i, k in sorted(gb.pure_powers().items())},
        "missing_pure_powers": [f"t{i + 1}" for i in missing_pure_powers(gb)],
    }


def _verdict_from_decision(dec: dict, route: str, w: Sequence[Sequence[Fraction]]) -> Verdict:
    evidence = {k: v for k, v in dec.items() if k not in ("full", "witness", "algebraic_witness")}
    witness = lift_point(dec["witness"], w) if dec.get("witness") is not None else None
    alg = lift_point(dec["algebraic_witness"], w) if dec.get("algebraic_witness") is not None else None
    return Verdict(dec["full"], route, witness, alg, evidence)


# ----------------------------------------------------------------- checks

def finiteness_check(lam: MatrixSubspace, k: GradedIdeal, perp_basis=None,
                     options: CheckOptions | None = None) -> Verdict:
    """Decide finiteness of the maximal effective Λ-prolongation of f(V)/K."""
    opts = options or CheckOptions()
    n = k.n
    if lam.n != n:
        raise linalg.ShapeError(f"structure algebra acts on dimension {lam.n}, ideal on {n}")
    start = time.perf_counter()
    w = compute_W(k)
    if not w:
        return Verdict(True, ROUTE_W_ZERO, evidence={"W_dim": 0})

    gl = is_full_gl(lam)
    if opts.shortcuts and gl and k.mu >= 2 and len(w) == n and k.quotient_dim(2) <= 2:
        ev = {"W_dim": n, "phi_columns": k.quotient_dim(2)}
        phi = build_Phi(k, perp_basis)
        wit = find_rational_witness(phi, 2, opts) if phi.cols else [Fraction(1)] + [Fraction(0)] * (n - 1)
        return Verdict(False, ROUTE_TWO_COLUMNS, wit, evidence=ev)

    m = build_combined(lam, k, perp_basis)
    restricted = restrict_to_W(m, w)
    dec = decide_full_rank(restricted, n, opts)
    route = ROUTE_FIRST_KIND if k.mu == 1 else ROUTE_COMBINED
    v = _verdict_from_decision(dec, route, w)
    v.evidence["W_dim"] = len(w)
    v.evidence["seconds"] = round(time.perf_counter() - start, 4)
    return v


def min_rank_check(k: GradedIdeal, perp_basis=None, options: CheckOptions | None = None) -> Verdict:
    """Λ = gl(V): finite iff Φ_K restricted to W has rank >= 2 off the origin."""
    opts = options or CheckOptions()
    w = compute_W(k)
    if not w:
        return Verdict(True, ROUTE_W_ZERO, evidence={"W_dim": 0})
    if k.mu < 2:
        # kind one with Λ = gl: the prolongation is all of the symmetric algebra
        return Verdict(False, ROUTE_MIN_RANK, [Fraction(1)] + [Fraction(0)] * (k.n - 1),
                       evidence={"reason": "kind one with the full structure algebra"})
    phi = build_Phi(k, perp_basis)
    if opts.shortcuts and len(w) == k.n and phi.cols <= 2:
        wit = find_rational_witness(phi, 2, opts) if phi.cols else [Fraction(1)] + [Fraction(0)] * (k.n - 1)
        return Verdict(False, ROUTE_TWO_COLUMNS, wit, evidence={"phi_columns": phi.cols})
    restricted = restrict_to_W(phi, w)
    if restricted.cols < 2:
        pt = [Fraction(1)] + [Fraction(0)] * (restricted.nvars - 1)
        return Verdict(False, ROUTE_MIN_RANK, lift_point(pt, w), evidence={"phi_columns": restricted.cols})
    dec = decide_full_rank(restricted, 2, opts)
    return _verdict_from_decision(dec, ROUTE_MIN_RANK, w)


def reduced_algebra_check(lam: MatrixSubspace, k: GradedIdeal, options: CheckOptions | None = None) -> Verdict:
    """The same decision through a0(K, Λ): rank n of (X z) for X in a0⁰, at all z ≠ 0."""
    opts = options or CheckOptions()
    a0 = a0_compute(lam, k, compute_W(k))
    m = build_M_from_a0(a0)
    dec = decide_full_rank(m, k.n, opts)
    v = _verdict_from_decision(dec, ROUTE_REDUCED, linalg.identity(k.n))
    v.evidence["a0_dim"] = a0.dim
    return v


# ------------------------------------------------------- rank-one elements

@dataclass
class RankOneWitness:
    v: list
    xi: list
    point_rank: int

    def matrix(self) -> list[list]:
        return [[a * b for b in self.xi] for a in self.v]


def _in_span_over_extension(space: MatrixSubspace, mat: Sequence[Sequence]) -> bool:
    re = [[split(x)[0] for x in row] for row in mat]
    im = [[split(x)[1] for x in row] for row in mat]
    return coordinates(space, re) is not None and coordinates(space, im) is not None


def rank_one_witness(a0: MatrixSubspace, z0: Sequence | None = None,
                     options: CheckOptions | None = None) -> RankOneWitness | None:
    """A rank-one element v ⊗ ξ of a0 (over Q or a quadratic extension).

    ``v`` is a point where the matrix (X z)_{X ∈ a0⁰} drops rank and ξ spans
    part of the left kernel there, so that tr(X v ξᵀ) = ξᵀ X v = 0 for every
    X in a0⁰, i.e. v ξᵀ lies in a0. The membership is checked exactly.
    """
    opts = options or CheckOptions()
    n = a0.n
    m = build_M_from_a0(a0)
    if z0 is None:
        if m.cols < n:
            z0 = [Fraction(1)] + [Fraction(0)] * (n - 1)
        else:
            z0 = find_rational_witness(m, n, opts)
        if z0 is None:
            gens = linear_span_basis(minors(m.column_basis(), n)) if m.column_basis().cols >= n else []
            if gens:
                gb = buchberger(gens)
                if gb.is_unit() or not missing_pure_powers(gb):
                    return None
                z0 = find_common_zero(gens, seed=opts.seed)
            if z0 is None:
                return None
    val = m.evaluate(z0) if m.cols else [[] for _ in range(n)]
    rk = _algebraic_rank(m, z0)
    if rk >= n:
        return None
    if m.cols:
        ker = field_left_kernel(val)
    else:
        ker = [[Fraction(int(i == 0)) for i in range(n)]]
    if not ker:
        return None
    xi = ker[0]
    wit = RankOneWitness(list(z0), list(xi), rk)
    if not _in_span_over_extension(a0, wit.matrix()):
        raise AssertionError("rank-one candidate is not in a0; inconsistent trace duality")
    return wit


def is_quadratic(point: Sequence) -> bool:
    return any(isinstance(x, QuadraticNumber) and not x.is_rational() for x in point)


__all__ = [
    "Verdict", "CheckOptions", "RankOneWitness",
    "build_M1", "build_Phi", "build_M2", "build_M3", "build_combined", "build_M_from_a0",
    "restrict_to_W", "finiteness_check", "min_rank_check", "reduced_algebra_check",
    "rank_one_witness", "decide_full_rank", "find_rational_witness", "unflatten",
]
