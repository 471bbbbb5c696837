"""Problem files: schema, validation, built-in presets and serialization.

A problem is a JSON object::

    {
      "name": "optional label",
      "n": 4, "mu": 2,
      "L": {"preset": "gl"}                       # gl sl so sp co csp
         | {"preset": "o_form", "form": M}        # also co_form
         | {"preset": "o_family", "forms": [M]}   # also co_family
         | {"basis": [M, ...]},
      "K": {"preset": "free"}                     # also heisenberg, full-wedge
         | {"degree2": [[c, ...], ...],           # coordinates on e_i∧e_j, i<j
            "degree2_matrices": [M, ...],         # antisymmetric matrices
            "given_as_perp": false,               # true: the above span K⊥ instead
            "higher": [{"degree": 3, "coords": [...]}, ...]}
         | {"slices": {"2": [[...]], "3": [[...]]}},
      "options": {"pmax": 6, "run_oracle": false, "format": "text"}
    }

or ``{"preset": "ex4.9", "params": {...}, "options": {...}}``. Rationals are
integers or strings ``"p/q"``; floats are rejected.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from . import algebras, linalg
from .algebras import MatrixSubspace
from .freelie import GradedIdeal, IdealError, check_ideal, ideal_close, lyndon_basis


class ProblemError(ValueError):
    """Invalid problem input; ``code`` is stable and ``field`` names the culprit."""

    def __init__(self, code: str, field: str, message: str):
        super().__init__(f"[{code}] {field}: {message}")
        self.code = code
        self.field = field
        self.message = message


E_SCHEMA = "schema"
E_RATIONAL = "rational"
E_DIMENSION = "dimension"
E_INVALID_IDEAL = "invalid-ideal"
E_IMPROPER = "improper-ideal"
E_KIND_ONE = "kind-one"
E_DEPENDENT = "dependent-basis"
E_PRESET = "unknown-preset"

L_PRESETS = ("gl", "sl", "so", "sp", "co", "csp", "o_form", "co_form", "o_family", "co_family")
K_PRESETS = ("free", "heisenberg", "full-wedge")
DEFAULT_OPTIONS = {"pmax": 6, "run_oracle": False, "format": "text"}


# --------------------------------------------------------------- rationals

def _rational(value, where: str) -> Fraction:
    try:
        return linalg.to_fraction(value)
    except ZeroDivisionError:
        raise ProblemError(E_RATIONAL, where, f"zero denominator in {value!r}") from None
    except (TypeError, ValueError):
        raise ProblemError(E_RATIONAL, where, f"{value!r} is not an exact rational") from None


def _canon(x: Fraction) -> str | int:
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _vector(data, length: int | None, where: str) -> list[Fraction]:
    if not isinstance(data, list):
        raise ProblemError(E_SCHEMA, where, "expected a list")
    if length is not None and len(data) != length:
        raise ProblemError(E_DIMENSION, where, f"expected {length} entries, got {len(data)}")
    return [_rational(x, f"{where}[{i}]") for i, x in enumerate(data)]


def _matrix(data, n: int, where: str) -> list[list[Fraction]]:
    if not isinstance(data, list):
        raise ProblemError(E_SCHEMA, where, "expected a matrix (list of rows)")
    if len(data) != n:
        raise ProblemError(E_DIMENSION, where, f"expected {n} rows, got {len(data)}")
    return [_vector(r, n, f"{where}[{i}]") for i, r in enumerate(data)]


def _canon_matrix(m) -> list[list]:
    return [[_canon(x) for x in r] for r in m]


# --------------------------------------------------------------- spec type

@dataclass
class ProblemSpec:
    n: int
    mu: int
    L: dict
    K: dict
    options: dict = field(default_factory=lambda: dict(DEFAULT_OPTIONS))
    name: str | None = None

    def to_dict(self) -> dict:
        out = {"n": self.n, "mu": self.mu, "L": self.L, "K": self.K, "options": self.options}
        if self.name is not None:
            out = {"name": self.name, **out}
        return out

    def structure_algebra(self) -> MatrixSubspace:
        return build_L(self.n, self.L)

    def ideal(self) -> GradedIdeal:
        return build_K(self.n, self.mu, self.K)[0]

    def perp_basis(self) -> list | None:
        """The K⊥ basis exactly as given (when the problem states K through K⊥)."""
        return build_K(self.n, self.mu, self.K)[1]


def serialize(spec: ProblemSpec) -> str:
    return json.dumps(spec.to_dict(), sort_keys=True)


def parse(text: str) -> ProblemSpec:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemError(E_SCHEMA, "<file>", f"not valid JSON: {exc.msg}") from None
    return from_dict(data)


def from_dict(data: Any) -> ProblemSpec:
    if not isinstance(data, dict):
        raise ProblemError(E_SCHEMA, "<root>", "expected a JSON object")
    if "preset" in data:
        unknown = set(data) - {"preset", "params", "options", "name"}
        if unknown:
            raise ProblemError(E_SCHEMA, sorted(unknown)[0], "unexpected key next to a preset")
        base = preset(data["preset"], **(data.get("params") or {}))
        raw = base.to_dict()
        if "options" in data:
            raw["options"] = {**raw["options"], **data["options"]}
        if "name" in data:
            raw["name"] = data["name"]
        return from_dict(raw)

    unknown = set(data) - {"name", "n", "mu", "L", "K", "options"}
    if unknown:
        raise ProblemError(E_SCHEMA, sorted(unknown)[0], "unknown key")
    for key in ("n", "mu", "L", "K"):
        if key not in data:
            raise ProblemError(E_SCHEMA, key, "missing required field")
    n, mu = data["n"], data["mu"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 2:
        raise ProblemError(E_SCHEMA, "n", "must be an integer >= 2")
    if not isinstance(mu, int) or isinstance(mu, bool) or mu < 1:
        raise ProblemError(E_SCHEMA, "mu", "must be an integer >= 1")
    name = data.get("name")
    if name is not None and not isinstance(name, str):
        raise ProblemError(E_SCHEMA, "name", "must be a string")
    lam = _canon_L(n, data["L"])
    k = _canon_K(n, mu, data["K"])
    opts = _canon_options(data.get("options", {}))
    spec = ProblemSpec(n, mu, lam, k, opts, name)
    # validate by building once
    build_L(n, lam)
    build_K(n, mu, k)
    return spec


def _canon_options(raw) -> dict:
    if not isinstance(raw, dict):
        raise ProblemError(E_SCHEMA, "options", "expected an object")
    unknown = set(raw) - set(DEFAULT_OPTIONS)
    if unknown:
        raise ProblemError(E_SCHEMA, f"options.{sorted(unknown)[0]}", "unknown option")
    opts = {**DEFAULT_OPTIONS, **raw}
    if not isinstance(opts["pmax"], int) or isinstance(opts["pmax"], bool) or opts["pmax"] < 1:
        raise ProblemError(E_SCHEMA, "options.pmax", "must be a positive integer")
    if not isinstance(opts["run_oracle"], bool):
        raise ProblemError(E_SCHEMA, "options.run_oracle", "must be true or false")
    if opts["format"] not in ("text", "machine"):
        raise ProblemError(E_SCHEMA, "options.format", "must be 'text' or 'machine'")
    return opts


# --------------------------------------------------------- structure algebra

def _canon_L(n: int, raw) -> dict:
    if isinstance(raw, str):
        raw = {"preset": raw}
    if not isinstance(raw, dict):
        raise ProblemError(E_SCHEMA, "L", "expected an object or preset name")
    if "basis" in raw:
        if set(raw) != {"basis"}:
            raise ProblemError(E_SCHEMA, "L", "an explicit basis takes no other keys")
        if not isinstance(raw["basis"], list):
            raise ProblemError(E_SCHEMA, "L.basis", "expected a list of matrices")
        mats = [_matrix(m, n, f"L.basis[{i}]") for i, m in enumerate(raw["basis"])]
        return {"basis": [_canon_matrix(m) for m in mats]}
    p = raw.get("preset")
    if p not in L_PRESETS:
        raise ProblemError(E_PRESET, "L.preset", f"unknown structure algebra {p!r}")
    if p in ("o_form", "co_form"):
        if set(raw) != {"preset", "form"}:
            raise ProblemError(E_SCHEMA, "L", f"{p} needs exactly the key 'form'")
        return {"preset": p, "form": _canon_matrix(_matrix(raw["form"], n, "L.form"))}
    if p in ("o_family", "co_family"):
        if set(raw) != {"preset", "forms"} or not isinstance(raw["forms"], list) or not raw["forms"]:
            raise ProblemError(E_SCHEMA, "L", f"{p} needs a nonempty list 'forms'")
        return {"preset": p, "forms": [_canon_matrix(_matrix(m, n, f"L.forms[{i}]"))
                                       for i, m in enumerate(raw["forms"])]}
    if set(raw) != {"preset"}:
        raise ProblemError(E_SCHEMA, "L", f"{p} takes no parameters")
    if p in ("sp", "csp") and n % 2:
        raise ProblemError(E_DIMENSION, "L.preset", f"{p} needs an even n")
    return {"preset": p}


def build_L(n: int, lam: dict) -> MatrixSubspace:
    if "basis" in lam:
        mats = [_matrix(m, n, f"L.basis[{i}]") for i, m in enumerate(lam["basis"])]
        space = MatrixSubspace.from_matrices(n, mats)
        if space.dim != len(mats):
            raise ProblemError(E_DEPENDENT, "L.basis", "basis matrices are linearly dependent")
        return space
    p = lam["preset"]
    simple = {"gl": algebras.gl, "sl": algebras.sl, "so": algebras.so, "sp": algebras.sp,
              "co": algebras.co, "csp": algebras.csp}
    if p in simple:
        return simple[p](n)
    if p == "o_form":
        return algebras.o_form(n, _matrix(lam["form"], n, "L.form"))
    if p == "co_form":
        return algebras.co_form(n, _matrix(lam["form"], n, "L.form"))
    forms = [_matrix(m, n, f"L.forms[{i}]") for i, m in enumerate(lam["forms"])]
    return algebras.o_family(n, forms) if p == "o_family" else algebras.co_family(n, forms)


def subalgebra_warnings(n: int, lam: dict) -> list[str]:
    space = build_L(n, lam)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        algebras.warn_if_not_subalgebra(space)
    return [str(w.message) for w in caught]


# ------------------------------------------------------------------ ideal

def _canon_K(n: int, mu: int, raw) -> dict:
    if isinstance(raw, str):
        raw = {"preset": raw}
    if not isinstance(raw, dict):
        raise ProblemError(E_SCHEMA, "K", "expected an object or preset name")
    npairs = n * (n - 1) // 2
    if "preset" in raw:
        p = raw["preset"]
        if p not in K_PRESETS:
            raise ProblemError(E_PRESET, "K.preset", f"unknown ideal preset {p!r}")
        if set(raw) != {"preset"}:
            raise ProblemError(E_SCHEMA, "K", "ideal presets take no parameters")
        if mu == 1 and p == "heisenberg":
            raise ProblemError(E_KIND_ONE, "K.preset", "kind one means K is all of f_[2]; use 'free' or 'full-wedge'")
        if mu >= 2 and p == "full-wedge":
            raise ProblemError(E_IMPROPER, "K.preset", "K_-2 = Λ²V is only allowed for kind one")
        if p == "heisenberg" and n % 2:
            raise ProblemError(E_DIMENSION, "K.preset", "the Heisenberg ideal needs an even n")
        return {"preset": p}
    if "slices" in raw:
        if set(raw) != {"slices"}:
            raise ProblemError(E_SCHEMA, "K", "'slices' takes no other keys")
        if mu == 1 and any(raw["slices"].values()):
            raise ProblemError(E_KIND_ONE, "K.slices", "kind one means K is all of f_[2]")
        slices = {}
        for key, rows in raw["slices"].items():
            try:
                p = int(key)
            except ValueError:
                raise ProblemError(E_SCHEMA, f"K.slices.{key}", "degree keys must be integers") from None
            if not 2 <= p <= mu:
                raise ProblemError(E_DIMENSION, f"K.slices.{key}", f"degree outside 2..{mu}")
            dim = len(lyndon_basis(n, p))
            if not isinstance(rows, list):
                raise ProblemError(E_SCHEMA, f"K.slices.{key}", "expected a list of rows")
            slices[str(p)] = [[_canon(x) for x in _vector(r, dim, f"K.slices.{key}[{i}]")]
                              for i, r in enumerate(rows)]
        return {"slices": dict(sorted(slices.items()))}
    allowed = {"degree2", "degree2_matrices", "given_as_perp", "higher"}
    unknown = set(raw) - allowed
    if unknown:
        raise ProblemError(E_SCHEMA, f"K.{sorted(unknown)[0]}", "unknown key")
    perp = raw.get("given_as_perp", False)
    if not isinstance(perp, bool):
        raise ProblemError(E_SCHEMA, "K.given_as_perp", "must be true or false")
    deg2 = [[_canon(x) for x in _vector(r, npairs, f"K.degree2[{i}]")]
            for i, r in enumerate(raw.get("degree2", []))]
    mats = []
    for i, m in enumerate(raw.get("degree2_matrices", [])):
        mm = _matrix(m, n, f"K.degree2_matrices[{i}]")
        if any(mm[a][b] != -mm[b][a] for a in range(n) for b in range(n)):
            raise ProblemError(E_SCHEMA, f"K.degree2_matrices[{i}]", "matrix is not antisymmetric")
        mats.append(_canon_matrix(mm))
    higher = []
    for i, h in enumerate(raw.get("higher", [])):
        where = f"K.higher[{i}]"
        if not isinstance(h, dict) or set(h) != {"degree", "coords"}:
            raise ProblemError(E_SCHEMA, where, "expected {'degree': p, 'coords': [...]}")
        p = h["degree"]
        if not isinstance(p, int) or not 3 <= p <= mu:
            raise ProblemError(E_DIMENSION, f"{where}.degree", f"degree must lie in 3..{mu}")
        coords = _vector(h["coords"], len(lyndon_basis(n, p)), f"{where}.coords")
        higher.append({"degree": p, "coords": [_canon(x) for x in coords]})
    if mu == 1 and (deg2 or mats or higher or perp):
        raise ProblemError(E_KIND_ONE, "K", "kind one means K is all of f_[2]; give no generators")
    out: dict = {"given_as_perp": perp}
    if deg2:
        out["degree2"] = deg2
    if mats:
        out["degree2_matrices"] = mats
    if higher:
        out["higher"] = higher
    return out


def build_K(n: int, mu: int, k: dict) -> tuple[GradedIdeal, list | None]:
    """The ideal, plus the K⊥ basis when it was given directly."""
    if mu == 1:
        return GradedIdeal(n, 1, {}), None
    if "preset" in k:
        if k["preset"] == "free":
            return ideal_close(n, mu, []), None
        om = algebras.symplectic_form(n)
        gens = algebras.ideal_from_perp(n, [om])
        return _close(n, mu, [(2, g) for g in gens], "K.preset"), [om]
    if "slices" in k:
        slices = {int(p): [[_rational(x, "K.slices") for x in r] for r in rows] for p, rows in k["slices"].items()}
        ideal = GradedIdeal(n, mu, slices)
        try:
            check_ideal(ideal)
        except IdealError as exc:
            code = E_IMPROPER if "proper" in str(exc) else E_INVALID_IDEAL
            raise ProblemError(code, "K.slices", str(exc)) from None
        return ideal, None
    vecs = [[_rational(x, "K.degree2") for x in r] for r in k.get("degree2", [])]
    mats = [_matrix(m, n, "K.degree2_matrices") for m in k.get("degree2_matrices", [])]
    perp_basis = None
    if k.get("given_as_perp"):
        perp = mats + [algebras.rho(v, n) for v in vecs]
        if not perp:
            raise ProblemError(E_IMPROPER, "K", "an empty K⊥ makes K_-2 all of Λ²V")
        space = MatrixSubspace.from_matrices(n, perp)
        if space.dim != len(perp):
            raise ProblemError(E_DEPENDENT, "K", "K⊥ matrices are linearly dependent")
        gens2 = algebras.ideal_from_perp(n, perp)
        perp_basis = perp
    else:
        gens2 = vecs + [algebras.rho_inv(m) for m in mats]
    gens = [(2, g) for g in gens2]
    gens += [(h["degree"], [_rational(x, "K.higher") for x in h["coords"]]) for h in k.get("higher", [])]
    ideal = _close(n, mu, gens, "K")
    if perp_basis is not None and ideal.dim(2) != len(gens2):
        # higher generators cannot change degree two, but closure from degree 2 can
        perp_basis = None
    return ideal, perp_basis


def _close(n: int, mu: int, gens, where: str) -> GradedIdeal:
    ideal = ideal_close(n, mu, gens)
    if ideal.dim(2) >= ideal.ambient_dim(2):
        raise ProblemError(E_IMPROPER, where, "K_-2 is all of Λ²V; the quotient would have kind one")
    return ideal


# ----------------------------------------------------------------- presets

def _frac_matrix(rows) -> list[list[Fraction]]:
    return [[Fraction(x) for x in r] for r in rows]


def _block_forms(p: int, q: int) -> list[list[list[int]]]:
    """The forms [[0, Bᵀ], [B, 0]] for B running over the unit p x q matrices."""
    n = p + q
    forms = []
    for a in range(p):
        for b in range(q):
            m = [[0] * n for _ in range(n)]
            m[q + a][b] = 1
            m[b][q + a] = 1
            forms.append(m)
    return forms


def _j_blocks() -> list[list[list[int]]]:
    j = [[0, 1], [-1, 0]]
    z = [[0, 0], [0, 0]]

    def blocks(a, b, c, d):
        return [a[0] + b[0], a[1] + b[1], c[0] + d[0], c[1] + d[1]]

    return [blocks(j, z, z, z), blocks(z, z, z, j), blocks(z, j, j, z)]


_COMPLEX_WITNESS_PERP = [
    [[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]],
    [[0, 0, 0, 1], [0, 0, -1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]],
    [[0, 1, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]],
]


def conformal_example_forms(n: int, degenerate: bool) -> tuple[list[list[int]], list[list[int]]]:
    """(symmetric part, antisymmetric part) of the bilinear form in the conformal example."""
    sym = [[0] * n for _ in range(n)]
    anti = [[0] * n for _ in range(n)]
    if degenerate:
        if n != 4:
            raise ProblemError(E_DIMENSION, "params.n", "the degenerate variant is defined for n = 4")
        sym[0][0] = sym[1][1] = 1
        anti[0][3], anti[3][0] = 1, -1
        anti[1][2], anti[2][1] = 1, -1
    else:
        for i in range(n):
            sym[i][i] = 1
        for i in range(0, n - 1, 2):
            anti[i][i + 1], anti[i + 1][i] = 1, -1
    return sym, anti


def _spec(name, n, mu, lam, k) -> ProblemSpec:
    return ProblemSpec(n, mu, lam, k, dict(DEFAULT_OPTIONS), name)


def preset(name: str, **params) -> ProblemSpec:
    """Built-in problems, one per worked example, by name."""
    try:
        builder = PRESETS[name]
    except KeyError:
        raise ProblemError(E_PRESET, "preset", f"unknown preset {name!r}; known: {', '.join(PRESETS)}") from None
    try:
        raw = builder(**params)
    except TypeError as exc:
        raise ProblemError(E_SCHEMA, "params", str(exc)) from None
    return from_dict(raw.to_dict())


def _conformal_plane():
    return _spec("ex3.6.1", 2, 1, {"preset": "co"}, {"preset": "free"})


def _conformal_space(n: int = 3):
    return _spec("ex3.6.2", n, 1, {"preset": "co"}, {"preset": "free"})


def _orthogonal_space(n: int = 3):
    return _spec("ex3.3", n, 1, {"preset": "so"}, {"preset": "free"})


def _block_conformal(p: int = 1, q: int = 2, orthogonal: bool = False):
    n = p + q
    kind = "o_family" if orthogonal else "co_family"
    return _spec("ex3.7", n, 1, {"preset": kind, "forms": _block_forms(p, q)}, {"preset": "free"})


def _symplectic_space(k: int = 2):
    return _spec("ex3.8", 2 * k, 1, {"preset": "sp"}, {"preset": "free"})


def _j_block_ideal():
    return _spec("ex4.8", 4, 2, {"preset": "gl"}, {"given_as_perp": True, "degree2_matrices": _j_blocks()})


def _complex_witness_ideal():
    return _spec("ex4.9", 4, 2, {"preset": "gl"}, {"given_as_perp": True, "degree2_matrices": _COMPLEX_WITNESS_PERP})


def _heisenberg(n: int = 2, L: str = "gl"):
    return _spec("heisenberg", n, 2, {"preset": L}, {"preset": "heisenberg"})


def _g2(L: str = "gl"):
    return _spec("g2", 2, 3, {"preset": L}, {"preset": "free"})


def _conformal_contact(n: int = 4, degenerate: bool = True, structure: str = "form"):
    """Conformal algebra of a bilinear form b = b_s + b_a, with [v, w] = b_a(v, w).

    ``structure`` selects Λ: "form" uses co(b), "symmetric" uses co(b_s).
    """
    sym, anti = conformal_example_forms(n, degenerate)
    if structure == "form":
        form = [[s + a for s, a in zip(r1, r2)] for r1, r2 in zip(sym, anti)]
    elif structure == "symmetric":
        form = sym
    else:
        raise ProblemError(E_SCHEMA, "params.structure", "expected 'form' or 'symmetric'")
    return _spec("ex6.1", n, 2, {"preset": "co_form", "form": form},
                 {"given_as_perp": True, "degree2_matrices": [anti]})


PRESETS = {
    "ex3.3": _orthogonal_space,
    "ex3.6.1": _conformal_plane,
    "ex3.6.2": _conformal_space,
    "ex3.7": _block_conformal,
    "ex3.8": _symplectic_space,
    "ex4.8": _j_block_ideal,
    "ex4.9": _complex_witness_ideal,
    "heisenberg": _heisenberg,
    "g2": _g2,
    "ex6.1": _conformal_contact,
}
