"""Structure-constant algebras, matrix Lie algebras over them, and pro-algebra windows."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Sequence

from .exact_linear import SparseMat, Subspace, as_rat, vec_iadd
from .reports import Check


class AlgebraFormatError(ValueError):
    pass


class WindowError(IndexError):
    pass


# ---------------------------------------------------------------------------
# structure-constant algebras


class StructAlgebra:
    """Finite-dimensional associative algebra, not necessarily unital.

    ``mult[(i, j)]`` is the sparse vector of ``e_i · e_j``.
    """

    def __init__(self, dim: int, basis_names: Sequence[str] | None = None,
                 mult: Mapping[tuple[int, int], Mapping[int, object]] | None = None, name: str = ""):
        self.dim = dim
        self.basis_names = list(basis_names) if basis_names is not None else [f"a{i}" for i in range(dim)]
        if len(self.basis_names) != dim:
            raise AlgebraFormatError("basis name count does not match dim")
        self.name = name
        self.mult: dict[tuple[int, int], dict[int, Fraction]] = {}
        for (i, j), v in (mult or {}).items():
            if not (0 <= i < dim and 0 <= j < dim):
                raise AlgebraFormatError(f"product index ({i},{j}) out of range")
            clean = {}
            for s, c in v.items():
                if not 0 <= s < dim:
                    raise AlgebraFormatError(f"structure constant target {s} out of range")
                c = as_rat(c)
                if c:
                    clean[s] = c
            if clean:
                self.mult[(i, j)] = clean

    def basis_product(self, i: int, j: int) -> dict[int, Fraction]:
        return self.mult.get((i, j), {})

    def product(self, u: Mapping, v: Mapping) -> dict:
        out: dict = {}
        for i, x in u.items():
            for j, y in v.items():
                p = self.mult.get((i, j))
                if p:
                    vec_iadd(out, p, x * y)
        return out

    @property
    def is_zero_multiplication(self) -> bool:
        return not self.mult

    def with_zero_multiplication(self) -> "StructAlgebra":
        return StructAlgebra(self.dim, self.basis_names, {}, name=f"{self.name}_0")

    def dual_space(self) -> "StructAlgebra":
        """The dual vector space with the dual basis, as a zero-multiplication algebra."""
        return StructAlgebra(self.dim, [f"{b}*" for b in self.basis_names], {}, name=f"{self.name}^v")

    def __repr__(self) -> str:
        return f"StructAlgebra({self.name or '?'}, dim={self.dim})"

    # serialisation ---------------------------------------------------------
    def to_json(self) -> dict:
        mult = []
        for (i, j), v in sorted(self.mult.items()):
            for s, c in sorted(v.items()):
                mult.append([i, j, s, _frac_str(c)])
        return {"dim": self.dim, "basis": list(self.basis_names), "mult": mult}

    @classmethod
    def from_json(cls, data: Mapping, name: str = "") -> "StructAlgebra":
        try:
            dim = int(data["dim"])
            basis = list(data.get("basis") or [f"a{i}" for i in range(dim)])
            mult: dict = {}
            for k, entry in enumerate(data.get("mult", [])):
                if len(entry) != 4:
                    raise AlgebraFormatError(f"mult[{k}]: expected [i, j, s, \"p/q\"]")
                i, j, s, c = entry
                mult.setdefault((int(i), int(j)), {})
                mult[(int(i), int(j))][int(s)] = mult[(int(i), int(j))].get(int(s), 0) + _parse_frac(c, f"mult[{k}]")
        except (KeyError, TypeError, ValueError) as e:
            if isinstance(e, AlgebraFormatError):
                raise
            raise AlgebraFormatError(f"malformed algebra JSON: {e}") from e
        return cls(dim, basis, mult, name=name)


def _frac_str(c: Fraction) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _parse_frac(c, where: str) -> Fraction:
    if not isinstance(c, str):
        raise AlgebraFormatError(f"{where}: coefficient must be a fraction string, got {c!r}")
    try:
        return Fraction(c)
    except (ValueError, ZeroDivisionError) as e:
        raise AlgebraFormatError(f"{where}: bad fraction {c!r}") from e


def check_associativity(a: StructAlgebra) -> Check:
    """Exact check of ``(e_i e_j) e_k = e_i (e_j e_k)`` on every basis triple."""
    for i in range(a.dim):
        for j in range(a.dim):
            ij = a.basis_product(i, j)
            for k in range(a.dim):
                lhs = a.product(ij, {k: 1})
                rhs = a.product({i: 1}, a.basis_product(j, k))
                if lhs != rhs:
                    return Check("associativity", False, witness={"triple": [i, j, k], "lhs": lhs, "rhs": rhs},
                                 data={"dim": a.dim})
    return Check("associativity", True, data={"dim": a.dim, "triples": a.dim ** 3})


def is_homomorphism(sigma: SparseMat, src: StructAlgebra, tgt: StructAlgebra) -> Check:
    if sigma.shape != (tgt.dim, src.dim):
        return Check("homomorphism", False, witness={"shape": sigma.shape})
    for i in range(src.dim):
        for j in range(src.dim):
            lhs = sigma.apply(src.basis_product(i, j))
            rhs = tgt.product(sigma.column(i), sigma.column(j))
            if lhs != rhs:
                return Check("homomorphism", False, witness={"pair": [i, j], "lhs": lhs, "rhs": rhs})
    return Check("homomorphism", True)


# ---------------------------------------------------------------------------
# named corpus


def _alg(dim, names, products, name):
    return StructAlgebra(dim, names, {(i, j): {s: c} for (i, j, s, c) in products}, name=name)


def corpus() -> dict[str, StructAlgebra]:
    """The fixed desk-scale test algebras."""
    return {
        "k": _alg(1, ["1"], [(0, 0, 0, 1)], "k"),
        # u u = u, u v = v, v u = 0, v v = 0 (noncommutative, non-unital)
        "uv": _alg(2, ["u", "v"], [(0, 0, 0, 1), (0, 1, 1, 1)], "uv"),
        "zero1": _alg(1, ["x"], [], "zero1"),
        "zero2": _alg(2, ["x", "y"], [], "zero2"),
        # maximal ideal of the dual numbers: t with t^2 = 0
        "dual_ideal": _alg(1, ["t"], [], "dual_ideal"),
        # t t = t2, all other products zero; A^3 = 0
        "nil": _alg(2, ["t", "t2"], [(0, 0, 1, 1)], "nil"),
    }


def get_algebra(name: str) -> StructAlgebra:
    c = corpus()
    if name not in c:
        raise KeyError(f"unknown corpus algebra {name!r}; known: {sorted(c)}")
    return c[name]


# ---------------------------------------------------------------------------
# matrix Lie algebras


class MatrixLieAlgebra:
    """``gl_n A`` with basis ``e_{ij} ⊗ a_s`` indexed by ``(i*n + j)*dim A + s``."""

    def __init__(self, coeff: StructAlgebra, n: int):
        if n < 1:
            raise ValueError("n must be positive")
        self.n = n
        self.coeff = coeff
        self.d = coeff.dim
        self.dim = n * n * coeff.dim

    def index(self, i: int, j: int, s: int) -> int:
        return (i * self.n + j) * self.d + s

    def unpack(self, x: int) -> tuple[int, int, int]:
        ij, s = divmod(x, self.d)
        i, j = divmod(ij, self.n)
        return i, j, s

    def label(self, x: int) -> str:
        i, j, s = self.unpack(x)
        return f"e{i + 1}{j + 1}⊗{self.coeff.basis_names[s]}"

    def weight(self, x: int) -> tuple[int, ...]:
        i, j, _ = self.unpack(x)
        w = [0] * self.n
        w[i] += 1
        w[j] -= 1
        return tuple(w)

    @cached_property
    def bracket_table(self) -> dict[tuple[int, int], dict[int, Fraction]]:
        """``[e_ij⊗a, e_kl⊗b] = δ_jk e_il⊗ab − δ_li e_kj⊗ba`` on basis pairs."""
        tab = {}
        for x in range(self.dim):
            for y in range(self.dim):
                v = self._bracket_basis(x, y)
                if v:
                    tab[(x, y)] = v
        return tab

    def _bracket_basis(self, x: int, y: int) -> dict:
        i, j, s = self.unpack(x)
        k, l, t = self.unpack(y)
        out: dict = {}
        if j == k:
            for r, c in self.coeff.basis_product(s, t).items():
                vec_iadd(out, {self.index(i, l, r): c})
        if l == i:
            for r, c in self.coeff.basis_product(t, s).items():
                vec_iadd(out, {self.index(k, j, r): -c})
        return out

    def bracket(self, u: Mapping, v: Mapping) -> dict:
        out: dict = {}
        tab = self.bracket_table
        for x, a in u.items():
            for y, b in v.items():
                w = tab.get((x, y))
                if w:
                    vec_iadd(out, w, a * b)
        return out

    def include(self, x: int, n_big: int) -> int:
        """Index of a basis element under ``g ↦ [[g, 0], [0, 0]]`` into ``gl_{n_big}``."""
        i, j, s = self.unpack(x)
        return (i * n_big + j) * self.d + s

    def check_lie_identities(self) -> Check:
        for x in range(self.dim):
            for y in range(self.dim):
                if self.bracket({x: 1}, {y: 1}) != {k: -c for k, c in self.bracket({y: 1}, {x: 1}).items()}:
                    return Check("lie identities", False, witness={"antisymmetry": [x, y]})
        for x in range(self.dim):
            for y in range(self.dim):
                for z in range(self.dim):
                    tot: dict = {}
                    vec_iadd(tot, self.bracket({x: 1}, self.bracket({y: 1}, {z: 1})))
                    vec_iadd(tot, self.bracket({y: 1}, self.bracket({z: 1}, {x: 1})))
                    vec_iadd(tot, self.bracket({z: 1}, self.bracket({x: 1}, {y: 1})))
                    if tot:
                        return Check("lie identities", False, witness={"jacobi": [x, y, z]})
        return Check("lie identities", True, data={"dim": self.dim})


def matrix_lie_algebra(a: StructAlgebra, n: int) -> MatrixLieAlgebra:
    return MatrixLieAlgebra(a, n)


# ---------------------------------------------------------------------------
# pro-algebras


ZERO = "ZERO"
NOT_DECIDED = "NOT-DECIDED-IN-WINDOW"


@dataclass
class ProZeroDecision:
    verdict: str
    m_of_n: dict = field(default_factory=dict)   # n -> first m with vanishing composite
    undecided: list = field(default_factory=list)

    @property
    def is_zero(self) -> bool:
        return self.verdict == ZERO

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "m_of_n": {str(k): v for k, v in self.m_of_n.items()}, "undecided": self.undecided}


@dataclass
class ProAlgebra:
    """Finite window ``A_1 ← A_2 ← … ← A_N``; ``maps[k]`` is ``σ_{k+2}: A_{k+2} → A_{k+1}``."""

    levels: list
    maps: list
    name: str = ""

    def __post_init__(self):
        if len(self.maps) != max(len(self.levels) - 1, 0):
            raise AlgebraFormatError(f"a window of {len(self.levels)} levels needs {len(self.levels) - 1} maps")
        for k, m in enumerate(self.maps):
            src, tgt = self.levels[k + 1], self.levels[k]
            if m.shape != (tgt.dim, src.dim):
                raise AlgebraFormatError(f"maps[{k}] has shape {m.shape}, expected {(tgt.dim, src.dim)}")

    @property
    def window(self) -> int:
        return len(self.levels)

    def level(self, n: int) -> StructAlgebra:
        if not 1 <= n <= self.window:
            raise WindowError(f"level {n} outside window 1..{self.window}")
        return self.levels[n - 1]

    def sigma(self, j: int) -> SparseMat:
        """``σ_j: A_j → A_{j-1}`` for ``2 ≤ j ≤ window``."""
        return self.maps[j - 2]

    def check_homomorphisms(self) -> Check:
        for j in range(2, self.window + 1):
            chk = is_homomorphism(self.sigma(j), self.level(j), self.level(j - 1))
            if not chk.ok:
                return Check("pro homomorphisms", False, witness={"sigma": j, **chk.witness})
        return Check("pro homomorphisms", True, data={"window": self.window})

    def to_json(self) -> dict:
        return {
            "window": self.window,
            "levels": [a.to_json() for a in self.levels],
            "maps": [[[i, j, _frac_str(x)] for (i, j), x in sorted(m.entries().items())] for m in self.maps],
        }

    @classmethod
    def from_json(cls, data: Mapping, name: str = "") -> "ProAlgebra":
        try:
            levels = [StructAlgebra.from_json(d, name=f"{name}_{k + 1}") for k, d in enumerate(data["levels"])]
            if int(data.get("window", len(levels))) != len(levels):
                raise AlgebraFormatError("window does not match the number of levels")
            maps = []
            for k, entries in enumerate(data.get("maps", [])):
                if k + 1 >= len(levels):
                    raise AlgebraFormatError("more maps than levels allow")
                ent = {}
                for e in entries:
                    i, j, c = e
                    ent[(int(i), int(j))] = _parse_frac(c, f"maps[{k}]")
                maps.append(SparseMat.from_entries(levels[k].dim, levels[k + 1].dim, ent))
        except (KeyError, TypeError, ValueError) as e:
            if isinstance(e, AlgebraFormatError):
                raise
            raise AlgebraFormatError(f"malformed pro-algebra JSON: {e}") from e
        return cls(levels, maps, name=name)


def pro_composite(p: ProAlgebra, n: int, m: int) -> SparseMat:
    """``σ_{n+1} ∘ … ∘ σ_m : A_m → A_n``; the identity when ``n == m``."""
    if not (1 <= n <= m <= p.window):
        raise WindowError(f"need 1 <= n <= m <= {p.window}, got n={n}, m={m}")
    out = SparseMat.identity(p.level(m).dim)
    for j in range(m, n, -1):
        out = p.sigma(j) @ out
    return out


def is_pro_zero(dims: Sequence[int], maps: Sequence[SparseMat], window: int | None = None) -> ProZeroDecision:
    """Decide, within the window, whether an inverse system of vector spaces is pro-zero.

    ``dims[k]`` is the dimension of level ``k+1`` and ``maps[k]`` the map from
    level ``k+2`` to level ``k+1``.  Never claims a system is globally nonzero.
    """
    window = len(dims) if window is None else min(window, len(dims))
    m_of_n, undecided = {}, []
    for n in range(1, window + 1):
        comp = SparseMat.identity(dims[n - 1])
        found = None
        for m in range(n, window + 1):
            if m > n:
                comp = comp @ maps[m - 2]
            if comp.is_zero():
                found = m
                break
        if found is None:
            undecided.append(n)
        else:
            m_of_n[n] = found
    return ProZeroDecision(ZERO if not undecided else NOT_DECIDED, m_of_n, undecided)


def constant_pro_algebra(a: StructAlgebra, window: int) -> ProAlgebra:
    return ProAlgebra([a] * window, [SparseMat.identity(a.dim) for _ in range(window - 1)], name=f"const({a.name})")


def powers_pro_algebra(a: StructAlgebra, window: int) -> ProAlgebra:
    """The system ``A ⊇ A^2 ⊇ … ⊇ A^window`` with inclusion maps."""
    subs = [Subspace.full(a.dim)]
    for _ in range(1, window):
        prev = subs[-1]
        prods = [a.product(x, {j: 1}) for x in prev.basis for j in range(a.dim)]
        subs.append(Subspace(a.dim, prods))
    levels = []
    for k, s in enumerate(subs):
        mult = {}
        for i, x in enumerate(s.basis):
            for j, y in enumerate(s.basis):
                xy = a.product(x, y)
                if xy:
                    co = s.coordinates(xy)
                    mult[(i, j)] = {r: c for r, c in enumerate(co) if c}
        names = [_vec_name(x, a) for x in s.basis]
        levels.append(StructAlgebra(s.dim, names, mult, name=f"{a.name}^{k + 1}"))
    maps = []
    for k in range(1, window):
        big, small = subs[k - 1], subs[k]
        cols = []
        for y in small.basis:
            co = big.coordinates(y)
            cols.append({r: c for r, c in enumerate(co) if c})
        maps.append(SparseMat.from_columns(big.dim, cols))
    return ProAlgebra(levels, maps, name=f"powers({a.name})")


def _vec_name(v: Mapping, a: StructAlgebra) -> str:
    parts = []
    for s, c in sorted(v.items()):
        nm = a.basis_names[s]
        parts.append(nm if c == 1 else f"{_frac_str(c)}{nm}")
    return "+".join(parts) or "0"


def load_json(path) -> dict:
    with open(path) as fh:
        return json.load(fh)
