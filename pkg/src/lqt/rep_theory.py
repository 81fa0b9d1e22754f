"""The ``gl_n k``-action on CE complexes, highest weights, and symmetric-group modules.

Specht modules are realised inside the tabloid permutation module: the basis
vector attached to a standard tableau ``t`` is its polytabloid
``e_t = Σ_{c ∈ C_t} sgn(c) {c·t}``, and a tabloid is stored as its row
assignment ``ρ`` (``ρ[i]`` = row of entry ``i+1``, rows 0-based).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import permutations, product
from math import factorial
from typing import Callable, Mapping, Sequence

from .algebras import MatrixLieAlgebra
from .builders import chevalley_eilenberg, word_weight
from .complexes import ChainComplex, koszul_sign, permutation_sign, sorted_wedge
from .exact_linear import (SparseMat, Subspace, inverse, kernel_basis, vec_iadd, vstack)


class DecompositionError(ArithmeticError):
    pass


class SpechtSizeError(ValueError):
    pass


# ---------------------------------------------------------------------------
# partitions and tableaux


@dataclass(frozen=True, order=True)
class Partition:
    parts: tuple = ()

    def __post_init__(self):
        parts = tuple(int(x) for x in self.parts)
        if any(x <= 0 for x in parts) or any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"not a partition: {parts}")
        object.__setattr__(self, "parts", parts)

    @property
    def m(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.parts)) + ")" if self.parts else "∅"

    def conjugate(self) -> "Partition":
        return Partition(tuple(sum(1 for x in self.parts if x > i) for i in range(self.parts[0] if self.parts else 0)))


EMPTY = Partition(())


def partitions(m: int) -> list[Partition]:
    """All partitions of ``m`` in reverse lexicographic order; ``P(0) = [∅]``."""
    out = []

    def rec(rest: int, cap: int, cur: list):
        if rest == 0:
            out.append(Partition(tuple(cur)))
            return
        for x in range(min(rest, cap), 0, -1):
            cur.append(x)
            rec(rest - x, x, cur)
            cur.pop()

    rec(m, m, [])
    return out


@dataclass(frozen=True)
class WeightLabel:
    alpha: Partition
    beta: Partition
    n: int

    def __post_init__(self):
        if self.alpha.m != self.beta.m:
            raise ValueError("α and β must partition the same m")
        if self.alpha.length + self.beta.length > self.n:
            raise ValueError(f"l(α)+l(β) = {self.alpha.length + self.beta.length} exceeds n = {self.n}")

    @property
    def m(self) -> int:
        return self.alpha.m

    @property
    def vector(self) -> tuple[int, ...]:
        a, b = self.alpha.parts, self.beta.parts
        return tuple(a) + (0,) * (self.n - len(a) - len(b)) + tuple(-x for x in reversed(b))

    def __str__(self) -> str:
        return f"[{self.alpha},{self.beta}]_{self.n}"


def weight_labels(n: int, mmax: int) -> list[WeightLabel]:
    """Every ``[α,β]_n`` with ``m ≤ mmax`` and ``l(α)+l(β) ≤ n``."""
    out = []
    for m in range(mmax + 1):
        for a in partitions(m):
            for b in partitions(m):
                if a.length + b.length <= n:
                    out.append(WeightLabel(a, b, n))
    return out


@dataclass(frozen=True)
class Tableau:
    shape: Partition
    rows: tuple

    @property
    def m(self) -> int:
        return self.shape.m

    def is_standard(self) -> bool:
        for r in self.rows:
            if any(a >= b for a, b in zip(r, r[1:])):
                return False
        for r1, r2 in zip(self.rows, self.rows[1:]):
            if any(r1[k] >= r2[k] for k in range(len(r2))):
                return False
        return sorted(x for r in self.rows for x in r) == list(range(1, self.m + 1))

    @property
    def row_of(self) -> tuple[int, ...]:
        """``ρ``: the (0-based) row containing each entry ``1..m``."""
        rho = [0] * self.m
        for r, row in enumerate(self.rows):
            for x in row:
                rho[x - 1] = r
        return tuple(rho)

    def columns(self) -> list[tuple[int, ...]]:
        ncols = len(self.rows[0]) if self.rows else 0
        return [tuple(row[c] for row in self.rows if c < len(row)) for c in range(ncols)]

    def __str__(self) -> str:
        return "/".join("".join(map(str, r)) for r in self.rows) or "∅"


def standard_tableaux(shape: Partition) -> list[Tableau]:
    """All standard tableaux of ``shape``, placing ``1..m`` one box at a time."""
    out = []
    parts = shape.parts
    m = shape.m

    def rec(k: int, rows: list[list[int]]):
        if k > m:
            out.append(Tableau(shape, tuple(tuple(r) for r in rows)))
            return
        for r in range(len(parts)):
            if len(rows[r]) < parts[r] and (r == 0 or len(rows[r - 1]) > len(rows[r])):
                rows[r].append(k)
                rec(k + 1, rows)
                rows[r].pop()

    rec(1, [[] for _ in parts])
    return out


def hook_length_count(shape: Partition) -> int:
    conj = shape.conjugate().parts
    prod = 1
    for i, row in enumerate(shape.parts):
        for j in range(row):
            prod *= (row - j - 1) + (conj[j] - i - 1) + 1
    return factorial(shape.m) // prod


# ---------------------------------------------------------------------------
# Specht modules


def compose(s: Sequence[int], t: Sequence[int]) -> tuple[int, ...]:
    """``(s∘t)(i) = s(t(i))``."""
    return tuple(s[t[i]] for i in range(len(t)))


def invert(s: Sequence[int]) -> tuple[int, ...]:
    out = [0] * len(s)
    for i, x in enumerate(s):
        out[x] = i
    return tuple(out)


def adjacent_transposition(m: int, i: int) -> tuple[int, ...]:
    """``s_i`` swapping ``i`` and ``i+1`` (0-based positions ``i-1, i``)."""
    p = list(range(m))
    p[i - 1], p[i] = p[i], p[i - 1]
    return tuple(p)


class SpechtModule:
    """``V^α`` with basis the polytabloids of standard ``α``-tableaux.

    ``matrix(σ)`` is the left action ``σ·e_t = e_{σt}`` in that basis;
    ``dual_matrix(σ)`` is the contragredient action on the dual basis, which is
    the action under which tabloid coefficients ``v ↦ (⟨v, e_t⟩)_t`` are
    equivariant.
    """

    MAX_M = 6

    def __init__(self, shape: Partition):
        if shape.m > self.MAX_M:
            raise SpechtSizeError(f"Specht modules are limited to m ≤ {self.MAX_M}, got m = {shape.m}")
        self.shape = shape
        self.m = shape.m
        self.basis = standard_tableaux(shape)
        self.dim = len(self.basis)

    @cached_property
    def polytabloids(self) -> list[dict[tuple[int, ...], int]]:
        return [polytabloid(t) for t in self.basis]

    @cached_property
    def _standard_tabloids(self) -> list[tuple[int, ...]]:
        return [t.row_of for t in self.basis]

    @cached_property
    def _kinv(self) -> SparseMat:
        # K[x, s] = coefficient of the standard tabloid {x} in e_s: unitriangular
        k = SparseMat.from_columns(self.dim, [{i: e.get(r, 0) for i, r in enumerate(self._standard_tabloids)} for e in self.polytabloids])
        return inverse(k)

    def coordinates(self, vec: Mapping[tuple[int, ...], object]) -> dict:
        """Coordinates in the polytabloid basis of a vector of ``S^α`` given by tabloids."""
        restricted = {i: vec.get(r, 0) for i, r in enumerate(self._standard_tabloids) if vec.get(r, 0)}
        return self._kinv.apply(restricted)

    @lru_cache(maxsize=None)
    def matrix(self, sigma: tuple[int, ...]) -> SparseMat:
        sinv = invert(sigma)
        cols = []
        for e in self.polytabloids:
            moved = {tuple(rho[sinv[i]] for i in range(self.m)): c for rho, c in e.items()}
            cols.append(self.coordinates(moved))
        return SparseMat.from_columns(self.dim, cols)

    @lru_cache(maxsize=None)
    def dual_matrix(self, sigma: tuple[int, ...]) -> SparseMat:
        return self.matrix(invert(sigma)).T

    def generator_matrices(self) -> list[SparseMat]:
        return [self.matrix(adjacent_transposition(self.m, i)) for i in range(1, self.m)]

    def check_coxeter(self, dual: bool = False) -> bool:
        mat = self.dual_matrix if dual else self.matrix
        gens = [mat(adjacent_transposition(self.m, i)) for i in range(1, self.m)]
        one = SparseMat.identity(self.dim)
        for i, s in enumerate(gens):
            if s @ s != one:
                return False
            if i + 1 < len(gens):
                t = s @ gens[i + 1]
                if t @ t @ t != one:
                    return False
            for j in range(i + 2, len(gens)):
                if s @ gens[j] != gens[j] @ s:
                    return False
        return True


def polytabloid(t: Tableau) -> dict[tuple[int, ...], int]:
    rho = t.row_of
    m = t.m
    cols = t.columns()
    out: dict = {}
    for choice in product(*[list(permutations(c)) for c in cols]):
        c = list(range(m))
        sign = 1
        for col, img in zip(cols, choice):
            for a, b in zip(col, img):
                c[a - 1] = b - 1
            sign *= permutation_sign([col.index(x) for x in img])
        cinv = invert(c)
        tab = tuple(rho[cinv[i]] for i in range(m))
        out[tab] = out.get(tab, 0) + sign
    return {k: v for k, v in out.items() if v}


def specht_module(shape: Partition) -> SpechtModule:
    return SpechtModule(shape)


def all_permutations(m: int) -> list[tuple[int, ...]]:
    return list(permutations(range(m)))


# ---------------------------------------------------------------------------
# Σ_m invariants


def averaging_projector(m: int, dim: int, act: Callable[[tuple[int, ...]], SparseMat]) -> SparseMat:
    """``(1/m!) Σ_σ act(σ)`` as an exact matrix."""
    total = SparseMat(dim, dim)
    perms = all_permutations(m)
    for s in perms:
        total = total + act(s)
    return total.scale(Fraction(1, len(perms)))


class TensorSpechtSpace:
    """``T^m(W) ⊗ V^α ⊗ V^β`` in a fixed degree, with the Koszul/Specht Σ_m action.

    ``words`` lists the allowed ``m``-tuples of ``W``-basis labels, ``degree``
    gives the degree of a ``W`` label.  Basis labels are ``(words, x, y)`` with
    ``x, y`` Specht basis indices.  ``dual=True`` uses the contragredient
    Specht action.
    """

    def __init__(self, m: int, words: Sequence[tuple], degree: Callable, alpha: Partition, beta: Partition,
                 dual: bool = False, prefix: Sequence = ((),)):
        self.m = m
        self.va, self.vb = SpechtModule(alpha), SpechtModule(beta)
        self.dual = dual
        self.degree = degree
        self.labels = [(pre, w, x, y) for pre in prefix for w in words for x in range(self.va.dim) for y in range(self.vb.dim)]
        self.index = {lab: i for i, lab in enumerate(self.labels)}
        self.dim = len(self.labels)

    def act(self, sigma: tuple[int, ...]) -> SparseMat:
        ma = self.va.dual_matrix(sigma) if self.dual else self.va.matrix(sigma)
        mb = self.vb.dual_matrix(sigma) if self.dual else self.vb.matrix(sigma)
        cols = {}
        for j, (pre, w, x, y) in enumerate(self.labels):
            degs = [self.degree(c) for c in w]
            sign = koszul_sign(degs, sigma)
            new = [None] * self.m
            for i, c in enumerate(w):
                new[sigma[i]] = c
            nw = tuple(new)
            col: dict = {}
            for xa, ca in ma.column(x).items():
                for yb, cb in mb.column(y).items():
                    vec_iadd(col, {self.index[(pre, nw, xa, yb)]: sign * ca * cb})
            if col:
                cols[j] = col
        return SparseMat(self.dim, self.dim, cols)

    def projector(self) -> SparseMat:
        return averaging_projector(self.m, self.dim, self.act)


def sigma_invariants(space: TensorSpechtSpace) -> Subspace:
    """Image of the averaging projector: the Σ_m-invariant subspace."""
    e = space.projector()
    return Subspace(space.dim, e.columns())


# ---------------------------------------------------------------------------
# gl_n k acting on C(gl_n A)


class CEModule:
    """``C(gl_n A)`` together with the derivation action of ``gl_n k``."""

    def __init__(self, g: MatrixLieAlgebra, pmax: int, complex_: ChainComplex | None = None):
        self.g = g
        self.n = g.n
        self.pmax = pmax
        self.complex = complex_ or chevalley_eilenberg(g, pmax)
        self._act: dict = {}
        self._decomp: dict = {}

    def basis(self, p: int) -> list:
        return self.complex.basis(p)

    def dim(self, p: int) -> int:
        return self.complex.dim(p)

    def act_word(self, i: int, j: int, word: Sequence[int]) -> dict:
        """``e_ij · (g1∧…∧gp) = Σ_t g1∧…∧[e_ij, g_t]∧…∧gp`` (0-based ``i, j``)."""
        g = self.g
        out: dict = {}
        for t, x in enumerate(word):
            k, l, s = g.unpack(x)
            terms = []
            if j == k:
                terms.append((g.index(i, l, s), 1))
            if l == i:
                terms.append((g.index(k, j, s), -1))
            for z, c in terms:
                new = list(word)
                new[t] = z
                w, sg = sorted_wedge(new)
                if w is not None:
                    vec_iadd(out, {w: c * sg})
        return out

    def action(self, i: int, j: int, p: int) -> SparseMat:
        key = (i, j, p)
        if key not in self._act:
            idx = self.complex.space.index_map(p)
            cols = {}
            for c, w in enumerate(self.basis(p)):
                img = self.act_word(i, j, w)
                if img:
                    cols[c] = {idx[x]: v for x, v in img.items()}
            self._act[key] = SparseMat(self.dim(p), self.dim(p), cols)
        return self._act[key]

    def generators(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.n) for j in range(self.n)]

    # weights -----------------------------------------------------------------
    def weight_space(self, p: int, mu: Sequence[int]) -> Subspace:
        """Simultaneous eigenspace ``{v : e_qq·v = μ_q v}``; ``e_qq`` is diagonal on wedge words."""
        mu = tuple(mu)
        idx = [c for c, w in enumerate(self.basis(p)) if word_weight(self.g, w) == mu]
        return Subspace.coordinate(self.dim(p), idx)

    def _kernel_on(self, s: Subspace, mats: Sequence[SparseMat]) -> Subspace:
        if not s.dim:
            return s
        sm = s.matrix()
        k = kernel_basis(vstack([m @ sm for m in mats]))
        return Subspace(s.ambient_dim, [sm.apply(v) for v in k.basis])

    def raising(self, p: int) -> list[SparseMat]:
        return [self.action(i, i + 1, p) for i in range(self.n - 1)]

    def highest_weight_space(self, p: int, lbl: WeightLabel | Sequence[int]) -> Subspace:
        """``M_μ``: weight-``μ`` vectors killed by the simple raising operators."""
        mu = lbl.vector if isinstance(lbl, WeightLabel) else tuple(lbl)
        w = self.weight_space(p, mu)
        if self.n == 1:
            return w
        return self._kernel_on(w, self.raising(p))

    def module_closure(self, s: Subspace, p: int) -> Subspace:
        """Smallest ``gl_n k``-stable subspace containing ``s`` (breadth-first saturation)."""
        cur = s
        frontier = list(s.basis)
        gens = [self.action(i, j, p) for (i, j) in self.generators() if i != j]
        while frontier:
            new = []
            for m in gens:
                for v in frontier:
                    img = m.apply(v)
                    if img and not cur.contains(img):
                        new.append(img)
            if not new:
                break
            nxt = cur + Subspace(cur.ambient_dim, new)
            if nxt.dim == cur.dim:
                break
            frontier = [v for v in nxt.basis if not cur.contains(v)]
            cur = nxt
        return cur

    def isotypic_decomposition(self, p: int) -> list[tuple[WeightLabel, Subspace]]:
        """``V_{[α,β]_n} = U(gl_n k)·M_{[α,β]_n}`` for every label with ``m ≤ p``.

        Raises :class:`DecompositionError` if the pieces are dependent or do not
        fill ``Λ^p``.
        """
        if p in self._decomp:
            return self._decomp[p]
        out = []
        for lbl in weight_labels(self.n, p):
            m = self.highest_weight_space(p, lbl)
            if m.dim:
                out.append((lbl, self.module_closure(m, p)))
        total = sum(v.dim for _, v in out)
        span = Subspace(self.dim(p), [b for _, v in out for b in v.basis]) if out else Subspace.zero(self.dim(p))
        if total != self.dim(p) or span.dim != total:
            raise DecompositionError(f"degree {p}: isotypic pieces sum to {total} (independent span {span.dim}), expected {self.dim(p)}")
        self._decomp[p] = out
        return out

    def isotype(self, p: int, lbl: WeightLabel) -> Subspace:
        for l2, v in self.isotypic_decomposition(p):
            if l2 == lbl:
                return v
        return Subspace.zero(self.dim(p))
