"""The comparison maps ``φ′ = (θ⊗ε)∘Δ`` and ``ψ′ = μ∘(θ̂⊗ε̂)`` and their duality.

Conventions (see docs/conventions.md):

* A standard tableau ``x`` stands for its polytabloid ``e_x``.  Wherever the
  formulas use the row function ``ρ(x)`` the engine sums over the tabloids of
  ``e_x`` with their signs.  On ``R′(A)`` the Specht factors carry the
  contragredient action ``σ ↦ P(σ⁻¹)ᵀ``; that is the action for which
  tabloid coefficients are equivariant, so ``φ′`` lands in the invariants.
* ``θ = π∘T(θ¹)∘Δ̃`` with ``π`` the sorting projection (no ``1/q!``).
* Pairings: determinant on ``Λ gl_n``, ``L·Σ_rot`` on cyclic words of length
  ``L``, ``(1/q!)``-graded permanent on ``Λ(C^λ[-1])``, the identity on bar
  words and on Specht labels.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product
from math import factorial
from typing import Sequence

from .algebras import MatrixLieAlgebra, StructAlgebra, matrix_lie_algebra
from .builders import bar_complex, canonical_cyclic, ce_boundary_word, chevalley_eilenberg, connes_complex, rotate
from .complexes import (ChainComplex, ChainMap, GradedSpace, canonical_monomial, koszul_sign, permutation_sign,
                        shift_down_complex, sorted_wedge, symmetric_algebra_complex, verify_chain_map)
from .exact_linear import SparseMat, Subspace, image_basis, rank, vec_iadd
from .rep_theory import CEModule, Partition, SpechtModule, WeightLabel, averaging_projector
from .reports import Check


class LabelError(ValueError):
    pass


# ---------------------------------------------------------------------------
# coproducts


@lru_cache(maxsize=None)
def unshuffles(word: tuple, m: int, nonempty: bool = False) -> tuple:
    """Ordered ``m``-fold unshuffles of a wedge word with their signs.

    Returns ``((block_1, …, block_m), sign)`` pairs; blocks keep the relative
    order of ``word``.
    """
    out = []
    p = len(word)
    for f in product(range(m), repeat=p):
        if nonempty and len(set(f)) < m:
            continue
        order = sorted(range(p), key=lambda i: (f[i], i))
        perm = [0] * p
        for new, old in enumerate(order):
            perm[old] = new
        blocks = tuple(tuple(word[i] for i in range(p) if f[i] == b) for b in range(m))
        out.append((blocks, permutation_sign(perm)))
    return tuple(out)


def coproduct_word(word: Sequence[int], m: int = 2) -> dict:
    """``Δ^{(m)}`` of a basis wedge word as ``{(w_1,…,w_m): sign}``."""
    return {blocks: s for blocks, s in unshuffles(tuple(word), m)}


def coproduct(cx: ChainComplex, p: int) -> tuple[SparseMat, list]:
    """``Δ: Λ^p → ⊕_{q+r=p} Λ^q⊗Λ^r`` with target basis ``(w1, w2)``."""
    labels = [(w1, w2) for q in range(p + 1) for w1 in cx.basis(q) for w2 in cx.basis(p - q)]
    idx = {lab: i for i, lab in enumerate(labels)}
    cols = {}
    for j, w in enumerate(cx.basis(p)):
        cols[j] = {idx[b]: s for b, s in coproduct_word(w).items()}
    return SparseMat(len(labels), cx.dim(p), cols), labels


def wedge_product(cx: ChainComplex, p: int, labels: list) -> SparseMat:
    """``μ``: the wedge product ``Λ^q⊗Λ^r → Λ^p`` on the basis ``labels``."""
    tgt = cx.space.index_map(p)
    cols = {}
    for j, (w1, w2) in enumerate(labels):
        w, s = sorted_wedge(tuple(w1) + tuple(w2))
        if w is not None:
            cols[j] = {tgt[w]: s}
    return SparseMat(cx.dim(p), len(labels), cols)


# ---------------------------------------------------------------------------
# θ¹, θ and ε_ij on wedge words


def _closed_chains(g: MatrixLieAlgebra, word: Sequence[int]) -> dict:
    """``Σ_σ sg(σ) Σ_i [(g_σ1)_{i1 i2}⊗…⊗(g_σp)_{ip i1}]`` as tensor words (uncanonicalised)."""
    out: dict = {}
    parts = [g.unpack(x) for x in word]
    p = len(word)
    for sigma in permutations(range(p)):
        ok = all(parts[sigma[t]][1] == parts[sigma[(t + 1) % p]][0] for t in range(p))
        if ok:
            w = tuple(parts[sigma[t]][2] for t in range(p))
            vec_iadd(out, {w: permutation_sign(sigma)})
    return out


class LqtData:
    """Word-level pieces of ``φ′`` and ``ψ′`` for ``gl_n A`` and a label."""

    def __init__(self, a: StructAlgebra, n: int, alpha: Partition, beta: Partition):
        if alpha.m != beta.m:
            raise LabelError("α and β must partition the same m")
        if alpha.length + beta.length > n:
            raise LabelError(f"label needs l(α)+l(β) ≤ n; got {alpha.length}+{beta.length} > {n}")
        self.a = a
        self.n = n
        self.g = matrix_lie_algebra(a, n)
        self.alpha, self.beta = alpha, beta
        self.m = alpha.m
        self.label = WeightLabel(alpha, beta, n)
        self.va, self.vb = SpechtModule(alpha), SpechtModule(beta)
        self._theta1: dict = {}
        self._eps: dict = {}

    # θ¹ ----------------------------------------------------------------------
    def theta1(self, word: tuple) -> dict:
        """``θ¹`` of a wedge word as ``{canonical cyclic word: coeff}``."""
        if word not in self._theta1:
            out: dict = {}
            p = len(word)
            if p:
                for w, c in _closed_chains(self.g, word).items():
                    r, s = canonical_cyclic(w)
                    if r is not None:
                        vec_iadd(out, {r: Fraction(s * c, p)})
            self._theta1[word] = out
        return self._theta1[word]

    # ε_ij ----------------------------------------------------------------------
    def eps_table(self, word: tuple) -> dict:
        """``{(i, j): ε_ij(word)}`` with ``ε_ij(word)`` a dict of bar words (0-based ``i, j``)."""
        if word not in self._eps:
            out: dict = {}
            parts = [self.g.unpack(x) for x in word]
            p = len(word)
            for sigma in permutations(range(p)):
                if all(parts[sigma[t]][1] == parts[sigma[t + 1]][0] for t in range(p - 1)):
                    key = (parts[sigma[0]][0], parts[sigma[-1]][1])
                    w = tuple(parts[sigma[t]][2] for t in range(p))
                    vec_iadd(out.setdefault(key, {}), {w: permutation_sign(sigma)})
            self._eps[word] = {k: v for k, v in out.items() if v}
        return self._eps[word]

    def epsilon_ij(self, word: tuple, i: int, j: int) -> dict:
        return self.eps_table(tuple(word)).get((i, j), {}) if word else {}

    # ε for the label -------------------------------------------------------------
    @property
    def tabloid_pairs(self) -> list:
        """``[(x, y, [(ρ, ς, coeff), …])]`` from the polytabloids of ``x`` and ``y``."""
        if not hasattr(self, "_tab"):
            n = self.n
            tab = []
            for x, ex in enumerate(self.va.polytabloids):
                for y, ey in enumerate(self.vb.polytabloids):
                    terms = []
                    for r, cr in ex.items():
                        for s, cs in ey.items():
                            terms.append((tuple(zip(r, (n - 1 - t for t in s))), cr * cs))
                    tab.append((x, y, terms))
            self._tab = tab
        return self._tab

    def epsilon(self, word: tuple) -> dict:
        """``ε(word) = Σ_{x,y} ε_{ρ(x),ρ(y)}(word)⊗x⊗y`` as ``{(bar words, x, y): coeff}``."""
        out: dict = {}
        if self.m == 0:
            if not word:
                out[((), 0, 0)] = 1
            return out
        if len(word) < self.m:
            return out
        for blocks, sign in unshuffles(tuple(word), self.m, True):
            tables = [self.eps_table(b) for b in blocks]
            for x, y, terms in self.tabloid_pairs:
                for idx, c in terms:
                    acc = [((), sign * c)]
                    for tbl, ij in zip(tables, idx):
                        e = tbl.get(ij)
                        if not e:
                            acc = []
                            break
                        acc = [(ws + (w,), cv * v) for ws, cv in acc for w, v in e.items()]
                    for ws, cv in acc:
                        vec_iadd(out, {(ws, x, y): cv})
        return out


# ---------------------------------------------------------------------------
# R′(A) = Λ(C^λA[-1]) ⊗ T^m(C^bar A) ⊗ V^α ⊗ V^β


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


class LqtTarget:
    """``R′(A)`` in degrees ``0..pmax`` with its boundary and Σ_m action.

    Basis labels are ``(monomial, bar words, x, y)``; a monomial is a sorted
    tuple of canonical cyclic words, whose degree in ``Λ`` is their length.
    """

    def __init__(self, a: StructAlgebra, alpha: Partition, beta: Partition, pmax: int):
        self.a = a
        self.m = alpha.m
        self.pmax = pmax
        self.va, self.vb = SpechtModule(alpha), SpechtModule(beta)
        cyc = connes_complex(a, max(pmax - 1, 0))
        self.lam = symmetric_algebra_complex(shift_down_complex(cyc), pmax)
        self.gens = [lab for d in sorted(shift_down_complex(cyc).space.degrees) if d >= 1
                     for lab in shift_down_complex(cyc).basis(d)]
        self.gen_index = {w: i for i, w in enumerate(self.gens)}
        self.gdeg = self.lam.generator_degrees
        self.bar = bar_complex(a, max(pmax, 1))
        degs = {}
        for p in range(pmax + 1):
            labels = []
            for q in range(p + 1):
                for mon in self.lam.basis(q):
                    for comp in _compositions(p - q, self.m):
                        for words in product(*[self.bar.basis(L) for L in comp]):
                            for x in range(self.va.dim):
                                for y in range(self.vb.dim):
                                    labels.append((mon, tuple(words), x, y))
            degs[p] = labels
        self.space = GradedSpace(degs)
        self.complex = ChainComplex(self.space, self._boundaries(), pmax=pmax, name=f"R′({a.name})")
        self._proj: dict = {}

    def dim(self, p: int) -> int:
        return self.space.dim(p)

    def basis(self, p: int) -> list:
        return self.space.basis(p)

    def monomial(self, cyclic_words: Sequence[tuple]) -> tuple[tuple | None, int]:
        """Sort a product of canonical cyclic words into a ``Λ`` monomial label."""
        idx = [self.gen_index[w] for w in cyclic_words]
        mon, s = canonical_monomial(idx, self.gdeg)
        if mon is None:
            return None, 0
        return tuple(self.gens[i] for i in mon), s

    def _boundaries(self) -> dict:
        bd = {}
        lam = self.lam
        for p in range(1, self.pmax + 1):
            tgt = self.space.index_map(p - 1)
            cols = {}
            for j, (mon, words, x, y) in enumerate(self.space.basis(p)):
                col: dict = {}
                q = sum(len(w) for w in mon)
                if q >= 1 and lam.dim(q - 1):
                    for i, c in lam.d(q).column(lam.space.index(q, mon)).items():
                        vec_iadd(col, {tgt[(lam.basis(q - 1)[i], words, x, y)]: c})
                sign = -1 if q & 1 else 1
                for k, w in enumerate(words):
                    if len(w) >= 2:
                        d = self.bar.d(len(w)).column(self.bar.space.index(len(w), w))
                        for i, c in d.items():
                            new = words[:k] + (self.bar.basis(len(w) - 1)[i],) + words[k + 1:]
                            vec_iadd(col, {tgt[(mon, new, x, y)]: sign * c})
                    if len(w) & 1:
                        sign = -sign
                if col:
                    cols[j] = col
            bd[p] = SparseMat(self.dim(p - 1), self.dim(p), cols)
        return bd

    # Σ_m -------------------------------------------------------------------------
    def act(self, sigma: tuple[int, ...], p: int, dual: bool = True) -> SparseMat:
        """``σ`` on ``R′_p``: Koszul permutation of bar words, Specht action on ``x, y``."""
        ma = self.va.dual_matrix(sigma) if dual else self.va.matrix(sigma)
        mb = self.vb.dual_matrix(sigma) if dual else self.vb.matrix(sigma)
        idx = self.space.index_map(p)
        cols = {}
        for j, (mon, words, x, y) in enumerate(self.space.basis(p)):
            s = koszul_sign([len(w) for w in words], sigma)
            new = [None] * self.m
            for i, w in enumerate(words):
                new[sigma[i]] = w
            nw = tuple(new)
            col: dict = {}
            for xa, ca in ma.column(x).items():
                for yb, cb in mb.column(y).items():
                    vec_iadd(col, {idx[(mon, nw, xa, yb)]: s * ca * cb})
            if col:
                cols[j] = col
        return SparseMat(self.dim(p), self.dim(p), cols)

    def projector(self, p: int, dual: bool = True) -> SparseMat:
        """``(1/m!) Σ_σ σ`` on ``R′_p``."""
        key = (p, dual)
        if key not in self._proj:
            self._proj[key] = averaging_projector(self.m, self.dim(p), lambda s: self.act(s, p, dual))
        return self._proj[key]

    def invariants(self, p: int) -> Subspace:
        """``R(A)_p``: the Σ_m-invariants of ``R′_p``."""
        return image_basis(self.projector(p))

    def invariant_complex_dims(self) -> dict[int, int]:
        return {p: rank(self.projector(p)) for p in range(self.pmax + 1)}

    # pairings --------------------------------------------------------------------
    def pairing_diagonal(self, p: int) -> list[Fraction]:
        """Diagonal of the pairing ``R′_p(A) × R′_p(A^∨) → k`` in matching bases."""
        out = []
        for mon, _, _, _ in self.space.basis(p):
            val = Fraction(1, factorial(len(mon)))
            for w in set(mon):
                val *= factorial(mon.count(w))
            for w in mon:
                val *= len(w) * cyclic_stabilizer(w)
            out.append(val)
        return out


def cyclic_stabilizer(word: Sequence[int]) -> int:
    return sum(1 for j in range(len(word)) if rotate(word, j)[0] == tuple(word))


def cyclic_pairing(word: Sequence[int]) -> int:
    """``⟨[w],[w^∨]⟩ = L·Σ_rot`` for a canonical nonzero cyclic word."""
    return len(word) * cyclic_stabilizer(word)


# ---------------------------------------------------------------------------
# φ′


class Phi:
    """``φ′`` for ``(A, n, α, β)`` in degrees ``0..pmax``."""

    def __init__(self, a: StructAlgebra, n: int, alpha: Partition, beta: Partition, pmax: int,
                 target: LqtTarget | None = None, source: ChainComplex | None = None):
        self.data = LqtData(a, n, alpha, beta)
        self.pmax = pmax
        self.target = target or LqtTarget(a, alpha, beta, pmax)
        self.source = source or chevalley_eilenberg(self.data.g, pmax)
        self._theta: dict = {}
        self._mats: dict = {}

    def theta(self, word: tuple) -> dict:
        """``θ = π∘T(θ¹)∘Δ̃`` of a wedge word as ``{monomial: coeff}``."""
        word = tuple(word)
        if word not in self._theta:
            out: dict = {}
            if not word:
                out[()] = 1
            for q in range(1, len(word) + 1):
                for blocks, sign in unshuffles(word, q, True):
                    acc = [((), Fraction(sign))]
                    for b in blocks:
                        t1 = self.data.theta1(b)
                        acc = [(ws + (w,), c * v) for ws, c in acc for w, v in t1.items()]
                        if not acc:
                            break
                    for ws, c in acc:
                        mon, s = self.target.monomial(ws)
                        if mon is not None:
                            vec_iadd(out, {mon: s * c})
            self._theta[word] = out
        return self._theta[word]

    def apply_word(self, word: tuple) -> dict:
        """``φ′(word)`` as ``{R′ label: coeff}``."""
        out: dict = {}
        for (w1, w2), s in coproduct_word(word).items():
            th = self.theta(w1)
            if not th:
                continue
            ep = self.data.epsilon(w2)
            for mon, c1 in th.items():
                for (words, x, y), c2 in ep.items():
                    vec_iadd(out, {(mon, words, x, y): s * c1 * c2})
        return out

    def matrix(self, p: int) -> SparseMat:
        if p not in self._mats:
            idx = self.target.space.index_map(p)
            cols = {}
            for j, w in enumerate(self.source.basis(p)):
                img = self.apply_word(w)
                if img:
                    cols[j] = {idx[k]: v for k, v in img.items()}
            self._mats[p] = SparseMat(self.target.dim(p), self.source.dim(p), cols)
        return self._mats[p]

    def chain_map(self) -> ChainMap:
        return ChainMap(self.source, self.target.complex, {p: self.matrix(p) for p in range(self.pmax + 1)})

    def check_chain_map(self) -> Check:
        return verify_chain_map(self.chain_map(), range(1, self.pmax + 1))


# ---------------------------------------------------------------------------
# ψ′


def wedge_mul(u: dict, v: dict) -> dict:
    """Product of two elements of ``Λ gl_n A`` given as ``{sorted word: coeff}``."""
    out: dict = {}
    for w1, c1 in u.items():
        for w2, c2 in v.items():
            w, s = sorted_wedge(w1 + w2)
            if w is not None:
                vec_iadd(out, {w: s * c1 * c2})
    return out


class PsiPrime:
    """``ψ′ = μ∘(θ̂⊗ε̂): R′(A) → C(gl_n A)``, a graded map that is not a chain map."""

    def __init__(self, a: StructAlgebra, n: int, alpha: Partition, beta: Partition, pmax: int,
                 target: LqtTarget | None = None, source: ChainComplex | None = None):
        self.data = LqtData(a, n, alpha, beta)
        self.n = n
        self.pmax = pmax
        self.target = target or LqtTarget(a, alpha, beta, pmax)
        self.ce = source or chevalley_eilenberg(self.data.g, pmax)
        self._chain: dict = {}
        self._mats: dict = {}

    def e_chain(self, i: int, j: int, word: tuple) -> dict:
        """``e_ij(a_1⊗…⊗a_L) = Σ e_{i,l2}(a_1)∧…∧e_{lL,j}(a_L)``."""
        key = (i, j, word)
        if key not in self._chain:
            g = self.data.g
            L = len(word)
            out: dict = {}
            for mids in product(range(self.n), repeat=L - 1):
                path = (i,) + mids + (j,)
                w, s = sorted_wedge([g.index(path[t], path[t + 1], word[t]) for t in range(L)])
                if w is not None:
                    vec_iadd(out, {w: s})
            self._chain[key] = out
        return self._chain[key]

    def theta_hat(self, cword: tuple) -> dict:
        """``θ̂([a_1⊗…⊗a_L]) = Σ_l e_ll(a_1⊗…⊗a_L)``."""
        out: dict = {}
        for l in range(self.n):
            vec_iadd(out, self.e_chain(l, l, cword))
        return out

    def epsilon_hat(self, words: tuple, x: int, y: int) -> dict:
        out: dict = {}
        if self.data.m == 0:
            return {(): 1}
        for x2, y2, terms in self.data.tabloid_pairs:
            if (x2, y2) != (x, y):
                continue
            for idx, c in terms:
                acc = {(): c}
                for (i, j), w in zip(idx, words):
                    acc = wedge_mul(acc, self.e_chain(i, j, w))
                    if not acc:
                        break
                vec_iadd(out, acc)
        return out

    def apply_label(self, label: tuple, scale_n: bool = False) -> dict:
        mon, words, x, y = label
        acc: dict = {(): 1}
        for cw in mon:
            acc = wedge_mul(acc, self.theta_hat(cw))
            if not acc:
                return {}
        out = wedge_mul(acc, self.epsilon_hat(words, x, y))
        if scale_n:
            f = 1
            for cw in mon:
                f *= len(cw)
            out = {k: f * v for k, v in out.items()}
        return out

    def matrix(self, p: int, scale_n: bool = False) -> SparseMat:
        key = (p, scale_n)
        if key not in self._mats:
            idx = self.ce.space.index_map(p)
            cols = {}
            for j, lab in enumerate(self.target.basis(p)):
                img = self.apply_label(lab, scale_n)
                if img:
                    cols[j] = {idx[w]: c for w, c in img.items() if c}
            self._mats[key] = SparseMat(self.ce.dim(p), self.target.dim(p), cols)
        return self._mats[key]

    def image(self, p: int) -> Subspace:
        return image_basis(self.matrix(p))

    def chain_defect(self, p: int) -> SparseMat:
        """``ψ′∘d − ∂∘ψ′`` on ``R′_p``."""
        return self.matrix(p - 1) @ self.target.complex.d(p) - self.ce.d(p) @ self.matrix(p)


def chain_map_witness(psi: PsiPrime, p: int) -> dict | None:
    """First basis element of ``R′_p`` where ``ψ′`` fails to commute with the boundaries."""
    diff = psi.chain_defect(p)
    if diff.is_zero():
        return None
    j = min(diff._c)
    return {
        "degree": p,
        "element": psi.target.basis(p)[j],
        "discrepancy": {psi.ce.basis(p - 1)[i]: c for i, c in sorted(diff.column(j).items())},
    }


def psi_triple_defects(a: StructAlgebra) -> list[dict]:
    """``ψ(b[a0⊗a1⊗a2]) − ∂ψ([a0⊗a1⊗a2])`` at ``n = 1`` for every basis triple."""
    g = matrix_lie_algebra(a, 1)
    out = []
    for w in product(range(a.dim), repeat=3):
        lhs: dict = {}
        for i, (x, y) in enumerate(((0, 1), (1, 2))):
            for s, c in a.basis_product(w[x], w[y]).items():
                rest = [s, w[2]] if i == 0 else [w[0], s]
                ww, sg = sorted_wedge(rest)
                if ww is not None:
                    vec_iadd(lhs, {ww: (1 if i == 0 else -1) * sg * c})
        for s, c in a.basis_product(w[2], w[0]).items():
            ww, sg = sorted_wedge([s, w[1]])
            if ww is not None:
                vec_iadd(lhs, {ww: sg * c})
        rhs: dict = {}
        ww, sg = sorted_wedge(list(w))
        if ww is not None:
            rhs = {k: sg * v for k, v in ce_boundary_word(g, ww).items()}
        diff = dict(lhs)
        vec_iadd(diff, rhs, -1)
        out.append({"triple": [a.basis_names[i] for i in w], "discrepancy": diff})
    return out


# ---------------------------------------------------------------------------
# stability and duality


class PreconditionError(ValueError):
    pass


def inclusion_matrix(g_small: MatrixLieAlgebra, g_big: MatrixLieAlgebra, src: ChainComplex,
                     tgt: ChainComplex, p: int) -> SparseMat:
    idx = tgt.space.index_map(p)
    cols = {}
    for j, w in enumerate(src.basis(p)):
        ww, s = sorted_wedge([g_small.include(x, g_big.n) for x in w])
        cols[j] = {idx[ww]: s}
    return SparseMat(tgt.dim(p), src.dim(p), cols)


def phi_stability(a: StructAlgebra, n: int, pmax: int) -> Check:
    """``φ^{n+1}∘incl = φ^n`` on ``M_{[∅,∅]_n}C_p`` for ``p ≤ pmax``."""
    e = Partition(())
    target = LqtTarget(a, e, e, pmax)
    small = Phi(a, n, e, e, pmax, target=target)
    big = Phi(a, n + 1, e, e, pmax, target=target)
    mod = CEModule(small.data.g, pmax, small.source)
    big_mod = CEModule(big.data.g, pmax, big.source)
    data = {"n": n, "pmax": pmax, "dims": {}, "inclusion_lands_in_M": {}}
    for p in range(pmax + 1):
        inc = inclusion_matrix(small.data.g, big.data.g, small.source, big.source, p)
        m = mod.highest_weight_space(p, WeightLabel(e, e, n))
        lhs = big.matrix(p) @ inc @ m.matrix()
        rhs = small.matrix(p) @ m.matrix()
        data["dims"][p] = m.dim
        mbig = big_mod.highest_weight_space(p, WeightLabel(e, e, n + 1))
        data["inclusion_lands_in_M"][p] = all(mbig.contains(inc.apply(v)) for v in m.basis)
        if lhs != rhs:
            diff = lhs - rhs
            j = min(diff._c)
            return Check("stability", False, witness={"degree": p, "element": m.basis[j]}, data=data)
        full = big.matrix(p) @ inc == small.matrix(p)
        data.setdefault("whole_complex", {})[p] = full
    return Check("stability", True, data=data)


def _diag(vals: Sequence) -> SparseMat:
    return SparseMat(len(vals), len(vals), {i: {i: v} for i, v in enumerate(vals) if v})


def _first_mismatch(lhs: SparseMat, rhs: SparseMat) -> tuple[int, int] | None:
    diff = lhs - rhs
    if diff.is_zero():
        return None
    j = min(diff._c)
    return (min(diff.column(j)), j)


def duality_check(n: int, v: StructAlgebra, alpha: Partition, beta: Partition, pmax: int) -> list[Check]:
    """The duality squares for ``φ′`` against ``ψ′`` and the equivariance of ``ν``, exactly.

    ``v`` must have zero multiplication; ``v^∨`` is modelled on the dual basis.
    """
    if not v.is_zero_multiplication:
        raise PreconditionError("duality needs a coefficient space with zero multiplication")
    dual = v.dual_space()
    phi = Phi(v, n, alpha, beta, pmax)
    psi = PsiPrime(dual, n, alpha, beta, pmax)
    checks = []

    # evaluation square: ev∘φ′ = (ψ′∘(N⊗1))ᵗ∘ν; ν and the Λ gl_n pairing are the identity matrix
    bad = None
    for p in range(pmax + 1):
        lhs = _diag(phi.target.pairing_diagonal(p)) @ phi.matrix(p)
        rhs = psi.matrix(p, scale_n=True).T
        mm = _first_mismatch(lhs, rhs)
        if mm:
            bad = {"degree": p, "target": phi.target.basis(p)[mm[0]], "source": phi.source.basis(p)[mm[1]]}
            break
    checks.append(Check("evaluation", bad is None, witness=bad, data={"pmax": pmax}))

    # θ¹ square: G_cyc∘θ¹ = (θ̂∘N)ᵗ
    cyc = connes_complex(v, max(pmax - 1, 0))
    bad = None
    for p in range(1, pmax + 1):
        words = cyc.basis(p - 1)
        widx = {w: i for i, w in enumerate(words)}
        cols = {}
        for j, w in enumerate(phi.source.basis(p)):
            t1 = phi.data.theta1(w)
            if t1:
                cols[j] = {widx[c]: cyclic_pairing(c) * x for c, x in t1.items()}
        lhs = SparseMat(len(words), phi.source.dim(p), cols)
        cidx = phi.source.space.index_map(p)
        cols = {}
        for j, w in enumerate(words):
            img = psi.theta_hat(w)
            if img:
                cols[j] = {cidx[k]: len(w) * x for k, x in img.items()}
        rhs = SparseMat(phi.source.dim(p), len(words), cols).T
        mm = _first_mismatch(lhs, rhs)
        if mm:
            bad = {"degree": p, "cyclic_word": words[mm[0]], "source": phi.source.basis(p)[mm[1]]}
            break
    checks.append(Check("theta-square", bad is None, witness=bad))

    # ε_ij square: ε_ij = ε̂_ijᵗ
    bar = bar_complex(v, max(pmax, 1))
    bad = None
    for p in range(1, pmax + 1):
        bidx = bar.space.index_map(p)
        cidx = phi.source.space.index_map(p)
        for i in range(n):
            for j in range(n):
                lhs = SparseMat(bar.dim(p), phi.source.dim(p), {
                    c: {bidx[k]: x for k, x in phi.data.epsilon_ij(w, i, j).items()}
                    for c, w in enumerate(phi.source.basis(p))})
                rhs = SparseMat(phi.source.dim(p), bar.dim(p), {
                    c: {cidx[k]: x for k, x in psi.e_chain(i, j, w).items()}
                    for c, w in enumerate(bar.basis(p))}).T
                mm = _first_mismatch(lhs, rhs)
                if mm and bad is None:
                    bad = {"degree": p, "ij": (i + 1, j + 1), "bar_word": bar.basis(p)[mm[0]],
                           "source": phi.source.basis(p)[mm[1]]}
    checks.append(Check("epsilon-square", bad is None, witness=bad))

    # coproduct square: (ν⊗ν)∘Δ = μᵗ∘ν
    bad = None
    for p in range(pmax + 1):
        delta, labels = coproduct(phi.source, p)
        mu = wedge_product(phi.source, p, labels)
        mm = _first_mismatch(delta, mu.T)
        if mm:
            bad = {"degree": p, "pair": labels[mm[0]], "source": phi.source.basis(p)[mm[1]]}
            break
    checks.append(Check("coproduct-square", bad is None, witness=bad))

    # equivariance: ν([g,h])(r) = ν(h)([gᵗ,r]) on generators, i.e. A_{e_ij}ᵗ = A_{e_ji}
    mod = CEModule(phi.data.g, pmax, phi.source)
    bad = None
    for p in range(pmax + 1):
        for i in range(n):
            for j in range(n):
                if mod.action(i, j, p).T != mod.action(j, i, p) and bad is None:
                    bad = {"degree": p, "generator": (i + 1, j + 1)}
    checks.append(Check("equivariance", bad is None, witness=bad))

    # N-scaling: ψ′∘(N⊗1) and ψ′ differ by the product of word lengths
    bad = None
    for p in range(pmax + 1):
        for j, (mon, _, _, _) in enumerate(psi.target.basis(p)):
            f = 1
            for cw in mon:
                f *= len(cw)
            a1 = psi.matrix(p, scale_n=True).column(j)
            a2 = {k: f * x for k, x in psi.matrix(p).column(j).items()}
            if a1 != a2:
                bad = {"degree": p, "element": psi.target.basis(p)[j]}
                break
        if bad:
            break
    checks.append(Check("N-scaling", bad is None, witness=bad))
    return checks


def psi_defect_witness(a: StructAlgebra, n: int = 1, p: int = 3) -> Check:
    """``ψ′`` is not a chain map: a basis element of ``R′_p`` with nonzero defect.

    With ``(α, β) = (∅, ∅)`` the check passes when a witness is found.  The
    defects on pure cyclic triples ``[a0⊗a1⊗a2]`` are reported alongside; for
    ``n = 1`` and ``dim A = 2`` they all vanish because ``Λ^3`` of a plane is zero.
    """
    e = Partition(())
    psi = PsiPrime(a, n, e, e, p)
    wit = chain_map_witness(psi, p)
    data = {"n": n, "degree": p, "lower_degrees": {q: chain_map_witness(psi, q) is not None for q in range(1, p)}}
    if n == 1 and p == 3:
        data["triples_nonzero"] = [t for t in psi_triple_defects(a) if t["discrepancy"]]
    if wit is not None:
        names = a.basis_names
        mon = wit["element"][0]
        wit = dict(wit)
        wit["element_text"] = "".join("[" + "⊗".join(names[i] for i in w) + "]" for w in mon) or "1"
        wit["discrepancy_text"] = " + ".join(
            f"({c})" + "∧".join(psi.data.g.label(x) for x in k) for k, c in wit["discrepancy"].items())
    return Check("psi-not-chainmap", wit is not None, witness=wit, data=data)
