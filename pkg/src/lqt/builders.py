"""Chevalley–Eilenberg, Connes cyclic and bar complexes, plus H-unitality checks.

Sign conventions (pinned by the ``d∘d = 0`` tests):

* CE:  ``∂(g1∧…∧gp) = Σ_{i<j} (-1)^(i+j+1) [gi,gj] ∧ g1∧…ĝi…ĝj…∧gp``
* cyclic:  ``b[a0⊗…⊗ap] = Σ_{i<p} (-1)^i [… a_i a_{i+1} …] + (-1)^p [a_p a_0 ⊗ a1 … a_{p-1}]``
* bar:  ``b'(a1⊗…⊗ap) = Σ_{i=1}^{p-1} (-1)^(i-1) a1⊗…⊗a_i a_{i+1}⊗…⊗ap``

Cyclic words are stored as minimal rotations; rotating a length ``p+1`` word
by one step costs ``(-1)^p``.
"""

from __future__ import annotations

from bisect import bisect_left
from itertools import combinations, product
from typing import Iterable, Mapping, Sequence

from .algebras import (ProAlgebra, StructAlgebra, MatrixLieAlgebra, is_pro_zero, ProZeroDecision)
from .complexes import ChainComplex, GradedSpace, homology
from .exact_linear import SparseMat, Subspace, image_basis, solve, vec_iadd

H_UNITAL = "H-UNITAL"


# ---------------------------------------------------------------------------
# Chevalley–Eilenberg


def wedge_insert(z: int, rest: Sequence[int]) -> tuple[tuple[int, ...] | None, int]:
    """``z ∧ rest`` for a sorted ``rest``: sorted word and sign, or ``(None, 0)``."""
    pos = bisect_left(rest, z)
    if pos < len(rest) and rest[pos] == z:
        return None, 0
    return tuple(rest[:pos]) + (z,) + tuple(rest[pos:]), (-1 if pos & 1 else 1)


def ce_boundary_word(g: MatrixLieAlgebra, word: Sequence[int]) -> dict:
    out: dict = {}
    tab = g.bracket_table
    p = len(word)
    for i in range(p):
        for j in range(i + 1, p):
            br = tab.get((word[i], word[j]))
            if not br:
                continue
            s = -1 if (i + j) & 1 == 0 else 1  # (-1)^(i+j+1), 0-based shift keeps parity
            rest = word[:i] + word[i + 1:j] + word[j + 1:]
            for z, c in br.items():
                w, sg = wedge_insert(z, rest)
                if w is not None:
                    vec_iadd(out, {w: s * sg * c})
    return out


def wedge_basis(dim: int, p: int) -> list[tuple[int, ...]]:
    return list(combinations(range(dim), p))


def chevalley_eilenberg(g: MatrixLieAlgebra, pmax: int, words: Mapping[int, list] | None = None) -> ChainComplex:
    """CE complex of ``gl_n A`` truncated at ``pmax``; labels are sorted index tuples.

    ``words`` optionally restricts each degree to a subset of wedge words
    closed under the boundary (e.g. a union of weight blocks).
    """
    degs = {}
    for p in range(0, pmax + 1):
        degs[p] = words[p] if words is not None and p in words else wedge_basis(g.dim, p)
    space = GradedSpace(degs)
    bd = {}
    for p in range(1, pmax + 1):
        if not space.dim(p):
            continue
        tgt = space.index_map(p - 1)
        cols = {}
        for j, w in enumerate(space.basis(p)):
            img = ce_boundary_word(g, w)
            if img:
                cols[j] = {tgt[x]: c for x, c in img.items()}
        bd[p] = SparseMat(space.dim(p - 1), space.dim(p), cols)
    cx = ChainComplex(space, bd, pmax=pmax, name=f"C(gl_{g.n} {g.coeff.name})")
    cx.lie = g
    return cx


def word_weight(g: MatrixLieAlgebra, word: Sequence[int]) -> tuple[int, ...]:
    w = [0] * g.n
    for x in word:
        i, j, _ = g.unpack(x)
        w[i] += 1
        w[j] -= 1
    return tuple(w)


def ce_homology_dims_by_weight(g: MatrixLieAlgebra, degrees: Iterable[int]) -> dict[int, int]:
    """CE homology dims, block-diagonalising ``∂`` by ``gl_n k``-weight.

    Avoids materialising full boundary matrices, which matters for
    ``Λ^4 gl_7`` and similar sizes.
    """
    from .exact_linear import rank

    degrees = list(degrees)
    need = sorted({q for p in degrees for q in (p, p + 1)})
    by_deg_weight: dict[int, dict] = {}
    for q in need:
        buckets: dict = {}
        for w in combinations(range(g.dim), q):
            buckets.setdefault(word_weight(g, w), []).append(w)
        by_deg_weight[q] = buckets
    rank_cache: dict = {}

    def block_rank(q: int, wt) -> int:
        key = (q, wt)
        if key in rank_cache:
            return rank_cache[key]
        src = by_deg_weight.get(q, {}).get(wt, [])
        if q == 0 or not src:
            rank_cache[key] = 0
            return 0
        tgt_words = {}
        cols = []
        for w in src:
            img = ce_boundary_word(g, w)
            col = {}
            for x, c in img.items():
                k = tgt_words.setdefault(x, len(tgt_words))
                col[k] = c
            cols.append(col)
        r = rank(SparseMat.from_columns(max(len(tgt_words), 1), cols)) if tgt_words else 0
        rank_cache[key] = r
        return r

    out = {}
    for p in degrees:
        total = 0
        for wt, ws in by_deg_weight[p].items():
            total += len(ws) - block_rank(p, wt) - block_rank(p + 1, wt)
        out[p] = total
    return out


# ---------------------------------------------------------------------------
# cyclic words


def canonical_cyclic(word: Sequence[int]) -> tuple[tuple[int, ...] | None, int]:
    """Minimal rotation of a cyclic word with its sign; ``(None, 0)`` if the class is zero."""
    L = len(word)
    p = L - 1
    w = tuple(word)
    best, best_sign, zero = None, 1, False
    for j in range(L):
        rot = w[L - j:] + w[:L - j] if j else w
        sign = -1 if (p * j) & 1 else 1
        if best is None or rot < best:
            best, best_sign, zero = rot, sign, False
        elif rot == best and sign != best_sign:
            zero = True
    if zero:
        return None, 0
    return best, best_sign


def cyclic_basis(dim: int, p: int) -> list[tuple[int, ...]]:
    """Canonical nonzero cyclic words of length ``p + 1`` (degree ``p``)."""
    out = []
    for w in product(range(dim), repeat=p + 1):
        c, s = canonical_cyclic(w)
        if c == w and s == 1:
            out.append(w)
    return out


def rotate(word: Sequence[int], j: int) -> tuple[tuple[int, ...], int]:
    """``t^j`` applied to a tensor word: the rotated word and its Koszul sign."""
    L = len(word)
    j %= L
    w = tuple(word)
    return (w[L - j:] + w[:L - j] if j else w), (-1 if ((L - 1) * j) & 1 else 1)


def _contract(a: StructAlgebra, word: Sequence[int], i: int, j: int) -> list[tuple[tuple[int, ...], object]]:
    """Replace positions ``i, j`` (``j`` removed) by the product ``a_i a_j`` placed at ``i``."""
    out = []
    for s, c in a.basis_product(word[i], word[j]).items():
        new = list(word)
        new[i] = s
        del new[j]
        out.append((tuple(new), c))
    return out


def cyclic_boundary_word(a: StructAlgebra, word: Sequence[int]) -> dict:
    p = len(word) - 1
    out: dict = {}
    for i in range(p):
        sgn = -1 if i & 1 else 1
        for w, c in _contract(a, word, i, i + 1):
            r, s = canonical_cyclic(w)
            if r is not None:
                vec_iadd(out, {r: sgn * s * c})
    if p >= 1:
        sgn = -1 if p & 1 else 1
        for s0, c in a.basis_product(word[p], word[0]).items():
            w = (s0,) + tuple(word[1:p])
            r, s = canonical_cyclic(w)
            if r is not None:
                vec_iadd(out, {r: sgn * s * c})
    return out


def connes_complex(a: StructAlgebra, pmax: int) -> ChainComplex:
    """Connes' complex ``C^λ A`` in degrees ``0..pmax``."""
    space = GradedSpace({p: cyclic_basis(a.dim, p) for p in range(pmax + 1)})
    bd = {}
    for p in range(1, pmax + 1):
        if not space.dim(p):
            continue
        tgt = space.index_map(p - 1)
        cols = {}
        for j, w in enumerate(space.basis(p)):
            img = cyclic_boundary_word(a, w)
            if img:
                cols[j] = {tgt[x]: c for x, c in img.items()}
        bd[p] = SparseMat(space.dim(p - 1), space.dim(p), cols)
    return ChainComplex(space, bd, pmax=pmax, name=f"C^λ({a.name})")


# ---------------------------------------------------------------------------
# bar complex


def bar_boundary_word(a: StructAlgebra, word: Sequence[int]) -> dict:
    out: dict = {}
    for i in range(len(word) - 1):
        sgn = 1 if i % 2 == 0 else -1  # (-1)^(i-1) with 1-based i
        for w, c in _contract(a, word, i, i + 1):
            vec_iadd(out, {w: sgn * c})
    return out


def bar_complex(a: StructAlgebra, pmax: int) -> ChainComplex:
    """``(T^+ A, b')`` in degrees ``1..pmax``; labels are word tuples."""
    space = GradedSpace({p: list(product(range(a.dim), repeat=p)) for p in range(1, pmax + 1)})
    bd = {}
    for p in range(2, pmax + 1):
        if not space.dim(p):
            continue
        tgt = space.index_map(p - 1)
        cols = {}
        for j, w in enumerate(space.basis(p)):
            img = bar_boundary_word(a, w)
            if img:
                cols[j] = {tgt[x]: c for x, c in img.items()}
        bd[p] = SparseMat(space.dim(p - 1), space.dim(p), cols)
    return ChainComplex(space, bd, pmax=pmax, name=f"C^bar({a.name})")


def tensor_power_map(sigma: SparseMat, src: ChainComplex, tgt: ChainComplex, p: int) -> SparseMat:
    """``σ^{⊗p}`` on degree-``p`` words (bar words or wedge-free tensor words)."""
    cols = {}
    tidx = tgt.space.index_map(p)
    for j, w in enumerate(src.basis(p)):
        terms = [((), 1)]
        for x in w:
            col = sigma.column(x)
            terms = [(t + (y,), c * v) for t, c in terms for y, v in col.items()]
        img: dict = {}
        for t, c in terms:
            vec_iadd(img, {tidx[t]: c})
        if img:
            cols[j] = img
    return SparseMat(tgt.dim(p), src.dim(p), cols)


# ---------------------------------------------------------------------------
# induced maps on homology


class InducedMapError(ArithmeticError):
    """A lifted representative failed to land in the target cycles."""


def induced_homology_map(f: SparseMat, src_reps: Subspace, tgt_reps: Subspace, tgt_boundaries: Subspace) -> SparseMat:
    """Matrix of ``H(f)`` in the bases given by the representative subspaces."""
    basis = list(tgt_reps.basis) + list(tgt_boundaries.basis)
    m = SparseMat.from_columns(f.rows, basis)
    cols = []
    for z in src_reps.basis:
        fz = f.apply(z)
        x = solve(m, fz) if fz else {}
        if x is None:
            raise InducedMapError("image of a cycle is not a cycle")
        cols.append({i: c for i, c in x.items() if i < tgt_reps.dim})
    return SparseMat.from_columns(tgt_reps.dim, cols)


def homology_data(c: ChainComplex, p: int) -> tuple[Subspace, Subspace]:
    """``(representatives, boundaries)`` of ``H_p``."""
    _, reps = homology(c, p)
    b = image_basis(c.d(p + 1)) if c.dim(p) else Subspace.zero(0)
    return reps, b


def h_unital_check_pro(a: ProAlgebra, rmax: int) -> dict[int, ProZeroDecision]:
    """Per ``r``, whether ``{H^bar_r(A_n)}_n`` is pro-zero inside the window."""
    bars = [bar_complex(lv, rmax + 1) for lv in a.levels]
    out = {}
    for r in range(1, rmax + 1):
        data = [homology_data(b, r) for b in bars]
        dims = [reps.dim for reps, _ in data]
        maps = []
        for j in range(2, a.window + 1):
            f = tensor_power_map(a.sigma(j), bars[j - 1], bars[j - 2], r)
            maps.append(induced_homology_map(f, data[j - 1][0], data[j - 2][0], data[j - 2][1]))
        dec = is_pro_zero(dims, maps, a.window)
        out[r] = dec
    return out


def h_unital_verdict(dec: ProZeroDecision) -> str:
    return H_UNITAL if dec.is_zero else dec.verdict
