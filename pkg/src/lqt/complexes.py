"""Graded spaces, chain complexes, chain maps, tensor products and Λ.

Conventions
-----------
* A boundary in degree ``p`` is a :class:`SparseMat` with ``dim C_{p-1}`` rows
  and ``dim C_p`` columns.
* Every Koszul sign in the package comes from :func:`koszul_sign`.
* ``V[-1]`` moves degree ``p`` to ``p + 1`` and keeps the boundary unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .exact_linear import SparseMat, Subspace, kernel_basis, image_basis, rank, vec_iadd
from .reports import Check


class MalformedComplexError(ValueError):
    pass


class StructuralError(ValueError):
    pass


# ---------------------------------------------------------------------------
# signs


def koszul_sign(degrees: Sequence[int], perm: Sequence[int]) -> int:
    """Sign of moving the factor at position ``i`` to position ``perm[i]``.

    Each crossing of two factors of degrees ``d1, d2`` contributes
    ``(-1)^(d1*d2)``.
    """
    s = 0
    n = len(perm)
    for i in range(n):
        if degrees[i] & 1:
            pi = perm[i]
            for j in range(i + 1, n):
                if degrees[j] & 1 and perm[j] < pi:
                    s ^= 1
    return -1 if s else 1


def permutation_sign(perm: Sequence[int]) -> int:
    return koszul_sign([1] * len(perm), perm)


def koszul_sort(items: Sequence, degrees: Sequence[int], key: Callable = None) -> tuple[list, int]:
    """Stable sort of graded factors with the accumulated Koszul sign."""
    key = key or (lambda x: x)
    order = sorted(range(len(items)), key=lambda i: key(items[i]))
    perm = [0] * len(items)
    for new, old in enumerate(order):
        perm[old] = new
    return [items[i] for i in order], koszul_sign(degrees, perm)


def sorted_wedge(word: Sequence[int]) -> tuple[tuple[int, ...] | None, int]:
    """Canonical form of a wedge of degree-one basis indices: sorted, or zero on repeats."""
    if len(set(word)) != len(word):
        return None, 0
    out, sign = koszul_sort(list(word), [1] * len(word))
    return tuple(out), sign


# ---------------------------------------------------------------------------
# graded spaces and complexes


class GradedSpace:
    """Named bases in each degree; absent degrees have dimension zero."""

    def __init__(self, degrees: Mapping[int, Sequence[Hashable]] | None = None):
        self.degrees: dict[int, list] = {}
        self._index: dict[int, dict] = {}
        for p, labels in (degrees or {}).items():
            labels = list(labels)
            idx = {lab: i for i, lab in enumerate(labels)}
            if len(idx) != len(labels):
                raise ValueError(f"repeated label in degree {p}")
            if labels:
                self.degrees[p] = labels
                self._index[p] = idx

    def basis(self, p: int) -> list:
        return self.degrees.get(p, [])

    def dim(self, p: int) -> int:
        return len(self.degrees.get(p, ()))

    def index(self, p: int, label) -> int:
        return self._index[p][label]

    def index_map(self, p: int) -> dict:
        return self._index.get(p, {})

    def dims(self, lo: int = 0, hi: int | None = None) -> list[int]:
        hi = self.top() if hi is None else hi
        return [self.dim(p) for p in range(lo, hi + 1)]

    def top(self) -> int:
        return max(self.degrees, default=0)

    def items(self):
        return sorted(self.degrees.items())

    def __repr__(self) -> str:
        return f"GradedSpace({ {p: len(b) for p, b in self.items()} })"


@dataclass
class ChainComplex:
    space: GradedSpace
    boundary: dict = field(default_factory=dict)  # p -> SparseMat  C_p -> C_{p-1}
    pmax: int | None = None
    name: str = ""

    def d(self, p: int) -> SparseMat:
        m = self.boundary.get(p)
        if m is None:
            return SparseMat(self.space.dim(p - 1), self.space.dim(p))
        return m

    def dim(self, p: int) -> int:
        return self.space.dim(p)

    def basis(self, p: int) -> list:
        return self.space.basis(p)

    def degrees(self) -> list[int]:
        return sorted(self.space.degrees)


@dataclass
class ChainMap:
    source: ChainComplex
    target: ChainComplex
    matrices: dict  # p -> SparseMat  source_p -> target_p

    def f(self, p: int) -> SparseMat:
        m = self.matrices.get(p)
        if m is None:
            return SparseMat(self.target.dim(p), self.source.dim(p))
        return m


def verify_complex(c: ChainComplex, degrees: Iterable[int] | None = None) -> Check:
    """Exact check of ``d∘d = 0``; the witness names the first offending basis element."""
    degs = sorted(degrees) if degrees is not None else c.degrees()
    checked = []
    for p in degs:
        if c.dim(p) == 0:
            continue
        dd = c.d(p - 1) @ c.d(p)
        checked.append(p)
        if not dd.is_zero():
            j = min(dd._c)
            return Check(
                "d∘d=0", False,
                witness={"degree": p, "basis_element": c.basis(p)[j], "image": {str(c.basis(p - 2)[i]): x for i, x in dd.column(j).items()}},
                data={"degrees_checked": checked},
            )
    return Check("d∘d=0", True, data={"degrees_checked": checked, "pmax": c.pmax})


def _require_valid(c: ChainComplex, degrees: Iterable[int]) -> None:
    chk = verify_complex(c, degrees)
    if not chk.ok:
        raise MalformedComplexError(f"boundary does not square to zero: {chk.witness}")


def homology(c: ChainComplex, p: int, validate: bool = True) -> tuple[int, Subspace]:
    """Dimension of ``H_p`` and a subspace of cycles complementing the boundaries."""
    if validate:
        _require_valid(c, [p, p + 1])
    z = kernel_basis(c.d(p)) if c.dim(p) else Subspace.zero(0)
    b = image_basis(c.d(p + 1)) if c.dim(p) else Subspace.zero(0)
    reps = b.complement_in(z)
    return z.dim - b.dim, reps


def homology_dims(c: ChainComplex, degrees: Iterable[int], validate: bool = True) -> dict[int, int]:
    degs = list(degrees)
    if validate:
        _require_valid(c, set(degs) | {p + 1 for p in degs})
    ranks = {}

    def rk(p):
        if p not in ranks:
            ranks[p] = rank(c.d(p)) if c.dim(p) and c.dim(p - 1) else 0
        return ranks[p]

    return {p: c.dim(p) - rk(p) - rk(p + 1) for p in degs}


def blocked_homology_dims(c: ChainComplex, degrees: Iterable[int], key: Callable) -> dict[int, int]:
    """Homology dims computed block by block for a grading ``key`` the boundary preserves."""
    out = {}
    for p in degrees:
        total = 0
        blocks: dict = {}
        for q in (p - 1, p, p + 1):
            for i, lab in enumerate(c.basis(q)):
                blocks.setdefault(key(lab), {}).setdefault(q, []).append(i)
        for k, parts in blocks.items():
            cols = parts.get(p, [])
            if not cols:
                continue
            r_out = 0
            if parts.get(p - 1):
                m = c.d(p).select_columns(cols).select_rows(parts[p - 1])
                r_out = rank(m)
            r_in = 0
            if parts.get(p + 1):
                m = c.d(p + 1).select_columns(parts[p + 1]).select_rows(cols)
                r_in = rank(m)
            total += len(cols) - r_out - r_in
        out[p] = total
    return out


def verify_chain_map(f: ChainMap, degrees: Iterable[int] | None = None) -> Check:
    """Exact check of ``f∘d = d∘f``; failures are localised to a source basis element."""
    degs = sorted(degrees) if degrees is not None else sorted(f.matrices)
    checked = []
    for p in degs:
        fp = f.f(p)
        if fp.shape != (f.target.dim(p), f.source.dim(p)):
            raise StructuralError(f"degree {p}: map has shape {fp.shape}, expected {(f.target.dim(p), f.source.dim(p))}")
        if f.source.dim(p) == 0:
            continue
        lhs = f.f(p - 1) @ f.source.d(p)
        rhs = f.target.d(p) @ fp
        diff = lhs - rhs
        checked.append(p)
        if not diff.is_zero():
            j = min(diff._c)
            return Check(
                "chain map", False,
                witness={"degree": p, "basis_element": f.source.basis(p)[j],
                         "discrepancy": {str(f.target.basis(p - 1)[i]): x for i, x in diff.column(j).items()}},
                data={"degrees_checked": checked},
            )
    return Check("chain map", True, data={"degrees_checked": checked})


# ---------------------------------------------------------------------------
# constructions


def unit_complex() -> ChainComplex:
    """The ground field ``k`` in degree 0."""
    return ChainComplex(GradedSpace({0: [()]}), {}, pmax=0, name="k")


def tensor(c1: ChainComplex, c2: ChainComplex, pmax: int) -> ChainComplex:
    """Tensor product, basis ``(x, y)``, with ``d(x⊗y) = dx⊗y + (-1)^|x| x⊗dy``."""
    degs = {}
    for p in range(0, pmax + 1):
        labels = []
        for q in c1.degrees():
            for x in c1.basis(q):
                for y in c2.basis(p - q):
                    labels.append((x, y))
        if labels:
            degs[p] = labels
    space = GradedSpace(degs)
    deg1 = {x: q for q in c1.degrees() for x in c1.basis(q)}
    bd = {}
    for p in range(1, pmax + 1):
        if not space.dim(p):
            continue
        tgt = space.index_map(p - 1)
        cols = {}
        for j, (x, y) in enumerate(space.basis(p)):
            q = deg1[x]
            r = p - q
            col: dict = {}
            if q >= 1 and c1.dim(q - 1):
                dx = c1.d(q).column(c1.space.index(q, x))
                for i, v in dx.items():
                    vec_iadd(col, {tgt[(c1.basis(q - 1)[i], y)]: v})
            if r >= 1 and c2.dim(r - 1):
                dy = c2.d(r).column(c2.space.index(r, y))
                s = -1 if q & 1 else 1
                for i, v in dy.items():
                    vec_iadd(col, {tgt[(x, c2.basis(r - 1)[i])]: s * v})
            if col:
                cols[j] = col
        bd[p] = SparseMat(space.dim(p - 1), space.dim(p), cols)
    return ChainComplex(space, bd, pmax=pmax, name=f"({c1.name})⊗({c2.name})")



def shift_down(v: GradedSpace) -> GradedSpace:
    """``V[-1]``: the degree ``p`` basis becomes the degree ``p + 1`` basis."""
    return GradedSpace({p + 1: b for p, b in v.items()})


def shift_down_complex(c: ChainComplex) -> ChainComplex:
    bd = {p + 1: m for p, m in c.boundary.items()}
    return ChainComplex(shift_down(c.space), bd, pmax=None if c.pmax is None else c.pmax + 1, name=f"{c.name}[-1]")


def _generators(v: GradedSpace) -> list[tuple[int, int, Hashable]]:
    gens = []
    for p, labels in v.items():
        if p <= 0:
            raise ValueError("graded symmetric algebra needs generators in positive degrees")
        for k, lab in enumerate(labels):
            gens.append((p, k, lab))
    return gens


def symmetric_monomials(gen_degrees: Sequence[int], pmax: int) -> dict[int, list[tuple[int, ...]]]:
    """Sorted multisets of generator indices; odd generators occur at most once.

    ``gen_degrees`` must be nondecreasing so that index order equals the
    (degree, label) order used for canonical monomials.
    """
    out: dict[int, list] = {0: [()]}
    g = len(gen_degrees)

    def rec(start: int, deg: int, cur: list):
        for i in range(start, g):
            d = gen_degrees[i]
            if deg + d > pmax:
                break
            if cur and cur[-1] == i and d & 1:
                continue
            cur.append(i)
            out.setdefault(deg + d, []).append(tuple(cur))
            rec(i, deg + d, cur)
            cur.pop()

    rec(0, 0, [])
    return out


def canonical_monomial(factors: Sequence[int], gen_degrees: Sequence[int]) -> tuple[tuple[int, ...] | None, int]:
    """Sort a product of generators with Koszul signs; zero if an odd generator repeats."""
    degs = [gen_degrees[i] for i in factors]
    out, sign = koszul_sort(list(factors), degs)
    for a, b in zip(out, out[1:]):
        if a == b and gen_degrees[a] & 1:
            return None, 0
    return tuple(out), sign


def graded_symmetric_algebra(v: GradedSpace, pmax: int) -> GradedSpace:
    """Basis of ``Λ V`` up to degree ``pmax`` as tuples of generator labels."""
    gens = _generators(v)
    mons = symmetric_monomials([d for d, _, _ in gens], pmax)
    return GradedSpace({p: [tuple(gens[i][2] for i in m) for m in ms] for p, ms in mons.items()})


def symmetric_algebra_complex(c: ChainComplex, pmax: int) -> ChainComplex:
    """``Λ`` of a complex concentrated in positive degrees, with the Leibniz boundary.

    Labels are tuples of generator labels of ``c``; the boundary is
    ``d(x1…xk) = Σ (-1)^(|x1|+…+|x_{i-1}|) x1…(dx_i)…xk``.
    """
    gens = _generators(c.space)
    gdeg = [d for d, _, _ in gens]
    gidx = {(d, lab): i for i, (d, _, lab) in enumerate(gens)}
    mons = symmetric_monomials(gdeg, pmax)
    space = GradedSpace({p: [tuple(gens[i][2] for i in m) for m in ms] for p, ms in mons.items()})
    index = {p: {m: j for j, m in enumerate(ms)} for p, ms in mons.items()}
    bd = {}
    for p in range(1, pmax + 1):
        if not space.dim(p):
            continue
        cols = {}
        for j, mon in enumerate(mons[p]):
            col: dict = {}
            prefix = 0
            for pos, g in enumerate(mon):
                d = gdeg[g]
                if d >= 2:
                    dg = c.d(d).column(c.space.index(d, gens[g][2]))
                    s0 = -1 if prefix & 1 else 1
                    for i, x in dg.items():
                        h = gidx[(d - 1, c.basis(d - 1)[i])]
                        new = list(mon[:pos]) + [h] + list(mon[pos + 1:])
                        m2, s = canonical_monomial(new, gdeg)
                        if m2 is not None:
                            vec_iadd(col, {index[p - 1][m2]: s0 * s * x})
                prefix += d
            if col:
                cols[j] = col
        bd[p] = SparseMat(space.dim(p - 1), space.dim(p), cols)
    cx = ChainComplex(space, bd, pmax=pmax, name=f"Λ({c.name})")
    cx.generator_degrees = gdeg
    cx.monomials = mons
    cx.monomial_index = index
    return cx


def symmetric_algebra_dims_series(gen_degree_counts: Mapping[int, int], pmax: int) -> list[int]:
    """Coefficients of ∏_odd (1+t^d)^c · ∏_even (1-t^d)^(-c) up to ``pmax``."""
    series = [0] * (pmax + 1)
    series[0] = 1
    for d, cnt in gen_degree_counts.items():
        for _ in range(cnt):
            if d & 1:
                new = series[:]
                for p in range(d, pmax + 1):
                    new[p] += series[p - d]
            else:
                new = series[:]
                for p in range(d, pmax + 1):
                    new[p] += new[p - d]
            series = new
    return series
