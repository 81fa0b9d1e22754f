"""Sparse exact linear algebra over the rationals.

Vectors are plain ``dict[int, Fraction]`` with no stored zeros.  Matrices are
stored column-major (column ``j`` is the image of the ``j``-th source basis
vector), which is how every boundary and chain map in this package is built.

Elimination is fraction-free: rows are scaled to primitive integer vectors and
combined with integer cross-multiplication, then normalised to rationals only
when a reduced echelon form is actually needed.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping, Sequence

Rat = Fraction
Vector = dict  # dict[int, Fraction]


class AmbientMismatchError(ValueError):
    """Raised when two subspaces do not live in the same coordinate space."""


def as_rat(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x)


def vec_add(u: Mapping, v: Mapping, scale=1) -> dict:
    """Return ``u + scale * v`` as a new sparse vector."""
    out = dict(u)
    for k, x in v.items():
        y = out.get(k, 0) + scale * x
        if y:
            out[k] = y
        else:
            out.pop(k, None)
    return out


def vec_iadd(u: dict, v: Mapping, scale=1) -> None:
    for k, x in v.items():
        y = u.get(k, 0) + scale * x
        if y:
            u[k] = y
        else:
            u.pop(k, None)


def vec_scale(v: Mapping, c) -> dict:
    if not c:
        return {}
    return {k: c * x for k, x in v.items()}


class SparseMat:
    """Immutable sparse rational matrix, stored by columns."""

    __slots__ = ("rows", "cols", "_c")

    def __init__(self, rows: int, cols: int, columns: Mapping[int, Mapping] | None = None):
        self.rows = rows
        self.cols = cols
        c = {}
        for j, col in (columns or {}).items():
            if not 0 <= j < cols:
                raise IndexError(f"column {j} out of range for {rows}x{cols}")
            clean = {}
            for i, x in col.items():
                if not 0 <= i < rows:
                    raise IndexError(f"row {i} out of range for {rows}x{cols}")
                if x:
                    clean[i] = as_rat(x)
            if clean:
                c[j] = clean
        self._c = c

    # construction -------------------------------------------------------
    @classmethod
    def zero(cls, rows: int, cols: int) -> "SparseMat":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "SparseMat":
        return cls(n, n, {i: {i: 1} for i in range(n)})

    @classmethod
    def from_entries(cls, rows: int, cols: int, entries: Mapping[tuple[int, int], object]) -> "SparseMat":
        columns: dict[int, dict] = {}
        for (i, j), x in entries.items():
            columns.setdefault(j, {})[i] = x
        return cls(rows, cols, columns)

    @classmethod
    def from_dense(cls, data: Sequence[Sequence]) -> "SparseMat":
        rows = len(data)
        cols = len(data[0]) if rows else 0
        columns: dict[int, dict] = {}
        for i, row in enumerate(data):
            if len(row) != cols:
                raise ValueError("ragged dense matrix")
            for j, x in enumerate(row):
                if x:
                    columns.setdefault(j, {})[i] = x
        return cls(rows, cols, columns)

    @classmethod
    def from_columns(cls, rows: int, columns: Sequence[Mapping]) -> "SparseMat":
        return cls(rows, len(columns), {j: c for j, c in enumerate(columns)})

    @classmethod
    def _raw(cls, rows: int, cols: int, c: dict) -> "SparseMat":
        m = cls.__new__(cls)
        m.rows, m.cols, m._c = rows, cols, c
        return m

    # access ---------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def column(self, j: int) -> dict:
        return dict(self._c.get(j, {}))

    def columns(self) -> list[dict]:
        return [dict(self._c.get(j, {})) for j in range(self.cols)]

    def row_dicts(self) -> list[dict]:
        out: list[dict] = [dict() for _ in range(self.rows)]
        for j, col in self._c.items():
            for i, x in col.items():
                out[i][j] = x
        return out

    def entries(self) -> dict[tuple[int, int], Fraction]:
        return {(i, j): x for j, col in self._c.items() for i, x in col.items()}

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self._c.get(j, {}).get(i, Fraction(0))

    @property
    def nnz(self) -> int:
        return sum(len(c) for c in self._c.values())

    def is_zero(self) -> bool:
        return not self._c

    def to_dense(self) -> list[list[Fraction]]:
        out = [[Fraction(0)] * self.cols for _ in range(self.rows)]
        for j, col in self._c.items():
            for i, x in col.items():
                out[i][j] = x
        return out

    # algebra ----------------------------------------------------------------
    @property
    def T(self) -> "SparseMat":
        c: dict[int, dict] = {}
        for j, col in self._c.items():
            for i, x in col.items():
                c.setdefault(i, {})[j] = x
        return SparseMat._raw(self.cols, self.rows, c)

    def apply(self, v: Mapping) -> dict:
        out: dict = {}
        for j, x in v.items():
            col = self._c.get(j)
            if col:
                vec_iadd(out, col, x)
        return out

    def __matmul__(self, other: "SparseMat") -> "SparseMat":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        c = {}
        for j, col in other._c.items():
            img = self.apply(col)
            if img:
                c[j] = img
        return SparseMat._raw(self.rows, other.cols, c)

    def __add__(self, other: "SparseMat") -> "SparseMat":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        c = {j: dict(col) for j, col in self._c.items()}
        for j, col in other._c.items():
            v = vec_add(c.get(j, {}), col)
            if v:
                c[j] = v
            else:
                c.pop(j, None)
        return SparseMat._raw(self.rows, self.cols, c)

    def __neg__(self) -> "SparseMat":
        return SparseMat._raw(self.rows, self.cols, {j: {i: -x for i, x in col.items()} for j, col in self._c.items()})

    def __sub__(self, other: "SparseMat") -> "SparseMat":
        return self + (-other)

    def scale(self, s) -> "SparseMat":
        s = as_rat(s)
        if not s:
            return SparseMat(self.rows, self.cols)
        return SparseMat._raw(self.rows, self.cols, {j: {i: s * x for i, x in col.items()} for j, col in self._c.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, SparseMat) and self.shape == other.shape and self._c == other._c

    def __hash__(self):
        return hash((self.rows, self.cols, self.nnz))

    def __repr__(self) -> str:
        return f"SparseMat({self.rows}x{self.cols}, nnz={self.nnz})"

    def select_columns(self, idx: Sequence[int]) -> "SparseMat":
        c = {k: dict(self._c[j]) for k, j in enumerate(idx) if j in self._c}
        return SparseMat._raw(self.rows, len(idx), c)

    def select_rows(self, idx: Sequence[int]) -> "SparseMat":
        pos = {i: k for k, i in enumerate(idx)}
        c = {}
        for j, col in self._c.items():
            new = {pos[i]: x for i, x in col.items() if i in pos}
            if new:
                c[j] = new
        return SparseMat._raw(len(idx), self.cols, c)


def hstack(mats: Sequence[SparseMat], rows: int | None = None) -> SparseMat:
    if not mats:
        return SparseMat(rows or 0, 0)
    r = mats[0].rows
    c, off = {}, 0
    for m in mats:
        if m.rows != r:
            raise ValueError("hstack row mismatch")
        for j, col in m._c.items():
            c[off + j] = dict(col)
        off += m.cols
    return SparseMat._raw(r, off, c)


def vstack(mats: Sequence[SparseMat], cols: int | None = None) -> SparseMat:
    if not mats:
        return SparseMat(0, cols or 0)
    return hstack([m.T for m in mats]).T


# ---------------------------------------------------------------------------
# elimination


def _primitive(row: Mapping) -> dict[int, int]:
    """Scale a rational row to a primitive integer row with positive lead."""
    den = 1
    for x in row.values():
        den = lcm(den, Fraction(x).denominator)
    out = {k: int(Fraction(x) * den) for k, x in row.items() if x}
    return _normalize_int(out)


def _normalize_int(row: dict[int, int]) -> dict[int, int]:
    if not row:
        return row
    g = 0
    for x in row.values():
        g = gcd(g, x)
        if g == 1:
            break
    lead = row[min(row)]
    if lead < 0:
        g = -g
    if g != 1:
        row = {k: x // g for k, x in row.items()}
    return row


def _echelon(rows: Iterable[Mapping]) -> dict[int, dict[int, int]]:
    """Fraction-free row echelon form.

    Returns a map ``pivot column -> primitive integer row`` whose smallest
    column is the pivot.  Sparse rows are inserted first (a cheap Markowitz
    heuristic) so fill-in stays small on boundary matrices.
    """
    work = [_primitive(r) for r in rows]
    work = [r for r in work if r]
    work.sort(key=len)
    piv: dict[int, dict[int, int]] = {}
    for r in work:
        while r:
            c = min(r)
            p = piv.get(c)
            if p is None:
                piv[c] = r
                break
            a, b = p[c], r[c]
            # r <- a*r - b*p
            new = {k: a * x for k, x in r.items()}
            for k, x in p.items():
                y = new.get(k, 0) - b * x
                if y:
                    new[k] = y
                else:
                    new.pop(k, None)
            r = _normalize_int(new)
    return piv


def _rref_from_echelon(piv: dict[int, dict[int, int]]) -> list[tuple[int, dict]]:
    """Back-substitute to reduced row echelon form with rational entries."""
    order = sorted(piv)
    rows = {c: {k: Fraction(x, piv[c][c]) for k, x in piv[c].items()} for c in order}
    for c in reversed(order):
        rc = rows[c]
        for c2 in order:
            if c2 >= c:
                break
            r2 = rows[c2]
            x = r2.get(c)
            if x:
                vec_iadd(r2, rc, -x)
    return [(c, rows[c]) for c in order]


def rref_rows(rows: Iterable[Mapping]) -> list[tuple[int, dict]]:
    """Reduced row echelon form of a list of sparse rows as ``(pivot, row)`` pairs."""
    return _rref_from_echelon(_echelon(rows))


def rank(m: SparseMat) -> int:
    """Exact rank over the rationals."""
    if m.is_zero():
        return 0
    # eliminate along the shorter side
    if m.rows <= m.cols:
        return len(_echelon(m.row_dicts()))
    return len(_echelon(m.columns()))


def rank_of_vectors(vectors: Iterable[Mapping]) -> int:
    return len(_echelon(vectors))


# ---------------------------------------------------------------------------
# subspaces


class Subspace:
    """An exact span inside ``Q^ambient_dim``, kept in reduced row echelon form.

    Two subspaces are equal iff their stored bases are equal, since the
    reduced echelon basis is canonical.
    """

    __slots__ = ("ambient_dim", "basis", "pivots")

    def __init__(self, ambient_dim: int, vectors: Iterable[Mapping] = ()):
        self.ambient_dim = ambient_dim
        vecs = list(vectors)
        for v in vecs:
            for k in v:
                if not 0 <= k < ambient_dim:
                    raise IndexError(f"coordinate {k} outside ambient dimension {ambient_dim}")
        pairs = rref_rows(vecs)
        self.pivots = tuple(c for c, _ in pairs)
        self.basis = tuple(r for _, r in pairs)

    @classmethod
    def _from_rref(cls, ambient_dim: int, pairs: list[tuple[int, dict]]) -> "Subspace":
        s = cls.__new__(cls)
        s.ambient_dim = ambient_dim
        s.pivots = tuple(c for c, _ in pairs)
        s.basis = tuple(r for _, r in pairs)
        return s

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls._from_rref(ambient_dim, [])

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls._from_rref(ambient_dim, [(i, {i: Fraction(1)}) for i in range(ambient_dim)])

    @classmethod
    def coordinate(cls, ambient_dim: int, indices: Iterable[int]) -> "Subspace":
        """Span of the standard basis vectors at ``indices``."""
        idx = sorted(set(indices))
        return cls._from_rref(ambient_dim, [(i, {i: Fraction(1)}) for i in idx])

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self) -> int:
        return len(self.basis)

    def __eq__(self, other) -> bool:
        return isinstance(other, Subspace) and self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient_dim, self.pivots))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"

    def _check(self, other: "Subspace") -> None:
        if self.ambient_dim != other.ambient_dim:
            raise AmbientMismatchError(f"ambient dimensions differ: {self.ambient_dim} vs {other.ambient_dim}")

    def matrix(self) -> SparseMat:
        """Basis vectors as the columns of a matrix."""
        return SparseMat.from_columns(self.ambient_dim, self.basis)

    def reduce(self, v: Mapping) -> dict:
        """Remainder of ``v`` after clearing the pivot coordinates."""
        r = {k: as_rat(x) for k, x in v.items() if x}
        for c, b in zip(self.pivots, self.basis):
            x = r.get(c)
            if x:
                vec_iadd(r, b, -x)
        return r

    def contains(self, v: Mapping) -> bool:
        return not self.reduce(v)

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def coordinates(self, v: Mapping) -> list[Fraction] | None:
        """Coefficients of ``v`` in the stored basis, or ``None`` if outside."""
        if self.reduce(v):
            return None
        return [as_rat(v.get(c, 0)) for c in self.pivots]

    def is_subspace_of(self, other: "Subspace") -> bool:
        self._check(other)
        return all(other.contains(b) for b in self.basis)

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace(self.ambient_dim, list(self.basis) + list(other.basis))

    def intersection(self, other: "Subspace") -> "Subspace":
        self._check(other)
        if not self.dim or not other.dim:
            return Subspace.zero(self.ambient_dim)
        # x in both spans <=> sum_i x_i a_i - sum_j y_j b_j = 0
        cols = list(self.basis) + [vec_scale(b, -1) for b in other.basis]
        k = kernel_basis(SparseMat.from_columns(self.ambient_dim, cols))
        out = []
        na = self.dim
        for z in k.basis:
            v: dict = {}
            for i, x in z.items():
                if i < na:
                    vec_iadd(v, self.basis[i], x)
            out.append(v)
        return Subspace(self.ambient_dim, out)

    def __and__(self, other: "Subspace") -> "Subspace":
        return self.intersection(other)

    def quotient_dim(self, sub: "Subspace") -> int:
        """``dim(self / (self ∩ sub))``; equals ``dim self - dim sub`` when sub ⊆ self."""
        self._check(sub)
        return (self + sub).dim - sub.dim

    def image(self, m: SparseMat) -> "Subspace":
        return Subspace(m.rows, [m.apply(b) for b in self.basis])

    def complement_in(self, big: "Subspace") -> "Subspace":
        """A subspace ``W`` of ``big`` with ``self ⊕ W = big`` (``self ⊆ big`` assumed)."""
        self._check(big)
        piv = dict(_echelon(self.basis))
        picked = []
        for b in big.basis:
            r = _primitive(b)
            while r:
                c = min(r)
                p = piv.get(c)
                if p is None:
                    piv[c] = r
                    picked.append(b)
                    break
                a, s = p[c], r[c]
                new = {k: a * x for k, x in r.items()}
                for k, x in p.items():
                    y = new.get(k, 0) - s * x
                    if y:
                        new[k] = y
                    else:
                        new.pop(k, None)
                r = _normalize_int(new)
        return Subspace(self.ambient_dim, picked)


def kernel_basis(m: SparseMat) -> Subspace:
    """Right kernel of ``m`` as a canonical subspace of ``Q^cols``."""
    if m.is_zero():
        return Subspace.full(m.cols)
    pairs = rref_rows(m.row_dicts())
    pivset = {c for c, _ in pairs}
    free = [j for j in range(m.cols) if j not in pivset]
    # column f of the reduced matrix, read off per pivot row
    by_col: dict[int, list[tuple[int, Fraction]]] = {}
    for c, r in pairs:
        for k, x in r.items():
            if k != c:
                by_col.setdefault(k, []).append((c, x))
    vecs = []
    for f in free:
        v = {f: Fraction(1)}
        for c, x in by_col.get(f, ()):
            v[c] = -x
        vecs.append(v)
    return Subspace(m.cols, vecs)


def image_basis(m: SparseMat) -> Subspace:
    """Column space of ``m`` as a canonical subspace of ``Q^rows``."""
    return Subspace(m.rows, m.columns())


def solve(m: SparseMat, b: Mapping) -> dict | None:
    """One exact solution ``x`` of ``m x = b`` (free variables set to zero), or ``None``."""
    rows = m.row_dicts()
    aug_col = m.cols
    for i, x in b.items():
        if x:
            rows[i][aug_col] = as_rat(x)
    pairs = rref_rows(rows)
    x: dict = {}
    for c, r in pairs:
        if c == aug_col:
            return None
        val = r.get(aug_col)
        if val:
            x[c] = val
    return x


def inverse(m: SparseMat) -> SparseMat:
    """Exact inverse of a square matrix; raises ``ValueError`` if singular."""
    n = m.rows
    if m.cols != n:
        raise ValueError("inverse of a non-square matrix")
    rows = m.row_dicts()
    for i in range(n):
        rows[i][n + i] = Fraction(1)
    pairs = rref_rows(rows)
    if len(pairs) != n or any(c != i for i, (c, _) in enumerate(pairs)):
        raise ValueError("singular matrix")
    entries = {}
    for i, (_, r) in enumerate(pairs):
        for k, x in r.items():
            if k >= n:
                entries[(i, k - n)] = x
    return SparseMat.from_entries(n, n, entries)


def determinant(m: SparseMat) -> Fraction:
    """Exact determinant via rational Gaussian elimination (small matrices)."""
    n = m.rows
    if m.cols != n:
        raise ValueError("determinant of a non-square matrix")
    a = m.to_dense()
    det = Fraction(1)
    for col in range(n):
        p = next((r for r in range(col, n) if a[r][col]), None)
        if p is None:
            return Fraction(0)
        if p != col:
            a[col], a[p] = a[p], a[col]
            det = -det
        det *= a[col][col]
        inv = 1 / a[col][col]
        for r in range(col + 1, n):
            f = a[r][col] * inv
            if f:
                for k in range(col, n):
                    a[r][k] -= f * a[col][k]
    return det
