"""Verification sweeps and their reports.

Every entry point returns a list of :class:`~lqt.reports.Check`; the CLI wraps
them with :func:`~lqt.reports.make_report`.  Sweep cells are independent and
may run on a process pool; results are merged by cell key so the report does
not depend on scheduling.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import comb
from typing import Callable, Sequence

from .algebras import (ProAlgebra, StructAlgebra, check_associativity, constant_pro_algebra, get_algebra,
                       matrix_lie_algebra, powers_pro_algebra)
from .builders import (InducedMapError, canonical_cyclic, chevalley_eilenberg,
                       connes_complex, homology_data, induced_homology_map, word_weight)
from .complexes import (ChainComplex, homology_dims, sorted_wedge, symmetric_algebra_dims_series)
from .exact_linear import SparseMat, Subspace, determinant, image_basis, kernel_basis, rank, solve, vec_iadd
from .lqt_maps import (LqtTarget, Phi, PsiPrime, chain_map_witness, duality_check, phi_stability, psi_defect_witness)
from .rep_theory import CEModule, DecompositionError, Partition, WeightLabel, weight_labels
from .reports import Check


class ConfigError(ValueError):
    pass


@dataclass
class SweepConfig:
    algebras: list = field(default_factory=lambda: ["k"])
    n_range: list = field(default_factory=lambda: [1, 2])
    p_max: int = 2
    labels: list | None = None      # [(alpha, beta), ...]; None means every label with m <= p_max
    seeds: list = field(default_factory=lambda: [0])
    window: int = 3
    r: int = 1
    pro: str | None = None          # "powers:NAME" or "constant:NAME"
    jobs: int = 1

    def __post_init__(self):
        if not self.algebras:
            raise ConfigError("no algebras given")
        if not self.n_range or any(int(n) < 1 for n in self.n_range):
            raise ConfigError("n values must be positive")
        if self.p_max < 0 or self.r < 0 or self.window < 1 or self.jobs < 1:
            raise ConfigError("p_max, r must be >= 0; window, jobs must be >= 1")
        algs = []
        for a in self.algebras:
            a = get_algebra(a) if isinstance(a, str) else a
            chk = check_associativity(a)
            if not chk.ok:
                raise ConfigError(f"algebra {a.name} is not associative: {chk.witness}")
            algs.append(a)
        self.algebras = algs

    @classmethod
    def from_json(cls, data: dict) -> "SweepConfig":
        known = {"algebras", "algebra", "n", "n_range", "p_max", "labels", "seeds", "window", "r", "pro", "jobs"}
        extra = set(data) - known
        if extra:
            raise ConfigError(f"unknown config keys: {sorted(extra)}")
        kw = {}
        algs = data.get("algebras", data.get("algebra"))
        if algs is not None:
            algs = algs if isinstance(algs, list) else [algs]
            kw["algebras"] = [StructAlgebra.from_json(x, name=x.get("name", "custom")) if isinstance(x, dict) else x
                              for x in algs]
        n = data.get("n_range", data.get("n"))
        if n is not None:
            kw["n_range"] = [int(x) for x in (n if isinstance(n, list) else [n])]
        for key in ("p_max", "window", "r", "jobs"):
            if key in data:
                kw[key] = int(data[key])
        if data.get("labels") is not None:
            kw["labels"] = [(Partition(tuple(a)), Partition(tuple(b))) for a, b in data["labels"]]
        if "seeds" in data:
            kw["seeds"] = [int(s) for s in data["seeds"]]
        if data.get("pro") is not None:
            kw["pro"] = str(data["pro"])
        return cls(**kw)

    def to_json(self) -> dict:
        return {
            "algebras": [a.name for a in self.algebras],
            "n_range": list(self.n_range),
            "p_max": self.p_max,
            "labels": None if self.labels is None else [[list(a.parts), list(b.parts)] for a, b in self.labels],
            "seeds": list(self.seeds),
            "window": self.window,
            "r": self.r,
            "pro": self.pro,
        }

    def labels_for(self, n: int, mmax: int) -> list[WeightLabel]:
        if self.labels is None:
            return weight_labels(n, mmax)
        out = []
        for a, b in self.labels:
            if a.m == b.m and a.m <= mmax and a.length + b.length <= n:
                out.append(WeightLabel(a, b, n))
        return out


def resolve_jobs(jobs: int | None) -> int:
    if jobs:
        return jobs
    env = os.environ.get("LQT_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(f"LQT_JOBS must be an integer, got {env!r}")
    return 1


def run_cells(fn: Callable, cells: Sequence[tuple], jobs: int = 1) -> list:
    """Run ``fn(*cell)`` for every cell; results come back in cell order."""
    if jobs <= 1 or len(cells) <= 1:
        return [fn(*c) for c in cells]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        futs = [ex.submit(fn, *c) for c in cells]
        return [f.result() for f in futs]


def _merge(name: str, cells: Sequence[tuple], results: Sequence[Check], keyf: Callable) -> Check:
    """Fold per-cell checks into one; the first failing cell (by key) is the witness."""
    rows = sorted(zip(cells, results), key=lambda cr: keyf(cr[0]))
    data = {keyf(c): r.data for c, r in rows}
    for c, r in rows:
        if not r.ok:
            return Check(name, False, witness={"cell": keyf(c), "witness": r.witness}, data=data)
    return Check(name, True, data=data)


def _pmax(cfg: SweepConfig, a: StructAlgebra, n: int) -> int:
    return cfg.p_max


# ---------------------------------------------------------------------------
# φ and ψ′ cells


def _phi_cell(a: StructAlgebra, n: int, pmax: int, labels: list[WeightLabel]) -> Check:
    src = None
    data = {}
    for lbl in labels:
        ph = Phi(a, n, lbl.alpha, lbl.beta, pmax, source=src)
        src = ph.source
        chk = ph.check_chain_map()
        data[str(lbl)] = {"target_dims": ph.target.complex.space.dims(0, pmax)}
        if not chk.ok:
            return Check("phi-chainmap", False, witness={"label": str(lbl), **chk.witness}, data=data)
        proj_ok = all(ph.target.projector(p) @ ph.matrix(p) == ph.matrix(p) for p in range(pmax + 1))
        data[str(lbl)]["lands_in_invariants"] = proj_ok
        if not proj_ok:
            return Check("phi-chainmap", False, witness={"label": str(lbl), "reason": "image not Σ_m-invariant"},
                         data=data)
    return Check("phi-chainmap", True, data=data)


def _phi_iso_cell(a: StructAlgebra, n: int, pmax: int, labels: list[WeightLabel]) -> Check:
    src = None
    mod = None
    data = {}
    for lbl in labels:
        ph = Phi(a, n, lbl.alpha, lbl.beta, pmax, source=src)
        src = ph.source
        mod = mod or CEModule(ph.data.g, pmax, src)
        rows = {}
        for p in range(pmax + 1):
            m = mod.highest_weight_space(p, lbl)
            dim_r = rank(ph.target.projector(p))
            rk = rank(ph.matrix(p) @ m.matrix()) if m.dim else 0
            bound = n >= p + lbl.alpha.length + lbl.beta.length - lbl.m
            rows[p] = {"dim_M": m.dim, "rank_phi": rk, "dim_R": dim_r, "bound": bound}
            if rk != m.dim:
                return Check("phi-iso", False, witness={"label": str(lbl), "degree": p, "reason": "not injective",
                                                        **rows[p]}, data=data)
            if bound and m.dim != dim_r:
                return Check("phi-iso", False, witness={"label": str(lbl), "degree": p, "reason": "dims differ",
                                                        **rows[p]}, data=data)
        data[str(lbl)] = rows
    return Check("phi-iso", True, data=data)


def _psi_image_cell(a: StructAlgebra, n: int, pmax: int, labels: list[WeightLabel]) -> Check:
    src = None
    mod = None
    data = {}
    for lbl in labels:
        psi = PsiPrime(a, n, lbl.alpha, lbl.beta, pmax, source=src)
        src = psi.ce
        mod = mod or CEModule(psi.data.g, pmax, src)
        rows = {}
        for p in range(pmax + 1):
            m = mod.highest_weight_space(p, lbl)
            img = psi.image(p)
            inv = rank(psi.target.projector(p, dual=False))
            # ψ′ through the coinvariants: injective exactly when rank equals dim of invariants
            rows[p] = {"dim_M": m.dim, "dim_image": img.dim, "dim_coinvariants": inv,
                       "injective_on_coinvariants": img.dim == inv, "chain_map": chain_map_witness(psi, p) is None
                       if p >= 1 else True}
            if img != m:
                return Check("psi-image", False, witness={"label": str(lbl), "degree": p, **rows[p]}, data=data)
        data[str(lbl)] = rows
    return Check("psi-image", True, data=data)


def _duality_cell(a: StructAlgebra, n: int, pmax: int, labels: list[WeightLabel]) -> Check:
    data = {}
    for lbl in labels:
        checks = duality_check(n, a, lbl.alpha, lbl.beta, pmax)
        data[str(lbl)] = {c.name: c.verdict for c in checks}
        for c in checks:
            if not c.ok:
                return Check("duality", False, witness={"label": str(lbl), "diagram": c.name, **c.witness},
                             data=data)
    return Check("duality", True, data=data)


def _cells(cfg: SweepConfig) -> list[tuple]:
    cells = []
    for a in cfg.algebras:
        for n in cfg.n_range:
            pm = _pmax(cfg, a, n)
            labels = cfg.labels_for(n, pm)
            if labels:
                cells.append((a, n, pm, labels))
    return cells


def _key(cell: tuple) -> str:
    return f"{cell[0].name}/n={cell[1]}"


def verify_phi_chainmap(cfg: SweepConfig) -> list[Check]:
    cells = _cells(cfg)
    return [_merge("phi-chainmap", cells, run_cells(_phi_cell, cells, cfg.jobs), _key)]


def verify_phi_iso(cfg: SweepConfig) -> list[Check]:
    cells = _cells(cfg)
    return [_merge("phi-iso", cells, run_cells(_phi_iso_cell, cells, cfg.jobs), _key)]


def verify_psi_not_chainmap(cfg: SweepConfig) -> list[Check]:
    """The failure of ``ψ′`` to be a chain map, and ``im ψ′ = M`` on the sweep."""
    out = [psi_defect_witness(a) for a in cfg.algebras if a.dim >= 2 and not a.is_zero_multiplication]
    if not out:
        out = [Check("psi-not-chainmap", False, witness={"reason": "needs a 2-dim algebra with nonzero product"})]
    cells = _cells(cfg)
    out.append(_merge("psi-image", cells, run_cells(_psi_image_cell, cells, cfg.jobs), _key))
    return out


def verify_duality(cfg: SweepConfig) -> list[Check]:
    cells = [c for c in _cells(cfg) if c[0].is_zero_multiplication]
    if len(cells) != len(_cells(cfg)):
        skipped = sorted({c[0].name for c in _cells(cfg) if not c[0].is_zero_multiplication})
        return [Check("duality", False, witness={"reason": "coefficient spaces must have zero multiplication",
                                                 "algebras": skipped})]
    return [_merge("duality", cells, run_cells(_duality_cell, cells, cfg.jobs), _key)]


def verify_stability(cfg: SweepConfig) -> list[Check]:
    cells = [(a, n, _pmax(cfg, a, n + 1)) for a in cfg.algebras for n in cfg.n_range]
    return [_merge("stability", cells, run_cells(phi_stability, cells, cfg.jobs), _key)]


# ---------------------------------------------------------------------------
# highest-weight lemmas


def _lemma21_cell(a: StructAlgebra, n: int, pmax: int, labels) -> Check:
    g = matrix_lie_algebra(a, n)
    cx = chevalley_eilenberg(g, pmax)
    mod = CEModule(g, pmax, cx)
    data = {}
    e = WeightLabel(Partition(()), Partition(()), n)
    for p in range(pmax + 1):
        try:
            dec = mod.isotypic_decomposition(p)
        except DecompositionError as err:
            return Check("lemma21", False, witness={"degree": p, "error": str(err)}, data=data)
        dims = {str(lbl): s.dim for lbl, s in dec}
        total = sum(dims.values())
        data[p] = {"dims": dims, "total": total, "expected": comb(g.dim, p)}
        if total != comb(g.dim, p):
            return Check("lemma21", False, witness={"degree": p, "reason": "dims do not sum"}, data=data)
        # ∂-stability of each isotypic summand
        if p >= 1:
            lower = dict((str(l), s) for l, s in mod.isotypic_decomposition(p - 1))
            for lbl, s in dec:
                tgt = lower.get(str(lbl), Subspace.zero(cx.dim(p - 1)))
                for v in s.basis:
                    if not tgt.contains(cx.d(p).apply(v)):
                        return Check("lemma21", False, witness={"degree": p, "label": str(lbl), "vector": v,
                                                                "reason": "boundary leaves the isotype"}, data=data)
        # (ii): the trivial isotype is its own highest-weight space
        m0 = mod.highest_weight_space(p, e)
        if mod.module_closure(m0, p) != m0:
            return Check("lemma21", False, witness={"degree": p, "reason": "closure of M_[∅,∅] grew"}, data=data)
    return Check("lemma21", True, data=data)


def _lemma22_cell(a: StructAlgebra, n: int, pmax: int, labels) -> Check:
    g = matrix_lie_algebra(a, n)
    cx = chevalley_eilenberg(g, pmax + 1)
    mod = CEModule(g, pmax + 1, cx)
    data = {}
    for p in range(pmax + 1):
        for lbl in weight_labels(n, p):
            v_p = mod.isotype(p, lbl)
            v_up = mod.module_closure(mod.highest_weight_space(p + 1, lbl), p + 1)
            cycles = v_p & kernel_basis(cx.d(p)) if p >= 1 else v_p
            bounds = Subspace(cx.dim(p), [cx.d(p + 1).apply(x) for x in v_up.basis])
            m_p = mod.highest_weight_space(p, lbl)
            m_cyc = m_p & kernel_basis(cx.d(p)) if p >= 1 else m_p
            closure = mod.module_closure(m_cyc, p)
            got = closure + bounds
            h_iso = cycles.dim - bounds.dim
            data[f"{lbl}/p={p}"] = {"H_isotype": h_iso, "closure_plus_boundaries": got.dim - bounds.dim}
            if got != cycles:
                return Check("lemma22", False, witness={"label": str(lbl), "degree": p,
                                                        "cycles": cycles.dim, "generated": got.dim}, data=data)
    return Check("lemma22", True, data=data)


def _lemma23_cell(a: StructAlgebra, n: int, pmax: int, labels: list[WeightLabel]) -> Check:
    if not a.is_zero_multiplication:
        return Check("lemma23", False, witness={"reason": f"{a.name} has nonzero multiplication"})
    g = matrix_lie_algebra(a, n)
    gd = matrix_lie_algebra(a.dual_space(), n)
    mod, modd = CEModule(g, pmax), CEModule(gd, pmax)
    data = {}
    for lbl in labels:
        for p in range(pmax + 1):
            m, md = mod.highest_weight_space(p, lbl), modd.highest_weight_space(p, lbl)
            # ν pairs matching wedge words of Λgl_nV and Λgl_nV^∨ with value 1
            gram = m.matrix().T @ md.matrix()
            det = determinant(gram) if m.dim == md.dim and m.dim else (1 if m.dim == md.dim else 0)
            data[f"{lbl}/p={p}"] = {"dim": m.dim, "dim_dual": md.dim, "det": det}
            if m.dim != md.dim or det == 0:
                return Check("lemma23", False, witness={"label": str(lbl), "degree": p, "det": det}, data=data)
    return Check("lemma23", True, data=data)


def verify_lemma_sweep(which: str, cfg: SweepConfig) -> list[Check]:
    fn = {"lemma21": _lemma21_cell, "lemma22": _lemma22_cell, "lemma23": _lemma23_cell}[which]
    cells = _cells(cfg)
    if which == "lemma23":
        cells = [c for c in cells if c[0].is_zero_multiplication]
        if not cells:
            return [Check("lemma23", False, witness={"reason": "no zero-multiplication space in the config"})]
    res = run_cells(fn, cells, cfg.jobs)
    out = _merge(which, cells, res, _key)
    if which == "lemma22":
        out.data["reading"] = "closure under U(gl_n k)"
    return [out]


# ---------------------------------------------------------------------------
# H(gl_n A) against Λ(HC(A)[-1])


def unit_element(a: StructAlgebra) -> dict | None:
    """A two-sided unit of ``a`` if there is one."""
    cols = []
    for s in range(a.dim):
        col = {}
        for b in range(a.dim):
            for t, c in a.basis_product(s, b).items():
                col[b * a.dim + t] = col.get(b * a.dim + t, 0) + c
            for t, c in a.basis_product(b, s).items():
                k = a.dim * a.dim + b * a.dim + t
                col[k] = col.get(k, 0) + c
        cols.append(col)
    m = SparseMat.from_columns(2 * a.dim * a.dim, cols)
    target = {}
    for b in range(a.dim):
        target[b * a.dim + b] = 1
        target[a.dim * a.dim + b * a.dim + b] = 1
    if a.dim == 0:
        return {}
    return solve(m, target)


def _weight_zero_words(g, pmax: int) -> dict[int, list]:
    from itertools import combinations
    zero = (0,) * g.n
    return {p: [w for w in combinations(range(g.dim), p) if word_weight(g, w) == zero] for p in range(pmax + 1)}


def _target_homology(a: StructAlgebra, r: int) -> tuple[LqtTarget, Subspace, Subspace]:
    e = Partition(())
    tgt = LqtTarget(a, e, e, r + 1)
    reps, bounds = homology_data(tgt.complex, r)
    return tgt, reps, bounds


def _nontrivial_part(mod: CEModule, p: int) -> Subspace:
    """Sum of the nontrivial isotypes in degree ``p``: the span of all ``e_ij·C_p``."""
    vecs = []
    for i, j in mod.generators():
        act = mod.action(i, j, p)
        vecs.extend(act.column(c) for c in range(act.cols) if act.column(c))
    return Subspace(mod.dim(p), vecs)


def _invariant_part(mod: CEModule, p: int) -> Subspace:
    s = Subspace.full(mod.dim(p))
    for i, j in mod.generators():
        s = s & kernel_basis(mod.action(i, j, p))
    return s


def _split_homology(cx: ChainComplex, sub_p: Subspace, sub_up: Subspace, p: int) -> int:
    cyc = sub_p & kernel_basis(cx.d(p)) if p >= 1 else sub_p
    bd = Subspace(cx.dim(p), [cx.d(p + 1).apply(v) for v in sub_up.basis])
    return cyc.dim - bd.dim


def verify_lqt_level(a: StructAlgebra, r: int, n: int, blocked: bool | None = None) -> Check:
    """``φ^n_r: H_r(gl_n A) → Λ(HC(A)[-1])_r`` with the trivial/nontrivial bookkeeping.

    ``blocked`` restricts the CE complex to ``gl_n k``-weight zero, which is
    exact for unital ``A`` (the action on homology is then trivial).  The
    default is to block when ``A`` has a unit and ``n ≥ 5``.
    """
    if n < 1:
        raise ConfigError("n must be positive")
    unital = unit_element(a) is not None
    if blocked is None:
        blocked = unital and n >= 5
    if blocked and not unital:
        raise ConfigError("weight blocking needs a unital algebra")
    g = matrix_lie_algebra(a, n)
    words = _weight_zero_words(g, r + 1) if blocked else None
    cx = chevalley_eilenberg(g, r + 1, words=words)
    tgt, treps, tbounds = _target_homology(a, r)
    e = Partition(())
    ph = Phi(a, n, e, e, r, target=tgt, source=cx)
    reps, bounds = homology_data(cx, r)
    f = ph.matrix(r)
    try:
        hmap = induced_homology_map(f, reps, treps, tbounds)
    except InducedMapError as err:
        return Check("lqt-level", False, witness={"reason": str(err)})
    rk = rank(hmap)
    h_dim, t_dim = reps.dim, treps.dim

    # trivial / nontrivial split of the complex in degrees r, r+1
    if blocked:
        triv = {}
        for p in (r, r + 1):
            s = Subspace.full(cx.dim(p))
            for i in range(n - 1):
                s = s & kernel_basis(_raising_block(g, cx, p, i))
            triv[p] = s
        h_triv = _split_homology(cx, triv[r], triv[r + 1], r)
        h_non = h_dim - h_triv
        nontrivial_source = "weight-zero complement"
    else:
        mod = CEModule(g, r + 1, cx)
        triv = {p: _invariant_part(mod, p) for p in (r, r + 1)}
        non = {p: _nontrivial_part(mod, p) for p in (r, r + 1)}
        h_triv = _split_homology(cx, triv[r], triv[r + 1], r)
        h_non = _split_homology(cx, non[r], non[r + 1], r)
        nontrivial_source = "span of e_ij·C"
        # θ kills the nontrivial part on chains
        for v in non[r].basis:
            if f.apply(v):
                return Check("lqt-level", False, witness={"reason": "φ is nonzero on a nontrivial isotype",
                                                          "vector": v})
    hc = homology_dims(connes_complex(a, r), range(r)) if r >= 1 else {}
    series = symmetric_algebra_dims_series({q + 1: d for q, d in hc.items()}, r)
    kernel = h_dim - rk
    data = {
        "algebra": a.name, "n": n, "r": r, "blocked": blocked, "unital": unital,
        "dim_H": h_dim, "dim_target": t_dim, "target_from_HC": series[r] if r < len(series) else None,
        "rank_phi": rk, "kernel": kernel, "H_trivial": h_triv, "H_nontrivial": h_non,
        "nontrivial_from": nontrivial_source,
        "surjective": rk == t_dim, "isomorphism": rk == t_dim == h_dim,
        "bound_2r+1": n >= 2 * r + 1,
    }
    ok = h_dim == h_triv + h_non and kernel == h_non and (series[r] == t_dim)
    if n > r:
        ok = ok and rk == t_dim
    if n >= 2 * r + 1 and unital:
        ok = ok and kernel == 0
    wit = None if ok else {k: data[k] for k in ("dim_H", "dim_target", "rank_phi", "kernel", "H_nontrivial")}
    return Check("lqt-level", ok, witness=wit, data=data)


def _raising_block(g, cx: ChainComplex, p: int, i: int) -> SparseMat:
    """``e_{i,i+1}`` from the weight-zero block to wherever it lands, in a local basis."""
    out_index: dict = {}
    cols = {}
    for j, w in enumerate(cx.basis(p)):
        img: dict = {}
        for t, x in enumerate(w):
            for y, c in _bracket_gen(g, i, i + 1, x).items():
                ww, s = sorted_wedge(w[:t] + (y,) + w[t + 1:])
                if ww is not None:
                    vec_iadd(img, {ww: s * c})
        col = {}
        for ww, c in img.items():
            if c:
                col[out_index.setdefault(ww, len(out_index))] = c
        if col:
            cols[j] = col
    return SparseMat(max(len(out_index), 1), cx.dim(p), cols)


def _bracket_gen(g, i: int, j: int, x: int) -> dict:
    # [e_ij, e_kl⊗a] = δ_jk e_il⊗a − δ_li e_kj⊗a
    k, l, s = g.unpack(x)
    out: dict = {}
    if j == k:
        vec_iadd(out, {g.index(i, l, s): 1})
    if l == i:
        vec_iadd(out, {g.index(k, j, s): -1})
    return out


def verify_lqt_sweep(cfg: SweepConfig) -> list[Check]:
    cells = [(a, cfg.r, n) for a in cfg.algebras for n in cfg.n_range]
    res = run_cells(verify_lqt_level, cells, cfg.jobs)
    return [_merge("lqt-level", cells, res, lambda c: f"{c[0].name}/r={c[1]}/n={c[2]}")]


# pro layer -----------------------------------------------------------------------


def _wedge_map(sigma: SparseMat, g_src, g_tgt, src: ChainComplex, tgt: ChainComplex, p: int) -> SparseMat:
    """``Λ^p gl_n(σ)``."""
    tidx = tgt.space.index_map(p)
    cols = {}
    for j, w in enumerate(src.basis(p)):
        terms = [((), 1)]
        for x in w:
            a, b, s = g_src.unpack(x)
            terms = [(t + (g_tgt.index(a, b, y),), c * v) for t, c in terms for y, v in sigma.column(s).items()]
        img: dict = {}
        for t, c in terms:
            ww, sg = sorted_wedge(t)
            if ww is not None:
                vec_iadd(img, {tidx[ww]: sg * c})
        if img:
            cols[j] = img
    return SparseMat(tgt.dim(p), src.dim(p), cols)


def _lambda_map(sigma: SparseMat, src: LqtTarget, tgt: LqtTarget, p: int) -> SparseMat:
    """``Λ(C^λ(σ)[-1])`` on ``(∅,∅)`` targets."""
    tidx = tgt.space.index_map(p)
    cols = {}
    for j, (mon, _, _, _) in enumerate(src.basis(p)):
        terms = [((), 1)]
        for cw in mon:
            img: dict = {}
            parts = [((), 1)]
            for x in cw:
                parts = [(t + (y,), c * v) for t, c in parts for y, v in sigma.column(x).items()]
            for t, c in parts:
                w, s = canonical_cyclic(t)
                if w is not None:
                    vec_iadd(img, {w: s * c})
            terms = [(t + (w,), c * v) for t, c in terms for w, v in img.items()]
        col: dict = {}
        for ws, c in terms:
            m, s = tgt.monomial(ws)
            if m is not None:
                vec_iadd(col, {tidx[(m, (), 0, 0)]: s * c})
        if col:
            cols[j] = col
    return SparseMat(tgt.dim(p), src.dim(p), cols)


def _restrict(t: SparseMat, src: Subspace, tgt: Subspace) -> SparseMat:
    """Matrix of ``t`` from ``src`` into ``tgt`` (coordinates in the echelon bases)."""
    cols = []
    for v in src.basis:
        co = tgt.coordinates(t.apply(v))
        if co is None:
            raise InducedMapError("map does not preserve the subspace")
        cols.append({i: c for i, c in enumerate(co) if c})
    return SparseMat.from_columns(tgt.dim, cols)


def _quotient_map(t: SparseMat, src_q: Subspace, tgt_q: Subspace, tgt_sub: Subspace) -> SparseMat:
    """``t`` on complements ``src_q → tgt_q`` modulo ``tgt_sub``."""
    basis = list(tgt_q.basis) + list(tgt_sub.basis)
    m = SparseMat.from_columns(tgt_q.ambient_dim, basis)
    cols = []
    for v in src_q.basis:
        x = solve(m, t.apply(v)) or {}
        cols.append({i: c for i, c in x.items() if i < tgt_q.dim})
    return SparseMat.from_columns(tgt_q.dim, cols)


def verify_lqt_pro(a: ProAlgebra, r: int, n: int | None = None) -> Check:
    """Pro-kernel and pro-cokernel of ``φ_r`` inside the window."""
    from .algebras import is_pro_zero
    if a.window < 2:
        raise ConfigError("window must be at least 2")
    n = n or 2 * r + 1
    e = Partition(())
    gs, cxs, tgts, hs, ts, phis = [], [], [], [], [], []
    for lv in a.levels:
        g = matrix_lie_algebra(lv, n)
        cx = chevalley_eilenberg(g, r + 1)
        tgt = LqtTarget(lv, e, e, r + 1)
        reps, bounds = homology_data(cx, r)
        treps, tbounds = homology_data(tgt.complex, r)
        ph = Phi(lv, n, e, e, r, target=tgt, source=cx)
        phis.append(induced_homology_map(ph.matrix(r), reps, treps, tbounds))
        gs.append(g)
        cxs.append(cx)
        tgts.append(tgt)
        hs.append((reps, bounds))
        ts.append((treps, tbounds))
    kers = [kernel_basis(f) for f in phis]
    ims = [image_basis(f) for f in phis]
    cok = [im.complement_in(Subspace.full(f.rows)) for im, f in zip(ims, phis)]
    kmaps, cmaps = [], []
    for j in range(2, a.window + 1):
        s = a.sigma(j)
        hs_map = induced_homology_map(_wedge_map(s, gs[j - 1], gs[j - 2], cxs[j - 1], cxs[j - 2], r),
                                      hs[j - 1][0], hs[j - 2][0], hs[j - 2][1])
        ht_map = induced_homology_map(_lambda_map(s, tgts[j - 1], tgts[j - 2], r),
                                      ts[j - 1][0], ts[j - 2][0], ts[j - 2][1])
        kmaps.append(_restrict(hs_map, kers[j - 1], kers[j - 2]))
        cmaps.append(_quotient_map(ht_map, cok[j - 1], cok[j - 2], ims[j - 2]))
    kdec = is_pro_zero([k.dim for k in kers], kmaps, a.window)
    cdec = is_pro_zero([c.dim for c in cok], cmaps, a.window)
    data = {
        "pro": a.name, "r": r, "n": n, "window": a.window,
        "dim_H": [h[0].dim for h in hs], "dim_target": [t[0].dim for t in ts],
        "kernel_dims": [k.dim for k in kers], "cokernel_dims": [c.dim for c in cok],
        "kernel": kdec.to_json(), "cokernel": cdec.to_json(),
    }
    ok = kdec.is_zero and cdec.is_zero
    wit = None if ok else {"kernel": kdec.verdict, "cokernel": cdec.verdict,
                           "undecided_levels": sorted(set(kdec.undecided) | set(cdec.undecided))}
    return Check("lqt-pro", ok, witness=wit, data=data)


def pro_from_spec(spec: str, window: int) -> ProAlgebra:
    kind, _, name = spec.partition(":")
    a = get_algebra(name)
    if kind == "powers":
        return powers_pro_algebra(a, window)
    if kind == "constant":
        return constant_pro_algebra(a, window)
    raise ConfigError(f"unknown pro-algebra kind {kind!r}; use powers:NAME or constant:NAME")


# ---------------------------------------------------------------------------
# dispatch


COMMANDS = ("phi-chainmap", "phi-iso", "psi-not-chainmap", "duality", "lemma21", "lemma22", "lemma23",
            "stability", "lqt", "lqt-pro")


def run_verification(command: str, cfg: SweepConfig, pro: ProAlgebra | None = None) -> tuple[list[Check], dict]:
    """Run one verification; returns the checks and per-check wall times."""
    t0 = time.perf_counter()
    if command == "phi-chainmap":
        checks = verify_phi_chainmap(cfg)
    elif command == "phi-iso":
        checks = verify_phi_iso(cfg)
    elif command == "psi-not-chainmap":
        checks = verify_psi_not_chainmap(cfg)
    elif command == "duality":
        checks = verify_duality(cfg)
    elif command in ("lemma21", "lemma22", "lemma23"):
        checks = verify_lemma_sweep(command, cfg)
    elif command == "stability":
        checks = verify_stability(cfg)
    elif command == "lqt":
        checks = verify_lqt_sweep(cfg)
    elif command == "lqt-pro":
        if pro is None:
            if cfg.pro is None:
                raise ConfigError("lqt-pro needs a 'pro' entry in the config")
            pro = pro_from_spec(cfg.pro, cfg.window)
        checks = [verify_lqt_pro(pro, cfg.r)]
    else:
        raise ConfigError(f"unknown verification {command!r}")
    return checks, {"seconds": round(time.perf_counter() - t0, 3)}
