from itertools import product
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lqt.algebras import get_algebra, matrix_lie_algebra
from lqt.builders import chevalley_eilenberg, word_weight
from lqt.exact_linear import SparseMat, Subspace
from lqt.rep_theory import (CEModule, Partition, SpechtModule, TensorSpechtSpace, WeightLabel, adjacent_transposition,
                            compose, hook_length_count, invert, partitions, sigma_invariants, standard_tableaux,
                            weight_labels)
from oracles import SIGMA3_CHARACTERS

P = lambda *parts: Partition(tuple(parts))
E = P()


def _trace(m: SparseMat):
    return sum(m.column(i).get(i, 0) for i in range(m.cols))


# tableaux and Specht modules


def test_tableau_counts():
    assert len(standard_tableaux(P(1, 1, 1, 1))) == 1
    assert len(standard_tableaux(P(2, 1))) == 2
    assert len(standard_tableaux(P(2, 2))) == 2
    for m in range(1, 7):
        for lam in partitions(m):
            assert len(standard_tableaux(lam)) == hook_length_count(lam)
    assert sum(hook_length_count(l) ** 2 for l in partitions(5)) == 120


def test_trivial_and_sign_representations():
    for m in range(2, 5):
        for i in range(m - 1):
            s = adjacent_transposition(m, i)
            assert SpechtModule(P(m)).matrix(s) == SparseMat.identity(1)
            assert SpechtModule(Partition((1,) * m)).matrix(s) == SparseMat.identity(1).scale(-1)


def test_sigma3_characters():
    classes = [(0, 1, 2), (1, 0, 2), (1, 2, 0)]
    for shape, chars in SIGMA3_CHARACTERS.items():
        sp = SpechtModule(Partition(shape))
        assert tuple(_trace(sp.matrix(c)) for c in classes) == chars
        assert tuple(_trace(sp.dual_matrix(c)) for c in classes) == chars


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_coxeter_relations(m):
    for lam in partitions(m):
        sp = SpechtModule(lam)
        assert sp.check_coxeter() and sp.check_coxeter(dual=True)


@st.composite
def perm_pairs(draw):
    m = draw(st.integers(1, 5))
    s = tuple(draw(st.permutations(range(m))))
    t = tuple(draw(st.permutations(range(m))))
    lam = draw(st.sampled_from(partitions(m)))
    return lam, s, t


@given(perm_pairs())
@settings(max_examples=60, deadline=None)
def test_specht_is_a_representation(data):
    lam, s, t = data
    sp = SpechtModule(lam)
    assert sp.matrix(compose(s, t)) == sp.matrix(s) @ sp.matrix(t)
    assert sp.dual_matrix(compose(s, t)) == sp.dual_matrix(s) @ sp.dual_matrix(t)
    assert sp.matrix(s) @ sp.matrix(invert(s)) == SparseMat.identity(sp.dim)


# averaging projector


def test_projector_examples():
    words = [(a,) for a in range(3)]
    one = TensorSpechtSpace(1, words, lambda c: 1, P(1), P(1))
    assert sigma_invariants(one).dim == 3
    # two odd bar letters from a 2-dim algebra, trivial Specht factors
    two = TensorSpechtSpace(2, list(product(range(2), repeat=2)), lambda c: 1, P(2), P(2))
    e = two.projector()
    assert e @ e == e
    inv = sigma_invariants(two)
    assert inv.dim == 1
    # the swap acts by −flip on odd letters, so the invariants are antisymmetric tensors
    assert inv.contains({two.index[((), (0, 1), 0, 0)]: 1, two.index[((), (1, 0), 0, 0)]: -1})
    assert not inv.contains({two.index[((), (0, 0), 0, 0)]: 1})


# weights and highest weights


def test_action_examples():
    mod = CEModule(matrix_lie_algebra(get_algebra("k"), 2), 2)
    g = mod.g
    e12 = (g.index(0, 1, 0),)
    assert mod.act_word(0, 0, e12) == {e12: 1}
    assert mod.act_word(1, 1, e12) == {e12: -1}
    assert mod.act_word(0, 1, e12) == {}
    for p in range(3):
        ident = mod.action(0, 0, p) + mod.action(1, 1, p)
        assert ident.is_zero()


def test_weight_space_examples():
    mod = CEModule(matrix_lie_algebra(get_algebra("k"), 2), 3)
    g = mod.g
    assert mod.weight_space(1, (0, 0)) == Subspace.coordinate(4, [g.index(0, 0, 0), g.index(1, 1, 0)])
    assert mod.weight_space(1, (1, -1)) == Subspace.coordinate(4, [g.index(0, 1, 0)])
    for p in range(4):
        weights = {word_weight(g, w) for w in mod.basis(p)}
        assert sum(mod.weight_space(p, mu).dim for mu in weights) == comb(4, p)


def test_highest_weight_examples():
    for n in (2, 3):
        mod = CEModule(matrix_lie_algebra(get_algebra("zero2"), n), 2)
        g = mod.g
        m0 = mod.highest_weight_space(1, WeightLabel(E, E, n))
        assert m0.dim == 2          # scalar matrices ⊗ A
        m1 = mod.highest_weight_space(1, WeightLabel(P(1), P(1), n))
        assert m1 == Subspace.coordinate(g.dim, [g.index(0, n - 1, s) for s in range(2)])
        assert mod.highest_weight_space(1, WeightLabel(P(2), P(2), n)).dim == 0


def test_closure_examples():
    mod = CEModule(matrix_lie_algebra(get_algebra("k"), 2), 1)
    g = mod.g
    scalar = Subspace(4, [{g.index(0, 0, 0): 1, g.index(1, 1, 0): 1}])
    assert mod.module_closure(scalar, 1) == scalar
    sl2 = mod.module_closure(Subspace(4, [{g.index(0, 1, 0): 1}]), 1)
    assert sl2.dim == 3 and not sl2.contains({g.index(0, 0, 0): 1, g.index(1, 1, 0): 1})
    assert mod.module_closure(Subspace.zero(4), 1).dim == 0


def test_decomposition_examples():
    mod = CEModule(matrix_lie_algebra(get_algebra("k"), 2), 3)
    assert [v.dim for _, v in mod.isotypic_decomposition(1)] == [1, 3]
    z = CEModule(matrix_lie_algebra(get_algebra("zero2"), 2), 1)
    assert [v.dim for _, v in z.isotypic_decomposition(1)] == [2, 6]
    tot = [sum(v.dim for _, v in mod.isotypic_decomposition(p)) for p in range(4)]
    assert tot == [1, 4, 6, 4]


@pytest.mark.parametrize("name,n,pmax", [("k", 3, 3), ("uv", 2, 3), ("zero1", 3, 2)])
def test_boundary_is_equivariant(name, n, pmax):
    g = matrix_lie_algebra(get_algebra(name), n)
    mod = CEModule(g, pmax, chevalley_eilenberg(g, pmax))
    d = mod.complex.d
    for p in range(1, pmax + 1):
        for i, j in mod.generators():
            assert mod.action(i, j, p - 1) @ d(p) == d(p) @ mod.action(i, j, p)


def test_labels_with_m_above_p_have_no_highest_weights():
    mod = CEModule(matrix_lie_algebra(get_algebra("uv"), 2), 2)
    for p in range(3):
        for lbl in weight_labels(2, 3):
            if lbl.m > p:
                assert mod.highest_weight_space(p, lbl).dim == 0


def test_weight_label_validation():
    with pytest.raises(ValueError):
        WeightLabel(P(1, 1), P(1), 2)
    assert WeightLabel(P(2, 1), P(3), 3).vector == (2, 1, -3)
