import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lqt.algebras import (NOT_DECIDED, ZERO, AlgebraFormatError, ProAlgebra, StructAlgebra, WindowError,
                          check_associativity, constant_pro_algebra, corpus, get_algebra, is_homomorphism,
                          is_pro_zero, matrix_lie_algebra, powers_pro_algebra, pro_composite)
from lqt.exact_linear import SparseMat
from oracles import gl_bracket, mult_table


@pytest.mark.parametrize("name", sorted(corpus()))
def test_corpus_is_associative(name):
    assert check_associativity(get_algebra(name)).ok


def test_corrupted_structure_constant_fails():
    a = get_algebra("uv")
    bad = StructAlgebra(2, ["u", "v"], {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 1): {0: 1}}, name="bad")  # vv = u
    chk = check_associativity(bad)
    assert not chk.ok and chk.witness
    assert check_associativity(a).ok


def test_json_round_trip_and_errors():
    a = get_algebra("nil")
    b = StructAlgebra.from_json(json.loads(json.dumps(a.to_json())), name="nil")
    assert b.mult == a.mult and b.basis_names == a.basis_names
    with pytest.raises(AlgebraFormatError):
        StructAlgebra.from_json({"dim": 2, "mult": [[0, 0, 1]]})
    with pytest.raises(AlgebraFormatError):
        StructAlgebra.from_json({"mult": []})


def test_fractions_survive_json():
    a = StructAlgebra(1, ["x"], {(0, 0): {0: Fraction(2, 3)}}, name="q")
    assert StructAlgebra.from_json(a.to_json()).mult[(0, 0)][0] == Fraction(2, 3)


def test_bracket_examples():
    k = matrix_lie_algebra(get_algebra("k"), 2)
    e = lambda i, j: {k.index(i, j, 0): 1}
    assert k.bracket(e(0, 1), e(1, 0)) == {k.index(0, 0, 0): 1, k.index(1, 1, 0): -1}
    uv = matrix_lie_algebra(get_algebra("uv"), 1)
    assert uv.bracket({0: 1}, {1: 1}) == {1: 1}          # [u, v] = uv − vu = v
    z = matrix_lie_algebra(get_algebra("zero2"), 2)
    assert not z.bracket_table


@pytest.mark.parametrize("name,n", [("k", 2), ("uv", 2), ("nil", 2), ("uv", 1)])
def test_lie_identities_and_bracket_oracle(name, n):
    a = get_algebra(name)
    g = matrix_lie_algebra(a, n)
    assert g.check_lie_identities().ok
    tab = mult_table(a.dim, [(i, j, s, c) for (i, j), v in a.mult.items() for s, c in v.items()])
    for x in range(g.dim):
        for y in range(g.dim):
            want = {g.index(*z): c for z, c in gl_bracket(n, a.dim, tab, g.unpack(x), g.unpack(y)).items()}
            assert g.bracket({x: 1}, {y: 1}) == want


def test_homomorphism_check():
    a = get_algebra("nil")
    assert is_homomorphism(SparseMat.identity(2), a, a).ok
    swap = SparseMat.from_dense([[0, 1], [1, 0]])
    assert not is_homomorphism(swap, a, a).ok


def test_powers_pro_algebra_of_nil():
    p = powers_pro_algebra(get_algebra("nil"), 3)
    assert [lv.dim for lv in p.levels] == [2, 1, 0]
    assert p.check_homomorphisms().ok
    assert pro_composite(p, 1, 3).is_zero()
    assert pro_composite(p, 2, 2) == SparseMat.identity(1)
    with pytest.raises(WindowError):
        pro_composite(p, 2, 4)


def test_pro_json_round_trip():
    p = powers_pro_algebra(get_algebra("nil"), 3)
    q = ProAlgebra.from_json(json.loads(json.dumps(p.to_json())))
    assert [lv.dim for lv in q.levels] == [2, 1, 0]
    assert all(x == y for x, y in zip(p.maps, q.maps))
    with pytest.raises(AlgebraFormatError):
        ProAlgebra.from_json({"levels": [get_algebra("k").to_json()] * 2, "maps": [[[0, 0, "1"]], [[0, 0, "1"]]]})


def test_pro_zero_examples():
    assert is_pro_zero([0, 0, 0], [SparseMat(0, 0)] * 2).verdict == ZERO
    c = constant_pro_algebra(get_algebra("k"), 5)
    dec = is_pro_zero([1] * 5, c.maps)
    assert dec.verdict == NOT_DECIDED and dec.undecided == [1, 2, 3, 4, 5]
    n = powers_pro_algebra(get_algebra("nil"), 3)
    assert is_pro_zero([lv.dim for lv in n.levels], n.maps).verdict == ZERO


@given(st.lists(st.integers(0, 2), min_size=1, max_size=5))
def test_pro_zero_of_zero_maps(dims):
    # zero transition maps: every level dies one step later, except the last in the window
    maps = [SparseMat(dims[k], dims[k + 1]) for k in range(len(dims) - 1)]
    dec = is_pro_zero(dims, maps)
    for n in range(1, len(dims)):
        assert n in dec.m_of_n and dec.m_of_n[n] <= n + 1
    assert (dec.verdict == ZERO) == (dims[-1] == 0 or len(dims) == 0)
