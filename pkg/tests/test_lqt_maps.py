import pytest
from hypothesis import given
from hypothesis import strategies as st

from lqt.algebras import get_algebra
from lqt.builders import bar_complex, ce_boundary_word, chevalley_eilenberg
from lqt.exact_linear import vec_iadd
from lqt.lqt_maps import (LabelError, LqtData, Phi, PreconditionError, PsiPrime, chain_map_witness,
                          coproduct_word, duality_check, inclusion_matrix, phi_stability, psi_triple_defects,
                          psi_defect_witness, unshuffles)
from lqt.rep_theory import CEModule, Partition, WeightLabel

P = lambda *parts: Partition(tuple(parts))
E = P()


# θ¹


def test_theta1_examples():
    d = LqtData(get_algebra("zero2"), 1, E, E)
    assert d.theta1((0,)) == {(0,): 1}                        # trace of a 1×1 matrix
    assert d.theta1((0, 1)) == {(0, 1): 1}                    # (1/2)([a1⊗a2] − [a2⊗a1]) = [a1⊗a2]
    d2 = LqtData(get_algebra("k"), 2, E, E)
    g = d2.g
    assert d2.theta1((g.index(0, 1, 0),)) == {}              # off-diagonal trace
    assert d2.theta1((g.index(1, 1, 0),)) == {(0,): 1}


# Δ


def test_coproduct_examples():
    assert coproduct_word((5,)) == {((5,), ()): 1, ((), (5,)): 1}
    assert coproduct_word((1, 2)) == {((1, 2), ()): 1, ((1,), (2,)): 1, ((2,), (1,)): -1, ((), (1, 2)): 1}


def _iterate(word, first):
    """``(Δ⊗1)Δ`` when ``first`` else ``(1⊗Δ)Δ`` as a 3-fold coproduct."""
    out: dict = {}
    for (w1, w2), s in coproduct_word(word).items():
        inner = coproduct_word(w1 if first else w2)
        for (u, v), t in inner.items():
            key = (u, v, w2) if first else (w1, u, v)
            vec_iadd(out, {key: s * t})
    return out


@given(st.sets(st.integers(0, 9), max_size=5))
def test_coproduct_is_coassociative(letters):
    word = tuple(sorted(letters))
    three = coproduct_word(word, 3)
    assert _iterate(word, True) == three == _iterate(word, False)


@given(st.sets(st.integers(0, 9), min_size=1, max_size=5), st.integers(1, 4))
def test_nonempty_unshuffles_count(letters, m):
    # surjections of a p-set onto m blocks
    word = tuple(sorted(letters))
    all_ = unshuffles(word, m)
    ne = unshuffles(word, m, True)
    assert len(all_) == m ** len(word)
    assert all(all(b) for b, _ in ne)
    assert len(ne) == sum(1 for b, _ in all_ if all(b))


# ε_ij


def test_epsilon_examples():
    d = LqtData(get_algebra("uv"), 2, E, E)
    g = d.g
    w = (g.index(0, 1, 1),)
    for i in range(2):
        for j in range(2):
            assert d.epsilon_ij(w, i, j) == ({(1,): 1} if (i, j) == (0, 1) else {})
    d1 = LqtData(get_algebra("zero2"), 1, E, E)
    assert d1.epsilon_ij((0, 1), 0, 0) == {(0, 1): 1, (1, 0): -1}


@pytest.mark.parametrize("name", ["uv", "nil", "k"])
@pytest.mark.parametrize("n", [1, 2])
def test_epsilon_commutes_with_boundaries(name, n):
    a = get_algebra(name)
    d = LqtData(a, n, E, E)
    ce = chevalley_eilenberg(d.g, 3)
    bar = bar_complex(a, 3)
    for p in range(2, 4):
        for w in ce.basis(p):
            for i in range(n):
                for j in range(n):
                    lhs: dict = {}
                    for v, c in ce_boundary_word(d.g, w).items():
                        vec_iadd(lhs, d.epsilon_ij(v, i, j), c)
                    rhs: dict = {}
                    for bw, c in d.epsilon_ij(w, i, j).items():
                        col = bar.d(p).column(bar.space.index(p, bw))
                        vec_iadd(rhs, {bar.basis(p - 1)[k]: x for k, x in col.items()}, c)
                    assert lhs == rhs


# φ′


def test_phi_examples():
    for n in (2, 3):
        a = get_algebra("uv")
        phi = Phi(a, n, P(1), P(1), 1)
        g = phi.data.g
        for s in range(2):
            assert phi.apply_word((g.index(0, n - 1, s),)) == {((), ((s,),), 0, 0): 1}
        scalar: dict = {}
        phi0 = Phi(a, n, E, E, 1)
        for l in range(n):
            vec_iadd(scalar, phi0.apply_word((g.index(l, l, 0),)))
        assert scalar == {(((0,),), (), 0, 0): n}


def test_label_precondition():
    with pytest.raises(LabelError):
        LqtData(get_algebra("k"), 1, P(1), P(1))


def test_m_above_p_gives_zero_parts():
    phi = Phi(get_algebra("uv"), 3, P(2), P(1, 1), 1)
    assert phi.target.dim(0) == phi.target.dim(1) == 0
    mod = CEModule(phi.data.g, 1, phi.source)
    assert mod.highest_weight_space(1, phi.data.label).dim == 0


@pytest.mark.parametrize("name,n,alpha,beta", [("uv", 2, E, E), ("uv", 2, P(1), P(1)), ("nil", 2, P(1), P(1)),
                                               ("zero1", 3, P(2), P(2)), ("k", 3, P(1), P(1))])
def test_phi_is_an_invariant_chain_map(name, n, alpha, beta):
    phi = Phi(get_algebra(name), n, alpha, beta, 3)
    assert phi.check_chain_map().ok
    for p in range(4):
        inv = phi.target.invariants(p)
        for v in phi.matrix(p).columns():
            assert inv.contains(v)


# ψ′


def test_psi_examples():
    for n in (1, 2, 3):
        psi = PsiPrime(get_algebra("uv"), n, E, E, 1)
        g = psi.data.g
        assert psi.apply_label((((1,),), (), 0, 0)) == {(g.index(l, l, 1),): 1 for l in range(n)}
    psi = PsiPrime(get_algebra("uv"), 2, P(1), P(1), 1)
    assert psi.apply_label(((), ((0,),), 0, 0)) == {(psi.data.g.index(0, 1, 0),): 1}


@pytest.mark.parametrize("name,n,alpha,beta,pmax", [("uv", 2, E, E, 2), ("uv", 2, P(1), P(1), 2),
                                                    ("nil", 3, P(1), P(1), 2), ("k", 2, E, E, 3)])
def test_psi_image_is_the_highest_weight_space(name, n, alpha, beta, pmax):
    psi = PsiPrime(get_algebra(name), n, alpha, beta, pmax)
    mod = CEModule(psi.data.g, pmax, psi.ce)
    for p in range(pmax + 1):
        assert psi.image(p) == mod.highest_weight_space(p, WeightLabel(alpha, beta, n))


def test_psi_defect_witness_for_uv():
    chk = psi_defect_witness(get_algebra("uv"))
    assert chk.ok
    assert chk.witness["degree"] == 3 and chk.witness["discrepancy"]
    assert chk.witness["element_text"] == "[u][u⊗v]"
    # the pure triples give no discrepancy at n = 1: Λ³ of a plane is zero
    assert chk.data["triples_nonzero"] == []
    assert all(not t["discrepancy"] for t in psi_triple_defects(get_algebra("uv")))


def test_psi_is_a_chain_map_without_products():
    psi = PsiPrime(get_algebra("zero2"), 2, E, E, 3)
    assert all(chain_map_witness(psi, p) is None for p in range(1, 4))
    assert not psi_defect_witness(get_algebra("zero2")).ok


# duality and stability


@pytest.mark.parametrize("name,n,alpha,beta,pmax", [("zero1", 1, E, E, 3), ("zero2", 2, E, E, 2),
                                                    ("zero2", 2, P(1), P(1), 2), ("zero1", 2, P(1), P(1), 3)])
def test_duality_diagrams_commute(name, n, alpha, beta, pmax):
    checks = duality_check(n, get_algebra(name), alpha, beta, pmax)
    assert [c.name for c in checks] == ["evaluation", "theta-square", "epsilon-square", "coproduct-square", "equivariance",
                                        "N-scaling"]
    assert all(c.ok for c in checks), [c.witness for c in checks if not c.ok]


def test_duality_in_degree_zero_is_trivial():
    assert all(c.ok for c in duality_check(2, get_algebra("zero2"), E, E, 0))


def test_duality_needs_zero_multiplication():
    with pytest.raises(PreconditionError):
        duality_check(1, get_algebra("uv"), E, E, 1)


def test_stability_example():
    a = get_algebra("k")
    small, big = Phi(a, 2, E, E, 1), Phi(a, 3, E, E, 1)
    g = small.data.g
    one = {g.index(0, 0, 0): 1, g.index(1, 1, 0): 1}
    inc = inclusion_matrix(g, big.data.g, small.source, big.source, 1)
    src = {small.source.space.index(1, (x,)): c for x, c in one.items()}
    lhs = big.matrix(1).apply(inc.apply(src))
    assert lhs == small.matrix(1).apply(src) == {small.target.space.index(1, (((0,),), (), 0, 0)): 2}


@pytest.mark.parametrize("name", ["k", "uv", "zero2"])
def test_stability_sweep(name):
    chk = phi_stability(get_algebra(name), 2, 2)
    assert chk.ok
    assert chk.data["dims"][0] == 1
