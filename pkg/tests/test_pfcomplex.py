"""Pseudofunctorial cochain complex: tuple bookkeeping, the two
differential-assembly paths, the square-zero law, the unitary lemma and
the degree-2 classification bundle."""

import pytest

from graycohom.exactlinalg import (
    GF,
    Vector,
    from_columns,
    rank,
    solve_in_image,
    vstack,
)
from graycohom.examples import deloop, group_algebra_monoidal
from graycohom.gray import tensor_power
from graycohom.pfcomplex import (
    CapExceeded,
    PFCochain,
    check_unitary_lemma,
    classify_pf_deformations,
    composable_tuples,
    delta_pf,
    delta_pf_matrix,
    pf_cochain_basis,
    pf_cohomology,
)
from graycohom.twocat import identity_pseudofunctor


@pytest.fixture(scope="module")
def FK():
    """Identity pseudofunctor on the delooped group-algebra category."""
    return identity_pseudofunctor(deloop(group_algebra_monoidal(2, GF(3))))


def test_composable_tuples_are_composable_and_sorted(g_sign3):
    C = tensor_power(g_sign3, 2).dom
    ts = composable_tuples(C, 3)
    assert ts == sorted(ts)
    for t in ts:
        for i in range(len(t) - 1):
            assert C.cell_src[t[i]] == C.cell_tgt[t[i + 1]]
    # count matches a direct filter of the cube of cells
    cells = sorted(C.cell_src)
    brute = [(a, b, c) for a in cells for b in cells for c in cells
             if C.cell_src[a] == C.cell_tgt[b]
             and C.cell_src[b] == C.cell_tgt[c]]
    assert sorted(brute) == ts


def test_degree_cap_raises(g_sign3):
    F = tensor_power(g_sign3, 2)
    with pytest.raises(CapExceeded):
        pf_cochain_basis(F, 5, cap=4)


@pytest.mark.parametrize("n", [1, 2])
def test_padded_and_closed_form_differentials_agree(g_sign3, n):
    F = tensor_power(g_sign3, 2)
    sp = pf_cochain_basis(F, n)
    sp1 = pf_cochain_basis(F, n + 1)
    fast = delta_pf_matrix(F, sp, sp1)
    slow = delta_pf_matrix(F, sp, sp1, padded=True)
    assert fast.entries == slow.entries


def test_differential_squares_to_zero_on_cochains(g_fiber2, FK):
    for F in (tensor_power(g_fiber2, 2), FK):
        sp1 = pf_cochain_basis(F, 1)
        sp2 = pf_cochain_basis(F, 2)
        sp3 = pf_cochain_basis(F, 3)
        d1 = delta_pf_matrix(F, sp1, sp2)
        d2 = delta_pf_matrix(F, sp2, sp3)
        prod = d2.mul_matrix(d1)
        for b in sp1.basis:
            assert prod.mul_vector(b).is_zero()


def test_delta_pf_asserts_output_naturality(FK):
    sp1 = pf_cochain_basis(FK, 1)
    if not sp1.basis:
        pytest.skip("no degree-1 cochains")
    out = delta_pf(FK, PFCochain(sp1, sp1.basis[0]))
    assert out.space.degree == 2


def test_cohomology_dimension_is_rank_nullity(FK):
    coh = pf_cohomology(FK, 2)
    sp2 = coh["space"]
    K = FK.cod.field
    cocycle = vstack(coh["delta_n"], sp2.constraints)
    dim_ker = cocycle.cols - rank(cocycle)
    im_cols = [coh["delta_prev"].mul_vector(b)
               for b in pf_cochain_basis(FK, 1).basis]
    assert coh["dimension"] == dim_ker - rank(
        from_columns(im_cols, cocycle.cols, K))
    for rep in coh["representatives"]:
        assert coh["delta_n"].mul_vector(rep).is_zero()
        assert sp2.constraints.mul_vector(rep).is_zero()
        assert solve_in_image(
            from_columns(im_cols, cocycle.cols, K), rep) is None


def test_unitary_lemma(g_sign3):
    F = tensor_power(g_sign3, 2)
    assert F.unitary
    assert check_unitary_lemma(F).ok
    C, D = F.dom, F.cod
    fhat1 = {}
    for (g, f) in C.compose1:
        gf = C.compose1[(g, f)]
        fhat1[(g, f)] = D.zero2(
            D.compose(F.cell_map[g], F.cell_map[f]), F.cell_map[gf])
    good_f0 = {X: fhat1[(C.identity_cell[X], C.identity_cell[X])]
               for X in C.objects}
    assert check_unitary_lemma(F, (fhat1, good_f0)).ok
    X0 = sorted(C.objects)[0]
    e = F.cell_map[C.identity_cell[X0]]
    bad_f0 = dict(good_f0)
    bad_f0[X0] = D.id2(e)
    rep = check_unitary_lemma(F, (fhat1, bad_f0))
    assert any(name == "first-order-unit-determination"
               for name, _ in rep.violations)


def test_classification_bundle(FK):
    cls = classify_pf_deformations(FK)
    K = FK.cod.field
    coh = pf_cohomology(FK, 2)
    # a non-cocycle is rejected with the violated hexagon instance named
    nonc = next((Vector(cls.space2.dim_free, {i: K.one()})
                 for i in range(cls.space2.dim_free)
                 if not cls.delta2.mul_vector(
                     Vector(cls.space2.dim_free, {i: K.one()})).is_zero()),
                None)
    if nonc is not None:
        with pytest.raises(ValueError, match="hexagon|naturality"):
            cls.deform(nonc)
    zero = Vector(cls.space2.dim_free)
    fhat1, f01 = cls.deform(zero)
    assert set(fhat1) == {(t[0], t[1]) for t in cls.space2.tuples}
    # shifting by a coboundary is recognized as equivalent
    if cls.space1.basis:
        w = cls.space1.basis[0]
        shifted = cls.delta1.mul_vector(w)
        xi = cls.equivalent(shifted, zero)
        assert xi is not None
        got = cls.delta1.mul_vector(xi)
        assert got.entries == shifted.entries
    # a representative of a nontrivial class is not equivalent to zero
    for rep in coh["representatives"]:
        fhat1, f01 = cls.deform(rep)   # accepted as a cocycle
        assert cls.equivalent(rep, zero) is None
