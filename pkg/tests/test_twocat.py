"""2-category tables: axioms, the 2-morphism algebra, inversion, products
and pseudofunctors, exercised on a delooped group-algebra category whose
hom spaces are genuinely multi-dimensional."""

import pytest

from graycohom.exactlinalg import GF
from graycohom.examples import deloop, group_algebra_monoidal
from graycohom.twocat import (
    TwoMorphism,
    identity_pseudofunctor,
    product_many,
    validate_pseudofunctor,
    validate_two_category,
)


@pytest.fixture(scope="module")
def C():
    return deloop(group_algebra_monoidal(3, GF(5)))


def test_validator_accepts_group_algebra_deloop(C):
    rep = validate_two_category(C)
    assert rep.ok, rep.violations[:5]


def test_validator_accepts_group_models(g_fiber2, g_sign3):
    for G in (g_fiber2, g_sign3):
        rep = validate_two_category(G.base)
        assert rep.ok, rep.violations[:5]


def test_vertical_composition_is_group_convolution(C):
    # End(a) = K[Z/3]; vertical composition of basis elements i, j is the
    # basis element i + j mod 3
    for a in C.cell_src:
        for i in range(3):
            for j in range(3):
                t = C.vcomp(C.basis2(a, a, i), C.basis2(a, a, j))
                assert t == C.basis2(a, a, (i + j) % 3)


def test_vcomp_many_applies_rightmost_first(C):
    f = sorted(C.cell_src)[0]
    a, b, c = (C.basis2(f, f, i) for i in (0, 1, 2))
    assert C.eq2(C.vcomp_many([a, b, c]), C.vcomp(a, C.vcomp(b, c)))


def test_two_morphism_linear_algebra(C):
    K = C.field
    f = sorted(C.cell_src)[0]
    a = C.basis2(f, f, 1)
    z = C.zero2(f, f)
    assert C.is_zero2(C.add2(a, C.neg2(a)))
    assert C.eq2(C.add2(a, z), a)
    two_a = C.add2(a, a)
    assert two_a.coeffs[1] == K.from_int(2)
    assert C.eq2(C.scale2(K.from_int(2), a), two_a)


def test_invert2_group_like_and_zero_divisor(C):
    f = sorted(C.cell_src)[0]
    g = C.basis2(f, f, 1)            # a group-like element, invertible
    inv = C.invert2(g)
    assert C.eq2(C.vcomp(inv, g), C.id2(f))
    assert C.eq2(C.vcomp(g, inv), C.id2(f))
    # 1 + x + x^2 annihilates 1 - x in K[Z/3], so it cannot be invertible
    K = C.field
    s = TwoMorphism(f, f, (K.one(), K.one(), K.one()))
    with pytest.raises(ValueError, match="not invertible"):
        C.invert2(s)


def test_hcomp_is_tensor_of_group_algebra(C):
    # horizontal composition in the deloop is convolution-algebra tensor:
    # on basis elements over Z/3 it lands on the sum of group labels
    cells = sorted(C.cell_src)
    f, g = cells[1], cells[2]
    for i in range(3):
        for j in range(3):
            t = C.hcomp(C.basis2(g, g, j), C.basis2(f, f, i))
            fg = C.compose(g, f)
            assert t == C.basis2(fg, fg, (i + j) % 3)


def test_product_many_multiplies_dimensions():
    B = deloop(group_algebra_monoidal(2, GF(5)))
    P = product_many([B, B])
    assert len(P.objects) == len(B.objects) ** 2
    f = sorted(B.cell_src)[0]
    assert P.dim2((f, f), (f, f)) == B.dim2(f, f) ** 2
    rep = validate_two_category(P)
    assert rep.ok, rep.violations[:5]


def test_identity_pseudofunctor_validates(C):
    F = identity_pseudofunctor(C)
    rep = validate_pseudofunctor(F)
    assert rep.ok, rep.violations[:5]
    f = sorted(C.cell_src)[0]
    a = C.basis2(f, f, 2)
    assert C.eq2(F.map2(a), a)
    assert F.unitary


def test_validator_reports_broken_interchange(C):
    # corrupt one horizontal-composition constant and expect a named
    # violation rather than an exception
    bad_h = {k: {kk: dict(vv) for kk, vv in v.items()}
             for k, v in C.hcomp_const.items()}
    inner = bad_h[sorted(bad_h)[0]]
    ik = sorted(inner)[0]
    tgt = dict(inner[ik])
    k0 = sorted(tgt)[0] if tgt else 0
    tgt[k0] = C.field.add(tgt.get(k0, C.field.zero()), C.field.one())
    inner[ik] = tgt
    D = type(C)(C.field, C.objects, C.one_cells, C.cell_src, C.cell_tgt,
                C.identity_cell, C.compose1, C.hom2_dim, C.id2_coeffs,
                C.vcomp_const, bad_h)
    rep = validate_two_category(D)
    assert not rep.ok
    assert rep.violations
