"""Gray-semigroup tables: validator coverage, cubical vanishing, iterated
tensor powers and the canonical padding machinery."""

import random

import pytest

from graycohom.gray import (
    GraySemigroup,
    PadOps,
    PaddedStep,
    canonical_pad,
    expr_cell,
    merge_to_single,
    pad,
    tensor_power,
    validate_gray,
)
from graycohom.twocat import validate_pseudofunctor


def test_validate_gray_accepts_models(g_base2, g_fiber2, g_sign3):
    for G in (g_base2, g_fiber2, g_sign3):
        rep = validate_gray(G)
        assert rep.ok, rep.violations[:5]


def test_tensorator_cubical_vanishing(g_sign3):
    G = g_sign3
    C = G.base
    for (fp, gp, f, g), t in G.tensorator_table.items():
        if gp == C.identity_cell[C.cell_src[gp]] or \
                f == C.identity_cell[C.cell_src[f]]:
            assert C.eq2(t, C.id2(t.src))


def test_sign_model_tensorator_is_not_identically_trivial(g_sign3):
    G = g_sign3
    C = G.base
    assert any(not C.eq2(t, C.id2(t.src))
               for t in G.tensorator_table.values())


def _rebuild(G, tensorator):
    return GraySemigroup(G.base, G.tensor_obj, G.tensor1, G.tensor2_const,
                         tensorator)


def test_validator_names_singular_tensorator(g_sign3):
    G = g_sign3
    C = G.base
    bad = dict(G.tensorator_table)
    key = sorted(bad)[0]
    t = bad[key]
    bad[key] = type(t)(t.src, t.tgt, (C.field.zero(),) * len(t.coeffs))
    rep = validate_gray(_rebuild(G, bad))
    assert not rep.ok
    assert any(name == "tensorator-invertible" for name, _ in rep.violations)


def test_validator_names_wrong_tensorator_endpoints(g_sign3):
    G = g_sign3
    bad = dict(G.tensorator_table)
    keys = sorted(bad)
    # give one entry the 2-morphism of a differently-shaped entry
    k0 = keys[0]
    other = next(k for k in keys if bad[k].src != bad[k0].src)
    bad[k0] = bad[other]
    rep = validate_gray(_rebuild(G, bad))
    assert not rep.ok
    assert any(name == "tensorator-endpoints" for name, _ in rep.violations)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_tensor_powers_are_valid_pseudofunctors(g_sign3, n):
    F = tensor_power(g_sign3, n)
    rep = validate_pseudofunctor(F)
    assert rep.ok, rep.violations[:5]


def test_tensor_power_tables_agree_with_iterated_tensor(g_sign3):
    G = g_sign3
    F = tensor_power(G, 3)
    for X in F.dom.objects:
        assert F.obj_map[X] == G.tobj_many(X)
    for f in F.dom.cell_src:
        assert F.cell_map[f] == G.tcell_many(f)


def _random_letters(rng, dom, k):
    """A composable k-tuple of 1-cells of dom, built back to front."""
    cells = sorted(dom.cell_src)
    last = rng.choice(cells)
    letters = [last]
    for _ in range(k - 1):
        tgt = dom.cell_src[letters[0]]
        options = [c for c in cells if dom.cell_tgt[c] == tgt]
        letters.insert(0, rng.choice(options))
    return tuple(letters)


def _random_blocks(rng, k):
    blocks = []
    left = k
    while left:
        b = rng.randint(1, left)
        blocks.append(b)
        left -= b
    return tuple(blocks)


def test_merge_order_independence(g_fiber2, g_sign3):
    rng = random.Random(7)
    for G in (g_fiber2, g_sign3):
        F = tensor_power(G, 2)
        ops = PadOps(F)
        C = F.cod
        for _ in range(25):
            k = rng.randint(2, 4)
            letters = _random_letters(rng, F.dom, k)
            blocks = _random_blocks(rng, k)
            base = merge_to_single(ops, letters, blocks)
            for seed in (1, 2):
                again = merge_to_single(ops, letters, blocks,
                                        random.Random(seed))
                assert C.eq2(base, again)


def test_canonical_pad_endpoints_and_identity(g_sign3):
    F = tensor_power(g_sign3, 2)
    ops = PadOps(F)
    C = F.cod
    rng = random.Random(3)
    letters = _random_letters(rng, F.dom, 3)
    t = canonical_pad(ops, letters, (1, 1, 1), (2, 1))
    assert t.src == expr_cell(ops, letters, (1, 1, 1))
    assert t.tgt == expr_cell(ops, letters, (2, 1))
    same = canonical_pad(ops, letters, (2, 1), (2, 1))
    assert C.eq2(same, C.id2(expr_cell(ops, letters, (2, 1))))


def test_pad_of_empty_chain_is_full_merge(g_sign3):
    F = tensor_power(g_sign3, 2)
    ops = PadOps(F)
    C = F.cod
    rng = random.Random(5)
    for _ in range(10):
        letters = _random_letters(rng, F.dom, 3)
        total = pad(F, letters, [])
        assert C.eq2(total, merge_to_single(ops, letters, (1, 1, 1)))


def test_pad_recipe_independence_small(g_fiber2):
    F = tensor_power(g_fiber2, 2)
    ops = PadOps(F)
    C = F.cod
    rng = random.Random(11)
    for _ in range(20):
        k = rng.randint(2, 4)
        letters = _random_letters(rng, F.dom, k)
        b1 = _random_blocks(rng, k)
        b2 = _random_blocks(rng, k)
        chain = [
            PaddedStep(canonical_pad(ops, letters, b1, b2), b1, b2),
        ]
        base = pad(F, letters, chain)
        again = pad(F, letters, chain, rng=random.Random(rng.randrange(10 ** 6)))
        assert C.eq2(base, again)
