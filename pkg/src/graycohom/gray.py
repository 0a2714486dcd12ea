"""Gray semigroups: strictly associative tensor with a cubical tensorator.

A Gray semigroup here is a finite strict 2-category equipped with a tensor
that is strictly associative on objects and 1-cells, strictly compatible
with identities, and pseudofunctorial up to an invertible tensorator
2-morphism

    tensorator((f', g'), (f, g)) : (f' (x) g') o (f (x) g) => (f' o f) (x) (g' o g)

subject to the cubical vanishing conditions.  The module also builds the
iterated tensor pseudofunctors C^n -> C and the canonical padding
2-morphisms used by all differentials.
"""

from __future__ import annotations

from dataclasses import dataclass

from .twocat import (
    Pseudofunctor,
    TwoCategory,
    TwoMorphism,
    ValidationReport,
    product_many,
    validate_pseudofunctor,
)


class GraySemigroup:
    """Tables:
      base          -- underlying TwoCategory
      tensor_obj    -- (X, Y) -> X (x) Y
      tensor1       -- (f, g) -> f (x) g
      tensor2_const -- (f, f2, g, g2) -> {(i, j): {k: scalar}}
      tensorator    -- (fp, gp, f, g) -> TwoMorphism, for tgt f = src fp,
                       tgt g = src gp
    """

    def __init__(self, base: TwoCategory, tensor_obj, tensor1, tensor2_const,
                 tensorator):
        self.base = base
        self.tensor_obj = dict(tensor_obj)
        self.tensor1 = dict(tensor1)
        self.tensor2_const = dict(tensor2_const)
        self.tensorator_table = dict(tensorator)
        self._powers = {}
        self._power_cats = {}

    # ----- tensor on objects and 1-cells -------------------------------

    def tobj(self, X, Y):
        return self.tensor_obj[(X, Y)]

    def tobj_many(self, Xs):
        Xs = list(Xs)
        out = Xs[0]
        for X in Xs[1:]:
            out = self.tobj(out, X)
        return out

    def tcell(self, f, g):
        return self.tensor1[(f, g)]

    def tcell_many(self, fs):
        fs = list(fs)
        out = fs[0]
        for f in fs[1:]:
            out = self.tcell(out, f)
        return out

    # ----- tensor on 2-morphisms ---------------------------------------

    def tensor2(self, a: TwoMorphism, b: TwoMorphism) -> TwoMorphism:
        C = self.base
        K = C.field
        src = self.tcell(a.src, b.src)
        tgt = self.tcell(a.tgt, b.tgt)
        out = [K.zero()] * C.dim2(src, tgt)
        consts = self.tensor2_const.get((a.src, a.tgt, b.src, b.tgt))
        if consts:
            is_zero, mul, add = K.is_zero, K.mul, K.add
            ac, bc = a.coeffs, b.coeffs
            for (i, j), vec in consts.items():
                ci = ac[i]
                cj = bc[j]
                if is_zero(ci) or is_zero(cj):
                    continue
                c = mul(ci, cj)
                for k, v in vec.items():
                    out[k] = add(out[k], mul(c, v))
        return TwoMorphism(src, tgt, tuple(out))

    def tensor2_many(self, terms):
        terms = list(terms)
        out = terms[0]
        for t in terms[1:]:
            out = self.tensor2(out, t)
        return out

    def tensorator(self, fp, gp, f, g) -> TwoMorphism:
        return self.tensorator_table[(fp, gp, f, g)]

    # ----- iterated tensor ---------------------------------------------

    def power_category(self, n: int) -> TwoCategory:
        """The product 2-category C^n with n-tuple objects and 1-cells."""
        if n not in self._power_cats:
            self._power_cats[n] = product_many([self.base] * n)
        return self._power_cats[n]


def tensor_power(G: GraySemigroup, n: int) -> Pseudofunctor:
    """The iterated tensor pseudofunctor C^n -> C (right-nested coherence
    data).  The left-nested recursion yields the same table; this is
    asserted entry by entry while building."""
    if n in G._powers:
        return G._powers[n]
    if n < 1:
        raise ValueError("tensor power needs n >= 1")
    C = G.base
    K = C.field
    dom = G.power_category(n)

    obj_map = {X: G.tobj_many(X) for X in dom.objects}
    cell_map = {f: G.tcell_many(f) for f in dom.cell_src}

    two_map = {}
    for (f, f2), d in dom.hom2_dim.items():
        dims = [C.dim2(f[i], f2[i]) for i in range(n)]
        cols = []
        for flat in range(d):
            idx = []
            rest = flat
            for dd in reversed(dims):
                idx.append(rest % dd)
                rest //= dd
            idx.reverse()
            t = G.tensor2_many(
                [C.basis2(f[i], f2[i], idx[i]) for i in range(n)])
            cols.append({k: v for k, v in enumerate(t.coeffs)
                         if not K.is_zero(v)})
        two_map[(f, f2)] = cols

    if n == 1:
        fhat = {(g, f): C.id2(cell_map[dom.compose1[(g, f)]])
                for (g, f) in dom.compose1}
        lhat = fhat
    else:
        prev = tensor_power(G, n - 1)
        fhat = {}
        lhat = {}
        for (g, f) in dom.compose1:
            rest_g, rest_f = g[1:], f[1:]
            tg_rest = G.tcell_many(rest_g)
            tf_rest = G.tcell_many(rest_f)
            # right-nested: peel the first factor
            first = G.tensorator(g[0], tg_rest, f[0], tf_rest)
            rest = prev.fhat[(rest_g, rest_f)]
            head = C.id2(C.compose(g[0], f[0]))
            fhat[(g, f)] = C.vcomp(G.tensor2(head, rest), first)
            # left-nested: merge the first two factors
            gg = (G.tcell(g[0], g[1]),) + g[2:]
            ff = (G.tcell(f[0], f[1]),) + f[2:]
            if n == 2:
                lhat[(g, f)] = G.tensorator(g[0], g[1], f[0], f[1])
            else:
                step = G.tensor2_many(
                    [G.tensorator(g[0], g[1], f[0], f[1])]
                    + [C.id2(C.compose(g[i], f[i])) for i in range(2, n)])
                prev_l = tensor_power(G, n - 1)
                lhat[(g, f)] = C.vcomp(step, prev_l.fhat[(gg, ff)])
        for key in fhat:
            assert C.eq2(fhat[key], lhat[key]), \
                f"tensor power recursions disagree at {key}"

    f0 = {X: C.id2(C.identity_cell[obj_map[X]]) for X in dom.objects}
    F = Pseudofunctor(dom, C, obj_map, cell_map, two_map, fhat, f0)
    G._powers[n] = F
    return F


# ----- validator --------------------------------------------------------


def validate_gray(G: GraySemigroup) -> ValidationReport:
    """Strict associativity/unitality of the tensor, cubical vanishing of
    the tensorator, strict associativity of the 2-cell tensor, the
    pseudofunctor axioms of the induced C^2 -> C functor, and agreement of
    the two ways to tensor three composable pairs."""
    rep = ValidationReport()
    C = G.base
    objs = C.objects
    cells = list(C.all_cells())

    for X in objs:
        for Y in objs:
            if (X, Y) not in G.tensor_obj:
                rep.add_structural(f"tensor_obj missing {(X, Y)}")
    for f in cells:
        for g in cells:
            if (f, g) not in G.tensor1:
                rep.add_structural(f"tensor1 missing {(f, g)}")
    if rep.structural_errors:
        return rep

    for X in objs:
        for Y in objs:
            for Z in objs:
                if G.tobj(G.tobj(X, Y), Z) != G.tobj(X, G.tobj(Y, Z)):
                    rep.add("tensor-obj-associativity", (X, Y, Z))
    for f in cells:
        for g in cells:
            fg = G.tcell(f, g)
            if C.cell_src[fg] != G.tobj(C.cell_src[f], C.cell_src[g]) or \
                    C.cell_tgt[fg] != G.tobj(C.cell_tgt[f], C.cell_tgt[g]):
                rep.add("tensor1-endpoints", (f, g))
            for h in cells:
                if G.tcell(G.tcell(f, g), h) != G.tcell(f, G.tcell(g, h)):
                    rep.add("tensor1-associativity", (f, g, h))
    for X in objs:
        for Y in objs:
            idX, idY = C.identity_cell[X], C.identity_cell[Y]
            if G.tcell(idX, idY) != C.identity_cell[G.tobj(X, Y)]:
                rep.add("tensor1-identity", (X, Y))

    # 2-cell tensor: identities, strict associativity
    for f in cells:
        for g in cells:
            if not C.eq2(G.tensor2(C.id2(f), C.id2(g)), C.id2(G.tcell(f, g))):
                rep.add("tensor2-identity", (f, g))
    for f in cells:
        for g in cells:
            for h in cells:
                for f2 in C.parallel_targets(f):
                    for g2 in C.parallel_targets(g):
                        for h2 in C.parallel_targets(h):
                            for i in range(C.dim2(f, f2)):
                                for j in range(C.dim2(g, g2)):
                                    for k in range(C.dim2(h, h2)):
                                        a = C.basis2(f, f2, i)
                                        b = C.basis2(g, g2, j)
                                        c = C.basis2(h, h2, k)
                                        lhs = G.tensor2(G.tensor2(a, b), c)
                                        rhs = G.tensor2(a, G.tensor2(b, c))
                                        if not C.eq2(lhs, rhs):
                                            rep.add("tensor2-associativity",
                                                    (a, b, c))

    # cubical vanishing: the tensorator is an identity whenever the second
    # factor of the left pair or the first factor of the right pair is an
    # identity 1-cell
    for (fp, gp, f, g), t in G.tensorator_table.items():
        if gp == C.identity_cell[C.cell_src[gp]] or \
                f == C.identity_cell[C.cell_src[f]]:
            if not C.eq2(t, C.id2(t.src)):
                rep.add("tensorator-cubical", (fp, gp, f, g))

    # tensorator endpoints and invertibility, checked before anything
    # builds on the table (the iterated-tensor construction assumes both)
    for (fp, gp, f, g), t in G.tensorator_table.items():
        src = C.compose(G.tcell(fp, gp), G.tcell(f, g))
        tgt = G.tcell(C.compose(fp, f), C.compose(gp, g))
        if (t.src, t.tgt) != (src, tgt):
            rep.add("tensorator-endpoints", (fp, gp, f, g))
            continue
        try:
            C.invert2(t)
        except (ValueError, ZeroDivisionError):
            rep.add("tensorator-invertible", (fp, gp, f, g))
    if rep.violations or rep.structural_errors:
        return rep

    # pseudofunctor axioms of the induced two-variable tensor
    rep = rep.merged(validate_pseudofunctor(tensor_power(G, 2)))

    # three-variable compatibility: merging (1,2) then with 3 agrees with
    # merging (2,3) then with 1 (asserted for all n while building the
    # iterated tensor; n = 3 is rechecked here as the generating case)
    tensor_power(G, 3)
    return rep


# ----- canonical paddings -----------------------------------------------


class PadOps:
    """Adapter giving the padding routines composition, tensorator lookup
    and inversion for a pseudofunctor.  Subclasses reuse the same padding
    code over other scalar rings."""

    def __init__(self, F: Pseudofunctor):
        self.F = F
        self._merge_cache = {}

    def dom_compose(self, cells):
        return self.F.dom.compose_many(cells)

    def image(self, cell):
        return self.F.cell_map[cell]

    def cod_compose_many(self, cells):
        return self.F.cod.compose_many(cells)

    def fhat(self, g, f):
        return self.F.fhat[(g, f)]

    def id2(self, cell):
        return self.F.cod.id2(cell)

    def hcomp_many(self, terms):
        return self.F.cod.hcomp_many(terms)

    def vcomp(self, t2, t1):
        return self.F.cod.vcomp(t2, t1)

    def invert(self, t):
        return self.F.cod.invert2(t)


def _check_blocks(blocks, k):
    if any(b <= 0 for b in blocks) or sum(blocks) != k:
        raise ValueError(f"invalid block sizes {blocks} for {k} letters")


def _split(letters, blocks):
    words = []
    i = 0
    for b in blocks:
        words.append(tuple(letters[i:i + b]))
        i += b
    return words


def expr_cell(ops: PadOps, letters, blocks):
    """The 1-cell F(w_0) o F(w_1) o ... for the given grouping of letters."""
    _check_blocks(blocks, len(letters))
    words = _split(letters, blocks)
    return ops.cod_compose_many(
        [ops.image(ops.dom_compose(w)) for w in words])


def merge_to_single(ops: PadOps, letters, blocks, rng=None):
    """Canonical 2-morphism expr(blocks) => expr((k,)) built from whiskered
    tensorator/coherence cells; any merge order yields the same result, and
    rng (if given) randomizes the order."""
    _check_blocks(blocks, len(letters))
    key = None
    if rng is None:
        key = (tuple(letters), tuple(blocks))
        cached = ops._merge_cache.get(key)
        if cached is not None:
            return cached
    words = _split(letters, blocks)
    total = None
    while len(words) > 1:
        choices = list(range(len(words) - 1))
        i = rng.choice(choices) if rng is not None else choices[0]
        u = ops.dom_compose(words[i])
        v = ops.dom_compose(words[i + 1])
        parts = (
            [ops.id2(ops.image(ops.dom_compose(w))) for w in words[:i]]
            + [ops.fhat(u, v)]
            + [ops.id2(ops.image(ops.dom_compose(w))) for w in words[i + 2:]]
        )
        step = ops.hcomp_many(parts)
        total = step if total is None else ops.vcomp(step, total)
        words[i:i + 2] = [words[i] + words[i + 1]]
    if total is None:
        total = ops.id2(expr_cell(ops, letters, blocks))
    if key is not None:
        ops._merge_cache[key] = total
    return total


def canonical_pad(ops: PadOps, letters, from_blocks, to_blocks, rng=None):
    """Canonical coherence 2-morphism expr(from_blocks) => expr(to_blocks)."""
    if tuple(from_blocks) == tuple(to_blocks):
        return ops.id2(expr_cell(ops, letters, from_blocks))
    up = merge_to_single(ops, letters, from_blocks, rng)
    if tuple(to_blocks) == (len(letters),):
        return up
    down = merge_to_single(ops, letters, to_blocks, rng)
    return ops.vcomp(ops.invert(down), up)


@dataclass(frozen=True)
class PaddedStep:
    """A 2-morphism between grouped composites of F-images of the letters:
    tm goes from the src_blocks grouping to the tgt_blocks grouping."""

    tm: object
    src_blocks: tuple
    tgt_blocks: tuple


def pad(F: Pseudofunctor, letters, chain, rng=None):
    """Canonical padding of a vertical chain of grouped 2-morphisms.

    letters is the tuple of composable 1-cells f_0, ..., f_{k-1} (diagram
    order) and chain is a list of PaddedStep applied bottom-up.  The result
    runs from the fully split composite F(f_0) o ... o F(f_{k-1}) to the
    fully merged F(f_0 o ... o f_{k-1}), inserting canonical coherence
    cells between the steps.  Any insertion recipe gives the same result;
    rng randomizes the choices made.
    """
    ops = PadOps(F)
    letters = tuple(letters)
    k = len(letters)
    current = (1,) * k
    total = ops.id2(expr_cell(ops, letters, current))
    for step in chain:
        bridge = canonical_pad(ops, letters, current, step.src_blocks, rng)
        total = ops.vcomp(step.tm, ops.vcomp(bridge, total))
        current = tuple(step.tgt_blocks)
    bridge = canonical_pad(ops, letters, current, (k,), rng)
    return ops.vcomp(bridge, total)
