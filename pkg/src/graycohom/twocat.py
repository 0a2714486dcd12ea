"""Finite strict K-linear 2-categories as explicit tables.

A 2-category here is a finite object set, finite 1-cell sets with a total
strictly associative composition table, and finite-dimensional 2-morphism
spaces given by a basis and structure constants for vertical and horizontal
composition.  Pseudofunctors, pseudonatural transformations and
modifications are layered on top as table-backed structures with validators
that return complete witness lists.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .exactlinalg import Field, SparseMatrix, Vector, solve_in_image


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)   # (axiom_name, witness)
    structural_errors: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations and not self.structural_errors

    def add(self, axiom, witness):
        self.violations.append((axiom, witness))

    def add_structural(self, message):
        self.structural_errors.append(message)

    def merged(self, other: "ValidationReport") -> "ValidationReport":
        return ValidationReport(
            self.violations + other.violations,
            self.structural_errors + other.structural_errors,
        )


@dataclass(frozen=True)
class TwoMorphism:
    """2-morphism src => tgt as a coefficient vector over the hom basis."""

    src: object
    tgt: object
    coeffs: tuple


class TwoCategory:
    """Finite strict 2-category.

    Tables:
      objects            -- tuple of object ids
      one_cells          -- (X, Y) -> tuple of 1-cell ids
      cell_src, cell_tgt -- 1-cell id -> object
      identity_cell      -- X -> id 1-cell
      compose1           -- (g, f) -> g o f, for tgt(f) = src(g)
      hom2_dim           -- (f, f') -> basis size of Hom2(f, f') (parallel pairs)
      id2_coeffs         -- f -> coefficients of 1_f in Hom2(f, f)
      vcomp_const        -- (f, f1, f2) -> {(j, i): {k: scalar}}
      hcomp_const        -- (g, g2, f, f2) -> {(j, i): {k: scalar}}
    """

    def __init__(self, field_: Field, objects, one_cells, cell_src, cell_tgt,
                 identity_cell, compose1, hom2_dim, id2_coeffs,
                 vcomp_const, hcomp_const):
        self.field = field_
        self.objects = tuple(objects)
        self.one_cells = dict(one_cells)
        self.cell_src = dict(cell_src)
        self.cell_tgt = dict(cell_tgt)
        self.identity_cell = dict(identity_cell)
        self.compose1 = dict(compose1)
        self.hom2_dim = dict(hom2_dim)
        self.id2_coeffs = dict(id2_coeffs)
        self.vcomp_const = dict(vcomp_const)
        self.hcomp_const = dict(hcomp_const)
        self._id2_cache = {}
        self._parallel_cache = {}

    # ----- basic accessors ---------------------------------------------

    def all_cells(self):
        for pair in sorted(self.one_cells):
            yield from self.one_cells[pair]

    def dim2(self, f, f2) -> int:
        return self.hom2_dim.get((f, f2), 0)

    def parallel_targets(self, f):
        """1-cells f' with dim Hom2(f, f') > 0."""
        cached = self._parallel_cache.get(f)
        if cached is None:
            X, Y = self.cell_src[f], self.cell_tgt[f]
            cached = [g for g in self.one_cells[(X, Y)]
                      if self.dim2(f, g) > 0]
            self._parallel_cache[f] = cached
        return cached

    def compose(self, g, f):
        if self.cell_tgt[f] != self.cell_src[g]:
            raise ValueError(f"1-cells not composable: {g} o {f}")
        return self.compose1[(g, f)]

    def compose_many(self, cells):
        """Composite f0 o f1 o ... o fk (diagram order, f0 leftmost)."""
        cells = list(cells)
        out = cells[-1]
        for f in reversed(cells[:-1]):
            out = self.compose(f, out)
        return out

    # ----- 2-morphism algebra ------------------------------------------

    def zero2(self, f, f2) -> TwoMorphism:
        return TwoMorphism(f, f2, (self.field.zero(),) * self.dim2(f, f2))

    def id2(self, f) -> TwoMorphism:
        cached = self._id2_cache.get(f)
        if cached is None:
            cached = TwoMorphism(f, f, tuple(self.id2_coeffs[f]))
            self._id2_cache[f] = cached
        return cached

    def basis2(self, f, f2, i) -> TwoMorphism:
        d = self.dim2(f, f2)
        K = self.field
        return TwoMorphism(
            f, f2, tuple(K.one() if k == i else K.zero() for k in range(d)))

    def add2(self, a: TwoMorphism, b: TwoMorphism) -> TwoMorphism:
        if (a.src, a.tgt) != (b.src, b.tgt):
            raise ValueError("2-morphism endpoint mismatch in addition")
        K = self.field
        return TwoMorphism(a.src, a.tgt,
                           tuple(K.add(x, y) for x, y in zip(a.coeffs, b.coeffs)))

    def scale2(self, c, a: TwoMorphism) -> TwoMorphism:
        K = self.field
        return TwoMorphism(a.src, a.tgt, tuple(K.mul(c, x) for x in a.coeffs))

    def neg2(self, a: TwoMorphism) -> TwoMorphism:
        K = self.field
        return TwoMorphism(a.src, a.tgt, tuple(K.neg(x) for x in a.coeffs))

    def eq2(self, a: TwoMorphism, b: TwoMorphism) -> bool:
        K = self.field
        return (a.src, a.tgt) == (b.src, b.tgt) and all(
            K.is_zero(K.sub(x, y)) for x, y in zip(a.coeffs, b.coeffs))

    def is_zero2(self, a: TwoMorphism) -> bool:
        K = self.field
        return all(K.is_zero(x) for x in a.coeffs)

    def _bilinear(self, consts, dim_out, a_coeffs, b_coeffs):
        K = self.field
        out = [K.zero()] * dim_out
        if consts:
            is_zero, mul, add = K.is_zero, K.mul, K.add
            for (j, i), vec in consts.items():
                cj = a_coeffs[j]
                ci = b_coeffs[i]
                if is_zero(cj) or is_zero(ci):
                    continue
                c = mul(cj, ci)
                for k, v in vec.items():
                    out[k] = add(out[k], mul(c, v))
        return tuple(out)

    def vcomp(self, t2: TwoMorphism, t1: TwoMorphism) -> TwoMorphism:
        """Vertical composite t2 . t1 for t1: f => f1, t2: f1 => f2."""
        if t1.tgt != t2.src:
            raise ValueError(f"vertical composition mismatch: {t1.tgt} vs {t2.src}")
        f, f1, f2 = t1.src, t1.tgt, t2.tgt
        consts = self.vcomp_const.get((f, f1, f2))
        coeffs = self._bilinear(consts, self.dim2(f, f2), t2.coeffs, t1.coeffs)
        return TwoMorphism(f, f2, coeffs)

    def vcomp_many(self, terms):
        """Vertical composite t_n . ... . t_1 from a list [t_n, ..., t_1]."""
        terms = list(terms)
        out = terms[-1]
        for t in reversed(terms[:-1]):
            out = self.vcomp(t, out)
        return out

    def hcomp(self, tg: TwoMorphism, tf: TwoMorphism) -> TwoMorphism:
        """Horizontal composite tg o tf (tg on the left of the diagram)."""
        if self.cell_tgt[tf.src] != self.cell_src[tg.src]:
            raise ValueError("horizontal composition mismatch")
        g, g2, f, f2 = tg.src, tg.tgt, tf.src, tf.tgt
        consts = self.hcomp_const.get((g, g2, f, f2))
        gf = self.compose(g, f)
        g2f2 = self.compose(g2, f2)
        coeffs = self._bilinear(consts, self.dim2(gf, g2f2), tg.coeffs, tf.coeffs)
        return TwoMorphism(gf, g2f2, coeffs)

    def hcomp_many(self, terms):
        """Horizontal composite t_0 o t_1 o ... o t_k (diagram order)."""
        terms = list(terms)
        out = terms[-1]
        for t in reversed(terms[:-1]):
            out = self.hcomp(t, out)
        return out

    def invert2(self, t: TwoMorphism) -> TwoMorphism:
        """Vertical inverse of an invertible 2-morphism (solved exactly)."""
        f, g = t.src, t.tgt
        d_fg = self.dim2(f, g)
        d_gf = self.dim2(g, f)
        # columns: candidate s in Hom2(g, f); rows: coefficients of
        # (s . t, t . s) against (1_f, 1_g)
        d_ff = self.dim2(f, f)
        d_gg = self.dim2(g, g)
        M = SparseMatrix(d_ff + d_gg, d_gf, self.field)
        for i in range(d_gf):
            e = self.basis2(g, f, i)
            st = self.vcomp(e, t)
            ts = self.vcomp(t, e)
            for k, v in enumerate(st.coeffs):
                M.add_to(k, i, v)
            for k, v in enumerate(ts.coeffs):
                M.add_to(d_ff + k, i, v)
        rhs = Vector(d_ff + d_gg)
        K = self.field
        for k, v in enumerate(self.id2(f).coeffs):
            if not K.is_zero(v):
                rhs.entries[k] = v
        for k, v in enumerate(self.id2(g).coeffs):
            if not K.is_zero(v):
                rhs.entries[d_ff + k] = v
        sol = solve_in_image(M, rhs)
        if sol is None:
            raise ValueError(f"2-morphism is not invertible: {t}")
        coeffs = tuple(sol.entries.get(i, K.zero()) for i in range(d_gf))
        return TwoMorphism(g, f, coeffs)


# ----- validators -------------------------------------------------------


def validate_two_category(C: TwoCategory) -> ValidationReport:
    """Check all 2-category axioms on all index tuples; list every violation."""
    rep = ValidationReport()
    K = C.field

    # structural totality
    for (X, Y), cells in C.one_cells.items():
        for f in cells:
            if C.cell_src.get(f) != X or C.cell_tgt.get(f) != Y:
                rep.add_structural(f"1-cell {f} has inconsistent endpoints")
    for X in C.objects:
        e = C.identity_cell.get(X)
        if e is None or e not in C.one_cells.get((X, X), ()):
            rep.add_structural(f"missing identity 1-cell at {X}")
    cells = list(C.all_cells())
    for g in cells:
        for f in cells:
            if C.cell_tgt[f] == C.cell_src[g] and (g, f) not in C.compose1:
                rep.add_structural(f"missing composition entry {(g, f)}")
    if rep.structural_errors:
        return rep

    # 1-cell unit and associativity
    for f in cells:
        X, Y = C.cell_src[f], C.cell_tgt[f]
        if C.compose1[(f, C.identity_cell[X])] != f:
            rep.add("compose1-right-unit", f)
        if C.compose1[(C.identity_cell[Y], f)] != f:
            rep.add("compose1-left-unit", f)
    for h in cells:
        for g in cells:
            if C.cell_tgt[g] != C.cell_src[h]:
                continue
            for f in cells:
                if C.cell_tgt[f] != C.cell_src[g]:
                    continue
                if C.compose1[(C.compose1[(h, g)], f)] != \
                        C.compose1[(h, C.compose1[(g, f)])]:
                    rep.add("compose1-associativity", (h, g, f))

    def hom_basis(f, f2):
        return [C.basis2(f, f2, i) for i in range(C.dim2(f, f2))]

    # vertical units and associativity
    for f in cells:
        for f2 in C.parallel_targets(f):
            for t in hom_basis(f, f2):
                if not C.eq2(C.vcomp(C.id2(f2), t), t):
                    rep.add("vcomp-left-unit", (f, f2, t))
                if not C.eq2(C.vcomp(t, C.id2(f)), t):
                    rep.add("vcomp-right-unit", (f, f2, t))
    for f in cells:
        for f1 in C.parallel_targets(f):
            for f2 in C.parallel_targets(f1):
                for f3 in C.parallel_targets(f2):
                    for t1 in hom_basis(f, f1):
                        for t2 in hom_basis(f1, f2):
                            for t3 in hom_basis(f2, f3):
                                lhs = C.vcomp(C.vcomp(t3, t2), t1)
                                rhs = C.vcomp(t3, C.vcomp(t2, t1))
                                if not C.eq2(lhs, rhs):
                                    rep.add("vcomp-associativity", (t3, t2, t1))

    # horizontal units, functoriality of identities
    for f in cells:
        X, Y = C.cell_src[f], C.cell_tgt[f]
        for f2 in C.parallel_targets(f):
            for t in hom_basis(f, f2):
                if not C.eq2(C.hcomp(C.id2(C.identity_cell[Y]), t), t):
                    rep.add("hcomp-left-unit", (f, f2, t))
                if not C.eq2(C.hcomp(t, C.id2(C.identity_cell[X])), t):
                    rep.add("hcomp-right-unit", (f, f2, t))
    # identity 2-cells are horizontally multiplicative
    for g in cells:
        for f in cells:
            if C.cell_tgt[f] != C.cell_src[g]:
                continue
            if not C.eq2(C.hcomp(C.id2(g), C.id2(f)),
                         C.id2(C.compose(g, f))):
                rep.add("hcomp-identity", (g, f))

    # horizontal associativity
    for h in cells:
        for g in cells:
            if C.cell_tgt[g] != C.cell_src[h]:
                continue
            for f in cells:
                if C.cell_tgt[f] != C.cell_src[g]:
                    continue
                for h2 in C.parallel_targets(h):
                    for g2 in C.parallel_targets(g):
                        for f2 in C.parallel_targets(f):
                            for th in hom_basis(h, h2):
                                for tg in hom_basis(g, g2):
                                    for tf in hom_basis(f, f2):
                                        lhs = C.hcomp(C.hcomp(th, tg), tf)
                                        rhs = C.hcomp(th, C.hcomp(tg, tf))
                                        if not C.eq2(lhs, rhs):
                                            rep.add("hcomp-associativity",
                                                    (th, tg, tf))

    # interchange law on all basis 4-tuples
    for g in cells:
        for f in cells:
            if C.cell_tgt[f] != C.cell_src[g]:
                continue
            for g1 in C.parallel_targets(g):
                for f1 in C.parallel_targets(f):
                    for g2 in C.parallel_targets(g1):
                        for f2 in C.parallel_targets(f1):
                            for eta in hom_basis(g, g1):
                                for eta2 in hom_basis(g1, g2):
                                    for tau in hom_basis(f, f1):
                                        for tau2 in hom_basis(f1, f2):
                                            lhs = C.hcomp(C.vcomp(eta2, eta),
                                                          C.vcomp(tau2, tau))
                                            rhs = C.vcomp(C.hcomp(eta2, tau2),
                                                          C.hcomp(eta, tau))
                                            if not C.eq2(lhs, rhs):
                                                rep.add("interchange",
                                                        (eta2, eta, tau2, tau))
    return rep


# ----- cartesian products ----------------------------------------------


def _mixed_radix(indices, dims):
    """Flatten componentwise basis indices to a single lexicographic index."""
    out = 0
    for i, d in zip(indices, dims):
        out = out * d + i
    return out


def product_many(cats: list[TwoCategory]) -> TwoCategory:
    """Cartesian product; objects and 1-cells are tuples, 2-cell spaces are
    tensor products of the component spaces."""
    if not cats:
        raise ValueError("empty product")
    K = cats[0].field
    for D in cats[1:]:
        if D.field != K:
            raise ValueError("field mismatch in product")
    import itertools

    objects = [tuple(t) for t in itertools.product(*[D.objects for D in cats])]
    one_cells = {}
    cell_src = {}
    cell_tgt = {}
    for X in objects:
        for Y in objects:
            factors = [cats[i].one_cells.get((X[i], Y[i]), ()) for i in range(len(cats))]
            if any(not fs for fs in factors):
                one_cells[(X, Y)] = ()
                continue
            cells = [tuple(t) for t in itertools.product(*factors)]
            one_cells[(X, Y)] = tuple(cells)
            for f in cells:
                cell_src[f] = X
                cell_tgt[f] = Y
    identity_cell = {
        X: tuple(cats[i].identity_cell[X[i]] for i in range(len(cats)))
        for X in objects
    }
    compose1 = {}
    for (Y, Z), gs in one_cells.items():
        if not gs:
            continue
        for X in objects:
            fs = one_cells.get((X, Y), ())
            for g in gs:
                for f in fs:
                    compose1[(g, f)] = tuple(
                        cats[i].compose1[(g[i], f[i])] for i in range(len(cats)))

    hom2_dim = {}
    id2_coeffs = {}
    vcomp_const = {}
    hcomp_const = {}

    def tensor_vec(vecs, dims):
        """Outer product of per-component sparse vectors {idx: coeff}."""
        out = {0: K.one()}
        for vec, d in zip(vecs, dims):
            new = {}
            for base, c in out.items():
                for i, v in vec.items():
                    new[base * d + i] = K.mul(c, v)
            out = new
        return {k: v for k, v in out.items() if not K.is_zero(v)}

    for (X, Y), cells in one_cells.items():
        for f in cells:
            for f2 in cells:
                dims = [cats[i].dim2(f[i], f2[i]) for i in range(len(cats))]
                d = 1
                for di in dims:
                    d *= di
                if d:
                    hom2_dim[(f, f2)] = d
    for f in cell_src:
        dims = [cats[i].dim2(f[i], f[i]) for i in range(len(cats))]
        vecs = [
            {k: v for k, v in enumerate(cats[i].id2_coeffs[f[i]])
             if not K.is_zero(v)}
            for i in range(len(cats))
        ]
        dense = tensor_vec(vecs, dims)
        total = hom2_dim.get((f, f), 0)
        id2_coeffs[f] = tuple(dense.get(k, K.zero()) for k in range(total))

    def component_indices(flat, dims):
        out = []
        for d in reversed(dims):
            out.append(flat % d)
            flat //= d
        return list(reversed(out))

    parallels = {}
    for (f, f2) in hom2_dim:
        parallels.setdefault(f, []).append(f2)

    # vertical structure constants
    for f in cell_src:
        for f1 in parallels.get(f, ()):
            for f2 in parallels.get(f1, ()):
                dims_a = [cats[i].dim2(f1[i], f2[i]) for i in range(len(cats))]
                dims_b = [cats[i].dim2(f[i], f1[i]) for i in range(len(cats))]
                dims_o = [cats[i].dim2(f[i], f2[i]) for i in range(len(cats))]
                table = {}
                for j in range(hom2_dim[(f1, f2)]):
                    js = component_indices(j, dims_a)
                    for i in range(hom2_dim[(f, f1)]):
                        isx = component_indices(i, dims_b)
                        vecs = []
                        ok = True
                        for ci in range(len(cats)):
                            consts = cats[ci].vcomp_const.get(
                                (f[ci], f1[ci], f2[ci]), {})
                            vec = consts.get((js[ci], isx[ci]), {})
                            if not vec:
                                ok = False
                                break
                            vecs.append(vec)
                        if not ok:
                            continue
                        dense = tensor_vec(vecs, dims_o)
                        if dense:
                            table[(j, i)] = dense
                if table:
                    vcomp_const[(f, f1, f2)] = table

    # horizontal structure constants
    for (g, f) in compose1:
        for g2 in parallels.get(g, ()):
            for f2 in parallels.get(f, ()):
                gf = compose1[(g, f)]
                g2f2 = compose1[(g2, f2)]
                dims_g = [cats[i].dim2(g[i], g2[i]) for i in range(len(cats))]
                dims_f = [cats[i].dim2(f[i], f2[i]) for i in range(len(cats))]
                dims_o = [cats[i].dim2(gf[i], g2f2[i]) for i in range(len(cats))]
                table = {}
                for j in range(hom2_dim[(g, g2)]):
                    js = component_indices(j, dims_g)
                    for i in range(hom2_dim[(f, f2)]):
                        isx = component_indices(i, dims_f)
                        vecs = []
                        ok = True
                        for ci in range(len(cats)):
                            consts = cats[ci].hcomp_const.get(
                                (g[ci], g2[ci], f[ci], f2[ci]), {})
                            vec = consts.get((js[ci], isx[ci]), {})
                            if not vec:
                                ok = False
                                break
                            vecs.append(vec)
                        if not ok:
                            continue
                        dense = tensor_vec(vecs, dims_o)
                        if dense:
                            table[(j, i)] = dense
                if table:
                    hcomp_const[(g, g2, f, f2)] = table

    return TwoCategory(K, objects, one_cells, cell_src, cell_tgt,
                       identity_cell, compose1, hom2_dim, id2_coeffs,
                       vcomp_const, hcomp_const)


def product(C: TwoCategory, D: TwoCategory) -> TwoCategory:
    return product_many([C, D])


# ----- pseudofunctors ---------------------------------------------------


class Pseudofunctor:
    """Pseudofunctor between finite strict 2-categories.

    obj_map  -- object -> object
    cell_map -- 1-cell -> 1-cell
    two_map  -- (f, f2) -> list over basis idx of {out_idx: scalar}
    fhat     -- (g, f) -> TwoMorphism F(g) o F(f) => F(g o f), invertible
    f0       -- X -> TwoMorphism F(id_X) => id_{F(X)}, invertible
    """

    def __init__(self, dom: TwoCategory, cod: TwoCategory,
                 obj_map, cell_map, two_map, fhat, f0):
        self.dom = dom
        self.cod = cod
        self.obj_map = dict(obj_map)
        self.cell_map = dict(cell_map)
        self.two_map = dict(two_map)
        self.fhat = dict(fhat)
        self.f0 = dict(f0)
        self._fhat_inv = {}

    def map2(self, t: TwoMorphism) -> TwoMorphism:
        K = self.cod.field
        Ff, Ff2 = self.cell_map[t.src], self.cell_map[t.tgt]
        out = [K.zero()] * self.cod.dim2(Ff, Ff2)
        cols = self.two_map[(t.src, t.tgt)]
        for i, c in enumerate(t.coeffs):
            if K.is_zero(c):
                continue
            for k, v in cols[i].items():
                out[k] = K.add(out[k], K.mul(c, v))
        return TwoMorphism(Ff, Ff2, tuple(out))

    def fhat_inv(self, g, f) -> TwoMorphism:
        key = (g, f)
        if key not in self._fhat_inv:
            self._fhat_inv[key] = self.cod.invert2(self.fhat[key])
        return self._fhat_inv[key]

    @property
    def unitary(self) -> bool:
        C = self.cod
        return all(C.eq2(t, C.id2(t.src)) for t in self.f0.values())


def identity_pseudofunctor(C: TwoCategory) -> Pseudofunctor:
    obj_map = {X: X for X in C.objects}
    cell_map = {f: f for f in C.cell_src}
    two_map = {}
    K = C.field
    for (f, f2), d in C.hom2_dim.items():
        two_map[(f, f2)] = [{i: K.one()} for i in range(d)]
    fhat = {}
    for (g, f), gf in C.compose1.items():
        fhat[(g, f)] = C.id2(gf)
    f0 = {X: C.id2(C.identity_cell[X]) for X in C.objects}
    return Pseudofunctor(C, C, obj_map, cell_map, two_map, fhat, f0)


def validate_pseudofunctor(F: Pseudofunctor) -> ValidationReport:
    """Functoriality of the hom maps, naturality of Fhat, hexagonal and
    triangular axioms."""
    rep = ValidationReport()
    C, D = F.dom, F.cod

    # structural totality
    for X in C.objects:
        if X not in F.obj_map:
            rep.add_structural(f"object map missing {X}")
    for f in C.cell_src:
        if f not in F.cell_map:
            rep.add_structural(f"1-cell map missing {f}")
    for (g, f) in C.compose1:
        if (g, f) not in F.fhat:
            rep.add_structural(f"Fhat missing {(g, f)}")
    if rep.structural_errors:
        return rep

    # endpoints of cell map
    for f, X in C.cell_src.items():
        Ff = F.cell_map[f]
        if D.cell_src[Ff] != F.obj_map[X] or \
                D.cell_tgt[Ff] != F.obj_map[C.cell_tgt[f]]:
            rep.add("cell-map-endpoints", f)

    # hom functors preserve identities and vertical composition
    for f in C.cell_src:
        if not D.eq2(F.map2(C.id2(f)), D.id2(F.cell_map[f])):
            rep.add("two-map-identity", f)
    for f in C.cell_src:
        X, Y = C.cell_src[f], C.cell_tgt[f]
        for f1 in C.parallel_targets(f):
            for f2 in C.parallel_targets(f1):
                for i in range(C.dim2(f, f1)):
                    for j in range(C.dim2(f1, f2)):
                        t1 = C.basis2(f, f1, i)
                        t2 = C.basis2(f1, f2, j)
                        lhs = F.map2(C.vcomp(t2, t1))
                        rhs = D.vcomp(F.map2(t2), F.map2(t1))
                        if not D.eq2(lhs, rhs):
                            rep.add("two-map-vcomp", (f, f1, f2, j, i))

    # Fhat endpoints, invertibility and naturality
    for (g, f), t in F.fhat.items():
        Fg, Ff = F.cell_map[g], F.cell_map[f]
        if t.src != D.compose(Fg, Ff) or t.tgt != F.cell_map[C.compose(g, f)]:
            rep.add("Fhat-endpoints", (g, f))
            continue
        try:
            D.invert2(t)
        except ValueError:
            rep.add("Fhat-invertibility", (g, f))
    for (g, f), t in F.fhat.items():
        for g2 in C.parallel_targets(g):
            for f2 in C.parallel_targets(f):
                for j in range(C.dim2(g, g2)):
                    for i in range(C.dim2(f, f2)):
                        tau_g = C.basis2(g, g2, j)
                        tau_f = C.basis2(f, f2, i)
                        lhs = D.vcomp(F.fhat[(g2, f2)],
                                      D.hcomp(F.map2(tau_g), F.map2(tau_f)))
                        rhs = D.vcomp(F.map2(C.hcomp(tau_g, tau_f)), t)
                        if not D.eq2(lhs, rhs):
                            rep.add("Fhat-naturality", (g, f, g2, f2, j, i))

    # hexagonal axiom (alpha identities in the strict setting):
    # Fhat(h, g o f) . (1_{F(h)} o Fhat(g, f)) = Fhat(h o g, f) . (Fhat(h, g) o 1_{F(f)})
    cells = list(C.all_cells())
    for h in cells:
        for g in cells:
            if C.cell_tgt[g] != C.cell_src[h]:
                continue
            for f in cells:
                if C.cell_tgt[f] != C.cell_src[g]:
                    continue
                lhs = D.vcomp(F.fhat[(h, C.compose(g, f))],
                              D.hcomp(D.id2(F.cell_map[h]), F.fhat[(g, f)]))
                rhs = D.vcomp(F.fhat[(C.compose(h, g), f)],
                              D.hcomp(F.fhat[(h, g)], D.id2(F.cell_map[f])))
                if not D.eq2(lhs, rhs):
                    rep.add("hexagonal-axiom", (h, g, f))

    # triangular axioms:
    # Fhat(f, id_X) = 1_{F(f)} o F0(X)   and   Fhat(id_Y, f) = F0(Y) o 1_{F(f)}
    for f in cells:
        X, Y = C.cell_src[f], C.cell_tgt[f]
        lhs = F.fhat[(f, C.identity_cell[X])]
        rhs = D.hcomp(D.id2(F.cell_map[f]), F.f0[X])
        if not D.eq2(lhs, rhs):
            rep.add("triangular-axiom-right", f)
        lhs = F.fhat[(C.identity_cell[Y], f)]
        rhs = D.hcomp(F.f0[Y], D.id2(F.cell_map[f]))
        if not D.eq2(lhs, rhs):
            rep.add("triangular-axiom-left", f)
    return rep


# ----- pseudonatural transformations and modifications ------------------


@dataclass
class PseudonaturalTransformation:
    """xi: F => G given by 1-cells xi_X and 2-isomorphisms
    xihat(f): G(f) o xi_X => xi_Y o F(f)."""

    F: Pseudofunctor
    G: Pseudofunctor
    xi: dict          # X -> 1-cell of the codomain
    xihat: dict       # f -> TwoMorphism


def identity_transformation(F: Pseudofunctor) -> PseudonaturalTransformation:
    D = F.cod
    xi = {X: D.identity_cell[F.obj_map[X]] for X in F.dom.objects}
    xihat = {f: D.id2(F.cell_map[f]) for f in F.dom.cell_src}
    return PseudonaturalTransformation(F, F, xi, xihat)


def validate_transformation(xi: PseudonaturalTransformation) -> ValidationReport:
    """Coherence of a pseudonatural transformation in the strict setting."""
    rep = ValidationReport()
    F, G = xi.F, xi.G
    C, D = F.dom, F.cod

    for f in C.cell_src:
        X, Y = C.cell_src[f], C.cell_tgt[f]
        t = xi.xihat.get(f)
        if t is None:
            rep.add_structural(f"xihat missing {f}")
            continue
        src = D.compose(G.cell_map[f], xi.xi[X])
        tgt = D.compose(xi.xi[Y], F.cell_map[f])
        if t.src != src or t.tgt != tgt:
            rep.add("xihat-endpoints", f)
    if rep.structural_errors or rep.violations:
        return rep

    # naturality of xihat in f
    for f in C.cell_src:
        X, Y = C.cell_src[f], C.cell_tgt[f]
        for f2 in C.parallel_targets(f):
            for i in range(C.dim2(f, f2)):
                tau = C.basis2(f, f2, i)
                lhs = D.vcomp(D.hcomp(D.id2(xi.xi[Y]), F.map2(tau)),
                              xi.xihat[f])
                rhs = D.vcomp(xi.xihat[f2],
                              D.hcomp(G.map2(tau), D.id2(xi.xi[X])))
                if not D.eq2(lhs, rhs):
                    rep.add("xihat-naturality", (f, f2, i))

    # composition coherence:
    # xihat(g o f) . (Ghat(g, f) o 1_{xi_X}) =
    #   (1_{xi_Z} o Fhat(g, f)) . (xihat(g) o 1_{F(f)}) . (1_{G(g)} o xihat(f))
    cells = list(C.all_cells())
    for g in cells:
        for f in cells:
            if C.cell_tgt[f] != C.cell_src[g]:
                continue
            X = C.cell_src[f]
            Z = C.cell_tgt[g]
            lhs = D.vcomp(xi.xihat[C.compose(g, f)],
                          D.hcomp(G.fhat[(g, f)], D.id2(xi.xi[X])))
            rhs = D.vcomp_many([
                D.hcomp(D.id2(xi.xi[Z]), F.fhat[(g, f)]),
                D.hcomp(xi.xihat[g], D.id2(F.cell_map[f])),
                D.hcomp(G.map2(C.id2(g)), xi.xihat[f]),
            ])
            if not D.eq2(lhs, rhs):
                rep.add("xihat-composition", (g, f))

    # unit coherence: xihat(id_X) . (G0(X)^{-1} o 1_{xi_X}) = 1_{xi_X} o F0(X)^{-1}
    for X in C.objects:
        lhs = D.vcomp(xi.xihat[C.identity_cell[X]],
                      D.hcomp(D.invert2(G.f0[X]), D.id2(xi.xi[X])))
        rhs = D.hcomp(D.id2(xi.xi[X]), D.invert2(F.f0[X]))
        if not D.eq2(lhs, rhs):
            rep.add("xihat-unit", X)
    return rep


@dataclass
class Modification:
    """Family n_X: xi_X => zeta_X; a modification when natural in X, a
    pseudomodification otherwise."""

    xi: PseudonaturalTransformation
    zeta: PseudonaturalTransformation
    n: dict            # X -> TwoMorphism
    natural_flag: bool = True


def validate_modification(m: Modification) -> ValidationReport:
    """Endpoint check always; the naturality square
    zetahat(f) . (1_{G(f)} o n_X) = (n_Y o 1_{F(f)}) . xihat(f)
    is an axiom when natural_flag is set, informative otherwise."""
    rep = ValidationReport()
    F = m.xi.F
    G = m.xi.G
    C, D = F.dom, F.cod
    for X in C.objects:
        t = m.n.get(X)
        if t is None:
            rep.add_structural(f"component missing at {X}")
            continue
        if t.src != m.xi.xi[X] or t.tgt != m.zeta.xi[X]:
            rep.add("component-endpoints", X)
    if not m.natural_flag or rep.structural_errors or rep.violations:
        return rep
    for f in C.cell_src:
        X, Y = C.cell_src[f], C.cell_tgt[f]
        lhs = D.vcomp(m.zeta.xihat[f],
                      D.hcomp(D.id2(G.cell_map[f]), m.n[X]))
        rhs = D.vcomp(D.hcomp(m.n[Y], D.id2(F.cell_map[f])),
                      m.xi.xihat[f])
        if not D.eq2(lhs, rhs):
            rep.add("modification-naturality", f)
    return rep
