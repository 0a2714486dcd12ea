"""First-order deformations of a Gray semigroup, checked at the source.

A first-order deformation perturbs the structural 2-isomorphisms of the
tensor (tensorator, associator, pentagonator) by an infinitesimal term
over K[eps]/(eps^2), keeping the unit data trivial.  This module evaluates
the defining structural equations and the equivalence equations literally
-- every whiskering and composite spelled out over eps-pairs -- without
going through the differential matrices of defcomplex.  The brute-force
classifier built on top exhaustively enumerates candidates and witnesses
over a prime field and is the independent oracle the cohomology results
are compared against.
"""

from __future__ import annotations

import itertools
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field

from .defcomplex import (
    ComplexSelection,
    bicomplex_space,
    pent_space,
    total_differential,
    total_space,
)
from .exactlinalg import (
    PrimeField,
    SparseMatrix,
    Vector,
    from_columns,
    rank,
    solve_in_image,
)
from .gray import GraySemigroup
from .twocat import TwoMorphism, ValidationReport

DEFAULT_ENUM_BOUND = 2 ** 20

ORACLE_KINDS = ("unit", "tens_ass", "ass", "tens", "pent_restricted")


class EnumerationBoundExceeded(ValueError):
    """The candidate space is too large to enumerate exhaustively."""


def candidate_degree(kind: str) -> int:
    """Total degree in which first-order candidates of this kind live."""
    if kind not in ORACLE_KINDS:
        raise ValueError(f"unknown classification kind {kind!r}")
    return 3 if kind == "pent_restricted" else 2


# ----- deformation and witness data -------------------------------------


@dataclass
class FirstOrderDeformation:
    """Sparse first-order data; missing entries are zero.

    tensorator1   -- ((f', g'), (f, g)) -> 2-morphism
                     (f'(x)g') o (f(x)g) => (f'f)(x)(g'g)
    associator1   -- (f, g, h) -> endomorphism of f(x)g(x)h
    pentagonator1 -- (X, Y, Z, T) -> endomorphism of the identity 1-cell
                     of X(x)Y(x)Z(x)T
    The unit perturbation is identically zero by construction.
    """

    tensorator1: dict = dc_field(default_factory=dict)
    associator1: dict = dc_field(default_factory=dict)
    pentagonator1: dict = dc_field(default_factory=dict)


@dataclass
class EquivalenceWitness:
    """Sparse gauge data; missing entries are zero.

    psi1   -- (f, g) -> endomorphism of f(x)g
    omega1 -- (X, Y, Z) -> endomorphism of the identity 1-cell of
              X(x)Y(x)Z
    """

    psi1: dict = dc_field(default_factory=dict)
    omega1: dict = dc_field(default_factory=dict)


def zero_deformation() -> FirstOrderDeformation:
    return FirstOrderDeformation()


def zero_witness() -> EquivalenceWitness:
    return EquivalenceWitness()


# ----- arithmetic over K[eps]/(eps^2) -----------------------------------


@dataclass(frozen=True)
class ECell:
    """2-morphism over K[eps]/(eps^2) as a pair lead + eps * first; both
    components share the same endpoints."""

    lead: TwoMorphism
    eps: TwoMorphism


class _Eps:
    """Composition algebra of eps-pairs over a fixed Gray semigroup."""

    def __init__(self, G: GraySemigroup):
        self.G = G
        self.C = G.base
        self._inv: dict = {}

    def lift(self, t: TwoMorphism) -> ECell:
        return ECell(t, self.C.zero2(t.src, t.tgt))

    def id(self, cell) -> ECell:
        return self.lift(self.C.id2(cell))

    def vcomp(self, a2: ECell, a1: ECell) -> ECell:
        C = self.C
        return ECell(
            C.vcomp(a2.lead, a1.lead),
            C.add2(C.vcomp(a2.eps, a1.lead), C.vcomp(a2.lead, a1.eps)))

    def vcomp_many(self, terms) -> ECell:
        terms = list(terms)
        out = terms[-1]
        for t in reversed(terms[:-1]):
            out = self.vcomp(t, out)
        return out

    def hcomp(self, b: ECell, a: ECell) -> ECell:
        C = self.C
        return ECell(
            C.hcomp(b.lead, a.lead),
            C.add2(C.hcomp(b.eps, a.lead), C.hcomp(b.lead, a.eps)))

    def tensor2(self, a: ECell, b: ECell) -> ECell:
        G, C = self.G, self.C
        return ECell(
            G.tensor2(a.lead, b.lead),
            C.add2(G.tensor2(a.eps, b.lead), G.tensor2(a.lead, b.eps)))

    def invert(self, a: ECell) -> ECell:
        l = self._inv.get(a.lead)
        if l is None:
            l = self._inv[a.lead] = self.C.invert2(a.lead)
        eps = self.C.neg2(self.C.vcomp(self.C.vcomp(l, a.eps), l))
        return ECell(l, eps)

    def lunit(self, t: ECell) -> ECell:
        """Whisker on the left by the identity of the target object."""
        Y = self.C.cell_tgt[t.lead.src]
        return self.hcomp(self.id(self.C.identity_cell[Y]), t)

    def runit(self, t: ECell) -> ECell:
        """Whisker on the right by the identity of the source object."""
        X = self.C.cell_src[t.lead.src]
        return self.hcomp(t, self.id(self.C.identity_cell[X]))

    def eq(self, a: ECell, b: ECell) -> bool:
        return self.C.eq2(a.lead, b.lead) and self.C.eq2(a.eps, b.eps)


# ----- accessors with zero defaults -------------------------------------


def _tens1_endpoints(G, pp, p):
    C = G.base
    src = C.compose(G.tcell(*pp), G.tcell(*p))
    tgt = G.tcell(C.compose(pp[0], p[0]), C.compose(pp[1], p[1]))
    return src, tgt


def _tens1(G, d: FirstOrderDeformation, pp, p) -> TwoMorphism:
    val = d.tensorator1.get((pp, p))
    if val is not None:
        return val
    src, tgt = _tens1_endpoints(G, pp, p)
    return G.base.zero2(src, tgt)


def _ass1(G, d: FirstOrderDeformation, f, g, h) -> TwoMorphism:
    val = d.associator1.get((f, g, h))
    if val is not None:
        return val
    cell = G.tcell(G.tcell(f, g), h)
    return G.base.zero2(cell, cell)


def _pent1(G, d: FirstOrderDeformation, T) -> TwoMorphism:
    val = d.pentagonator1.get(tuple(T))
    if val is not None:
        return val
    e = G.base.identity_cell[G.tobj_many(T)]
    return G.base.zero2(e, e)


class _DeformedCells:
    """The structural 2-isomorphisms of the eps-extension determined by a
    first-order deformation: undeformed value plus eps times the data."""

    def __init__(self, G: GraySemigroup, d: FirstOrderDeformation):
        self.G = G
        self.C = G.base
        self.d = d

    def tens(self, pp, p) -> ECell:
        lead = self.G.tensorator(pp[0], pp[1], p[0], p[1])
        return ECell(lead, _tens1(self.G, self.d, pp, p))

    def ass3(self, f, g, h) -> ECell:
        cell = self.G.tcell(self.G.tcell(f, g), h)
        return ECell(self.C.id2(cell), _ass1(self.G, self.d, f, g, h))

    def pent4(self, T) -> ECell:
        e = self.C.identity_cell[self.G.tobj_many(T)]
        return ECell(self.C.id2(e), _pent1(self.G, self.d, T))


# ----- shape validation -------------------------------------------------


def _check_entry(C, rep, family, key, val, src, tgt):
    if not isinstance(val, TwoMorphism) or val.src != src or val.tgt != tgt:
        rep.add_structural(
            f"{family}[{key!r}] has wrong endpoints (expected {src} => {tgt})")
        return
    if len(val.coeffs) != C.dim2(src, tgt):
        rep.add_structural(f"{family}[{key!r}] has wrong coefficient length")


def deformation_shapes(G: GraySemigroup,
                       d: FirstOrderDeformation) -> ValidationReport:
    """Endpoint/shape check of every stored entry of a deformation."""
    rep = ValidationReport()
    C = G.base
    for key, val in d.tensorator1.items():
        try:
            (fp, gp), (f, g) = key
            if C.cell_tgt[f] != C.cell_src[fp] or \
                    C.cell_tgt[g] != C.cell_src[gp]:
                raise KeyError(key)
            src, tgt = _tens1_endpoints(G, (fp, gp), (f, g))
        except (KeyError, TypeError, ValueError):
            rep.add_structural(f"tensorator1 key {key!r} is not a composable "
                               f"pair of 1-cell pairs")
            continue
        _check_entry(C, rep, "tensorator1", key, val, src, tgt)
    for key, val in d.associator1.items():
        try:
            f, g, h = key
            cell = G.tcell(G.tcell(f, g), h)
        except (KeyError, TypeError, ValueError):
            rep.add_structural(f"associator1 key {key!r} is not a 1-cell triple")
            continue
        _check_entry(C, rep, "associator1", key, val, cell, cell)
    for key, val in d.pentagonator1.items():
        try:
            if len(key) != 4:
                raise ValueError(key)
            e = C.identity_cell[G.tobj_many(key)]
        except (KeyError, TypeError, ValueError):
            rep.add_structural(
                f"pentagonator1 key {key!r} is not an object quadruple")
            continue
        _check_entry(C, rep, "pentagonator1", key, val, e, e)
    return rep


def witness_shapes(G: GraySemigroup, w: EquivalenceWitness) -> ValidationReport:
    rep = ValidationReport()
    C = G.base
    for key, val in w.psi1.items():
        try:
            f, g = key
            cell = G.tcell(f, g)
        except (KeyError, TypeError, ValueError):
            rep.add_structural(f"psi1 key {key!r} is not a 1-cell pair")
            continue
        _check_entry(C, rep, "psi1", key, val, cell, cell)
    for key, val in w.omega1.items():
        try:
            if len(key) != 3:
                raise ValueError(key)
            e = C.identity_cell[G.tobj_many(key)]
        except (KeyError, TypeError, ValueError):
            rep.add_structural(f"omega1 key {key!r} is not an object triple")
            continue
        _check_entry(C, rep, "omega1", key, val, e, e)
    return rep


# ----- the eight structural equations -----------------------------------


def _nonidentity_basis(C, f):
    """(tau, target) pairs over all non-identity basis 2-cells out of f."""
    out = []
    for f2 in C.parallel_targets(f):
        for i in range(C.dim2(f, f2)):
            tau = C.basis2(f, f2, i)
            if f2 == f and C.eq2(tau, C.id2(f)):
                continue
            out.append((tau, f2))
    return out


class _StructuralSystem:
    """Ordered instance list of the structural equations, each instance a
    function taking the deformed cells to an (LHS, RHS) pair of eps-pairs.
    The lead components agree by the undeformed axioms; the eps components
    are linear in the deformation data."""

    def __init__(self, G: GraySemigroup):
        self.G = G
        self.C = G.base
        self.E = _Eps(G)
        self.instances = []
        self._build()

    # -- helpers --

    def _add(self, name, key, fn):
        self.instances.append((name, key, fn))

    def _composable(self, cells):
        C = self.C
        return [(fp, f) for fp in cells for f in cells
                if C.cell_tgt[f] == C.cell_src[fp]]

    def _build(self):
        G, C, E = self.G, self.C, self.E
        cells = sorted(C.cell_src)
        objs = sorted(C.objects)
        idc = C.identity_cell
        comp = self._composable(cells)
        pairs2 = [(f, g) for f in cells for g in cells]
        comp2 = [((fp, gp), (f, g)) for (fp, f) in comp for (gp, g) in comp]

        # naturality of the tensorator in each 2-cell slot
        for (pp, p) in comp2:
            fp, gp = pp
            f, g = p
            slots = (fp, gp, f, g)
            for s in range(4):
                for tau, _tgt in _nonidentity_basis(C, slots[s]):
                    ts = [C.id2(c) for c in slots]
                    ts[s] = tau
                    pp_t = (ts[0].tgt, ts[1].tgt)
                    p_t = (ts[2].tgt, ts[3].tgt)

                    def fn(dc, pp=pp, p=p, ts=tuple(ts), pp_t=pp_t, p_t=p_t):
                        pre = C.hcomp(G.tensor2(ts[0], ts[1]),
                                      G.tensor2(ts[2], ts[3]))
                        post = G.tensor2(C.hcomp(ts[0], ts[2]),
                                         C.hcomp(ts[1], ts[3]))
                        lhs = E.vcomp(E.lift(post), dc.tens(pp, p))
                        rhs = E.vcomp(dc.tens(pp_t, p_t), E.lift(pre))
                        return lhs, rhs

                    self._add("tensor-naturality", (pp, p, s), fn)

        # cocycle rule of the tensorator on composable triples
        for (fpp, fp, f) in [(a, b, c) for (a, b) in comp for c in cells
                             if C.cell_tgt[c] == C.cell_src[b]]:
            for (gpp, gp, g) in [(a, b, c) for (a, b) in comp for c in cells
                                 if C.cell_tgt[c] == C.cell_src[b]]:

                def fn(dc, fpp=fpp, fp=fp, f=f, gpp=gpp, gp=gp, g=g):
                    lhs = E.vcomp(
                        dc.tens((fpp, gpp),
                                (C.compose(fp, f), C.compose(gp, g))),
                        E.hcomp(E.id(G.tcell(fpp, gpp)),
                                dc.tens((fp, gp), (f, g))))
                    rhs = E.vcomp(
                        dc.tens((C.compose(fpp, fp), C.compose(gpp, gp)),
                                (f, g)),
                        E.hcomp(dc.tens((fpp, gpp), (fp, gp)),
                                E.id(G.tcell(f, g))))
                    return lhs, rhs

                self._add("tensor-cocycle", ((fpp, gpp), (fp, gp), (f, g)), fn)

        # unit rule of the tensorator (unit perturbation is zero)
        for (f, g) in pairs2:
            Xp = C.cell_tgt[f]
            Yp = C.cell_tgt[g]
            X = C.cell_src[f]
            Y = C.cell_src[g]

            def fn_post(dc, f=f, g=g, Xp=Xp, Yp=Yp):
                lhs = dc.tens((idc[Xp], idc[Yp]), (f, g))
                rhs = E.hcomp(E.id(idc[G.tobj(Xp, Yp)]), E.id(G.tcell(f, g)))
                return lhs, rhs

            def fn_pre(dc, f=f, g=g, X=X, Y=Y):
                lhs = dc.tens((f, g), (idc[X], idc[Y]))
                rhs = E.hcomp(E.id(G.tcell(f, g)), E.id(idc[G.tobj(X, Y)]))
                return lhs, rhs

            self._add("tensor-unit", (f, g, "post"), fn_post)
            self._add("tensor-unit", (f, g, "pre"), fn_pre)

        # naturality of the associator in each 2-cell slot
        for (f, g, h) in itertools.product(cells, repeat=3):
            for s in range(3):
                for tau, _tgt in _nonidentity_basis(C, (f, g, h)[s]):
                    ts = [C.id2(c) for c in (f, g, h)]
                    ts[s] = tau
                    tilde = (ts[0].tgt, ts[1].tgt, ts[2].tgt)

                    def fn(dc, f=f, g=g, h=h, ts=tuple(ts), tilde=tilde):
                        post = G.tensor2(ts[0], G.tensor2(ts[1], ts[2]))
                        pre = G.tensor2(G.tensor2(ts[0], ts[1]), ts[2])
                        lhs = E.vcomp(E.lunit(E.lift(post)), dc.ass3(f, g, h))
                        rhs = E.vcomp(dc.ass3(*tilde), E.runit(E.lift(pre)))
                        return lhs, rhs

                    self._add("associator-naturality", ((f, g, h), s), fn)

        # exchange rule between associator and tensorator
        for ((fp, f), (gp, g), (hp, h)) in itertools.product(comp, repeat=3):

            def fn(dc, fp=fp, f=f, gp=gp, g=g, hp=hp, h=h):
                ff = C.compose(fp, f)
                gg = C.compose(gp, g)
                hh = C.compose(hp, h)
                lhs = E.vcomp_many([
                    dc.ass3(ff, gg, hh),
                    E.runit(E.tensor2(dc.tens((fp, gp), (f, g)), E.id(hh))),
                    E.runit(dc.tens((G.tcell(fp, gp), hp),
                                    (G.tcell(f, g), h))),
                ])
                rhs = E.vcomp_many([
                    E.lunit(E.tensor2(E.id(ff), dc.tens((gp, hp), (g, h)))),
                    E.lunit(dc.tens((fp, G.tcell(gp, hp)),
                                    (f, G.tcell(g, h)))),
                    E.hcomp(dc.ass3(fp, gp, hp),
                            E.id(G.tcell(f, G.tcell(g, h)))),
                    E.hcomp(E.id(G.tcell(G.tcell(fp, gp), hp)),
                            dc.ass3(f, g, h)),
                ])
                return lhs, rhs

            self._add("associator-exchange",
                      ((fp, gp, hp), (f, g, h)), fn)

        # unit rule of the associator
        for (X, Y, Z) in itertools.product(objs, repeat=3):

            def fn(dc, X=X, Y=Y, Z=Z):
                lhs = dc.ass3(idc[X], idc[Y], idc[Z])
                rhs = E.id(idc[G.tobj_many((X, Y, Z))])
                return lhs, rhs

            self._add("associator-unit", (X, Y, Z), fn)

        # naturality (modification rule) of the pentagonator
        for (f, g, h, k) in itertools.product(cells, repeat=4):
            self._add("pentagon-naturality", (f, g, h, k),
                      self._pent_nat_fn(f, g, h, k))

        # coherence rule of the pentagonator
        for T5 in itertools.product(objs, repeat=5):
            self._add("pentagon-coherence", T5, self._pent_coh_fn(T5))

    def _pent_nat_fn(self, f, g, h, k):
        G, C, E = self.G, self.C, self.E
        idc = C.identity_cell

        def fn(dc, f=f, g=g, h=h, k=k):
            fg = G.tcell(f, g)
            hk = G.tcell(h, k)
            fgh = G.tcell(fg, h)
            ghk = G.tcell(g, hk)
            fghk = G.tcell(fgh, k)
            src = tuple(C.cell_src[c] for c in (f, g, h, k))
            tgt = tuple(C.cell_tgt[c] for c in (f, g, h, k))
            lhs = E.vcomp_many([
                E.lunit(dc.ass3(f, g, hk)),
                E.runit(dc.ass3(fg, h, k)),
                E.hcomp(E.id(fghk), dc.pent4(src)),
            ])
            rhs = E.vcomp_many([
                E.hcomp(dc.pent4(tgt), E.id(fghk)),
                E.lunit(E.invert(dc.tens(
                    (idc[tgt[0]], idc[G.tobj_many(tgt[1:])]), (f, ghk)))),
                E.lunit(E.tensor2(E.id(f), dc.ass3(g, h, k))),
                E.lunit(dc.tens(
                    (f, ghk), (idc[src[0]], idc[G.tobj_many(src[1:])]))),
                E.runit(E.lunit(dc.ass3(f, G.tcell(g, h), k))),
                E.runit(E.invert(dc.tens(
                    (idc[G.tobj_many(tgt[:3])], idc[tgt[3]]), (fgh, k)))),
                E.runit(E.tensor2(dc.ass3(f, g, h), E.id(k))),
                E.runit(dc.tens(
                    (fgh, k), (idc[G.tobj_many(src[:3])], idc[src[3]]))),
            ])
            return lhs, rhs

        return fn

    def _tpast_left(self, dc, X, quad):
        """Tensor of the identity 1-cell at X with a pentagonator cell,
        padded by its interchange 2-isomorphisms."""
        G, C, E = self.G, self.C, self.E
        idX = C.identity_cell[X]
        rest = C.identity_cell[G.tobj_many(quad)]
        return E.vcomp_many([
            E.invert(dc.tens((idX, rest), (idX, rest))),
            E.tensor2(E.id(idX), dc.pent4(quad)),
            dc.tens((idX, rest), (idX, C.compose(rest, rest))),
            E.hcomp(E.id(G.tcell(idX, rest)),
                    dc.tens((idX, rest), (idX, rest))),
        ])

    def _tpast_right(self, dc, quad, U):
        G, C, E = self.G, self.C, self.E
        idU = C.identity_cell[U]
        rest = C.identity_cell[G.tobj_many(quad)]
        return E.vcomp_many([
            E.invert(dc.tens((rest, idU), (rest, idU))),
            E.tensor2(dc.pent4(quad), E.id(idU)),
            dc.tens((rest, idU), (C.compose(rest, rest), idU)),
            E.hcomp(E.id(G.tcell(rest, idU)),
                    dc.tens((rest, idU), (rest, idU))),
        ])

    def _pent_coh_fn(self, T5):
        G, C, E = self.G, self.C, self.E
        idc = C.identity_cell

        def fn(dc, T5=T5):
            X, Y, Z, T, U = T5
            XY = G.tobj(X, Y)
            YZ = G.tobj(Y, Z)
            ZT = G.tobj(Z, T)
            TU = G.tobj(T, U)
            ZTU = G.tobj(ZT, U)
            YZT = G.tobj(YZ, T)
            XYZ = G.tobj(XY, Z)
            lhs = E.vcomp_many([
                E.runit(dc.pent4((XY, Z, T, U))),
                E.lunit(E.invert(dc.ass3(idc[X], idc[Y], idc[ZTU]))),
                E.runit(E.lunit(dc.pent4((X, Y, ZT, U)))),
                E.runit(self._tpast_right(dc, (X, Y, Z, T), U)),
            ])
            rhs = E.vcomp_many([
                E.lunit(dc.pent4((X, Y, Z, TU))),
                E.runit(dc.ass3(idc[XYZ], idc[T], idc[U])),
                E.runit(E.lunit(dc.pent4((X, YZ, T, U)))),
                E.lunit(self._tpast_left(dc, X, (Y, Z, T, U))),
                E.runit(E.lunit(dc.ass3(idc[X], idc[YZT], idc[U]))),
            ])
            return lhs, rhs

        return fn

    # -- evaluation --

    def residual(self, fn, dc: _DeformedCells) -> TwoMorphism:
        """eps(LHS) - eps(RHS); the lead components must agree because the
        undeformed structure satisfies its axioms."""
        C = self.C
        lhs, rhs = fn(dc)
        assert C.eq2(lhs.lead, rhs.lead), \
            "undeformed structural equation violated"
        return C.add2(lhs.eps, C.neg2(rhs.eps))

    def residual_list(self, d: FirstOrderDeformation) -> list:
        """All residual coefficients in instance order (linear in d)."""
        dc = _DeformedCells(self.G, d)
        out = []
        for _name, _key, fn in self.instances:
            out.extend(self.residual(fn, dc).coeffs)
        return out


def _structural_system(G: GraySemigroup) -> _StructuralSystem:
    if not hasattr(G, "_structural_system"):
        G._structural_system = _StructuralSystem(G)
    return G._structural_system


def check_structural(G: GraySemigroup,
                     d: FirstOrderDeformation) -> ValidationReport:
    """Evaluate the eight structural equations of the eps-extension with d
    substituted and extract the first-order coefficient; lists every
    violated condition name with its instance key."""
    rep = deformation_shapes(G, d)
    if rep.structural_errors:
        return rep
    sys = _structural_system(G)
    dc = _DeformedCells(G, d)
    for name, key, fn in sys.instances:
        if not G.base.is_zero2(sys.residual(fn, dc)):
            rep.add(name, key)
    return rep


# ----- the five equivalence equations -----------------------------------


def _sub2(C, a, b):
    return C.add2(a, C.neg2(b))


def _sum2(C, terms):
    terms = list(terms)
    out = terms[0]
    for t in terms[1:]:
        out = C.add2(out, t)
    return out


class _TransferContext:
    """Lookup of the data entering the equivalence equations, with zero
    defaults: two deformations and a gauge witness."""

    def __init__(self, G, d1, d2, w):
        self.G = G
        self.C = G.base
        self.d1 = d1
        self.d2 = d2
        self.w = w

    def psi(self, f, g):
        val = self.w.psi1.get((f, g))
        if val is not None:
            return val
        cell = self.G.tcell(f, g)
        return self.C.zero2(cell, cell)

    def omega(self, T):
        val = self.w.omega1.get(tuple(T))
        if val is not None:
            return val
        e = self.C.identity_cell[self.G.tobj_many(T)]
        return self.C.zero2(e, e)

    def t1(self, pp, p):
        return _tens1(self.G, self.d1, pp, p)

    def t2(self, pp, p):
        return _tens1(self.G, self.d2, pp, p)

    def a1(self, t):
        return _ass1(self.G, self.d1, *t)

    def a2(self, t):
        return _ass1(self.G, self.d2, *t)

    def p1(self, T):
        return _pent1(self.G, self.d1, T)

    def p2(self, T):
        return _pent1(self.G, self.d2, T)


class _EquivalenceSystem:
    """Ordered instances of the equations stating that a gauge witness
    carries one first-order deformation into another; each instance maps a
    _TransferContext to its residual 2-morphism (zero iff satisfied)."""

    def __init__(self, G: GraySemigroup):
        self.G = G
        self.C = G.base
        self.instances = []
        self._build()

    def _build(self):
        G, C = self.G, self.C
        idc = C.identity_cell
        cells = sorted(C.cell_src)
        objs = sorted(C.objects)
        comp = [(fp, f) for fp in cells for f in cells
                if C.cell_tgt[f] == C.cell_src[fp]]

        # naturality of the gauge 2-cells
        for f in cells:
            for g in cells:
                for s in range(2):
                    for tau, _t in _nonidentity_basis(C, (f, g)[s]):
                        ts = [C.id2(f), C.id2(g)]
                        ts[s] = tau
                        ft, gt = ts[0].tgt, ts[1].tgt

                        def fn(ctx, f=f, g=g, ts=tuple(ts), ft=ft, gt=gt):
                            pre = G.tensor2(ts[0], ts[1])
                            lhs = C.vcomp(pre, ctx.psi(f, g))
                            rhs = C.vcomp(ctx.psi(ft, gt), pre)
                            return _sub2(C, lhs, rhs)

                        self.instances.append(
                            ("gauge-naturality", (f, g, s), fn))

        # transfer of the tensorator along the gauge
        for (fp, f) in comp:
            for (gp, g) in comp:

                def fn(ctx, fp=fp, f=f, gp=gp, g=g):
                    t0 = G.tensorator(fp, gp, f, g)
                    ff = C.compose(fp, f)
                    gg = C.compose(gp, g)
                    lhs = _sum2(C, [
                        C.vcomp(ctx.psi(ff, gg), t0),
                        ctx.t1(((fp, gp)), (f, g)),
                    ])
                    rhs = _sum2(C, [
                        ctx.t2((fp, gp), (f, g)),
                        C.vcomp(t0, C.hcomp(ctx.psi(fp, gp),
                                            C.id2(G.tcell(f, g)))),
                        C.vcomp(t0, C.hcomp(C.id2(G.tcell(fp, gp)),
                                            ctx.psi(f, g))),
                    ])
                    return _sub2(C, lhs, rhs)

                self.instances.append(
                    ("tensor-transfer", ((fp, gp), (f, g)), fn))

        # gauge at identity pairs must vanish (unit data stays trivial)
        for X in objs:
            for Y in objs:

                def fn(ctx, X=X, Y=Y):
                    return ctx.psi(idc[X], idc[Y])

                self.instances.append(("gauge-unit", (X, Y), fn))

        # transfer of the associator along the gauge
        for (f, g, h) in itertools.product(cells, repeat=3):
            self.instances.append(
                ("associator-transfer", (f, g, h),
                 self._ass_transfer_fn(f, g, h)))

        # transfer of the pentagonator along the gauge
        for T4 in itertools.product(objs, repeat=4):
            self.instances.append(
                ("pentagon-transfer", T4, self._pent_transfer_fn(T4)))

    def _ass_transfer_fn(self, f, g, h):
        G, C = self.G, self.C
        idc = C.identity_cell

        def fn(ctx, f=f, g=g, h=h):
            X, Y, Z = (C.cell_src[c] for c in (f, g, h))
            Xp, Yp, Zp = (C.cell_tgt[c] for c in (f, g, h))
            fg = G.tcell(f, g)
            gh = G.tcell(g, h)
            fgh = G.tcell(fg, h)
            lhs = _sum2(C, [
                ctx.a2((f, g, h)),
                C.neg2(ctx.t2((idc[G.tobj(Xp, Yp)], idc[Zp]), (fg, h))),
                G.tensor2(ctx.psi(f, g), C.id2(h)),
                ctx.t2((fg, h), (idc[G.tobj(X, Y)], idc[Z])),
                ctx.psi(fg, h),
                C.hcomp(C.id2(fgh), ctx.omega((X, Y, Z))),
            ])
            rhs = _sum2(C, [
                C.hcomp(ctx.omega((Xp, Yp, Zp)), C.id2(fgh)),
                C.neg2(ctx.t2((idc[Xp], idc[G.tobj(Yp, Zp)]), (f, gh))),
                G.tensor2(C.id2(f), ctx.psi(g, h)),
                ctx.t2((f, gh), (idc[X], idc[G.tobj(Y, Z)])),
                ctx.psi(f, gh),
                ctx.a1((f, g, h)),
            ])
            return _sub2(C, lhs, rhs)

        return fn

    def _pent_transfer_fn(self, T4):
        G, C = self.G, self.C
        idc = C.identity_cell

        def fn(ctx, T4=T4):
            X, Y, Z, T = T4
            XY = G.tobj(X, Y)
            YZ = G.tobj(Y, Z)
            ZT = G.tobj(Z, T)
            XYZ = G.tobj(XY, Z)
            YZT = G.tobj(YZ, T)
            eXY_ZT = ((idc[XY], idc[ZT]), (idc[XY], idc[ZT]))
            lhs = _sum2(C, [
                ctx.p2(T4),
                G.tensor2(ctx.omega((X, Y, Z)), C.id2(idc[T])),
                ctx.psi(idc[XYZ], idc[T]),
                C.neg2(ctx.a2((idc[X], idc[YZ], idc[T]))),
                ctx.omega((X, YZ, T)),
                G.tensor2(C.id2(idc[X]), ctx.omega((Y, Z, T))),
                ctx.psi(idc[X], idc[YZT]),
            ])
            rhs = _sum2(C, [
                C.neg2(ctx.a1((idc[XY], idc[Z], idc[T]))),
                ctx.omega((XY, Z, T)),
                C.neg2(ctx.t1(*eXY_ZT)),
                C.neg2(G.tensor2(ctx.psi(idc[X], idc[Y]), C.id2(idc[ZT]))),
                G.tensor2(C.id2(idc[XY]), ctx.psi(idc[Z], idc[T])),
                ctx.t2(*eXY_ZT),
                C.neg2(ctx.a2((idc[X], idc[Y], idc[ZT]))),
                ctx.omega((X, Y, ZT)),
                ctx.p1(T4),
            ])
            return _sub2(C, lhs, rhs)

        return fn


def _equivalence_system(G: GraySemigroup) -> _EquivalenceSystem:
    if not hasattr(G, "_equivalence_system"):
        G._equivalence_system = _EquivalenceSystem(G)
    return G._equivalence_system


def check_equivalence(G: GraySemigroup, d1: FirstOrderDeformation,
                      d2: FirstOrderDeformation,
                      w: EquivalenceWitness) -> ValidationReport:
    """Does the gauge witness w carry d1 into d2?  Evaluates the transfer
    equations literally and lists every violated instance."""
    rep = deformation_shapes(G, d1).merged(
        deformation_shapes(G, d2)).merged(witness_shapes(G, w))
    if rep.structural_errors:
        return rep
    ctx = _TransferContext(G, d1, d2, w)
    for name, key, fn in _equivalence_system(G).instances:
        if not G.base.is_zero2(fn(ctx)):
            rep.add(name, key)
    return rep


# ----- gauge shift of the zero deformation ------------------------------


def equivalence_shift(G: GraySemigroup, w: EquivalenceWitness,
                      verify: bool = True) -> FirstOrderDeformation:
    """The unique deformation the zero deformation is carried into by the
    gauge witness w (solved from the transfer equations; linear in w).
    With verify=True the result is re-checked against the literal
    equations through check_equivalence."""
    rep = witness_shapes(G, w)
    if not rep.ok:
        raise ValueError("; ".join(rep.structural_errors))
    C = G.base
    idc = C.identity_cell
    ctx = _TransferContext(G, zero_deformation(), zero_deformation(), w)
    d = FirstOrderDeformation()
    cells = sorted(C.cell_src)
    objs = sorted(C.objects)
    comp = [(fp, f) for fp in cells for f in cells
            if C.cell_tgt[f] == C.cell_src[fp]]

    for (fp, f) in comp:
        for (gp, g) in comp:
            t0 = G.tensorator(fp, gp, f, g)
            val = _sum2(C, [
                C.vcomp(ctx.psi(C.compose(fp, f), C.compose(gp, g)), t0),
                C.neg2(C.vcomp(t0, C.hcomp(ctx.psi(fp, gp),
                                           C.id2(G.tcell(f, g))))),
                C.neg2(C.vcomp(t0, C.hcomp(C.id2(G.tcell(fp, gp)),
                                           ctx.psi(f, g)))),
            ])
            if not C.is_zero2(val):
                d.tensorator1[((fp, gp), (f, g))] = val

    def t2s(pp, p):
        return _tens1(G, d, pp, p)

    for (f, g, h) in itertools.product(cells, repeat=3):
        X, Y, Z = (C.cell_src[c] for c in (f, g, h))
        Xp, Yp, Zp = (C.cell_tgt[c] for c in (f, g, h))
        fg = G.tcell(f, g)
        gh = G.tcell(g, h)
        fgh = G.tcell(fg, h)
        val = _sum2(C, [
            C.hcomp(ctx.omega((Xp, Yp, Zp)), C.id2(fgh)),
            C.neg2(t2s((idc[Xp], idc[G.tobj(Yp, Zp)]), (f, gh))),
            G.tensor2(C.id2(f), ctx.psi(g, h)),
            t2s((f, gh), (idc[X], idc[G.tobj(Y, Z)])),
            ctx.psi(f, gh),
            t2s((idc[G.tobj(Xp, Yp)], idc[Zp]), (fg, h)),
            C.neg2(G.tensor2(ctx.psi(f, g), C.id2(h))),
            C.neg2(t2s((fg, h), (idc[G.tobj(X, Y)], idc[Z]))),
            C.neg2(ctx.psi(fg, h)),
            C.neg2(C.hcomp(C.id2(fgh), ctx.omega((X, Y, Z)))),
        ])
        if not C.is_zero2(val):
            d.associator1[(f, g, h)] = val

    def a2s(t):
        return _ass1(G, d, *t)

    for T4 in itertools.product(objs, repeat=4):
        X, Y, Z, T = T4
        XY = G.tobj(X, Y)
        YZ = G.tobj(Y, Z)
        ZT = G.tobj(Z, T)
        XYZ = G.tobj(XY, Z)
        YZT = G.tobj(YZ, T)
        eXY_ZT = ((idc[XY], idc[ZT]), (idc[XY], idc[ZT]))
        lrest = _sum2(C, [
            G.tensor2(ctx.omega((X, Y, Z)), C.id2(idc[T])),
            ctx.psi(idc[XYZ], idc[T]),
            C.neg2(a2s((idc[X], idc[YZ], idc[T]))),
            ctx.omega((X, YZ, T)),
            G.tensor2(C.id2(idc[X]), ctx.omega((Y, Z, T))),
            ctx.psi(idc[X], idc[YZT]),
        ])
        rrest = _sum2(C, [
            ctx.omega((XY, Z, T)),
            C.neg2(G.tensor2(ctx.psi(idc[X], idc[Y]), C.id2(idc[ZT]))),
            G.tensor2(C.id2(idc[XY]), ctx.psi(idc[Z], idc[T])),
            t2s(*eXY_ZT),
            C.neg2(a2s((idc[X], idc[Y], idc[ZT]))),
            ctx.omega((X, Y, ZT)),
        ])
        val = _sub2(C, rrest, lrest)
        if not C.is_zero2(val):
            d.pentagonator1[T4] = val

    if verify:
        out = check_equivalence(G, zero_deformation(), d, w)
        assert out.ok, f"gauge shift failed verification: {out.violations[:3]}"
    return d


# ----- coordinates <-> sparse data --------------------------------------


def _summand_slices(sp):
    out = []
    for i, desc in enumerate(sp.summands):
        off = sp.offsets[i]
        end = sp.offsets[i + 1] if i + 1 < len(sp.offsets) else sp.dim_free
        out.append((desc, off, end - off))
    return out


def _bi_family(desc):
    if desc[1:] == (1, 1):
        return "tensorator1"
    if desc[1:] == (0, 2):
        return "associator1"
    if desc[1:] == (0, 1):
        return "psi1"
    raise ValueError(f"summand {desc} carries no deformation or gauge data")


def _families_from_vector(G: GraySemigroup, kind: str, q: int, vec: Vector):
    sel = ComplexSelection(kind)
    sp = total_space(G, sel, q)
    if vec.length != sp.dim_free:
        raise ValueError("coordinate vector has the wrong length")
    C = G.base
    out = {"tensorator1": {}, "associator1": {}, "pentagonator1": {},
           "psi1": {}, "omega1": {}}
    for desc, off, dim in _summand_slices(sp):
        local = Vector(dim, {i - off: v for i, v in vec.entries.items()
                             if off <= i < off + dim})
        if desc[0] == "bi":
            pf = bicomplex_space(G, desc[1], desc[2]).pf
            family = _bi_family(desc)
            for t in pf.tuples:
                tm = pf.value(local, t)
                if C.is_zero2(tm):
                    continue
                out[family][t if family == "tensorator1" else t[0]] = tm
        else:
            psp = pent_space(G, desc[1])
            family = "omega1" if desc[1] == 2 else "pentagonator1"
            for T in psp.tuples:
                tm = psp.value(local, T)
                if not C.is_zero2(tm):
                    out[family][T] = tm
    return out


def deformation_from_vector(G: GraySemigroup, kind: str,
                            vec: Vector) -> FirstOrderDeformation:
    """Decode total free coordinates of the candidate degree of a selection
    into sparse deformation data."""
    fam = _families_from_vector(G, kind, candidate_degree(kind), vec)
    if fam["psi1"] or fam["omega1"]:
        raise ValueError("vector carries gauge data, not deformation data")
    return FirstOrderDeformation(fam["tensorator1"], fam["associator1"],
                                 fam["pentagonator1"])


def witness_from_vector(G: GraySemigroup, kind: str,
                        vec: Vector) -> EquivalenceWitness:
    """Decode total free coordinates one degree below the candidates."""
    fam = _families_from_vector(G, kind, candidate_degree(kind) - 1, vec)
    if fam["tensorator1"] or fam["associator1"] or fam["pentagonator1"]:
        raise ValueError("vector carries deformation data, not gauge data")
    return EquivalenceWitness(fam["psi1"], fam["omega1"])


def _families_to_vector(G: GraySemigroup, kind: str, q: int,
                        families: dict) -> Vector:
    sel = ComplexSelection(kind)
    sp = total_space(G, sel, q)
    K = G.base.field
    C = G.base
    entries = {}
    consumed = set()
    for desc, off, _dim in _summand_slices(sp):
        if desc[0] == "bi":
            pf = bicomplex_space(G, desc[1], desc[2]).pf
            family = _bi_family(desc)
            for key, tm in families.get(family, {}).items():
                t = key if family == "tensorator1" else (key,)
                for b, c in enumerate(tm.coeffs):
                    if not K.is_zero(c):
                        entries[off + pf.pos[(t, b)]] = c
            consumed.add(family)
        else:
            psp = pent_space(G, desc[1])
            family = "omega1" if desc[1] == 2 else "pentagonator1"
            for T, tm in families.get(family, {}).items():
                for b, c in enumerate(tm.coeffs):
                    if not K.is_zero(c):
                        entries[off + psp.pos[(tuple(T), b)]] = c
            consumed.add(family)
    for family, data in families.items():
        if family in consumed:
            continue
        for key, tm in data.items():
            if not C.is_zero2(tm):
                raise ValueError(
                    f"{family}[{key!r}] is nonzero but the {kind!r} "
                    f"selection has no summand for it")
    return Vector(sp.dim_free, entries)


def vector_from_deformation(G: GraySemigroup, kind: str,
                            d: FirstOrderDeformation) -> Vector:
    rep = deformation_shapes(G, d)
    if not rep.ok:
        raise ValueError("; ".join(rep.structural_errors))
    return _families_to_vector(
        G, kind, candidate_degree(kind),
        {"tensorator1": d.tensorator1, "associator1": d.associator1,
         "pentagonator1": d.pentagonator1})


def vector_from_witness(G: GraySemigroup, kind: str,
                        w: EquivalenceWitness) -> Vector:
    rep = witness_shapes(G, w)
    if not rep.ok:
        raise ValueError("; ".join(rep.structural_errors))
    return _families_to_vector(
        G, kind, candidate_degree(kind) - 1,
        {"psi1": w.psi1, "omega1": w.omega1})


# ----- vector arithmetic helpers ----------------------------------------


def _vec_sub(K, a: Vector, b: Vector) -> Vector:
    entries = dict(a.entries)
    for i, v in b.entries.items():
        x = K.sub(entries.get(i, K.zero()), v)
        if K.is_zero(x):
            entries.pop(i, None)
        else:
            entries[i] = x
    return Vector(a.length, entries)


def _vec_combine(K, basis: list, coeffs, length: int | None = None) -> Vector:
    if length is None:
        length = basis[0].length if basis else 0
    entries: dict = {}
    for c, b in zip(coeffs, basis):
        if K.is_zero(c):
            continue
        for i, v in b.entries.items():
            x = K.add(entries.get(i, K.zero()), K.mul(c, v))
            if K.is_zero(x):
                entries.pop(i, None)
            else:
                entries[i] = x
    return Vector(length, entries)


# ----- witness search ---------------------------------------------------


def find_equivalence(G: GraySemigroup, d1: FirstOrderDeformation,
                     d2: FirstOrderDeformation,
                     kind: str = "unit") -> EquivalenceWitness | None:
    """A gauge witness carrying d1 into d2 within the given selection, or
    None.  Both inputs must satisfy the structural equations.  The search
    solves the linear gauge system exactly; any witness found is
    re-verified against the literal transfer equations."""
    for d in (d1, d2):
        rep = check_structural(G, d)
        if not rep.ok:
            raise ValueError(
                f"input fails structural equations: {rep.violations[:3]}"
                f"{rep.structural_errors[:3]}")
    sel = ComplexSelection(kind)
    q = candidate_degree(kind)
    K = G.base.field
    target = _vec_sub(K, vector_from_deformation(G, kind, d2),
                      vector_from_deformation(G, kind, d1))
    wsp = total_space(G, sel, q - 1)
    D = total_differential(G, sel, q - 1)
    cols = [D.mul_vector(b) for b in wsp.basis]
    sol = solve_in_image(from_columns(cols, target.length, K), target)
    if sol is None:
        return None
    wvec = _vec_combine(K, wsp.basis,
                        [sol.entries.get(j, K.zero())
                         for j in range(len(wsp.basis))],
                        length=wsp.dim_free)
    w = witness_from_vector(G, kind, wvec)
    rep = check_equivalence(G, d1, d2, w)
    assert rep.ok, (f"gauge system solution fails the literal transfer "
                    f"equations: {rep.violations[:3]}")
    return w


# ----- brute-force classification ---------------------------------------


def brute_force_classes(G: GraySemigroup, kind: str = "unit",
                        bound: int = DEFAULT_ENUM_BOUND, workers: int = 1,
                        rng: random.Random | None = None,
                        witness_search_limit: int = 4096) -> dict:
    """Classify first-order deformations of a selection up to gauge
    equivalence by exhaustive enumeration over a prime field.

    Every candidate in the selection's coordinate space is enumerated
    (meet-in-the-middle over the two halves of the basis coefficients,
    joined on the residual of the structural equations, which is verified
    to be linear in the candidate and spot-checked against full literal
    evaluation).  Solutions are partitioned by the gauge shifts of an
    exhaustively spanned witness space; partition blocks are cross-checked
    with literal equivalence checks, including a full witness enumeration
    between two inequivalent representatives when affordable.
    """
    C = G.base
    K = C.field
    if not isinstance(K, PrimeField):
        raise ValueError("exhaustive classification needs a prime field")
    p = K.p
    rng = rng or random.Random(20240811)
    sel = ComplexSelection(kind)
    q = candidate_degree(kind)
    sp = total_space(G, sel, q)
    basis = sp.basis
    nb = len(basis)
    if p ** nb > bound:
        raise EnumerationBoundExceeded(
            f"{p}^{nb} candidates exceed the enumeration bound {bound}; "
            f"use a smaller model or raise the bound")
    sys = _structural_system(G)
    assert all(x == K.zero() for x in sys.residual_list(zero_deformation()))

    def dfv(coeff_tuple):
        return deformation_from_vector(
            G, kind, _vec_combine(K, basis, coeff_tuple,
                                  length=sp.dim_free))

    cols = []
    for b in basis:
        res = sys.residual_list(deformation_from_vector(G, kind, b))
        cols.append({r: v for r, v in enumerate(res) if v})

    def lin_residual(coeff_tuple):
        acc: dict = {}
        for c, col in zip(coeff_tuple, cols):
            if c == 0:
                continue
            for r, v in col.items():
                acc[r] = (acc.get(r, 0) + c * v) % p
        return {r: v for r, v in acc.items() if v}

    # the join key is only honest if the residual really is linear
    for _ in range(3):
        coeffs = tuple(rng.randrange(p) for _ in range(nb))
        direct = sys.residual_list(dfv(coeffs))
        lin = lin_residual(coeffs)
        assert {r: v for r, v in enumerate(direct) if v} == lin

    half = nb // 2
    colsA, colsB = cols[:half], cols[half:]

    def combine(cols_part, assignment):
        acc: dict = {}
        for c, col in zip(assignment, cols_part):
            if c == 0:
                continue
            for r, v in col.items():
                acc[r] = (acc.get(r, 0) + c * v) % p
        return tuple(sorted((r, v) for r, v in acc.items() if v))

    tableA: dict = {}
    for a in itertools.product(range(p), repeat=half):
        tableA.setdefault(combine(colsA, a), []).append(a)

    def scan_chunk(bs):
        out = []
        for btup in bs:
            res = combine(colsB, btup)
            need = tuple(sorted((r, (-v) % p) for r, v in res))
            for a in tableA.get(need, ()):
                out.append(a + btup)
        return out

    all_b = list(itertools.product(range(p), repeat=nb - half))
    Z: list = []
    if workers > 1:
        chunks = [all_b[i::workers] for i in range(workers)]
        with ThreadPoolExecutor(max_workers=workers) as ex:
            for part in ex.map(scan_chunk, chunks):
                Z.extend(part)
    else:
        Z.extend(scan_chunk(all_b))
    Z.sort()

    Smat = SparseMatrix(
        1 + max((max(col) for col in cols if col), default=0), nb, K,
        {(r, j): v for j, col in enumerate(cols) for r, v in col.items()})
    assert len(Z) == p ** (nb - rank(Smat))

    # spot-check the linearized accept/reject against the full equations
    for ztup in (rng.sample(Z, min(3, len(Z))) if Z else []):
        assert check_structural(G, dfv(ztup)).ok
    zset = set(Z)
    tries = 0
    while tries < 3 and len(zset) < p ** nb:
        cand = tuple(rng.randrange(p) for _ in range(nb))
        if cand in zset:
            continue
        tries += 1
        assert not check_structural(G, dfv(cand)).ok

    # gauge shifts span the coboundaries
    wsp = total_space(G, sel, q - 1)
    cand_mat = from_columns(basis, sp.dim_free, K)
    shift_vectors = []
    for wb in wsp.basis:
        w = witness_from_vector(G, kind, wb)
        shift = equivalence_shift(G, w)   # verified literally inside
        svec = vector_from_deformation(G, kind, shift)
        coeff = solve_in_image(cand_mat, svec)
        assert coeff is not None, "gauge shift left the candidate space"
        ctup = tuple(coeff.entries.get(j, 0) for j in range(nb))
        assert not lin_residual(ctup), "gauge shift is not a solution"
        shift_vectors.append(ctup)

    # row-reduce the shift span over F_p
    pivots: list = []
    reduced: list = []
    for rowv in shift_vectors:
        row = list(rowv)
        for pc, prow in zip(pivots, reduced):
            f = row[pc]
            if f:
                row = [(x - f * y) % p for x, y in zip(row, prow)]
        nz = next((j for j, x in enumerate(row) if x), None)
        if nz is None:
            continue
        inv = pow(row[nz], p - 2, p)
        row = [(x * inv) % p for x in row]
        for k in range(len(reduced)):
            f = reduced[k][nz]
            if f:
                reduced[k] = [(x - f * y) % p
                              for x, y in zip(reduced[k], row)]
        pivots.append(nz)
        reduced.append(row)
    rank_shifts = len(reduced)

    def reduce_mod_shifts(t):
        row = list(t)
        for pc, prow in zip(pivots, reduced):
            f = row[pc]
            if f:
                row = [(x - f * y) % p for x, y in zip(row, prow)]
        return tuple(row)

    classes: dict = {}
    for z in Z:   # Z is sorted, so the first member of a class is minimal
        classes.setdefault(reduce_mod_shifts(z), []).append(z)
    count = len(classes)
    assert count * (p ** rank_shifts) == len(Z)
    for members in classes.values():
        assert len(members) == p ** rank_shifts

    reps = sorted(members[0] for members in classes.values())

    # literal within-class verification on a sampled pair
    if rank_shifts and reps:
        wcoeffs = [rng.randrange(p) for _ in shift_vectors]
        if all(c == 0 for c in wcoeffs):
            wcoeffs[0] = 1
        base_rep = reps[0]
        other = tuple(
            (z + sum(c * s[j] for c, s in zip(wcoeffs, shift_vectors))) % p
            for j, z in enumerate(base_rep))
        w = witness_from_vector(
            G, kind, _vec_combine(K, wsp.basis, wcoeffs,
                                  length=wsp.dim_free))
        assert check_equivalence(G, dfv(base_rep), dfv(other), w).ok

    # literal cross-class verification: no witness at all works
    nw = len(wsp.basis)
    if count > 1 and p ** nw <= witness_search_limit:
        da, db = dfv(reps[0]), dfv(reps[1])
        for wcoeffs in itertools.product(range(p), repeat=nw):
            w = witness_from_vector(
                G, kind, _vec_combine(K, wsp.basis, wcoeffs,
                                      length=wsp.dim_free))
            assert not check_equivalence(G, da, db, w).ok

    return {
        "kind": kind,
        "count": count,
        "representatives": [dfv(r) for r in reps],
        "representative_coefficients": reps,
        "candidate_dim": nb,
        "cocycle_count": len(Z),
        "coboundary_rank": rank_shifts,
        "witness_dim": nw,
    }


# ----- extension over K[eps]/(eps^2) ------------------------------------


class ExtendedStructure:
    """The Gray semigroup with its structural 2-isomorphisms deformed over
    K[eps]/(eps^2); underlying objects, 1-cells, and hom tables are
    unchanged."""

    def __init__(self, G: GraySemigroup, deformation: FirstOrderDeformation):
        self.G = G
        self.deformation = deformation
        self._E = _Eps(G)
        self._cells = _DeformedCells(G, deformation)

    def tensorator(self, fp, gp, f, g) -> ECell:
        return self._cells.tens((fp, gp), (f, g))

    def associator(self, f, g, h) -> ECell:
        return self._cells.ass3(f, g, h)

    def pentagonator(self, T) -> ECell:
        return self._cells.pent4(T)

    def unit_iso(self, X, Y) -> ECell:
        return self._E.id(self.G.base.identity_cell[self.G.tobj(X, Y)])

    def reduce(self) -> GraySemigroup:
        """Set eps = 0; validate() confirms the lead components coincide
        with the undeformed tables."""
        return self.G

    def validate(self) -> ValidationReport:
        """Full check of the extension: reduction mod eps, invertibility
        of every structural cell over the extension ring, and the eight
        structural equations with both components compared (nothing is
        linearized here)."""
        rep = ValidationReport()
        G, C, E = self.G, self.G.base, self._E
        dc = self._cells

        def check_invertible(name, key, t):
            inv = E.invert(t)
            if not (E.eq(E.vcomp(inv, t), E.id(t.lead.src))
                    and E.eq(E.vcomp(t, inv), E.id(t.lead.tgt))):
                rep.add(name + "-invertible", key)

        cells = sorted(C.cell_src)
        objs = sorted(C.objects)
        comp = [(fp, f) for fp in cells for f in cells
                if C.cell_tgt[f] == C.cell_src[fp]]
        for (fp, f) in comp:
            for (gp, g) in comp:
                t = dc.tens((fp, gp), (f, g))
                if not C.eq2(t.lead, G.tensorator(fp, gp, f, g)):
                    rep.add_structural(
                        f"tensorator at {((fp, gp), (f, g))!r} does not "
                        f"reduce to the undeformed table")
                check_invertible("tensorator", ((fp, gp), (f, g)), t)
        for (f, g, h) in itertools.product(cells, repeat=3):
            a = dc.ass3(f, g, h)
            if not C.eq2(a.lead, C.id2(a.lead.src)):
                rep.add_structural(
                    f"associator at {(f, g, h)!r} does not reduce to the "
                    f"identity")
            check_invertible("associator", (f, g, h), a)
        for T4 in itertools.product(objs, repeat=4):
            pcell = dc.pent4(T4)
            if not C.eq2(pcell.lead, C.id2(pcell.lead.src)):
                rep.add_structural(
                    f"pentagonator at {T4!r} does not reduce to the "
                    f"identity")
            check_invertible("pentagonator", T4, pcell)
        if rep.structural_errors:
            return rep

        for name, key, fn in _structural_system(G).instances:
            lhs, rhs = fn(dc)
            if not E.eq(lhs, rhs):
                rep.add(name, key)
        return rep


def extend_and_deform(G: GraySemigroup,
                      d: FirstOrderDeformation) -> ExtendedStructure:
    """Assemble the deformed structure over K[eps]/(eps^2); refuses data
    that fails the structural equations."""
    rep = check_structural(G, d)
    if not rep.ok:
        raise ValueError(
            f"deformation fails structural equations: "
            f"{rep.violations[:3]}{rep.structural_errors[:3]}")
    return ExtendedStructure(G, d)
