"""Generators for validated test structures.

Two families:

* ``deloop`` turns a finite strict monoidal K-linear category into the
  one-object 2-category with that category as its endo-hom.
* ``group_model`` builds a skeletal Gray semigroup from a finite group G
  (objects), a finite abelian group H (1-cells at every object) and a
  bicharacter c on H whose values are the tensorator scalars.

Everything produced here is re-validated by the twocat/gray validators in
the test suite; generation is never trusted.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .exactlinalg import Field
from .gray import GraySemigroup
from .twocat import TwoCategory, TwoMorphism


@dataclass(frozen=True)
class FiniteGroup:
    elements: tuple
    mult: dict          # (a, b) -> ab
    identity: object

    def is_abelian(self) -> bool:
        return all(self.mult[(a, b)] == self.mult[(b, a)]
                   for a in self.elements for b in self.elements)


def cyclic_group(n: int) -> FiniteGroup:
    els = tuple(range(n))
    return FiniteGroup(els, {(a, b): (a + b) % n for a in els for b in els}, 0)


def trivial_group() -> FiniteGroup:
    return cyclic_group(1)


def sign_bicharacter(H: FiniteGroup, K: Field) -> dict:
    """c(h, k) = (-1)^{hk} on a cyclic group with integer elements."""
    one = K.one()
    minus = K.neg(one)
    return {(h, k): (minus if (h * k) % 2 else one)
            for h in H.elements for k in H.elements}


def trivial_bicharacter(H: FiniteGroup, K: Field) -> dict:
    one = K.one()
    return {(h, k): one for h in H.elements for k in H.elements}


@dataclass(frozen=True)
class GroupModelSpec:
    G: FiniteGroup
    H: FiniteGroup
    c: dict             # (h, k) -> nonzero scalar
    field: Field

    def validate(self):
        """Raise ValueError naming the violated bicharacter identity."""
        K = self.field
        H = self.H
        if not H.is_abelian():
            raise ValueError("H must be abelian")
        e = H.identity
        one = K.one()
        for h in H.elements:
            for k in H.elements:
                v = self.c.get((h, k))
                if v is None or K.is_zero(v):
                    raise ValueError(f"c({h},{k}) missing or zero")
        for h in H.elements:
            if not K.is_zero(K.sub(self.c[(e, h)], one)):
                raise ValueError(f"bicharacter identity c(e,{h}) = 1 violated")
            if not K.is_zero(K.sub(self.c[(h, e)], one)):
                raise ValueError(f"bicharacter identity c({h},e) = 1 violated")
        for h1 in H.elements:
            for h2 in H.elements:
                for k in H.elements:
                    lhs = self.c[(H.mult[(h1, h2)], k)]
                    rhs = K.mul(self.c[(h1, k)], self.c[(h2, k)])
                    if not K.is_zero(K.sub(lhs, rhs)):
                        raise ValueError(
                            f"bicharacter identity c({h1}{h2},{k}) = "
                            f"c({h1},{k})c({h2},{k}) violated")
                    lhs = self.c[(k, H.mult[(h1, h2)])]
                    rhs = K.mul(self.c[(k, h1)], self.c[(k, h2)])
                    if not K.is_zero(K.sub(lhs, rhs)):
                        raise ValueError(
                            f"bicharacter identity c({k},{h1}{h2}) = "
                            f"c({k},{h1})c({k},{h2}) violated")


def group_model(spec: GroupModelSpec) -> GraySemigroup:
    """Skeletal Gray semigroup: objects G, endo-1-cells H, scalar 2-cells,
    tensorator scalar c(second factor of the left pair, first factor of the
    right pair)."""
    spec.validate()
    K = spec.field
    G, H = spec.G, spec.H
    one = K.one()

    objects = G.elements
    one_cells = {}
    cell_src = {}
    cell_tgt = {}
    for g in objects:
        cells = tuple((g, h) for h in H.elements)
        for g2 in objects:
            one_cells[(g, g2)] = cells if g == g2 else ()
        for f in cells:
            cell_src[f] = g
            cell_tgt[f] = g
    identity_cell = {g: (g, H.identity) for g in objects}
    compose1 = {
        ((g, h2), (g, h1)): (g, H.mult[(h2, h1)])
        for g in objects for h2 in H.elements for h1 in H.elements
    }
    hom2_dim = {(f, f): 1 for f in cell_src}
    id2_coeffs = {f: (one,) for f in cell_src}
    scalar = {(0, 0): {0: one}}
    vcomp_const = {(f, f, f): scalar for f in cell_src}
    hcomp_const = {
        ((g, h2), (g, h2), (g, h1), (g, h1)): scalar
        for g in objects for h2 in H.elements for h1 in H.elements
    }
    base = TwoCategory(K, objects, one_cells, cell_src, cell_tgt,
                       identity_cell, compose1, hom2_dim, id2_coeffs,
                       vcomp_const, hcomp_const)

    tensor_obj = {(a, b): G.mult[(a, b)] for a in objects for b in objects}
    tensor1 = {
        ((a, h), (b, k)): (G.mult[(a, b)], H.mult[(h, k)])
        for a in objects for b in objects
        for h in H.elements for k in H.elements
    }
    tensor2_const = {
        (f, f, g, g): scalar
        for f in cell_src for g in cell_src
    }
    tensorator = {}
    for a in objects:
        for b in objects:
            for h1p in H.elements:
                for h2p in H.elements:
                    for h1 in H.elements:
                        for h2 in H.elements:
                            fp, gp = (a, h1p), (b, h2p)
                            f, g = (a, h1), (b, h2)
                            cell = (G.mult[(a, b)],
                                    H.mult[(H.mult[(h1p, h2p)],
                                            H.mult[(h1, h2)])])
                            tensorator[(fp, gp, f, g)] = TwoMorphism(
                                cell, cell, (spec.c[(h2p, h1)],))
    return GraySemigroup(base, tensor_obj, tensor1, tensor2_const, tensorator)


# ----- delooping a strict monoidal category -----------------------------


@dataclass
class MonoidalCategoryData:
    """Finite strict monoidal K-linear category as tables.

    objects     -- tuple of object ids, a strict monoid under tensor_obj
    unit        -- monoidal unit object
    tensor_obj  -- (a, b) -> a (x) b
    hom_dim     -- (a, b) -> dim Hom(a, b) (missing pairs are zero)
    id_coeffs   -- a -> coefficients of 1_a
    comp_const  -- (a, b, c) -> {(j, i): {k: scalar}} for Hom(b,c) x Hom(a,b)
    tensor_const-- (a, a2, b, b2) -> {(i, j): {k: scalar}}
    """

    field: Field
    objects: tuple
    unit: object
    tensor_obj: dict
    hom_dim: dict
    id_coeffs: dict
    comp_const: dict
    tensor_const: dict = dc_field(default_factory=dict)

    def check_strict(self):
        for a in self.objects:
            if self.tensor_obj[(a, self.unit)] != a or \
                    self.tensor_obj[(self.unit, a)] != a:
                raise ValueError(f"unit is not strict at {a}")
            for b in self.objects:
                for c in self.objects:
                    lhs = self.tensor_obj[(self.tensor_obj[(a, b)], c)]
                    rhs = self.tensor_obj[(a, self.tensor_obj[(b, c)])]
                    if lhs != rhs:
                        raise ValueError(
                            f"tensor not strictly associative at {(a, b, c)}")


def deloop(M: MonoidalCategoryData) -> TwoCategory:
    """One-object 2-category with Hom(*, *) = M: 1-cells are M's objects,
    vertical composition is M's composition, horizontal composition is M's
    tensor.  Rejects non-strict data."""
    M.check_strict()
    star = "*"
    objects = (star,)
    cells = tuple(M.objects)
    one_cells = {(star, star): cells}
    cell_src = {a: star for a in cells}
    cell_tgt = {a: star for a in cells}
    identity_cell = {star: M.unit}
    compose1 = {(a, b): M.tensor_obj[(a, b)] for a in cells for b in cells}
    hom2_dim = {k: d for k, d in M.hom_dim.items() if d}
    id2_coeffs = dict(M.id_coeffs)
    vcomp_const = dict(M.comp_const)
    hcomp_const = {}
    for (a, a2, b, b2), table in M.tensor_const.items():
        hcomp_const[(a, a2, b, b2)] = table
    return TwoCategory(M.field, objects, one_cells, cell_src, cell_tgt,
                       identity_cell, compose1, hom2_dim, id2_coeffs,
                       vcomp_const, hcomp_const)


def group_algebra_monoidal(n: int, K: Field) -> MonoidalCategoryData:
    """Objects Z/n under addition; End(a) is the group algebra K[Z/n] for
    every a, no morphisms between distinct objects; tensor of morphisms is
    multiplication in the (commutative) group algebra."""
    objs = tuple(range(n))
    tensor_obj = {(a, b): (a + b) % n for a in objs for b in objs}
    hom_dim = {(a, a): n for a in objs}
    one = K.one()
    id_coeffs = {a: tuple(one if i == 0 else K.zero() for i in range(n))
                 for a in objs}
    conv = {(j, i): {(i + j) % n: one} for i in range(n) for j in range(n)}
    comp_const = {(a, a, a): dict(conv) for a in objs}
    tensor_const = {(a, a, b, b): dict(conv) for a in objs for b in objs}
    return MonoidalCategoryData(K, objs, 0, tensor_obj, hom_dim, id_coeffs,
                                comp_const, tensor_const)
