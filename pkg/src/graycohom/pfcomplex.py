"""The purely pseudofunctorial deformation complex X^n(F).

A degree-n cochain assigns to every composable tuple (f_0, ..., f_{n-1}) a
2-morphism F(f_0) o ... o F(f_{n-1}) => F(f_0 o ... o f_{n-1}), natural in
every argument.  The differential inserts an identity factor on the left
and on the right and merges each adjacent pair, with canonical paddings
supplied by gray.pad.  Cohomology in degree 2 classifies first-order
unitary deformations of the coherence data of F.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .exactlinalg import (
    SparseMatrix,
    Vector,
    from_columns,
    kernel_basis,
    rank,
    solve_in_image,
    vstack,
)
from .gray import PaddedStep, pad
from .twocat import Pseudofunctor, TwoMorphism, ValidationReport

DEFAULT_DEGREE_CAP = 4


class CapExceeded(Exception):
    """A requested degree is above the configured cap."""


def composable_tuples(C, n):
    """All length-n composable tuples of 1-cells (diagram order: the target
    of f_{i+1} is the source of f_i), lexicographically sorted."""
    cells = sorted(C.cell_src)
    if n == 0:
        return []
    tuples = [(f,) for f in cells]
    for _ in range(n - 1):
        tuples = [t + (f,) for t in tuples for f in cells
                  if C.cell_src[t[-1]] == C.cell_tgt[f]]
    return tuples


@dataclass
class CochainSpace:
    """Free coordinates over (tuple, basis index) pairs together with the
    naturality constraint matrix cutting out the cochain space."""

    F: Pseudofunctor
    degree: int
    tuples: list
    index: list          # [(tuple, basis_idx)]
    pos: dict            # (tuple, basis_idx) -> coordinate
    tuple_dims: dict     # tuple -> fiber dimension
    _constraints: SparseMatrix | None = None
    _basis: list | None = None
    _endpoint_cache: dict = field(default_factory=dict)

    @property
    def dim_free(self):
        return len(self.index)

    @property
    def dimension(self):
        return len(self.basis)

    @property
    def constraints(self) -> SparseMatrix:
        """Per-slot naturality system; computed on first use."""
        if self._constraints is None:
            rows = _naturality_rows(self)
            M = SparseMatrix(len(rows), self.dim_free, self.F.cod.field)
            for i, r in enumerate(rows):
                for j, v in r.items():
                    M.set(i, j, v)
            self._constraints = M
        return self._constraints

    @property
    def basis(self) -> list:
        """Kernel basis of the naturality system; computed on first use."""
        if self._basis is None:
            self._basis = kernel_basis(self.constraints)
        return self._basis

    def endpoints(self, t):
        e = self._endpoint_cache.get(t)
        if e is None:
            F = self.F
            src = F.cod.compose_many([F.cell_map[f] for f in t])
            tgt = F.cell_map[F.dom.compose_many(t)]
            e = self._endpoint_cache[t] = (src, tgt)
        return e

    def value(self, vec: Vector, t) -> TwoMorphism:
        """The 2-morphism a coordinate vector assigns to tuple t."""
        K = self.F.cod.field
        src, tgt = self.endpoints(t)
        d = self.tuple_dims[t]
        coeffs = [K.zero()] * d
        for b in range(d):
            c = vec.entries.get(self.pos[(t, b)])
            if c is not None:
                coeffs[b] = c
        return TwoMorphism(src, tgt, tuple(coeffs))


def _naturality_rows(space: CochainSpace):
    """Per-slot naturality conditions as a list of sparse row dicts."""
    F = space.F
    C, D = F.dom, F.cod
    K = D.field
    rows = []
    for t in space.tuples:
        src_t, tgt_t = space.endpoints(t)
        for j, fj in enumerate(t):
            for fj2 in C.parallel_targets(fj):
                for a in range(C.dim2(fj, fj2)):
                    tau = C.basis2(fj, fj2, a)
                    if fj2 == fj and C.eq2(tau, C.id2(fj)):
                        continue
                    t2 = t[:j] + (fj2,) + t[j + 1:]
                    w_dom = C.hcomp_many(
                        [C.id2(f) if i != j else tau for i, f in enumerate(t)])
                    w_cod = D.hcomp_many(
                        [D.id2(F.cell_map[f]) if i != j else F.map2(tau)
                         for i, f in enumerate(t)])
                    Fw = F.map2(w_dom)
                    out_dim = D.dim2(src_t, Fw.tgt)
                    new_rows = [dict() for _ in range(out_dim)]
                    for b in range(space.tuple_dims[t]):
                        e = TwoMorphism(src_t, tgt_t, tuple(
                            K.one() if i == b else K.zero()
                            for i in range(space.tuple_dims[t])))
                        lhs = D.vcomp(Fw, e)
                        col = space.pos[(t, b)]
                        for k, v in enumerate(lhs.coeffs):
                            if not K.is_zero(v):
                                new_rows[k][col] = K.add(
                                    new_rows[k].get(col, K.zero()), v)
                    src2, tgt2 = space.endpoints(t2)
                    for b in range(space.tuple_dims[t2]):
                        e2 = TwoMorphism(src2, tgt2, tuple(
                            K.one() if i == b else K.zero()
                            for i in range(space.tuple_dims[t2])))
                        rhs = D.vcomp(e2, w_cod)
                        col = space.pos[(t2, b)]
                        for k, v in enumerate(rhs.coeffs):
                            if not K.is_zero(v):
                                new_rows[k][col] = K.sub(
                                    new_rows[k].get(col, K.zero()), v)
                    rows.extend(r for r in new_rows
                                if any(not K.is_zero(v) for v in r.values()))
    return rows


def pf_cochain_basis(F: Pseudofunctor, n: int,
                     cap: int = DEFAULT_DEGREE_CAP) -> CochainSpace:
    """Basis of X^n(F): kernel of the per-slot naturality system over the
    free coefficient space indexed by (composable tuple, fiber basis)."""
    if n > cap:
        raise CapExceeded(f"degree {n} exceeds cap {cap}")
    C, D = F.dom, F.cod
    tuples = composable_tuples(C, n) if n >= 1 else []
    space = CochainSpace(F, n, tuples, [], {}, {})
    for t in tuples:
        src, tgt = space.endpoints(t)
        d = D.dim2(src, tgt)
        space.tuple_dims[t] = d
        for b in range(d):
            space.pos[(t, b)] = len(space.index)
            space.index.append((t, b))
    return space


# ----- differential -----------------------------------------------------


def _delta_terms(C, t):
    """The (input tuple, src_blocks, whisker) data of the differential at an
    output tuple t of length n+1.  whisker is 'left', 'right' or None."""
    n1 = len(t)
    terms = []
    terms.append((1, t[1:], (1,) * n1, (1, n1 - 1), "left"))
    for i in range(1, n1):
        merged = t[:i - 1] + (C.compose(t[i - 1], t[i]),) + t[i + 1:]
        blocks = (1,) * (i - 1) + (2,) + (1,) * (n1 - i - 1)
        terms.append(((-1) ** i, merged, blocks, (n1,), None))
    terms.append(((-1) ** n1, t[:-1], (1,) * n1, (n1 - 1, 1), "right"))
    return terms


def delta_pf_matrix(F: Pseudofunctor, space_n: CochainSpace,
                    space_n1: CochainSpace,
                    padded: bool = False) -> SparseMatrix:
    """Matrix of the differential X^n -> X^{n+1} on free coordinates.

    By default the three padded terms are evaluated through their closed
    forms (one Fhat whiskering per term); with padded=True every term goes
    through gray.pad instead.  The two paths agree (asserted in tests)."""
    C, D = F.dom, F.cod
    K = D.field
    M = SparseMatrix(space_n1.dim_free, space_n.dim_free, K)
    if space_n.degree < 1:
        return M

    bv_cache: dict = {}

    def basis_values(t_in):
        vals = bv_cache.get(t_in)
        if vals is None:
            src, tgt = space_n.endpoints(t_in)
            d = space_n.tuple_dims[t_in]
            vals = bv_cache[t_in] = [TwoMorphism(src, tgt, tuple(
                K.one() if i == b else K.zero() for i in range(d)))
                for b in range(d)]
        return vals

    def emit(t, t_in, sign, outs):
        s = K.one() if sign == 1 else K.from_int(sign)
        for b, out in enumerate(outs):
            for k, v in enumerate(out.coeffs):
                if not K.is_zero(v):
                    M.add_to(space_n1.pos[(t, k)],
                             space_n.pos[(t_in, b)], K.mul(s, v))

    for t in space_n1.tuples:
        if padded:
            for sign, t_in, src_blocks, tgt_blocks, whisker in \
                    _delta_terms(C, t):
                if not space_n.tuple_dims.get(t_in):
                    continue
                outs = []
                for val in basis_values(t_in):
                    if whisker == "left":
                        tm = D.hcomp(D.id2(F.cell_map[t[0]]), val)
                    elif whisker == "right":
                        tm = D.hcomp(val, D.id2(F.cell_map[t[-1]]))
                    else:
                        tm = val
                    outs.append(
                        pad(F, t, [PaddedStep(tm, src_blocks, tgt_blocks)]))
                emit(t, t_in, sign, outs)
            continue
        n1 = len(t)
        images = [F.cell_map[f] for f in t]
        # drop the first letter: Fhat(f_0, rest) . (1 o value)
        t_in = t[1:]
        if space_n.tuple_dims.get(t_in):
            bridge = F.fhat[(t[0], C.compose_many(t_in))]
            head = D.id2(images[0])
            emit(t, t_in, 1,
                 [D.vcomp(bridge, D.hcomp(head, val))
                  for val in basis_values(t_in)])
        # merge letters i-1 and i: value . whiskered Fhat(f_{i-1}, f_i)
        for i in range(1, n1):
            t_in = t[:i - 1] + (C.compose(t[i - 1], t[i]),) + t[i + 1:]
            if not space_n.tuple_dims.get(t_in):
                continue
            parts = ([D.id2(g) for g in images[:i - 1]]
                     + [F.fhat[(t[i - 1], t[i])]]
                     + [D.id2(g) for g in images[i + 1:]])
            bridge = D.hcomp_many(parts)
            emit(t, t_in, (-1) ** i,
                 [D.vcomp(val, bridge) for val in basis_values(t_in)])
        # drop the last letter: Fhat(front, f_last) . (value o 1)
        t_in = t[:-1]
        if space_n.tuple_dims.get(t_in):
            bridge = F.fhat[(C.compose_many(t_in), t[-1])]
            tail = D.id2(images[-1])
            emit(t, t_in, (-1) ** n1,
                 [D.vcomp(bridge, D.hcomp(val, tail))
                  for val in basis_values(t_in)])
    return M


@dataclass
class PFCochain:
    space: CochainSpace
    vector: Vector


def delta_pf(F: Pseudofunctor, phi: PFCochain,
             cap: int = DEFAULT_DEGREE_CAP) -> PFCochain:
    """The differential applied to a single cochain; output naturality is
    asserted against the degree-(n+1) constraint system."""
    space_n = phi.space
    space_n1 = pf_cochain_basis(F, space_n.degree + 1, cap)
    M = delta_pf_matrix(F, space_n, space_n1)
    out = M.mul_vector(phi.vector)
    residue = space_n1.constraints.mul_vector(out)
    assert residue.is_zero(), "differential output violates naturality"
    return PFCochain(space_n1, out)


# ----- cohomology -------------------------------------------------------


def _cohomology_core(field_, delta_prev_cols, cocycle_matrix):
    """dim and representatives for ker(cocycle_matrix) / span(delta_prev_cols)."""
    Z = kernel_basis(cocycle_matrix)
    rows = cocycle_matrix.cols
    im = from_columns(delta_prev_cols, rows, field_)
    dim = len(Z) - rank(im)
    reps = []
    chosen = list(delta_prev_cols)
    for z in Z:
        if len(reps) == dim:
            break
        M = from_columns(chosen, rows, field_)
        if solve_in_image(M, z) is None:
            reps.append(z)
            chosen.append(z)
    assert len(reps) == dim
    return dim, reps


def pf_cohomology(F: Pseudofunctor, n: int, cap: int = DEFAULT_DEGREE_CAP):
    """dim H^n(F) and representative cocycles (free-coordinate vectors)."""
    space_prev = pf_cochain_basis(F, n - 1, cap)
    space_n = pf_cochain_basis(F, n, cap)
    space_next = pf_cochain_basis(F, n + 1, cap)
    D_n = delta_pf_matrix(F, space_n, space_next)
    D_prev = delta_pf_matrix(F, space_prev, space_n)
    cocycle = vstack(D_n, space_n.constraints)
    im_cols = [D_prev.mul_vector(b) for b in space_prev.basis]
    dim, reps = _cohomology_core(F.cod.field, im_cols, cocycle)
    return {
        "dimension": dim,
        "representatives": reps,
        "space": space_n,
        "delta_n": D_n,
        "delta_prev": D_prev,
    }


# ----- unitary lemma and classification ---------------------------------


def check_unitary_lemma(F: Pseudofunctor, candidate=None) -> ValidationReport:
    """(i) Fhat(id_X, id_X) = 1 for unitary F; (ii) a first-order candidate
    (fhat1, f01) must satisfy f01(X) = fhat1(id_X, id_X)."""
    rep = ValidationReport()
    C, D = F.dom, F.cod
    for X in C.objects:
        e = C.identity_cell[X]
        t = F.fhat[(e, e)]
        if not D.eq2(t, D.id2(t.src)):
            rep.add("unit-coherence", X)
    if candidate is not None:
        fhat1, f01 = candidate
        for X in C.objects:
            e = C.identity_cell[X]
            if not D.eq2(f01[X], fhat1[(e, e)]):
                rep.add("first-order-unit-determination", X)
    return rep


class PFClassification:
    """Degree-2 classification bundle: wrap cocycles as first-order
    deformations of the coherence data and test equivalence by solving for
    a degree-1 gauge cochain."""

    def __init__(self, F: Pseudofunctor, cap: int = DEFAULT_DEGREE_CAP):
        self.F = F
        self.space1 = pf_cochain_basis(F, 1, cap)
        self.space2 = pf_cochain_basis(F, 2, cap)
        self.space3 = pf_cochain_basis(F, 3, cap)
        self.delta1 = delta_pf_matrix(F, self.space1, self.space2)
        self.delta2 = delta_pf_matrix(F, self.space2, self.space3)

    def deform(self, cocycle: Vector):
        """(fhat1 table, f01 table) for a 2-cocycle; rejects non-cocycles
        naming a violated hexagon instance."""
        out = self.delta2.mul_vector(cocycle)
        if not out.is_zero():
            bad_row = min(out.entries)
            t, _ = self.space3.index[bad_row]
            raise ValueError(f"not a cocycle: hexagon instance {t} violated")
        residue = self.space2.constraints.mul_vector(cocycle)
        if not residue.is_zero():
            raise ValueError("not a cocycle: naturality violated")
        fhat1 = {}
        for t in self.space2.tuples:
            fhat1[(t[0], t[1])] = self.space2.value(cocycle, t)
        C = self.F.dom
        f01 = {X: fhat1[(C.identity_cell[X], C.identity_cell[X])]
               for X in C.objects}
        return fhat1, f01

    def equivalent(self, c1: Vector, c2: Vector):
        """Degree-1 witness xi with delta(xi) = c1 - c2, or None."""
        K = self.F.cod.field
        diff = {}
        for i in range(c1.length):
            v = K.sub(c1.entries.get(i, K.zero()), c2.entries.get(i, K.zero()))
            if not K.is_zero(v):
                diff[i] = v
        target = Vector(c1.length, diff)
        # solve within the naturality subspace of degree 1
        cols = [self.delta1.mul_vector(b) for b in self.space1.basis]
        M = from_columns(cols, c1.length, K)
        sol = solve_in_image(M, target)
        if sol is None:
            return None
        witness = Vector(self.space1.dim_free)
        for j, c in sol.entries.items():
            for i, v in self.space1.basis[j].entries.items():
                cur = witness.entries.get(i, K.zero())
                s = K.add(cur, K.mul(c, v))
                if K.is_zero(s):
                    witness.entries.pop(i, None)
                else:
                    witness.entries[i] = s
        return witness


def classify_pf_deformations(F: Pseudofunctor,
                             cap: int = DEFAULT_DEGREE_CAP) -> PFClassification:
    return PFClassification(F, cap)
