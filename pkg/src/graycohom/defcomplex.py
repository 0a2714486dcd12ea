"""Deformation complexes of a Gray semigroup.

The building blocks are

* the double complex X^{m,n} = X^{m+1}(tensor_power(n+1)) with horizontal
  differential delta_h (the pseudofunctorial differential applied row-wise)
  and vertical differential delta_v (alternating sum over tensor-slot
  merges, padded by canonical tensorator interchange cells);
* the special subspaces X_s^{m,n} (vanishing on tuples containing an
  all-identities slot);
* the pentagonator complex of endomorphism families of identity 1-cells
  over object tuples with differential delta_pent, and the chain map phi
  into the bottom bicomplex row.

From these the module assembles the total complexes (tens_ass, ass, tens,
pent_restricted, pent_general, unit) as explicit sparse matrices and
computes their cohomology.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exactlinalg import SparseMatrix, Vector, kernel_basis, vstack
from .gray import GraySemigroup, PadOps, merge_to_single, tensor_power
from .pfcomplex import (
    CapExceeded,
    CochainSpace,
    _cohomology_core,
    delta_pf_matrix,
    pf_cochain_basis,
)
from .twocat import TwoMorphism

DEFAULT_TOTAL_CAP = 3
_PF_CAP = 8   # inner pseudofunctorial degrees are bounded by the total cap

SELECTION_KINDS = ("tens_ass", "ass", "tens", "pent_restricted",
                   "pent_general", "unit")


def _cache(G: GraySemigroup) -> dict:
    if not hasattr(G, "_defcomplex_cache"):
        G._defcomplex_cache = {}
    return G._defcomplex_cache


# ----- bicomplex spaces -------------------------------------------------


@dataclass
class BicomplexSpace:
    G: GraySemigroup
    m: int
    n: int
    special: bool
    pf: CochainSpace          # free coordinates and naturality constraints
    _constraints: SparseMatrix | None = None
    _basis: list | None = None

    @property
    def constraints(self) -> SparseMatrix:
        """Naturality (+ identity-slot vanishing); computed on first use."""
        if self._constraints is None:
            constraints = self.pf.constraints
            if self.special:
                K = self.G.base.field
                coords = identity_slot_coordinates(self.G, self.pf)
                extra = SparseMatrix(
                    len(coords), self.pf.dim_free, K,
                    {(i, c): K.one() for i, c in enumerate(coords)})
                constraints = vstack(constraints, extra)
            self._constraints = constraints
        return self._constraints

    @property
    def basis(self) -> list:
        if self._basis is None:
            self._basis = kernel_basis(self.constraints)
        return self._basis

    @property
    def dim_free(self):
        return self.pf.dim_free

    @property
    def dimension(self):
        return len(self.basis)


def identity_slot_coordinates(G: GraySemigroup, pf: CochainSpace):
    """Free coordinates sitting on tuples with an all-identities letter."""
    C = G.base
    out = []
    for t, b in pf.index:
        for letter in t:
            if all(f == C.identity_cell[C.cell_src[f]] for f in letter):
                out.append(pf.pos[(t, b)])
                break
    return out


def bicomplex_space(G: GraySemigroup, m: int, n: int,
                    special: bool = False) -> BicomplexSpace:
    key = ("bi", m, n, special)
    cache = _cache(G)
    if key in cache:
        return cache[key]
    pf_key = ("pf", m, n)
    pf = cache.get(pf_key)
    if pf is None:
        F = tensor_power(G, n + 1)
        pf = cache[pf_key] = pf_cochain_basis(F, m + 1, cap=_PF_CAP)
    space = BicomplexSpace(G, m, n, special, pf)
    cache[key] = space
    return space


def delta_h_matrix(G: GraySemigroup, m: int, n: int) -> SparseMatrix:
    """Matrix of delta_h: X^{m,n} -> X^{m+1,n} on free coordinates."""
    key = ("dh", m, n)
    cache = _cache(G)
    if key not in cache:
        F = tensor_power(G, n + 1)
        sp = bicomplex_space(G, m, n).pf
        sp1 = bicomplex_space(G, m + 1, n).pf
        cache[key] = delta_pf_matrix(F, sp, sp1)
    return cache[key]


def delta_v_matrix(G: GraySemigroup, m: int, n: int) -> SparseMatrix:
    """Matrix of delta_v: X^{m,n} -> X^{m,n+1} on free coordinates.

    At an output tuple of (n+2)-component letters the terms drop the first
    column, merge adjacent columns, and drop the last column, whiskering by
    the canonical interchange cells built from tensorator instances.
    """
    key = ("dv", m, n)
    cache = _cache(G)
    if key in cache:
        return cache[key]
    C = G.base
    K = C.field
    sp_in = bicomplex_space(G, m, n).pf
    sp_out = bicomplex_space(G, m, n + 1).pf
    ops2 = cache.get("ops2")
    if ops2 is None:
        ops2 = cache["ops2"] = PadOps(tensor_power(G, 2))
    c = n + 2  # columns of the output letters
    ones = (1,) * (m + 1)
    M = SparseMatrix(sp_out.dim_free, sp_in.dim_free, K)

    bv_cache: dict = {}
    t2_cache: dict = {}
    w_cache: dict = {}

    def tensor2c(a, b):
        key = (a, b)
        r = t2_cache.get(key)
        if r is None:
            r = t2_cache[key] = G.tensor2(a, b)
        return r

    def basis_values(t_in):
        vals = bv_cache.get(t_in)
        if vals is None:
            src, tgt = sp_in.endpoints(t_in)
            d = sp_in.tuple_dims[t_in]
            vals = bv_cache[t_in] = [TwoMorphism(src, tgt, tuple(
                K.one() if i == b else K.zero() for i in range(d)))
                for b in range(d)]
        return vals

    def add_term(t_out, t_in, sign, post):
        d_in = sp_in.tuple_dims.get(t_in)
        if not d_in:
            return
        s = K.one() if sign == 1 else K.from_int(sign)
        vals = basis_values(t_in)
        for b in range(d_in):
            out = post(vals[b])
            for k, v in enumerate(out.coeffs):
                if not K.is_zero(v):
                    M.add_to(sp_out.pos[(t_out, k)], sp_in.pos[(t_in, b)],
                             K.mul(s, v))

    for t in sp_out.tuples:
        col = [C.compose_many([f[j] for f in t]) for j in range(c)]
        # drop the first column
        t_in = tuple(f[1:] for f in t)
        beta = merge_to_single(
            ops2, [(f[0], G.tcell_many(f[1:])) for f in t], ones)
        head = C.id2(col[0])
        add_term(t, t_in, 1,
                 lambda val, beta=beta, head=head:
                 C.vcomp(tensor2c(head, val), beta))
        # merge columns i-1 and i
        for i in range(1, c):
            t_in = tuple(f[:i - 1] + (G.tcell(f[i - 1], f[i]),) + f[i + 1:]
                         for f in t)
            gamma = merge_to_single(ops2, [(f[i - 1], f[i]) for f in t], ones)
            factors = ([C.id2(col[j]) for j in range(i - 1)]
                       + [gamma]
                       + [C.id2(col[j]) for j in range(i + 1, c)])
            w_key = tuple(factors)
            W = w_cache.get(w_key)
            if W is None:
                W = w_cache[w_key] = G.tensor2_many(factors)
            add_term(t, t_in, (-1) ** i,
                     lambda val, W=W: C.vcomp(W, val))
        # drop the last column
        t_in = tuple(f[:-1] for f in t)
        beta = merge_to_single(
            ops2, [(G.tcell_many(f[:-1]), f[-1]) for f in t], ones)
        tail = C.id2(col[-1])
        add_term(t, t_in, (-1) ** c,
                 lambda val, beta=beta, tail=tail:
                 C.vcomp(tensor2c(val, tail), beta))
    cache[key] = M
    return M


# ----- pentagonator spaces ----------------------------------------------


@dataclass
class PentSpace:
    """Families of endomorphisms of identity 1-cells over object tuples."""

    G: GraySemigroup
    degree: int
    tuples: list
    index: list
    pos: dict
    tuple_dims: dict
    constraints: SparseMatrix
    basis: list

    @property
    def dim_free(self):
        return len(self.index)

    @property
    def dimension(self):
        return len(self.basis)

    def id_cell(self, T):
        C = self.G.base
        return C.identity_cell[self.G.tobj_many(T)]

    def value(self, vec: Vector, T) -> TwoMorphism:
        C = self.G.base
        K = C.field
        e = self.id_cell(T)
        d = self.tuple_dims[T]
        coeffs = [K.zero()] * d
        for b in range(d):
            v = vec.entries.get(self.pos[(T, b)])
            if v is not None:
                coeffs[b] = v
        return TwoMorphism(e, e, tuple(coeffs))


def _object_tuples(G: GraySemigroup, k: int):
    import itertools
    return [tuple(t) for t in
            itertools.product(sorted(G.base.objects), repeat=k)]


def pent_space(G: GraySemigroup, degree: int,
               restricted: bool = False) -> PentSpace:
    key = ("pent", degree, restricted)
    cache = _cache(G)
    if key in cache:
        return cache[key]
    C = G.base
    K = C.field
    space = PentSpace(G, degree, [], [], {}, {}, SparseMatrix(0, 0, K), [])
    if degree >= 0:
        space.tuples = _object_tuples(G, degree + 1)
    for T in space.tuples:
        e = space.id_cell(T)
        d = C.dim2(e, e)
        space.tuple_dims[T] = d
        for b in range(d):
            space.pos[(T, b)] = len(space.index)
            space.index.append((T, b))
    if restricted and degree >= 0:
        space.constraints = phi_matrix(G, degree)
    else:
        space.constraints = SparseMatrix(0, space.dim_free, K)
    space.basis = kernel_basis(space.constraints)
    cache[key] = space
    return space


def delta_pent_matrix(G: GraySemigroup, degree: int) -> SparseMatrix:
    """Matrix of delta_pent: degree -> degree + 1 (free coordinates).  In
    the Gray case all paddings are identities and the differential is the
    bar-type alternating sum with tensor whiskers by identity 2-cells."""
    key = ("dpent", degree)
    cache = _cache(G)
    if key in cache:
        return cache[key]
    C = G.base
    K = C.field
    mul = G.tobj_many
    sp_in = pent_space(G, degree)
    sp_out = pent_space(G, degree + 1)
    M = SparseMatrix(sp_out.dim_free, sp_in.dim_free, K)

    def add_term(T_out, T_in, sign, post):
        d_in = sp_in.tuple_dims.get(T_in)
        if not d_in:
            return
        s = K.one() if sign == 1 else K.from_int(sign)
        e = sp_in.id_cell(T_in)
        for b in range(d_in):
            val = TwoMorphism(e, e, tuple(
                K.one() if i == b else K.zero() for i in range(d_in)))
            out = post(val)
            for k, v in enumerate(out.coeffs):
                if not K.is_zero(v):
                    M.add_to(sp_out.pos[(T_out, k)], sp_in.pos[(T_in, b)],
                             K.mul(s, v))

    for T in sp_out.tuples:
        k = len(T)  # degree + 2 objects
        head = C.id2(C.identity_cell[T[0]])
        add_term(T, T[1:], 1, lambda val, head=head: G.tensor2(head, val))
        for i in range(1, k):
            T_in = T[:i - 1] + (G.tobj(T[i - 1], T[i]),) + T[i + 1:]
            add_term(T, T_in, (-1) ** i, lambda val: val)
        tail = C.id2(C.identity_cell[T[-1]])
        add_term(T, T[:-1], (-1) ** k,
                 lambda val, tail=tail: G.tensor2(val, tail))
    cache[key] = M
    return M


def phi_matrix(G: GraySemigroup, degree: int) -> SparseMatrix:
    """Chain map phi: pentagonator degree d -> bicomplex bidegree (0, d):
    (phi n)(f) = n_{targets} o 1_{(x)f} - 1_{(x)f} o n_{sources}."""
    key = ("phi", degree)
    cache = _cache(G)
    if key in cache:
        return cache[key]
    C = G.base
    K = C.field
    sp_in = pent_space(G, degree)
    sp_out = bicomplex_space(G, 0, degree).pf
    M = SparseMatrix(sp_out.dim_free, sp_in.dim_free, K)
    for tup in sp_out.tuples:
        f = tup[0]  # a (degree+1)-tuple of composable-free base cells
        Xs = tuple(C.cell_src[comp] for comp in f)
        Ys = tuple(C.cell_tgt[comp] for comp in f)
        tf = G.tcell_many(f)
        for (T, sign) in ((Ys, 1), (Xs, -1)):
            d_in = sp_in.tuple_dims.get(T)
            if not d_in:
                continue
            s = K.one() if sign == 1 else K.from_int(sign)
            e = sp_in.id_cell(T)
            for b in range(d_in):
                val = TwoMorphism(e, e, tuple(
                    K.one() if i == b else K.zero() for i in range(d_in)))
                out = C.hcomp(val, C.id2(tf)) if sign == 1 \
                    else C.hcomp(C.id2(tf), val)
                for k, v in enumerate(out.coeffs):
                    if not K.is_zero(v):
                        M.add_to(sp_out.pos[(tup, k)], sp_in.pos[(T, b)],
                                 K.mul(s, v))
    cache[key] = M
    return M


# ----- cochain-level wrappers -------------------------------------------


@dataclass
class BicomplexCochain:
    G: GraySemigroup
    m: int
    n: int
    vector: Vector      # free coordinates of bicomplex_space(G, m, n).pf
    special: bool = False


@dataclass
class PentCochain:
    G: GraySemigroup
    degree: int
    vector: Vector
    natural: bool = False


def delta_h(c: BicomplexCochain) -> BicomplexCochain:
    M = delta_h_matrix(c.G, c.m, c.n)
    return BicomplexCochain(c.G, c.m + 1, c.n, M.mul_vector(c.vector),
                            c.special)


def delta_v(c: BicomplexCochain) -> BicomplexCochain:
    M = delta_v_matrix(c.G, c.m, c.n)
    return BicomplexCochain(c.G, c.m, c.n + 1, M.mul_vector(c.vector),
                            c.special)


def delta_pent(p: PentCochain) -> PentCochain:
    M = delta_pent_matrix(p.G, p.degree)
    return PentCochain(p.G, p.degree + 1, M.mul_vector(p.vector), p.natural)


def phi_map(p: PentCochain) -> BicomplexCochain:
    M = phi_matrix(p.G, p.degree)
    return BicomplexCochain(p.G, 0, p.degree, M.mul_vector(p.vector))


# ----- total complexes --------------------------------------------------


@dataclass(frozen=True)
class ComplexSelection:
    kind: str
    qmax: int = DEFAULT_TOTAL_CAP

    def __post_init__(self):
        if self.kind not in SELECTION_KINDS:
            raise ValueError(f"unknown complex selection {self.kind!r}")


def _summands(kind: str, q: int):
    """Ordered summand descriptors of total degree q (m ascending)."""
    if kind in ("tens_ass", "unit"):
        out = []
        for m in range(0, q):
            n = q - m
            out.append(("bi", m, n))
            if kind == "unit" and m == 0:
                out.append(("pent", q + 1))
        return out
    if kind == "ass":
        return [("bi", 0, q)] if q >= 1 else []
    if kind == "tens":
        return [("bi", q - 1, 1)] if q >= 1 else []
    if kind in ("pent_restricted", "pent_general"):
        return [("pent", q)] if q >= 0 else []
    raise ValueError(kind)


@dataclass
class TotalSpace:
    q: int
    summands: list
    offsets: list
    dim_free: int
    constraints: SparseMatrix
    basis: list

    @property
    def dimension(self):
        return len(self.basis)


def _summand_data(G: GraySemigroup, kind: str, desc):
    """(dim_free, constraint matrix) of one summand under selection kind."""
    if desc[0] == "bi":
        _, m, n = desc
        sp = bicomplex_space(G, m, n, special=True)
        cons = sp.constraints
        if kind == "ass":
            cons = vstack(cons, delta_h_matrix(G, m, n))
        elif kind == "tens":
            cons = vstack(cons, delta_v_matrix(G, m, n))
        return sp.dim_free, cons
    _, d = desc
    restricted = (kind == "pent_restricted")
    sp = pent_space(G, d, restricted=restricted)
    return sp.dim_free, sp.constraints


def _summand_kernel(G: GraySemigroup, kind: str, desc):
    """Kernel basis of one summand's constraints, shared across selections
    imposing the same conditions on that summand."""
    if desc[0] == "bi":
        variant = kind if kind in ("ass", "tens") else "plain"
        if variant == "plain":
            return bicomplex_space(G, desc[1], desc[2], special=True).basis
    else:
        variant = "restricted" if kind == "pent_restricted" else "plain"
        return pent_space(G, desc[1], restricted=(variant == "restricted")).basis
    key = ("sumker", variant, desc)
    cache = _cache(G)
    if key not in cache:
        _, cons = _summand_data(G, kind, desc)
        cache[key] = kernel_basis(cons)
    return cache[key]


def total_space(G: GraySemigroup, sel: ComplexSelection, q: int) -> TotalSpace:
    key = ("total", sel.kind, q)
    cache = _cache(G)
    if key in cache:
        return cache[key]
    K = G.base.field
    summands = _summands(sel.kind, q)
    offsets = []
    dim = 0
    parts = []
    for desc in summands:
        d, cons = _summand_data(G, sel.kind, desc)
        offsets.append(dim)
        dim += d
        parts.append(cons)
    total = SparseMatrix(sum(p.rows for p in parts), dim, K)
    row = 0
    for off, cons in zip(offsets, parts):
        for (i, j), v in cons.entries.items():
            total.set(row + i, off + j, v)
        row += cons.rows
    # the constraints are block-diagonal, so the kernel is the direct sum
    # of the per-summand kernels embedded at their offsets
    basis = []
    for desc, off in zip(summands, offsets):
        for b in _summand_kernel(G, sel.kind, desc):
            basis.append(Vector(dim, {off + i: v
                                      for i, v in b.entries.items()}))
    out = TotalSpace(q, summands, offsets, dim, total, basis)
    cache[key] = out
    return out


def _blocks(G: GraySemigroup, kind: str, q: int):
    """(src_desc, tgt_desc, matrix, scalar) blocks of the differential
    from total degree q to q + 1."""
    K = G.base.field
    one = K.one()
    minus = K.neg(one)
    blocks = []
    for desc in _summands(kind, q):
        if desc[0] == "bi":
            _, m, n = desc
            if kind in ("tens_ass", "unit"):
                sign_h = one if n % 2 == 0 else minus
                blocks.append((desc, ("bi", m + 1, n),
                               delta_h_matrix(G, m, n), sign_h))
                blocks.append((desc, ("bi", m, n + 1),
                               delta_v_matrix(G, m, n), one))
            elif kind == "ass":
                blocks.append((desc, ("bi", m, n + 1),
                               delta_v_matrix(G, m, n), one))
            elif kind == "tens":
                blocks.append((desc, ("bi", m + 1, n),
                               delta_h_matrix(G, m, n), one))
        else:
            _, d = desc
            if kind == "unit":
                blocks.append((desc, ("bi", 0, d), phi_matrix(G, d), one))
                blocks.append((desc, ("pent", d + 1),
                               delta_pent_matrix(G, d), minus))
            else:
                blocks.append((desc, ("pent", d + 1),
                               delta_pent_matrix(G, d), one))
    return blocks


def total_differential(G: GraySemigroup, sel: ComplexSelection,
                       q: int) -> SparseMatrix:
    key = ("tdiff", sel.kind, q)
    cache = _cache(G)
    if key in cache:
        return cache[key]
    K = G.base.field
    src = total_space(G, sel, q)
    tgt = total_space(G, sel, q + 1)
    src_off = {desc: off for desc, off in zip(src.summands, src.offsets)}
    tgt_off = {desc: off for desc, off in zip(tgt.summands, tgt.offsets)}
    M = SparseMatrix(tgt.dim_free, src.dim_free, K)
    for sdesc, tdesc, block, scalar in _blocks(G, sel.kind, q):
        if tdesc not in tgt_off:
            continue
        so, to = src_off[sdesc], tgt_off[tdesc]
        for (i, j), v in block.entries.items():
            M.add_to(to + i, so + j, K.mul(scalar, v))
    cache[key] = M
    return M


def assemble_complex(G: GraySemigroup, sel: ComplexSelection):
    """Spaces for q = 1..qmax+1 and differential matrices for q = 1..qmax;
    consecutive products are asserted to vanish on the constrained bases."""
    if sel.qmax > DEFAULT_TOTAL_CAP:
        raise CapExceeded(
            f"total degree {sel.qmax} exceeds cap {DEFAULT_TOTAL_CAP}")
    spaces = {q: total_space(G, sel, q) for q in range(1, sel.qmax + 2)}
    diffs = {q: total_differential(G, sel, q) for q in range(1, sel.qmax + 1)}
    for q in range(1, sel.qmax):
        prod = diffs[q + 1].mul_matrix(diffs[q])
        for b in spaces[q].basis:
            assert prod.mul_vector(b).is_zero(), \
                f"differential does not square to zero at degree {q}"
    return {"selection": sel, "spaces": spaces, "differentials": diffs}


def cohomology(G: GraySemigroup, sel: ComplexSelection, q: int):
    """dim H^q and representatives (free total coordinates)."""
    if q < 1 or q > sel.qmax:
        raise CapExceeded(f"degree {q} outside 1..{sel.qmax}")
    sp_prev = total_space(G, sel, q - 1)
    sp_q = total_space(G, sel, q)
    D_q = total_differential(G, sel, q)
    cocycle = vstack(D_q, sp_q.constraints)
    if sp_prev.dim_free:
        D_prev = total_differential(G, sel, q - 1)
        im_cols = [D_prev.mul_vector(b) for b in sp_prev.basis]
    else:
        im_cols = []
    dim, reps = _cohomology_core(G.base.field, im_cols, cocycle)
    return {
        "selection": sel.kind,
        "degree": q,
        "dim_space": sp_q.dimension,
        "betti": dim,
        "representatives": reps,
        "space": sp_q,
    }
