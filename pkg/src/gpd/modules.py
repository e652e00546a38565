"""Persistence modules as explicit dimension-and-matrix functors, kernel
functions, free presentations, and the algebraic route to the persistence
diagram.

A module stores one matrix per cover of its index poset; composites along
comparable pairs are derived and validated for path-independence.  The
kernel function sends [a, b] to the nullity of the composite map, and its
Mobius inversion is the canonical representative of the module's diagram
(well defined up to the diagonal).  Presentations are surjections from
free modules; their birth-death functions reproduce the same diagram away
from the diagonal, and tests exercise that equivalence rather than assume
it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .errors import (
    IndexMismatch,
    NotFunctorial,
    ShapeMismatch,
    UnknownElement,
    ValidationError,
)
from .linalg import Matrix, Subspace, complete_basis, intersection_dim
from .poset import (
    FinitePoset,
    GaloisConnection,
    IntervalPoset,
    IntFunction,
    diff_up_to_diagonal,
    int_of_galois,
    interval_poset,
    mobius_inversion,
    pushforward,
)
from .persistence import (
    Cofiltration,
    Filtration,
    _complexes,
    boundary_dim_function,
    bd_function,
)
from .report import CheckResult


class PersistenceModule:
    """A functor from a finite poset to F_p-vector spaces, given by a
    dimension per element and a matrix per cover."""

    __slots__ = ("index", "dims", "maps", "p", "_composites")

    def __init__(self, index: FinitePoset, dims: Mapping, maps: Mapping, p: int):
        self.index = index
        self.dims = {a: int(dims[a]) for a in index.elements}
        self.maps = dict(maps)
        self.p = p
        self._composites = {}

    def composite(self, a, b) -> Matrix:
        """The structure map M(a <= b), derived from cover matrices."""
        if not self.index.le(a, b):
            raise UnknownElement("not a comparable pair", witness=(a, b))
        key = (a, b)
        if key not in self._composites:
            if a == b:
                self._composites[key] = Matrix.identity(self.dims[a], self.p)
            else:
                for u, v in self.index.covers:
                    if v == b and self.index.le(a, u):
                        self._composites[key] = self.maps[(u, v)] @ self.composite(a, u)
                        break
        return self._composites[key]

    def __repr__(self) -> str:
        return f"PersistenceModule({dict(self.dims)} mod {self.p})"


def validate_module(
    P: FinitePoset, dims: Mapping, maps: Mapping, p: int
) -> PersistenceModule:
    """Check shapes on covers and path-independence of all composites.

    Missing cover matrices are tolerated only when one side has dimension
    zero (the matrix is forced).
    """
    dims = {a: int(dims[a]) for a in P.elements}
    for a in P.elements:
        if dims[a] < 0:
            raise ValidationError("dimensions must be nonnegative", witness=a)
    filled = {}
    for (a, b) in P.covers:
        m = maps.get((a, b))
        if m is None:
            if dims[a] == 0 or dims[b] == 0:
                m = Matrix.zeros(dims[b], dims[a], p)
            else:
                raise ShapeMismatch("missing matrix for cover", witness=(a, b))
        if not isinstance(m, Matrix):
            m = Matrix(np.asarray(m, dtype=np.int64).reshape(dims[b], dims[a]), p)
        if m.shape != (dims[b], dims[a]) or m.p != p:
            raise ShapeMismatch(
                "cover matrix has wrong shape", witness=((a, b), m.shape)
            )
        filled[(a, b)] = m
    extra = set(maps) - set(filled)
    if extra:
        raise ShapeMismatch("matrix given for a non-cover pair", witness=min(extra, key=str))
    M = PersistenceModule(P, dims, filled, p)
    # path-independence: walk each source up the poset once, comparing the
    # candidate composite through every incoming cover
    order = P.linear_extension()
    for a in P.elements:
        comp = {a: Matrix.identity(dims[a], p)}
        for b in order:
            if b == a or not P.le(a, b):
                continue
            candidates = [
                filled[(u, v)] @ comp[u]
                for (u, v) in P.covers
                if v == b and u in comp
            ]
            first = candidates[0]
            for other in candidates[1:]:
                if other != first:
                    raise NotFunctorial(
                        "composites along two paths disagree", witness=(a, b)
                    )
            comp[b] = first
            M._composites[(a, b)] = first
    return M


def kernel_function(M: PersistenceModule,
                    intervals: IntervalPoset | None = None) -> IntFunction:
    """[a, b] -> nullity of the structure map M(a <= b)."""
    ip = intervals or interval_poset(M.index)
    vals = {}
    for iv in ip.intervals:
        m = M.composite(iv.lo, iv.hi)
        vals[iv] = m.cols - m.rank()
    return IntFunction(ip.poset, vals)


def module_diagram(M: PersistenceModule,
                   intervals: IntervalPoset | None = None) -> IntFunction:
    """Mobius inversion of the kernel function: the canonical
    representative of the module's persistence diagram."""
    return mobius_inversion(kernel_function(M, intervals))


@dataclass(frozen=True)
class FreeModule:
    """A direct sum of rank-one modules born at given elements, realized
    as a PersistenceModule whose structure maps are the coordinate
    inclusions of generator blocks (blocks ordered by birth element)."""

    module: PersistenceModule
    multiplicities: Mapping[object, int]

    def block_offsets(self, b) -> dict:
        """generator birth element -> (start, stop) columns inside F(b)."""
        P = self.module.index
        out = {}
        start = 0
        for a in P.elements:
            if P.le(a, b):
                k = self.multiplicities.get(a, 0)
                out[a] = (start, start + k)
                start += k
        return out


def free_module(P: FinitePoset, multiplicities: Mapping, p: int) -> FreeModule:
    mult = {a: int(multiplicities.get(a, 0)) for a in P.elements}
    if any(v < 0 for v in mult.values()):
        raise ValidationError("multiplicities must be nonnegative")
    dims = {b: sum(mult[a] for a in P.down_set(b)) for b in P.elements}
    offsets = {}
    for b in P.elements:
        off, start = {}, 0
        for a in P.elements:
            if P.le(a, b):
                off[a] = (start, start + mult[a])
                start += mult[a]
        offsets[b] = off
    maps = {}
    for (u, v) in P.covers:
        m = np.zeros((dims[v], dims[u]), dtype=np.int64)
        for a, (s, e) in offsets[u].items():
            ts, te = offsets[v][a]
            for k in range(e - s):
                m[ts + k, s + k] = 1
        maps[(u, v)] = Matrix(m, p)
    return FreeModule(validate_module(P, dims, maps, p), mult)


@dataclass(frozen=True)
class Presentation:
    """A surjective natural transformation from a free module onto a
    target module, stored componentwise."""

    free: PersistenceModule
    target: PersistenceModule
    components: Mapping[object, Matrix]


def validate_presentation(
    free: PersistenceModule, target: PersistenceModule, components: Mapping
) -> Presentation:
    P = target.index
    if free.index != P:
        raise IndexMismatch("free and target modules have different index posets")
    comps = {}
    for a in P.elements:
        phi = components[a]
        if not isinstance(phi, Matrix):
            phi = Matrix(
                np.asarray(phi, dtype=np.int64).reshape(target.dims[a], free.dims[a]),
                target.p,
            )
        if phi.shape != (target.dims[a], free.dims[a]):
            raise ShapeMismatch("component has wrong shape", witness=(a, phi.shape))
        if phi.rank() != target.dims[a]:
            raise ValidationError("component is not surjective", witness=a)
        comps[a] = phi
    for (u, v) in P.covers:
        lhs = comps[v] @ free.composite(u, v)
        rhs = target.composite(u, v) @ comps[u]
        if lhs != rhs:
            raise ValidationError("naturality square fails", witness=(u, v))
    return Presentation(free, target, comps)


def presentation_from_generator_columns(
    M: PersistenceModule, gen_cols: Mapping[object, Matrix]
) -> Presentation:
    """Presentation whose generators at element a map to the given columns
    of M(a); columns are pushed along structure maps to every b >= a.

    With identity columns at every element this is the canonical
    presentation (one generator per basis vector of every M(a))."""
    P = M.index
    mult = {a: gen_cols[a].cols if a in gen_cols else 0 for a in P.elements}
    F = free_module(P, mult, M.p)
    components = {}
    for b in P.elements:
        blocks = []
        for a in P.elements:
            if P.le(a, b) and mult[a]:
                blocks.append((M.composite(a, b) @ gen_cols[a]).a)
        if blocks:
            mat = Matrix(np.hstack(blocks), M.p)
        else:
            mat = Matrix.zeros(M.dims[b], F.module.dims[b], M.p)
        components[b] = mat
    return validate_presentation(F.module, M, components)


def canonical_presentation(M: PersistenceModule) -> Presentation:
    """The full down-set free cover: generators at a = a basis of M(a)."""
    cols = {a: Matrix.identity(M.dims[a], M.p) for a in M.index.elements}
    return presentation_from_generator_columns(M, cols)


def redundant_presentation(M: PersistenceModule, extra: Mapping) -> Presentation:
    """Canonical presentation padded with extra generators that the
    relations kill immediately (their columns map to zero in M)."""
    cols = {}
    for a in M.index.elements:
        ident = Matrix.identity(M.dims[a], M.p)
        k = int(extra.get(a, 0))
        if k:
            cols[a] = ident.hstack(Matrix.zeros(M.dims[a], k, M.p))
        else:
            cols[a] = ident
    return presentation_from_generator_columns(M, cols)


def bd_presentation(pres: Presentation,
                    intervals: IntervalPoset | None = None) -> IntFunction:
    """[a, b] -> dim of the intersection of the image of F(a) in F(b)
    with the kernel of the component at b."""
    P = pres.target.index
    ip = intervals or interval_poset(P)
    kernels = {b: pres.components[b].kernel_basis() for b in P.elements}
    vals = {}
    for iv in ip.intervals:
        image = pres.free.composite(iv.lo, iv.hi).column_space()
        vals[iv] = intersection_dim(image, kernels[iv.hi])
    return IntFunction(ip.poset, vals)


def presentation_diagram(pres: Presentation,
                         intervals: IntervalPoset | None = None) -> IntFunction:
    return mobius_inversion(bd_presentation(pres, intervals))


def pushforward_module(M: PersistenceModule, c: GaloisConnection) -> PersistenceModule:
    """Reindex along the right adjoint: x -> M(g(x)) over the target
    poset, with structure maps M(g(x) <= g(y)).

    This is the restriction of M to the image of g, which is what the
    presentation-restriction argument needs; the left adjoint f only
    enters through the pushforward of diagrams.
    """
    if c.source != M.index:
        raise IndexMismatch("connection must start at the module's index poset")
    Q = c.target
    dims = {x: M.dims[c.g[x]] for x in Q.elements}
    maps = {(x, y): M.composite(c.g[x], c.g[y]) for (x, y) in Q.covers}
    return validate_module(Q, dims, maps, M.p)


def restrict_presentation(pres: Presentation, c: GaloisConnection) -> Presentation:
    """The presentation of the reindexed module obtained by reindexing the
    free module and the components themselves."""
    M = pres.target
    if c.source != M.index:
        raise IndexMismatch("connection must start at the module's index poset")
    Q = c.target
    N = pushforward_module(M, c)
    free_dims = {x: pres.free.dims[c.g[x]] for x in Q.elements}
    free_maps = {(x, y): pres.free.composite(c.g[x], c.g[y]) for (x, y) in Q.covers}
    freeN = validate_module(Q, free_dims, free_maps, M.p)
    comps = {x: pres.components[c.g[x]] for x in Q.elements}
    return validate_presentation(freeN, N, comps)


def check_module_equivalence(M: PersistenceModule, c: GaloisConnection) -> CheckResult:
    """Reindex M along the connection and verify that the reindexed
    module's diagram equals, away from the diagonal, the pushforward of
    M's diagram along the lifted left adjoint.  Both sides use canonical
    presentations, so this exercises presentation-independence too."""
    N = pushforward_module(M, c)
    ip_p = interval_poset(M.index)
    ip_q = interval_poset(c.target)
    lifted = int_of_galois(c, ip_p, ip_q)
    lhs = presentation_diagram(canonical_presentation(N), ip_q)
    rhs = pushforward(
        presentation_diagram(canonical_presentation(M), ip_p), lifted.f, ip_q.poset
    )
    witness = diff_up_to_diagonal(lhs, rhs)
    if witness is not None:
        return CheckResult(
            False, witness=(witness, lhs(witness), rhs(witness)),
            message="reindexed diagram does not match the pushforward",
        )
    return CheckResult(True)


def _homology_reps(cc, d: int):
    """Deterministic homology data at one degree: boundary basis and
    representative cycles completing it to the cycle space."""
    Z = cc.cycles(d)
    B = cc.boundaries(d)
    reps = complete_basis(B, Z)
    return B, reps


def _induced_functor(P: FinitePoset, p: int, local_data, embed) -> PersistenceModule:
    """Shared construction for (co)homology modules.

    local_data(a) -> (boundary basis, representative matrix) in the local
    coordinates at a; embed(a, b, matrix) -> the same vectors written in
    the local coordinates at b (for a <= b)."""
    dims = {}
    data = {}
    for a in P.elements:
        B, reps = local_data(a)
        data[a] = (B, reps)
        dims[a] = reps.cols
    maps = {}
    for (a, b) in P.covers:
        B_b, reps_b = data[b]
        _, reps_a = data[a]
        target = embed(a, b, reps_a)
        if dims[b] == 0:
            maps[(a, b)] = Matrix.zeros(0, dims[a], p)
            continue
        # solve [boundaries | representatives] X = image; the class of the
        # image is the lower block of X
        frame = B_b.basis.hstack(reps_b)
        X = frame.solve(target)
        maps[(a, b)] = Matrix(X.a[B_b.dim:, :], p)
    return validate_module(P, dims, maps, p)


def _filtration_module(F, d: int, p: int) -> PersistenceModule:
    complexes = _complexes(F, p)
    ambient = {s: i for i, s in enumerate(F.ambient.simplices(d))}

    def local_data(a):
        return _homology_reps(complexes[a], d)

    def embed(a, b, mat: Matrix) -> Matrix:
        rows_a = [ambient[s] for s in complexes[a].basis.get(d, ())]
        rows_b = {ambient[s]: i for i, s in enumerate(complexes[b].basis.get(d, ()))}
        out = np.zeros((len(rows_b), mat.cols), dtype=np.int64)
        for i, r in enumerate(rows_a):
            out[rows_b[r], :] = mat.a[i, :]
        return Matrix(out, p)

    return _induced_functor(F.index, p, local_data, embed)


def homology_module(F: Filtration, d: int, p: int) -> PersistenceModule:
    """The degree-d homology functor of a filtration, in deterministic
    pivot-completed cycle bases."""
    if F.kind != "filtration":
        raise ValidationError("homology_module expects a filtration")
    return _filtration_module(F, d, p)


def cohomology_module(F: Cofiltration, d: int, p: int) -> PersistenceModule:
    """The degree-d compactly supported cohomology functor of a
    cofiltration (extension by zero induces the maps)."""
    if F.kind != "cofiltration":
        raise ValidationError("cohomology_module expects a cofiltration")
    return _filtration_module(F, d, p)


def check_equivalence(F, p: int, degrees: Iterable[int] | None = None) -> CheckResult:
    """Compare the two routes to a (co)filtration's diagram in every
    degree: cycles-and-boundaries versus the kernel function of the
    induced (co)homology module.  Also asserts that the inversion of the
    boundary-dimension function vanishes away from the diagonal."""
    if degrees is None:
        degrees = range(F.ambient.dim + 1)
    ip = interval_poset(F.index)
    complexes = _complexes(F, p)
    builder = homology_module if F.kind == "filtration" else cohomology_module
    for d in degrees:
        bd = bd_function(F, d, p, ip, complexes)
        via_spaces = mobius_inversion(bd)
        M = builder(F, d, p)
        via_module = module_diagram(M, ip)
        witness = diff_up_to_diagonal(via_spaces, via_module)
        if witness is not None:
            return CheckResult(
                False,
                witness=(d, witness, via_spaces(witness), via_module(witness)),
                message="two diagram routes disagree",
            )
        bdim = boundary_dim_function(F, d, p, ip, complexes)
        dbdim = mobius_inversion(bdim)
        for iv in ip.intervals:
            if not iv.diagonal and dbdim(iv) != 0:
                return CheckResult(
                    False, witness=(d, iv, dbdim(iv)),
                    message="boundary-dimension inversion is nonzero off the diagonal",
                )
        # consistency of the two routes' raw data: nullity of the induced
        # map equals the birth-death value minus the boundary dimension
        kf = kernel_function(M, ip)
        for iv in ip.intervals:
            if kf(iv) != bd(iv) - bdim(iv):
                return CheckResult(
                    False, witness=(d, iv, kf(iv), bd(iv) - bdim(iv)),
                    message="kernel function disagrees with birth-death minus boundaries",
                )
    return CheckResult(True)
