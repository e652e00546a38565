"""Filtrations and cofiltrations over finite posets, their birth-death
functions, and the persistence diagrams obtained by Mobius inversion.

A filtration assigns a subcomplex to each poset element, monotonically;
its degree-d birth-death function sends an interval [a, b] to the
dimension of the intersection of the cycle space at a with the boundary
space at b, both embedded in the ambient chain group.  A cofiltration
assigns supcomplexes and uses the compactly supported cochain complex
instead.  The diagram is the Mobius inversion of the birth-death function
over the interval poset; entries may be negative.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .errors import IndexMismatch, NotMonotone, ValidationError
from .linalg import Matrix, Subspace, intersection_dim
from .poset import (
    FinitePoset,
    GaloisConnection,
    IntervalPoset,
    IntFunction,
    Interval,
    int_of_galois,
    interval_poset,
    mobius_inversion,
    pullback,
    pushforward,
)
from .report import CheckResult
from .simplicial import (
    SUB,
    SUP,
    GradedComplex,
    SimplexSet,
    SimplicialComplex,
    complex_for,
)

HOMOLOGY = "homology"
COHOMOLOGY = "cohomology"


@dataclass(frozen=True)
class Filtration:
    """A monotone assignment of subcomplexes of a fixed complex to the
    elements of a finite poset."""

    index: FinitePoset
    ambient: SimplicialComplex
    assignment: Mapping[object, SimplexSet]

    kind = "filtration"
    set_kind = SUB

    def at(self, a) -> SimplexSet:
        return self.assignment[a]


@dataclass(frozen=True)
class Cofiltration:
    """A monotone assignment of supcomplexes of a fixed complex."""

    index: FinitePoset
    ambient: SimplicialComplex
    assignment: Mapping[object, SimplexSet]

    kind = "cofiltration"
    set_kind = SUP

    def at(self, a) -> SimplexSet:
        return self.assignment[a]


def _validate_assignment(P, K, assignment, kind, cls):
    sets = {}
    for a in P.elements:
        if a not in assignment:
            raise ValidationError("assignment is not total", witness=a)
        val = assignment[a]
        if isinstance(val, SimplexSet):
            if val.ambient != K or val.kind != kind:
                raise ValidationError("assignment has wrong ambient or kind", witness=a)
            sets[a] = val
        else:
            sets[a] = SimplexSet(K, val, kind)
    for a, b in P.covers:
        extra = sets[a].members - sets[b].members
        if extra:
            raise NotMonotone(
                "assignment is not monotone", witness=(a, b, next(iter(extra)))
            )
    return cls(P, K, sets)


def validate_filtration(
    P: FinitePoset, K: SimplicialComplex, assignment: Mapping
) -> Filtration:
    return _validate_assignment(P, K, assignment, SUB, Filtration)


def validate_cofiltration(
    P: FinitePoset, K: SimplicialComplex, assignment: Mapping
) -> Cofiltration:
    return _validate_assignment(P, K, assignment, SUP, Cofiltration)


def _complexes(F, p: int) -> dict:
    return {a: complex_for(F.at(a), p) for a in F.index.elements}


def _embed(space: Subspace, local_simplices, ambient_index, n: int) -> Subspace:
    """Scatter a local basis into the ambient coordinate block.

    Valid for subcomplex inclusion and for extension of cochains by zero
    alike; both are coordinate-subspace maps in the canonical order.
    """
    rows = [ambient_index[s] for s in local_simplices]
    out = np.zeros((n, space.dim), dtype=np.int64)
    out[rows, :] = space.basis.a
    return Subspace(n, Matrix(out, space.p))


def _interval_spaces(F, d: int, p: int, complexes=None):
    """Cycle space at each element and boundary space at each element,
    embedded in the ambient complex's degree-d coordinates."""
    complexes = complexes or _complexes(F, p)
    ambient = {s: i for i, s in enumerate(F.ambient.simplices(d))}
    n = len(ambient)
    Z, B = {}, {}
    for a in F.index.elements:
        cc = complexes[a]
        local = cc.basis.get(d, ())
        Z[a] = _embed(cc.cycles(d), local, ambient, n)
        B[a] = _embed(cc.boundaries(d), local, ambient, n)
    return Z, B


def bd_function(F, d: int, p: int, intervals: IntervalPoset | None = None,
                complexes=None) -> IntFunction:
    """Birth-death function of a (co)filtration in degree d over F_p."""
    ip = intervals or interval_poset(F.index)
    Z, B = _interval_spaces(F, d, p, complexes)
    vals = {iv: intersection_dim(Z[iv.lo], B[iv.hi]) for iv in ip.intervals}
    return IntFunction(ip.poset, vals)


def bd_homology(F: Filtration, d: int, p: int) -> IntFunction:
    if F.kind != "filtration":
        raise ValidationError("bd_homology expects a filtration")
    return bd_function(F, d, p)


def bd_cohomology(F: Cofiltration, d: int, p: int) -> IntFunction:
    if F.kind != "cofiltration":
        raise ValidationError("bd_cohomology expects a cofiltration")
    return bd_function(F, d, p)


def boundary_dim_function(F, d: int, p: int, intervals: IntervalPoset | None = None,
                          complexes=None) -> IntFunction:
    """[a, b] -> dim of the degree-d (co)boundary space at a.

    Constant in the second coordinate; its Mobius inversion vanishes away
    from the diagonal, which is the hinge of the method-equivalence proof.
    """
    ip = intervals or interval_poset(F.index)
    complexes = complexes or _complexes(F, p)
    dims = {a: complexes[a].boundaries(d).dim for a in F.index.elements}
    return IntFunction(ip.poset, {iv: dims[iv.lo] for iv in ip.intervals})


@dataclass(frozen=True)
class Diagram:
    """A birth-death function together with its Mobius inversion."""

    kind: str
    degree: int
    p: int
    intervals: IntervalPoset
    bd: IntFunction
    dgm: IntFunction


def diagram(F, d: int, p: int) -> Diagram:
    """Degree-d persistence diagram of a filtration or cofiltration."""
    ip = interval_poset(F.index)
    bd = bd_function(F, d, p, ip)
    kind = HOMOLOGY if F.kind == "filtration" else COHOMOLOGY
    return Diagram(kind, d, p, ip, bd, mobius_inversion(bd))


def all_diagrams(F, p: int, degrees: Iterable[int] | None = None) -> dict[int, Diagram]:
    """Diagrams for several degrees, sharing one pass over the complexes."""
    if degrees is None:
        degrees = range(F.ambient.dim + 1)
    ip = interval_poset(F.index)
    complexes = _complexes(F, p)
    kind = HOMOLOGY if F.kind == "filtration" else COHOMOLOGY
    out = {}
    for d in degrees:
        bd = bd_function(F, d, p, ip, complexes)
        out[d] = Diagram(kind, d, p, ip, bd, mobius_inversion(bd))
    return out


def pullback_filtration(F, c: GaloisConnection):
    """Reindex along the right adjoint: the (co)filtration x -> F(g(x))
    over the connection's target poset."""
    if c.source != F.index:
        raise IndexMismatch(
            "connection must start at the filtration's index poset"
        )
    assignment = {x: F.at(c.g[x]).members for x in c.target.elements}
    build = validate_filtration if F.kind == "filtration" else validate_cofiltration
    return build(c.target, F.ambient, assignment)


def check_functoriality(F, c: GaloisConnection, p: int,
                        degrees: Iterable[int] | None = None) -> CheckResult:
    """Verify, in every requested degree, that reindexing along the
    connection pulls back the birth-death function and pushes forward the
    diagram, both exactly."""
    G = pullback_filtration(F, c)
    if degrees is None:
        degrees = range(F.ambient.dim + 1)
    ip_p = interval_poset(F.index)
    ip_q = interval_poset(c.target)
    lifted = int_of_galois(c, ip_p, ip_q)
    for d in degrees:
        bd_f = bd_function(F, d, p, ip_p)
        bd_g = bd_function(G, d, p, ip_q)
        expected_bd = pullback(bd_f, lifted.g, ip_q.poset)
        for iv in ip_q.intervals:
            if bd_g(iv) != expected_bd(iv):
                return CheckResult(
                    False, witness=(d, iv, bd_g(iv), expected_bd(iv)),
                    message="birth-death pullback identity fails",
                )
        dgm_g = mobius_inversion(bd_g)
        expected_dgm = pushforward(mobius_inversion(bd_f), lifted.f, ip_q.poset)
        for iv in ip_q.intervals:
            if dgm_g(iv) != expected_dgm(iv):
                return CheckResult(
                    False, witness=(d, iv, dgm_g(iv), expected_dgm(iv)),
                    message="diagram pushforward identity fails",
                )
    return CheckResult(True)
