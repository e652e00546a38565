"""Finite simplicial complexes, sub/supcomplexes, chain and compactly
supported cochain complexes, and barycentric subdivision.

Simplices are tuples of vertex ids, strictly increasing in the position
order of the complex's vertex list.  The canonical simplex order (by
dimension, then lexicographic on position tuples) is fixed at
construction and shared by every simplex subset, so the inclusion of any
nested pair of subsets is a coordinate-subspace map.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    DuplicateElement,
    NotFaceClosed,
    NotNested,
    NotSubcomplex,
    NotSupcomplex,
    UnknownVertex,
    ValidationError,
)
from .linalg import Matrix, Subspace


def _sort_key(v):
    # mixed-type vertex lists: integers first, then everything else by repr
    return (0, v, "") if isinstance(v, int) else (1, 0, str(v))


class SimplicialComplex:
    """A finite abstract simplicial complex."""

    __slots__ = ("vertices", "_vpos", "_by_dim", "_index", "_cofacets", "_maximal")

    def __init__(self, vertices: Sequence, simplices: Iterable[tuple]):
        vertices = tuple(vertices)
        if len(set(vertices)) != len(vertices):
            raise DuplicateElement("duplicate vertex id")
        self.vertices = vertices
        self._vpos = {v: i for i, v in enumerate(vertices)}
        seen = set()
        for s in simplices:
            s = tuple(s)
            if not s:
                raise ValidationError("empty simplex is not allowed")
            pos = []
            for v in s:
                if v not in self._vpos:
                    raise UnknownVertex("simplex uses unknown vertex", witness=(s, v))
                pos.append(self._vpos[v])
            if any(pos[i] >= pos[i + 1] for i in range(len(pos) - 1)):
                raise ValidationError(
                    "simplex vertices must be strictly sorted", witness=s
                )
            seen.add(s)
        for v in vertices:
            if (v,) not in seen:
                raise NotFaceClosed("vertex is missing its singleton", witness=v)
        for s in seen:
            for f in facets(s):
                if f not in seen:
                    raise NotFaceClosed("missing face", witness=(f, s))
        by_dim: dict[int, list] = {}
        for s in seen:
            by_dim.setdefault(len(s) - 1, []).append(s)
        for d in by_dim:
            by_dim[d].sort(key=lambda s: tuple(self._vpos[v] for v in s))
        self._by_dim = {d: tuple(by_dim[d]) for d in sorted(by_dim)}
        self._index = {
            s: i for d in self._by_dim for i, s in enumerate(self._by_dim[d])
        }
        self._cofacets = None
        self._maximal = None

    @classmethod
    def from_simplices(cls, vertices: Sequence, simplices: Iterable) -> "SimplicialComplex":
        return cls(vertices, [tuple(s) for s in simplices])

    @classmethod
    def from_maximal(cls, maximal: Iterable, vertices: Sequence = ()) -> "SimplicialComplex":
        """Close the given simplices under faces; extra ``vertices`` become
        isolated points."""
        maximal = [tuple(s) for s in maximal]
        vs = set(vertices)
        for s in maximal:
            vs.update(s)
        try:
            ordered = sorted(vs, key=_sort_key)
        except TypeError:
            raise ValidationError("vertex ids are not orderable; list them explicitly")
        vpos = {v: i for i, v in enumerate(ordered)}
        closed = {(v,) for v in ordered}
        for s in maximal:
            s = tuple(sorted(set(s), key=lambda v: vpos[v]))
            for sub in _nonempty_subsets(s):
                closed.add(sub)
        return cls(ordered, closed)

    @property
    def dim(self) -> int:
        return max(self._by_dim) if self._by_dim else -1

    def simplices(self, d: int) -> tuple:
        """The d-simplices in canonical order."""
        return self._by_dim.get(d, ())

    def all_simplices(self) -> tuple:
        return tuple(s for d in sorted(self._by_dim) for s in self._by_dim[d])

    def __contains__(self, s) -> bool:
        return tuple(s) in self._index

    def __len__(self) -> int:
        return len(self._index)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SimplicialComplex)
            and self.vertices == other.vertices
            and self._by_dim == other._by_dim
        )

    def __repr__(self) -> str:
        counts = ",".join(str(len(self._by_dim[d])) for d in sorted(self._by_dim))
        return f"SimplicialComplex(f-vector ({counts}))"

    def index_in_dim(self, s: tuple) -> int:
        try:
            return self._index[s]
        except KeyError:
            raise UnknownVertex("not a simplex of this complex", witness=s) from None

    def cofacets(self, s: tuple) -> tuple:
        """Simplices of one dimension higher containing s."""
        if self._cofacets is None:
            table = {s: [] for s in self._index}
            for t in self._index:
                for f in facets(t):
                    table[f].append(t)
            self._cofacets = {
                s: tuple(sorted(ts, key=lambda t: self._index[t]))
                for s, ts in table.items()
            }
        return self._cofacets[tuple(s)]

    def maximal_simplices(self) -> tuple:
        if self._maximal is None:
            self._maximal = tuple(
                s for s in self.all_simplices() if not self.cofacets(s)
            )
        return self._maximal

    def euler_characteristic(self) -> int:
        return sum(
            (-1) ** d * len(ss) for d, ss in self._by_dim.items()
        )


def facets(s: tuple) -> tuple:
    """Codimension-1 faces in vertex-deletion order."""
    if len(s) == 1:
        return ()
    return tuple(s[:i] + s[i + 1:] for i in range(len(s)))


def _nonempty_subsets(s: tuple):
    n = len(s)
    for mask in range(1, 1 << n):
        yield tuple(s[i] for i in range(n) if mask >> i & 1)


def validate_complex(
    vertices: Sequence, simplices: Iterable | None = None, maximal: Iterable | None = None
) -> SimplicialComplex:
    """Spec-level constructor: explicit simplex list (face closure is
    verified) or maximal simplices (closure is computed)."""
    if (simplices is None) == (maximal is None):
        raise ValidationError("give exactly one of simplices or maximal")
    if maximal is not None:
        return SimplicialComplex.from_maximal(maximal, vertices)
    return SimplicialComplex.from_simplices(vertices, simplices)


SUB = "sub"
SUP = "sup"


class SimplexSet:
    """A subset of a complex's simplices, closed downward (kind 'sub',
    a subcomplex) or upward (kind 'sup', a supcomplex)."""

    __slots__ = ("ambient", "members", "kind", "_by_dim")

    def __init__(self, ambient: SimplicialComplex, members: Iterable[tuple], kind: str):
        if kind not in (SUB, SUP):
            raise ValidationError("kind must be 'sub' or 'sup'", witness=kind)
        members = frozenset(tuple(s) for s in members)
        for s in members:
            if s not in ambient:
                raise UnknownVertex("member is not a simplex of the ambient", witness=s)
        if kind == SUB:
            for t in members:
                for f in facets(t):
                    if f not in members:
                        raise NotSubcomplex("missing face", witness=(f, t))
        else:
            for s in members:
                for t in ambient.cofacets(s):
                    if t not in members:
                        raise NotSupcomplex("missing coface", witness=(s, t))
        self.ambient = ambient
        self.members = members
        self.kind = kind
        self._by_dim = None

    def simplices(self, d: int) -> tuple:
        """Members of dimension d in the ambient canonical order."""
        if self._by_dim is None:
            by_dim: dict[int, list] = {}
            for s in self.members:
                by_dim.setdefault(len(s) - 1, []).append(s)
            for d_ in by_dim:
                by_dim[d_].sort(key=self.ambient.index_in_dim)
            self._by_dim = {d_: tuple(v) for d_, v in by_dim.items()}
        return self._by_dim.get(d, ())

    @property
    def dim(self) -> int:
        return max((len(s) - 1 for s in self.members), default=-1)

    def __contains__(self, s) -> bool:
        return tuple(s) in self.members

    def __len__(self) -> int:
        return len(self.members)

    def __le__(self, other: "SimplexSet") -> bool:
        return self.members <= other.members

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SimplexSet)
            and self.ambient == other.ambient
            and self.kind == other.kind
            and self.members == other.members
        )

    def __repr__(self) -> str:
        return f"SimplexSet({self.kind}, {len(self.members)} of {len(self.ambient)})"

    def complement(self) -> "SimplexSet":
        """K minus A; a supcomplex iff A is a subcomplex and conversely."""
        rest = set(self.ambient.all_simplices()) - self.members
        return SimplexSet(self.ambient, rest, SUP if self.kind == SUB else SUB)


def validate_simplex_set(
    ambient: SimplicialComplex, members: Iterable, kind: str
) -> SimplexSet:
    return SimplexSet(ambient, members, kind)


def full_set(ambient: SimplicialComplex, kind: str = SUB) -> SimplexSet:
    return SimplexSet(ambient, ambient.all_simplices(), kind)


def empty_set(ambient: SimplicialComplex, kind: str = SUB) -> SimplexSet:
    return SimplexSet(ambient, (), kind)


@dataclass(frozen=True)
class GradedComplex:
    """A chain complex (shift -1, boundary maps C_d -> C_{d-1}) or cochain
    complex (shift +1, coboundary maps C^d -> C^{d+1}) with explicit
    simplex bases."""

    p: int
    shift: int
    basis: Mapping[int, tuple]
    maps: Mapping[int, Matrix]

    def dim_at(self, d: int) -> int:
        return len(self.basis.get(d, ()))

    @property
    def degrees(self) -> tuple:
        return tuple(sorted(self.basis))

    def map_from(self, d: int) -> Matrix:
        """The differential leaving degree d (zero matrix if absent)."""
        if d in self.maps:
            return self.maps[d]
        return Matrix.zeros(self.dim_at(d + self.shift), self.dim_at(d), self.p)

    def cycles(self, d: int) -> Subspace:
        return self.map_from(d).kernel_basis()

    def boundaries(self, d: int) -> Subspace:
        return self.map_from(d - self.shift).column_space()

    def homology_dim(self, d: int) -> int:
        return self.cycles(d).dim - self.boundaries(d).dim


def _boundary_with_drops(A: SimplexSet, p: int) -> dict[int, Matrix]:
    """Boundary matrices on A's simplices; faces outside A map to zero.

    For a subcomplex no face is ever dropped and this is the usual
    simplicial boundary with signs (-1)^i in sorted-vertex order.
    """
    out = {}
    top = A.dim
    for d in range(1, top + 1):
        rows = {s: i for i, s in enumerate(A.simplices(d - 1))}
        cols = A.simplices(d)
        m = np.zeros((len(rows), len(cols)), dtype=np.int64)
        for j, s in enumerate(cols):
            for i, f in enumerate(facets(s)):
                if f in rows:
                    m[rows[f], j] = (-1) ** i
        out[d] = Matrix(m, p)
    return out


def _assert_composes_to_zero(maps: dict[int, Matrix], shift: int):
    for d, m in maps.items():
        nxt = maps.get(d + shift)
        if nxt is not None and not (nxt @ m).is_zero():
            raise AssertionError("differential does not square to zero")


def chain_complex(A: SimplexSet, p: int) -> GradedComplex:
    """The simplicial chain complex of a subcomplex over F_p."""
    if A.kind != SUB:
        raise ValidationError("chain_complex expects a subcomplex")
    maps = _boundary_with_drops(A, p)
    basis = {d: A.simplices(d) for d in range(A.dim + 1)}
    _assert_composes_to_zero(maps, -1)
    return GradedComplex(p, -1, basis, maps)


def compact_cochain_complex(A: SimplexSet, p: int) -> GradedComplex:
    """The compactly supported cellular cochain complex of a supcomplex:
    transpose of the face-dropping boundary on A's simplices.

    Squares to zero because the dropped-face complex is the quotient of
    the ambient chain complex by the subcomplex K minus A.
    """
    if A.kind != SUP:
        raise ValidationError("compact_cochain_complex expects a supcomplex")
    bnd = _boundary_with_drops(A, p)
    maps = {d - 1: bnd[d].transpose() for d in bnd}
    basis = {d: A.simplices(d) for d in range(A.dim + 1)}
    _assert_composes_to_zero(maps, +1)
    return GradedComplex(p, +1, basis, maps)


def complex_for(A: SimplexSet, p: int) -> GradedComplex:
    """Chain complex for subcomplexes, compact cochain complex for
    supcomplexes."""
    return chain_complex(A, p) if A.kind == SUB else compact_cochain_complex(A, p)


def inclusion_matrices(A: SimplexSet, B: SimplexSet, d: int, p: int) -> tuple[Matrix, Matrix]:
    """Chain-level and cochain-level maps for a nested pair A <= B.

    Sub pair: (coordinate inclusion C_d A -> C_d B, its transpose, the
    restriction of cochains).  Sup pair: (the coface-forgetting surjection
    i_d : C_d B -> C_d A, its transpose j^d : C^d A -> C^d B, extension
    by zero).
    """
    if A.kind != B.kind:
        raise NotNested("kinds disagree", witness=(A.kind, B.kind))
    if not A <= B:
        missing = next(iter(A.members - B.members))
        raise NotNested("first set is not contained in the second", witness=missing)
    a_idx = {s: i for i, s in enumerate(A.simplices(d))}
    b_simpl = B.simplices(d)
    m = np.zeros((len(b_simpl), len(a_idx)), dtype=np.int64)
    for j, s in enumerate(b_simpl):
        if s in a_idx:
            m[j, a_idx[s]] = 1
    incl = Matrix(m, p)  # C_d A -> C_d B coordinate inclusion
    if A.kind == SUB:
        return incl, incl.transpose()
    return incl.transpose(), incl


@dataclass(frozen=True)
class Subdivision:
    """Barycentric subdivision together with its bookkeeping: each simplex
    of the subdivision is a chain of simplices of the original complex."""

    original: SimplicialComplex
    complex: SimplicialComplex
    vertex_of: Mapping[tuple, object]  # original simplex -> new vertex id
    chain_of: Mapping[tuple, tuple]    # new simplex -> chain it came from

    def minimum(self, s: tuple) -> tuple:
        """The lowest-dimensional original simplex in the chain of s."""
        return self.chain_of[tuple(s)][0]


def barycentric_subdivision_map(K: SimplicialComplex) -> Subdivision:
    """Subdivision with the chain bookkeeping retained.

    Vertices of the subdivision are the simplices of K (id: vertex ids
    joined by '.'), simplices are the strict chains under the face
    relation, faces are subchains.
    """
    order = K.all_simplices()
    vertex_of = {s: ".".join(str(v) for v in s) for s in order}
    if len(set(vertex_of.values())) != len(order):
        raise ValidationError(
            "generated subdivision vertex ids collide; rename vertices"
        )
    npos = {s: i for i, s in enumerate(order)}

    # strict cofaces of every simplex (any codimension), canonical order
    cofaces = {s: [] for s in order}
    for t in order:
        for sub in _nonempty_subsets(t):
            if sub != t:
                cofaces[sub].append(t)
    for s in cofaces:
        cofaces[s].sort(key=npos.__getitem__)

    chains_from: dict[tuple, list] = {}
    for s in reversed(order):
        own = [(s,)]
        for t in cofaces[s]:
            own.extend((s,) + c for c in chains_from[t])
        chains_from[s] = own

    chain_of = {}
    simplices = []
    for s in order:
        for c in chains_from[s]:
            new = tuple(vertex_of[x] for x in c)
            simplices.append(new)
            chain_of[new] = c
    L = SimplicialComplex([vertex_of[s] for s in order], simplices)
    return Subdivision(K, L, vertex_of, chain_of)


def barycentric_subdivision(K: SimplicialComplex) -> SimplicialComplex:
    return barycentric_subdivision_map(K).complex


def homology_dims(K: SimplicialComplex, p: int) -> list[int]:
    """Betti numbers of the whole complex over F_p, degrees 0..dim."""
    cc = chain_complex(full_set(K, SUB), p)
    return [cc.homology_dim(d) for d in range(K.dim + 1)]
