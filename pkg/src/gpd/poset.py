"""Finite posets, interval posets, Galois connections, and the integer
incidence calculus.

Every downstream invariant of the library is an integer-valued function on
a finite poset, and every theorem it verifies reduces to three operations
defined here: Mobius inversion, pullback along the right adjoint of a
Galois connection, and pushforward along the left adjoint.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from .errors import (
    AdjunctionFailed,
    CycleDetected,
    DuplicateElement,
    NotMonotone,
    UnknownElement,
)
from .report import CheckResult

Element = Hashable


class FinitePoset:
    """Immutable finite poset: an ordered element list plus a dense
    boolean ``leq`` matrix indexed by element position.

    The element order is the canonical order used everywhere downstream
    (serialization, linear extensions, matrix layouts), so two posets with
    the same relation but different element order are distinct objects.
    """

    __slots__ = ("elements", "leq", "_pos", "_covers", "_linext")

    def __init__(self, elements: Sequence[Element], leq: np.ndarray):
        elements = tuple(elements)
        leq = np.asarray(leq, dtype=bool)
        n = len(elements)
        if leq.shape != (n, n):
            raise ValueError(f"leq must be {n}x{n}, got {leq.shape}")
        if len(set(elements)) != n:
            raise DuplicateElement("element ids must be distinct")
        if not leq.flags.writeable:
            self.leq = leq
        else:
            leq = leq.copy()
            leq.setflags(write=False)
            self.leq = leq
        self.elements = elements
        self._pos = {e: i for i, e in enumerate(elements)}
        self._covers = None
        self._linext = None

    @classmethod
    def from_covers(
        cls, elements: Iterable[Element], covers: Iterable[tuple]
    ) -> "FinitePoset":
        """Build a poset from generating relations (lower, upper).

        The ``leq`` relation is the reflexive-transitive closure of the
        given pairs.  Raises CycleDetected if the closure would violate
        antisymmetry, UnknownElement / DuplicateElement on bad ids.
        """
        elements = tuple(elements)
        if len(set(elements)) != len(elements):
            seen, dup = set(), None
            for e in elements:
                if e in seen:
                    dup = e
                    break
                seen.add(e)
            raise DuplicateElement("duplicate element id", witness=dup)
        pos = {e: i for i, e in enumerate(elements)}
        n = len(elements)
        rel = np.eye(n, dtype=bool)
        for lo, hi in covers:
            if lo not in pos:
                raise UnknownElement("cover references unknown element", witness=lo)
            if hi not in pos:
                raise UnknownElement("cover references unknown element", witness=hi)
            rel[pos[lo], pos[hi]] = True
        # reflexive-transitive closure by repeated boolean squaring
        while True:
            nxt = rel | (rel @ rel)
            if np.array_equal(nxt, rel):
                break
            rel = nxt
        sym = rel & rel.T
        np.fill_diagonal(sym, False)
        if sym.any():
            i, j = np.argwhere(sym)[0]
            raise CycleDetected(
                "covers contain a cycle", witness=(elements[i], elements[j])
            )
        return cls(elements, rel)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, e) -> bool:
        return e in self._pos

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FinitePoset)
            and self.elements == other.elements
            and np.array_equal(self.leq, other.leq)
        )

    def __repr__(self) -> str:
        return f"FinitePoset({len(self)} elements, {len(self.covers)} covers)"

    def position(self, e) -> int:
        try:
            return self._pos[e]
        except KeyError:
            raise UnknownElement("not an element of this poset", witness=e) from None

    def le(self, a, b) -> bool:
        return bool(self.leq[self.position(a), self.position(b)])

    def lt(self, a, b) -> bool:
        return a != b and self.le(a, b)

    @property
    def covers(self) -> tuple:
        """Canonical (minimal) cover pairs, ordered by element position."""
        if self._covers is None:
            lt = self.leq & ~np.eye(len(self), dtype=bool)
            child = lt & ~(lt @ lt)
            pairs = [
                (self.elements[i], self.elements[j]) for i, j in np.argwhere(child)
            ]
            pairs.sort(key=lambda ab: (self._pos[ab[0]], self._pos[ab[1]]))
            self._covers = tuple(pairs)
        return self._covers

    def linear_extension(self) -> tuple:
        """Deterministic topological order (smallest position first)."""
        if self._linext is None:
            n = len(self)
            strict = self.leq & ~np.eye(n, dtype=bool)
            placed = np.zeros(n, dtype=bool)
            order = []
            for _ in range(n):
                for i in range(n):
                    if not placed[i] and not (strict[:, i] & ~placed).any():
                        order.append(i)
                        placed[i] = True
                        break
            self._linext = tuple(self.elements[i] for i in order)
        return self._linext

    def down_set(self, e) -> tuple:
        """All a with a <= e, in canonical order."""
        j = self.position(e)
        return tuple(self.elements[i] for i in np.flatnonzero(self.leq[:, j]))

    def up_set(self, e) -> tuple:
        i = self.position(e)
        return tuple(self.elements[j] for j in np.flatnonzero(self.leq[i, :]))

    def comparable_pairs(self) -> Iterable[tuple]:
        """All (a, b) with a <= b, lexicographic in positions."""
        for i, j in np.argwhere(self.leq):
            yield self.elements[i], self.elements[j]

    def is_chain(self) -> bool:
        return bool((self.leq | self.leq.T).all())


def validate_poset(elements: Iterable[Element], covers: Iterable[tuple]) -> FinitePoset:
    """Spec-level constructor; alias for FinitePoset.from_covers."""
    return FinitePoset.from_covers(elements, covers)


class Interval(NamedTuple):
    """An interval [lo, hi] of a poset; valid iff lo <= hi there."""

    lo: Element
    hi: Element

    def __repr__(self) -> str:
        return f"[{self.lo},{self.hi}]"

    @property
    def diagonal(self) -> bool:
        return self.lo == self.hi


class IntervalPoset:
    """All intervals [a, b] of a parent poset under the product order:
    [a, b] <= [c, d] iff a <= c and b <= d."""

    __slots__ = ("parent", "intervals", "poset")

    def __init__(self, parent: FinitePoset):
        self.parent = parent
        n = len(parent)
        pairs = np.argwhere(parent.leq)  # (i, j) with e_i <= e_j
        pairs = pairs[np.lexsort((pairs[:, 1], pairs[:, 0]))]
        self.intervals = tuple(
            Interval(parent.elements[i], parent.elements[j]) for i, j in pairs
        )
        los = pairs[:, 0]
        his = pairs[:, 1]
        leq = parent.leq[np.ix_(los, los)] & parent.leq[np.ix_(his, his)]
        self.poset = FinitePoset(self.intervals, leq)

    def __len__(self) -> int:
        return len(self.intervals)

    def interval(self, lo, hi) -> Interval:
        iv = Interval(lo, hi)
        self.poset.position(iv)  # raises UnknownElement if lo <= hi fails
        return iv

    @property
    def diagonal(self) -> tuple:
        return tuple(iv for iv in self.intervals if iv.diagonal)


def interval_poset(parent: FinitePoset) -> IntervalPoset:
    return IntervalPoset(parent)


@dataclass(frozen=True)
class GaloisConnection:
    """An adjoint pair f : P -> Q, g : Q -> P with f(a) <= x iff a <= g(x).

    Construct through validate_galois; the constructor does not re-check.
    """

    source: FinitePoset
    target: FinitePoset
    f: Mapping
    g: Mapping


def _check_total(mapping: Mapping, dom: FinitePoset, cod: FinitePoset, name: str):
    for e in dom.elements:
        if e not in mapping:
            raise UnknownElement(f"{name} is not total", witness=e)
        if mapping[e] not in cod:
            raise UnknownElement(
                f"{name} maps outside its codomain", witness=(e, mapping[e])
            )


def _check_monotone(mapping: Mapping, dom: FinitePoset, cod: FinitePoset, name: str):
    for a, b in dom.covers:
        if not cod.le(mapping[a], mapping[b]):
            raise NotMonotone(f"{name} is not monotone", witness=(a, b))


def validate_galois(
    P: FinitePoset, Q: FinitePoset, f: Mapping, g: Mapping
) -> GaloisConnection:
    """Accept (f, g) iff both maps are total and monotone and the
    adjunction f(a) <= x iff a <= g(x) holds for every pair."""
    _check_total(f, P, Q, "f")
    _check_total(g, Q, P, "g")
    _check_monotone(f, P, Q, "f")
    _check_monotone(g, Q, P, "g")
    for a in P.elements:
        for x in Q.elements:
            if Q.le(f[a], x) != P.le(a, g[x]):
                raise AdjunctionFailed(
                    "f(a) <= x iff a <= g(x) fails", witness=(a, x)
                )
    return GaloisConnection(P, Q, dict(f), dict(g))


def identity_connection(P: FinitePoset) -> GaloisConnection:
    ident = {e: e for e in P.elements}
    return GaloisConnection(P, P, ident, dict(ident))


def compose_galois(c1: GaloisConnection, c2: GaloisConnection) -> GaloisConnection:
    """(h o f, g o i) for f : P <-> Q : g and h : Q <-> R : i."""
    if c1.target is not c2.source and c1.target != c2.source:
        raise UnknownElement("connections are not composable")
    f = {a: c2.f[c1.f[a]] for a in c1.source.elements}
    g = {r: c1.g[c2.g[r]] for r in c2.target.elements}
    return GaloisConnection(c1.source, c2.target, f, g)


def int_of_galois(
    c: GaloisConnection,
    source_intervals: IntervalPoset | None = None,
    target_intervals: IntervalPoset | None = None,
) -> GaloisConnection:
    """Lift a connection to interval posets: [a,b] -> [f(a), f(b)].

    The lift of a valid connection is always valid; a failure here is an
    internal bug, so it aborts rather than raising a validation error.
    """
    ip = source_intervals or IntervalPoset(c.source)
    iq = target_intervals or IntervalPoset(c.target)
    f2 = {iv: Interval(c.f[iv.lo], c.f[iv.hi]) for iv in ip.intervals}
    g2 = {iv: Interval(c.g[iv.lo], c.g[iv.hi]) for iv in iq.intervals}
    try:
        return validate_galois(ip.poset, iq.poset, f2, g2)
    except Exception as exc:  # pragma: no cover - guarded by the lemma
        raise AssertionError(f"interval lift of a valid connection failed: {exc}")


class IntFunction:
    """A total integer-valued function on a finite poset."""

    __slots__ = ("domain", "values")

    def __init__(self, domain: FinitePoset, values: Mapping):
        missing = [e for e in domain.elements if e not in values]
        if missing:
            raise UnknownElement("function is not total", witness=missing[0])
        self.domain = domain
        self.values = {e: int(values[e]) for e in domain.elements}

    def __call__(self, e) -> int:
        try:
            return self.values[e]
        except KeyError:
            raise UnknownElement("not in the function's domain", witness=e) from None

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, IntFunction)
            and self.domain == other.domain
            and self.values == other.values
        )

    def __add__(self, other: "IntFunction") -> "IntFunction":
        return IntFunction(
            self.domain, {e: self.values[e] + other(e) for e in self.domain.elements}
        )

    def __sub__(self, other: "IntFunction") -> "IntFunction":
        return IntFunction(
            self.domain, {e: self.values[e] - other(e) for e in self.domain.elements}
        )

    def scale(self, k: int) -> "IntFunction":
        return IntFunction(self.domain, {e: k * v for e, v in self.values.items()})

    def total(self) -> int:
        return sum(self.values.values())

    def support(self) -> tuple:
        return tuple(e for e in self.domain.elements if self.values[e] != 0)

    def __repr__(self) -> str:
        body = ", ".join(f"{e!r}: {v}" for e, v in self.values.items() if v != 0)
        return f"IntFunction({{{body}}})"


def zero_function(domain: FinitePoset) -> IntFunction:
    return IntFunction(domain, {e: 0 for e in domain.elements})


def mobius_inversion(m: IntFunction) -> IntFunction:
    """The unique dm with m(b) = sum of dm(a) over a <= b.

    Computed by recursion along a linear extension:
    dm(b) = m(b) - sum of dm(a) over a < b.
    """
    P = m.domain
    pos = {e: i for i, e in enumerate(P.elements)}
    out = [0] * len(P)
    for b in P.linear_extension():
        j = pos[b]
        below = np.flatnonzero(P.leq[:, j])
        acc = 0
        for i in below:
            if i != j:
                acc += out[i]
        out[j] = m.values[b] - acc
    return IntFunction(P, {e: out[pos[e]] for e in P.elements})


def mobius_sum(dm: IntFunction) -> IntFunction:
    """Forward accumulation m(b) = sum of dm(a) over a <= b."""
    P = dm.domain
    vec = [dm.values[e] for e in P.elements]
    vals = {}
    for j, b in enumerate(P.elements):
        vals[b] = int(sum(vec[i] for i in np.flatnonzero(P.leq[:, j])))
    return IntFunction(P, vals)


def pullback(m: IntFunction, g: Mapping, target: FinitePoset) -> IntFunction:
    """(g#m)(x) = m(g(x)) for g : target -> m.domain."""
    return IntFunction(target, {x: m(g[x]) for x in target.elements})


def pushforward(m: IntFunction, f: Mapping, target: FinitePoset) -> IntFunction:
    """(f#m)(x) = sum of m(a) over the fiber f^-1(x); empty fibers give 0."""
    vals = {x: 0 for x in target.elements}
    for a in m.domain.elements:
        x = f[a]
        if x not in vals:
            raise UnknownElement("f maps outside the target poset", witness=(a, x))
        vals[x] += m.values[a]
    return IntFunction(target, vals)


def check_rota(c: GaloisConnection, m: IntFunction) -> CheckResult:
    """Verify the Galois-connection inversion identity: with n = g#m,
    the inversion of n equals the pushforward along f of the inversion
    of m.  Both sides are computed independently."""
    if m.domain != c.source:
        raise UnknownElement("function domain must be the connection source")
    n = pullback(m, c.g, c.target)
    lhs = mobius_inversion(n)
    rhs = pushforward(mobius_inversion(m), c.f, c.target)
    for x in c.target.elements:
        if lhs(x) != rhs(x):
            return CheckResult(
                False, witness=(x, lhs(x), rhs(x)),
                message="inversion does not commute with the connection",
            )
    return CheckResult(True)


def off_diagonal(m: IntFunction) -> dict:
    """Entries of an interval function away from the diagonal."""
    return {
        iv: v for iv, v in m.values.items()
        if isinstance(iv, Interval) and not iv.diagonal
    }


def diagonal_part(m: IntFunction) -> dict:
    return {
        iv: v for iv, v in m.values.items()
        if isinstance(iv, Interval) and iv.diagonal
    }


def diff_up_to_diagonal(m: IntFunction, n: IntFunction) -> Interval | None:
    """First strict interval where m and n disagree, or None.

    This is the equivalence '~' used for persistence diagrams: equality on
    all intervals [a, b] with a < b, ignoring the diagonal.
    """
    for iv in m.domain.elements:
        if isinstance(iv, Interval) and iv.diagonal:
            continue
        if m.values[iv] != n(iv):
            return iv
    return None


def equal_up_to_diagonal(m: IntFunction, n: IntFunction) -> bool:
    return diff_up_to_diagonal(m, n) is None
