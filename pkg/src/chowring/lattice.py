"""Finite posets and meet-semilattices with dense order tables.

Elements are the integers ``0..size-1``.  Besides the boolean table the
poset keeps down-sets and up-sets as Python integer bitsets, which is what
the inner loops of the rest of the package actually query.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import ChowError, CycleDetected, NotASemilattice


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


class Poset:
    """A finite partial order stored as a dense ``leq`` table.

    ``leq[x, y]`` is True iff ``x <= y``.  The table is validated on
    construction (reflexive, antisymmetric, transitive).
    """

    def __init__(self, leq, labels: Sequence | None = None):
        leq = np.array(leq, dtype=bool)
        n = leq.shape[0]
        if leq.shape != (n, n):
            raise ChowError("order table must be square")
        if not leq.diagonal().all():
            raise ChowError("order relation is not reflexive")
        both = leq & leq.T
        np.fill_diagonal(both, False)
        if both.any():
            x, y = map(int, np.argwhere(both)[0])
            raise CycleDetected(f"elements {x} and {y} are mutually comparable")
        # down[y]: bitset of x <= y; up[x]: bitset of y >= x
        down = tuple(sum(1 << int(x) for x in np.flatnonzero(leq[:, y])) for y in range(n))
        for y in range(n):
            for x in _bits(down[y]):
                if down[x] & ~down[y]:
                    raise ChowError("order relation is not transitive")
        leq.setflags(write=False)
        self.leq = leq
        self.size = n
        self.labels = tuple(labels) if labels is not None else None
        self.down = down
        self.up = tuple(sum(1 << int(y) for y in np.flatnonzero(leq[x, :])) for x in range(n))

    def __len__(self):
        return self.size

    def __repr__(self):
        return f"Poset(size={self.size})"

    def le(self, x: int, y: int) -> bool:
        return (self.down[y] >> x) & 1 == 1

    def lt(self, x: int, y: int) -> bool:
        return x != y and (self.down[y] >> x) & 1 == 1

    def comparable(self, x: int, y: int) -> bool:
        return self.le(x, y) or self.le(y, x)

    def dual(self) -> "Poset":
        return Poset(self.leq.T, self.labels)

    def relabel(self, perm: Sequence[int]) -> "Poset":
        """Return the isomorphic poset in which element ``x`` becomes ``perm[x]``."""
        n = self.size
        inv = np.empty(n, dtype=int)
        inv[np.asarray(perm)] = np.arange(n)
        return Poset(self.leq[np.ix_(inv, inv)])

    def is_chain(self, elements: Iterable[int]) -> bool:
        els = list(elements)
        return all(self.comparable(x, y) for x, y in itertools.combinations(els, 2))

    def linear_extension(self) -> list[int]:
        # sorting by down-set size is a linear extension
        return sorted(range(self.size), key=lambda y: (bin(self.down[y]).count("1"), y))

    def cover_pairs(self) -> list[tuple[int, int]]:
        out = []
        for x in range(self.size):
            above = self.up[x] & ~(1 << x)
            for y in _bits(above):
                if self.down[y] & above == 1 << y:
                    out.append((x, y))
        return out


def build_poset(relations: Iterable[tuple[int, int]], size: int, labels=None) -> Poset:
    """Transitive closure of ``relations`` (pairs ``(x, y)`` meaning ``x <= y``)."""
    leq = np.eye(size, dtype=bool)
    for x, y in relations:
        if not (0 <= x < size and 0 <= y < size):
            raise ChowError(f"relation ({x}, {y}) references an element outside 0..{size - 1}")
        leq[x, y] = True
    for k in range(size):
        leq |= leq[:, k : k + 1] & leq[k : k + 1, :]
    return Poset(leq, labels)


def _bound_table(masks: Sequence[int], n: int, kind: str) -> list[list[int]]:
    """Greatest-lower (or least-upper) bound table from principal down-sets (or up-sets).

    The common bound set of x and y must itself be principal; its generator
    is the required bound.
    """
    lookup = {m: z for z, m in enumerate(masks)}
    table = [[0] * n for _ in range(n)]
    for x in range(n):
        mx = masks[x]
        row = table[x]
        for y in range(x, n):
            z = lookup.get(mx & masks[y])
            if z is None:
                raise NotASemilattice(x, y) if kind == "meet" else _no_join(x, y)
            row[y] = z
            table[y][x] = z
    return table


def _no_join(x, y):
    from .errors import NotALattice

    return NotALattice(f"elements {x} and {y} have no unique least upper bound")


@dataclass(frozen=True, eq=False)
class MeetSemilattice:
    """A poset together with its meet table and bottom element."""

    poset: Poset
    meet_table: list
    bottom: int
    # set when the semilattice was built from the nonempty flats of a matroid, inverted
    origin: object = field(default=None, repr=False)

    @property
    def size(self) -> int:
        return self.poset.size

    def meet(self, x: int, y: int) -> int:
        return self.meet_table[x][y]

    def le(self, x: int, y: int) -> bool:
        return self.poset.le(x, y)

    def lt(self, x: int, y: int) -> bool:
        return self.poset.lt(x, y)


def as_meet_semilattice(p: Poset, origin=None) -> MeetSemilattice:
    if p.size == 0:
        raise ChowError("the empty poset is not a meet-semilattice")
    table = _bound_table(p.down, p.size, "meet")
    bottom = table[0][0]
    for x in range(p.size):
        bottom = table[bottom][x]
    return MeetSemilattice(p, table, bottom, origin)


def covers(s: MeetSemilattice | Poset, x: int) -> set[int]:
    """Elements covering ``x``: minimal among those strictly above it."""
    p = s.poset if isinstance(s, MeetSemilattice) else s
    if not 0 <= x < p.size:
        raise ChowError(f"element {x} out of range")
    above = p.up[x] & ~(1 << x)
    return {y for y in _bits(above) if p.down[y] & above == 1 << y}


@dataclass(frozen=True)
class ChainComplexStats:
    """Face counts of the order complex; ``f_vector[k]`` counts k-element chains."""

    f_vector: tuple[int, ...]


def chain_f_vector(p: Poset | MeetSemilattice) -> ChainComplexStats:
    if isinstance(p, MeetSemilattice):
        p = p.poset
    order = p.linear_extension()
    # ending[k][y] = number of k-element chains whose top element is y
    ending = [[0] * p.size, [1] * p.size]
    while any(ending[-1]):
        prev = ending[-1]
        nxt = [0] * p.size
        for y in order:
            below = p.down[y] & ~(1 << y)
            nxt[y] = sum(prev[x] for x in _bits(below))
        ending.append(nxt)
    f = [1] + [sum(row) for row in ending[1:-1]]
    return ChainComplexStats(tuple(f))


def enumerate_posets(n: int) -> list[Poset]:
    """All posets on ``n`` elements up to isomorphism.

    Every finite poset has a natural labelling (``x < y`` implies
    ``x`` before ``y``), so it suffices to scan transitively closed subsets
    of the pairs ``i < j`` and keep one representative per isomorphism class.
    """
    pairs = list(itertools.combinations(range(n), 2))
    perms = list(itertools.permutations(range(n)))
    seen = set()
    out = []
    for bits in range(1 << len(pairs)):
        leq = np.eye(n, dtype=bool)
        for k, (i, j) in enumerate(pairs):
            if bits >> k & 1:
                leq[i, j] = True
        closed = leq.copy()
        for k in range(n):
            closed |= closed[:, k : k + 1] & closed[k : k + 1, :]
        if (closed != leq).any():
            continue
        key = min(leq[np.ix_(q, q)].tobytes() for q in perms)
        if key in seen:
            continue
        seen.add(key)
        out.append(Poset(leq))
    return out


def enumerate_meet_semilattices(max_size: int) -> list[MeetSemilattice]:
    out = []
    for n in range(1, max_size + 1):
        for p in enumerate_posets(n):
            try:
                out.append(as_meet_semilattice(p))
            except NotASemilattice:
                continue
    return out
