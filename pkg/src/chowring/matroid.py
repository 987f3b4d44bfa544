"""Matroids as lattices of flats.

A matroid here is a finite atomic ranked lattice with a submodular rank
function.  Flats are dense integer ids sorted by ``(rank, sorted ground
labels, construction order)``; ground labels are cosmetic and only used
for that ordering and for display.
"""
from __future__ import annotations

import itertools
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    InvalidParams,
    NotALattice,
    NotASemilattice,
    NotAtomic,
    NotRanked,
    NotSubmodular,
    RankZero,
    SizeLimit,
)
from .lattice import MeetSemilattice, Poset, _bits, _bound_table

MAX_FLATS = 4096
MAX_BOOLEAN = 12
MAX_GRAPH_EDGES = 10


class MatroidLattice:
    """A validated lattice of flats.  Build through :func:`validate_matroid`
    or one of the constructors rather than directly."""

    def __init__(self, poset, meet_table, join_table, rank, labels=None, source=None):
        self.poset = poset
        self.semilattice = MeetSemilattice(poset, meet_table, _find_extreme(poset, "bottom"))
        self.join_table = join_table
        self.meet_table = meet_table
        self.bottom = self.semilattice.bottom
        self.top = _find_extreme(poset, "top")
        self.rank = tuple(rank)
        self.r = self.rank[self.top]
        self.atoms = tuple(x for x in range(poset.size) if self.rank[x] == 1)
        self.labels = tuple(labels) if labels is not None else None
        self.source = tuple(source) if source is not None else None

    # basic queries -----------------------------------------------------
    @property
    def n(self) -> int:
        return self.poset.size

    def __len__(self):
        return self.poset.size

    def __repr__(self):
        return f"MatroidLattice(flats={self.n}, rank={self.r})"

    def le(self, x: int, y: int) -> bool:
        return (self.poset.down[y] >> x) & 1 == 1

    def lt(self, x: int, y: int) -> bool:
        return x != y and (self.poset.down[y] >> x) & 1 == 1

    def join(self, x: int, y: int) -> int:
        return self.join_table[x][y]

    def meet(self, x: int, y: int) -> int:
        return self.meet_table[x][y]

    def join_all(self, flats: Iterable[int]) -> int:
        out = self.bottom
        jt = self.join_table
        for f in flats:
            out = jt[out][f]
        return out

    def nonempty_flats(self) -> list[int]:
        return [x for x in range(self.n) if x != self.bottom]

    def proper_flats(self) -> list[int]:
        return [x for x in range(self.n) if x != self.top]

    def flats_of_rank(self, k: int) -> list[int]:
        return [x for x in range(self.n) if self.rank[x] == k]

    def atoms_below(self, x: int) -> list[int]:
        return [a for a in self.atoms if self.le(a, x)]

    def covers(self, x: int) -> list[int]:
        """Flats covering ``x``, in increasing index order."""
        down = self.poset.down
        above = self.poset.up[x] & ~(1 << x)
        return [y for y in _bits(above) if down[y] & above == 1 << y]

    def label(self, x: int) -> str:
        if self.labels is None:
            return str(x)
        return "{" + ",".join(map(str, sorted(self.labels[x]))) + "}"


def _find_extreme(p: Poset, which: str) -> int:
    full = (1 << p.size) - 1
    masks = p.up if which == "bottom" else p.down
    for x in range(p.size):
        if masks[x] == full:
            return x
    raise NotALattice(f"no {which} element")


def _longest_chain_ranks(p: Poset, bottom: int) -> list[int]:
    rank = [0] * p.size
    for y in p.linear_extension():
        below = p.down[y] & ~(1 << y)
        rank[y] = max((rank[x] + 1 for x in _bits(below)), default=0)
    return rank


def _canonical_order(n, rank, labels):
    def key(x):
        lab = tuple(sorted(labels[x])) if labels is not None else ()
        return (rank[x], lab, x)

    return sorted(range(n), key=key)


def validate_matroid(
    order,
    ranks: Sequence[int] | None = None,
    labels: Sequence[Iterable[int]] | None = None,
    source: Sequence[int] | None = None,
    reorder: bool = True,
) -> MatroidLattice:
    """Validate a candidate lattice of flats and return a :class:`MatroidLattice`.

    ``order`` is a :class:`Poset` or a square boolean ``leq`` table.  When
    ``ranks`` is omitted they are inferred from longest chains above the
    bottom.  The result is re-indexed into canonical order unless
    ``reorder`` is False.
    """
    p = order if isinstance(order, Poset) else Poset(order)
    n = p.size
    if n == 0:
        raise NotALattice("a matroid needs at least one flat")
    if n > MAX_FLATS:
        raise SizeLimit(f"{n} flats exceeds the limit of {MAX_FLATS}")
    labels = [frozenset(l) for l in labels] if labels is not None else None

    if reorder:
        prelim_rank = list(ranks) if ranks is not None else None
        if prelim_rank is None:
            prelim_rank = _longest_chain_ranks(p, _find_extreme(p, "bottom"))
        perm = _canonical_order(n, prelim_rank, labels)
        if perm != list(range(n)):
            leq = p.leq[np.ix_(perm, perm)]
            p = Poset(leq)
            ranks = [ranks[i] for i in perm] if ranks is not None else None
            labels = [labels[i] for i in perm] if labels is not None else None
            source = [source[i] for i in perm] if source is not None else perm

    try:
        meet = _bound_table(p.down, n, "meet")
    except NotASemilattice as exc:
        raise NotALattice(str(exc)) from None
    join = _bound_table(p.up, n, "join")
    bottom = _find_extreme(p, "bottom")

    inferred = _longest_chain_ranks(p, bottom)
    rank = list(ranks) if ranks is not None else inferred
    if len(rank) != n:
        raise NotRanked("rank list length does not match the number of flats")
    if rank[bottom] != 0:
        raise NotRanked(f"bottom flat has rank {rank[bottom]}, expected 0")
    for x, y in p.cover_pairs():
        if rank[y] != rank[x] + 1:
            raise NotRanked(f"cover {x} < {y} jumps rank from {rank[x]} to {rank[y]}")

    atoms = [x for x in range(n) if rank[x] == 1]
    for x in range(n):
        j = bottom
        for a in atoms:
            if (p.down[x] >> a) & 1:
                j = join[j][a]
        if j != x:
            raise NotAtomic(f"flat {x} is not the join of the atoms below it")

    witness = submodularity_witness(n, rank, meet, join)
    if witness is not None:
        f, g = witness
        raise NotSubmodular(
            f,
            g,
            f"rk(join)={rank[join[f][g]]} + rk(meet)={rank[meet[f][g]]} > {rank[f]} + {rank[g]}",
        )
    return MatroidLattice(p, meet, join, rank, labels, source)


def submodularity_witness(n, rank, meet, join):
    for f in range(n):
        rf = rank[f]
        jf, mf = join[f], meet[f]
        for g in range(f + 1, n):
            if rank[jf[g]] + rank[mf[g]] > rf + rank[g]:
                return f, g
    return None


def from_flat_sets(flat_sets: Sequence[Iterable[int]], rank_fn=None) -> MatroidLattice:
    """Build a matroid from flats given as subsets of a ground set.

    Order is inclusion.  Ranks come from ``rank_fn`` when given, otherwise
    from chain lengths.
    """
    sets = [frozenset(s) for s in flat_sets]
    if len(set(sets)) != len(sets):
        raise InvalidParams("duplicate flats")
    if len(sets) > MAX_FLATS:
        raise SizeLimit(f"{len(sets)} flats exceeds the limit of {MAX_FLATS}")
    ground = sorted(set().union(*sets)) if sets else []
    pos = {e: i for i, e in enumerate(ground)}
    masks = [sum(1 << pos[e] for e in s) for s in sets]
    if len(ground) < 63:
        arr = np.array(masks, dtype=np.int64)
        leq = (arr[:, None] & arr[None, :]) == arr[:, None]
    else:
        leq = np.array([[a & b == a for b in masks] for a in masks], dtype=bool)
    ranks = [rank_fn(s) for s in sets] if rank_fn is not None else None
    return validate_matroid(leq, ranks=ranks, labels=sets)


def boolean_matroid(n: int) -> MatroidLattice:
    if n > MAX_BOOLEAN:
        raise SizeLimit(f"boolean matroid on {n} elements exceeds the limit of {MAX_BOOLEAN}")
    if n < 1:
        raise InvalidParams("boolean matroid needs at least one element")
    subsets = [s for k in range(n + 1) for s in itertools.combinations(range(n), k)]
    return from_flat_sets(subsets, rank_fn=len)


def uniform_matroid(r: int, n: int) -> MatroidLattice:
    """U_{r,n}: flats are the subsets of size < r together with the ground set."""
    if not 0 < r <= n:
        raise InvalidParams(f"uniform matroid needs 0 < r <= n, got r={r}, n={n}")
    subsets = [s for k in range(r) for s in itertools.combinations(range(n), k)]
    subsets.append(tuple(range(n)))
    return from_flat_sets(subsets, rank_fn=lambda s: min(len(s), r))


def _graph_rank(edges, subset):
    parent = {}

    def find(v):
        while parent.get(v, v) != v:
            parent[v] = parent.get(parent[v], parent[v])
            v = parent[v]
        return v

    rank = 0
    for i in subset:
        u, w = find(edges[i][0]), find(edges[i][1])
        if u != w:
            parent[u] = w
            rank += 1
    return rank, find


def graphic_matroid(edges: Sequence[tuple[int, int]]) -> MatroidLattice:
    """Cycle matroid of a multigraph; ground elements are edge positions."""
    edges = [tuple(e) for e in edges]
    if len(edges) > MAX_GRAPH_EDGES:
        raise SizeLimit(f"{len(edges)} edges exceeds the limit of {MAX_GRAPH_EDGES}")
    m = len(edges)
    flats = set()
    for bits in range(1 << m):
        subset = [i for i in range(m) if bits >> i & 1]
        _, find = _graph_rank(edges, subset)
        closure = frozenset(i for i, (u, w) in enumerate(edges) if find(u) == find(w))
        flats.add(closure)
    return from_flat_sets(sorted(flats, key=lambda s: (len(s), sorted(s))),
                          rank_fn=lambda s: _graph_rank(edges, sorted(s))[0])


def named_graph(name: str) -> list[tuple[int, int]]:
    """Edge lists for ``K<n>`` (complete) and ``C<n>`` (cycle) graphs."""
    kind, num = name[:1].upper(), name[1:]
    if not num.isdigit():
        raise InvalidParams(f"unknown graph name {name!r}")
    k = int(num)
    if kind == "K" and k >= 1:
        return list(itertools.combinations(range(k), 2))
    if kind == "C" and k >= 1:
        return [(i, (i + 1) % k) for i in range(k)]
    raise InvalidParams(f"unknown graph name {name!r}")


def _interval(m: MatroidLattice, elements: list[int], rank_shift: int, relabel) -> MatroidLattice:
    leq = m.poset.leq[np.ix_(elements, elements)]
    ranks = [m.rank[x] - rank_shift for x in elements]
    labels = [relabel(m.labels[x]) for x in elements] if m.labels is not None else None
    perm = _canonical_order(len(elements), ranks, labels)
    p = Poset(leq[np.ix_(perm, perm)])
    ranks = [ranks[i] for i in perm]
    labels = [labels[i] for i in perm] if labels is not None else None
    src = [elements[i] for i in perm]
    if __debug__:
        return validate_matroid(p, ranks=ranks, labels=labels, source=src, reorder=False)
    meet = _bound_table(p.down, p.size, "meet")
    join = _bound_table(p.up, p.size, "join")
    return MatroidLattice(p, meet, join, ranks, labels, src)


def restriction(m: MatroidLattice, f: int) -> MatroidLattice:
    """M^F: the interval [bottom, F]."""
    elements = [x for x in range(m.n) if m.le(x, f)]
    return _interval(m, elements, 0, lambda s: s)


def contraction(m: MatroidLattice, g: int) -> MatroidLattice:
    """M_G: the interval [G, top] with ranks shifted so G has rank 0."""
    elements = [x for x in range(m.n) if m.le(g, x)]
    base = m.labels[g] if m.labels is not None else frozenset()
    return _interval(m, elements, m.rank[g], lambda s: s - base)


def truncation(m: MatroidLattice) -> MatroidLattice:
    """Tr M: delete the corank-1 flats; the top drops to rank r-1."""
    if m.r == 0:
        raise RankZero("truncation needs a matroid of positive rank")
    elements = [x for x in range(m.n) if m.rank[x] != m.r - 1]
    leq = m.poset.leq[np.ix_(elements, elements)]
    ranks = [m.rank[x] if x != m.top else m.r - 1 for x in elements]
    labels = [m.labels[x] for x in elements] if m.labels is not None else None
    return validate_matroid(leq, ranks=ranks, labels=labels, source=elements)


def rank_zero_matroid() -> MatroidLattice:
    return validate_matroid(np.ones((1, 1), dtype=bool), ranks=[0], labels=[()])
