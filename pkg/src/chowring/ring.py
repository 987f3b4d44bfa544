"""Ring contexts, straightening to standard monomials, and Hilbert functions.

Three presentations share one rewriting engine:

* ``augmented``  - generators ``h_F`` for nonempty flats, relations
  ``(h_F - h_{F v G})(h_G - h_{F v G})``, ``h_a^2`` and ``h_a h_F - h_a h_{F v a}``;
* ``reduced``    - the same quadratic relations plus ``h_a = 0`` for atoms;
* ``semilattice``- generators for every element of a meet-semilattice and
  relations ``(h_x - h_{x^y})(h_y - h_{x^y})``.

Straightening first rewrites a pair of distinct extremal (maximal for the
matroid modes, minimal for the semilattice mode) support elements until the
support is a chain, then collapses chain monomials with the dropdown rules.
"""
from __future__ import annotations

import sys
from math import comb
from typing import Iterable

from .errors import ChowError, StepLimit
from .lattice import MeetSemilattice, _bits, chain_f_vector
from .matroid import MatroidLattice
from .polynomial import ONE, Monomial, Polynomial

AUGMENTED = "augmented"
REDUCED = "reduced"
SEMILATTICE = "semilattice"
MODES = (AUGMENTED, REDUCED, SEMILATTICE)
_ALIASES = {"aug": AUGMENTED, "red": REDUCED, "semi": SEMILATTICE}

MAX_REWRITE_STEPS = 10**7

# rewriting recurses once per step on a strictly smaller measure; the default
# limit is too tight for rank-6 inputs
if sys.getrecursionlimit() < 20000:
    sys.setrecursionlimit(20000)


def normalize_mode(mode: str) -> str:
    mode = _ALIASES.get(mode, mode)
    if mode not in MODES:
        raise ChowError(f"unknown ring mode {mode!r}")
    return mode


class RingContext:
    """A lattice together with the relation system selected by ``mode``.

    Normal forms of monomials are memoized on the context, so reuse one
    context per (lattice, mode) pair.
    """

    def __init__(self, lattice, mode: str):
        mode = normalize_mode(mode)
        if mode == SEMILATTICE:
            if isinstance(lattice, MatroidLattice):
                lattice = lattice.semilattice
            if not isinstance(lattice, MeetSemilattice):
                raise ChowError("semilattice mode needs a MeetSemilattice")
            self.generators = tuple(range(lattice.size))
            self._down = lattice.poset.down
            self._up = lattice.poset.up
            self._bound = lattice.meet_table
            self.rank = None
        else:
            if not isinstance(lattice, MatroidLattice):
                raise ChowError(f"{mode} mode needs a validated MatroidLattice")
            self.generators = tuple(lattice.nonempty_flats())
            self._down = lattice.poset.down
            self._up = lattice.poset.up
            self._bound = lattice.join_table
            self.rank = lattice.rank
        self.lattice = lattice
        self.mode = mode
        self._nf_cache: dict[Monomial, dict] = {}
        self._steps = 0
        self._std: dict[int, list[Monomial]] | None = None
        self._atom_mask = 0
        if mode == REDUCED:
            for a in lattice.atoms:
                self._atom_mask |= 1 << a

    def __repr__(self):
        return f"RingContext({self.lattice!r}, {self.mode!r})"

    @property
    def is_matroid(self) -> bool:
        return self.mode != SEMILATTICE

    @property
    def top_degree(self) -> int | None:
        """Degree of the socle: r (augmented), r-1 (reduced), None (semilattice)."""
        if self.mode == AUGMENTED:
            return self.lattice.r
        if self.mode == REDUCED:
            return max(self.lattice.r - 1, 0)
        return None

    def gen(self, f: int, power: int = 1) -> Polynomial:
        if f not in self._gen_set:
            raise ChowError(f"{f} is not a generator of this ring")
        return Polynomial.gen(f, power)

    @property
    def _gen_set(self):
        s = self.__dict__.get("_gen_set_cache")
        if s is None:
            s = self.__dict__["_gen_set_cache"] = frozenset(self.generators)
        return s

    def bound(self, x: int, y: int) -> int:
        """Join (matroid modes) or meet (semilattice mode) used by the straightening relation."""
        return self._bound[x][y]

    # relations ---------------------------------------------------------
    def relations(self) -> list[Polynomial]:
        """Nonzero defining relations of the presentation."""
        rels = []
        gens = self.generators
        down = self._down
        for i, x in enumerate(gens):
            for y in gens[i + 1 :]:
                if (down[y] >> x) & 1 or (down[x] >> y) & 1:
                    continue
                z = self._bound[x][y]
                rels.append((Polynomial.gen(x) - Polynomial.gen(z)) * (Polynomial.gen(y) - Polynomial.gen(z)))
        if self.mode == AUGMENTED:
            m = self.lattice
            for a in m.atoms:
                rels.append(Polynomial.gen(a, 2))
                for f in gens:
                    if not m.le(a, f):
                        rels.append(
                            Polynomial.monomial(Monomial.from_factors([a, f]))
                            - Polynomial.monomial(Monomial.from_factors([a, m.join(f, a)]))
                        )
        elif self.mode == REDUCED:
            for a in self.lattice.atoms:
                rels.append(Polynomial.gen(a))
        return rels

    # straightening -----------------------------------------------------
    def _rewrite_pair(self, support: Iterable[int]) -> tuple[int, int] | None:
        """Lexicographically smallest pair of distinct extremal elements,
        peeling extremal singletons off until a pair appears."""
        s = 0
        for f in support:
            s |= 1 << f
        cone = self._up if self.mode != SEMILATTICE else self._down
        while s & (s - 1):
            ext = [x for x in _bits(s) if cone[x] & s == 1 << x]
            if len(ext) >= 2:
                return ext[0], ext[1]
            s &= ~(1 << ext[0])
        return None

    def _collapse_chain(self, m: Monomial) -> dict:
        if self.mode == SEMILATTICE:
            return {m: 1}
        rank = self.rank
        stack: list[list[int]] = []
        for f, a in sorted(m, key=lambda t: rank[t[0]]):
            stack.append([f, a])
            while len(stack) >= 2 and stack[-1][1] >= rank[stack[-1][0]] - rank[stack[-2][0]]:
                top = stack.pop()
                prev = stack.pop()
                stack.append([top[0], top[1] + prev[1]])
        if stack:
            f1, a1 = stack[0]
            if a1 > rank[f1] or (self.mode == REDUCED and a1 >= rank[f1]):
                return {}
        return {Monomial(sorted((f, a) for f, a in stack)): 1}

    def _nf(self, m: Monomial) -> dict:
        cached = self._nf_cache.get(m)
        if cached is not None:
            return cached
        self._steps += 1
        if self._steps > MAX_REWRITE_STEPS:
            raise StepLimit(f"straightening exceeded {MAX_REWRITE_STEPS} steps")
        if self._atom_mask and any((self._atom_mask >> f) & 1 for f, _ in m):
            res: dict = {}
        else:
            pair = self._rewrite_pair(f for f, _ in m)
            if pair is None:
                res = self._collapse_chain(m)
            else:
                x, y = pair
                z = self._bound[x][y]
                exps = dict(m)
                for f in (x, y):
                    if exps[f] == 1:
                        del exps[f]
                    else:
                        exps[f] -= 1
                rest = Monomial(sorted(exps.items()))
                res = {}
                for extra, sign in (((x, z), 1), ((y, z), 1), ((z, z), -1)):
                    for mm, c in self._nf(rest * Monomial.from_factors(extra)).items():
                        v = res.get(mm, 0) + sign * c
                        if v:
                            res[mm] = v
                        else:
                            res.pop(mm, None)
        self._nf_cache[m] = res
        return res

    def straighten(self, p: Polynomial) -> Polynomial:
        out: dict[Monomial, int] = {}
        for m, c in p.terms.items():
            for mm, cc in self._nf(m).items():
                v = out.get(mm, 0) + c * cc
                if v:
                    out[mm] = v
                else:
                    out.pop(mm, None)
        return Polynomial._raw(out)

    def multiply(self, p: Polynomial, q: Polynomial) -> Polynomial:
        """Product in the free polynomial ring (no reduction)."""
        return p * q

    def reduce_product(self, p: Polynomial, q: Polynomial) -> Polynomial:
        """Straightened product of two polynomials."""
        return self.straighten(p * q)

    # standard monomials ------------------------------------------------
    def is_standard(self, m: Monomial) -> bool:
        m = Monomial(m)
        if self.mode == SEMILATTICE:
            return self.lattice.poset.is_chain(m.support)
        if any(f not in self._gen_set for f in m.support):
            return False
        rank = self.rank
        chain = sorted(m, key=lambda t: rank[t[0]])
        prev, prev_rank = self.lattice.bottom, 0
        for i, (f, a) in enumerate(chain):
            if not self.lattice.lt(prev, f):
                return False
            gap = rank[f] - prev_rank
            if i == 0 and self.mode == AUGMENTED:
                if a > gap:
                    return False
            elif a >= gap:
                return False
            prev, prev_rank = f, rank[f]
        return True

    def _enumerate_matroid_standard(self) -> dict[int, list[Monomial]]:
        m = self.lattice
        rank = self.rank
        up = m.poset.up
        by_degree: dict[int, list[Monomial]] = {}

        def extend(last, chain, degree):
            by_degree.setdefault(degree, []).append(Monomial(sorted(chain)))
            above = up[last] & ~(1 << last)
            for f in _bits(above):
                gap = rank[f] - rank[last]
                hi = gap if (not chain and self.mode == AUGMENTED) else gap - 1
                for a in range(1, hi + 1):
                    chain.append((f, a))
                    extend(f, chain, degree + a)
                    chain.pop()

        extend(m.bottom, [], 0)
        return by_degree

    def _enumerate_chain_monomials(self, d: int) -> list[Monomial]:
        poset = self.lattice.poset
        out = []

        def extend(last_mask, chain, degree):
            if degree == d:
                out.append(Monomial(sorted(chain)))
                return
            for f in range(poset.size):
                if chain and not (last_mask >> f) & 1:
                    continue
                if any(f == g for g, _ in chain):
                    continue
                for a in range(1, d - degree + 1):
                    chain.append((f, a))
                    extend(poset.up[f] & ~(1 << f), chain, degree + a)
                    chain.pop()

        extend(0, [], 0)
        return sorted(set(out))

    def standard_monomials(self, d: int) -> list[Monomial]:
        """Standard monomials of degree ``d`` in canonical order."""
        if d < 0:
            return []
        if self.mode == SEMILATTICE:
            return self._enumerate_chain_monomials(d)
        if self._std is None:
            raw = self._enumerate_matroid_standard()
            self._std = {deg: sorted(ms, key=self.order_key) for deg, ms in raw.items()}
        return list(self._std.get(d, []))

    def order_key(self, m: Monomial):
        """Canonical total order: delta-lexicographic, ties by the monomial tuple."""
        if self.mode == SEMILATTICE:
            return (tuple(m),)
        return (delta_vector(self, m), tuple(m))


def delta_vector(ctx: RingContext, m: Monomial) -> tuple[int, ...]:
    """Cumulative exponent by rank: component j sums exponents of flats of rank <= j."""
    r = ctx.lattice.r
    counts = [0] * (r + 1)
    for f, a in m:
        counts[ctx.rank[f]] += a
    out = []
    total = counts[0]
    for j in range(1, r + 1):
        total += counts[j]
        out.append(total)
    return tuple(out)


def straighten(ctx: RingContext, p: Polynomial) -> Polynomial:
    return ctx.straighten(p)


def multiply(ctx: RingContext, p: Polynomial, q: Polynomial) -> Polynomial:
    return ctx.multiply(p, q)


def enumerate_standard_monomials(ctx: RingContext, d: int) -> list[Monomial]:
    return ctx.standard_monomials(d)


def hilbert_series(ctx: RingContext) -> tuple[int, ...]:
    """Counts of standard monomials in degrees 0..top_degree."""
    if ctx.mode == SEMILATTICE:
        raise ChowError("the semilattice ring is infinite; use series_truncated")
    return tuple(len(ctx.standard_monomials(d)) for d in range(ctx.top_degree + 1))


def series_truncated(ctx: RingContext | MeetSemilattice, d_max: int) -> tuple[int, ...]:
    """Hilbert function of B(L) through ``d_max`` from order-complex face counts.

    A degree-d monomial supported on a k-chain is a composition of d into k
    positive parts, so the count is sum_k f_k * C(d-1, k-1).
    """
    lattice = ctx.lattice if isinstance(ctx, RingContext) else ctx
    f = chain_f_vector(lattice).f_vector
    out = [1]
    for d in range(1, d_max + 1):
        out.append(sum(f[k] * comb(d - 1, k - 1) for k in range(1, len(f))))
    return tuple(out[: d_max + 1])
