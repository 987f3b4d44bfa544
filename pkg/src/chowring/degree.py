"""Hall-Rado conditions, degree maps, the elements x_G and the maps phi_G.

Both degree maps are evaluated directly on free monomials: a monomial of
top degree is read as a multiset of flats and sent to 1 or 0 according to
the (dragon-)Hall-Rado condition.  Anything outside top degree goes to 0.
"""
from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Sequence

from .errors import ContextMismatch, InvalidFlat, SizeLimit, SizeMismatch
from .matroid import MatroidLattice, contraction, rank_zero_matroid, restriction
from .polynomial import ONE, Monomial, Polynomial
from .ring import AUGMENTED, REDUCED, RingContext

MAX_OUTSIDE_ATOMS = 20


@dataclass(frozen=True)
class FlatMultiset:
    """A multiset of flats; ``elements`` keeps the caller's positions."""

    elements: tuple[int, ...]

    @classmethod
    def of(cls, flats: Iterable[int]) -> "FlatMultiset":
        return cls(tuple(flats))

    @classmethod
    def from_monomial(cls, m: Monomial) -> "FlatMultiset":
        return cls(tuple(m.factors()))

    @property
    def size(self) -> int:
        return len(self.elements)


@dataclass(frozen=True)
class HallRadoResult:
    ok: bool
    witness: tuple[int, ...] | None = None

    def __bool__(self):
        return self.ok


def _hall_rado_check(m: MatroidLattice, elements: Sequence[int], slack: int) -> HallRadoResult:
    """Check rk(join of T) >= |T| + slack over nonempty T.

    Subsets T only matter through the set U of distinct flats they use, so
    the scan runs over subsets of distinct flats with multiplicities summed.
    A failing U yields a failing T of size max(|U|, rk(join U) - slack + 1).
    """
    mult = Counter(elements)
    distinct = sorted(mult)
    rank, join = m.rank, m.join_table
    best = None
    # prefix joins: join_of[mask] built from the lowest set bit
    join_of = [m.bottom] * (1 << len(distinct))
    count_of = [0] * (1 << len(distinct))
    for mask in range(1, 1 << len(distinct)):
        low = (mask & -mask).bit_length() - 1
        rest = mask & (mask - 1)
        j = join[join_of[rest]][distinct[low]]
        c = count_of[rest] + mult[distinct[low]]
        join_of[mask], count_of[mask] = j, c
        need = rank[j] - slack + 1
        if c >= need:
            size = max(bin(mask).count("1"), need)
            if best is None or size < best[0]:
                best = (size, mask)
    if best is None:
        return HallRadoResult(True)
    size, mask = best
    chosen = [distinct[i] for i in range(len(distinct)) if mask >> i & 1]
    positions: list[int] = []
    used = set()
    for f in chosen:
        p = next(i for i, e in enumerate(elements) if e == f)
        positions.append(p)
        used.add(p)
    for i, e in enumerate(elements):
        if len(positions) >= size:
            break
        if i not in used and e in chosen:
            positions.append(i)
            used.add(i)
    return HallRadoResult(False, tuple(sorted(positions)))


def _hall_rado_holds(m: MatroidLattice, pairs: Sequence[tuple[int, int]], slack: int) -> bool:
    """Boolean form of :func:`_hall_rado_check` on (flat, multiplicity) pairs.

    Stops at the first failing subset and skips witness bookkeeping.
    """
    rank, join = m.rank, m.join_table
    size = 1 << len(pairs)
    join_of = [m.bottom] * size
    count_of = [0] * size
    for mask in range(1, size):
        low = (mask & -mask).bit_length() - 1
        rest = mask & (mask - 1)
        f, a = pairs[low]
        j = join[join_of[rest]][f]
        c = count_of[rest] + a
        if c + slack > rank[j]:
            return False
        join_of[mask], count_of[mask] = j, c
    return True


def hall_rado(m: MatroidLattice, fs: FlatMultiset | Sequence[int]) -> HallRadoResult:
    """rk(join of F_i, i in T) >= |T| for every T; size must equal the rank."""
    elements = fs.elements if isinstance(fs, FlatMultiset) else tuple(fs)
    if len(elements) != m.r:
        raise SizeMismatch(f"Hall-Rado needs {m.r} flats, got {len(elements)}")
    return _hall_rado_check(m, elements, 0)


def dragon_hall_rado(m: MatroidLattice, fs: FlatMultiset | Sequence[int]) -> HallRadoResult:
    """rk(join of F_i, i in T) >= |T| + 1 for every nonempty T; size r - 1."""
    elements = fs.elements if isinstance(fs, FlatMultiset) else tuple(fs)
    if len(elements) != max(m.r - 1, 0):
        raise SizeMismatch(f"dragon-Hall-Rado needs {m.r - 1} flats, got {len(elements)}")
    if any(f == m.bottom for f in elements):
        raise InvalidFlat("dragon-Hall-Rado is defined on nonempty flats")
    return _hall_rado_check(m, elements, 1)


def hall_rado_bruteforce(m: MatroidLattice, elements: Sequence[int], slack: int = 0) -> HallRadoResult:
    """Literal scan over all position subsets T, smallest first."""
    n = len(elements)
    for size in range(1, n + 1):
        for t in itertools.combinations(range(n), size):
            if m.rank[m.join_all(elements[i] for i in t)] < size + slack:
                return HallRadoResult(False, t)
    return HallRadoResult(True)


def _monomial_degree(ctx: RingContext, mono: Monomial) -> int:
    cache = ctx.__dict__.setdefault("_deg_cache", {})
    v = cache.get(mono)
    if v is None:
        if ctx.mode == AUGMENTED:
            v = 1 if _hall_rado_holds(ctx.lattice, mono, 0) else 0
        elif ctx.lattice.r == 0:
            v = 1
        else:
            v = 1 if _hall_rado_holds(ctx.lattice, mono, 1) else 0
        cache[mono] = v
    return v


def degree(ctx: RingContext, p: Polynomial) -> int:
    """Degree map of the context's mode, extended by zero off top degree."""
    if not ctx.is_matroid:
        raise ContextMismatch("degree maps exist only for the matroid modes")
    d = p.homogeneous_degree()
    if d is None or d != ctx.top_degree:
        return 0
    return sum(c * _monomial_degree(ctx, m) for m, c in p.terms.items())


def degree_aug(ctx: RingContext, p: Polynomial) -> int:
    if ctx.mode != AUGMENTED:
        raise ContextMismatch("degree_aug needs an augmented context")
    return degree(ctx, p)


def degree_red(ctx: RingContext, p: Polynomial) -> int:
    if ctx.mode != REDUCED:
        raise ContextMismatch("degree_red needs a reduced context")
    return degree(ctx, p)


@dataclass
class CheckReport:
    """Outcome of an exhaustive or sampled verification."""

    name: str
    checked: int = 0
    violations: list = field(default_factory=list)
    sampled: bool = False

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


def _free_monomials(gens, d):
    for combo in itertools.combinations_with_replacement(gens, d):
        yield Monomial.from_factors(combo)


def _relation_degree(ctx: RingContext, rel: Polynomial, mu: Monomial) -> int:
    return sum(c * _monomial_degree(ctx, mono * mu) for mono, c in rel.terms.items())


def verify_degree_welldefined(ctx: RingContext, max_products: int = 50_000, seed: int = 0) -> CheckReport:
    """deg(relation * monomial) = 0 for every relation and complementary monomial.

    Exhaustive when the number of products is at most ``max_products``,
    otherwise a seeded random sample of that size.
    """
    report = CheckReport(f"degree well-defined ({ctx.mode})")
    top = ctx.top_degree
    gens = ctx.generators
    rels = [(rel, rel.homogeneous_degree()) for rel in ctx.relations()]
    rels = [(rel, e) for rel, e in rels if e is not None and e <= top]
    total = sum(comb(len(gens) + top - e - 1, top - e) if gens else int(top == e) for _, e in rels)
    rng = random.Random(seed)
    if total <= max_products:
        for rel, e in rels:
            for mu in _free_monomials(gens, top - e):
                report.checked += 1
                v = _relation_degree(ctx, rel, mu)
                if v:
                    report.violations.append((str(rel), str(mu), v))
    else:
        report.sampled = True
        for _ in range(max_products):
            rel, e = rels[rng.randrange(len(rels))]
            mu = Monomial.from_factors(rng.choice(gens) for _ in range(top - e))
            report.checked += 1
            v = _relation_degree(ctx, rel, mu)
            if v:
                report.violations.append((str(rel), str(mu), v))
    return report


# x_G ------------------------------------------------------------------

def _check_x_flat(ctx: RingContext, g: int):
    m = ctx.lattice
    if not 0 <= g < m.n:
        raise InvalidFlat(f"flat {g} out of range")
    if g == m.top:
        raise InvalidFlat("x_G needs a proper flat")
    if ctx.mode == REDUCED and g == m.bottom:
        raise InvalidFlat("x_G in the reduced ring needs a nonempty flat")


def x_element(ctx: RingContext, g: int) -> Polynomial:
    """x_G = -sum over subsets S of outside atoms of (-1)^|S| h_{G v join S}, with h_empty = 0.

    Subsets are aggregated atom by atom by the flat they reach, so the cost
    is bounded by (#outside atoms) x (#flats above G).
    """
    _check_x_flat(ctx, g)
    m = ctx.lattice
    outside = [a for a in m.atoms if not m.le(a, g)]
    signed = {g: 1}
    join = m.join_table
    for a in outside:
        nxt = dict(signed)
        for f, c in signed.items():
            j = join[f][a]
            v = nxt.get(j, 0) - c
            if v:
                nxt[j] = v
            else:
                nxt.pop(j, None)
        signed = nxt
    terms = {}
    for f, c in signed.items():
        if f != m.bottom:
            terms[Monomial(((f, 1),))] = -c
    return Polynomial(terms)


def x_element_bruteforce(ctx: RingContext, g: int) -> Polynomial:
    """The defining alternating sum, enumerated subset by subset."""
    _check_x_flat(ctx, g)
    m = ctx.lattice
    outside = [a for a in m.atoms if not m.le(a, g)]
    if len(outside) > MAX_OUTSIDE_ATOMS:
        raise SizeLimit(f"{len(outside)} outside atoms exceeds {MAX_OUTSIDE_ATOMS}")
    out = Polynomial()
    for k in range(len(outside) + 1):
        for s in itertools.combinations(outside, k):
            f = m.join_all((g, *s))
            if f != m.bottom:
                out = out - Polynomial.gen(f) * ((-1) ** k)
    return out


# phi_G ------------------------------------------------------------------

class TensorPolynomial:
    """Element of a tensor product of two rings: (left, right) monomial pairs -> int."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms: dict[tuple[Monomial, Monomial], int] = {k: v for k, v in (terms or {}).items() if v}

    def __eq__(self, other):
        if isinstance(other, TensorPolynomial):
            return self.terms == other.terms
        return NotImplemented

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        body = " + ".join(f"{c}*({l})(x)({r})" for (l, r), c in sorted(self.terms.items()))
        return f"TensorPolynomial({body or '0'})"

    def left_right(self):
        return self.terms.items()


@dataclass
class PhiTarget:
    """The codomain of phi_G: a context for M^G and a reduced context for M_G."""

    g: int
    left: RingContext
    right: RingContext
    to_left: dict
    to_right: dict

    def _add(self, out, lp: Polynomial, rp: Polynomial, scale: int):
        for lm, lc in lp.terms.items():
            for rm, rc in rp.terms.items():
                key = (lm, rm)
                v = out.get(key, 0) + scale * lc * rc
                if v:
                    out[key] = v
                else:
                    out.pop(key, None)

    def straighten(self, t: TensorPolynomial) -> TensorPolynomial:
        out: dict = {}
        for (lm, rm), c in t.terms.items():
            self._add(out, self.left.straighten(Polynomial.monomial(lm)), self.right.straighten(Polynomial.monomial(rm)), c)
        return TensorPolynomial(out)

    def multiply(self, s: TensorPolynomial, t: TensorPolynomial) -> TensorPolynomial:
        out: dict = {}
        for (l1, r1), c1 in s.terms.items():
            for (l2, r2), c2 in t.terms.items():
                key = (l1 * l2, r1 * r2)
                out[key] = out.get(key, 0) + c1 * c2
        return self.straighten(TensorPolynomial(out))

    def degree(self, t: TensorPolynomial) -> int:
        """Tensor product of the two degree maps."""
        total = 0
        for (lm, rm), c in t.terms.items():
            dl = degree(self.left, Polynomial.monomial(lm))
            if dl:
                total += c * dl * degree(self.right, Polynomial.monomial(rm))
        return total

    def embed_right(self, p: Polynomial) -> TensorPolynomial:
        return TensorPolynomial({(ONE, m): c for m, c in p.terms.items()})

    def embed_left(self, p: Polynomial) -> TensorPolynomial:
        return TensorPolynomial({(m, ONE): c for m, c in p.terms.items()})


def phi_target(ctx: RingContext, g: int) -> PhiTarget:
    cache = ctx.__dict__.setdefault("_phi_targets", {})
    if g in cache:
        return cache[g]
    m = ctx.lattice
    if not 0 <= g < m.n or g == m.top:
        raise InvalidFlat("phi_G needs a proper flat")
    if ctx.mode == REDUCED and g == m.bottom:
        raise InvalidFlat("phi_G on the reduced ring needs a nonempty flat")
    if not ctx.is_matroid:
        raise ContextMismatch("phi_G is defined for the matroid modes")
    if g == m.bottom:
        low = rank_zero_matroid()
        low_src = (m.bottom,)
    else:
        low = restriction(m, g)
        low_src = low.source
    high = contraction(m, g)
    target = PhiTarget(
        g,
        RingContext(low, ctx.mode),
        RingContext(high, REDUCED),
        {parent: i for i, parent in enumerate(low_src)},
        {parent: i for i, parent in enumerate(high.source)},
    )
    cache[g] = target
    return target


def phi(ctx: RingContext, g: int, p: Polynomial) -> TensorPolynomial:
    """phi_G(p): h_F -> h_F (x) 1 if F <= G, else 1 (x) h_{F v G}; factors straightened."""
    target = phi_target(ctx, g)
    m = ctx.lattice
    out: dict = {}
    for mono, c in p.terms.items():
        left, right = [], []
        for f in mono.factors():
            if m.le(f, g):
                left.append(target.to_left[f])
            else:
                right.append(target.to_right[m.join(f, g)])
        target._add(
            out,
            target.left.straighten(Polynomial.monomial(Monomial.from_factors(left))),
            target.right.straighten(Polynomial.monomial(Monomial.from_factors(right))),
            c,
        )
    return TensorPolynomial(out)


def kernel_generators(ctx: RingContext, g: int) -> list[Polynomial]:
    """Generators of ker(phi_G): h_F for F covering G, and h_H - h_K when H v G = K v G."""
    m = ctx.lattice
    gens = [Polynomial.gen(f) for f in m.covers(g)]
    outside = [f for f in ctx.generators if not m.le(f, g)]
    for h, k in itertools.combinations(outside, 2):
        if m.join(h, g) == m.join(k, g):
            gens.append(Polynomial.gen(h) - Polynomial.gen(k))
    return gens


def verify_annihilator(ctx: RingContext, g: int) -> CheckReport:
    """x_G * g straightens to 0 for every kernel generator g of phi_G."""
    report = CheckReport(f"annihilator of x_{g}")
    x = x_element(ctx, g)
    for gen in kernel_generators(ctx, g):
        report.checked += 1
        nf = ctx.straighten(x * gen)
        if nf:
            report.violations.append((str(gen), str(nf)))
    return report


def verify_projection_formula(ctx: RingContext, g: int, y: Polynomial) -> bool:
    """deg(phi_G(y)) == deg(x_G * y)."""
    y.homogeneous_degree()
    target = phi_target(ctx, g)
    lhs = target.degree(phi(ctx, g, y))
    rhs = degree(ctx, ctx.straighten(x_element(ctx, g) * y))
    return lhs == rhs


def projection_degrees(ctx: RingContext, g: int, y: Polynomial) -> tuple[int, int]:
    target = phi_target(ctx, g)
    return target.degree(phi(ctx, g, y)), degree(ctx, ctx.straighten(x_element(ctx, g) * y))


def random_polynomial(ctx: RingContext, d: int, rng: random.Random, terms: int = 4, coeff: int = 3) -> Polynomial:
    """Random integer combination of free monomials of degree ``d``."""
    gens = ctx.generators
    out = Polynomial()
    if d < 0:
        return out
    for _ in range(terms):
        mono = Monomial.from_factors(rng.choice(gens) for _ in range(d)) if gens else ONE
        c = rng.randint(-coeff, coeff)
        out = out + Polynomial.monomial(mono, c)
    return out


def verify_x_restriction(ctx: RingContext, g: int) -> CheckReport:
    """phi_G(x_H) = 1 (x) x_H for every H > G proper."""
    report = CheckReport(f"x_H restriction at {g}")
    target = phi_target(ctx, g)
    m = ctx.lattice
    for h in range(m.n):
        if h == m.top or not m.lt(g, h):
            continue
        report.checked += 1
        lhs = phi(ctx, g, x_element(ctx, h))
        rhs = target.embed_right(target.right.straighten(x_element(target.right, target.to_right[h])))
        if lhs != rhs:
            report.violations.append((h, repr(lhs), repr(rhs)))
    return report


def verify_x_restriction_remark(ctx: RingContext, g: int) -> CheckReport:
    """Companion statements: phi_G(x_H) = x_H (x) 1 for H < G and 0 for H incomparable to G."""
    report = CheckReport(f"x_H remark at {g}")
    target = phi_target(ctx, g)
    m = ctx.lattice
    for h in range(m.n):
        if h == m.top or m.le(g, h):
            continue
        if ctx.mode == REDUCED and h == m.bottom:
            continue
        report.checked += 1
        lhs = phi(ctx, g, x_element(ctx, h))
        if m.lt(h, g):
            if g == m.bottom:
                continue
            rhs = target.embed_left(target.left.straighten(x_element(target.left, target.to_left[h])))
        else:
            rhs = TensorPolynomial()
        if lhs != rhs:
            report.violations.append((h, repr(lhs), repr(rhs)))
    return report
