"""Grading of the Chow ring by flats, the Moebius algebra, and the Hilbert recursion.

A standard monomial is supported on a chain, so the join of its support is
its largest flat (the empty flat for the monomial 1).  The piece attached to
``F`` is spanned by the standard monomials whose largest flat is ``F``.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .degree import CheckReport
from .errors import ContextMismatch, EmptyFlat, InvalidFlat
from .matroid import MatroidLattice, restriction, truncation
from .polynomial import Monomial, Polynomial
from .ring import AUGMENTED, REDUCED, RingContext, hilbert_series


@dataclass
class GradedPiece:
    flat: int
    component: Polynomial


def support_join(ctx: RingContext, m: Monomial) -> int:
    return ctx.lattice.join_all(m.support)


def split_by_flat(ctx: RingContext, p: Polynomial) -> list[GradedPiece]:
    """Partition the terms of a normal form by the join of their support."""
    parts: dict[int, dict] = {}
    for m, c in p.terms.items():
        parts.setdefault(support_join(ctx, m), {})[m] = c
    return [GradedPiece(f, Polynomial(t)) for f, t in sorted(parts.items())]


def _piece_top(ctx: RingContext, f: int) -> int:
    r = ctx.rank[f]
    return r if ctx.mode == AUGMENTED else r - 1


def piece_dimensions(ctx: RingContext, f: int) -> tuple[int, ...]:
    """dim of the piece at ``f`` in degrees 0..top of the piece.

    Raises if anything survives above that degree or the top is not
    spanned by the expected power of ``h_F``.
    """
    m = ctx.lattice
    if not 0 <= f < m.n:
        raise InvalidFlat(f"flat {f} out of range")
    if f == m.bottom:
        raise EmptyFlat("piece dimensions are defined for nonempty flats")
    top = _piece_top(ctx, f)
    dims = []
    for d in range(ctx.top_degree + 1):
        ms = [x for x in ctx.standard_monomials(d) if x and _top_flat(ctx, x) == f]
        if d > top and ms:
            raise AssertionError(f"piece at flat {f} is nonzero in degree {d} above {top}")
        if d == top and top > 0 and ms != [Monomial(((f, top),))]:
            raise AssertionError(f"top of piece at flat {f} is {ms}")
        if d <= top:
            dims.append(len(ms))
    return tuple(dims)


def _top_flat(ctx: RingContext, m: Monomial) -> int:
    return max(m.support, key=lambda g: ctx.rank[g])


def _truncated_restriction(m: MatroidLattice, f: int) -> MatroidLattice:
    return truncation(restriction(m, f))


def verify_flat_grading(ctx: RingContext, samples: int = 50, seed: int = 0) -> CheckReport:
    """Piece dimensions sum to the Hilbert function, match Tr M^F shifted by one,
    and straightening keeps monomials inside their piece."""
    report = CheckReport(f"flat grading ({ctx.mode})")
    m = ctx.lattice
    hs = hilbert_series(ctx)
    totals = [1] + [0] * (len(hs) - 1)
    for f in m.nonempty_flats():
        report.checked += 1
        if ctx.mode == REDUCED and ctx.rank[f] < 2:
            dims = piece_dimensions(ctx, f)
            if any(dims):
                report.violations.append(("nonzero atom piece", f, dims))
            continue
        dims = piece_dimensions(ctx, f)
        for d, v in enumerate(dims):
            totals[d] += v
        sub = RingContext(_truncated_restriction(m, f), ctx.mode)
        expected = (0,) + hilbert_series(sub)
        if dims != expected:
            report.violations.append(("piece vs truncation", f, dims, expected))
    if tuple(totals) != hs:
        report.violations.append(("sum of pieces", tuple(totals), hs))
    rng = random.Random(seed)
    gens = ctx.generators
    for _ in range(samples if gens else 0):
        d = rng.randint(1, max(ctx.top_degree, 1))
        mono = Monomial.from_factors(rng.choice(gens) for _ in range(d))
        f = support_join(ctx, mono)
        report.checked += 1
        for term in ctx.straighten(Polynomial.monomial(mono)).terms:
            if support_join(ctx, term) != f:
                report.violations.append(("grading not preserved", str(mono), str(term)))
                break
    return report


# Moebius algebra -------------------------------------------------------

@dataclass
class MobiusElement:
    """Element of the graded Moebius algebra in the basis y_F."""

    coeffs: dict[int, int] = field(default_factory=dict)

    @classmethod
    def basis(cls, f: int) -> "MobiusElement":
        return cls({f: 1})

    def __eq__(self, other):
        if not isinstance(other, MobiusElement):
            return NotImplemented
        return {k: v for k, v in self.coeffs.items() if v} == {k: v for k, v in other.coeffs.items() if v}


def mobius_multiply(m: MatroidLattice, u: MobiusElement, v: MobiusElement) -> MobiusElement:
    """y_F y_G = y_{F v G} when ranks add, otherwise 0."""
    out: dict[int, int] = {}
    for f, a in u.coeffs.items():
        for g, b in v.coeffs.items():
            j = m.join(f, g)
            if m.rank[f] + m.rank[g] == m.rank[j]:
                out[j] = out.get(j, 0) + a * b
    return MobiusElement({k: c for k, c in out.items() if c})


def mobius_image(ctx: RingContext, u: MobiusElement) -> Polynomial:
    """y_F -> h_F^{rk F} (and y_empty -> 1)."""
    out = Polynomial()
    for f, c in u.coeffs.items():
        if f == ctx.lattice.bottom:
            out = out + c
        else:
            out = out + Polynomial.gen(f, ctx.rank[f]) * c
    return out


def verify_mobius_embedding(ctx: RingContext, max_atom_products: int = 5000) -> CheckReport:
    """Products of h_F^{rk F} follow the Moebius rule, and atom products give h_F^{rk F}."""
    if ctx.mode != AUGMENTED:
        raise ContextMismatch("the Moebius algebra embeds in the augmented ring")
    report = CheckReport("Moebius embedding")
    m = ctx.lattice
    for f in range(m.n):
        for g in range(f, m.n):
            report.checked += 1
            lhs = ctx.straighten(mobius_image(ctx, MobiusElement.basis(f)) * mobius_image(ctx, MobiusElement.basis(g)))
            rhs = ctx.straighten(mobius_image(ctx, mobius_multiply(m, MobiusElement.basis(f), MobiusElement.basis(g))))
            if lhs != rhs:
                report.violations.append((f, g, str(lhs), str(rhs)))
    count = 0
    for k in range(1, m.r + 1):
        for atoms in itertools.combinations(m.atoms, k):
            if count >= max_atom_products:
                break
            count += 1
            report.checked += 1
            prod = Polynomial.constant(1)
            for a in atoms:
                prod = prod * Polynomial.gen(a)
            j = m.join_all(atoms)
            expected = Polynomial.gen(j, k) if m.rank[j] == k else Polynomial()
            got = ctx.straighten(prod)
            if got != ctx.straighten(expected):
                report.violations.append((atoms, str(got)))
    return report


# Hilbert recursion ---------------------------------------------------------

def _add_series(acc: list[int], series, shift: int):
    for i, c in enumerate(series):
        while len(acc) <= i + shift:
            acc.append(0)
        acc[i + shift] += c


def hilbert_recursion_rhs(m: MatroidLattice, mode: str) -> tuple[int, ...]:
    """1 + t * sum of Hilbert series of Tr M^F over nonempty F (rank >= 2 for the reduced ring)."""
    acc = [1]
    for f in m.nonempty_flats():
        if mode == REDUCED and m.rank[f] < 2:
            continue
        sub = RingContext(_truncated_restriction(m, f), mode)
        _add_series(acc, hilbert_series(sub), 1)
    return tuple(acc)


def verify_hilbert_recursion(ctx: RingContext) -> CheckReport:
    report = CheckReport(f"Hilbert recursion ({ctx.mode})")
    report.checked = 1
    lhs = hilbert_series(ctx)
    rhs = hilbert_recursion_rhs(ctx.lattice, ctx.mode)
    n = max(len(lhs), len(rhs))
    if tuple(lhs) + (0,) * (n - len(lhs)) != tuple(rhs) + (0,) * (n - len(rhs)):
        report.violations.append((lhs, rhs))
    return report
