"""The algebra B(L) of a finite meet-semilattice and its straightening-law checks.

``B(L)`` has a generator for every element and relations
``(h_x - h_{x^y})(h_y - h_{x^y})``.  The nonempty flats of a matroid with
the order reversed form such a semilattice (the meet there is the join of
flats), and ``B`` of it surjects onto both Chow rings.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ContextMismatch, SizeLimit
from .lattice import MeetSemilattice, Poset
from .matroid import MatroidLattice
from .oracle import SparseEliminator, get_oracle
from .polynomial import Monomial, Polynomial
from .ring import SEMILATTICE, RingContext, normalize_mode, series_truncated

MAX_ASL_SIZE = 50
MAX_ASL_DEGREE = 6


@dataclass
class InvertedOrigin:
    """Links an inverted flat semilattice back to its matroid."""

    matroid: MatroidLattice
    flats: tuple[int, ...]
    contexts: dict = field(default_factory=dict, repr=False)


def inverted_flats(m: MatroidLattice) -> MeetSemilattice:
    """Nonempty flats ordered by reverse inclusion; element i is flat ``flats[i]``."""
    flats = tuple(m.nonempty_flats())
    idx = list(flats)
    leq = m.poset.leq[idx][:, idx].T
    labels = [m.labels[f] for f in flats] if m.labels is not None else None
    poset = Poset(leq, labels)
    pos = {f: i for i, f in enumerate(flats)}
    meet = [[pos[m.join(f, g)] for g in flats] for f in flats]
    return MeetSemilattice(poset, meet, pos[m.top], InvertedOrigin(m, flats))


@dataclass
class ASLCheckReport:
    axiom1_ok: bool
    axiom2_ok: bool
    nzd_ok: bool
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.axiom1_ok and self.axiom2_ok and self.nzd_ok


def _guard(l: MeetSemilattice, d_max: int):
    if l.size > MAX_ASL_SIZE:
        raise SizeLimit(f"semilattice with {l.size} elements exceeds {MAX_ASL_SIZE}")
    if d_max > MAX_ASL_DEGREE:
        raise SizeLimit(f"degree bound {d_max} exceeds {MAX_ASL_DEGREE}")


def semilattice_context(l: MeetSemilattice) -> RingContext:
    ctx = getattr(l, "_ctx", None)
    if ctx is None:
        ctx = RingContext(l, SEMILATTICE)
        object.__setattr__(l, "_ctx", ctx)
    return ctx


def axiom1_counts(l: MeetSemilattice, d_max: int) -> list[tuple[int, int, int, bool]]:
    """Per degree: (chain-monomial count, order-complex count, oracle rank, torsion-free)."""
    ctx = semilattice_context(l)
    expected = series_truncated(l, d_max)
    oracle = get_oracle(ctx)
    out = []
    for d in range(d_max + 1):
        res = oracle.result(d)
        out.append((len(ctx.standard_monomials(d)), expected[d], res.rank, res.torsion_free))
    return out


def axiom2_witnesses(l: MeetSemilattice) -> list:
    """Incomparable pairs whose straightened product has a term without a common lower bound."""
    ctx = semilattice_context(l)
    bad = []
    for x in range(l.size):
        for y in range(x + 1, l.size):
            if l.poset.comparable(x, y):
                continue
            nf = ctx.straighten(Polynomial.gen(x) * Polynomial.gen(y))
            for mono in nf.terms:
                if not any(l.lt(z, x) and l.lt(z, y) for z in mono.support):
                    bad.append((x, y, str(mono)))
                    break
    return bad


def _full_column_rank(columns: list[dict]) -> bool:
    n = max((max(c) for c in columns if c), default=-1) + 1
    elim = SparseEliminator(n)
    for col in columns:
        elim.add_row(col)
    elim.finalize()
    return elim.rank == len(columns)


def check_nonzerodivisor(l: MeetSemilattice, d_max: int = 4) -> bool:
    """Multiplication by h_bottom is injective from degree d to d + 1 for d < d_max.

    Checked twice: on chain monomials via straightening, and on the oracle
    basis, which never uses straightening.
    """
    _guard(l, d_max)
    ctx = semilattice_context(l)
    bottom = l.bottom
    for d in range(d_max):
        target = {m: i for i, m in enumerate(ctx.standard_monomials(d + 1))}
        cols = []
        for mono in ctx.standard_monomials(d):
            nf = ctx.straighten(Polynomial.monomial(mono) * Polynomial.gen(bottom))
            cols.append({target[t]: c for t, c in nf.terms.items()})
        if cols and not _full_column_rank(cols):
            return False
        oracle = get_oracle(ctx)
        oracle.ensure(d + 1)
        i = oracle.pos[bottom]
        cols = [dict(oracle.mult[d][b][i]) for b in range(oracle.dim(d))]
        if cols and not _full_column_rank(cols):
            return False
    return True


def check_asl(l: MeetSemilattice, d_max: int = 4, nzd_degree: int | None = None) -> ASLCheckReport:
    _guard(l, d_max)
    counts = axiom1_counts(l, d_max)
    axiom1 = all(a == b == c and tf for a, b, c, tf in counts)
    bad = axiom2_witnesses(l)
    nzd = check_nonzerodivisor(l, d_max if nzd_degree is None else nzd_degree)
    return ASLCheckReport(axiom1, not bad, nzd, {"counts": counts, "axiom2_failures": bad})


def quotient_to_chow(l: MeetSemilattice, p: Polynomial, mode: str = "augmented") -> Polynomial:
    """Image of p under B(inverted flats) -> Chow ring, straightened there."""
    origin = l.origin
    if not isinstance(origin, InvertedOrigin):
        raise ContextMismatch("quotient_to_chow needs a semilattice built by inverted_flats")
    mode = normalize_mode(mode)
    if mode == SEMILATTICE:
        raise ContextMismatch("target must be the augmented or reduced ring")
    ctx = origin.contexts.get(mode)
    if ctx is None:
        ctx = origin.contexts[mode] = RingContext(origin.matroid, mode)
    flats = origin.flats
    return ctx.straighten(p.map_generators(lambda i: flats[i]))
