"""Independent linear-algebra oracle for the graded pieces of a presented ring.

Nothing here uses straightening.  Two routes compute the free rank and
torsion of ``R_d / I_d``:

* :func:`macaulay_oracle` - rows are (relation) x (monomial of complementary
  degree) in the free monomial basis of degree ``d``.  Exact but the column
  count grows like ``C(n + d - 1, d)``.
* :class:`IncrementalOracle` - builds ``Q_d = R_d / I_d`` from ``Q_{d-1}``
  using the exact sequence
  ``Lambda^2 V (x) S^{d-2} -> V (x) S^{d-1} -> S^d -> 0``:
  ``Q_d`` is ``V (x) Q_{d-1}`` modulo commutators ``x_i (x) [x_j b] - x_j (x) [x_i b]``
  and lifted relations ``sum c_pq x_p (x) [x_q b]`` for ``b`` a basis of
  ``Q_{d-2}``.  Columns stay at ``n * dim Q_{d-1}``.

Both reduce with unit pivots over Z and fall back to a Smith normal form
on whatever is left, so torsion is detected exactly.
"""
from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from math import comb

from sympy import Matrix
from sympy.matrices.normalforms import smith_normal_decomp

from .errors import ChowError, SizeLimit
from .polynomial import Monomial, Polynomial
from .ring import REDUCED, RingContext

MACAULAY_MAX_COLUMNS = 20000


class SparseEliminator:
    """Integer row reduction on sparse rows ``{column: int}``.

    Pivots are taken only on entries equal to +-1 so every step is
    unimodular.  Rows with no unit entry after reduction are parked and
    handled by a Smith normal form in :meth:`finalize`.
    """

    def __init__(self, n_columns: int, pivot_key=None):
        self.n_columns = n_columns
        self.pivots: dict[int, tuple[int, dict]] = {}
        self.hard: list[dict] = []
        self._order = 0
        self._pivot_key = pivot_key or (lambda c: c)
        self.finalized = False

    def reduce(self, v: dict) -> dict:
        v = dict(v)
        pivots = self.pivots
        heap = [(pivots[c][0], c) for c in v if c in pivots]
        heapq.heapify(heap)
        while heap:
            _, c = heapq.heappop(heap)
            coef = v.get(c)
            if not coef:
                continue
            for cc, val in pivots[c][1].items():
                old = v.get(cc)
                nv = (old or 0) - coef * val
                if nv:
                    if old is None and cc in pivots:
                        heapq.heappush(heap, (pivots[cc][0], cc))
                    v[cc] = nv
                else:
                    del v[cc]
        return v

    def add_row(self, row: dict) -> bool:
        """Insert a row; returns False when it was already in the span."""
        v = self.reduce(row)
        if not v:
            return False
        units = [c for c, val in v.items() if val == 1 or val == -1]
        if not units:
            self.hard.append(v)
            return True
        c = max(units, key=self._pivot_key)
        if v[c] == -1:
            v = {k: -val for k, val in v.items()}
        self.pivots[c] = (self._order, v)
        self._order += 1
        return True

    def finalize(self):
        """Absorb parked rows and compute the Smith form of the remainder."""
        changed = True
        while changed and self.hard:
            changed = False
            pending, self.hard = self.hard, []
            for v in pending:
                before = len(self.pivots)
                self.add_row(v)
                if len(self.pivots) != before:
                    changed = True
        self.hard = [h for h in (self.reduce(v) for v in self.hard) if h]
        self.snf_columns: list[int] = []
        self.invariants: list[int] = []
        self._snf_transform = None
        if self.hard:
            cols = sorted({c for v in self.hard for c in v})
            pos = {c: i for i, c in enumerate(cols)}
            mat = Matrix(len(self.hard), len(cols), lambda i, j: 0)
            for i, v in enumerate(self.hard):
                for c, val in v.items():
                    mat[i, pos[c]] = val
            smith, _, right = smith_normal_decomp(mat)
            k = min(smith.shape)
            self.invariants = [abs(int(smith[i, i])) for i in range(k) if smith[i, i] != 0]
            self.snf_columns = cols
            self._snf_transform = right
        free = [c for c in range(self.n_columns) if c not in self.pivots and c not in set(self.snf_columns)]
        self.free_columns = free
        self._free_pos = {c: i for i, c in enumerate(free)}
        self.finalized = True

    @property
    def rank(self) -> int:
        return len(self.pivots) + len(self.invariants)

    @property
    def torsion(self) -> list[int]:
        return [d for d in self.invariants if d != 1]

    @property
    def quotient_rank(self) -> int:
        return self.n_columns - self.rank

    def quotient_coordinates(self, v: dict) -> dict[int, int]:
        """Coordinates of the class of ``v`` in the free part of the quotient.

        Positions ``0..len(free_columns)-1`` are the untouched columns; the
        remaining positions come from the Smith transform of the parked rows.
        """
        r = self.reduce(v)
        out = {}
        snf_part = {}
        for c, val in r.items():
            p = self._free_pos.get(c)
            if p is not None:
                out[p] = val
            else:
                snf_part[c] = val
        if snf_part:
            cols = self.snf_columns
            right = self._snf_transform
            k = len(self.invariants)
            base = len(self.free_columns)
            for j in range(k, len(cols)):
                s = sum(val * int(right[cols.index(c), j]) for c, val in snf_part.items())
                if s:
                    out[base + j - k] = s
        return out


@dataclass
class OracleResult:
    degree: int
    rank: int
    torsion_free: bool
    torsion: list[int] = field(default_factory=list)
    basis: list[Monomial] | None = None
    method: str = "incremental"


def _free_monomials(gens, d):
    return [Monomial.from_factors(c) for c in itertools.combinations_with_replacement(gens, d)]


def macaulay_oracle(ctx: RingContext, d: int) -> OracleResult:
    """Direct Macaulay-matrix computation of ``R_d / I_d``."""
    gens = list(ctx.generators)
    n_cols = comb(len(gens) + d - 1, d) if gens else (1 if d == 0 else 0)
    if n_cols > MACAULAY_MAX_COLUMNS:
        raise SizeLimit(f"{n_cols} monomials of degree {d} exceeds {MACAULAY_MAX_COLUMNS}")
    cols = _free_monomials(gens, d)
    index = {m: i for i, m in enumerate(cols)}
    elim = SparseEliminator(len(cols))
    for rel in ctx.relations():
        e = rel.homogeneous_degree()
        if e is None or e > d:
            continue
        for mu in _free_monomials(gens, d - e):
            row = {}
            for m, c in rel.terms.items():
                k = index[m * mu]
                row[k] = row.get(k, 0) + c
            row = {k: v for k, v in row.items() if v}
            if row:
                elim.add_row(row)
    elim.finalize()
    basis = [cols[c] for c in elim.free_columns] if not elim.invariants else None
    return OracleResult(d, elim.quotient_rank, not elim.torsion, elim.torsion, basis, "macaulay")


class IncrementalOracle:
    """Degree-by-degree construction of the quotient ring over Z.

    ``mult[d][b][i]`` holds the coordinates in ``Q_{d+1}`` of
    ``x_i * (basis element b of Q_d)``.
    """

    def __init__(self, ctx: RingContext):
        self.ctx = ctx
        dropped = set(ctx.lattice.atoms) if ctx.mode == REDUCED else set()
        self.gens = [g for g in ctx.generators if g not in dropped]
        self.pos = {g: i for i, g in enumerate(self.gens)}
        self.quadratic = []
        for rel in ctx.relations():
            if rel.homogeneous_degree() != 2:
                continue
            q = {}
            for m, c in rel.terms.items():
                fs = m.factors()
                if any(f in dropped for f in fs):
                    continue
                key = tuple(sorted(self.pos[f] for f in fs))
                q[key] = q.get(key, 0) + c
            q = {k: v for k, v in q.items() if v}
            if q:
                self.quadratic.append(q)
        n = len(self.gens)
        self.dims = [1]
        self.labels: list[list] = [[None]]
        self.mult: list[list[list[dict]]] = []
        self.torsion: dict[int, list[int]] = {0: []}
        self.exact_basis = True
        if n:
            self.dims.append(n)
            self.labels.append([(i, 0) for i in range(n)])
            self.mult.append([[{i: 1} for i in range(n)]])
            self.torsion[1] = []
        self._broken_at = None

    def _build(self, d: int):
        n = len(self.gens)
        prev = self.dims[d - 1]
        below = self.mult[d - 2]
        elim = SparseEliminator(n * prev)

        def tensor(i, vec, scale, out):
            base = i * prev
            for c, val in vec.items():
                k = base + c
                v = out.get(k, 0) + scale * val
                if v:
                    out[k] = v
                else:
                    out.pop(k, None)

        for b in range(self.dims[d - 2]):
            prods = below[b]
            for q in self.quadratic:
                row = {}
                for (p, s), c in q.items():
                    tensor(p, prods[s], c, row)
                if row:
                    elim.add_row(row)
            for i in range(n):
                for j in range(i + 1, n):
                    row = {}
                    tensor(i, prods[j], 1, row)
                    tensor(j, prods[i], -1, row)
                    if row:
                        elim.add_row(row)
        elim.finalize()
        self.torsion[d] = elim.torsion
        if elim.invariants:
            self.exact_basis = False
        self.dims.append(elim.quotient_rank)
        self.labels.append([divmod(c, prev) for c in elim.free_columns])
        self.mult.append([[elim.quotient_coordinates({i * prev + c: 1}) for i in range(n)] for c in range(prev)])
        if elim.torsion:
            self._broken_at = d

    def ensure(self, d: int):
        if not self.gens:
            return
        while len(self.dims) <= d:
            if self._broken_at is not None:
                raise ChowError(f"quotient has torsion in degree {self._broken_at}; cannot continue")
            self._build(len(self.dims))

    def dim(self, d: int) -> int:
        if d == 0:
            return 1
        if not self.gens:
            return 0
        self.ensure(d)
        return self.dims[d]

    def basis_monomial(self, d: int, k: int) -> Monomial:
        factors = []
        while d > 0:
            i, c = self.labels[d][k]
            factors.append(self.gens[i])
            d, k = d - 1, c
        return Monomial.from_factors(factors)

    def result(self, d: int) -> OracleResult:
        rank = self.dim(d)
        torsion = self.torsion.get(d, [])
        basis = None
        if self.exact_basis:
            basis = [self.basis_monomial(d, k) for k in range(rank)]
        return OracleResult(d, rank, not torsion, torsion, basis, "incremental")

    def coordinates(self, p: Polynomial) -> dict[int, dict[int, int]]:
        """Coordinates of each homogeneous part of ``p`` in the oracle basis."""
        out = {}
        for d, part in p.homogeneous_parts().items():
            self.ensure(d)
            acc: dict[int, int] = {}
            for m, c in part.terms.items():
                vec = {0: c}
                deg = 0
                for f in m.factors():
                    i = self.pos.get(f)
                    if i is None:
                        vec = {}
                        break
                    nxt: dict[int, int] = {}
                    for k, val in vec.items():
                        for kk, vv in self.mult[deg][k][i].items():
                            nxt[kk] = nxt.get(kk, 0) + val * vv
                    vec = {k: v for k, v in nxt.items() if v}
                    deg += 1
                    if not vec:
                        break
                for k, v in vec.items():
                    acc[k] = acc.get(k, 0) + v
            acc = {k: v for k, v in acc.items() if v}
            if acc:
                out[d] = acc
        return out

    def in_ideal(self, p: Polynomial) -> bool:
        return not self.coordinates(p)


def oracle_basis(ctx: RingContext, d: int, method: str = "incremental") -> OracleResult:
    """Free rank and torsion of the degree-``d`` piece, computed without straightening."""
    if d < 0:
        return OracleResult(d, 0, True, [], [], method)
    if method == "macaulay":
        return macaulay_oracle(ctx, d)
    oracle = ctx.__dict__.get("_oracle")
    if oracle is None:
        oracle = ctx.__dict__["_oracle"] = IncrementalOracle(ctx)
    return oracle.result(d)


def get_oracle(ctx: RingContext) -> IncrementalOracle:
    oracle = ctx.__dict__.get("_oracle")
    if oracle is None:
        oracle = ctx.__dict__["_oracle"] = IncrementalOracle(ctx)
    return oracle
