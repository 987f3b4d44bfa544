"""Essential flats, the delta statistic and Poincare pairing matrices.

For a standard monomial ``m`` of degree ``k`` the dual element
``d(m) = prod x_G`` (over the essential flats, omitting the empty flat in
the reduced ring) has complementary degree, and the matrix
``deg(m * d(m'))`` is unitriangular once monomials are ordered by delta.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .degree import CheckReport, _monomial_degree, degree, verify_degree_welldefined, x_element
from .errors import DegreeOutOfRange, NotStandard
from .polynomial import Monomial, Polynomial
from .ring import REDUCED, RingContext, delta_vector, hilbert_series


class DeltaVector(tuple):
    """Cumulative exponents by rank; compares lexicographically."""

    @property
    def components(self) -> tuple[int, ...]:
        return tuple(self)


def delta(ctx: RingContext, m: Monomial) -> DeltaVector:
    return DeltaVector(delta_vector(ctx, Monomial(m)))


@dataclass(frozen=True)
class EssentialFlats:
    flats: tuple[int, ...]
    maximal_chain: tuple[int, ...]


def maximal_chain_through(ctx: RingContext, flats) -> list[int]:
    """Extend a chain of flats to a maximal chain, taking the lowest-index usable cover each step."""
    lattice = ctx.lattice
    targets = sorted(flats, key=lambda f: lattice.rank[f]) + [lattice.top]
    chain = [lattice.bottom]
    for target in targets:
        while chain[-1] != target:
            chain.append(next(c for c in lattice.covers(chain[-1]) if lattice.le(c, target)))
    return chain


def essential_flats(ctx: RingContext, m: Monomial) -> EssentialFlats:
    m = Monomial(m)
    if not ctx.is_matroid or not ctx.is_standard(m):
        raise NotStandard(f"{m} is not a standard monomial")
    chain = maximal_chain_through(ctx, m.support)
    rank = ctx.rank
    removed = {len(chain) - 1}
    for f, a in m:
        rf = rank[f]
        removed.update(range(rf - a, rf))
    flats = tuple(chain[i] for i in range(len(chain)) if i not in removed)
    return EssentialFlats(flats, tuple(chain))


def dual_factors(ctx: RingContext, m: Monomial) -> list[int]:
    flats = essential_flats(ctx, m).flats
    if ctx.mode == REDUCED:
        flats = tuple(g for g in flats if g != ctx.lattice.bottom)
    return list(flats)


def _x_cached(ctx: RingContext, g: int) -> Polynomial:
    cache = ctx.__dict__.setdefault("_x_cache", {})
    x = cache.get(g)
    if x is None:
        x = cache[g] = x_element(ctx, g)
    return x


def dual_element(ctx: RingContext, m: Monomial, straighten: bool = True) -> Polynomial:
    """d(m) as a polynomial; straightened one factor at a time unless asked otherwise."""
    acc = Polynomial.constant(1)
    for g in dual_factors(ctx, m):
        acc = acc * _x_cached(ctx, g)
        if straighten:
            acc = ctx.straighten(acc)
    return acc


def _pair(ctx: RingContext, m: Monomial, p: Polynomial) -> int:
    return sum(c * _monomial_degree(ctx, m * mono) for mono, c in p.terms.items())


def bareiss_determinant(matrix: list[list[int]]) -> int:
    """Exact determinant by fraction-free Gaussian elimination."""
    n = len(matrix)
    if n == 0:
        return 1
    a = [list(map(int, row)) for row in matrix]
    if any(len(row) != n for row in a):
        raise ValueError("determinant needs a square matrix")
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        pivot = a[k][k]
        for i in range(k + 1, n):
            row_i, aik = a[i], a[i][k]
            row_k = a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * a[n - 1][n - 1]


# Bareiss is cubic in Python integers; above this size the determinant is
# read off the factorization certificate in pairing_matrix instead
BAREISS_MAX_SIZE = 300
_SIGN_PRIME = 2_147_483_629


def determinant_mod_p(matrix: list[list[int]], p: int = _SIGN_PRIME) -> int:
    """Determinant modulo an odd prime ``p`` < 2**31, as a residue in 0..p-1."""
    a = np.array(matrix, dtype=np.int64).reshape(len(matrix), len(matrix)) % p
    n = a.shape[0]
    det = 1
    for k in range(n):
        nz = np.flatnonzero(a[k:, k])
        if nz.size == 0:
            return 0
        piv = k + int(nz[0])
        if piv != k:
            a[[k, piv]] = a[[piv, k]]
            det = -det
        det = det * int(a[k, k]) % p
        inv = pow(int(a[k, k]), p - 2, p)
        factors = a[k + 1 :, k] * inv % p
        # split the pivot row so every product stays below 2**62
        lo, hi = a[k, k:] & 0xFFFF, a[k, k:] >> 16
        update = (np.outer(factors, hi) % p * 65536 + np.outer(factors, lo)) % p
        a[k + 1 :, k:] = (a[k + 1 :, k:] - update) % p
    return det % p


@dataclass
class PairingReport:
    degree_k: int
    row_monomials: list[Monomial]
    col_duals: list[Monomial]
    matrix: list[list[int]]
    is_lower_triangular_unit: bool
    delta_refined: bool
    full_pairing_det: int | None = None
    violations: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "degree": self.degree_k,
            "rows": [str(m) for m in self.row_monomials],
            "matrix": [list(r) for r in self.matrix],
            "lower_triangular_unit": self.is_lower_triangular_unit,
            "full_pairing_det": self.full_pairing_det,
        }


def full_pairing_matrix(ctx: RingContext, k: int) -> tuple[list[Monomial], list[Monomial], list[list[int]]]:
    """deg(m_i * s_j) for standard bases in degrees k and top - k."""
    top = ctx.top_degree
    rows = ctx.standard_monomials(k)
    cols = ctx.standard_monomials(top - k)
    return rows, cols, [[_monomial_degree(ctx, a * b) for b in cols] for a in rows]


def pairing_matrix(ctx: RingContext, k: int, full: bool = True) -> PairingReport:
    top = ctx.top_degree
    if top is None or not 0 <= k <= top:
        raise DegreeOutOfRange(f"degree {k} outside 0..{top}")
    basis = ctx.standard_monomials(k)
    duals = [dual_element(ctx, m) for m in basis]
    rows = cols = full_mat = None
    if full:
        rows, cols, full_mat = full_pairing_matrix(ctx, k)
        # P = F C with C the coordinates of each straightened d(m') in the column basis
        col_pos = {s: i for i, s in enumerate(cols)}
        coords = np.zeros((len(cols), len(basis)), dtype=np.int64)
        for j, d in enumerate(duals):
            for s, c in d.terms.items():
                coords[col_pos[s], j] += c
        f_arr = np.array(full_mat, dtype=np.int64).reshape(len(rows), len(cols))
        # F is 0/1, so |entries of F C| <= n * max|C|, far inside int64
        matrix = [[int(v) for v in row] for row in f_arr.dot(coords)]
    else:
        matrix = [[_pair(ctx, row, d) for d in duals] for row in basis]
    deltas = [delta(ctx, m) for m in basis]
    unit = True
    refined = True
    violations = []
    for i, row in enumerate(matrix):
        for j, v in enumerate(row):
            if i == j:
                if v != 1:
                    unit = False
                    violations.append(("diagonal", str(basis[i]), v))
            elif v:
                if j > i:
                    unit = False
                    violations.append(("upper", str(basis[i]), str(basis[j]), v))
                if not deltas[i] > deltas[j]:
                    refined = False
                    violations.append(("delta", str(basis[i]), str(basis[j]), v))
    det = None
    if full and len(rows) == len(cols):
        if len(rows) <= BAREISS_MAX_SIZE or not unit:
            det = bareiss_determinant(full_mat)
        else:
            det = _certified_unimodular_det(full_mat)
    return PairingReport(k, basis, list(basis), matrix, unit, refined, det, violations)


def _certified_unimodular_det(full: list[list[int]]) -> int:
    """det of the full pairing matrix F when the reduced matrix P is unitriangular.

    Each d(m') straightens to an integer combination of the column basis,
    so P = F C with C integral.  det P = 1 then forces det F * det C = 1,
    hence det F = +-1, and the residue mod an odd prime fixes the sign.
    """
    r = determinant_mod_p(full)
    if r == 1:
        return 1
    if r == _SIGN_PRIME - 1:
        return -1
    raise ArithmeticError("pairing factorization certificate failed")


@dataclass
class TheoremReport:
    checks: list[CheckReport] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def __bool__(self):
        return self.ok


def verify_theorems(ctx: RingContext, oracle: bool = True) -> TheoremReport:
    """Basis, degree map and duality statements for one matroid context."""
    from .oracle import oracle_basis

    report = TheoremReport()
    top = ctx.top_degree
    hs = hilbert_series(ctx)
    if oracle:
        basis = CheckReport("standard monomials vs oracle")
        for d in range(top + 2):
            res = oracle_basis(ctx, d)
            count = len(ctx.standard_monomials(d))
            basis.checked += 1
            if res.rank != count or not res.torsion_free:
                basis.violations.append((d, count, res.rank, res.torsion))
        report.checks.append(basis)
    report.checks.append(verify_degree_welldefined(ctx))
    norm = CheckReport("degree of h_E^top")
    norm.checked = 1
    v = degree(ctx, Polynomial.gen(ctx.lattice.top, top) if top else Polynomial.constant(1))
    if v != 1:
        norm.violations.append(v)
    report.checks.append(norm)
    tri = CheckReport("pairing unitriangular")
    pd = CheckReport("pairing determinant")
    for k in range(top + 1):
        pr = pairing_matrix(ctx, k)
        tri.checked += 1
        pd.checked += 1
        if not (pr.is_lower_triangular_unit and pr.delta_refined):
            tri.violations.append((k, pr.violations[:5]))
        if pr.full_pairing_det not in (1, -1):
            pd.violations.append((k, pr.full_pairing_det))
    report.checks += [tri, pd]
    pal = CheckReport("palindromic Hilbert series")
    pal.checked = 1
    if hs != hs[::-1]:
        pal.violations.append(hs)
    report.checks.append(pal)
    return report
