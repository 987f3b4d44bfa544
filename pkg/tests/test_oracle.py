import pytest

from chowring.errors import SizeLimit
from chowring.lattice import as_meet_semilattice, build_poset
from chowring.oracle import SparseEliminator, get_oracle, macaulay_oracle, oracle_basis
from chowring.polynomial import Polynomial
from chowring.ring import RingContext, series_truncated

from conftest import context


def test_eliminator_unit_pivots():
    e = SparseEliminator(3)
    assert e.add_row({0: 1, 1: 2})
    assert e.add_row({1: 1, 2: -1})
    assert not e.add_row({0: 1, 1: 3, 2: -1})
    e.finalize()
    assert (e.rank, e.torsion, e.quotient_rank) == (2, [], 1)


def test_eliminator_detects_torsion():
    e = SparseEliminator(2)
    e.add_row({0: 2})
    e.finalize()
    assert e.torsion == [2]
    assert e.quotient_rank == 1


def test_eliminator_snf_fallback_without_torsion():
    # no unit entry, but gcd of the row entries is 1
    e = SparseEliminator(3)
    e.add_row({0: 2, 1: 3})
    e.finalize()
    assert e.torsion == []
    assert e.rank == 1 and e.quotient_rank == 2
    # the class of (3, -2, 0) is nonzero, the class of (2, 3, 0) is zero
    assert e.quotient_coordinates({0: 2, 1: 3}) == {}
    assert e.quotient_coordinates({0: 3, 1: -2})


def test_oracle_examples():
    r = oracle_basis(context("B2", "augmented"), 2)
    assert (r.rank, r.torsion_free) == (1, True)
    assert oracle_basis(context("B3", "reduced"), 1).rank == 4
    for name, mode in [("B2", "augmented"), ("K4", "reduced")]:
        assert oracle_basis(context(name, mode), 0).rank == 1
        assert oracle_basis(context(name, mode), -1).rank == 0


@pytest.mark.parametrize("name", ["B2", "B3", "U2_3", "U2_4"])
def test_macaulay_agrees_with_incremental(name, mode):
    ctx = context(name, mode)
    for d in range(ctx.top_degree + 2):
        a = macaulay_oracle(ctx, d)
        b = oracle_basis(ctx, d)
        assert (a.rank, a.torsion) == (b.rank, b.torsion)


def test_macaulay_size_guard():
    with pytest.raises(SizeLimit):
        macaulay_oracle(context("B5", "augmented"), 5)


def test_vanishes_above_top_degree(mode):
    ctx = context("B4", mode)
    assert oracle_basis(ctx, ctx.top_degree + 1).rank == 0


def test_membership():
    ctx = context("B2", "augmented")
    o = get_oracle(ctx)
    h = Polynomial.gen
    assert o.in_ideal(h(1) * h(2) - h(3, 2))
    assert o.in_ideal(h(1, 2))
    assert not o.in_ideal(h(3, 2))
    assert not o.in_ideal(h(1))


def test_semilattice_oracle_matches_chain_count():
    diamond = as_meet_semilattice(build_poset([(0, 1), (0, 2), (1, 3), (2, 3)], 4))
    ctx = RingContext(diamond, "semilattice")
    got = tuple(oracle_basis(ctx, d).rank for d in range(5))
    assert got == series_truncated(diamond, 4)
