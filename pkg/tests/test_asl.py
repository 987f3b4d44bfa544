import random

import pytest

from chowring.asl import (
    MAX_ASL_DEGREE,
    axiom1_counts,
    axiom2_witnesses,
    check_asl,
    check_nonzerodivisor,
    inverted_flats,
    quotient_to_chow,
    semilattice_context,
)
from chowring.errors import ContextMismatch, SizeLimit
from chowring.lattice import as_meet_semilattice, build_poset, enumerate_meet_semilattices
from chowring.polynomial import Polynomial

from conftest import named_matroid


def h(f, k=1):
    return Polynomial.gen(f, k)


def chain2():
    return as_meet_semilattice(build_poset([(0, 1)], 2))


def diamond():
    return as_meet_semilattice(build_poset([(0, 1), (0, 2), (1, 3), (2, 3)], 4))


def test_chain_is_asl():
    report = check_asl(chain2())
    assert report.ok
    assert axiom2_witnesses(chain2()) == []


def test_diamond_straightening():
    l = diamond()
    ctx = semilattice_context(l)
    nf = ctx.straighten(h(1) * h(2))
    assert nf == h(0) * h(1) + h(0) * h(2) - h(0, 2)
    assert all(0 in m.support for m in nf.terms)
    assert check_asl(l).ok


def test_nonzerodivisor_examples():
    assert check_nonzerodivisor(chain2(), 4)
    assert check_nonzerodivisor(diamond(), 5)
    assert check_nonzerodivisor(inverted_flats(named_matroid("B3")), 4)


def test_inverted_flats_structure():
    m = named_matroid("U2_3")
    l = inverted_flats(m)
    assert l.size == 4
    assert l.origin.flats[l.bottom] == m.top
    # two atoms of U_{2,3} meet at E in the inverted order
    a, b = l.origin.flats.index(m.atoms[0]), l.origin.flats.index(m.atoms[1])
    assert l.meet(a, b) == l.bottom


@pytest.mark.parametrize("name", ["U2_3", "B3"])
def test_inverted_flats_pass(name):
    report = check_asl(inverted_flats(named_matroid(name)))
    assert report.ok


def test_axiom1_counts_u23():
    counts = axiom1_counts(inverted_flats(named_matroid("U2_3")), 4)
    assert [c[:3] for c in counts] == [(k, k, k) for k in (1, 4, 7, 10, 13)]
    assert all(c[3] for c in counts)


def test_all_small_semilattices_are_asl():
    for l in enumerate_meet_semilattices(5):
        assert check_asl(l, 4).ok


def test_guards():
    with pytest.raises(SizeLimit):
        check_asl(chain2(), MAX_ASL_DEGREE + 1)
    with pytest.raises(SizeLimit):
        check_asl(inverted_flats(named_matroid("B6")), 2)


def test_quotient_examples():
    m = named_matroid("U2_3")
    l = inverted_flats(m)
    assert quotient_to_chow(l, Polynomial.constant(1)) == Polynomial.constant(1)
    atom = l.origin.flats.index(m.atoms[0])
    assert quotient_to_chow(l, h(atom), "reduced") == Polynomial()
    assert quotient_to_chow(l, h(0) * h(1)) == h(m.top, 2)
    with pytest.raises(ContextMismatch):
        quotient_to_chow(diamond(), h(0))
    with pytest.raises(ContextMismatch):
        quotient_to_chow(l, h(0), "semilattice")


@pytest.mark.parametrize("name", ["U2_3", "B3", "K4"])
@pytest.mark.parametrize("mode", ["augmented", "reduced"])
def test_quotient_square_commutes(name, mode):
    l = inverted_flats(named_matroid(name))
    ctx = semilattice_context(l)
    rng = random.Random(2)
    for _ in range(40):
        p = Polynomial()
        for _ in range(3):
            mono = Polynomial.constant(rng.randint(-2, 2))
            for _ in range(rng.randint(1, 3)):
                mono = mono * h(rng.randrange(l.size))
            p = p + mono
        assert quotient_to_chow(l, ctx.straighten(p), mode) == quotient_to_chow(l, p, mode)
