import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chowring.degree import (
    FlatMultiset,
    dragon_hall_rado,
    degree,
    degree_aug,
    degree_red,
    hall_rado,
    hall_rado_bruteforce,
    kernel_generators,
    phi,
    phi_target,
    projection_degrees,
    random_polynomial,
    verify_annihilator,
    verify_degree_welldefined,
    verify_projection_formula,
    verify_x_restriction,
    verify_x_restriction_remark,
    x_element,
    x_element_bruteforce,
)
from chowring.errors import ContextMismatch, InvalidFlat, SizeMismatch
from chowring.matroid import rank_zero_matroid, uniform_matroid
from chowring.polynomial import ONE, Monomial, Polynomial
from chowring.ring import RingContext

from conftest import SMALL, context, flat_with_labels, named_matroid


def h(f, k=1):
    return Polynomial.gen(f, k)


def proper_flats(ctx):
    m = ctx.lattice
    return [g for g in range(m.n) if g != m.top and not (ctx.mode == "reduced" and g == m.bottom)]


# Hall-Rado ------------------------------------------------------------------

def test_hall_rado_examples():
    b3 = named_matroid("B3")
    assert hall_rado(b3, [b3.top] * 3)
    a = b3.atoms[0]
    res = hall_rado(b3, [a, a, b3.top])
    assert not res and res.witness == (0, 1)
    assert hall_rado(rank_zero_matroid(), [])
    with pytest.raises(SizeMismatch):
        hall_rado(b3, [b3.top])


def test_dragon_hall_rado_examples():
    b3 = named_matroid("B3")
    f = b3.flats_of_rank(2)[0]
    assert dragon_hall_rado(b3, FlatMultiset.of([f, b3.top]))
    res = dragon_hall_rado(b3, [b3.atoms[0], b3.top])
    assert not res and res.witness == (0,)
    assert dragon_hall_rado(b3, [b3.top, b3.top])
    with pytest.raises(InvalidFlat):
        dragon_hall_rado(b3, [b3.bottom, b3.top])
    with pytest.raises(SizeMismatch):
        dragon_hall_rado(b3, [b3.top])


@settings(max_examples=300, deadline=None)
@given(st.sampled_from(["B3", "B4", "U2_4", "U3_5", "K4"]), st.integers(0, 1), st.data())
def test_hall_rado_matches_subset_scan(name, slack, data):
    m = named_matroid(name)
    size = m.r - slack
    elements = data.draw(st.lists(st.integers(1 if slack else 0, m.n - 1), min_size=size, max_size=size))
    fast = hall_rado(m, elements) if slack == 0 else dragon_hall_rado(m, elements)
    brute = hall_rado_bruteforce(m, elements, slack)
    assert fast.ok == brute.ok
    if not fast.ok:
        w = fast.witness
        assert len(w) == len(brute.witness)
        assert m.rank[m.join_all(elements[i] for i in w)] < len(w) + slack


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(["B3", "B4", "K4"]), st.data())
def test_hall_rado_upward_monotone(name, data):
    """Enlarging one flat of a passing multiset keeps it passing."""
    m = named_matroid(name)
    elements = data.draw(st.lists(st.integers(0, m.n - 1), min_size=m.r, max_size=m.r))
    i = data.draw(st.integers(0, m.r - 1))
    bigger = data.draw(st.sampled_from([f for f in range(m.n) if m.le(elements[i], f)]))
    if hall_rado(m, elements):
        raised = list(elements)
        raised[i] = bigger
        assert hall_rado(m, raised)


# degree maps ---------------------------------------------------------------

def test_degree_examples():
    aug = context("B3", "augmented")
    red = context("B3", "reduced")
    top = aug.lattice.top
    a = aug.lattice.atoms[0]
    f = aug.lattice.flats_of_rank(2)[0]
    assert degree_aug(aug, h(top, 3)) == 1
    assert degree_aug(aug, h(a, 2) * h(top)) == 0
    assert degree_aug(aug, h(top, 2)) == 0
    assert degree_red(red, h(top, 2)) == 1
    assert degree_red(red, h(a) * h(top)) == 0
    assert degree_red(red, h(f) * h(top)) == 1
    with pytest.raises(ContextMismatch):
        degree_red(aug, h(top, 2))
    with pytest.raises(ContextMismatch):
        degree_aug(red, h(top, 3))


def test_degree_of_independent_atoms():
    """A product of r distinct atoms of a Boolean matroid has degree 1."""
    ctx = context("B4", "augmented")
    p = Polynomial.monomial(Monomial.from_factors(ctx.lattice.atoms))
    assert degree(ctx, p) == 1
    assert ctx.straighten(p) == h(ctx.lattice.top, 4)


def test_degree_rank_zero_and_one():
    z = rank_zero_matroid()
    assert degree(RingContext(z, "augmented"), Polynomial.constant(1)) == 1
    assert degree(RingContext(z, "reduced"), Polynomial.constant(1)) == 1
    u11 = RingContext(uniform_matroid(1, 1), "reduced")
    assert degree(u11, Polynomial.constant(3)) == 3
    assert verify_degree_welldefined(u11).ok


@pytest.mark.parametrize("name", SMALL)
def test_degree_agrees_on_normal_form(name, mode):
    ctx = context(name, mode)
    rng = random.Random(11)
    for _ in range(40):
        p = random_polynomial(ctx, ctx.top_degree, rng)
        assert degree(ctx, p) == degree(ctx, ctx.straighten(p))


@pytest.mark.parametrize("name", ["B2", "B3", "U2_3", "U2_4", "K4"])
def test_welldefined_small(name, mode):
    report = verify_degree_welldefined(context(name, mode))
    assert report.ok and not report.sampled and report.checked > 0


def test_welldefined_counts():
    assert verify_degree_welldefined(context("U2_4", "augmented")).checked == 22
    assert verify_degree_welldefined(context("U2_4", "reduced")).checked == 4


# x_G and phi_G ----------------------------------------------------------------

def test_x_element_example():
    ctx = context("B2", "augmented")
    assert x_element(ctx, 0) == h(1) + h(2) - h(3)


@pytest.mark.parametrize("name", SMALL)
def test_x_element_matches_subset_sum(name, mode):
    ctx = context(name, mode)
    for g in proper_flats(ctx):
        assert x_element(ctx, g) == x_element_bruteforce(ctx, g)


def test_x_element_rejects_bad_flats():
    with pytest.raises(InvalidFlat):
        x_element(context("B2", "augmented"), 3)
    with pytest.raises(InvalidFlat):
        x_element(context("B2", "reduced"), 0)


def test_phi_on_generators():
    ctx = context("B3", "augmented")
    m = ctx.lattice
    g = flat_with_labels(m, [0])
    t = phi_target(ctx, g)
    assert phi(ctx, g, h(g)) == t.embed_left(h(t.to_left[g]))
    outside = flat_with_labels(m, [1, 2])
    assert phi(ctx, g, h(outside)) == t.embed_right(h(t.to_right[m.top]))
    # F v G is an atom of M_G, which vanishes in the reduced factor
    assert not phi(ctx, g, h(flat_with_labels(m, [1])))
    # G = empty: an atom lands on h_a in the reduced ring of M, which is 0
    assert not phi(ctx, m.bottom, h(m.atoms[0]))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["B3", "U2_4", "K4"]), st.sampled_from(["augmented", "reduced"]), st.integers(0, 10**6))
def test_phi_is_multiplicative(name, mode, seed):
    ctx = context(name, mode)
    rng = random.Random(seed)
    g = rng.choice(proper_flats(ctx))
    p = random_polynomial(ctx, rng.randint(0, 2), rng, terms=2)
    q = random_polynomial(ctx, rng.randint(0, 2), rng, terms=2)
    t = phi_target(ctx, g)
    assert phi(ctx, g, p * q) == t.multiply(phi(ctx, g, p), phi(ctx, g, q))


def test_phi_kills_relations():
    ctx = context("B3", "augmented")
    for g in proper_flats(ctx):
        for rel in ctx.relations():
            assert not phi(ctx, g, rel)


def test_annihilator_examples():
    b3 = context("B3", "augmented")
    a = b3.lattice.atoms[0]
    assert not b3.straighten(x_element(b3, 0) * h(a))
    u23 = context("U2_3", "augmented")
    g, b, c = u23.lattice.atoms
    assert not u23.straighten(x_element(u23, g) * (h(b) - h(c)))
    u11 = RingContext(uniform_matroid(1, 1), "augmented")
    assert not u11.straighten(x_element(u11, 0) * h(1))
    assert h(1) in kernel_generators(u11, 0)


@pytest.mark.parametrize("name", SMALL)
def test_annihilator_all_flats(name, mode):
    ctx = context(name, mode)
    for g in proper_flats(ctx):
        assert verify_annihilator(ctx, g).ok


@pytest.mark.parametrize("name", ["B3", "B4", "U2_4", "K4"])
def test_projection_formula_on_chain_monomials(name):
    """y = h_G^rk(G) h_E^(r-1-rk G) pairs to 1 on both sides."""
    ctx = context(name, "augmented")
    m = ctx.lattice
    for g in proper_flats(ctx):
        y = (h(g, m.rank[g]) if g != m.bottom else Polynomial.constant(1)) * h(m.top, m.r - 1 - m.rank[g])
        assert projection_degrees(ctx, g, y) == (1, 1)


def test_projection_formula_wrong_degree_is_zero():
    ctx = context("B3", "augmented")
    assert projection_degrees(ctx, 1, h(7)) == (0, 0)


@pytest.mark.parametrize("name", ["B2", "B3", "U2_4"])
def test_projection_formula_random(name, mode):
    ctx = context(name, mode)
    rng = random.Random(5)
    d = ctx.top_degree - 1
    for g in proper_flats(ctx):
        for _ in range(15):
            assert verify_projection_formula(ctx, g, random_polynomial(ctx, d, rng))


@pytest.mark.parametrize("name", SMALL)
def test_x_restriction(name, mode):
    ctx = context(name, mode)
    for g in proper_flats(ctx):
        assert verify_x_restriction(ctx, g).ok
        assert verify_x_restriction_remark(ctx, g).ok


def test_tensor_degree_of_one():
    ctx = context("B2", "augmented")
    t = phi_target(ctx, 1)
    # M^G is rank 1 and M_G is rank 1: deg(h_G (x) 1) = 1
    assert t.degree(t.embed_left(h(t.to_left[1]))) == 1
    assert t.degree(t.embed_left(Polynomial.monomial(ONE))) == 0
