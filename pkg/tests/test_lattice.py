import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chowring.errors import CycleDetected, NotASemilattice
from chowring.lattice import (
    Poset,
    as_meet_semilattice,
    build_poset,
    chain_f_vector,
    covers,
    enumerate_meet_semilattices,
    enumerate_posets,
)


def chain(n):
    return build_poset([(i, i + 1) for i in range(n - 1)], n)


def diamond():
    return build_poset([(0, 1), (0, 2), (1, 3), (2, 3)], 4)


def test_build_poset_two_chain():
    p = build_poset([(0, 1)], 2)
    assert p.le(0, 1) and not p.le(1, 0)


def test_build_poset_singleton():
    p = build_poset([], 1)
    assert p.size == 1 and p.le(0, 0)


def test_build_poset_cycle_rejected():
    with pytest.raises(CycleDetected):
        build_poset([(0, 1), (1, 0)], 2)


def test_build_poset_closes_transitively():
    p = build_poset([(0, 1), (1, 2), (2, 3)], 4)
    assert p.le(0, 3) and p.lt(1, 3)


def test_poset_rejects_nontransitive_table():
    leq = np.eye(3, dtype=bool)
    leq[0, 1] = leq[1, 2] = True
    with pytest.raises(Exception):
        Poset(leq)


def test_chain_meets_are_minima():
    s = as_meet_semilattice(chain(3))
    for x, y in itertools.product(range(3), repeat=2):
        assert s.meet(x, y) == min(x, y)


def test_diamond_meet():
    s = as_meet_semilattice(diamond())
    assert s.meet(1, 2) == 0
    assert s.bottom == 0


def test_bowtie_is_not_a_semilattice():
    # 0 and 1 are both maximal lower bounds of 2 and 3; 4 sits below everything
    p = build_poset([(4, 0), (4, 1), (0, 2), (0, 3), (1, 2), (1, 3)], 5)
    with pytest.raises(NotASemilattice) as exc:
        as_meet_semilattice(p)
    assert set(exc.value.pair) == {2, 3}


def test_covers_boolean_bottom():
    s = as_meet_semilattice(diamond())
    assert covers(s, 0) == {1, 2}
    assert covers(s, 3) == set()
    assert covers(as_meet_semilattice(chain(3)), 0) == {1}


def test_f_vectors():
    assert chain_f_vector(build_poset([], 2)).f_vector == (1, 2)
    assert chain_f_vector(chain(3)).f_vector == (1, 3, 3, 1)
    assert chain_f_vector(build_poset([], 1)).f_vector == (1, 1)


def brute_f_vector(p):
    counts = [0] * (p.size + 1)
    for k in range(p.size + 1):
        for sub in itertools.combinations(range(p.size), k):
            if p.is_chain(sub):
                counts[k] += 1
    while counts and counts[-1] == 0:
        counts.pop()
    return tuple(counts)


def test_f_vector_matches_subset_enumeration():
    for p in enumerate_posets(4):
        assert chain_f_vector(p).f_vector == brute_f_vector(p)


def test_meet_semilattice_count():
    # lattices on 2..6 elements: 1 + 1 + 2 + 5 + 15
    assert len(enumerate_meet_semilattices(5)) == 24


@pytest.mark.parametrize("s", enumerate_meet_semilattices(4), ids=lambda s: f"n{s.size}")
def test_meet_axioms(s):
    for x in range(s.size):
        assert s.meet(x, x) == x
        assert s.meet(x, s.bottom) == s.bottom
        assert s.le(s.bottom, x)
        for y in range(s.size):
            m = s.meet(x, y)
            assert m == s.meet(y, x)
            assert s.le(m, x) and s.le(m, y)
            for z in range(s.size):
                if s.le(z, x) and s.le(z, y):
                    assert s.le(z, m)


@pytest.mark.parametrize("p", enumerate_posets(4), ids=lambda p: f"n{p.size}")
def test_covers_reach_everything_above(p):
    for x in range(p.size):
        cov = covers(p, x)
        for y in range(p.size):
            if p.lt(x, y):
                assert any(p.le(z, y) for z in cov)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_f_vector_invariant_under_relabeling(seed):
    rng = random.Random(seed)
    posets = enumerate_posets(4)
    p = posets[rng.randrange(len(posets))]
    perm = list(range(p.size))
    rng.shuffle(perm)
    assert chain_f_vector(p.relabel(perm)).f_vector == chain_f_vector(p).f_vector
