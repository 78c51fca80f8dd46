import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from padic_spectral.padic_core import (
    INFINITY,
    PAdicApprox,
    Prime,
    Vertex,
    ball_representative,
    character_eval,
    children,
    padic_distance,
    padic_norm,
    parent,
    valuation,
)


@pytest.mark.parametrize("p", [2, 3, 5, 7, 97])
def test_prime_accepts_primes(p):
    assert Prime(p) == p


@pytest.mark.parametrize("n", [0, 1, 4, 9, 15, 91, -3, 2.5])
def test_prime_rejects_non_primes(n):
    with pytest.raises(ValueError):
        Prime(n)


@pytest.mark.parametrize(
    "k, p, alpha, unit, norm",
    [(12, 2, 2, 3, Fraction(1, 4)), (0, 5, INFINITY, 0, Fraction(0)), (9, 3, 2, 1, Fraction(1, 9))],
)
def test_valuation_examples(k, p, alpha, unit, norm):
    assert valuation(k, p) == (alpha, unit)
    assert padic_norm(k, p) == norm


@given(st.integers(1, 10**9), st.sampled_from([2, 3, 5, 7]))
def test_valuation_decomposes(k, p):
    alpha, unit = valuation(k, p)
    assert unit * p**alpha == k
    assert unit % p != 0


def test_padic_distance_examples():
    x = PAdicApprox.from_int(7, 2, 4)
    assert padic_distance(x, x) == 0
    assert padic_distance(PAdicApprox.from_int(1, 2, 3), PAdicApprox.from_int(3, 2, 3)) == Fraction(1, 2)
    assert padic_distance(PAdicApprox.from_int(2, 5, 3), PAdicApprox.from_int(27, 5, 3)) == Fraction(1, 25)


def test_padic_distance_mismatch():
    with pytest.raises(ValueError):
        padic_distance(PAdicApprox.from_int(1, 2, 3), PAdicApprox.from_int(1, 3, 3))
    with pytest.raises(ValueError):
        padic_distance(PAdicApprox.from_int(1, 2, 3), PAdicApprox.from_int(1, 2, 4))


@pytest.mark.parametrize("p, depth", [(2, 4), (3, 3)])
def test_ultrametric_exhaustive(p, depth):
    pts = [PAdicApprox(p, d) for d in itertools.product(range(p), repeat=depth)]
    for x, y, z in itertools.product(pts, repeat=3):
        assert padic_distance(x, z) <= max(padic_distance(x, y), padic_distance(y, z))


def test_digits_validated():
    with pytest.raises(ValueError):
        PAdicApprox(3, (0, 3))
    assert PAdicApprox.from_digit_string("01", 2).to_int() == 2
    assert PAdicApprox(2, (1, 0, 1)).depth == 3


def test_ball_representative_examples():
    assert ball_representative(PAdicApprox.from_int(13, 2, 5), 2) == 1
    assert ball_representative(PAdicApprox.from_int(13, 2, 5), 0) == 0
    assert ball_representative(PAdicApprox.from_int(7, 3, 3), 2) == 7
    with pytest.raises(ValueError):
        ball_representative(PAdicApprox.from_int(7, 3, 3), 4)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_ball_partition(p):
    depth = 3
    pts = [PAdicApprox(p, d) for d in itertools.product(range(p), repeat=depth)]
    for n in range(depth + 1):
        counts = {}
        for x in pts:
            counts[ball_representative(x, n)] = counts.get(ball_representative(x, n), 0) + 1
        assert sorted(counts) == list(range(p**n))
        assert set(counts.values()) == {p ** (depth - n)}


def test_character_examples():
    assert character_eval(1, 1, 1, 2) == -1
    assert character_eval(0, 0, 17, 5) == 1
    assert character_eval(2, 1, 1, 2) == 1j


@given(st.sampled_from([2, 3, 5]), st.integers(0, 4), st.data())
def test_character_multiplicative(p, m, data):
    l = data.draw(st.integers(0, p**m - 1))
    k1, k2 = data.draw(st.integers(0, 10**6)), data.draw(st.integers(0, 10**6))
    lhs = character_eval(m, l, k1 + k2, p)
    rhs = character_eval(m, l, k1, p) * character_eval(m, l, k2, p)
    assert abs(lhs - rhs) < 1e-12
    assert abs(abs(lhs) - 1) < 1e-12


def test_children_examples():
    assert children(Vertex(0, 0), 2) == [Vertex(1, 0), Vertex(1, 1)]
    assert children(Vertex(1, 1), 2) == [Vertex(2, 1), Vertex(2, 3)]
    assert children(Vertex(1, 2), 3) == [Vertex(2, 2), Vertex(2, 5), Vertex(2, 8)]


def test_parent_examples():
    assert parent(Vertex(2, 3), 2) == Vertex(1, 1)
    assert parent(Vertex(1, 0), 2) == Vertex(0, 0)
    assert parent(Vertex(2, 5), 3) == Vertex(1, 2)
    with pytest.raises(ValueError):
        parent(Vertex(0, 0), 2)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_children_parent_round_trip(p):
    for n in range(6 if p < 5 else 5):
        for k in range(p**n):
            v = Vertex(n, k)
            kids = children(v, p)
            assert len(set(kids)) == p
            for c in kids:
                assert c.index < p ** (n + 1)
                assert parent(c, p) == v
            if n:
                assert v in children(parent(v, p), p)


def test_vertex_weight_and_check():
    assert Vertex(3, 5).weight(2) == Fraction(1, 8)
    with pytest.raises(ValueError):
        Vertex(1, 2).check(2)
