import numpy as np
import pytest
from hypothesis import given, strategies as st

from padic_spectral.harmonic import (
    level_dft,
    level_exponent,
    level_idft,
    naive_dft,
    root_powers,
    tree_fourier,
    tree_fourier_inverse,
)
from padic_spectral.tree_hilbert import TreeFunction, random_tree_function, weighted_norm

levels = st.sampled_from([(2, n) for n in range(9)] + [(3, n) for n in range(6)] + [(5, n) for n in range(4)])


def rand_vec(rng, size):
    return rng.standard_normal(size) + 1j * rng.standard_normal(size)


def test_level_exponent():
    assert level_exponent(27, 3) == 3
    assert level_exponent(1, 5) == 0
    with pytest.raises(ValueError):
        level_exponent(12, 2)
    with pytest.raises(ValueError):
        level_dft(np.ones(6), 2)
    with pytest.raises(ValueError):
        level_idft(np.ones(10), 3)


@pytest.mark.parametrize("p, n", [(2, 3), (3, 2), (5, 2)])
def test_constant_and_delta(p, n):
    q = p**n
    out = level_dft(np.full(q, 2.5 - 1j), p)
    assert np.allclose(out, np.r_[2.5 - 1j, np.zeros(q - 1)], atol=1e-14)
    delta = np.zeros(q)
    delta[0] = 1
    assert np.allclose(level_dft(delta, p), np.full(q, p**-n), rtol=0, atol=1e-15)
    assert np.allclose(level_idft(np.r_[4.0, np.zeros(q - 1)], p), np.full(q, 4.0), atol=1e-14)


@pytest.mark.parametrize("p, n, l", [(2, 3, 5), (3, 2, 4), (5, 2, 7)])
def test_single_coefficient_gives_character(p, n, l):
    q = p**n
    coeffs = np.zeros(q, complex)
    coeffs[l] = 1
    k = np.arange(q)
    assert np.allclose(level_idft(coeffs, p), np.exp(2j * np.pi * k * l / q), atol=1e-13)


def test_naive_agreement_p3_n2():
    rng = np.random.default_rng(0)
    v = rand_vec(rng, 9)
    assert np.max(np.abs(level_dft(v, 3) - naive_dft(v, 3))) < 1e-10


@pytest.mark.parametrize("p, nmax", [(2, 6), (3, 6), (5, 4)])
def test_fft_matches_naive_all_levels(p, nmax):
    rng = np.random.default_rng(p)
    for n in range(nmax + 1):
        v = rand_vec(rng, p**n)
        assert np.max(np.abs(level_dft(v, p) - naive_dft(v, p))) < 1e-10
        assert np.max(np.abs(level_idft(v, p) - naive_dft(v, p, inverse=True))) < 1e-10 * p**n


@given(st.integers(0, 2**32), levels)
def test_round_trip_and_parseval_per_level(seed, pn):
    p, n = pn
    v = rand_vec(np.random.default_rng(seed), p**n)
    fhat = level_dft(v, p)
    assert np.max(np.abs(level_idft(fhat, p) - v)) <= 1e-10 * max(1, np.max(np.abs(v)))
    lhs = np.sum(np.abs(v) ** 2) * float(p) ** -n
    rhs = np.sum(np.abs(fhat) ** 2)
    assert abs(lhs - rhs) <= 1e-10 * lhs


@pytest.mark.parametrize("p, j, n", [(2, 2, 4), (3, 1, 3), (5, 2, 2)])
def test_geometric_sum_concentrates(p, j, n):
    """k -> exp(2 pi i k s / p**j) on level n has one nonzero coefficient, at l = s p**(n-j)."""
    q = p**n
    k = np.arange(q)
    for s in range(p**j):
        out = level_dft(np.exp(2j * np.pi * k * s / p**j), p)
        target = s * p ** (n - j)
        mask = np.arange(q) != target
        assert np.max(np.abs(out[mask])) < 1e-10
        assert abs(out[target] - 1) < 1e-10


def test_root_powers_accuracy():
    for order in (2, 3, 8, 243, 2**14, 5**6):
        w = root_powers(order, order)
        exact = np.exp(-2j * np.pi * np.arange(order) / order)
        assert np.max(np.abs(w - exact)) < 1e-13


def test_tree_fourier_constant():
    fhat = tree_fourier(TreeFunction.constant(3, 4))
    for n, level in enumerate(fhat.levels):
        assert abs(level[0] - 1) < 1e-14
        assert np.max(np.abs(level[1:]), initial=0) < 1e-14


@given(st.integers(0, 2**32), st.sampled_from([(2, 8), (3, 5), (5, 3)]))
def test_tree_fourier_parseval_linearity_inverse(seed, shape):
    p, N = shape
    f = random_tree_function(seed, p, N)
    g = random_tree_function(seed + 7, p, N)
    fh = tree_fourier(f)
    assert fh.side == "fourier"
    assert abs(weighted_norm(f) - weighted_norm(fh)) <= 1e-10 * weighted_norm(f)
    a, b = 0.5 - 2j, 1.25
    lin = tree_fourier(a * f + b * g) - (a * fh + b * tree_fourier(g))
    assert weighted_norm(lin) <= 1e-10 * weighted_norm(f)
    back = tree_fourier_inverse(fh)
    assert back.max_abs_diff(f) <= 1e-10
    gh = random_tree_function(seed, p, N, "fourier")
    assert abs(weighted_norm(tree_fourier_inverse(gh)) - weighted_norm(gh)) <= 1e-10 * weighted_norm(gh)


def test_delta_fourier_data_gives_character():
    fh = TreeFunction.delta(2, 3, 3, 3, side="fourier")
    f = tree_fourier_inverse(fh)
    k = np.arange(8)
    assert np.allclose(f.levels[3], np.exp(2j * np.pi * 3 * k / 8), atol=1e-13)
    assert all(np.all(f.levels[n] == 0) for n in range(3))


def test_wrong_side():
    with pytest.raises(ValueError):
        tree_fourier(random_tree_function(0, 2, 2, "fourier"))
    with pytest.raises(ValueError):
        tree_fourier_inverse(random_tree_function(0, 2, 2, "vertex"))


def test_large_level_against_numpy():
    rng = np.random.default_rng(3)
    v = rand_vec(rng, 2**16)
    assert np.max(np.abs(level_dft(v, 2) - np.fft.fft(v) / v.size)) < 1e-12
