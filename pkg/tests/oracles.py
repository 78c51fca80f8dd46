"""Independent reference computations used by the test-suite.

None of these call into the code paths they check.
"""

import cmath
import itertools
import math

import numpy as np


def naive_weighted_norm(levels, p, side):
    total = 0.0
    for n, level in enumerate(levels):
        w = p**-n if side == "vertex" else 1.0
        for z in level:
            total += w * abs(z) ** 2
    return math.sqrt(total)


def naive_inner(f_levels, g_levels, p, side):
    total = 0j
    for n, (a, b) in enumerate(zip(f_levels, g_levels)):
        w = p**-n if side == "vertex" else 1.0
        for za, zb in zip(a, b):
            total += w * za.conjugate() * zb
    return total


def padic_val(k, p):
    if k == 0:
        return math.inf
    a = 0
    while k % p == 0:
        k //= p
        a += 1
    return a


def rho(a, b, p):
    """|a - b|_p for integers."""
    v = padic_val(abs(a - b), p)
    return 0.0 if v == math.inf else float(p) ** -v


def brute_lipschitz(values, p, m):
    """sup |phi(x) - phi(y)| / |x - y|_p over all pairs of integers below p**m."""
    best = 0.0
    q = p**m
    for x in range(q):
        for y in range(x + 1, q):
            best = max(best, abs(values[x] - values[y]) / rho(x, y, p))
    return best


def brute_spectral(values, p, m, extra_levels=2):
    """Sup formula for the spectral seminorm, scanning levels past the constancy level too."""
    q = p**m
    best = 0.0
    for n in range(m + extra_levels):
        for k in range(p**n):
            s = 0.0
            for i in range(1, p):
                a, b = values[k % q], values[(k + i * p**n) % q]
                s += abs(a - b) ** 2 / rho(k, k + i * p**n, p) ** 2
            best = max(best, s / p)
    return math.sqrt(best)


def dinv_explicit(ghat_levels, p):
    """Sum over chains written with the valuation split k = l p**alpha; k = 0 uses the zero chain."""
    N = len(ghat_levels) - 1
    out = []
    for n in range(N + 1):
        level = []
        for k in range(p**n):
            if k == 0:
                alpha, l = 0, 0
            else:
                alpha, l = padic_val(k, p), k
                while l % p == 0:
                    l //= p
            acc = 0j
            for i in range(n, N + 1):
                acc += ghat_levels[i][l * p ** (alpha - n + i)] / p**i
            level.append(acc)
        out.append(np.array(level))
    return out


def dense_matrix(apply, p, depth_in, side, tf_cls):
    """Columns of a linear map on tree functions, applied to unit vectors."""
    size = (p ** (depth_in + 1) - 1) // (p - 1)
    cols = []
    for j in range(size):
        e = np.zeros(size, complex)
        e[j] = 1
        cols.append(apply(tf_cls.from_vector(e, p, depth_in, side)).to_vector())
    return np.array(cols).T


def exact_spectral_distance(X, Y, p, N):
    """Closed form of sup{phi(X) - phi(Y) : L_D(phi) <= 1} over depth-N locally constant phi.

    In sibling-difference coordinates the constraint set is a product of
    disjoint balls of radius sqrt(p) p**-n, and the objective touches one
    edge per nonzero digit past the first difference, plus one or two edges
    at the first difference.
    """
    xd = [(X // p**i) % p for i in range(N)]
    yd = [(Y // p**i) % p for i in range(N)]
    s = next((i for i in range(N) if xd[i] != yd[i]), None)
    if s is None:
        return 0.0
    first = math.sqrt(2) if xd[s] and yd[s] else 1.0
    total = first * p**-s
    for n in range(s + 1, N):
        total += (bool(xd[n]) + bool(yd[n])) * p**-n
    return math.sqrt(p) * total


def cvxpy_spectral_distance(X, Y, p, N):
    """Solve the distance program directly on the values phi(0..p**N-1) with cvxpy."""
    import cvxpy as cp

    q = p**N
    phi = cp.Variable(q)
    cons = [phi[0] == 0]
    for n in range(N):
        for k in range(p**n):
            diffs = cp.hstack([phi[k] - phi[k + i * p**n] for i in range(1, p)])
            cons.append(cp.sum_squares(diffs) * p ** (2 * n) / p <= 1)
    prob = cp.Problem(cp.Maximize(phi[X] - phi[Y]), cons)
    prob.solve(solver=cp.CLARABEL)
    return prob.value, np.asarray(phi.value)


def all_digit_vectors(p, n):
    return itertools.product(range(p), repeat=n)


def character(m, l, k, p):
    return cmath.exp(2j * math.pi * ((k * l) % p**m) / p**m)


def direct_dft(values, p):
    """Forward level transform by direct summation, one frequency at a time (with the 1/size factor)."""
    values = np.asarray(values, dtype=complex)
    q = values.size
    table = np.exp(-2j * np.pi * np.arange(q) / q)
    k = np.arange(q)
    return np.array([values @ table[(k * l) % q] for l in range(q)]) / q
