"""Level-wise discrete Fourier transform on V_n = Z/p^n Z.

The forward transform carries the ``p**-n`` normalization,
``fhat_n(l) = p**-n sum_k f_n(k) exp(-2 pi i k l / p**n)``, and the inverse
carries none.  Sizes are exact powers of p, so an iterative radix-p
Cooley-Tukey transform is used; :func:`naive_dft` is the O(p^2n) reference.
"""

from __future__ import annotations

import math

import numpy as np

from .padic_core import Prime
from .tree_hilbert import TreeFunction

# twiddle powers are accumulated in blocks of this length, then renormalized
_BLOCK = 64


def level_exponent(size: int, p: int) -> int:
    """``n`` with ``p**n == size``; raises if ``size`` is not a power of ``p``."""
    n, q = 0, 1
    while q < size:
        q *= p
        n += 1
    if q != size:
        raise ValueError(f"length {size} is not a power of {p}")
    return n


def root_powers(order: int, count: int, sign: int = -1) -> np.ndarray:
    out = _root_powers(order, count, sign)
    # quarter turns are exact
    j = np.arange(0, count, 1)
    quarter = (4 * j) % order == 0
    out[quarter] = (sign * 1j) ** ((4 * j[quarter]) // order % 4)
    return out


def _root_powers(order: int, count: int, sign: int = -1) -> np.ndarray:
    """``w**j`` for ``j < count`` with ``w = exp(sign * 2 pi i / order)``.

    Powers come from repeated multiplication by one accurately computed root
    of unity, renormalized to unit modulus after every block.
    """
    if count <= 0:
        return np.ones(0, complex)
    theta = sign * 2.0 * math.pi / order
    w = complex(math.cos(theta), math.sin(theta))
    block = np.cumprod(np.concatenate(([1.0 + 0j], np.full(min(count, _BLOCK) - 1, w))))
    block /= np.abs(block)
    if count <= _BLOCK:
        return block
    stride = block[-1] * w  # w**_BLOCK
    starts = np.cumprod(np.concatenate(([1.0 + 0j], np.full(-(-count // _BLOCK) - 1, stride))))
    starts /= np.abs(starts)
    out = (starts[:, None] * block[None, :]).reshape(-1)[:count]
    return out / np.abs(out)


def _fft(values: np.ndarray, p: int, sign: int) -> np.ndarray:
    """Unnormalized radix-p transform ``X[k] = sum_j x[j] w**(jk)``, ``w = exp(sign 2 pi i/N)``."""
    size = values.size
    n = level_exponent(size, p)
    # row j of cur holds the transform of values[j::rows]
    cur = values.astype(complex).reshape(size, 1)
    butterfly = root_powers(p, p, sign)[np.outer(np.arange(p), np.arange(p)) % p]
    for s in range(1, n + 1):
        length = p**s
        sub = length // p
        rows = size // length
        tw = root_powers(length, length, sign)
        tw = tw[np.outer(np.arange(p), np.arange(sub))]
        y = cur.reshape(p, rows, sub) * tw[:, None, :]
        cur = np.einsum("qr,rjt->jqt", butterfly, y).reshape(rows, length)
    return cur.reshape(size)


def level_dft(values, p: int) -> np.ndarray:
    """Forward transform of one level, normalization ``p**-n`` included."""
    p = Prime(p)
    values = np.asarray(values, dtype=complex).reshape(-1)
    return _fft(values, p, -1) / values.size


def level_idft(coeffs, p: int) -> np.ndarray:
    """Inverse of :func:`level_dft`: ``f_n(k) = sum_l fhat_n(l) exp(2 pi i k l / p**n)``."""
    p = Prime(p)
    coeffs = np.asarray(coeffs, dtype=complex).reshape(-1)
    return _fft(coeffs, p, +1)


def naive_dft(values, p: int, inverse: bool = False) -> np.ndarray:
    """Direct double-loop evaluation of either transform; a reference only."""
    values = np.asarray(values, dtype=complex).reshape(-1)
    size = values.size
    level_exponent(size, p)
    out = np.zeros(size, complex)
    sign = 1 if inverse else -1
    for l in range(size):
        acc = 0j
        for k in range(size):
            acc += values[k] * np.exp(sign * 2j * np.pi * ((k * l) % size) / size)
        out[l] = acc if inverse else acc / size
    return out


def tree_fourier(f: TreeFunction) -> TreeFunction:
    """The tree Fourier transform H -> H^, applied level by level."""
    if f.side != "vertex":
        raise ValueError("tree_fourier expects a vertex-side function")
    return TreeFunction(f.p, "fourier", tuple(level_dft(v, f.p) for v in f.levels))


def tree_fourier_inverse(fhat: TreeFunction) -> TreeFunction:
    if fhat.side != "fourier":
        raise ValueError("tree_fourier_inverse expects a Fourier-side function")
    return TreeFunction(fhat.p, "vertex", tuple(level_idft(v, fhat.p) for v in fhat.levels))
