"""The forward-derivative operator D on the p-adic tree.

Truncation conventions: ``D`` and ``D^`` map depth ``N`` to depth ``N-1``
(the deepest level is consumed), the adjoint maps depth ``N-1`` back to depth
``N``, and the inverse keeps the depth, summing its chains up to level ``N``.
On the Fourier side every chain ``(n, k) -> (n+1, p k)`` stays inside one
character class, which is what the inverse, the kernel and the boundary
limits below all exploit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .harmonic import level_dft, tree_fourier, tree_fourier_inverse
from .padic_core import Prime, valuation
from .tree_hilbert import GradedPair, TreeFunction

DEFAULT_KERNEL_TOL = 1e-10


def _require_side(f: TreeFunction, side: str, name: str) -> None:
    if f.side != side:
        raise ValueError(f"{name} expects a {side}-side function, got {f.side}")


def _require_depth(f: TreeFunction, name: str) -> None:
    if f.depth < 1:
        raise ValueError(f"{name} needs depth >= 1, got depth {f.depth}")


def apply_D(f: TreeFunction) -> TreeFunction:
    """``Df_n(l) = p**n (f_n(l) - mean_j f_{n+1}(l + j p**n))`` for ``n < N``."""
    _require_side(f, "vertex", "apply_D")
    _require_depth(f, "apply_D")
    p = f.p
    out = []
    for n in range(f.depth):
        # children of (n, l) are l + j p**n: the columns of the (p, p**n) reshape
        child_mean = f.levels[n + 1].reshape(p, p**n).mean(axis=0)
        out.append(float(p) ** n * (f.levels[n] - child_mean))
    return TreeFunction(p, "vertex", tuple(out))


def apply_D_fourier(fhat: TreeFunction) -> TreeFunction:
    """``D^ fhat_n(k) = p**n (fhat_n(k) - fhat_{n+1}(p k))`` for ``n < N``."""
    _require_side(fhat, "fourier", "apply_D_fourier")
    _require_depth(fhat, "apply_D_fourier")
    p = fhat.p
    out = []
    for n in range(fhat.depth):
        out.append(float(p) ** n * (fhat.levels[n] - fhat.levels[n + 1][::p]))
    return TreeFunction(p, "fourier", tuple(out))


def apply_D_adjoint_fourier(ghat: TreeFunction) -> TreeFunction:
    """Exact adjoint in H^ of the truncated ``D^``: depth ``N-1`` to depth ``N``.

    ``(D^* g)_n(k) = p**n g_n(k) - p**(n-1) g_{n-1}(k/p)`` when ``p | k``,
    and ``p**n g_n(k)`` otherwise, with ``g_N = 0``.
    """
    _require_side(ghat, "fourier", "apply_D_adjoint_fourier")
    p = ghat.p
    depth = ghat.depth + 1
    out = []
    for n in range(depth + 1):
        level = np.zeros(p**n, complex)
        if n <= ghat.depth:
            level += float(p) ** n * ghat.levels[n]
        if n >= 1:
            level[::p] -= float(p) ** (n - 1) * ghat.levels[n - 1]
        out.append(level)
    return TreeFunction(p, "fourier", tuple(out))


def apply_D_adjoint(g: TreeFunction) -> TreeFunction:
    """Vertex-side adjoint in H, by unitary equivalence with the Fourier side."""
    _require_side(g, "vertex", "apply_D_adjoint")
    return tree_fourier_inverse(apply_D_adjoint_fourier(tree_fourier(g)))


def apply_calD(x: GradedPair) -> GradedPair:
    """The odd operator ``(f, g) -> (D g, D^* f)`` on ``H + H``."""
    if x.minus.depth != x.plus.depth + 1:
        raise ValueError(
            f"graded pair needs depth(minus) = depth(plus) + 1, got {x.plus.depth} and {x.minus.depth}"
        )
    if x.plus.side == "fourier":
        return GradedPair(apply_D_fourier(x.minus), apply_D_adjoint_fourier(x.plus))
    return GradedPair(apply_D(x.minus), apply_D_adjoint(x.plus))


def apply_D_inverse(ghat: TreeFunction) -> TreeFunction:
    """Truncated inverse ``fhat_n(k) = sum_{n<=i<=N} ghat_i(l p**(a-n+i)) / p**i``, ``k = l p**a``.

    The chain through ``(n, k)`` continues at ``(n+1, p k)``, so the sum is
    accumulated from the deepest level upwards.  ``k = 0`` follows the zero
    chain.
    """
    _require_side(ghat, "fourier", "apply_D_inverse")
    p = ghat.p
    out = [None] * (ghat.depth + 1)
    acc = ghat.levels[-1] / float(p) ** ghat.depth
    out[-1] = acc
    for n in range(ghat.depth - 1, -1, -1):
        acc = ghat.levels[n] / float(p) ** n + acc[::p]
        out[n] = acc
    return TreeFunction(p, "fourier", tuple(out))


def apply_D_inverse_adjoint(hhat: TreeFunction) -> TreeFunction:
    """Adjoint of :func:`apply_D_inverse` in H^.

    ``u_i = h_i + (u_{i-1} placed at indices p k)`` accumulated from the root,
    then ``(D^-1)^* h_i = u_i / p**i``.
    """
    _require_side(hhat, "fourier", "apply_D_inverse_adjoint")
    p = hhat.p
    out = []
    acc = hhat.levels[0].copy()
    out.append(acc.copy())
    for i in range(1, hhat.depth + 1):
        nxt = hhat.levels[i].copy()
        nxt[::p] += acc
        acc = nxt
        out.append(acc / float(p) ** i)
    return TreeFunction(p, "fourier", tuple(out))


def hs_norm_squared(p: int, depth: int) -> float:
    """Squared Hilbert-Schmidt norm of the inverse truncated at ``depth``.

    Sums ``|K(n,k,i,r)|**2 = p**(-2i)`` over ``n <= i <= depth`` and the
    ``p**n`` vertices of each level, in exact rational arithmetic.
    """
    p = Prime(p)
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    # inner[n] = sum_{i=n}^{N} p^{-2i}
    total = Fraction(0)
    inner = Fraction(0)
    for n in range(depth, -1, -1):
        inner += Fraction(1, p ** (2 * n))
        total += p**n * inner
    return float(total)


def hs_norm_squared_limit(p: int) -> float:
    p = Prime(p)
    return float(1 / ((1 - Fraction(1, p)) * (1 - Fraction(1, p**2))))


def kernel_deviation(fhat: TreeFunction) -> float:
    """Largest ``|fhat_n(k) - fhat_{n+1}(p k)|`` over all chain links."""
    _require_side(fhat, "fourier", "kernel_deviation")
    dev = 0.0
    for n in range(fhat.depth):
        dev = max(dev, float(np.max(np.abs(fhat.levels[n] - fhat.levels[n + 1][:: fhat.p]))))
    return dev


def is_in_kernel(fhat: TreeFunction, tol: float = DEFAULT_KERNEL_TOL) -> bool:
    return kernel_deviation(fhat) <= tol


# -- distributions and unique continuation --------------------------------


def _check_key(p: int, m: int, l: int) -> None:
    if m == 0:
        if l != 0:
            raise ValueError(f"key (0, {l}): level 0 only has l = 0")
    elif m < 0 or not 0 < l < p**m or l % p == 0:
        raise ValueError(f"key ({m}, {l}) is not a primitive frequency for p={p}")


@dataclass(frozen=True)
class DistributionCoeffs:
    """Finitely many Fourier coefficients ``T_{m,l} = T(conj chi_{m,l})`` of a distribution.

    Keys are one per character class: ``(0, 0)``, and ``(m, l)`` with
    ``0 < l < p**m``, ``p`` not dividing ``l``.  Missing keys are zero.
    """

    p: Prime
    entries: dict = field(default_factory=dict)

    def __post_init__(self):
        p = Prime(self.p)
        object.__setattr__(self, "p", p)
        clean = {}
        for (m, l), value in self.entries.items():
            m, l = int(m), int(l)
            _check_key(p, m, l)
            clean[(m, l)] = complex(value)
        object.__setattr__(self, "entries", clean)

    @property
    def support_depth(self) -> int:
        return max((m for m, _ in self.entries), default=0)

    def __getitem__(self, key: tuple[int, int]) -> complex:
        _check_key(self.p, *key)
        return self.entries.get(key, 0j)

    def pair(self, phi) -> complex:
        """``T(phi)`` for a locally constant ``phi`` (a ``LocallyConstantFunction``).

        ``phi = sum phi^(m,l) chi_{m,l}`` and ``T(chi_{m,l}) = T_{m, -l mod p**m}``.
        """
        if phi.p != self.p:
            raise ValueError("prime mismatch")
        p = self.p
        coeffs = level_dft(phi.values, p)  # phi^ at level M, index l p^(M-m)
        total = 0j
        for (m, l), value in self.entries.items():
            if m > phi.level:
                continue  # phi^ vanishes beyond its constancy level
            minus_l = (-l) % p**m
            total += value * coeffs[minus_l * p ** (phi.level - m)]
        return total

    def to_dict(self) -> dict:
        return {
            "p": int(self.p),
            "entries": [
                {"m": m, "l": l, "re": v.real, "im": v.imag} for (m, l), v in sorted(self.entries.items())
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DistributionCoeffs":
        for key in ("p", "entries"):
            if key not in data:
                raise ValueError(f"missing field {key!r}")
        entries = {}
        for e in data["entries"]:
            entries[(e["m"], e["l"])] = complex(e["re"], e["im"])
        return cls(data["p"], entries)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "DistributionCoeffs":
        return cls.from_dict(json.loads(text))


def boundary_limit(fhat: TreeFunction, tol: float = DEFAULT_KERNEL_TOL) -> DistributionCoeffs:
    """Boundary distribution of a kernel element: ``T_{m,l} = fhat_m(l)`` for primitive ``l``.

    Exact zeros are left out of the returned coefficients.
    """
    dev = kernel_deviation(fhat)
    if dev > tol:
        raise ValueError(f"input is not in the kernel of D (deviation {dev:.3e} > {tol:.3e})")
    p = fhat.p
    entries = {}
    if fhat.levels[0][0] != 0:
        entries[(0, 0)] = fhat.levels[0][0]
    for m in range(1, fhat.depth + 1):
        for l in np.flatnonzero(fhat.levels[m]):
            if l % p:
                entries[(m, int(l))] = fhat.levels[m][l]
    return DistributionCoeffs(p, entries)


def kernel_from_distribution(T: DistributionCoeffs, depth: int) -> TreeFunction:
    """The kernel element of depth ``depth`` whose boundary limit is ``T``.

    ``g_m(l) = T_{m,l}`` for primitive ``l``, ``g_m(p**r k) = T_{m-r,k}``, and
    ``g_m(0) = T_{0,0}``.
    """
    if T.support_depth > depth:
        raise ValueError(f"distribution support reaches level {T.support_depth} > depth {depth}")
    p = T.p
    levels = [np.zeros(p**m, complex) for m in range(depth + 1)]
    for (m, l), value in T.entries.items():
        for r in range(depth - m + 1):
            levels[m + r][l * p**r] = value
    return TreeFunction(p, "fourier", tuple(levels))


def weak_boundary_pairing(f: TreeFunction, phi, n: int) -> complex:
    """``sum_{v in V_n} f_n(v) phi(v) p**-n`` for ``phi`` constant on depth-``n`` balls."""
    _require_side(f, "vertex", "weak_boundary_pairing")
    if f.p != phi.p:
        raise ValueError("prime mismatch")
    if not 0 <= n <= f.depth:
        raise ValueError(f"level {n} outside 0..{f.depth}")
    if phi.level > n:
        raise ValueError(f"phi is only constant at level {phi.level} > {n}")
    values = phi.on_level(n)
    return complex(np.sum(f.levels[n] * values) / float(f.p) ** n)


def reconstruct_from_primitive_coeffs(fhat: TreeFunction, n: int, k: int) -> complex:
    """``f_n(k)`` regrouped by character class.

    ``f_n(k) = fhat_n(0) + sum_{m=1..n} sum_{p | l fails, l < p**m} fhat_n(l p**(n-m)) e(k l / p**m)``.
    """
    _require_side(fhat, "fourier", "reconstruct_from_primitive_coeffs")
    p = fhat.p
    if not 0 <= n <= fhat.depth or not 0 <= k < p**n:
        raise ValueError(f"({n}, {k}) is not a vertex of the truncated tree")
    level = fhat.levels[n]
    total = complex(level[0])
    for m in range(1, n + 1):
        q = p**m
        l = np.arange(q)
        l = l[l % p != 0]
        phases = np.exp(2j * np.pi * ((k * l) % q) / q)
        total += complex(np.sum(level[l * p ** (n - m)] * phases))
    return total


def chain_start(n: int, k: int, p: int) -> tuple[int, int]:
    """Primitive class ``(m, l)`` of the chain through ``(n, k)``; ``(0, 0)`` for ``k = 0``."""
    alpha, l = valuation(k, p)
    if l == 0:
        return 0, 0
    return n - int(alpha), l
