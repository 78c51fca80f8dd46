"""Truncated p-adic integers, vertices of the p-adic tree, and characters of Z_p."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

#: Valuation of zero.
INFINITY = math.inf


class Prime(int):
    """An integer checked to be prime at construction."""

    def __new__(cls, p: int) -> "Prime":
        if isinstance(p, Prime):
            return p
        if isinstance(p, bool) or int(p) != p:
            raise ValueError(f"prime must be an integer, got {p!r}")
        p = int(p)
        if p < 2 or any(p % d == 0 for d in range(2, math.isqrt(p) + 1)):
            raise ValueError(f"{p} is not prime")
        return super().__new__(cls, p)


def valuation(k: int, p: int) -> tuple[float | int, int]:
    """Split ``k = unit * p**alpha`` with ``p`` not dividing ``unit``.

    Returns ``(alpha, unit)``; for ``k == 0`` returns ``(INFINITY, 0)``.
    """
    p = Prime(p)
    if k < 0:
        raise ValueError("valuation is defined here for nonnegative integers")
    if k == 0:
        return INFINITY, 0
    alpha = 0
    while k % p == 0:
        k //= p
        alpha += 1
    return alpha, k


def padic_norm(k: int, p: int) -> Fraction:
    alpha, _ = valuation(k, p)
    if alpha == INFINITY:
        return Fraction(0)
    return Fraction(1, int(p) ** alpha)


@dataclass(frozen=True)
class PAdicApprox:
    """A p-adic integer known to ``depth`` digits, stored little-endian.

    Represents the ball of radius ``p**-depth`` around ``sum(d_i p**i)``.
    """

    p: Prime
    digits: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "p", Prime(self.p))
        object.__setattr__(self, "digits", tuple(int(d) for d in self.digits))
        bad = [d for d in self.digits if not 0 <= d < self.p]
        if bad:
            raise ValueError(f"digits {bad} out of range for p={self.p}")

    @property
    def depth(self) -> int:
        return len(self.digits)

    @classmethod
    def from_int(cls, value: int, p: int, depth: int) -> "PAdicApprox":
        """Truncate the nonnegative integer ``value`` to ``depth`` base-p digits."""
        if value < 0:
            raise ValueError("negative integers are not supported")
        p = Prime(p)
        digits = []
        for _ in range(depth):
            value, d = divmod(value, p)
            digits.append(d)
        return cls(p, tuple(digits))

    @classmethod
    def from_digit_string(cls, text: str, p: int) -> "PAdicApprox":
        """Parse little-endian base-p digits, e.g. ``"01"`` is 2 for p=2."""
        p = Prime(p)
        try:
            digits = [int(ch, 36) for ch in text.strip()]
        except ValueError:
            raise ValueError(f"invalid digit string {text!r}") from None
        return cls(p, tuple(digits))

    def to_int(self) -> int:
        return sum(d * self.p**i for i, d in enumerate(self.digits))

    def truncate(self, n: int) -> "PAdicApprox":
        if n > self.depth:
            raise ValueError(f"cannot truncate depth {self.depth} to {n}")
        return PAdicApprox(self.p, self.digits[:n])

    def valuation(self) -> float | int:
        """Index of the first nonzero digit, ``INFINITY`` if all known digits vanish."""
        for i, d in enumerate(self.digits):
            if d:
                return i
        return INFINITY

    def norm(self) -> Fraction:
        alpha = self.valuation()
        if alpha == INFINITY:
            return Fraction(0)
        return Fraction(1, self.p**alpha)


def _check_compatible(x: PAdicApprox, y: PAdicApprox) -> None:
    if x.p != y.p:
        raise ValueError(f"primes differ: {x.p} != {y.p}")
    if x.depth != y.depth:
        raise ValueError(f"depths differ: {x.depth} != {y.depth}")


def first_difference(x: PAdicApprox, y: PAdicApprox) -> int | None:
    """Index of the first digit where ``x`` and ``y`` differ, or None."""
    _check_compatible(x, y)
    for i, (a, b) in enumerate(zip(x.digits, y.digits)):
        if a != b:
            return i
    return None


def padic_distance(x: PAdicApprox, y: PAdicApprox) -> Fraction:
    """``|x - y|_p`` as an exact rational; 0 when the points agree to full depth."""
    m = first_difference(x, y)
    if m is None:
        return Fraction(0)
    return Fraction(1, x.p**m)


def ball_representative(x: PAdicApprox, n: int) -> int:
    """The unique integer ``0 <= k < p**n`` in the depth-``n`` ball containing ``x``."""
    if not 0 <= n <= x.depth:
        raise ValueError(f"level {n} outside 0..{x.depth}")
    return sum(d * x.p**i for i, d in enumerate(x.digits[:n]))


def character_eval(m: int, l: int, k: int, p: int) -> complex:
    """``exp(2 pi i {l k / p**m})``, the character of Z_p indexed by ``(m, l)`` at ``k``."""
    p = Prime(p)
    q = p**m
    if m < 0 or not 0 <= l < q or k < 0:
        raise ValueError(f"invalid character arguments m={m}, l={l}, k={k}")
    r = (k * l) % q
    if r == 0:
        return 1 + 0j
    # exact quarter turns keep the trivial examples exact
    if 4 * r % q == 0:
        return (1j) ** (4 * r // q)
    return cmath.exp(2j * math.pi * r / q)


@dataclass(frozen=True, order=True)
class Vertex:
    """The ball ``(level, index)`` of the p-adic tree."""

    level: int
    index: int

    def check(self, p: int) -> "Vertex":
        if self.level < 0 or not 0 <= self.index < p**self.level:
            raise ValueError(f"{self} is not a vertex of the {p}-adic tree")
        return self

    def weight(self, p: int) -> Fraction:
        return Fraction(1, p**self.level)


def children(v: Vertex, p: int) -> list[Vertex]:
    p = Prime(p)
    v.check(p)
    step = p**v.level
    return [Vertex(v.level + 1, v.index + i * step) for i in range(p)]


def parent(v: Vertex, p: int) -> Vertex:
    p = Prime(p)
    v.check(p)
    if v.level == 0:
        raise ValueError("the root has no parent")
    return Vertex(v.level - 1, v.index % p ** (v.level - 1))
