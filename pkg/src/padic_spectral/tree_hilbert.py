"""Functions on the truncated p-adic tree and the spaces H = l2(V, w) and H^ = l2(V^).

A :class:`TreeFunction` holds one complex vector per level ``n = 0..depth``,
level ``n`` having ``p**n`` entries.  The ``side`` tag selects the norm:
vertex-side functions carry the weight ``p**-n`` on level ``n``, Fourier-side
functions are unweighted.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Literal

import numpy as np

from .padic_core import Prime

Side = Literal["vertex", "fourier"]
SIDES = ("vertex", "fourier")


@dataclass(frozen=True, eq=False)
class TreeFunction:
    p: Prime
    side: Side
    levels: tuple[np.ndarray, ...]

    def __post_init__(self):
        p = Prime(self.p)
        object.__setattr__(self, "p", p)
        if self.side not in SIDES:
            raise ValueError(f"side must be one of {SIDES}, got {self.side!r}")
        if len(self.levels) == 0:
            raise ValueError("a tree function needs at least level 0")
        levels = []
        for n, values in enumerate(self.levels):
            arr = np.array(values, dtype=complex).reshape(-1)
            if arr.size != p**n:
                raise ValueError(f"level {n} has {arr.size} entries, expected {p**n}")
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"level {n} has non-finite entries")
            arr.flags.writeable = False
            levels.append(arr)
        object.__setattr__(self, "levels", tuple(levels))

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    @property
    def size(self) -> int:
        return sum(v.size for v in self.levels)

    # -- constructors -------------------------------------------------------

    @classmethod
    def zeros(cls, p: int, depth: int, side: Side = "vertex") -> "TreeFunction":
        p = Prime(p)
        return cls(p, side, tuple(np.zeros(p**n, complex) for n in range(depth + 1)))

    @classmethod
    def constant(cls, p: int, depth: int, value: complex = 1.0) -> "TreeFunction":
        """The vertex-side function equal to ``value`` everywhere."""
        p = Prime(p)
        return cls(p, "vertex", tuple(np.full(p**n, value, complex) for n in range(depth + 1)))

    @classmethod
    def delta(cls, p: int, depth: int, level: int, index: int, side: Side = "vertex",
              value: complex = 1.0) -> "TreeFunction":
        f = cls.zeros(p, depth, side)
        return f.with_entry(level, index, value)

    @classmethod
    def from_vector(cls, vec: np.ndarray, p: int, depth: int, side: Side) -> "TreeFunction":
        p = Prime(p)
        vec = np.asarray(vec, dtype=complex)
        if vec.size != (p ** (depth + 1) - 1) // (p - 1):
            raise ValueError("vector length does not match (p, depth)")
        bounds = np.cumsum([0] + [p**n for n in range(depth + 1)])
        return cls(p, side, tuple(vec[a:b] for a, b in zip(bounds[:-1], bounds[1:])))

    def to_vector(self) -> np.ndarray:
        """Levels concatenated level-major, index-minor."""
        return np.concatenate(self.levels)

    # -- derived functions --------------------------------------------------

    def with_entry(self, level: int, index: int, value: complex) -> "TreeFunction":
        levels = [v.copy() for v in self.levels]
        levels[level][index] = value
        return TreeFunction(self.p, self.side, tuple(levels))

    def with_side(self, side: Side) -> "TreeFunction":
        return TreeFunction(self.p, side, self.levels)

    def truncate(self, depth: int) -> "TreeFunction":
        if not 0 <= depth <= self.depth:
            raise ValueError(f"cannot truncate depth {self.depth} to {depth}")
        return TreeFunction(self.p, self.side, self.levels[: depth + 1])

    def pad(self, depth: int) -> "TreeFunction":
        """Extend with zero levels up to ``depth``."""
        if depth < self.depth:
            raise ValueError(f"cannot pad depth {self.depth} to {depth}")
        extra = tuple(np.zeros(self.p**n, complex) for n in range(self.depth + 1, depth + 1))
        return TreeFunction(self.p, self.side, self.levels + extra)

    def zero_level(self, level: int) -> "TreeFunction":
        levels = list(self.levels)
        levels[level] = np.zeros_like(levels[level])
        return TreeFunction(self.p, self.side, tuple(levels))

    def _check_same_shape(self, other: "TreeFunction") -> None:
        if not isinstance(other, TreeFunction):
            raise TypeError(f"expected TreeFunction, got {type(other).__name__}")
        if (self.p, self.depth, self.side) != (other.p, other.depth, other.side):
            raise ValueError(
                f"shape mismatch: (p={self.p}, depth={self.depth}, {self.side}) vs "
                f"(p={other.p}, depth={other.depth}, {other.side})"
            )

    def _map(self, other, op) -> "TreeFunction":
        self._check_same_shape(other)
        return TreeFunction(self.p, self.side, tuple(op(a, b) for a, b in zip(self.levels, other.levels)))

    def __add__(self, other: "TreeFunction") -> "TreeFunction":
        return self._map(other, np.add)

    def __sub__(self, other: "TreeFunction") -> "TreeFunction":
        return self._map(other, np.subtract)

    def __neg__(self) -> "TreeFunction":
        return -1 * self

    def __mul__(self, c: complex) -> "TreeFunction":
        if not np.isscalar(c):
            return NotImplemented
        return TreeFunction(self.p, self.side, tuple(c * v for v in self.levels))

    __rmul__ = __mul__

    def allclose(self, other: "TreeFunction", atol: float = 1e-10) -> bool:
        self._check_same_shape(other)
        return all(np.allclose(a, b, rtol=0, atol=atol) for a, b in zip(self.levels, other.levels))

    def max_abs_diff(self, other: "TreeFunction") -> float:
        self._check_same_shape(other)
        return max(float(np.max(np.abs(a - b))) for a, b in zip(self.levels, other.levels))

    def level_weights(self) -> np.ndarray:
        """Weight applied to each level by the norm of this side."""
        if self.side == "vertex":
            return np.array([float(self.p) ** -n for n in range(self.depth + 1)])
        return np.ones(self.depth + 1)

    # -- serialization ------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "p": int(self.p),
            "depth": self.depth,
            "side": self.side,
            "levels": [[[float(z.real), float(z.imag)] for z in v] for v in self.levels],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TreeFunction":
        for key in ("p", "depth", "side", "levels"):
            if key not in data:
                raise ValueError(f"missing field {key!r}")
        try:
            levels = tuple(np.array([complex(re, im) for re, im in lev], complex) for lev in data["levels"])
        except (TypeError, ValueError):
            raise ValueError("field 'levels' must be a list of [[re, im], ...] lists") from None
        if len(levels) != int(data["depth"]) + 1:
            raise ValueError(f"field 'depth' is {data['depth']} but 'levels' has {len(levels)} entries")
        return cls(data["p"], data["side"], levels)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "TreeFunction":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class GradedPair:
    """An element of H + H with its Z/2 grading.

    The two components may have different depths: the doubled operator maps
    ``(plus at depth N-1, minus at depth N)`` to a pair of the same shape.
    """

    plus: TreeFunction
    minus: TreeFunction

    def __post_init__(self):
        if self.plus.p != self.minus.p or self.plus.side != self.minus.side:
            raise ValueError("graded components must share p and side")

    def norm(self) -> float:
        return float(np.hypot(weighted_norm(self.plus), weighted_norm(self.minus)))

    def inner(self, other: "GradedPair") -> complex:
        return inner_product(self.plus, other.plus) + inner_product(self.minus, other.minus)


def level_norms_squared(f: TreeFunction) -> np.ndarray:
    """Per-level contributions to ``weighted_norm(f)**2``."""
    return np.array([np.sum(np.abs(v) ** 2) for v in f.levels]) * f.level_weights()


def weighted_norm(f: TreeFunction) -> float:
    """Norm in H (vertex side, weights ``p**-n``) or in H^ (Fourier side)."""
    return float(np.sqrt(np.sum(level_norms_squared(f))))


def inner_product(f: TreeFunction, g: TreeFunction) -> complex:
    """``<f, g>``, conjugate-linear in ``f``."""
    f._check_same_shape(g)
    w = f.level_weights()
    return complex(sum(w[n] * np.vdot(a, b) for n, (a, b) in enumerate(zip(f.levels, g.levels))))


def random_tree_function(seed: int, p: int, depth: int, side: Side = "vertex") -> TreeFunction:
    """Entries i.i.d. uniform on the complex unit square ``[0,1) + i[0,1)``."""
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    p = Prime(p)
    rng = np.random.default_rng(seed)
    total = (p ** (depth + 1) - 1) // (p - 1)
    vec = rng.random(total) + 1j * rng.random(total)
    return TreeFunction.from_vector(vec, p, depth, side)

