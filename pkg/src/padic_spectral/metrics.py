"""Lipschitz and spectral seminorms, the commutator [D, pi(phi)], and distances on Z_p."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.spatial import ConvexHull, QhullError

from .dirac import apply_D
from .linalg import power_iteration
from .padic_core import PAdicApprox, Prime, Vertex, first_difference, padic_distance
from .tree_hilbert import TreeFunction

SEMINORM_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class LocallyConstantFunction:
    """A function on Z_p constant on the ``p**level`` balls of depth ``level``.

    ``values[k]`` is the value on ball ``(level, k)``; an integer ``x`` is
    evaluated at index ``x mod p**level``.
    """

    p: Prime
    level: int
    values: np.ndarray

    def __post_init__(self):
        p = Prime(self.p)
        object.__setattr__(self, "p", p)
        vals = np.array(self.values, dtype=complex).reshape(-1)
        if self.level < 0 or vals.size != p**self.level:
            raise ValueError(f"expected {p}**{self.level} values, got {vals.size}")
        if not np.all(np.isfinite(vals)):
            raise ValueError("values must be finite")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    def __call__(self, x: int) -> complex:
        return complex(self.values[x % self.p**self.level])

    @property
    def is_real(self) -> bool:
        return bool(np.all(self.values.imag == 0))

    def on_level(self, n: int) -> np.ndarray:
        """Values at the integers ``0..p**n - 1`` (i.e. on the depth-``n`` balls), ``n >= level``."""
        if n < self.level:
            raise ValueError(f"phi is not constant on depth-{n} balls (level {self.level})")
        return self.values[np.arange(self.p**n) % self.p**self.level]

    def refine(self, n: int) -> "LocallyConstantFunction":
        return LocallyConstantFunction(self.p, n, self.on_level(n))

    def is_constant(self) -> bool:
        return bool(np.all(self.values == self.values[0]))

    def scaled(self, c: complex) -> "LocallyConstantFunction":
        return LocallyConstantFunction(self.p, self.level, c * self.values)

    @classmethod
    def constant(cls, p: int, value: complex = 1.0, level: int = 0) -> "LocallyConstantFunction":
        return cls(p, level, np.full(Prime(p) ** level, value, complex))

    @classmethod
    def padic_abs(cls, p: int, level: int, center: int = 0) -> "LocallyConstantFunction":
        """``z -> |z - center|_p`` sampled on depth-``level`` balls (0 on the centre ball)."""
        p = Prime(p)
        q = p**level
        vals = np.zeros(q)
        for k in range(q):
            d = (k - center) % q
            if d:
                alpha = 0
                while d % p == 0:
                    d //= p
                    alpha += 1
                vals[k] = float(p) ** -alpha
        return cls(p, level, vals)

    @classmethod
    def character(cls, p: int, m: int, l: int, conjugate: bool = False) -> "LocallyConstantFunction":
        """``chi_{m,l}(x) = exp(2 pi i l x / p**m)``, or its conjugate."""
        p = Prime(p)
        q = p**m
        sign = -1 if conjugate else 1
        k = np.arange(q)
        return cls(p, m, np.exp(sign * 2j * np.pi * ((k * l) % q) / q))

    @classmethod
    def indicator(cls, p: int, level: int, index: int) -> "LocallyConstantFunction":
        vals = np.zeros(Prime(p) ** level)
        vals[index] = 1.0
        return cls(p, level, vals)

    def to_dict(self) -> dict:
        return {
            "p": int(self.p),
            "level": self.level,
            "values": [[float(z.real), float(z.imag)] for z in self.values],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "LocallyConstantFunction":
        for key in ("p", "level", "values"):
            if key not in data:
                raise ValueError(f"missing field {key!r}")
        try:
            vals = [complex(re, im) for re, im in data["values"]]
        except (TypeError, ValueError):
            raise ValueError("field 'values' must be a list of [re, im] pairs") from None
        return cls(data["p"], int(data["level"]), vals)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "LocallyConstantFunction":
        return cls.from_dict(json.loads(text))


# -- Lipschitz seminorm -----------------------------------------------------


def _planar_diameter(points: np.ndarray) -> tuple[float, np.ndarray]:
    """Diameter of a finite set of complex numbers, plus the hull points that realize it."""
    pts = np.unique(points)
    if pts.size > 3:
        try:
            hull = ConvexHull(np.column_stack([pts.real, pts.imag]))
            pts = pts[hull.vertices]
        except QhullError:
            # collinear: the extremes along the line are among the coordinate extremes
            idx = {np.argmin(pts.real), np.argmax(pts.real), np.argmin(pts.imag), np.argmax(pts.imag)}
            pts = pts[sorted(idx)]
    diam = float(np.max(np.abs(pts[:, None] - pts[None, :]))) if pts.size > 1 else 0.0
    return diam, pts


def ball_diameters(phi: LocallyConstantFunction, n: int) -> np.ndarray:
    """``max |phi(x) - phi(y)|`` over each depth-``n`` ball, ``n <= level``."""
    p, m = phi.p, phi.level
    # ball (n, k) holds the depth-m indices k + p**n t: column k of the reshape
    cols = phi.values.reshape(p ** (m - n), p**n)
    if phi.is_real:
        re = cols.real
        return re.max(axis=0) - re.min(axis=0)
    return np.array([_planar_diameter(cols[:, k])[0] for k in range(p**n)])


def lipschitz_seminorm(phi: LocallyConstantFunction) -> float:
    """``sup |phi(x) - phi(y)| / |x - y|_p``.

    Pairs separated first at digit ``n`` sit in one depth-``n`` ball, and a
    pair inside one child ball is dominated at the next level, so the sup is
    ``max_n p**n * (largest diameter of a depth-n ball)`` over ``n < level``.
    Real values use range aggregation; complex values use convex hulls.
    """
    best = 0.0
    for n in range(phi.level):
        best = max(best, float(phi.p) ** n * float(np.max(ball_diameters(phi, n))))
    return best


# -- spectral seminorm --------------------------------------------------------


def sibling_terms(phi: LocallyConstantFunction) -> list[np.ndarray]:
    """``(1/p) sum_{i=1}^{p-1} p**(2n) |phi(k) - phi(k + i p**n)|**2`` for each ``n < level``, ``k < p**n``."""
    p, v = phi.p, phi.values
    out = []
    for n in range(phi.level):
        q = p**n
        sib = v[: q * p].reshape(p, q)
        out.append(float(p) ** (2 * n) * np.sum(np.abs(sib - v[:q]) ** 2, axis=0) / p)
    return out


@dataclass(frozen=True)
class SpectralSeminorm:
    value: float
    argmax: Vertex | None


def spectral_seminorm(phi: LocallyConstantFunction) -> SpectralSeminorm:
    """``||[D, pi(phi)]||`` by the sup formula over vertices; terms with ``n >= level`` vanish."""
    best, arg = 0.0, None
    for n, terms in enumerate(sibling_terms(phi)):
        k = int(np.argmax(terms))
        if terms[k] > best:
            best, arg = float(terms[k]), Vertex(n, k)
    if arg is None:
        arg = Vertex(0, 0)
    return SpectralSeminorm(math.sqrt(best), arg)


# -- the commutator -----------------------------------------------------------


def pi_action(phi: LocallyConstantFunction, f: TreeFunction) -> TreeFunction:
    """Multiplication ``pi(phi) f_n(k) = phi(k) f_n(k)``."""
    if f.side != "vertex":
        raise ValueError("pi acts on vertex-side functions")
    q = phi.p**phi.level
    return TreeFunction(f.p, "vertex", tuple(phi.values[np.arange(v.size) % q] * v for v in f.levels))


def commutator_apply(phi: LocallyConstantFunction, g: TreeFunction) -> TreeFunction:
    """``(D pi(phi) - pi(phi) D) g_n(k) = p**(n-1) sum_i [phi(k) - phi(k + i p**n)] g_{n+1}(k + i p**n)``."""
    if g.side != "vertex":
        raise ValueError("commutator_apply expects a vertex-side function")
    if g.depth < 1:
        raise ValueError("commutator_apply needs depth >= 1")
    if g.p != phi.p:
        raise ValueError("prime mismatch")
    p = g.p
    q_phi = p**phi.level
    out = []
    for n in range(g.depth):
        q = p**n
        child_idx = np.arange(q * p)
        phi_child = phi.values[child_idx % q_phi].reshape(p, q)
        phi_here = phi.values[np.arange(q) % q_phi]
        diff = (phi_here - phi_child) * g.levels[n + 1].reshape(p, q)
        out.append(float(p) ** (n - 1) * diff.sum(axis=0))
    return TreeFunction(p, "vertex", tuple(out))


def commutator_reference(phi: LocallyConstantFunction, g: TreeFunction) -> TreeFunction:
    """``D(pi(phi) g) - pi(phi) D g`` computed literally."""
    return apply_D(pi_action(phi, g)) - pi_action(phi, apply_D(g))


def commutator_matrix(phi: LocallyConstantFunction, depth: int) -> sp.csr_matrix:
    """The commutator from depth ``depth`` to ``depth - 1`` in orthonormal coordinates.

    Coordinates are ``sqrt(p**-n) f_n(k)``, so Euclidean norms equal the H norms.
    """
    p = phi.p
    q_phi = p**phi.level
    rows, cols, vals = [], [], []
    out_off = np.cumsum([0] + [p**n for n in range(depth)])
    in_off = np.cumsum([0] + [p**n for n in range(depth + 1)])
    for n in range(depth):
        q = p**n
        k = np.tile(np.arange(q), p)
        child = np.arange(q * p)
        coef = float(p) ** (n - 1) * (phi.values[k % q_phi] - phi.values[child % q_phi])
        # scale: sqrt(w_out) / sqrt(w_in) = sqrt(p**-n / p**-(n+1)) = sqrt(p)
        rows.append(out_off[n] + k)
        cols.append(in_off[n + 1] + child)
        vals.append(coef * math.sqrt(p))
    shape = (int(out_off[-1]) if depth else 0, int(in_off[-1]))
    if depth == 0:
        return sp.csr_matrix(shape, dtype=complex)
    return sp.csr_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=shape)


def commutator_norm_estimate(
    phi: LocallyConstantFunction, depth: int, iters: int = 10_000, seed: int = 0, rtol: float = 0.0
) -> float:
    """Power-iteration estimate of ``||[D, pi(phi)]||`` on the tree truncated at ``depth``."""
    if depth < phi.level:
        raise ValueError(f"depth {depth} is below the constancy level {phi.level}")
    if depth == 0:
        return 0.0
    mat = commutator_matrix(phi, depth)
    if mat.nnz == 0 or not np.any(mat.data):
        return 0.0
    rng = np.random.default_rng(seed)
    x0 = rng.standard_normal(mat.shape[1]) + 1j * rng.standard_normal(mat.shape[1])
    gram = (mat.conj().T @ mat).tocsr()
    return power_iteration(mat.dot, mat.conj().T.tocsr().dot, x0, iters=iters, rtol=rtol, gram=gram.dot).norm


def seminorm_witness(phi: LocallyConstantFunction, epsilon: float, depth: int | None = None) -> TreeFunction:
    """The test vector that nearly saturates the spectral seminorm.

    Picks the first vertex ``(n, k)`` in scan order whose sibling term is
    within ``epsilon / p`` of the sup (so the ratio is at least
    ``L_D**2 - epsilon / p``), and puts
    ``(conj phi(k) - conj phi(k + i p**n)) / p**-n`` on its children.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if phi.is_constant():
        raise ValueError("a constant function has no seminorm witness")
    terms = sibling_terms(phi)
    sup = max(float(np.max(t)) for t in terms)
    for n, t in enumerate(terms):
        hits = np.flatnonzero(t >= sup - epsilon / phi.p)
        if hits.size:
            k = int(hits[0])
            break
    p = phi.p
    depth = phi.level if depth is None else depth
    if depth < n + 1:
        raise ValueError(f"depth {depth} too small for a witness at level {n}")
    level = np.zeros(p ** (n + 1), complex)
    idx = k + np.arange(p) * p**n
    level[idx] = (np.conj(phi(k)) - np.conj(phi.values[idx % p**phi.level])) * float(p) ** n
    g = TreeFunction.zeros(p, depth)
    levels = list(g.levels)
    levels[n + 1] = level
    return TreeFunction(p, "vertex", tuple(levels))


# -- seminorm equivalence ---------------------------------------------------


def equivalence_constants(p: int) -> tuple[float, float]:
    """``(c_low, c_up)`` with ``c_up L >= L_D >= c_low L``."""
    return (p - 1) / (2 * p * math.sqrt(p)), math.sqrt((p - 1) / p)


@dataclass(frozen=True)
class SeminormReport:
    p: int
    level: int
    lipschitz: float
    spectral: float
    argmax_vertex: Vertex
    lower_ok: bool
    upper_ok: bool

    @property
    def ratio(self) -> float:
        return self.spectral / self.lipschitz if self.lipschitz > 0 else math.nan

    CSV_HEADER = ("phi_id", "p", "level", "L", "L_D", "ratio", "lower_ok", "upper_ok")

    def csv_row(self, phi_id: str) -> tuple:
        return (phi_id, self.p, self.level, self.lipschitz, self.spectral, self.ratio, self.lower_ok, self.upper_ok)

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "level": self.level,
            "lipschitz": self.lipschitz,
            "spectral": self.spectral,
            "ratio": None if math.isnan(self.ratio) else self.ratio,
            "argmax_vertex": [self.argmax_vertex.level, self.argmax_vertex.index],
            "lower_ok": self.lower_ok,
            "upper_ok": self.upper_ok,
        }


def check_equivalence(phi: LocallyConstantFunction, tol: float = SEMINORM_TOL) -> SeminormReport:
    lip = lipschitz_seminorm(phi)
    ld = spectral_seminorm(phi)
    c_low, c_up = equivalence_constants(phi.p)
    return SeminormReport(
        p=int(phi.p),
        level=phi.level,
        lipschitz=lip,
        spectral=ld.value,
        argmax_vertex=ld.argmax,
        lower_ok=ld.value >= c_low * lip - tol,
        upper_ok=c_up * lip >= ld.value - tol,
    )


def gen_random_lipschitz(
    seed: int, p: int, level: int, bound: float, complex_valued: bool = False
) -> LocallyConstantFunction:
    """Random function built top-down with sibling spreads at depth ``n`` at most ``bound p**-n``.

    Each refinement offsets the children of a depth-``n`` ball from the
    ball's provisional value by at most ``bound p**-n / 2``, so
    ``L(phi) <= bound / (1 - 1/p) <= 2 bound / (1 - 1/p)``.
    """
    p = Prime(p)
    if level < 0 or bound < 0:
        raise ValueError("level and bound must be nonnegative")
    rng = np.random.default_rng(seed)

    def draw(size):
        if complex_valued:
            # a disk of radius 1/2 keeps the spread bound for complex offsets
            r = 0.5 * np.sqrt(rng.random(size))
            return r * np.exp(2j * np.pi * rng.random(size))
        return rng.random(size) - 0.5

    vals = np.array([draw(1)[0] * 2.0 * max(bound, 1.0)], dtype=complex)
    for n in range(level):
        q = p**n
        offsets = bound * float(p) ** -n * draw(q * p)
        vals = np.tile(vals, p) + offsets
    if bound == 0:
        vals = np.full(p**level, vals[0])
    return LocallyConstantFunction(p, level, vals)


# -- distances ----------------------------------------------------------------


def _point_index(x: PAdicApprox, depth: int) -> int:
    """Integer representative of ``x`` on the depth-``depth`` balls; unknown digits are 0."""
    digits = x.digits[:depth]
    return sum(d * x.p**i for i, d in enumerate(digits))


def lipschitz_ball_distance(x: PAdicApprox, y: PAdicApprox, depth: int | None = None) -> float:
    """``sup{|phi(x) - phi(y)| : L(phi) <= 1}``, attained by ``phi(z) = |z - x|_p``."""
    rho = padic_distance(x, y)
    depth = x.depth if depth is None else depth
    if rho == 0:
        return 0.0
    if first_difference(x, y) >= depth:
        raise ValueError(f"points are not separated at depth {depth}")
    X, Y = _point_index(x, depth), _point_index(y, depth)
    witness = LocallyConstantFunction.padic_abs(x.p, depth, center=X)
    lip = lipschitz_seminorm(witness)
    if lip != 1.0:
        raise AssertionError(f"witness has Lipschitz seminorm {lip}, expected 1")
    return abs(witness(X) - witness(Y))


def distance_bounds(p: int, rho: float) -> tuple[float, float]:
    """Two-sided bounds on the spectral distance in terms of ``rho = |x - y|_p``."""
    return math.sqrt(p / (p - 1)) * rho, 2 * p * math.sqrt(p) / (p - 1) * rho


@dataclass(frozen=True)
class DistanceEstimate:
    """Result of :func:`connes_distance`: ``lower <= dist_D(x, y) <= upper`` at the given depth."""

    lower: float
    upper: float
    depth: int
    iterations: int
    witness: LocallyConstantFunction | None
    certified: bool

    @property
    def width(self) -> float:
        return self.upper - self.lower


class _EdgeGeometry:
    """Sibling-difference coordinates for functions on the depth-``N`` balls.

    Each integer ``0 < j < p**N`` is written ``j = k + i p**n`` with
    ``k < p**n`` and ``0 < i < p``; ``d[j] = phi(j) - phi(k)``.  The spectral
    constraint at vertex ``(n, k)`` is the ball ``sum_i d[k + i p**n]**2 <= p * p**(-2n)``,
    and these groups are disjoint.
    """

    def __init__(self, p: int, depth: int):
        self.p, self.depth = p, depth
        self.size = p**depth
        self.radius = [math.sqrt(p) * float(p) ** -n for n in range(depth)]

    def groups(self, d: np.ndarray):
        p = self.p
        for n in range(self.depth):
            q = p**n
            yield n, d[q : q * p].reshape(p - 1, q)

    def chain(self, j: int) -> list[int]:
        out = []
        while j > 0:
            out.append(j)
            top = 1
            while top * self.p <= j:
                top *= self.p
            j %= top
        return out

    def objective(self, X: int, Y: int) -> np.ndarray:
        c = np.zeros(self.size)
        for j in self.chain(X):
            c[j] += 1.0
        for j in self.chain(Y):
            c[j] -= 1.0
        return c

    def project(self, d: np.ndarray) -> np.ndarray:
        out = d.copy()
        for n, block in self.groups(out):
            norms = np.linalg.norm(block, axis=0)
            over = norms > self.radius[n]
            block[:, over] *= self.radius[n] / norms[over]
        return out

    def values(self, d: np.ndarray) -> np.ndarray:
        """``phi`` on the integers ``0..p**N - 1`` with ``phi(0) = 0``."""
        phi = np.zeros(self.size)
        for n, block in self.groups(d):
            q = self.p**n
            phi[q : q * self.p] = (phi[:q] + block).reshape(-1)
        return phi

    def dual_bound(self, c: np.ndarray, d: np.ndarray) -> float:
        """Lagrangian bound from multipliers fitted to ``c_G = 2 lam_G d_G``; inf if a fit fails."""
        total = 0.0
        cg_iter = self.groups(c)
        for (n, dg), (_, cg) in zip(self.groups(d), cg_iter):
            cn2 = np.sum(cg**2, axis=0)
            active = cn2 > 0
            if not np.any(active):
                continue
            dn2 = np.sum(dg**2, axis=0)[active]
            lam = np.sum(cg * dg, axis=0)[active] / (2.0 * np.where(dn2 > 0, dn2, np.inf))
            if np.any(lam <= 0):
                return math.inf
            total += float(np.sum(cn2[active] / (4 * lam) + lam * self.radius[n] ** 2))
        return total


def connes_distance(
    x: PAdicApprox, y: PAdicApprox, depth: int, tol: float = 1e-9, max_iter: int = 10_000
) -> DistanceEstimate:
    """``sup{phi(x) - phi(y) : L_D(phi) <= 1}`` over real ``phi`` constant on depth-``depth`` balls.

    Projected ascent on the linear objective in sibling-difference coordinates,
    where each spectral constraint is a ball and projection is a radial
    scaling; Polyak steps aim at the current upper bound.  The upper bound is
    a Lagrangian certificate from multipliers fitted on the constraints, with
    the analytic bound as fallback.
    """
    if x.p != y.p:
        raise ValueError(f"primes differ: {x.p} != {y.p}")
    p = x.p
    rho = float(padic_distance(x, y))
    if rho == 0:
        return DistanceEstimate(0.0, 0.0, depth, 0, None, True)
    first = first_difference(x, y)
    if first >= depth:
        raise ValueError(f"points first differ at digit {first}, not separated at depth {depth}")
    X, Y = _point_index(x, depth), _point_index(y, depth)

    geo = _EdgeGeometry(p, depth)
    c = geo.objective(X, Y)
    cc = float(c @ c)
    analytic = distance_bounds(p, rho)[1]
    d = np.zeros(geo.size)
    lower, upper, certified = 0.0, analytic, False
    it = 0
    for it in range(1, max_iter + 1):
        target = max(upper, lower + tol)
        step = (target - float(c @ d)) / cc
        d = geo.project(d + max(step, tol / cc) * c)
        lower = max(lower, float(c @ d))
        cert = geo.dual_bound(c, d)
        if cert < upper:
            upper, certified = cert, True
        if upper - lower <= tol:
            break
    phi_vals = geo.values(d)
    witness = LocallyConstantFunction(p, depth, phi_vals)
    lower = float(phi_vals[X] - phi_vals[Y])
    return DistanceEstimate(lower, max(upper, lower), depth, it, witness, certified)


def distance_stability(x: PAdicApprox, y: PAdicApprox, depth: int, tol: float = 1e-9):
    """Solve at ``depth`` and ``depth + 1``; returns both estimates and the change in the lower value."""
    a = connes_distance(x, y, depth, tol)
    b = connes_distance(x, y, depth + 1, tol)
    return a, b, abs(b.lower - a.lower)
