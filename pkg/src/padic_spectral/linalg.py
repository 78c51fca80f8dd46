"""Power iteration for operator norms of linear maps given as callables."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np


@dataclass
class PowerIterationResult:
    norm: float
    vector: np.ndarray
    iterations: int
    history: list[float]


def power_iteration(
    matvec: Callable[[np.ndarray], np.ndarray],
    rmatvec: Callable[[np.ndarray], np.ndarray],
    x0: np.ndarray,
    iters: int = 200,
    rtol: float = 0.0,
    gram: Callable[[np.ndarray], np.ndarray] | None = None,
) -> PowerIterationResult:
    """Estimate ``||A||`` by power iteration on ``A^* A``.

    ``matvec`` and ``rmatvec`` apply ``A`` and its adjoint in coordinates
    where both spaces carry the Euclidean inner product.  The estimates
    ``||A x_k||`` are nondecreasing in ``k`` and never exceed ``||A||``.
    With ``rtol > 0`` the loop stops once successive estimates agree to that
    relative tolerance.  ``gram``, when given, applies ``A^* A`` in one call
    and only the final estimate uses ``matvec``.
    """
    if iters < 1:
        raise ValueError("iters must be >= 1")
    x = np.asarray(x0, dtype=complex)
    nx = np.linalg.norm(x)
    if nx == 0:
        raise ValueError("starting vector is zero")
    x = x / nx
    history: list[float] = []
    if gram is not None:
        for it in range(1, iters + 1):
            z = gram(x)
            lam = float(np.real(np.vdot(x, z)))
            history.append(np.sqrt(max(lam, 0.0)))
            nz = np.linalg.norm(z)
            if nz == 0.0:
                break
            x = z / nz
            if rtol > 0 and it > 1 and abs(history[-1] - history[-2]) <= rtol * history[-1]:
                break
        history.append(float(np.linalg.norm(matvec(x))))
        return PowerIterationResult(max(history), x, len(history) - 1, history)
    for it in range(1, iters + 1):
        y = matvec(x)
        sigma = float(np.linalg.norm(y))
        history.append(sigma)
        if sigma == 0.0:
            break
        z = rmatvec(y)
        nz = np.linalg.norm(z)
        if nz == 0.0:
            break
        x = z / nz
        if rtol > 0 and it > 1 and abs(history[-1] - history[-2]) <= rtol * sigma:
            break
    return PowerIterationResult(max(history), x, len(history), history)
