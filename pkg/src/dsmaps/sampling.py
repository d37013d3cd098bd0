"""Random valid W matrices for property checks and the ``verify`` command."""
from __future__ import annotations

import numpy as np

from .errors import DomainError
from .model import BirkhoffParams, WMatrix, w_from_birkhoff


def random_birkhoff(rng: np.random.Generator, a=(0.5, 3.5), bc=(0.0, 2.0), spread: float = 1.0,
                    equal_bc: bool = False, max_tries: int = 10_000) -> BirkhoffParams:
    """Gauge-fixed parameters whose reconstructed W is nonnegative."""
    for _ in range(max_tries):
        aa = rng.uniform(*a)
        b = rng.uniform(*bc)
        c = b if equal_bc else rng.uniform(*bc)
        d, e = rng.uniform(-spread, spread, size=2)
        p = BirkhoffParams(aa, b, c, d, e, -d - e)
        if np.all(p.entries() >= 0.0):
            return p
    raise DomainError("could not sample a valid W; widen the ranges")


def random_w(rng: np.random.Generator, **kwargs) -> WMatrix:
    while True:
        W = w_from_birkhoff(random_birkhoff(rng, **kwargs))
        if not W.block_diagonal:
            return W


def random_ds(rng: np.random.Generator, w: float | None = None) -> WMatrix:
    """w times a random convex combination of the six 3x3 permutation matrices."""
    perms = [np.eye(3)[list(p)] for p in ((0, 1, 2), (1, 2, 0), (2, 0, 1), (1, 0, 2), (0, 2, 1), (2, 1, 0))]
    weights = rng.dirichlet(np.ones(6))
    scale = rng.uniform(1.0, 6.0) if w is None else w
    return WMatrix(scale * sum(wt * p for wt, p in zip(weights, perms)))
