"""Brute-force checks that share no closed forms with the positivity criteria.

These back the test-suite and the witness search in
:func:`dsmaps.positivity.classify_positivity`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InputError, SingularBoundaryError
from .model import WMatrix
from .numerics import eigvals_sym


@dataclass
class ProbeReport:
    min_eigenvalue_found: float
    argmin: np.ndarray  # nonnegative amplitudes |psi_i|
    samples: int
    grid_resolution: int = 0

    def to_dict(self) -> dict:
        return {
            "min_eigenvalue_found": self.min_eigenvalue_found,
            "argmin": [float(v) for v in self.argmin],
            "samples": self.samples,
            "grid_resolution": self.grid_resolution,
        }


@dataclass
class MaxFReport:
    value: float
    argmax: np.ndarray
    singular: bool
    depth: int


def simplex_grid(depth: int) -> np.ndarray:
    """All points (i, j, k) / depth with i + j + k = depth."""
    if depth < 1:
        raise InputError("grid depth must be >= 1")
    i, j = np.triu_indices(depth + 1)
    # i <= j: x0 = i, x1 = j - i, x2 = depth - j
    pts = np.stack([i, j - i, depth - j], axis=1).astype(float)
    return pts / depth


def rank_one_images(W: WMatrix, x: np.ndarray) -> np.ndarray:
    """Stack of Phi_W(psi psi^T) for psi = sqrt(x), x rows on the simplex."""
    x = np.clip(np.asarray(x, dtype=float), 0.0, None)
    x = x / x.sum(axis=1, keepdims=True)
    psi = np.sqrt(x)
    z = x @ W.entries.T
    out = -psi[:, :, None] * psi[:, None, :]
    idx = np.arange(3)
    out[:, idx, idx] += z
    return out


def rank_one_min_eigs(W: WMatrix, x: np.ndarray) -> np.ndarray:
    return eigvals_sym(rank_one_images(W, x))[:, 0]


def rank_one_probe(W: WMatrix, samples: int = 10_000, seed: int = 0, batch: int = 20_000) -> ProbeReport:
    """Smallest eigenvalue of Phi_W(psi psi^T) over random unit psi.

    ``|psi_i|^2`` is drawn uniformly on the simplex, which is the law of a
    uniform point on the complex unit sphere; phases are left at zero.
    """
    rng = np.random.default_rng(seed)
    best_val, best_x = np.inf, None
    done = 0
    while done < samples:
        n = min(batch, samples - done)
        x = rng.dirichlet(np.ones(3), size=n)
        lam = rank_one_min_eigs(W, x)
        k = int(np.argmin(lam))
        if lam[k] < best_val:
            best_val, best_x = float(lam[k]), x[k]
        done += n
    return ProbeReport(best_val, np.sqrt(best_x), samples)


def _f_values(W: WMatrix, x: np.ndarray) -> np.ndarray:
    z = x @ W.entries.T
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(x > 0.0, x / z, 0.0)
    # x_i > 0 with z_i <= 0: unbounded, Phi_W has a negative diagonal entry there
    terms = np.where((x > 0.0) & (z <= 0.0), np.inf, terms)
    return terms.sum(axis=1)


def _project(x: np.ndarray) -> np.ndarray:
    x = np.clip(x, 0.0, None)
    return x / x.sum()


def _coordinate_refine(fun, x0: np.ndarray, step: float, iterations: int = 50, maximize: bool = True):
    sign = 1.0 if maximize else -1.0
    x = x0.copy()
    best = sign * fun(x[None])[0]
    moves = [(i, j) for i in range(3) for j in range(3) if i != j]
    for _ in range(iterations):
        improved = False
        for i, j in moves:
            t = min(step, x[j])
            if t <= 0.0:
                continue
            y = x.copy()
            y[i] += t
            y[j] -= t
            y = _project(y)
            val = sign * fun(y[None])[0]
            if val > best:
                x, best, improved = y, val, True
        if not improved:
            step *= 0.5
            if step < 1e-15:
                break
    return x, sign * best


def max_f_on_simplex(W: WMatrix, depth: int = 200, refine: bool = True) -> MaxFReport:
    """Grid search for max of f(x) = sum x_i / z_i on the closed simplex.

    Points where some z_i = 0 with x_i = 0 drop that 0/0 term, which is the
    value of f on the remaining nontrivial block.
    """
    if W.block_diagonal:
        raise SingularBoundaryError("f has a singular boundary for block-diagonal W")
    pts = simplex_grid(depth)
    vals = _f_values(W, pts)
    k = int(np.argmax(vals))
    x, val = pts[k], float(vals[k])
    if np.isinf(val):
        return MaxFReport(val, x, True, depth)
    # ties: prefer the most central grid point for a canonical argmax
    ties = np.flatnonzero(vals >= val - 1e-15 * max(1.0, abs(val)))
    if ties.size > 1:
        centre = np.full(3, 1.0 / 3.0)
        k = int(ties[np.argmin(np.linalg.norm(pts[ties] - centre, axis=1))])
        x = pts[k]
    if refine:
        x, val = _coordinate_refine(lambda y: _f_values(W, y), x, 1.0 / depth)
    return MaxFReport(float(val), x, bool(np.isinf(val)), depth)


def min_eigen_search(W: WMatrix, depth: int = 60, refine: bool = True) -> tuple[np.ndarray, float]:
    """Grid plus coordinate search for the most negative rank-one image; returns (x, lambda)."""
    pts = simplex_grid(depth)
    lam = rank_one_min_eigs(W, pts)
    k = int(np.argmin(lam))
    x, val = pts[k], float(lam[k])
    if refine:
        x, val = _coordinate_refine(lambda y: rank_one_min_eigs(W, y), x, 1.0 / depth, maximize=False)
    return x, float(val)


def fd_hessian_f(W: WMatrix, x=(1.0, 1.0, 1.0), step: float = 1e-4) -> np.ndarray:
    """Central-difference Hessian of f(x) = sum x_i / (W x)_i on unconstrained R^3."""
    if not 1e-6 <= step <= 1e-2:
        raise InputError("step must lie in [1e-6, 1e-2]")
    x = np.asarray(x, dtype=float)
    m = W.entries

    def f(y):
        z = m @ y
        if np.any(z <= 0.0):
            raise DomainError(f"z = {z} leaves the positive orthant inside the stencil")
        return float(np.sum(y / z))

    eye = np.eye(3)
    h = np.empty((3, 3))
    for i in range(3):
        for j in range(i, 3):
            ei, ej = step * eye[i], step * eye[j]
            v = (f(x + ei + ej) - f(x + ei - ej) - f(x - ei + ej) + f(x - ei - ej)) / (4.0 * step * step)
            h[i, j] = h[j, i] = v
    return h
