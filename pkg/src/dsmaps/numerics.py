"""Small dense numerics: cyclic Jacobi eigensolver, PSD tests, real polynomial roots.

Everything here works on matrices of dimension at most 9 and polynomials of
degree at most 4, which is all the rest of the package ever needs.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, replace

import numpy as np

from .errors import InputError

MAX_DIM = 9
MAX_SWEEPS = 60


@dataclass(frozen=True)
class Tolerance:
    """Slack values shared by every predicate in the package."""

    eps_psd: float = 1e-9
    eps_eq: float = 1e-9
    eps_root: float = 1e-6

    def __post_init__(self):
        for name in ("eps_psd", "eps_eq", "eps_root"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise InputError(f"tolerance {name} must be strictly positive, got {value!r}")

    def with_overrides(self, **kwargs) -> "Tolerance":
        return replace(self, **{k: v for k, v in kwargs.items() if v is not None})


PROFILES = {
    "default": Tolerance(),
    "strict": Tolerance(eps_psd=1e-12, eps_eq=1e-12, eps_root=1e-9),
    "loose": Tolerance(eps_psd=1e-7, eps_eq=1e-7, eps_root=1e-5),
}

PROFILE_ENV = "DSMAPS_TOLERANCE"


def default_tolerance() -> Tolerance:
    """Tolerance profile named by ``$DSMAPS_TOLERANCE`` (``default`` if unset)."""
    name = os.environ.get(PROFILE_ENV, "default").strip().lower() or "default"
    try:
        return PROFILES[name]
    except KeyError:
        raise InputError(
            f"unknown tolerance profile {name!r} in ${PROFILE_ENV}; "
            f"expected one of {sorted(PROFILES)}") from None


def sym_matrix(m) -> np.ndarray:
    """Validate and symmetrize a real square matrix (or a stack of them)."""
    a = np.array(m, dtype=float)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise InputError(f"expected square matrix, got shape {a.shape}")
    if a.shape[-1] > MAX_DIM:
        raise InputError(f"dimension {a.shape[-1]} exceeds supported maximum {MAX_DIM}")
    if not np.all(np.isfinite(a)):
        raise InputError("matrix has non-finite entries")
    return 0.5 * (a + np.swapaxes(a, -1, -2))


def _jacobi_batch(a: np.ndarray):
    # a: (N, n, n) symmetric, modified in place
    N, n, _ = a.shape
    v = np.broadcast_to(np.eye(n), (N, n, n)).copy()
    if n == 1:
        return a[:, 0, :].copy(), v
    scale = np.abs(a).reshape(N, -1).max(axis=1)
    thresh = 1e-12 * scale
    rows = np.arange(N)
    iu = np.triu_indices(n, 1)
    for _ in range(MAX_SWEEPS):
        off = np.abs(a[:, iu[0], iu[1]]).max(axis=1)
        active = off > thresh
        if not active.any():
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[:, p, q]
                rot = np.abs(apq) > 0.0
                if not rot.any():
                    continue
                safe = np.where(rot, apq, 1.0)
                with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
                    theta = (a[:, q, q] - a[:, p, p]) / (2.0 * safe)
                    t = np.sign(theta) / (np.abs(theta) + np.hypot(theta, 1.0))
                t = np.where(theta == 0.0, 1.0, t)
                t = np.where(rot, t, 0.0)
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                cc, ss = c[:, None], s[:, None]
                colp, colq = a[:, :, p].copy(), a[:, :, q].copy()
                a[:, :, p] = cc * colp - ss * colq
                a[:, :, q] = ss * colp + cc * colq
                rowp, rowq = a[:, p, :].copy(), a[:, q, :].copy()
                a[:, p, :] = cc * rowp - ss * rowq
                a[:, q, :] = ss * rowp + cc * rowq
                a[rows, p, q] = 0.0
                a[rows, q, p] = 0.0
                vp, vq = v[:, :, p].copy(), v[:, :, q].copy()
                v[:, :, p] = cc * vp - ss * vq
                v[:, :, q] = ss * vp + cc * vq
    vals = np.diagonal(a, axis1=1, axis2=2).copy()
    order = np.argsort(vals, axis=1, kind="stable")
    vals = np.take_along_axis(vals, order, axis=1)
    v = np.take_along_axis(v, order[:, None, :], axis=2)
    return vals, v


def _jacobi_single(m: np.ndarray):
    # scalar cyclic Jacobi on nested lists; much cheaper than numpy for n <= 9
    n = m.shape[0]
    a = m.tolist()
    v = [[1.0 if i == j else 0.0 for j in range(n)] for i in range(n)]
    scale = max(abs(x) for row in a for x in row)
    thresh = 1e-12 * scale
    for _ in range(MAX_SWEEPS):
        off = max((abs(a[p][q]) for p in range(n) for q in range(p + 1, n)), default=0.0)
        if off <= thresh:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p][q]
                if apq == 0.0:
                    continue
                theta = (a[q][q] - a[p][p]) / (2.0 * apq)
                if math.isinf(theta):
                    continue
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    akp, akq = a[k][p], a[k][q]
                    a[k][p] = c * akp - s * akq
                    a[k][q] = s * akp + c * akq
                for k in range(n):
                    apk, aqk = a[p][k], a[q][k]
                    a[p][k] = c * apk - s * aqk
                    a[q][k] = s * apk + c * aqk
                a[p][q] = a[q][p] = 0.0
                for k in range(n):
                    vkp, vkq = v[k][p], v[k][q]
                    v[k][p] = c * vkp - s * vkq
                    v[k][q] = s * vkp + c * vkq
    vals = np.array([a[i][i] for i in range(n)])
    vecs = np.array(v)
    order = np.argsort(vals, kind="stable")
    return vals[order], vecs[:, order]


def _small(a: np.ndarray):
    # n <= 2: a single Jacobi rotation is exact
    if a.shape[0] == 1:
        return a[0].copy(), np.ones((1, 1))
    p, r, q = float(a[0, 0]), float(a[0, 1]), float(a[1, 1])
    if r == 0.0:
        c, s = 1.0, 0.0
    else:
        theta = (q - p) / (2.0 * r)
        t = 1.0 / theta if abs(theta) > 1e150 else math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
        c = 1.0 / math.sqrt(t * t + 1.0)
        s = t * c
        p, q = p - t * r, q + t * r
    vals = np.array([p, q])
    vecs = np.array([[c, s], [-s, c]])
    if q < p:
        return vals[::-1].copy(), vecs[:, ::-1].copy()
    return vals, vecs


def _components(a: np.ndarray) -> list[list[int]]:
    n = a.shape[0]
    nbrs = [[j for j, x in enumerate(row) if x != 0.0] for row in a.tolist()]
    seen = [False] * n
    comps = []
    for start in range(n):
        if seen[start]:
            continue
        stack, comp = [start], []
        seen[start] = True
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in nbrs[i]:
                if not seen[j]:
                    seen[j] = True
                    stack.append(j)
        comps.append(sorted(comp))
    return comps


def eig_sym(m) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a real symmetric matrix by cyclic Jacobi rotations.

    Accepts a single ``(n, n)`` matrix or a stack ``(..., n, n)``. Returns
    ascending eigenvalues and the matching orthonormal eigenvectors as columns.
    Single matrices are first split into the connected components of their
    sparsity pattern, which keeps the 9x9 Choi-type matrices cheap.
    """
    a = sym_matrix(m)
    n = a.shape[-1]
    if a.ndim > 2:
        lead = a.shape[:-2]
        vals, vecs = _jacobi_batch(a.reshape(-1, n, n).copy())
        return vals.reshape(*lead, n), vecs.reshape(*lead, n, n)

    if n <= 2:
        return _small(a)
    comps = _components(a)
    if len(comps) == 1:
        return _jacobi_single(a)
    vals = np.empty(n)
    vecs = np.zeros((n, n))
    k = 0
    for comp in comps:
        size = len(comp)
        if size == 1:
            vals[k] = a[comp[0], comp[0]]
            vecs[comp[0], k] = 1.0
        else:
            idx = np.array(comp)
            sv, sq = _jacobi_single(a[idx[:, None], idx])
            vals[k:k + size] = sv
            vecs[idx, k:k + size] = sq
        k += size
    order = np.argsort(vals, kind="stable")
    return vals[order], vecs[:, order]


def eigvals_sym(m) -> np.ndarray:
    return eig_sym(m)[0]


def min_eig(m) -> float | np.ndarray:
    vals = eigvals_sym(m)
    return vals[..., 0]


def is_psd(m, tol: Tolerance | None = None) -> bool:
    """True iff the smallest eigenvalue is at least ``-tol.eps_psd``."""
    tol = tol or default_tolerance()
    return bool(min_eig(m) >= -tol.eps_psd)


# --------------------------------------------------------------------------
# polynomials
# --------------------------------------------------------------------------

def strip_poly(coeffs) -> np.ndarray:
    """Drop negligible leading coefficients (highest degree first)."""
    c = np.array(coeffs, dtype=float).ravel()
    if c.size == 0 or not np.all(np.isfinite(c)):
        raise InputError("polynomial coefficients must be finite and non-empty")
    if c.size > 5:
        raise InputError(f"degree {c.size - 1} exceeds supported maximum 4")
    big = np.abs(c).max()
    if big == 0.0:
        raise InputError("all-zero polynomial has no well-defined roots")
    nz = np.flatnonzero(np.abs(c) > 1e-14 * big)
    return c[nz[0]:]


def poly_eval(coeffs, x):
    result = np.zeros_like(np.asarray(x, dtype=float))
    for ci in np.asarray(coeffs, dtype=float):
        result = result * x + ci
    return result


def _polish(c: np.ndarray, r: float) -> float:
    dc = np.polyder(c)
    best, best_res = r, abs(np.polyval(c, r))
    x = r
    for _ in range(4):
        d = np.polyval(dc, x)
        if d == 0.0:
            break
        x = x - np.polyval(c, x) / d
        res = abs(np.polyval(c, x))
        if res < best_res:
            best, best_res = x, res
    return float(best)


MERGE = 1e-7


def real_roots(coeffs, tol: Tolerance | None = None) -> np.ndarray:
    """Real roots of a polynomial of degree <= 4, ascending.

    ``coeffs`` are ordered highest degree first. Complex roots whose imaginary
    part is at most ``1e-9 * (1 + |re|)`` count as real. Every returned root
    has residual ``|p(r)| <= eps_root * (1 + max|coeff|)``. Roots closer than
    ``MERGE * (1 + |r|)`` are merged: a double root comes back from the
    companion matrix split by about sqrt(machine epsilon).
    """
    tol = tol or default_tolerance()
    c = strip_poly(coeffs)
    if c.size == 1:
        raise InputError("polynomial is constant after stripping leading zeros")
    bound = tol.eps_root * (1.0 + np.abs(c).max())
    out = []
    for z in np.roots(c):
        if abs(z.imag) > 1e-9 * (1.0 + abs(z.real)):
            continue
        r = _polish(c, float(z.real))
        if abs(np.polyval(c, r)) <= bound:
            out.append(r)
    out.sort()
    merged: list[float] = []
    for r in out:
        if merged and abs(r - merged[-1]) <= MERGE * (1.0 + abs(r)):
            continue
        merged.append(r)
    return np.array(merged)
