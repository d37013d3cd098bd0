"""Scaled doubly stochastic matrices W, their gauge-fixed Birkhoff parameters,
the map Phi_W(X) = D_W(X) - X and its 9x9 Choi matrix."""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ConsistencyError, DomainError, InputError
from .numerics import Tolerance, default_tolerance

# cyclic shift S e_i = e_{i+1}
SHIFT = np.roll(np.eye(3), 1, axis=0)

BIRKHOFF_FIELDS = ("a", "b", "c", "d", "e", "f")


def circulant(a: float, b: float, c: float) -> np.ndarray:
    return np.array([[a, b, c], [c, a, b], [b, c, a]], dtype=float)


@dataclass(frozen=True)
class BirkhoffParams:
    """W = circulant(a, b, c) + d P_d + e P_e + f P_f, gauge-fixed to d + e + f = 0."""

    a: float
    b: float
    c: float
    d: float = 0.0
    e: float = 0.0
    f: float = 0.0

    @property
    def w(self) -> float:
        return self.a + self.b + self.c + self.d + self.e + self.f

    @property
    def circulant_part(self) -> tuple[float, float, float]:
        return (self.a, self.b, self.c)

    @property
    def perturbation(self) -> tuple[float, float, float]:
        return (self.d, self.e, self.f)

    def entries(self) -> np.ndarray:
        a, b, c, d, e, f = (self.a, self.b, self.c, self.d, self.e, self.f)
        return np.array([[a + f, b + d, c + e],
                         [c + d, a + e, b + f],
                         [b + e, c + f, a + d]], dtype=float)

    def gauge_fixed(self) -> "BirkhoffParams":
        """Shift by the gauge freedom so that d + e + f = 0; W is unchanged."""
        xi = (self.d + self.e + self.f) / 3.0
        return BirkhoffParams(self.a + xi, self.b + xi, self.c + xi,
                              self.d - xi, self.e - xi, self.f - xi)

    def as_tuple(self) -> tuple[float, ...]:
        return tuple(float(getattr(self, k)) for k in BIRKHOFF_FIELDS)

    def to_dict(self) -> dict:
        return dict(zip(BIRKHOFF_FIELDS, self.as_tuple()))

    @classmethod
    def from_dict(cls, data: dict) -> "BirkhoffParams":
        missing = [k for k in ("a", "b", "c") if k not in data]
        if missing:
            raise InputError(f"Birkhoff parameters missing fields {missing}")
        unknown = sorted(set(data) - set(BIRKHOFF_FIELDS))
        if unknown:
            raise InputError(f"unknown Birkhoff fields {unknown}")
        try:
            values = {k: float(data.get(k, 0.0)) for k in BIRKHOFF_FIELDS}
        except (TypeError, ValueError) as exc:
            raise InputError(f"Birkhoff parameters must be numbers: {exc}") from None
        if not all(np.isfinite(list(values.values()))):
            raise InputError("Birkhoff parameters must be finite")
        return cls(**values)


class WMatrix:
    """A 3x3 nonnegative matrix whose row and column sums all equal ``w``.

    Construction validates nonnegativity and the common sum, and snaps tiny
    negative entries (within ``eps_eq``) to zero. Block-diagonal structure is
    only flagged; see :attr:`block_diagonal`.
    """

    __slots__ = ("_m", "tol", "__dict__")

    def __init__(self, entries, w: float | None = None, tol: Tolerance | None = None):
        self.tol = tol or default_tolerance()
        m = np.array(entries, dtype=float)
        if m.shape == (9,):
            m = m.reshape(3, 3)
        if m.shape != (3, 3):
            raise InputError(f"W must be 3x3 (or 9 numbers row-major), got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise InputError("W has non-finite entries")
        eps = self.tol.eps_eq
        neg = np.argwhere(m < -eps)
        if neg.size:
            i, j = (int(k) for k in neg[0])
            raise DomainError(f"W entry ({i + 1},{j + 1}) = {float(m[i, j]):.12g} is negative", (i, j))
        m = np.where(m < 0.0, 0.0, m)
        rows, cols = m.sum(axis=1), m.sum(axis=0)
        w_sum = float(rows.mean()) if w is None else float(w)
        slack = eps * (1.0 + abs(w_sum))
        for kind, sums in (("row", rows), ("column", cols)):
            bad = np.flatnonzero(np.abs(sums - w_sum) > slack)
            if bad.size:
                k = int(bad[0])
                raise DomainError(
                    f"{kind} {k + 1} sums to {float(sums[k]):.12g}, expected common sum w = {float(w_sum):.12g} "
                    "(W must be a scaled doubly stochastic matrix)")
        m.setflags(write=False)
        self._m = m
        self.w = w_sum

    # -- constructors --------------------------------------------------------
    @classmethod
    def from_circulant(cls, a: float, b: float, c: float, tol: Tolerance | None = None) -> "WMatrix":
        return cls(circulant(a, b, c), tol=tol)

    @classmethod
    def from_birkhoff(cls, p: BirkhoffParams, tol: Tolerance | None = None) -> "WMatrix":
        return w_from_birkhoff(p, tol)

    # -- views ---------------------------------------------------------------
    @property
    def entries(self) -> np.ndarray:
        return self._m

    def __array__(self, dtype=None, copy=None):
        return np.array(self._m, dtype=dtype)

    def __getitem__(self, idx):
        return self._m[idx]

    def __repr__(self) -> str:
        rows = ", ".join("[" + ", ".join(f"{x:.6g}" for x in r) + "]" for r in self._m)
        return f"WMatrix([{rows}], w={self.w:.6g})"

    def __eq__(self, other):
        if not isinstance(other, WMatrix):
            return NotImplemented
        return np.array_equal(self._m, other._m)

    __hash__ = None

    @property
    def diag(self) -> np.ndarray:
        return np.diag(self._m)

    @property
    def trace(self) -> float:
        return float(np.trace(self._m))

    @cached_property
    def birkhoff(self) -> BirkhoffParams:
        return birkhoff_from_w(self)

    @cached_property
    def block_diagonal(self) -> bool:
        """True if some index i is decoupled: w_ij = w_ji = 0 for both j != i."""
        m, eps = self._m, self.tol.eps_eq
        for i in range(3):
            others = [j for j in range(3) if j != i]
            if all(m[i, j] < eps and m[j, i] < eps for j in others):
                return True
        return False

    @cached_property
    def is_circulant(self) -> bool:
        m, eps = self._m, self.tol.eps_eq
        return bool(np.all(np.abs(m - SHIFT @ m @ SHIFT.T) <= eps * (1.0 + self.w)))

    def allclose(self, other: "WMatrix", atol: float | None = None) -> bool:
        atol = self.tol.eps_eq * (1.0 + abs(self.w)) if atol is None else atol
        return bool(np.allclose(self._m, np.asarray(other), rtol=0.0, atol=atol))

    # -- serialization -------------------------------------------------------
    def to_dict(self) -> dict:
        return {"matrix": [float(x) for x in self._m.ravel()], "w": self.w}

    @classmethod
    def from_dict(cls, data: dict, tol: Tolerance | None = None) -> "WMatrix":
        return parse_w_json(data, tol)


def w_from_birkhoff(p: BirkhoffParams, tol: Tolerance | None = None) -> WMatrix:
    tol = tol or default_tolerance()
    g = p.gauge_fixed()
    m = g.entries()
    names = [["a+f", "b+d", "c+e"], ["c+d", "a+e", "b+f"], ["b+e", "c+f", "a+d"]]
    neg = np.argwhere(m < -tol.eps_eq)
    if neg.size:
        i, j = (int(k) for k in neg[0])
        raise DomainError(
            f"reconstructed entry w{i + 1}{j + 1} = {names[i][j]} = {float(m[i, j]):.12g} is negative", (i, j))
    W = WMatrix(m, w=g.a + g.b + g.c, tol=tol)
    W.__dict__["birkhoff"] = g
    return W


def birkhoff_from_w(W: WMatrix) -> BirkhoffParams:
    m = np.asarray(W).tolist()
    a = (m[0][0] + m[1][1] + m[2][2]) / 3.0
    f = m[0][0] - a
    e = m[1][1] - a
    d = m[2][2] - a
    return BirkhoffParams(a, m[0][1] - d, m[0][2] - e, d, e, f)


def circulant_average(W: WMatrix) -> WMatrix:
    """(W + S W S^T + S^T W S) / 3, the circulant part of W."""
    m = np.asarray(W)
    avg = (m + SHIFT @ m @ SHIFT.T + SHIFT.T @ m @ SHIFT) / 3.0
    return WMatrix(avg, tol=W.tol)


def delta(W: WMatrix) -> float:
    """The common asymmetry |w_ij - w_ji| (independent of the pair for 3x3 W)."""
    m = np.asarray(W)
    gaps = [abs(m[0, 1] - m[1, 0]), abs(m[0, 2] - m[2, 0]), abs(m[1, 2] - m[2, 1])]
    if max(gaps) - min(gaps) > 4 * W.tol.eps_eq * (1.0 + W.w):
        raise ConsistencyError(f"pairwise asymmetries {gaps} disagree; W is not doubly stochastic")
    return float(gaps[0])


def hermitian(x) -> np.ndarray:
    X = np.array(x, dtype=complex)
    if X.shape != (3, 3):
        raise InputError(f"X must be 3x3, got shape {X.shape}")
    if not np.allclose(X, X.conj().T, atol=1e-12):
        raise InputError("X is not Hermitian")
    return X


def apply_map(W: WMatrix, X) -> np.ndarray:
    """Phi_W(X) = diag(W @ diag(X)) - X, for any complex 3x3 X."""
    X = np.array(X, dtype=complex)
    if X.shape != (3, 3):
        raise InputError(f"X must be 3x3, got shape {X.shape}")
    d = np.asarray(W) @ np.diag(X)
    return np.diag(d) - X


def rank_one_image(W: WMatrix, psi) -> np.ndarray:
    """Phi_W(psi psi^dagger)."""
    psi = np.asarray(psi, dtype=complex).ravel()
    return apply_map(W, np.outer(psi, psi.conj()))


def choi_matrix(W: WMatrix) -> np.ndarray:
    """sum_ij E_ij (x) Phi_W(E_ij), a real symmetric 9x9 matrix."""
    m = np.asarray(W)
    C = np.zeros((9, 9))
    for i in range(3):
        for k in range(3):
            C[3 * i + k, 3 * i + k] = m[k, i]
        C[4 * i, 4 * i] -= 1.0
        for j in range(3):
            if i != j:
                C[4 * i, 4 * j] = -1.0
    return C


def partial_transpose(M) -> np.ndarray:
    """(id (x) T) on a 9x9 matrix: transpose each 3x3 block in place."""
    M = np.asarray(M)
    return M.reshape(3, 3, 3, 3).transpose(0, 3, 2, 1).reshape(9, 9)


# --------------------------------------------------------------------------
# JSON
# --------------------------------------------------------------------------

def parse_w_json(data, tol: Tolerance | None = None) -> WMatrix:
    """Parse either ``{"matrix": [9 numbers], "w": optional}`` or Birkhoff fields."""
    if isinstance(data, (str, bytes)):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid JSON: {exc}") from None
    if isinstance(data, list):
        data = {"matrix": data}
    if not isinstance(data, dict):
        raise InputError("expected a JSON object")
    if "birkhoff" in data:
        return w_from_birkhoff(BirkhoffParams.from_dict(data["birkhoff"]), tol)
    if "matrix" in data:
        raw = data["matrix"]
        try:
            values = np.array(raw, dtype=float).ravel()
        except (TypeError, ValueError):
            raise InputError("'matrix' must be 9 numbers (row-major) or a 3x3 nested list") from None
        if values.size != 9:
            raise InputError(f"'matrix' must hold 9 numbers, got {values.size}")
        w = data.get("w")
        if w is not None and not isinstance(w, (int, float)):
            raise InputError("'w' must be a number")
        return WMatrix(values.reshape(3, 3), w=w, tol=tol)
    if set(data) >= {"a", "b", "c"}:
        return w_from_birkhoff(BirkhoffParams.from_dict(data), tol)
    if "circulant" in data:
        vals = data["circulant"]
        if not isinstance(vals, (list, tuple)) or len(vals) != 3:
            raise InputError("'circulant' must be [a, b, c]")
        return WMatrix.from_circulant(*map(float, vals), tol=tol)
    raise InputError("JSON input needs one of 'matrix', 'birkhoff', 'circulant' or fields a,b,c[,d,e,f]")
