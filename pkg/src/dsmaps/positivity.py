"""Positivity and complete positivity of Phi_W.

Under the Hessian gate (W_hat positive semidefinite with kernel spanned by
(1, 1, 1)), Phi_W is positive exactly when the vertex, edge and interior
conditions hold. Outside the gate those three conditions stay necessary, so a
failure still proves non-positivity; otherwise the verdict is ``unknown``
unless a brute-force search turns up a negative rank-one image.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import ConsistencyError, SingularBoundaryError, SingularityError
from .model import WMatrix, delta
from .numerics import eig_sym, min_eig

PAIRS = ((0, 1), (0, 2), (1, 2))

# orthonormal basis of the plane orthogonal to (1, 1, 1)
PERP = np.array([[1.0, 1.0], [-1.0, 1.0], [0.0, -2.0]]) / np.array([math.sqrt(2.0), math.sqrt(6.0)])

# |lambda_2| beyond this (relative to w^2) means the two Hessian tests truly disagree
CONSISTENCY_BAND = 1e-7


class Tri(str, enum.Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"
    NOT_APPLICABLE = "not-applicable"

    def __bool__(self):
        return self is Tri.YES

    @classmethod
    def of(cls, flag: bool) -> "Tri":
        return cls.YES if flag else cls.NO


def is_completely_positive(W: WMatrix) -> bool:
    """Harmonic-mean test: sum_i 1 / w_ii <= 1."""
    d = W.diag
    if np.any(d <= 0.0):
        return False
    return float(np.sum(1.0 / d)) <= 1.0 + W.tol.eps_eq


def cp_test_matrix(W: WMatrix) -> np.ndarray:
    """The 3x3 block of the Choi matrix on slots (11, 22, 33)."""
    return np.diag(W.diag) - np.ones((3, 3))


def vertex_conditions(W: WMatrix) -> tuple[bool, bool, bool]:
    eps = W.tol.eps_eq
    return tuple(bool(x >= 1.0 - eps) for x in W.diag)


def edge_margins(W: WMatrix) -> tuple[float, float, float]:
    """sqrt((w_ii-1)(w_jj-1)) + sqrt(w_ij w_ji) - 1 for pairs (1,2), (1,3), (2,3).

    ``-inf`` marks a pair whose vertex condition already fails.
    """
    m = W.entries
    eps = W.tol.eps_eq
    out = []
    for i, j in PAIRS:
        if m[i, i] < 1.0 - eps or m[j, j] < 1.0 - eps:
            out.append(-math.inf)
            continue
        p = max(m[i, i] - 1.0, 0.0) * max(m[j, j] - 1.0, 0.0)
        out.append(math.sqrt(p) + math.sqrt(m[i, j] * m[j, i]) - 1.0)
    return tuple(out)


def edge_conditions(W: WMatrix) -> tuple[bool, bool, bool]:
    eps = W.tol.eps_eq
    return tuple(bool(x >= -eps) for x in edge_margins(W))


def interior_condition(W: WMatrix) -> bool:
    return W.w >= 3.0 - W.tol.eps_eq


def hessian_matrix(W: WMatrix) -> np.ndarray:
    """W_hat = w (W + W^T) - 2 W^T W."""
    m = W.entries
    h = W.w * (m + m.T) - 2.0 * m.T @ m
    return 0.5 * (h + h.T)


def hessian_spectrum(W: WMatrix) -> tuple[float, float]:
    """Eigenvalues of W_hat restricted to the plane orthogonal to (1, 1, 1)."""
    vals, _ = eig_sym(PERP.T @ hessian_matrix(W) @ PERP)
    return float(vals[0]), float(vals[1])


def hessian_radius_term(W: WMatrix) -> float:
    """w - sqrt((Tr W - 2w)^2 + 3 delta^2); nonnegative inside the gate."""
    return W.w - math.hypot(W.trace - 2.0 * W.w, math.sqrt(3.0) * delta(W))


def hessian_condition(W: WMatrix) -> bool:
    """Closed-form PSD test for W_hat.

    The right-hand side is a square, so the expression being squared must be
    nonnegative as well; without that guard the test would accept matrices
    whose W_hat has a negative eigenvalue.
    """
    eps = W.tol.eps_eq
    w = W.w
    slack = eps * (1.0 + w * w)
    rad = hessian_radius_term(W)
    if rad < -eps * (1.0 + w):
        return False
    d = W.diag
    lhs = (d[0] - d[1]) ** 2 + (d[1] - d[2]) ** 2 + (d[2] - d[0]) ** 2
    return bool(lhs <= 0.5 * max(rad, 0.0) ** 2 + slack)


def _z(W: WMatrix, x) -> np.ndarray:
    return W.entries @ np.asarray(x, dtype=float)


def f_value(W: WMatrix, x) -> float:
    """f(x) = sum_i x_i / z_i with z = W x, on the closed simplex."""
    x = np.asarray(x, dtype=float)
    z = _z(W, x)
    total = 0.0
    for xi, zi in zip(x, z):
        if xi > 0.0:
            if zi <= 0.0:
                raise SingularityError(f"z_i = {zi!r} <= 0 at x_i = {xi!r}", x=x)
            total += xi / zi
        elif zi == 0.0 and W.block_diagonal:
            raise SingularBoundaryError("0/0 term of f on the singular boundary of a block-diagonal W")
    return total


def principal_minor(W: WMatrix, x, index) -> float:
    """M_I(x) = prod_{i in I} z_i - sum_{i in I} x_i prod_{j in I, j != i} z_j.

    ``index`` holds 0-based indices. For I = {0, 1, 2} this is the determinant
    of Phi_W(psi psi^dagger) with x_i = |psi_i|^2.
    """
    idx = sorted(set(int(i) for i in index))
    if not idx or idx[0] < 0 or idx[-1] > 2:
        raise ValueError(f"index set must be a nonempty subset of {{0, 1, 2}}, got {index!r}")
    x = np.asarray(x, dtype=float)
    z = _z(W, x)
    prod = math.prod(z[i] for i in idx)
    return prod - sum(x[i] * math.prod(z[j] for j in idx if j != i) for i in idx)


def rank_one_min_eig(W: WMatrix, x) -> float:
    """Smallest eigenvalue of Phi_W(psi psi^T) with psi = sqrt(x) (phases are irrelevant)."""
    x = np.clip(np.asarray(x, dtype=float), 0.0, None)
    psi = np.sqrt(x / x.sum())
    return float(min_eig(np.diag(_z(W, psi * psi)) - np.outer(psi, psi)))


@dataclass
class PositivityVerdict:
    cp: bool
    positive: Tri
    vertex: tuple[bool, bool, bool]
    edge: tuple[bool, bool, bool]
    interior: bool
    hessian: bool
    gate: bool
    basis: str
    witness: np.ndarray | None = None
    witness_eigenvalue: float | None = None
    hessian_eigenvalues: tuple[float, float] | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def necessary_ok(self) -> bool:
        return all(self.vertex) and all(self.edge) and self.interior

    def to_dict(self) -> dict:
        out = {
            "cp": self.cp,
            "positive": self.positive.value,
            "basis": self.basis,
            "conditions": {
                "vertex": list(self.vertex),
                "edge": list(self.edge),
                "interior": self.interior,
                "hessian": self.hessian,
                "gate": self.gate,
            },
            "hessian_eigenvalues": None if self.hessian_eigenvalues is None else list(self.hessian_eigenvalues),
            "witness": None,
            "witness_eigenvalue": self.witness_eigenvalue,
            "notes": list(self.notes),
        }
        if self.witness is not None:
            # |psi_i| followed by phases, which are always zero
            out["witness"] = [float(v) for v in np.abs(self.witness)] + [0.0, 0.0, 0.0]
        return out


def _edge_witness(W: WMatrix, i: int, j: int) -> np.ndarray:
    """Point on edge x_k = 0 minimizing det of the (i, j) block per unit x_i x_j."""
    m = W.entries
    alpha = (m[i, i] - 1.0) * m[j, i]
    beta = (m[j, j] - 1.0) * m[i, j]
    gamma = (m[i, i] - 1.0) * (m[j, j] - 1.0) - 1.0 + m[i, j] * m[j, i]
    if alpha > 0.0 and beta > 0.0:
        ratio = math.sqrt(beta / alpha)
    elif alpha <= 0.0 < beta:
        ratio = max(2.0 * beta / max(-gamma, 1e-300), 1.0)
    elif beta <= 0.0 < alpha:
        ratio = min(-gamma / (2.0 * alpha), 1.0) if gamma < 0 else 1.0
    else:
        ratio = 1.0
    x = np.zeros(3)
    x[i], x[j] = ratio, 1.0
    return x / x.sum()


def find_witness(W: WMatrix, vertex, edge, interior, search: bool = True):
    """Return ``(x, lambda_min)`` for the most negative rank-one image found, or None."""
    from . import oracles

    eps = W.tol.eps_psd
    candidates = []
    for i, ok in enumerate(vertex):
        if not ok:
            x = np.zeros(3)
            x[i] = 1.0
            candidates.append(x)
    for (i, j), ok in zip(PAIRS, edge):
        if not ok and vertex[i] and vertex[j]:
            candidates.append(_edge_witness(W, i, j))
    if not interior:
        candidates.append(np.full(3, 1.0 / 3.0))
    best = None
    for x in candidates:
        lam = rank_one_min_eig(W, x)
        if best is None or lam < best[1]:
            best = (x, lam)
    if (best is None or best[1] >= -eps) and search:
        x, lam = oracles.min_eigen_search(W)
        if best is None or lam < best[1]:
            best = (x, lam)
    if best is None or best[1] >= -eps:
        return None
    return best


def classify_positivity(W: WMatrix, search: bool = True) -> PositivityVerdict:
    """Decide positivity of Phi_W.

    ``search`` enables the brute-force witness search used when the Hessian
    gate fails and the closed-form conditions are inconclusive.
    """
    if W.block_diagonal:
        raise SingularBoundaryError(
            "W is block diagonal under a simultaneous permutation; "
            "the vertex/edge/interior criteria do not apply on this singular boundary")
    tol = W.tol
    cp = is_completely_positive(W)
    vertex = vertex_conditions(W)
    edge = edge_conditions(W)
    interior = interior_condition(W)
    hess = hessian_condition(W)
    lam2, lam3 = hessian_spectrum(W)
    notes = []
    scale = 1.0 + W.w * W.w
    eig_psd = bool(lam2 >= -tol.eps_psd * scale)
    if eig_psd != hess:
        if abs(lam2) > CONSISTENCY_BAND * scale:
            raise ConsistencyError(
                f"closed-form Hessian test says {hess} but W_hat restricted to 1-perp "
                f"has eigenvalues ({lam2:.3e}, {lam3:.3e})")
        notes.append("hessian condition on its boundary; closed form and eigenvalues disagree within rounding")
    # A unique maximiser needs ker W_hat = span(1): both perp eigenvalues strictly positive.
    strict = lam2 > tol.eps_psd * scale
    gate = bool(hess and eig_psd and strict)
    if hess and not strict:
        notes.append("W_hat is singular on 1-perp; interior maximum not known to be unique")
    necessary = all(vertex) and all(edge) and interior

    witness = witness_eig = None
    if not necessary:
        positive, basis = Tri.NO, "necessary-condition"
    elif cp:
        positive, basis = Tri.YES, "completely-positive"
    elif W.is_circulant:
        positive, basis = Tri.YES, "circulant"
    elif gate:
        positive, basis = Tri.YES, "hessian-gate"
    else:
        positive, basis = Tri.UNKNOWN, "outside-hessian-gate"

    if positive is Tri.NO or positive is Tri.UNKNOWN:
        found = find_witness(W, vertex, edge, interior, search=search)
        if found is not None:
            witness_x, witness_eig = found
            witness = np.sqrt(witness_x)
            if positive is Tri.UNKNOWN:
                positive, basis = Tri.NO, "oracle-witness"
        elif positive is Tri.NO:
            notes.append("necessary condition fails only within tolerance; no witness below -eps_psd")

    return PositivityVerdict(
        cp=cp, positive=positive, vertex=vertex, edge=edge, interior=interior,
        hessian=hess, gate=gate, basis=basis, witness=witness,
        witness_eigenvalue=witness_eig, hessian_eigenvalues=(lam2, lam3), notes=notes)


def circulant_positive(a: float, b: float, c: float) -> bool:
    """Positivity of the circulant family in closed form (no tolerance)."""
    if a < 1.0 or a + b + c < 3.0:
        return False
    return a > 2.0 or b * c >= (2.0 - a) ** 2


def all_minors(W: WMatrix, x) -> dict[tuple[int, ...], float]:
    return {I: principal_minor(W, x, I) for r in (1, 2, 3) for I in combinations(range(3), r)}
