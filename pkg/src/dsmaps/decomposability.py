"""Decomposability of Phi_W: explicit A + (id (x) T) B split when it exists,
a Stormer-type witness when it cannot, and the reduction to the circulant part."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError
from .model import WMatrix, choi_matrix, partial_transpose
from .numerics import min_eig
from .positivity import PAIRS, PositivityVerdict, Tri, circulant_positive


@dataclass
class Decomposition:
    A: np.ndarray
    B: np.ndarray
    residual: float
    min_eig_A: float
    min_eig_B: float

    def to_dict(self) -> dict:
        return {
            "A": [float(v) for v in self.A.ravel()],
            "B": [float(v) for v in self.B.ravel()],
            "residual": self.residual,
            "min_eig_A": self.min_eig_A,
            "min_eig_B": self.min_eig_B,
        }


@dataclass
class DecomposabilityVerdict:
    decomposable: Tri
    sufficient_holds: bool
    necessary_holds: bool
    circulant_nondecomposable: bool
    basis: str
    decomposition: Decomposition | None = None
    witness_value: float | None = None
    infimum_attained: bool = True
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "decomposable": self.decomposable.value,
            "basis": self.basis,
            "sufficient_holds": self.sufficient_holds,
            "necessary_holds": self.necessary_holds,
            "circulant_nondecomposable": self.circulant_nondecomposable,
            "witness_value": self.witness_value,
            "infimum_attained": self.infimum_attained,
            "decomposition": None if self.decomposition is None else self.decomposition.to_dict(),
            "notes": list(self.notes),
        }


def _root_products(W: WMatrix) -> dict[tuple[int, int], float]:
    d = W.diag
    return {(i, j): math.sqrt(max(d[i] - 1.0, 0.0) * max(d[j] - 1.0, 0.0)) for i, j in PAIRS}


def sufficient_margins(W: WMatrix) -> tuple[float, float, float]:
    """w_ij w_ji - ((sqrt((w_ii-1)(w_jj-1)) - 2) / 2)^2 per pair; -inf if some w_ii < 1."""
    m = W.entries
    eps = W.tol.eps_eq
    if np.any(W.diag < 1.0 - eps):
        return (-math.inf,) * 3
    roots = _root_products(W)
    return tuple(m[i, j] * m[j, i] - ((roots[i, j] - 2.0) / 2.0) ** 2 for i, j in PAIRS)


def sufficient_condition(W: WMatrix) -> bool:
    eps = W.tol.eps_eq
    return all(x >= -eps * (1.0 + W.w * W.w) for x in sufficient_margins(W))


def build_decomposition(W: WMatrix) -> Decomposition:
    """Explicit A, B >= 0 with choi(W) = A + (id (x) T) B."""
    if not sufficient_condition(W):
        raise InputError("W does not satisfy the sufficient decomposability condition")
    m = W.entries
    roots = _root_products(W)
    A = np.zeros((9, 9))
    B = np.zeros((9, 9))
    for i in range(3):
        A[4 * i, 4 * i] = m[i, i] - 1.0
    for i, j in PAIRS:
        aij = -0.5 * roots[i, j]
        bij = 0.5 * roots[i, j] - 1.0
        A[4 * i, 4 * j] = A[4 * j, 4 * i] = aij
        # slots (3i + j) and (3j + i) are swapped by the partial transpose onto (4i, 4j)
        p, q = 3 * i + j, 3 * j + i
        B[p, p] = m[j, i]
        B[q, q] = m[i, j]
        B[p, q] = B[q, p] = bij
    choi = choi_matrix(W)
    residual = float(np.abs(choi - A - partial_transpose(B)).max())
    return Decomposition(A, B, residual, float(min_eig(A)), float(min_eig(B)))


def witness_matrix(eps) -> np.ndarray:
    """The 9x9 X with X >= 0 and (id (x) T) X >= 0 parameterized by eps_1..3 > 0."""
    e1, e2, e3 = _check_eps(eps)
    X = np.zeros((9, 9))
    for i in range(3):
        for j in range(3):
            X[4 * i, 4 * j] = 1.0
    for slot, val in zip((1, 2, 3, 5, 6, 7), (e1, 1 / e2, 1 / e1, e3, e2, 1 / e3)):
        X[slot, slot] = val
    return X


def _check_eps(eps) -> tuple[float, float, float]:
    e = tuple(float(v) for v in eps)
    if len(e) != 3 or not all(v > 0.0 and math.isfinite(v) for v in e):
        raise InputError(f"witness parameters must be three positive reals, got {eps!r}")
    return e


def witness_trace(W: WMatrix, eps) -> float:
    """Tr(choi(W) X(eps)) in closed form."""
    e1, e2, e3 = _check_eps(eps)
    m = W.entries
    return float(np.trace(m)
                 + (e1 * m[1, 0] + m[0, 1] / e1)
                 + (e2 * m[0, 2] + m[2, 0] / e2)
                 + (e3 * m[2, 1] + m[1, 2] / e3) - 9.0)


def witness_trace_dense(W: WMatrix, eps) -> float:
    return float(np.trace(choi_matrix(W) @ witness_matrix(eps)))


def necessary_value(W: WMatrix) -> float:
    """inf over eps of the witness trace: sum w_ii + 2 sum sqrt(w_ij w_ji) - 9."""
    m = W.entries
    return float(np.trace(m) + 2.0 * sum(math.sqrt(m[i, j] * m[j, i]) for i, j in PAIRS) - 9.0)


def necessary_condition(W: WMatrix) -> tuple[bool, float]:
    value = necessary_value(W)
    return value >= -W.tol.eps_eq * (1.0 + W.w), value


def optimal_eps(W: WMatrix) -> tuple[tuple[float, float, float], bool]:
    """Minimizing eps for the witness trace, and whether the infimum is attained.

    When w_ij w_ji = 0 but one factor is positive the infimum is only reached
    in a limit; a finite stand-in (1e8 or 1e-8) is returned instead.
    """
    m = W.entries
    attained = True
    out = []
    # eps_1 pairs (w21, w12), eps_2 (w13, w31), eps_3 (w32, w23): eps * p + q / eps
    for p, q in ((m[1, 0], m[0, 1]), (m[0, 2], m[2, 0]), (m[2, 1], m[1, 2])):
        if p > 0.0 and q > 0.0:
            out.append(math.sqrt(q / p))
        elif p == 0.0 and q == 0.0:
            out.append(1.0)
        else:
            attained = False
            out.append(1e8 if p == 0.0 else 1e-8)
    return tuple(out), attained


def circulant_reduction(W: WMatrix) -> bool:
    """True when the circulant part alone certifies Phi_W non-decomposable."""
    # the cyclic average of W is circ(a, b, c) with (a, b, c) the gauge-fixed circulant part
    a, b, c = W.birkhoff.circulant_part
    eps = W.tol.eps_eq
    return (a < 3.0 - eps and b * c < ((3.0 - a) / 2.0) ** 2 - eps
            and circulant_positive(a + eps, b + eps, c + eps))


def classify_decomposability(W: WMatrix, pv: PositivityVerdict, certify: bool = True) -> DecomposabilityVerdict:
    """Precedence: CP, then the explicit split, then the two non-decomposability routes."""
    suff = sufficient_condition(W)
    nec, value = necessary_condition(W)
    circ = circulant_reduction(W)
    _, attained = optimal_eps(W)
    common = dict(sufficient_holds=suff, necessary_holds=nec, circulant_nondecomposable=circ,
                  witness_value=value, infimum_attained=attained)
    if pv.positive is Tri.NO:
        return DecomposabilityVerdict(Tri.NOT_APPLICABLE, basis="not-positive", **common)
    if pv.cp:
        dec = None
        if certify:
            A = choi_matrix(W)
            dec = Decomposition(A, np.zeros((9, 9)), 0.0, float(min_eig(A)), 0.0)
        return DecomposabilityVerdict(Tri.YES, basis="completely-positive", decomposition=dec, **common)
    if suff:
        dec = build_decomposition(W) if certify else None
        notes = []
        if dec is not None and min(dec.min_eig_A, dec.min_eig_B) < -W.tol.eps_psd:
            notes.append("explicit split is not PSD within eps_psd")
            return DecomposabilityVerdict(Tri.UNKNOWN, basis="split-failed", decomposition=dec,
                                          notes=notes, **common)
        return DecomposabilityVerdict(Tri.YES, basis="explicit-split", decomposition=dec, **common)
    if not nec:
        return DecomposabilityVerdict(Tri.NO, basis="witness", **common)
    if circ:
        return DecomposabilityVerdict(Tri.NO, basis="circulant-reduction", **common)
    return DecomposabilityVerdict(Tri.UNKNOWN, basis="gap", **common)
