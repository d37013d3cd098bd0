"""One-call classification of Phi_W combining positivity and decomposability."""
from __future__ import annotations

from dataclasses import dataclass

from .decomposability import DecomposabilityVerdict, classify_decomposability
from .model import BirkhoffParams, WMatrix
from .positivity import PositivityVerdict, Tri, classify_positivity


@dataclass
class Classification:
    W: WMatrix
    params: BirkhoffParams
    positivity: PositivityVerdict
    decomposability: DecomposabilityVerdict

    @property
    def positive(self) -> Tri:
        return self.positivity.positive

    @property
    def cp(self) -> bool:
        return self.positivity.cp

    @property
    def decomposable(self) -> Tri:
        return self.decomposability.decomposable

    def summary(self) -> str:
        return (f"positive={self.positive.value} cp={'yes' if self.cp else 'no'} "
                f"decomposable={self.decomposable.value}")

    def to_dict(self) -> dict:
        return {
            "W": self.W.to_dict(),
            "birkhoff": self.params.to_dict(),
            "block_diagonal": self.W.block_diagonal,
            "positivity": self.positivity.to_dict(),
            "decomposability": self.decomposability.to_dict(),
            "summary": {
                "positive": self.positive.value,
                "cp": "yes" if self.cp else "no",
                "decomposable": self.decomposable.value,
            },
        }


def classify(W: WMatrix, search: bool = True, certify: bool = True) -> Classification:
    """Classify Phi_W.

    A verified explicit split A + (id (x) T) B with A, B >= 0 makes the map
    decomposable and therefore positive, so it settles positivity even where
    the Hessian gate leaves it open.
    """
    pv = classify_positivity(W, search=search)
    dv = classify_decomposability(W, pv, certify=certify)
    if pv.positive is Tri.UNKNOWN and dv.decomposable is Tri.YES:
        pv.positive, pv.basis = Tri.YES, "decomposable-split"
    return Classification(W, W.birkhoff, pv, dv)
