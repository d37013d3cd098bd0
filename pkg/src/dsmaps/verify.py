"""Seeded agreement checks between the closed-form criteria and the brute-force oracles."""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .decomposability import (build_decomposition, necessary_value, sufficient_condition,
                              witness_trace)
from .model import WMatrix, choi_matrix, w_from_birkhoff, BirkhoffParams
from .numerics import eig_sym, is_psd
from .oracles import fd_hessian_f, max_f_on_simplex, rank_one_probe
from .positivity import (Tri, classify_positivity, edge_margins, hessian_condition, hessian_matrix,
                         hessian_spectrum, is_completely_positive)
from .region import assemble_region, edge_residuals
from .sampling import random_birkhoff, random_ds, random_w

BAND = 1e-6


@dataclass
class FamilyResult:
    name: str
    checked: int = 0
    failures: list[str] = field(default_factory=list)
    exempt: int = 0
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "checked": self.checked,
                "exempt": self.exempt, "failures": self.failures[:10], "seconds": round(self.seconds, 3)}


def _eig(rng, n):
    res = FamilyResult("eig_sym")
    for _ in range(n):
        k = int(rng.integers(2, 10))
        m = rng.normal(size=(k, k))
        m = m + m.T
        vals, vecs = eig_sym(m)
        ref = np.linalg.eigvalsh(m)
        recon = np.abs(vecs @ np.diag(vals) @ vecs.T - m).max()
        if np.abs(vals - ref).max() > 1e-8 or recon > 1e-10 * np.abs(m).max():
            res.failures.append(f"dim {k}: eigen mismatch")
        res.checked += 1
    return res


def _cp(rng, n):
    res = FamilyResult("cp_consistency")
    for _ in range(n):
        W = random_ds(rng)
        if is_completely_positive(W) != is_psd(choi_matrix(W), W.tol):
            res.failures.append(f"{W!r}")
        res.checked += 1
    return res


def _gate(rng, n):
    res = FamilyResult("hessian_gate")
    for _ in range(n):
        W = random_ds(rng)
        lam2, _ = hessian_spectrum(W)
        if hessian_condition(W) != (lam2 >= -1e-9 * (1 + W.w ** 2)):
            res.failures.append(f"{W!r}: lambda2 = {lam2:.3e}")
        res.checked += 1
    return res


def _fd(rng, n):
    res = FamilyResult("hessian_identity")
    for _ in range(n):
        W = random_ds(rng)
        target = -hessian_matrix(W) / W.w ** 3
        err = np.abs(fd_hessian_f(W) - target).max() / max(np.abs(target).max(), 1e-12)
        if err > 1e-4:
            res.failures.append(f"{W!r}: relative error {err:.2e}")
        res.checked += 1
    return res


def _split(rng, n):
    res = FamilyResult("explicit_split")
    while res.checked < n:
        W = random_ds(rng, w=rng.uniform(3.0, 8.0))
        if not sufficient_condition(W):
            continue
        dec = build_decomposition(W)
        if dec.residual > 1e-12 or dec.min_eig_A < -1e-9 or dec.min_eig_B < -1e-9:
            res.failures.append(f"{W!r}: residual {dec.residual:.1e}, eigs {dec.min_eig_A:.1e}, {dec.min_eig_B:.1e}")
        res.checked += 1
    return res


def _witness(rng, n):
    res = FamilyResult("witness_infimum")
    for _ in range(n):
        W = random_ds(rng)
        eps = np.exp(rng.uniform(-6, 6, size=(20_000, 3)))
        m = W.entries
        vals = (np.trace(m) + eps[:, 0] * m[1, 0] + m[0, 1] / eps[:, 0] + eps[:, 1] * m[0, 2]
                + m[2, 0] / eps[:, 1] + eps[:, 2] * m[2, 1] + m[1, 2] / eps[:, 2] - 9.0)
        best = float(vals.min())
        target = necessary_value(W)
        if best < target - 1e-9 or abs(witness_trace(W, eps[int(np.argmin(vals))]) - best) > 1e-9:
            res.failures.append(f"{W!r}: sampled {best:.6f} below infimum {target:.6f}")
        res.checked += 1
    return res


def _concordance(rng, n, samples, depth, adversarial=False):
    res = FamilyResult("oracle_concordance")
    while res.checked < n:
        if adversarial:
            W = _near_edge(rng)
            if W is None:
                continue
        else:
            W = random_w(rng, a=(0.8, 3.0), bc=(0.0, 1.6), spread=0.5)
        pv = classify_positivity(W, search=False)
        if not pv.gate:
            continue
        res.checked += 1
        mf = max_f_on_simplex(W, depth=depth).value
        if abs(mf - 1.0) < BAND:
            res.exempt += 1
            continue
        probe = rank_one_probe(W, samples=samples, seed=int(rng.integers(2 ** 31)))
        if pv.positive is Tri.YES and (mf > 1.0 or probe.min_eigenvalue_found < -BAND):
            res.failures.append(f"{W!r}: classified positive, max f = {mf:.8f}, probe {probe.min_eigenvalue_found:.2e}")
        if pv.positive is Tri.NO and mf <= 1.0:
            res.failures.append(f"{W!r}: classified not positive, max f = {mf:.8f}")
    return res


def _near_edge(rng):
    p = random_birkhoff(rng, a=(1.2, 2.5), bc=(0.0, 1.5), spread=0.3)
    W = w_from_birkhoff(p)
    margins = edge_margins(W)
    k = int(np.argmin(margins))
    if not math.isfinite(margins[k]):
        return None
    # nudge the circulant part along b = c until edge k saturates, within 1e-9
    lo, hi = -1.0, 1.0
    def margin(t):
        q = BirkhoffParams(p.a, p.b + t, p.c + t, p.d, p.e, p.f)
        if np.any(q.entries() < 0):
            return -math.inf
        return min(edge_margins(WMatrix(q.entries())))
    if not (margin(lo) < 0 < margin(hi)):
        return None
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        lo, hi = (mid, hi) if margin(mid) < 0 else (lo, mid)
    q = BirkhoffParams(p.a, p.b + hi, p.c + hi, p.d, p.e, p.f)
    W = w_from_birkhoff(q)
    return None if W.block_diagonal else W


def _arcs(rng, n):
    res = FamilyResult("arc_saturation")
    for _ in range(n):
        a, b, c = rng.uniform(1.0, 2.5), rng.uniform(0.0, 1.5), rng.uniform(0.0, 1.5)
        region = assemble_region(a, b, c)
        for arc in region.edge_arcs:
            ok = arc.finite()
            if not ok.any():
                continue
            r = edge_residuals(a, b, c, *arc.dpe())[:, ok]
            sat = np.nanmin(np.abs(r), axis=0).max()
            if sat > 1e-6:
                res.failures.append(f"({a:.4f},{b:.4f},{c:.4f}) {arc.name}: residual {sat:.2e}")
        res.checked += 1
    return res


def _circle(rng, n):
    res = FamilyResult("hessian_circle")
    for _ in range(n):
        a, b, c = rng.uniform(1.0, 3.0), rng.uniform(0.0, 1.5), rng.uniform(0.0, 1.5)
        region = assemble_region(a, b, c)
        line = region.hessian_circle
        if line.is_empty:
            continue
        d, e, f = line.dpe()
        for k in range(0, line.sample_count, 20):
            p = BirkhoffParams(a, b, c, float(d[k]), float(e[k]), float(f[k]))
            if np.any(p.entries() < 0):
                continue
            lam2, _ = hessian_spectrum(WMatrix(p.entries()))
            if abs(lam2) > 1e-6:
                res.failures.append(f"({a:.3f},{b:.3f},{c:.3f}) sample {k}: lambda2 = {lam2:.2e}")
        res.checked += 1
    return res


FAMILIES = {
    "eig_sym": (_eig, 1000),
    "cp_consistency": (_cp, 10_000),
    "hessian_gate": (_gate, 10_000),
    "hessian_identity": (_fd, 100),
    "explicit_split": (_split, 1000),
    "witness_infimum": (_witness, 200),
    "oracle_concordance": (_concordance, 100),
    "arc_saturation": (_arcs, 40),
    "hessian_circle": (_circle, 40),
}


def run_verify(seed: int = 0, counts: int | None = None, adversarial: bool = False,
               samples: int = 10_000, depth: int = 200) -> dict:
    """Run every invariant family; ``counts`` caps each family for a quick partial run."""
    rng = np.random.default_rng(seed)
    results = []
    for name, (fn, default) in FAMILIES.items():
        n = default if counts is None else min(counts, default)
        t0 = time.perf_counter()
        if name == "oracle_concordance":
            r = fn(rng, n, samples, depth, adversarial=adversarial)
        else:
            r = fn(rng, n)
        r.seconds = time.perf_counter() - t0
        results.append(r)
    return {
        "seed": seed,
        "partial": counts is not None,
        "adversarial": adversarial,
        "boundary_band": BAND,
        "passed": all(r.passed for r in results),
        "families": [r.to_dict() for r in results],
    }
