"""Boundary curves of the admissible set in the plane d + e + f = 0 for fixed (a, b, c).

Polar coordinates put the projection of the d axis at angle 0:
``d = sqrt(2/3) r cos(phi)``, ``e = sqrt(2/3) r cos(phi + 2pi/3)``,
``f = sqrt(2/3) r cos(phi - 2pi/3)``, so ``r`` is the Euclidean norm of
``(d, e, f)``. Drawing coordinates rotate by a quarter turn so that the d axis
points up: ``x = r cos(phi + pi/2)``, ``y = r sin(phi + pi/2)``.

The edge arcs are computed in the unit ``r / sqrt(6)``, where the squared
saturation equation has the simplest coefficients, and converted back.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .numerics import Tolerance, default_tolerance, real_roots

SQRT6 = math.sqrt(6.0)
SQRT23 = math.sqrt(2.0 / 3.0)
TWO_PI_3 = 2.0 * math.pi / 3.0
FAMILIES = ("vertex_triangle", "edge_arcs", "hessian_circle", "cp_boundary")


# --------------------------------------------------------------------------
# coordinates
# --------------------------------------------------------------------------

def dpe_from_polar(r, phi):
    r, phi = np.asarray(r, dtype=float), np.asarray(phi, dtype=float)
    return (SQRT23 * r * np.cos(phi),
            SQRT23 * r * np.cos(phi + TWO_PI_3),
            SQRT23 * r * np.cos(phi - TWO_PI_3))


def polar_from_dpe(d, e, f):
    d, e, f = (np.asarray(v, dtype=float) for v in (d, e, f))
    # components along the d axis and the in-plane direction orthogonal to it
    u = (2.0 * d - e - f) / SQRT6
    v = (f - e) / math.sqrt(2.0)
    return np.hypot(u, v), np.arctan2(v, u)


def xy_from_polar(r, phi):
    r, phi = np.asarray(r, dtype=float), np.asarray(phi, dtype=float)
    return r * np.cos(phi + math.pi / 2.0), r * np.sin(phi + math.pi / 2.0)


def polar_from_xy(x, y):
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    return np.hypot(x, y), np.arctan2(y, x) - math.pi / 2.0


def xy_from_dpe(d, e, f):
    return xy_from_polar(*polar_from_dpe(d, e, f))


def dpe_from_xy(x, y):
    return dpe_from_polar(*polar_from_xy(x, y))


@dataclass(frozen=True)
class PlanePoint:
    x: float
    y: float

    @classmethod
    def from_polar(cls, r: float, phi: float) -> "PlanePoint":
        x, y = xy_from_polar(r, phi)
        return cls(float(x), float(y))

    @classmethod
    def from_dpe(cls, d: float, e: float, f: float) -> "PlanePoint":
        x, y = xy_from_dpe(d, e, f)
        return cls(float(x), float(y))

    @property
    def polar(self) -> tuple[float, float]:
        r, phi = polar_from_xy(self.x, self.y)
        return float(r), float(phi)

    @property
    def dpe(self) -> tuple[float, float, float]:
        return tuple(float(v) for v in dpe_from_xy(self.x, self.y))


# --------------------------------------------------------------------------
# curves
# --------------------------------------------------------------------------

@dataclass
class Polyline:
    """Points of one curve; NaN entries break the line."""

    name: str
    x: np.ndarray
    y: np.ndarray
    closed: bool = False
    status: str = "ok"  # ok | empty | degenerate
    edge: np.ndarray | None = None
    r_raw: np.ndarray | None = None
    clamped: np.ndarray | None = None

    @classmethod
    def empty(cls, name: str, status: str = "empty") -> "Polyline":
        return cls(name, np.empty(0), np.empty(0), status=status)

    @property
    def is_empty(self) -> bool:
        return self.x.size == 0 or not np.any(np.isfinite(self.x))

    @property
    def polar(self) -> tuple[np.ndarray, np.ndarray]:
        return polar_from_xy(self.x, self.y)

    @property
    def sample_count(self) -> int:
        return int(self.x.size)

    def finite(self) -> np.ndarray:
        return np.isfinite(self.x) & np.isfinite(self.y)

    def dpe(self):
        return dpe_from_xy(self.x, self.y)


@dataclass(frozen=True)
class RegionConfig:
    arc_samples: int = 201
    circle_samples: int = 601
    cp_samples: int = 601
    triangle_samples: int = 101
    fold: str = "three-way"  # or "two-way", the plain two-arc fold

    def __post_init__(self):
        if self.arc_samples < 5 or self.arc_samples % 2 == 0:
            raise ValueError("arc_samples must be odd and >= 5 so the fold point is a sample")
        if self.fold not in ("two-way", "three-way"):
            raise ValueError("fold must be 'two-way' or 'three-way'")


def mu(a: float, b: float, c: float) -> float:
    return min(a - 1.0, b, c)


def triangle_vertices(a: float, b: float, c: float) -> list[tuple[float, float, float]]:
    m = mu(a, b, c)
    return [(2 * m, -m, -m), (-m, 2 * m, -m), (-m, -m, 2 * m)]


def _max_neg_cos(phi):
    phi = np.asarray(phi, dtype=float)
    return np.maximum.reduce([-np.cos(phi), -np.cos(phi + TWO_PI_3), -np.cos(phi - TWO_PI_3)])


def triangle_bound(a: float, b: float, c: float, phi):
    """Radius (plane units) at which the ray at ``phi`` leaves the vertex triangle."""
    return mu(a, b, c) / (SQRT23 * _max_neg_cos(phi))


def triangle(a: float, b: float, c: float, samples: int = 101) -> Polyline:
    """Closed polyline D -> E -> F -> D of the vertex-condition triangle."""
    m = mu(a, b, c)
    if m < 0.0:
        return Polyline.empty("vertex_triangle")
    if m == 0.0:
        return Polyline("vertex_triangle", np.zeros(1), np.zeros(1), closed=True, status="degenerate")
    verts = [xy_from_dpe(*v) for v in triangle_vertices(a, b, c)]
    t = np.linspace(0.0, 1.0, samples)[:-1]
    xs, ys = [], []
    for k in range(3):
        (x0, y0), (x1, y1) = verts[k], verts[(k + 1) % 3]
        xs.append(x0 + t * (x1 - x0))
        ys.append(y0 + t * (y1 - y0))
    xs.append(np.array([verts[0][0]]))
    ys.append(np.array([verts[0][1]]))
    return Polyline("vertex_triangle", np.concatenate(xs).astype(float),
                    np.concatenate(ys).astype(float), closed=True)


def hessian_radius(a: float, b: float, c: float) -> float:
    """Radius of the Hessian circle; negative means the condition fails everywhere."""
    return (a + b + c - math.hypot(a - 2 * b - 2 * c, math.sqrt(3.0) * (b - c))) / SQRT6


def hessian_circle(a: float, b: float, c: float, samples: int = 601) -> Polyline:
    rad = hessian_radius(a, b, c)
    if rad < 0.0:
        return Polyline.empty("hessian_circle")
    t = np.linspace(0.0, 2.0 * math.pi, samples)
    status = "degenerate" if rad == 0.0 else "ok"
    return Polyline("hessian_circle", rad * np.cos(t), rad * np.sin(t), closed=True, status=status)


# --------------------------------------------------------------------------
# edge conditions
# --------------------------------------------------------------------------

def _sqrt_or_nan(v, slack: float = 1e-12):
    v = np.asarray(v, dtype=float)
    return np.sqrt(np.where((v < 0.0) & (v >= -slack), 0.0, np.where(v < 0.0, np.nan, v)))


def edge_residuals(a: float, b: float, c: float, d, e, f) -> np.ndarray:
    """LHS - 1 of the three edge conditions at (d, e, f); NaN where a radicand is negative.

    Edge k pairs the diagonal entries (1,2), (1,3), (2,3) of W respectively.
    """
    d, e, f = (np.asarray(v, dtype=float) for v in (d, e, f))
    r1 = _sqrt_or_nan((a + f - 1) * (a + e - 1)) + _sqrt_or_nan((b + d) * (c + d)) - 1.0
    r2 = _sqrt_or_nan((a + d - 1) * (a + f - 1)) + _sqrt_or_nan((b + e) * (c + e)) - 1.0
    r3 = _sqrt_or_nan((a + e - 1) * (a + d - 1)) + _sqrt_or_nan((b + f) * (c + f)) - 1.0
    return np.stack([r1, r2, r3])


def bean_quartic(a: float, b: float, c: float, phi: float) -> np.ndarray:
    """Coefficients (highest first) of the squared edge-1 saturation equation in r / sqrt(6)."""
    cp = math.cos(phi)
    s = a + b + c - 1.0
    k = (a - 1.0) ** 2 - b * c - 1.0
    return np.array([
        9.0 / 4.0,
        3.0 * s * cp,
        (s * s - 4.0) * cp * cp - 1.5 * k,
        -(s * k + 2.0 * (b + c)) * cp,
        k * k / 4.0 - b * c,
    ])


def _edge1_unsquared(a, b, c, phi, rho):
    # edge-1 residual in the quartic's radial unit
    cp, sp = math.cos(phi), math.sin(phi)
    first = (a - 1 - rho * cp) ** 2 - 3 * rho * rho * sp * sp
    second = ((b + c) / 2 + 2 * rho * cp) ** 2 - ((b - c) / 2) ** 2
    if first < -1e-12 or second < -1e-12:
        return math.nan
    return math.sqrt(max(first, 0.0)) + math.sqrt(max(second, 0.0)) - 1.0


def edge_radius(a: float, b: float, c: float, phi, tol: Tolerance | None = None) -> np.ndarray:
    """Smallest admissible saturation radius of edge condition 1 along each ray.

    A root counts when it is positive, satisfies the unsquared equation to
    ``eps_root`` and lies in the vertex triangle. NaN marks rays without one.
    """
    tol = tol or default_tolerance()
    phis = np.atleast_1d(np.asarray(phi, dtype=float))
    m = mu(a, b, c)
    out = np.full(phis.shape, np.nan)
    for k, p in enumerate(phis):
        bound = 0.5 * m / _max_neg_cos(p)
        best = math.inf
        for rho in real_roots(bean_quartic(a, b, c, p), tol):
            if rho <= 0.0 or rho > bound * (1.0 + 1e-12):
                continue
            res = _edge1_unsquared(a, b, c, p, rho)
            if abs(res) < tol.eps_root:
                best = min(best, rho)
        if math.isfinite(best):
            out[k] = best * SQRT6
    return out


def edge_radius_k(a, b, c, phi, k: int, tol: Tolerance | None = None) -> np.ndarray:
    """Saturation radius of edge condition ``k`` (0, 1, 2) along ``phi``."""
    shift = (0.0, TWO_PI_3, -TWO_PI_3)[k]
    return edge_radius(a, b, c, np.asarray(phi, dtype=float) + shift, tol)


def bean_arcs(a: float, b: float, c: float, config: RegionConfig = RegionConfig(),
              tol: Tolerance | None = None) -> list[Polyline]:
    """The three arcs of the curved triangle cut out by the edge conditions.

    The arc opposite vertex D spans phi in [2pi/3, 4pi/3] and is symmetric
    about pi. Its first half is the pointwise minimum of edge 1 and the
    prolongation of a neighbouring arc, found by evaluating edge 1 on
    [pi/3, pi] and folding at 2pi/3. With ``fold="three-way"`` the third
    edge is included in the minimum as well. The half is then mirrored and the
    whole arc rotated by +-2pi/3.
    """
    tol = tol or default_tolerance()
    n = config.arc_samples
    mid = (n - 1) // 2
    phi = np.linspace(math.pi / 3.0, math.pi, n)
    r = edge_radius(a, b, c, phi, tol)
    half = np.fmin(r[:mid + 1][::-1], r[mid:])
    if config.fold == "three-way":
        half = np.fmin(half, edge_radius(a, b, c, phi[mid:] - TWO_PI_3, tol))
    # mirror about phi = pi without repeating the sample at pi
    full = np.concatenate([half, half[-2::-1]])
    phi_full = np.linspace(TWO_PI_3, 2.0 * TWO_PI_3, full.size)
    arcs = []
    # edge k's curve is edge 1's rotated by -2pi/3 (k = 2) or +2pi/3 (k = 3)
    for k, rot in enumerate((0.0, -TWO_PI_3, TWO_PI_3)):
        x, y = xy_from_polar(full, phi_full + rot)
        line = Polyline(f"edge_arc_{k + 1}", np.asarray(x, float), np.asarray(y, float))
        if line.is_empty:
            line.status = "empty"
        else:
            d, e, f = line.dpe()
            res = edge_residuals(a, b, c, d, e, f)
            edge = np.where(line.finite(), np.nanargmin(np.where(np.isnan(res), np.inf, np.abs(res)), axis=0), -1)
            line.edge = edge
        arcs.append(line)
    return arcs


def origin_in_edge_region(a: float, b: float, c: float) -> bool:
    """All three edge conditions at d = e = f = 0; equivalent to 2 - a <= sqrt(bc) for a >= 1."""
    res = edge_residuals(a, b, c, 0.0, 0.0, 0.0)
    return bool(np.all(np.nan_to_num(res, nan=-1.0) >= -1e-12))


def arcs_contain_origin(arcs: list[Polyline], a: float, b: float, c: float) -> bool:
    """Decide from the arcs whether the curved triangle encloses the origin.

    Each arc point is the first saturation met along its ray. Halfway to it
    the edge conditions hold for every ray exactly when the origin is inside.
    """
    mids = []
    for line in arcs:
        ok = line.finite()
        if ok.any():
            mids.append((0.5 * line.x[ok], 0.5 * line.y[ok]))
    if not mids:
        return origin_in_edge_region(a, b, c)
    x = np.concatenate([m[0] for m in mids])
    y = np.concatenate([m[1] for m in mids])
    res = edge_residuals(a, b, c, *dpe_from_xy(x, y))
    return bool(np.all(np.nan_to_num(res, nan=-1.0) >= -1e-9))


# --------------------------------------------------------------------------
# complete positivity
# --------------------------------------------------------------------------

def cp_cubic(a: float, phi: float) -> np.ndarray:
    """Saturation of sum 1/(a + d_i) = 1 along ``phi`` as a cubic in r (plane units)."""
    cp = math.cos(phi)
    return np.array([cp * (cp * cp - 0.75) * (2.0 / 3.0) ** 1.5, -(a - 1.0) / 2.0, 0.0, a * a * (a - 3.0)])


def cp_residual(a: float, d, e, f):
    d, e, f = (np.asarray(v, dtype=float) for v in (d, e, f))
    return 1.0 / (a + d) + 1.0 / (a + e) + 1.0 / (a + f) - 1.0


def cp_boundary(a: float, b: float, c: float, samples: int = 601, tol: Tolerance | None = None) -> Polyline:
    """Boundary of the completely positive set, clamped to the vertex triangle.

    ``r_raw`` keeps the unclamped smallest positive cubic root per ray and
    ``clamped`` marks rays where the triangle was hit first.
    """
    tol = tol or default_tolerance()
    if a <= 3.0:
        return Polyline.empty("cp_boundary")
    if mu(a, b, c) < 0.0:
        return Polyline.empty("cp_boundary")
    phi = np.linspace(0.0, 2.0 * math.pi, samples)
    bound = triangle_bound(a, b, c, phi)
    raw = np.full(samples, np.nan)
    for k, p in enumerate(phi):
        roots = real_roots(cp_cubic(a, p), tol)
        roots = roots[roots > 0.0]
        if roots.size:
            raw[k] = roots.min()
    r = np.fmin(raw, bound)
    clamped = ~(raw <= bound)
    x, y = xy_from_polar(r, phi)
    status = "degenerate" if np.all(r[np.isfinite(r)] == 0.0) else "ok"
    return Polyline("cp_boundary", np.asarray(x, float), np.asarray(y, float), closed=True,
                    status=status, r_raw=raw, clamped=clamped)


# --------------------------------------------------------------------------
# assembly
# --------------------------------------------------------------------------

@dataclass
class Membership:
    in_triangle: bool
    in_edge_region: bool
    interior: bool
    in_circle: bool
    status: str  # positive | not-positive | unknown

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class RegionCurves:
    a: float
    b: float
    c: float
    vertex_triangle: Polyline
    edge_arcs: list[Polyline]
    hessian_circle: Polyline
    cp_boundary: Polyline
    config: RegionConfig
    warnings: list[str] = field(default_factory=list)

    @property
    def mu(self) -> float:
        return mu(self.a, self.b, self.c)

    @property
    def hessian_radius(self) -> float:
        return hessian_radius(self.a, self.b, self.c)

    @property
    def degenerate(self) -> bool:
        return self.mu <= 0.0

    def family(self, name: str) -> list[Polyline]:
        if name == "edge_arcs":
            return self.edge_arcs
        return [getattr(self, name)]

    def nonempty_families(self) -> list[str]:
        """Families with drawable samples; none when the region collapses to the origin."""
        if self.degenerate:
            return []
        return [name for name in FAMILIES if any(not p.is_empty for p in self.family(name))]

    def polylines(self) -> list[Polyline]:
        return [self.vertex_triangle, *self.edge_arcs, self.hessian_circle, self.cp_boundary]

    def contains(self, d: float, e: float, f: float, eps: float = 1e-9) -> Membership:
        """Classify a point of the plane by the three bounding conditions."""
        a, b, c = self.a, self.b, self.c
        m = self.mu
        in_tri = min(d, e, f) >= -m - eps
        res = edge_residuals(a, b, c, d, e, f)
        in_edge = bool(np.all(np.nan_to_num(res, nan=-1.0) >= -eps))
        interior = a + b + c >= 3.0 - eps
        r = math.sqrt(d * d + e * e + f * f)
        at_origin = r <= eps
        # on the circle W_hat is singular on 1-perp, which the gate does not accept
        in_circle = at_origin or r < self.hessian_radius - eps
        if not (in_tri and in_edge and interior):
            status = "not-positive"
        elif in_circle:
            status = "positive"
        else:
            status = "unknown"
        return Membership(bool(in_tri), in_edge, bool(interior), bool(in_circle), status)

    def to_dict(self) -> dict:
        def line(p: Polyline) -> dict:
            r, phi = p.polar
            out = {
                "name": p.name, "status": p.status, "closed": p.closed, "samples": p.sample_count,
                "x": _jsonable(p.x), "y": _jsonable(p.y), "r": _jsonable(r), "phi": _jsonable(phi),
            }
            if p.edge is not None:
                out["edge"] = [int(v) + 1 if v >= 0 else None for v in p.edge]
            if p.r_raw is not None:
                out["r_raw"] = _jsonable(p.r_raw)
                out["clamped"] = [bool(v) for v in p.clamped]
            return out

        return {
            "params": {"a": self.a, "b": self.b, "c": self.c},
            "mu": self.mu,
            "hessian_radius": self.hessian_radius,
            "config": dict(self.config.__dict__),
            "warnings": list(self.warnings),
            "families": self.nonempty_families(),
            "vertex_triangle": line(self.vertex_triangle),
            "edge_arcs": [line(p) for p in self.edge_arcs],
            "hessian_circle": line(self.hessian_circle),
            "cp_boundary": line(self.cp_boundary),
        }


def _jsonable(v) -> list:
    return [None if not np.isfinite(x) else round(float(x), 12) for x in np.asarray(v, dtype=float)]


def assemble_region(a: float, b: float, c: float, config: RegionConfig = RegionConfig(),
                    tol: Tolerance | None = None) -> RegionCurves:
    tol = tol or default_tolerance()
    warnings = []
    tri = triangle(a, b, c, config.triangle_samples)
    if tri.status != "ok":
        warnings.append(f"vertex triangle is {tri.status} (mu = {mu(a, b, c):.6g}); "
                        "admissible region is at most the origin")
    arcs = bean_arcs(a, b, c, config, tol) if mu(a, b, c) >= 0.0 else [
        Polyline.empty(f"edge_arc_{k + 1}") for k in range(3)]
    if all(p.is_empty for p in arcs):
        warnings.append("no admissible edge-saturation points inside the triangle")
    circle = hessian_circle(a, b, c, config.circle_samples)
    if circle.is_empty:
        warnings.append("Hessian circle is empty: the gate fails everywhere off the origin")
    cp = cp_boundary(a, b, c, config.cp_samples, tol)
    return RegionCurves(a, b, c, tri, arcs, circle, cp, config, warnings)
