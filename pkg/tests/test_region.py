import math

import numpy as np
import pytest

from dsmaps.classify import classify
from dsmaps.errors import DomainError
from dsmaps.model import BirkhoffParams, WMatrix, w_from_birkhoff
from dsmaps.positivity import Tri, hessian_spectrum
from dsmaps.region import (RegionConfig, arcs_contain_origin, assemble_region, bean_arcs, cp_boundary,
                           cp_residual, dpe_from_polar, edge_radius, edge_residuals, hessian_circle,
                           hessian_radius, mu, polar_from_dpe, triangle, triangle_vertices, xy_from_dpe,
                           xy_from_polar)
from dsmaps.render import region_csv, region_svg

FIG = (1.7, 0.9, 0.5)


def test_coordinates_round_trip(rng):
    r, phi = rng.uniform(0, 2, 100), rng.uniform(-math.pi, math.pi, 100)
    d, e, f = dpe_from_polar(r, phi)
    assert np.allclose(d + e + f, 0.0)
    assert np.allclose(np.sqrt(d * d + e * e + f * f), r)
    r2, phi2 = polar_from_dpe(d, e, f)
    assert np.allclose(r2, r)
    assert np.allclose(np.cos(phi2 - phi), 1.0)
    x, y = xy_from_dpe(1.0, -0.5, -0.5)
    assert np.isclose(x, 0.0) and np.isclose(y, math.sqrt(1.5))  # d axis points up


def test_triangle_examples():
    assert mu(*FIG) == pytest.approx(0.5)
    assert np.allclose(triangle_vertices(*FIG)[0], (1.0, -0.5, -0.5))
    assert mu(1, 0.3, 0.2) == 0.0
    assert triangle(1, 0.3, 0.2).status == "degenerate"
    assert triangle(0.9, 1, 1).is_empty
    for v in triangle_vertices(2, 1, 1):
        assert np.isclose(np.linalg.norm(v), math.sqrt(6))
    t = triangle(*FIG)
    assert t.closed and np.isclose(t.x[0], t.x[-1]) and np.isclose(t.y[0], t.y[-1])
    d, e, f = t.dpe()
    assert np.allclose(np.minimum.reduce([d, e, f]), -0.5)


def test_hessian_radius_examples():
    assert hessian_radius(*FIG) == pytest.approx(1.8 / math.sqrt(6), abs=1e-12)
    assert hessian_radius(1, 1, 1) == pytest.approx(0.0, abs=1e-15)
    assert hessian_radius(2, 1, 1) == pytest.approx(2 / math.sqrt(6))
    for a, b in [(1.3, 0.2), (2.5, 0.9), (3.0, 0.1)]:
        assert hessian_radius(a, b, b) == pytest.approx((a + 2 * b - abs(a - 4 * b)) / math.sqrt(6))
    assert hessian_circle(0.2, 0.0, 1.0).is_empty


def test_circle_points_are_hessian_kernel(rng):
    for _ in range(10):
        a, b, c = rng.uniform(1, 3), rng.uniform(0, 1.5), rng.uniform(0, 1.5)
        line = hessian_circle(a, b, c, samples=121)
        if line.is_empty:
            continue
        for d, e, f in zip(*line.dpe()):
            p = BirkhoffParams(a, b, c, d, e, f)
            if np.any(p.entries() < 0):
                continue
            lam2, _ = hessian_spectrum(WMatrix(p.entries()))
            assert abs(lam2) <= 1e-6


def arc_points(a, b, c, **kw):
    return [arc for arc in bean_arcs(a, b, c, RegionConfig(**kw)) if not arc.is_empty]


@pytest.mark.parametrize("params", [FIG, (1.3, 0.8, 0.4), (2.2, 0.3, 0.1), (1.5, 1.2, 0.05)])
def test_arcs_saturate_one_and_respect_others(params):
    arcs = bean_arcs(*params)
    for k, arc in enumerate(arcs):
        ok = arc.finite()
        if not ok.any():
            continue
        res = edge_residuals(*params, *arc.dpe())[:, ok]
        labels = arc.edge[ok]
        own = res[labels, np.arange(labels.size)]
        assert np.abs(own).max() <= 1e-6
        if 2 - params[0] <= math.sqrt(params[1] * params[2]):
            # the curved triangle is nonempty: its boundary violates no edge condition
            assert np.all(np.nan_to_num(res, nan=0.0) >= -1e-6)
        middle = arc.sample_count // 2
        if ok[middle]:
            assert arc.edge[middle] == k


def test_arcs_inside_triangle():
    for arc in arc_points(*FIG):
        d, e, f = (v[arc.finite()] for v in arc.dpe())
        assert np.all(np.minimum.reduce([d, e, f]) >= -mu(*FIG) - 1e-9)


def test_rotation_symmetry():
    arcs = bean_arcs(*FIG)
    rot = np.array([[math.cos(2 * math.pi / 3), -math.sin(2 * math.pi / 3)],
                    [math.sin(2 * math.pi / 3), math.cos(2 * math.pi / 3)]])
    xy = rot @ np.vstack([arcs[0].x, arcs[0].y])
    assert np.allclose(xy[0], arcs[2].x, atol=1e-12, equal_nan=True)
    assert np.allclose(xy[1], arcs[2].y, atol=1e-12, equal_nan=True)
    back = rot.T @ np.vstack([arcs[0].x, arcs[0].y])
    assert np.allclose(back[0], arcs[1].x, atol=1e-12, equal_nan=True)
    assert np.allclose(back[1], arcs[1].y, atol=1e-12, equal_nan=True)


def test_fold_is_pointwise_minimum():
    arc = bean_arcs(*FIG)[0]
    r, phi = arc.polar
    phi = np.mod(phi, 2 * math.pi)
    first = phi <= math.pi + 1e-12
    native = edge_radius(*FIG, phi[first])
    neighbour = edge_radius(*FIG, 4 * math.pi / 3 - phi[first])
    assert np.all(np.nan_to_num(r[first], nan=np.inf) <= np.nan_to_num(native, nan=np.inf) + 1e-12)
    assert np.all(np.nan_to_num(r[first], nan=np.inf) <= np.nan_to_num(neighbour, nan=np.inf) + 1e-12)


def test_mirror_is_exact_reflection():
    arc = bean_arcs(*FIG)[0]
    # the arc is symmetric about the vertical axis through its middle sample
    assert np.allclose(arc.x, -arc.x[::-1], atol=1e-12, equal_nan=True)
    assert np.allclose(arc.y, arc.y[::-1], atol=1e-12, equal_nan=True)


def test_equal_bc_arcs_are_circles_about_axis_point(rng):
    """With b = c each edge curve is a circle centred on its vertex axis, not at the origin."""
    for _ in range(20):
        a, b = rng.uniform(1.1, 2.8), rng.uniform(0.05, 1.2)
        u0 = math.sqrt(2 / 3) * (3 - a - 2 * b)
        radius2 = u0 * u0 + 2 * ((a - 1) ** 2 - (1 - b) ** 2)
        for arc in bean_arcs(a, b, b):
            ok = arc.finite()
            for k in range(3):
                sel = ok & (arc.edge == k)
                if not sel.any():
                    continue
                ang = math.pi / 2 + (0.0, -2 * math.pi / 3, 2 * math.pi / 3)[k]
                cx, cy = u0 * math.cos(ang), u0 * math.sin(ang)
                dist2 = (arc.x[sel] - cx) ** 2 + (arc.y[sel] - cy) ** 2
                assert np.allclose(dist2, radius2, atol=1e-8)


def test_equal_bc_origin_centred_only_on_interior_line():
    a, b = 1.8, 0.6  # a + 2b = 3
    for arc in bean_arcs(a, b, b):
        r, _ = arc.polar
        r = r[arc.finite()]
        if r.size:
            assert np.ptp(r) <= 1e-8


@pytest.mark.parametrize("a,b,c", [(1.2, 0.9, 0.9), (1.2, 0.7, 0.7), (1.5, 0.55, 0.5), (1.5, 0.4, 0.6),
                                   (1.9, 0.05, 0.3), (1.9, 0.2, 0.04), (1.9, 0.2, 0.06), (2.5, 0.0, 0.4)])
def test_origin_containment(a, b, c):
    expected = 2 - a <= math.sqrt(b * c)
    assert arcs_contain_origin(bean_arcs(a, b, c), a, b, c) == expected


def test_cp_boundary_examples():
    assert cp_boundary(3, 1, 1).is_empty
    assert cp_boundary(2, 1, 1).is_empty
    line = cp_boundary(4, 1, 1)
    assert not line.is_empty
    assert np.all(line.r_raw > 0)
    d, e, f = dpe_from_polar(line.r_raw, np.linspace(0, 2 * math.pi, line.sample_count))
    assert np.abs(cp_residual(4, d, e, f)).max() <= 1e-6
    r, _ = line.polar
    assert np.all(r > 0)


def test_cp_boundary_unclamped_points_saturate():
    line = cp_boundary(4, 3, 3)
    free = ~line.clamped
    assert free.any()
    d, e, f = line.dpe()
    assert np.abs(cp_residual(4, d[free], e[free], f[free])).max() <= 1e-6


def test_cp_cubic_coefficient_choice():
    # the (2/3)^(3/2) leading coefficient is what makes the roots saturate
    from dsmaps.numerics import real_roots
    phi = 0.3
    cp = math.cos(phi)
    wrong = np.array([cp * (cp * cp - 0.75) * math.sqrt(2 / 3), -1.5, 0.0, 16.0])
    roots = real_roots(wrong)
    r = roots[roots > 0].min()
    assert abs(cp_residual(4, *dpe_from_polar(r, phi))) > 1e-3


def test_assemble_examples():
    region = assemble_region(*FIG)
    assert region.nonempty_families() == ["vertex_triangle", "edge_arcs", "hessian_circle"]
    assert not region.warnings
    region = assemble_region(4, 1, 1)
    assert "cp_boundary" in region.nonempty_families()
    region = assemble_region(1, 0.1, 0.1)
    assert region.degenerate and region.warnings
    assert region.nonempty_families() == []


def test_membership_matches_classification():
    region = assemble_region(*FIG)
    seen = set()
    for r in np.linspace(0.0, 1.2, 9):
        for phi in np.linspace(0, 2 * math.pi, 24, endpoint=False):
            d, e, f = (float(v) for v in dpe_from_polar(r, phi))
            p = BirkhoffParams(*FIG, d, e, f)
            try:
                W = w_from_birkhoff(p)
            except DomainError:
                continue
            if W.block_diagonal:
                continue
            status = region.contains(d, e, f).status
            got = classify(W).positive
            seen.add(status)
            if status == "positive":
                assert got is Tri.YES, (d, e, f)
            elif status == "not-positive":
                assert got is Tri.NO, (d, e, f)
    assert {"positive", "not-positive", "unknown"} <= seen


def test_svg_deterministic_and_families():
    a = region_svg(assemble_region(*FIG))
    b = region_svg(assemble_region(*FIG))
    assert a == b
    assert a.count('class="family"') == 3
    for name in ("vertex_triangle", "edge_arcs", "hessian_circle"):
        assert f'id="{name}"' in a
    assert 'id="cp_boundary"' not in a
    assert 'class="legend"' in a
    svg = region_svg(assemble_region(1, 0.1, 0.1))
    assert 'class="family"' not in svg and 'class="warning"' in svg


def test_csv_columns():
    text = region_csv(assemble_region(*FIG))
    lines = text.splitlines()
    assert lines[0] == "curve,index,phi,r,x,y"
    assert {ln.split(",")[0] for ln in lines[1:]} == {"vertex_triangle", "edge_arc_1", "edge_arc_2", "edge_arc_3",
                                                      "hessian_circle"}
