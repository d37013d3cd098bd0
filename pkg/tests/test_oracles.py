import numpy as np
import pytest

from dsmaps.errors import DomainError, InputError, SingularBoundaryError
from dsmaps.model import WMatrix, circulant
from dsmaps.oracles import fd_hessian_f, max_f_on_simplex, min_eigen_search, rank_one_probe, simplex_grid
from dsmaps.positivity import hessian_matrix
from dsmaps.sampling import random_ds


def circ(a, b, c):
    return WMatrix(circulant(a, b, c))


def test_simplex_grid():
    pts = simplex_grid(4)
    assert pts.shape == (15, 3)
    assert np.allclose(pts.sum(axis=1), 1.0)
    assert len({tuple(p) for p in pts}) == 15
    with pytest.raises(InputError):
        simplex_grid(0)


def test_max_f_examples():
    rep = max_f_on_simplex(WMatrix(np.ones((3, 3))), depth=30)
    assert np.isclose(rep.value, 1.0)
    assert np.allclose(rep.argmax, 1 / 3)
    rep = max_f_on_simplex(circ(2, 1, 0), depth=200)
    assert rep.value <= 1 + 1e-9 and rep.value >= 1 - 1e-12
    rep = max_f_on_simplex(circ(1, 1, 0.5), depth=60)
    assert rep.value >= 1.2 - 1e-12


def test_max_f_singular_point_reported():
    W = WMatrix([[0, 1, 1], [1, 0, 1], [1, 1, 0]])
    rep = max_f_on_simplex(W, depth=10)
    assert rep.singular and np.isinf(rep.value)
    with pytest.raises(SingularBoundaryError):
        max_f_on_simplex(WMatrix([[2, 0, 0], [0, 1, 1], [0, 1, 1]]))


def test_max_f_monotone_in_nested_depth(rng):
    for _ in range(20):
        W = random_ds(rng)
        vals = [max_f_on_simplex(W, depth=d, refine=False).value for d in (10, 20, 40, 80)]
        assert all(v2 >= v1 - 1e-15 for v1, v2 in zip(vals, vals[1:]))
        assert max_f_on_simplex(W, depth=80).value >= vals[-1] - 1e-15


def test_probe_examples():
    rep = rank_one_probe(circ(3, 1, 1), samples=10_000, seed=1)
    assert rep.min_eigenvalue_found >= -1e-9
    rep = rank_one_probe(circ(1, 1, 0.5), samples=10_000, seed=1)
    assert rep.min_eigenvalue_found < -1e-3
    assert np.isclose(np.sum(rep.argmin ** 2), 1.0)
    # definition-level: works for block-diagonal W as well
    rep = rank_one_probe(WMatrix([[2, 0, 0], [0, 1, 1], [0, 1, 1]]), samples=1000)
    assert np.isfinite(rep.min_eigenvalue_found)


def test_probe_deterministic():
    W = circ(1.7, 0.9, 0.5)
    a = rank_one_probe(W, samples=5000, seed=7)
    b = rank_one_probe(W, samples=5000, seed=7)
    assert a.to_dict() == b.to_dict()
    c = rank_one_probe(W, samples=5000, seed=8)
    assert c.to_dict() != a.to_dict()


def test_probe_batches_do_not_change_result():
    W = circ(1.7, 0.9, 0.5)
    assert rank_one_probe(W, 3000, seed=3, batch=1000).to_dict() == rank_one_probe(W, 3000, seed=3, batch=1000).to_dict()


def test_min_eigen_search_finds_violation():
    x, lam = min_eigen_search(circ(1, 1, 0.5))
    assert lam < -0.1
    assert np.isclose(x.sum(), 1.0)


def test_fd_hessian_examples(rng):
    assert np.abs(fd_hessian_f(WMatrix(np.ones((3, 3))))).max() <= 1e-5
    for _ in range(10):
        W = random_ds(rng)
        target = -hessian_matrix(W) / W.w ** 3
        fd = fd_hessian_f(W)
        assert np.abs(fd - target).max() <= 1e-4 * np.abs(target).max() + 1e-9
        assert np.allclose(fd, fd.T, atol=1e-10)
    with pytest.raises(InputError):
        fd_hessian_f(WMatrix(np.ones((3, 3))), step=1e-1)
    with pytest.raises(DomainError):
        fd_hessian_f(WMatrix(np.eye(3)), x=(1e-5, 1.0, 1.0), step=1e-4)
