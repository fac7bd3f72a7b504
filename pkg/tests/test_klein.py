from itertools import product

import numpy as np
import pytest

from ddforge.design import group_generators
from ddforge.field import gf
from ddforge.klein import (S_VERTEX, adj2, block_functional, det2, embed_ring, klein_form,
                           line_in_quadric, line_in_quadric_brute, line_points, m2_mul,
                           normalize, phi, phi_general, polar, trace_plane, verify_baer,
                           verify_blocks_geometric, verify_cap, verify_collineations,
                           verify_cone, verify_parallel_lines, verify_phi_general)
from ddforge.projline import AFFINE, IDEAL, ProjPoint
from ddforge.ring import RingElement as E

from conftest import design, model, ring

W = 2
I2 = ((1, 0), (0, 1))


def test_embed_examples():
    R = ring(4, 2)
    assert embed_ring(R, R.eps) == ((0, 1), (0, 0))
    assert embed_ring(R, R.one) == I2
    assert embed_ring(R, E(W, 0)) == ((W, 0), (0, W + 1))


@pytest.mark.parametrize("q,m", [(4, 2), (9, 3), (4, 4)])
def test_embed_multiplicative(q, m):
    R = ring(q, m)
    K = R.field
    for x in R.elements():
        for y in R.elements():
            assert embed_ring(R, R.mul(x, y)) == m2_mul(K, embed_ring(R, x), embed_ring(R, y))


def test_klein_form_examples():
    K = gf(4)
    assert klein_form(K, S_VERTEX) == 0
    assert klein_form(K, (1, 0, 0, 1, 1, 1)) == 0
    assert klein_form(K, (1, 0, 0, 1, 0, 0)) == 1


def test_phi_examples():
    R = ring(4, 2)
    assert phi(R, ProjPoint(AFFINE, E(W, 1)), raw=True) == (W, 1, 0, W + 1, 1, 1)
    assert phi(R, ProjPoint(IDEAL, R.zero)) == (0, 0, 0, 0, 1, 0)
    assert phi(R, ProjPoint(AFFINE, R.zero)) == (0, 0, 0, 0, 0, 1)


def test_phi_sign_odd_characteristic():
    R = ring(9, 3)
    K = R.field
    assert phi(R, ProjPoint(IDEAL, E(0, 1)), raw=True) == (0, K.neg(1), 0, 0, 1, 0)


def test_phi_general_examples():
    R = ring(4, 2)
    K = R.field
    for x in R.elements():
        assert phi_general(K, embed_ring(R, x), I2) == phi(R, ProjPoint(AFFINE, x))
    for c in range(4):
        z = E(0, c)
        assert phi_general(K, I2, embed_ring(R, z), raw=True) == (0, K.neg(c), 0, 0, 1, 0)
    v = phi_general(K, I2, I2, raw=True)
    assert v == (1, 0, 0, 1, 1, 1) and klein_form(K, v) == 0
    with pytest.raises(ValueError):
        phi_general(K, ((1, 0), (0, 0)), ((1, 0), (0, 0)))


def test_line_in_quadric_examples():
    R = ring(4, 2)
    K = R.field
    p0 = phi(R, ProjPoint(AFFINE, R.zero))
    pe = phi(R, ProjPoint(AFFINE, R.eps))
    pinf = phi(R, ProjPoint(IDEAL, R.zero))
    assert line_in_quadric(K, p0, pe)
    assert not line_in_quadric(K, pinf, p0)
    assert line_in_quadric(K, S_VERTEX, p0)
    with pytest.raises(ValueError):
        line_in_quadric(K, p0, p0)


@pytest.mark.parametrize("q", [2, 3, 4])
def test_adjugate_identity(q):
    K = gf(q)
    for e in product(range(q), repeat=4):
        B = ((e[0], e[1]), (e[2], e[3]))
        d = det2(K, B)
        assert m2_mul(K, adj2(K, B), B) == ((d, 0), (0, d))


@pytest.mark.parametrize("q", [2, 3, 4])
def test_tangent_hyperplane(q):
    K = gf(q)
    for x in product(range(q), repeat=6):
        assert (polar(K, x, S_VERTEX) == 0) == (x[2] == 0)


def test_normalize_scaling():
    K = gf(9)
    x = (0, 4, 1, 0, 7, 2)
    assert all(normalize(K, tuple(K.mul(c, a) for a in x)) == normalize(K, x) for c in range(1, 9))


def test_polar_matches_brute_on_random_lines():
    K = gf(8)
    rng = np.random.default_rng(0)
    for _ in range(300):
        p, r = (tuple(rng.integers(0, 8, 6).tolist()) for _ in range(2))
        if not any(p) or not any(r) or normalize(K, p) == normalize(K, r):
            continue
        assert line_in_quadric(K, p, r) == line_in_quadric_brute(K, p, r)
        assert len(line_points(K, p, r)) == 9


@pytest.mark.parametrize("q,m", [(4, 2), (4, 4), (8, 2), (9, 3)])
def test_cone_and_parallel(q, m):
    M = model(q, m)
    rep = verify_cone(M)
    assert rep.passed
    assert rep.details["generators"] == q + 1
    assert rep.details["points_per_generator"] == [q]
    assert verify_parallel_lines(M).passed
    assert verify_phi_general(M).passed


@pytest.mark.parametrize("q,m,kind", [(4, 2, "spans U0"), (4, 4, "conic"), (8, 2, "spans U0"),
                                      (9, 3, "spans U0")])
def test_cap(q, m, kind):
    rep = verify_cap(model(q, m))
    assert rep.passed
    assert rep.details["kind"] == kind
    assert rep.details["size"] == q + 1


@pytest.mark.parametrize("q,m", [(4, 2), (8, 2), (9, 3)])
def test_blocks_geometric(q, m):
    rep = verify_blocks_geometric(model(q, m), design(q, m))
    assert rep.passed
    assert rep.details["blocks"] == rep.details["complements_of_S_in_H"] == q**4


def test_blocks_geometric_not_applicable_for_identity():
    assert not verify_blocks_geometric(model(4, 4), design(4, 4)).applicable


def test_non_block_has_no_functional():
    M = model(4, 2)
    L = M.line
    # a parallel pair never spans a complement
    bad = (L.zero, L.index(ProjPoint(AFFINE, ring(4, 2).eps)), L.one, L.infinity)
    assert block_functional(M, bad) is None


@pytest.mark.parametrize("q,m,size", [(4, 2, 5), (9, 3, 10)])
def test_baer(q, m, size):
    rep = verify_baer(model(q, m))
    assert rep.passed and rep.details["size"] == size


def test_baer_precondition():
    with pytest.raises(ValueError):
        verify_baer(model(8, 2))
    with pytest.raises(ValueError):
        verify_baer(model(4, 4))


def test_trace_plane_standard_q4():
    D, M = design(4, 2), model(4, 2)
    L = D.line
    rep = trace_plane(M, D, L.infinity, L.zero, L.one)
    assert rep.passed
    assert len(rep.details["trace"]) == 3
    assert rep.details["fourth_points"]["0"] == 0


def test_trace_plane_q9_random():
    D, M = design(9, 3), model(9, 3)
    rng = np.random.default_rng(2)
    cls = D.line.class_of
    for _ in range(5):
        c = rng.choice(10, size=3, replace=False)
        pts = [D.line.classes[i][rng.integers(9)] for i in c]
        rep = trace_plane(M, D, *pts)
        assert rep.passed
        assert len(rep.details["trace"]) == 4
        assert all(cls[i] in cls[list(rep.details["trace"])] for i in pts)


@pytest.mark.parametrize("q,m", [(4, 2), (4, 4), (9, 3)])
def test_collineations(q, m):
    M = model(q, m)
    assert verify_collineations(M, group_generators(M.ring)).passed
