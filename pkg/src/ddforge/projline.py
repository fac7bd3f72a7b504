"""The projective line over R = K(eps; sigma) and the action of GL_2(R).

Points are left submodules R(a, b).  Every point has exactly one canonical
representative: ``R(x, 1)`` (affine) or ``R(1, z)`` with ``z`` in the ideal.
Matrices act on row vectors from the right, so ``act(g @ h, p) ==
act(h, act(g, p))``.
"""

from __future__ import annotations

from functools import cached_property
from itertools import product
from typing import NamedTuple

import numpy as np

from .ring import RingElement, RingSpec

AFFINE = "affine"
IDEAL = "ideal"


class ProjPoint(NamedTuple):
    kind: str
    coord: RingElement


class NotAPoint(ValueError):
    pass


# -- 2x2 matrices over R, stored as ((g11, g12), (g21, g22)) ----------------

def mat(R: RingSpec, rows) -> tuple:
    """Build a matrix from entries given as RingElements, pairs, or field ints."""
    def conv(x):
        if isinstance(x, RingElement):
            return x
        if isinstance(x, tuple):
            return RingElement(*x)
        return R.scalar(x)
    (a, b), (c, d) = rows
    return ((conv(a), conv(b)), (conv(c), conv(d)))


def mat_identity(R):
    return ((R.one, R.zero), (R.zero, R.one))


def mat_mul(R, g, h):
    mul, add = R.mul, R.add
    return tuple(
        tuple(add(mul(g[i][0], h[0][j]), mul(g[i][1], h[1][j])) for j in range(2))
        for i in range(2))


def is_invertible(R, g) -> bool:
    """Invertible over the local ring iff invertible modulo the ideal."""
    K = R.field
    det = K.sub(K.mul(g[0][0].a, g[1][1].a), K.mul(g[0][1].a, g[1][0].a))
    return det != 0


def mat_inv(R, g):
    """Gauss-Jordan with left row operations; raises if g is singular."""
    if not is_invertible(R, g):
        raise ZeroDivisionError("matrix is not invertible over R")
    rows = [list(g[0]) + [R.one, R.zero], list(g[1]) + [R.zero, R.one]]
    for col in range(2):
        piv = next(r for r in range(col, 2) if R.is_unit(rows[r][col]))
        rows[col], rows[piv] = rows[piv], rows[col]
        s = R.inv(rows[col][col])
        rows[col] = [R.mul(s, x) for x in rows[col]]
        other = 1 - col
        c = rows[other][col]
        rows[other] = [R.sub(x, R.mul(c, y)) for x, y in zip(rows[other], rows[col])]
    inv = ((rows[0][2], rows[0][3]), (rows[1][2], rows[1][3]))
    assert mat_mul(R, g, inv) == mat_identity(R) == mat_mul(R, inv, g)
    return inv


def invertible_mask(R) -> tuple[np.ndarray, np.ndarray]:
    """Exhaustive invertibility oracle over all |R|**4 matrices.

    Returns ``(entries, mask)``: ``entries`` has shape (|R|**4, 4) with
    ring-element indices (g11, g12, g21, g22) and ``mask`` marks matrices
    having both a left and a right inverse, found by searching every
    candidate row/column.
    """
    r = R.q * R.q
    M, A = R.mul_table, R.add_table
    one, zero = R.index(R.one), R.index(R.zero)
    g = np.array(list(product(range(r), repeat=4)), dtype=np.int64)
    xs, ys = np.divmod(np.arange(r * r), r)

    mask = np.empty(len(g), dtype=bool)
    chunk = 4096
    for lo in range(0, len(g), chunk):
        a, b, c, d = g[lo:lo + chunk].T
        mask[lo:lo + chunk] = (_joint_right(A, M, a, b, c, d, xs, ys, one, zero)
                               & _joint_left(A, M, a, b, c, d, xs, ys, one, zero))
    return g, mask


def _joint_right(A, M, a, b, c, d, xs, ys, one, zero):
    # g @ (x, y)^T must hit both unit columns
    top = A[M[a[:, None], xs[None, :]], M[b[:, None], ys[None, :]]]
    bot = A[M[c[:, None], xs[None, :]], M[d[:, None], ys[None, :]]]
    col1 = ((top == one) & (bot == zero)).any(axis=1)
    col2 = ((top == zero) & (bot == one)).any(axis=1)
    return col1 & col2


def _joint_left(A, M, a, b, c, d, xs, ys, one, zero):
    # (x, y) @ g = (x a + y c, x b + y d)
    left_ = A[M[xs[None, :], a[:, None]], M[ys[None, :], c[:, None]]]
    right_ = A[M[xs[None, :], b[:, None]], M[ys[None, :], d[:, None]]]
    row1 = ((left_ == one) & (right_ == zero)).any(axis=1)
    row2 = ((left_ == zero) & (right_ == one)).any(axis=1)
    return row1 & row2


class ProjectiveLine:
    """Indexed point set of P(R) with its parallel classes.

    Point ``i < q**2`` is ``R(x, 1)`` with ``x = R.element(i)``; point
    ``q**2 + c`` is ``R(1, c*eps)``.
    """

    def __init__(self, ring: RingSpec):
        self.ring = ring
        q = ring.q
        self.q = q
        self.points = [ProjPoint(AFFINE, x) for x in ring.elements()]
        self.points += [ProjPoint(IDEAL, z) for z in ring.ideal()]
        self.v = len(self.points)
        self.s = q
        self._index = {p: i for i, p in enumerate(self.points)}
        self.infinity = self.index(ProjPoint(IDEAL, ring.zero))
        self.zero = self.index(ProjPoint(AFFINE, ring.zero))
        self.one = self.index(ProjPoint(AFFINE, ring.one))
        # parallel class id: scalar part for affine points, q for ideal points
        self.class_of = np.array([p.coord.a if p.kind == AFFINE else q for p in self.points])
        self.class_of.setflags(write=False)
        self.classes = [sorted(np.flatnonzero(self.class_of == c).tolist()) for c in range(q + 1)]

    def __repr__(self):
        return f"ProjectiveLine({self.ring!r}, v={self.v})"

    def index(self, p: ProjPoint) -> int:
        return self._index[p]

    def __len__(self):
        return self.v

    def __getitem__(self, i) -> ProjPoint:
        return self.points[i]

    # -- representatives ----------------------------------------------------

    def canonicalize(self, a: RingElement, b: RingElement) -> ProjPoint:
        R = self.ring
        if R.is_unit(b):
            return ProjPoint(AFFINE, R.mul(R.inv(b), a))
        if R.is_unit(a):
            return ProjPoint(IDEAL, R.mul(R.inv(a), b))
        raise NotAPoint(f"({tuple(a)}, {tuple(b)}) has no unit entry")

    def representative(self, p: ProjPoint) -> tuple[RingElement, RingElement]:
        R = self.ring
        if p.kind == AFFINE:
            return p.coord, R.one
        return R.one, p.coord

    @cached_property
    def pair_table(self) -> np.ndarray:
        """Point index of R(u, w) for ring-element indices u, w; -1 if not a point."""
        R = self.ring
        r = self.q * self.q
        table = np.full((r, r), -1, dtype=np.int64)
        for u in range(r):
            for w in range(r):
                x, y = R.element(u), R.element(w)
                if R.is_unit(x) or R.is_unit(y):
                    table[u, w] = self.index(self.canonicalize(x, y))
        table.setflags(write=False)
        return table

    # -- parallelism --------------------------------------------------------

    def is_parallel(self, p: ProjPoint, r: ProjPoint) -> bool:
        if p.kind == IDEAL and r.kind == IDEAL:
            return True
        if p.kind != r.kind:
            return False
        return self.ring.in_ideal(self.ring.sub(p.coord, r.coord))

    def is_parallel_det(self, p: ProjPoint, r: ProjPoint) -> bool:
        """Parallel iff the two representative rows do not form an invertible matrix."""
        return not is_invertible(self.ring, (self.representative(p), self.representative(r)))

    # -- group action -------------------------------------------------------

    def act(self, g, p: ProjPoint) -> ProjPoint:
        if not is_invertible(self.ring, g):
            raise ValueError("matrix is not invertible")
        R = self.ring
        a, b = self.representative(p)
        return self.canonicalize(R.add(R.mul(a, g[0][0]), R.mul(b, g[1][0])),
                                 R.add(R.mul(a, g[0][1]), R.mul(b, g[1][1])))

    def act_index(self, g, i: int) -> int:
        return self.index(self.act(g, self.points[i]))

    def permutation(self, g) -> np.ndarray:
        """Image index of every point under g."""
        perm = np.array([self.act_index(g, i) for i in range(self.v)], dtype=np.int64)
        assert len(set(perm.tolist())) == self.v
        return perm

    def map_standard_triple(self, p1: ProjPoint, p2: ProjPoint, p3: ProjPoint):
        """A matrix sending infinity, 0, 1 to p1, p2, p3."""
        R = self.ring
        for x, y in ((p1, p2), (p1, p3), (p2, p3)):
            if self.is_parallel(x, y):
                raise ValueError("points are not pairwise non-parallel")
        r1, r2, r3 = (self.representative(p) for p in (p1, p2, p3))
        # (lam, mu) @ [r1; r2] = r3
        lam, mu = _row_times(R, r3, mat_inv(R, (r1, r2)))
        g = ((R.mul(lam, r1[0]), R.mul(lam, r1[1])), (R.mul(mu, r2[0]), R.mul(mu, r2[1])))
        pts = self.points
        assert (self.act(g, pts[self.infinity]), self.act(g, pts[self.zero]),
                self.act(g, pts[self.one])) == (p1, p2, p3)
        return g


def _row_times(R, row, g):
    return (R.add(R.mul(row[0], g[0][0]), R.mul(row[1], g[1][0])),
            R.add(R.mul(row[0], g[0][1]), R.mul(row[1], g[1][1])))
