"""Twisted dual numbers R = K(eps; sigma).

An element ``a + b*eps`` is stored as the pair ``(a, b)`` of field ints.
Multiplication follows ``eps * x = x**sigma * eps`` and ``eps**2 = 0``.
"""

from __future__ import annotations

from functools import cached_property
from typing import NamedTuple

import numpy as np

from .field import Automorphism, FieldSpec, gf


class RingElement(NamedTuple):
    a: int
    b: int


class RingSpec:
    def __init__(self, field: FieldSpec, aut: Automorphism):
        if aut.field != field:
            raise ValueError("automorphism belongs to a different field")
        self.field = field
        self.aut = aut
        self.q = field.q
        self.zero = RingElement(0, 0)
        self.one = RingElement(1, 0)
        self.eps = RingElement(0, 1)

    @classmethod
    def build(cls, q: int, m: int, modulus=None) -> RingSpec:
        K = gf(q, modulus)
        return cls(K, Automorphism(K, m))

    def __repr__(self):
        return f"RingSpec(q={self.q}, m={self.aut.m})"

    @property
    def m(self) -> int:
        return self.aut.m

    @property
    def is_commutative(self) -> bool:
        return self.aut.is_identity

    # -- element indexing ---------------------------------------------------

    def index(self, x: RingElement) -> int:
        return x.a * self.q + x.b

    def element(self, i: int) -> RingElement:
        return RingElement(*divmod(i, self.q))

    def elements(self) -> list[RingElement]:
        """All q**2 elements ordered by (scalar part, eps part)."""
        return [RingElement(a, b) for a in range(self.q) for b in range(self.q)]

    def scalar(self, k: int) -> RingElement:
        return RingElement(k, 0)

    # -- arithmetic ---------------------------------------------------------

    def add(self, x, y):
        K = self.field
        return RingElement(K._add[x.a][y.a], K._add[x.b][y.b])

    def neg(self, x):
        K = self.field
        return RingElement(K._neg[x.a], K._neg[x.b])

    def sub(self, x, y):
        return self.add(x, self.neg(y))

    def mul(self, x, y):
        """(a + b eps)(c + d eps) = ac + (ad + b c^sigma) eps."""
        M, A = self.field._mul, self.field._add
        return RingElement(M[x.a][y.a], A[M[x.a][y.b]][M[x.b][self.aut.table[y.a]]])

    def is_unit(self, x) -> bool:
        return x.a != 0

    def in_ideal(self, x) -> bool:
        return x.a == 0

    def inv(self, u):
        """u^-1 = a^-1 - a^-1 b (a^sigma)^-1 eps."""
        if u.a == 0:
            raise ZeroDivisionError(f"non-unit {tuple(u)} has no inverse")
        K = self.field
        ainv = K._inv[u.a]
        b = K._neg[K._mul[K._mul[ainv][u.b]][K._inv[self.aut.table[u.a]]]]
        return RingElement(ainv, b)

    def decompose_unit(self, u) -> tuple[int, RingElement]:
        """Split a unit as k * w with k in K* and w in U = 1 + K eps."""
        if u.a == 0:
            raise ZeroDivisionError(f"non-unit {tuple(u)} cannot be decomposed")
        K = self.field
        k = u.a
        w = RingElement(1, K._mul[K._inv[u.a]][u.b])
        assert self.mul(self.scalar(k), w) == u
        return k, w

    # -- distinguished subsets ----------------------------------------------

    def units(self) -> list[RingElement]:
        return [x for x in self.elements() if x.a]

    def ideal(self) -> list[RingElement]:
        return [RingElement(0, b) for b in range(self.q)]

    def kstar(self) -> list[RingElement]:
        return [RingElement(a, 0) for a in range(1, self.q)]

    def one_plus_ideal(self) -> list[RingElement]:
        """The normal subgroup U = 1 + K eps."""
        return [RingElement(1, b) for b in range(self.q)]

    def normalizer_of_kstar(self) -> set[RingElement]:
        """Exhaustive {n in R* : n^-1 K* n = K*}."""
        kstar = set(self.kstar())
        out = set()
        for n in self.units():
            ninv = self.inv(n)
            if all(self.mul(self.mul(ninv, k), n) in kstar for k in kstar):
                out.add(n)
        expected = set(self.units()) if self.aut.is_identity else kstar
        assert out == expected
        return out

    @cached_property
    def mul_table(self) -> np.ndarray:
        """Product of ring element indices, shape (q**2, q**2)."""
        K, sig = self.field, self.aut.array
        idx = np.arange(self.q * self.q)
        a, b = np.divmod(idx, self.q)
        A, B = a[:, None], b[:, None]
        C, D = a[None, :], b[None, :]
        lo = K.mul_table[A, C]
        hi = K.add_table[K.mul_table[A, D], K.mul_table[B, sig[C]]]
        t = lo * self.q + hi
        t.setflags(write=False)
        return t

    @cached_property
    def add_table(self) -> np.ndarray:
        K = self.field
        idx = np.arange(self.q * self.q)
        a, b = np.divmod(idx, self.q)
        t = K.add_table[a[:, None], a[None, :]] * self.q + K.add_table[b[:, None], b[None, :]]
        t.setflags(write=False)
        return t

    def to_json(self, x) -> list[list[int]]:
        return [self.field.coeffs(x.a), self.field.coeffs(x.b)]

    def from_json(self, obj) -> RingElement:
        return RingElement(self.field.element(obj[0]), self.field.element(obj[1]))
