"""Finite fields GF(p^n) with table-driven arithmetic.

Elements are plain ints in ``range(q)``.  The base-``p`` digits of an
element are its polynomial coefficients, constant term first, so
``sum(c[i] * p**i)`` is the element and the integer order is the
lexicographic order on coefficient vectors read from the top degree down.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product

import numpy as np

# Conway polynomials, coefficients constant term first.
CONWAY = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 1, 1, 0, 1),
    (2, 7): (1, 1, 0, 0, 0, 0, 0, 1),
    (2, 8): (1, 0, 1, 1, 1, 0, 0, 0, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 0, 0, 2, 1),
    (3, 5): (1, 2, 0, 0, 0, 1),
    (5, 2): (2, 4, 1),
    (5, 3): (3, 3, 0, 1),
    (7, 2): (3, 6, 1),
    (11, 2): (2, 7, 1),
    (13, 2): (2, 12, 1),
}


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, n)`` with ``q == p**n``, or raise FieldError."""
    if q < 2:
        raise FieldError(f"{q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    n, r = 0, q
    while r % p == 0:
        r //= p
        n += 1
    if r != 1:
        raise FieldError(f"{q} is not a prime power")
    return p, n


# -- polynomials over GF(p), coefficient lists constant term first ----------

def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def poly_divmod(a, b, p):
    a, b = _trim(a), _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = pow(b[-1], p - 2, p)
    quot = [0] * max(len(a) - len(b) + 1, 0)
    rem = list(a)
    while len(rem) >= len(b):
        shift = len(rem) - len(b)
        c = rem[-1] * inv_lead % p
        quot[shift] = c
        for i, y in enumerate(b):
            rem[shift + i] = (rem[shift + i] - c * y) % p
        rem = _trim(rem)
    return _trim(quot), rem


def poly_mulmod(a, b, modulus, p):
    return poly_divmod(poly_mul(a, b, p), modulus, p)[1]


def monic_polys(degree, p):
    for low in product(range(p), repeat=degree):
        yield list(low) + [1]


def is_irreducible(modulus, p) -> bool:
    """Trial division by every monic polynomial of degree 1 .. n//2."""
    modulus = _trim(modulus)
    n = len(modulus) - 1
    if n < 1:
        return False
    for d in range(1, n // 2 + 1):
        for f in monic_polys(d, p):
            if not poly_divmod(modulus, f, p)[1]:
                return False
    return True


def default_modulus(p: int, n: int) -> list[int]:
    if n == 1:
        return [0, 1]
    if (p, n) in CONWAY:
        return list(CONWAY[p, n])
    for f in monic_polys(n, p):
        if f[0] and is_irreducible(f, p):
            return f
    raise FieldError(f"no irreducible polynomial of degree {n} over GF({p})")


class FieldSpec:
    """GF(p^n) built from an irreducible modulus; immutable after construction.

    Scalar operations go through nested lists (fast for single elements);
    the same tables are exposed as numpy arrays for vectorized work.
    """

    def __init__(self, p: int, n: int, modulus=None):
        if not is_prime(p):
            raise FieldError(f"{p} is not prime")
        if n < 1:
            raise FieldError("extension degree must be at least 1")
        if modulus is None:
            modulus = default_modulus(p, n)
        modulus = [int(c) % p for c in modulus]
        if len(_trim(modulus)) != n + 1:
            raise FieldError(f"modulus {modulus} does not have degree {n}")
        if not is_irreducible(modulus, p):
            raise FieldError(f"reducible modulus {modulus} over GF({p})")
        lead_inv = pow(modulus[-1], p - 2, p)
        self.p = p
        self.n = n
        self.q = p**n
        self.modulus = tuple(c * lead_inv % p for c in _trim(modulus))
        self._build_tables()

    def _build_tables(self):
        p, n, q = self.p, self.n, self.q
        digits = np.array([self.coeffs(a) for a in range(q)], dtype=np.int64).reshape(q, n)
        weights = p ** np.arange(n, dtype=np.int64)
        add = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights
        neg = ((-digits) % p) @ weights

        # exp/log tables from a generator of the multiplicative group
        mod = list(self.modulus)
        gen = exp = None
        for cand in range(1, q):
            powers = [1]
            x = [1]
            c = self.coeffs(cand)
            for _ in range(q - 2):
                x = poly_mulmod(x, c, mod, p)
                powers.append(self._from_poly(x))
            if len(set(powers)) == q - 1:
                gen, exp = cand, powers
                break
        assert gen is not None
        log = [0] * q
        for i, a in enumerate(exp):
            log[a] = i
        e = np.array(exp, dtype=np.int64)
        lg = np.array(log[1:], dtype=np.int64)
        mul = np.zeros((q, q), dtype=np.int64)
        mul[1:, 1:] = e[(lg[:, None] + lg[None, :]) % (q - 1)]
        inv = np.zeros(q, dtype=np.int64)
        inv[1:] = e[(-lg) % (q - 1)]

        self.generator = gen
        self.add_table = add
        self.mul_table = mul
        self.neg_table = neg
        self.inv_table = inv
        for arr in (add, mul, neg, inv):
            arr.setflags(write=False)
        self._add = add.tolist()
        self._mul = mul.tolist()
        self._neg = neg.tolist()
        self._inv = inv.tolist()

    def _from_poly(self, c):
        return sum(int(x) * self.p**i for i, x in enumerate(c))

    def __repr__(self):
        return f"FieldSpec(p={self.p}, n={self.n}, modulus={list(self.modulus)})"

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and (self.p, self.n, self.modulus) == (
            other.p, other.n, other.modulus)

    def __hash__(self):
        return hash((self.p, self.n, self.modulus))

    # -- conversions --------------------------------------------------------

    def coeffs(self, a: int) -> list[int]:
        out = []
        for _ in range(self.n):
            a, r = divmod(a, self.p)
            out.append(r)
        return out

    def element(self, coeffs) -> int:
        coeffs = list(coeffs)
        if len(coeffs) > self.n or any(not 0 <= c < self.p for c in coeffs):
            raise FieldError(f"bad coefficient vector {coeffs}")
        return self._from_poly(coeffs)

    def elements(self) -> range:
        """All q elements; index 0 is zero and index 1 is one."""
        return range(self.q)

    def basis(self) -> list[int]:
        """The monomial basis 1, x, ..., x^(n-1) of the field over GF(p)."""
        return [self.p**i for i in range(self.n)]

    # -- arithmetic ---------------------------------------------------------

    def add(self, a, b):
        return self._add[a][b]

    def sub(self, a, b):
        return self._add[a][self._neg[b]]

    def neg(self, a):
        return self._neg[a]

    def mul(self, a, b):
        return self._mul[a][b]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        return self._inv[a]

    def pow(self, a, e):
        """Square-and-multiply; ``e`` must be non-negative."""
        result = 1
        while e:
            if e & 1:
                result = self._mul[result][a]
            a = self._mul[a][a]
            e >>= 1
        return result

    def poly_mul(self, a, b):
        """Reference product via polynomial multiplication mod the modulus."""
        c = poly_mulmod(self.coeffs(a), self.coeffs(b), list(self.modulus), self.p)
        return self._from_poly(c)

    def to_dict(self):
        return {"p": self.p, "n": self.n, "modulus": list(self.modulus)}


def field_new(p: int, n: int, modulus=None) -> FieldSpec:
    return FieldSpec(p, n, modulus)


def gf(q: int, modulus=None) -> FieldSpec:
    p, n = prime_power(q)
    return FieldSpec(p, n, modulus)


@dataclass(frozen=True)
class Automorphism:
    """The Frobenius power x -> x**m of a field whose order is a power of m."""

    field: FieldSpec
    m: int
    table: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        K, m = self.field, self.m
        p, e = prime_power(m) if m > 1 else (0, 0)
        if p != K.p:
            raise FieldError(f"m={m} is not a power of the characteristic {K.p}")
        if K.n % e:
            raise FieldError(f"q={K.q} is not a power of m={m}")
        object.__setattr__(self, "table", tuple(K.pow(a, m) for a in K.elements()))
        fixed = sum(1 for a in K.elements() if self.table[a] == a)
        if fixed != m:
            raise FieldError(f"fixed field has {fixed} elements, expected {m}")

    def __call__(self, a: int) -> int:
        return self.table[a]

    @property
    def h(self) -> int:
        """Order of the automorphism: q == m**h."""
        return self.field.n // prime_power(self.m)[1]

    @property
    def is_identity(self) -> bool:
        return self.m == self.field.q

    @cached_property
    def fixed_field(self) -> list[int]:
        return [a for a in self.field.elements() if self.table[a] == a]

    @cached_property
    def array(self) -> np.ndarray:
        return np.array(self.table, dtype=np.int64)

    def norm(self, a: int) -> int:
        """``a * a**sigma``; lands in the fixed field when sigma is an involution."""
        r = self.field.mul(a, self.table[a])
        if self.h <= 2:
            assert self.table[r] == r
        return r
