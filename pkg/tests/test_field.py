import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ddforge.field import (CONWAY, Automorphism, FieldError, FieldSpec, field_new, gf,
                           is_irreducible, poly_divmod, prime_power)

SMALL = [2, 3, 4, 5, 7, 8, 9, 16]
W = 2  # omega, root of x^2 + x + 1 in GF(4)


def test_gf4_elements():
    K = field_new(2, 2, [1, 1, 1])
    assert list(K.elements()) == [0, 1, 2, 3]
    assert [K.coeffs(a) for a in K.elements()] == [[0, 0], [1, 0], [0, 1], [1, 1]]


def test_reducible_modulus_rejected():
    with pytest.raises(FieldError, match="reducible"):
        field_new(2, 2, [1, 0, 1])


def test_wrong_degree_and_non_prime():
    with pytest.raises(FieldError):
        field_new(2, 3, [1, 1, 1])
    with pytest.raises(FieldError):
        field_new(4, 1)
    with pytest.raises(FieldError, match="not a prime power"):
        prime_power(6)


def test_default_gf9_modulus_irreducible():
    K = field_new(3, 2)
    # trial division by every monic linear polynomial over GF(3)
    assert all(poly_divmod(list(K.modulus), [c, 1], 3)[1] for c in range(3))
    assert K.q == 9


@pytest.mark.parametrize("key", sorted(CONWAY))
def test_default_table_irreducible_and_primitive(key):
    p, n = key
    assert is_irreducible(list(CONWAY[key]), p)
    K = FieldSpec(p, n)
    x = p  # the residue of x
    assert next(k for k in range(1, K.q) if K.pow(x, k) == 1) == K.q - 1


def test_gf4_products():
    K = gf(4)
    assert K.mul(W, W) == W + 1
    assert K.mul(W, 1) == W
    assert K.mul(W, W + 1) == 1


def test_gf4_inverse():
    K = gf(4)
    assert K.inv(1) == 1
    assert K.inv(W) == W + 1
    with pytest.raises(ZeroDivisionError):
        K.inv(0)


@pytest.mark.parametrize("q", SMALL)
def test_tables_match_polynomial_arithmetic(q):
    K = gf(q)
    for a in K.elements():
        for b in K.elements():
            assert K.mul(a, b) == K.poly_mul(a, b)
            assert K.mul(a, b) == K.mul(b, a)
            assert K.add(a, K.neg(a)) == 0


@pytest.mark.parametrize("q", SMALL)
def test_inverse_by_search(q):
    K = gf(q)
    for a in range(1, q):
        (found,) = [b for b in K.elements() if K.poly_mul(a, b) == 1]
        assert K.inv(a) == found


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(SMALL + [25, 27, 32, 49, 64, 81, 128, 256]), st.data())
def test_field_axioms(q, data):
    K = gf(q)
    a, b, c = (data.draw(st.integers(0, q - 1)) for _ in range(3))
    assert K.mul(K.mul(a, b), c) == K.mul(a, K.mul(b, c))
    assert K.mul(a, K.add(b, c)) == K.add(K.mul(a, b), K.mul(a, c))
    assert K.sub(K.add(a, b), b) == a
    if a:
        assert K.mul(a, K.inv(a)) == 1 == K.mul(K.inv(a), a)


def test_frobenius_gf4():
    K = gf(4)
    sig = Automorphism(K, 2)
    assert sig(W) == W + 1
    assert sig(1) == 1
    assert sig(0) == 0


def test_norm_gf4():
    sig = Automorphism(gf(4), 2)
    assert sig.norm(W) == 1
    assert sig.norm(0) == 0
    assert sig.norm(W + 1) == 1


@pytest.mark.parametrize("q,m", [(4, 2), (4, 4), (8, 2), (9, 3), (16, 2), (16, 4), (2, 2), (27, 3)])
def test_frobenius_properties(q, m):
    K = gf(q)
    sig = Automorphism(K, m)
    for a in K.elements():
        assert sig(a) == K.pow(a, m)
        for b in K.elements():
            assert sig(K.add(a, b)) == K.add(sig(a), sig(b))
            assert sig(K.mul(a, b)) == K.mul(sig(a), sig(b))
    assert len(sig.fixed_field) == m
    # sigma applied h times is the identity
    for a in K.elements():
        x = a
        for _ in range(sig.h):
            x = sig(x)
        assert x == a
    assert m**sig.h == q


@pytest.mark.parametrize("q,m", [(4, 3), (8, 4), (9, 2), (4, 1)])
def test_bad_automorphism(q, m):
    with pytest.raises(FieldError):
        Automorphism(gf(q), m)


def test_norm_lands_in_fixed_field():
    for q, m in [(4, 2), (9, 3), (16, 4), (25, 5)]:
        sig = Automorphism(gf(q), m)
        F = set(sig.fixed_field)
        assert all(sig.norm(a) in F for a in range(q))
