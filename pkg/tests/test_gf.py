"""Finite field construction, arithmetic axioms, Frobenius and embeddings."""
import random

import pytest

from elldens.gf import (FieldMismatchError, embed, embedding, frobenius,
                        is_irreducible, make_field, prime_power)


def test_prime_power():
    assert prime_power(2) == (2, 1)
    assert prime_power(9) == (3, 2)
    assert prime_power(128) == (2, 7)
    assert prime_power(125) == (5, 3)
    for bad in (1, 6, 12, 100, 0, -4):
        with pytest.raises(ValueError):
            prime_power(bad)


def test_make_field_validates():
    with pytest.raises(ValueError):
        make_field(4, 1)
    with pytest.raises(ValueError):
        make_field(2, 0)


def test_modulus_is_irreducible_and_stable():
    for (p, n) in [(2, 1), (2, 4), (3, 3), (5, 2), (7, 2), (2, 8)]:
        F = make_field(p, n)
        assert len(F.modulus) == n + 1 and F.modulus[-1] == 1
        assert is_irreducible(F.modulus, p)
        # a second construction from scratch picks the same modulus
        assert make_field(p, n).modulus == F.modulus


@pytest.mark.parametrize("p,n", [(2, 1), (3, 1), (5, 1), (2, 2), (2, 3), (3, 2), (5, 2)])
def test_field_axioms_random(p, n):
    F = make_field(p, n)
    rng = random.Random(f"axioms:{p}:{n}")
    elems = list(F.elements())
    for _ in range(200):
        a, b, c = (rng.choice(elems) for _ in range(3))
        assert a + b == b + a
        assert (a + b) + c == a + (b + c)
        assert a * b == b * a
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + F.zero == a
        assert a * F.one == a
        assert a - a == F.zero
        if b != F.zero:
            assert (a / b) * b == a


def test_multiplicative_group_order():
    for (p, n) in [(2, 3), (3, 2), (5, 1), (7, 1)]:
        F = make_field(p, n)
        for a in F.elements():
            if a == F.zero:
                continue
            assert a ** (F.size - 1) == F.one


def test_inverse_and_zero_division():
    F = make_field(3, 2)
    with pytest.raises(ZeroDivisionError):
        F.zero.inverse()
    with pytest.raises(ZeroDivisionError):
        F.one / F.zero
    for a in F.elements():
        if a != F.zero:
            assert a * a.inverse() == F.one


def test_int_coercion_and_pow():
    F = make_field(7, 1)
    a = F.from_int(3)
    assert a + 4 == F.zero
    assert 2 * a == F.from_int(6)
    assert a ** 0 == F.one
    assert a ** -1 == a.inverse()
    assert (a ** 6) == F.one


def test_field_mismatch_rejected():
    F1 = make_field(3, 1)
    F2 = make_field(5, 1)
    with pytest.raises(FieldMismatchError):
        F1.one + F2.one
    # distinct extensions of the same prime are also foreign to each other
    F4 = make_field(2, 2)
    F8 = make_field(2, 3)
    with pytest.raises(FieldMismatchError):
        F4.gen * F8.gen


def test_frobenius_fixes_prime_field_and_has_order_n():
    F = make_field(3, 3)
    q = 3
    for a in F.elements():
        b = frobenius(a, q)
        assert b == a ** q
        # three applications of x -> x^3 give the identity on F_27
        assert frobenius(frobenius(b, q), q) == a
    with pytest.raises(ValueError):
        frobenius(F.one, 2)


def test_frobenius_is_additive():
    F = make_field(2, 4)
    rng = random.Random("frob-add")
    elems = list(F.elements())
    for _ in range(100):
        a, b = rng.choice(elems), rng.choice(elems)
        assert frobenius(a + b, 2) == frobenius(a, 2) + frobenius(b, 2)


def test_embedding_roundtrip_f4_in_f16():
    F4 = make_field(2, 2)
    F16 = make_field(2, 4)
    phi = embedding(F4, F16)
    seen = set()
    for a in F4.elements():
        img = embed(phi, a)
        assert img not in seen
        seen.add(img)
    # ring homomorphism
    for a in F4.elements():
        for b in F4.elements():
            assert embed(phi, a * b) == embed(phi, a) * embed(phi, b)
            assert embed(phi, a + b) == embed(phi, a) + embed(phi, b)
    assert embed(phi, F4.one) == F16.one


def test_embedding_requires_divisible_degree():
    F4 = make_field(2, 2)
    F8 = make_field(2, 3)
    with pytest.raises(ValueError):
        embedding(F4, F8)


def test_embedding_identity():
    F9 = make_field(3, 2)
    phi = embedding(F9, F9)
    for a in F9.elements():
        assert embed(phi, a) == a


def test_small_field_table_path_matches_generic():
    # F_256 is tabled, F_{3^6} = 729 is not; both must satisfy the same identities
    Ft = make_field(2, 8)
    Fg = make_field(3, 6)
    assert Ft._mult is not None
    assert Fg._mult is None
    for F in (Ft, Fg):
        rng = random.Random(f"table:{F.size}")
        for _ in range(60):
            a = F.from_index(rng.randrange(F.size))
            b = F.from_index(rng.randrange(1, F.size))
            assert (a * b) / b == a
            assert a - b + b == a


def test_from_index_bijective():
    F = make_field(5, 2)
    idxs = {F.from_index(i).idx for i in range(F.size)}
    assert idxs == set(range(25))
    with pytest.raises(ValueError):
        F.from_index(25)
