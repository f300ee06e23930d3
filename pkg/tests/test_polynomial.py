import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from loopcoh.polynomial import (AlgebraError, GeneratorSet, Polynomial,
                                Sq1Table, is_decomposable, sq1_apply)
from loopcoh.rings import RingSpec

Z = RingSpec.integers()
F2 = RingSpec.prime_field(2)


def zgens():
    return GeneratorSet(("x2", "x4"), (2, 4), Z)


def f2gens():
    return GeneratorSet(("u2", "u3"), (2, 3), F2)


def test_degree_must_be_at_least_two():
    with pytest.raises(AlgebraError):
        GeneratorSet(("x",), (1,), Z)


def test_odd_degree_needs_char_two():
    with pytest.raises(AlgebraError):
        GeneratorSet(("x",), (3,), Z)
    GeneratorSet(("x",), (3,), F2)  # fine over F2


def test_duplicate_names_rejected():
    with pytest.raises(AlgebraError):
        GeneratorSet(("x", "x"), (2, 2), Z)


def test_basis_in_degree_counts():
    gens = zgens()
    # degree 8: x2^4, x2^2 x4, x4^2
    assert len(gens.basis_in_degree(8)) == 3
    assert len(gens.basis_in_degree(3)) == 0
    assert gens.basis_in_degree(0) == [gens.unit_monomial()]


def test_monomial_degree():
    gens = zgens()
    for mono in gens.basis_in_degree(6):
        assert gens.monomial_degree(mono) == 6


def test_product_is_graded():
    gens = zgens()
    x2 = Polynomial.generator(gens, "x2")
    x4 = Polynomial.generator(gens, "x4")
    prod = x2 * x4
    assert prod.degree() == 6
    assert prod.is_homogeneous()


def test_polynomial_arithmetic():
    gens = zgens()
    x2 = Polynomial.generator(gens, "x2")
    assert (x2 + x2) - x2 == x2
    assert (x2 - x2) == Polynomial.zero(gens)
    assert x2.scale(3) + x2.scale(-3) == Polynomial.zero(gens)


def test_is_decomposable():
    gens = zgens()
    x2 = Polynomial.generator(gens, "x2")
    x4 = Polynomial.generator(gens, "x4")
    assert is_decomposable(x2 * x2)
    assert is_decomposable(x2 * x4 + x2 * x2 * x2)
    assert not is_decomposable(x4)
    assert not is_decomposable(x4 + x2 * x2)


def test_sq1_table_degree_check():
    gens = f2gens()
    u3 = Polynomial.generator(gens, "u3")
    Sq1Table(gens, {"u2": u3})  # degree 2 -> 3: fine
    with pytest.raises(AlgebraError):
        Sq1Table(gens, {"u3": u3})  # degree 3 -> needs degree 4


def test_sq1_requires_char_two():
    gens = zgens()
    with pytest.raises(Exception):
        Sq1Table(gens, {"x2": Polynomial.generator(gens, "x4")})


def test_sq1_apply_is_a_derivation():
    gens = f2gens()
    u2 = Polynomial.generator(gens, "u2")
    u3 = Polynomial.generator(gens, "u3")
    sq1 = Sq1Table(gens, {"u2": u3})
    # Sq1(u2^2) = 2 u2 Sq1(u2) = 0 over F2
    assert sq1_apply(u2 * u2, sq1) == Polynomial.zero(gens)
    # Sq1(u2 u3) = Sq1(u2) u3 = u3^2
    assert sq1_apply(u2 * u3, sq1) == u3 * u3


def test_sq1_trivial():
    gens = f2gens()
    sq1 = Sq1Table.trivial(gens)
    u2 = Polynomial.generator(gens, "u2")
    assert sq1_apply(u2, sq1) == Polynomial.zero(gens)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10), st.integers(0, 10))
def test_basis_product_degrees(n, m):
    gens = zgens()
    for a in gens.basis_in_degree(n):
        for b in gens.basis_in_degree(m):
            prod = Polynomial.monomial(gens, a) * Polynomial.monomial(gens, b)
            assert prod.degree() == n + m
            assert prod.is_homogeneous()


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 8))
def test_sq1_apply_additive(n):
    gens = f2gens()
    sq1 = Sq1Table(gens, {"u2": Polynomial.generator(gens, "u3")})
    basis = gens.basis_in_degree(n)
    if len(basis) < 2:
        return
    a = Polynomial.monomial(gens, basis[0])
    b = Polynomial.monomial(gens, basis[1])
    assert sq1_apply(a + b, sq1) == sq1_apply(a, sq1) + sq1_apply(b, sq1)
