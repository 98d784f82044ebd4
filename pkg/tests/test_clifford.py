import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from siegel.clifford import (
    CliffordElement,
    NotInvertible,
    cliff_inverse,
    cliff_mul,
    generator,
    is_gspin,
    parity_automorphism,
    parse_expr,
    scalar,
    twisted_conjugate,
)
from siegel.exactring import GF, QQ


def elements(g):
    size = 1 << (2 * g + 1)
    return st.dictionaries(st.integers(0, size - 1), st.integers(-4, 4), max_size=5).map(
        lambda d: CliffordElement(g, QQ, d)
    )


def vector(g, coeffs):
    out = scalar(g, QQ, 0)
    for i, c in enumerate(coeffs, start=1):
        out = out + generator(g, i) * c
    return out


@pytest.mark.parametrize("g", [1, 2])
def test_generator_relations(g):
    n = 2 * g + 1
    for i in range(1, n + 1):
        ci = generator(g, i)
        assert ci * ci == scalar(g, QQ, 1)
        for j in range(i + 1, n + 1):
            cj = generator(g, j)
            assert ci * cj == -(cj * ci)


def test_dimension():
    assert CliffordElement(1, QQ).dim == 8
    assert CliffordElement(2, QQ).dim == 32
    with pytest.raises(ValueError):
        CliffordElement(1, QQ, {8: 1})


@given(elements(2), elements(2), elements(2))
def test_associative(a, b, c):
    assert (a * b) * c == a * (b * c)


@given(elements(1), elements(1))
def test_gamma_is_an_involutive_automorphism(a, b):
    assert parity_automorphism(cliff_mul(a, b)) == parity_automorphism(a) * parity_automorphism(b)
    assert parity_automorphism(parity_automorphism(a)) == a


@given(st.lists(st.integers(-3, 3), min_size=5, max_size=5), st.lists(st.integers(-3, 3), min_size=5, max_size=5))
def test_two_vector_products_are_gspin(u, w):
    if not any(u) or not any(w):
        return
    x = vector(2, u) * vector(2, w)
    assert is_gspin(x)
    inv = cliff_inverse(x)
    assert x * inv == scalar(2, QQ, 1) == inv * x


def test_non_members():
    g = 1
    c1, c2, c3 = (generator(g, i) for i in (1, 2, 3))
    assert not is_gspin(c1)  # odd
    assert not is_gspin(scalar(g, QQ, 0))
    # 1 + c1 c2 c3: even part is 1 but the element is not homogeneous
    assert not is_gspin(scalar(g, QQ, 1) + c1 * c2 * c3)
    # at g=1 every even invertible element lies in GSpin
    assert is_gspin(scalar(g, QQ, 1) + c1 * c2 * 2 + c2 * c3)


def test_even_non_member_g2():
    g = 2
    c = [None] + [generator(g, i) for i in range(1, 6)]
    y = c[1] * c[2] * c[3] * c[4]
    assert cliff_inverse(scalar(g, QQ, 1) + y) is None  # y^2 = 1
    x = scalar(g, QQ, 1) + y * 2
    # invertible and even, but y anticommutes with c1, so c1 leaves the vector span
    assert cliff_inverse(x) is not None
    assert not is_gspin(x)


def test_non_invertible():
    g = 1
    c1 = generator(g, 1)
    x = scalar(g, QQ, 1) + c1  # (1 + c1)(1 - c1) = 0
    assert cliff_inverse(x) is None
    with pytest.raises(NotInvertible):
        twisted_conjugate(x, c1)


def test_twisted_conjugate_of_vector_is_reflection():
    g = 1
    v = generator(g, 1)
    m = generator(g, 2)
    # gamma(v) m v^{-1} = -v m v = m for m orthogonal to v
    assert twisted_conjugate(v, m) == m
    assert twisted_conjugate(v, v) == -v


def test_parse_expr():
    x = parse_expr("(c1 + c2) * (c1 - 2*c3)", 1)
    c1, c2, c3 = (generator(1, i) for i in (1, 2, 3))
    assert x == (c1 + c2) * (c1 - c3 * 2)
    assert parse_expr("-c1*c1 + 1/2", 1) == scalar(1, QQ, Fraction(-1, 2))
    with pytest.raises(ValueError):
        parse_expr("c1 +", 1)
    with pytest.raises(ValueError):
        parse_expr("c4", 1)


def test_prime_field_coefficients():
    F = GF(5)
    rng = random.Random(2)
    for _ in range(10):
        u = [rng.randrange(5) for _ in range(3)]
        if sum(a * a for a in u) % 5 == 0:
            continue
        v = CliffordElement(1, F, {1 << i: a for i, a in enumerate(u)})
        assert cliff_inverse(v) * v == CliffordElement(1, F, {0: 1})
