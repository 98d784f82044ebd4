import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from siegel.rootdatum import (
    Character,
    Cocharacter,
    NotDominant,
    NotSimilitude,
    build_root_datum,
    cochar_matrix,
    dominance_compare,
    dominant_representative,
    eta_exponent,
    is_dominant,
    iter_dominant,
    lower_set,
    pair,
    similitude_factor,
    symplectic_form,
    weyl_group,
)


def C(*a):
    return Cocharacter(tuple(a))


@pytest.mark.parametrize("g", [1, 2, 3, 4])
def test_root_counts_and_coroot_eta(g):
    rd = build_root_datum(g)
    assert len(rd.positive_roots) == g * g
    assert len(rd.positive_coroots) == g * g
    assert all(eta_exponent(b) == 0 for b in rd.positive_coroots)
    # Cartan pairing of simple roots with simple coroots has 2 on the diagonal
    for a, av in zip(rd.simple_roots, rd.simple_coroots):
        assert pair(a, av) == 2


def test_rho_g1():
    rd = build_root_datum(1)
    assert rd.rho2 == Character((2, -1))
    assert rd.rho2_hat == C(1, 0)
    assert pair(rd.rho2, C(1, 1)) == 1


@pytest.mark.parametrize("g", [1, 2, 3, 4])
def test_weyl_group_order_and_sign(g):
    W = weyl_group(g)
    fact = 1
    for i in range(2, g + 1):
        fact *= i
    assert len(W) == 2 ** g * fact
    assert sum(w.sign for w in W) == 0
    rd = build_root_datum(g)
    # W permutes the roots and preserves the pairing
    roots = set(rd.positive_roots) | {-a for a in rd.positive_roots}
    for w in W:
        assert {w(a) for a in roots} == roots
        x, y = rd.simple_roots[0], rd.simple_coroots[-1]
        assert pair(w(x), w(y)) == pair(x, y)


def test_dominance_examples():
    assert is_dominant(C(1, 1, 1))
    assert not is_dominant(C(0, 1))
    assert dominance_compare(C(1, 1, 1), C(1, 1, 0)) is None
    assert dominance_compare(C(2, 2), C(1, 2)) == (1,)
    with pytest.raises(NotDominant):
        dominance_compare(C(0, 1), C(0, 1))


def test_lower_set_g1_excludes_non_dominant():
    assert lower_set(C(1, 1)) == [C(1, 1)]
    assert lower_set(C(2, 2)) == [C(2, 2), C(1, 2)]


def _brute_lower_set(lam, bound=7):
    g = lam.g
    out = set()
    for n in itertools.product(range(0, 2 * bound + 1), repeat=g):
        mu = lam
        for j, nj in enumerate(n):
            mu = mu - nj * build_root_datum(g).simple_coroots[j]
        if is_dominant(mu):
            out.add(mu)
    return out


@pytest.mark.parametrize("g", [1, 2, 3])
def test_lower_set_against_brute_force(g):
    for lam in iter_dominant(g, 2):
        assert set(lower_set(lam)) == _brute_lower_set(lam)


@given(st.integers(1, 3), st.data())
def test_dominant_representative_is_in_orbit(g, data):
    a = data.draw(st.lists(st.integers(-4, 4), min_size=g + 1, max_size=g + 1))
    lam = Cocharacter(tuple(a))
    rep = dominant_representative(lam)
    assert is_dominant(rep)
    assert rep in {w(lam) for w in weyl_group(g)}


@given(st.integers(1, 3), st.integers(0, 10 ** 6))
def test_dominance_witness_rebuilds(g, seed):
    rng = random.Random(seed)
    lam = rng.choice(list(iter_dominant(g, 3)))
    mu = rng.choice(lower_set(lam))
    n = dominance_compare(lam, mu)
    rd = build_root_datum(g)
    back = mu
    for nj, cv in zip(n, rd.simple_coroots):
        back = back + nj * cv
    assert back == lam and eta_exponent(lam) == eta_exponent(mu)


@pytest.mark.parametrize("lam", [C(1, 1), C(2, 1, 2), C(1, 1, 1), C(3, 0, 3)])
def test_cochar_matrix_similitude(lam):
    M = cochar_matrix(lam, 3)
    assert similitude_factor(M) == Fraction(3) ** eta_exponent(lam)


def test_similitude_rejects_non_symplectic():
    J = symplectic_form(1)
    assert similitude_factor(J) == 1
    with pytest.raises(NotSimilitude):
        similitude_factor([[1, 1], [1, 1]])
    with pytest.raises(NotSimilitude):
        similitude_factor([[1, 0], [0, 0]])
