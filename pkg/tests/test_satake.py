import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from siegel.exactring import GF, GFX
from siegel.rootdatum import (
    Cocharacter,
    build_root_datum,
    dominance_compare,
    dominant_representative,
    eta_exponent,
    iter_dominant,
    lower_set,
    pair,
    weyl_group,
)
from siegel.satake import (
    F49,
    DualTorusPoint,
    Eigensystem,
    LaurentV,
    SatakeCoefficients,
    SatakeError,
    apply_eigensystem,
    central_exponent,
    char_eval,
    eta_dual,
    format_table,
    invert_coefficients,
    left_chain,
    main_theorem_verify,
    parse_table,
    random_coefficients,
    random_eigensystem,
    random_instance_lambda,
    rho_pairing,
    right_chain,
    satake_image,
    satake_inverse_chi,
    sqrt_in_field,
    twist_eigensystem,
    weights_of_irrep,
    weyl_act,
)

RING = F49()
DOMINANT = [lam for g in (1, 2) for lam in iter_dominant(g, 2)]


def C(*a):
    return Cocharacter(tuple(a))


def weyl_dimension(lam):
    rd = build_root_datum(lam.g)
    num = den = Fraction(1)
    for a in rd.positive_roots:
        num *= pair(a, 2 * lam + rd.rho2_hat)
        den *= pair(a, rd.rho2_hat)
    return num / den


def random_point(g, rng):
    coords = []
    while len(coords) < g + 1:
        x = RING([rng.randrange(7), rng.randrange(7)])
        if not x.is_zero():
            coords.append(x)
    return DualTorusPoint(g, tuple(coords))


# --- weights ------------------------------------------------------------------


def test_weights_examples():
    assert weights_of_irrep(C(1, 1)) == {C(1, 1): 1, C(0, 1): 1}
    assert weights_of_irrep(C(0, 0)) == {C(0, 0): 1}
    assert weights_of_irrep(C(0, 0, 0)) == {C(0, 0, 0): 1}
    # spin representation of GSpin_5 and the standard one of SO_5 twisted
    assert sum(weights_of_irrep(C(1, 1, 1)).values()) == 4
    assert sum(weights_of_irrep(C(1, 0, 0)).values()) == 5


@pytest.mark.parametrize("lam", DOMINANT, ids=lambda l: str(l.coeffs))
def test_dimension_matches_weyl_formula(lam):
    assert sum(weights_of_irrep(lam).values()) == weyl_dimension(lam)


@pytest.mark.parametrize("lam", DOMINANT, ids=lambda l: str(l.coeffs))
def test_weights_structure(lam):
    w = weights_of_irrep(lam)
    assert w[lam] == 1
    for mu, mult in w.items():
        for s in weyl_group(lam.g):
            assert w.get(s(mu)) == mult
        assert dominance_compare(lam, dominant_representative(mu)) is not None
        assert mu[lam.g] == eta_exponent(lam)
    assert central_exponent(lam) == eta_exponent(lam)


@pytest.mark.parametrize("lam", [lam for lam in DOMINANT if lam.g == 2 and max(map(abs, lam.coeffs)) <= 1])
def test_character_properties(lam):
    rng = random.Random(hash(lam.coeffs) & 0xFFFF)
    for _ in range(4):
        t = random_point(lam.g, rng)
        base = char_eval(lam, t)
        for w in weyl_group(lam.g):
            assert char_eval(lam, weyl_act(w, t)) == base
        a = random_point(0, rng).coords[0]
        assert char_eval(lam, eta_dual(lam.g, a) * t) == a ** eta_exponent(lam) * base


def test_literal_eta_point_is_not_the_scalar():
    # at t = eta-vee(a) alone, chi takes dim * a^c rather than a^c
    lam = C(1, 1, 1)
    a = RING(3)
    assert char_eval(lam, eta_dual(2, a)) == RING(4) * a ** central_exponent(lam)


def test_weight_guards():
    with pytest.raises(SatakeError):
        weights_of_irrep(C(0, 1))
    with pytest.raises(SatakeError):
        weights_of_irrep(C(1, 1, 1, 2))
    with pytest.raises(SatakeError):
        weights_of_irrep(C(7, 7))


# --- Satake tables ------------------------------------------------------------


def test_laurent_arithmetic():
    a = LaurentV.monomial(RING, 2, 1) + LaurentV.monomial(RING, 1, -1)
    b = a * a
    v = sqrt_in_field(RING, 3)
    assert v * v == RING(3)
    assert b.evaluate(v) == a.evaluate(v) ** 2
    assert (a * LaurentV.monomial(RING, 0, 4)).terms == {}


@given(st.integers(0, 10 ** 6))
def test_inverse_is_involution(seed):
    rng = random.Random(seed)
    lam = rng.choice([lam for lam in DOMINANT if len(lower_set(lam)) <= 8])
    b = random_coefficients(lam, 3, RING, rng)
    d = invert_coefficients(b)
    assert invert_coefficients(d) == b
    for mu in lower_set(lam):
        for nu in lower_set(mu):
            s = sum((d.get(mu, x) * b.get(x, nu) for x in lower_set(mu)), RING.zero())
            assert s == (RING.one() if nu == mu else RING.zero())


def test_identity_table():
    for lam in DOMINANT:
        ident = SatakeCoefficients.identity(lam.g, 3, RING, lam)
        assert satake_inverse_chi(lam, ident).terms == {lam: LaurentV.monomial(RING, 1, -rho_pairing(lam))}
        assert satake_image(lam, ident).terms == {lam: LaurentV.monomial(RING, 1, rho_pairing(lam))}
        assert invert_coefficients(ident) == ident


def test_satake_image_exponents_g1():
    lam = C(2, 2)
    b = random_coefficients(lam, 3, RING, random.Random(0))
    img = satake_image(lam, b)
    assert set(img.terms) == {mu for mu in lower_set(lam) if not b.get(lam, mu).is_zero()}
    for mu, coeff in img.terms.items():
        assert set(coeff.terms) == {rho_pairing(mu)}
    assert rho_pairing(C(2, 2)) == 2 and rho_pairing(C(1, 2)) == 0


def test_table_validation():
    lam = C(2, 2)
    with pytest.raises(SatakeError):
        SatakeCoefficients(1, 3, RING, {lam: {lam: RING(2)}, C(1, 2): {C(1, 2): RING(1)}})
    with pytest.raises(SatakeError):
        SatakeCoefficients(1, 3, RING, {lam: {lam: RING(1)}})  # not closed below
    with pytest.raises(SatakeError):
        SatakeCoefficients(1, 3, RING, {C(1, 2): {C(1, 2): RING(1), lam: RING(1)}})
    with pytest.raises(SatakeError):
        SatakeCoefficients(1, 3, RING, {C(0, 1): {C(0, 1): RING(1)}})


def test_table_round_trip():
    rng = random.Random(4)
    for lam in (C(2, 2), C(1, 1, 2), C(2, 1, 2)):
        b = random_coefficients(lam, 5, RING, rng)
        text = format_table(b)
        assert parse_table(text, lam.g, 5, RING) == b


def test_parse_table_default_diagonal():
    t = parse_table("2,2 ; 1,2 ; 3  # comment\n\n1,2;1,2;1\n", 1, 3, GF(7))
    assert t.get(C(2, 2), C(2, 2)) == 1 and t.get(C(2, 2), C(1, 2)) == 3
    with pytest.raises(SatakeError):
        parse_table("2,2 ; 1,2\n", 1, 3, GF(7))


# --- eigensystems and the twisting argument ------------------------------------


def test_eigensystem_lower_set_required():
    with pytest.raises(SatakeError):
        Eigensystem(1, 3, 7, {C(2, 2): RING(1)})


def test_twist_example():
    lam = C(1, 1, 2)
    psi = Eigensystem(2, 3, 7, {mu: RING(1) for mu in lower_set(lam)})
    tw = twist_eigensystem(psi, 2)
    assert tw[lam] == RING(3) ** 4 == RING(4)


@given(st.integers(0, 10 ** 6), st.integers(0, 3), st.integers(0, 3))
def test_twist_composes(seed, m1, m2):
    rng = random.Random(seed)
    lam = random_instance_lambda(2, rng)
    psi = random_eigensystem(lam, 3, 7, RING, rng)
    assert twist_eigensystem(twist_eigensystem(psi, m1), m2) == twist_eigensystem(psi, m1 + m2)


def test_twist_guards():
    psi = Eigensystem(1, 7, 7, {C(0, 0): RING(1)})
    with pytest.raises(SatakeError):
        twist_eigensystem(psi, 1)
    with pytest.raises(SatakeError):
        twist_eigensystem(Eigensystem(1, 3, 7, {C(0, 0): RING(1)}), -1)


def test_apply_eigensystem_identity():
    lam = C(1, 1, 1)
    psi = random_eigensystem(lam, 3, 7, RING, random.Random(2))
    v = sqrt_in_field(RING, 3)
    h = satake_inverse_chi(lam, SatakeCoefficients.identity(2, 3, RING, lam))
    assert apply_eigensystem(h, psi, v) == psi[lam] * v ** (-rho_pairing(lam))


@pytest.mark.parametrize("g,m", [(g, m) for g in (1, 2) for m in sorted({0, 1, 2, g})])
def test_main_theorem_random(g, m):
    rng = random.Random(10 * g + m)
    for _ in range(20):
        ell = rng.choice((2, 3, 5))
        v = sqrt_in_field(RING, ell)
        lam = random_instance_lambda(g, rng, need_eta=m > 0)
        d = random_coefficients(lam, ell, RING, rng)
        psi = random_eigensystem(lam, ell, 7, RING, rng)
        ok, tr = main_theorem_verify(lam, d, psi, m, ell, 7, v)
        assert ok, str(tr)
        assert tr.symbolically_distinct == (m > 0)
        assert "PASS" in str(tr)


def test_main_theorem_detects_wrong_twist():
    rng = random.Random(8)
    caught = 0
    for _ in range(30):
        lam = random_instance_lambda(2, rng, need_eta=True)
        d = random_coefficients(lam, 3, RING, rng)
        psi = random_eigensystem(lam, 3, 7, RING, rng)
        v = sqrt_in_field(RING, 3)
        right = right_chain(lam, d, psi, 1, v)
        if right.is_zero():
            continue
        assert left_chain(lam, d, twist_eigensystem(psi, 1), v) == right
        assert left_chain(lam, d, twist_eigensystem(psi, 2), v) != right
        caught += 1
    assert caught > 20


def test_main_theorem_prime_field():
    # l = 2 is a square mod 7
    v = sqrt_in_field(GF(7), 2)
    lam = C(1, 1, 2)
    rng = random.Random(1)
    d = random_coefficients(lam, 2, GF(7), rng)
    psi = random_eigensystem(lam, 2, 7, GF(7), rng)
    assert main_theorem_verify(lam, d, psi, 2, 2, 7, v)[0]


def test_main_theorem_guards():
    lam = C(2, 2)
    rng = random.Random(0)
    d = random_coefficients(lam, 3, RING, rng)
    psi = random_eigensystem(lam, 3, 7, RING, rng)
    v = sqrt_in_field(RING, 3)
    with pytest.raises(SatakeError):
        main_theorem_verify(lam, d, psi, 1, 3, 7, RING(3))  # not a square root
    with pytest.raises(SatakeError):
        main_theorem_verify(lam, d, psi, 1, 5, 7, v)
    with pytest.raises(SatakeError):
        main_theorem_verify(C(2, 2), random_coefficients(C(1, 2), 3, RING, rng), psi, 1, 3, 7, v)
    assert sqrt_in_field(GF(7), 3) is None
    assert sqrt_in_field(GFX(7, (1, 0, 1)), 3) is not None


