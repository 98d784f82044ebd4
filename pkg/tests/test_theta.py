import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from siegel.exactring import GF, QQ
from siegel.qexp import (
    FourierIndex,
    QExpansion,
    delta,
    eisenstein,
    indices_up_to,
    qexp_mul,
    random_qexp,
    reduce_mod_p,
)
from siegel.theta import (
    NotCongruentToOne,
    PQContext,
    ThetaHypothesisError,
    binom,
    bracket,
    normalization_constant,
    p_polys,
    q_eval,
    q_weights,
    theta_bn_direct,
    theta_bn_via_bracket,
)


def test_p_polys_examples():
    assert p_polys([[3]], [[5]]) == [3, 5]
    assert p_polys([[1, 0], [0, 1]], [[2, 1], [1, 3]]) == [1, 5, 5]
    assert p_polys([[2, 1], [1, 2]], [[0, 0], [0, 0]]) == [3, 0, 0]


@given(st.integers(1, 3), st.integers(0, 10 ** 6))
def test_p_polys_against_sympy(g, seed):
    rng = random.Random(seed)

    def sym():
        M = [[Fraction(0)] * g for _ in range(g)]
        for i in range(g):
            for j in range(i, g):
                M[i][j] = M[j][i] = Fraction(rng.randint(-5, 5), rng.choice([1, 2]))
        return M

    R, S = sym(), sym()
    x = sympy.symbols("x")
    M = sympy.Matrix(g, g, lambda i, j: sympy.Rational(R[i][j]) + x * sympy.Rational(S[i][j]))
    poly = sympy.Poly(sympy.expand(M.det()), x)
    want = [Fraction(int(c.p), int(c.q)) for c in reversed(poly.all_coeffs())]
    want += [Fraction(0)] * (g + 1 - len(want))
    assert p_polys(R, S) == want


def test_q_eval_examples():
    ctx = PQContext(1, 4, 6)
    assert q_weights(ctx) == [12, -8]
    assert q_eval(ctx, [[1]], [[0]]) == 12
    assert q_eval(ctx, [[1]], [[1]]) == 4
    assert q_eval(PQContext(2, 3, 5), [[0, 0], [0, 0]], [[0, 0], [0, 0]]) == 0


def test_context_guard():
    with pytest.raises(ThetaHypothesisError):
        PQContext(1, 4, 0)
    with pytest.raises(ThetaHypothesisError):
        PQContext(3, 1, 4)


def _monomial(syms, n: FourierIndex):
    g = n.g
    out = sympy.Integer(1)
    for i in range(g):
        for j in range(i, g):
            out *= syms[i][j] ** (n.doubled[i][j] if i != j else n.doubled[i][i] // 2)
    return out


def _sym_series(f, syms):
    return sum((sympy.Rational(c.payload) * _monomial(syms, n) for n, c in f.coeffs.items()), sympy.Integer(0))


def _sympy_bracket(F, G, ctx):
    """Apply Q(d_q1, d_q2) to F(q1) G(q2) by honest differentiation, then set q1 = q2."""
    g = ctx.g
    a = [[sympy.Symbol(f"a{min(i, j)}{max(i, j)}") for j in range(g)] for i in range(g)]
    b = [[sympy.Symbol(f"b{min(i, j)}{max(i, j)}") for j in range(g)] for i in range(g)]
    r = [[sympy.Symbol(f"r{min(i, j)}{max(i, j)}") for j in range(g)] for i in range(g)]
    s = [[sympy.Symbol(f"s{min(i, j)}{max(i, j)}") for j in range(g)] for i in range(g)]
    x = sympy.Symbol("x")
    detpoly = sympy.Poly(sympy.expand(sympy.Matrix(g, g, lambda i, j: r[i][j] + x * s[i][j]).det()), x)
    Pj = list(reversed(detpoly.all_coeffs()))
    Pj += [0] * (g + 1 - len(Pj))
    Qpoly = sympy.expand(sum(w * p for w, p in zip(q_weights(ctx), Pj)))
    ops = {}
    for i in range(g):
        for j in range(i, g):
            half = sympy.Rational(1, 1 if i == j else 2)
            ops[r[i][j]] = (a[i][j], half)
            ops[s[i][j]] = (b[i][j], half)
    expr = _sym_series(F, a) * _sym_series(G, b)
    total = sympy.Integer(0)
    for monom, coeff in sympy.Poly(Qpoly, *ops).terms():
        term = expr
        for var, power in zip(ops, monom):
            q, half = ops[var]
            for _ in range(power):
                term = sympy.expand(half * q * sympy.diff(term, q))
        total += coeff * term
    sub = {b[i][j]: a[i][j] for i in range(g) for j in range(i, g)}
    return sympy.expand(total.subs(sub)), a


def _coeff_table(expr, syms):
    """Exponent vector -> coefficient for a Laurent polynomial in ``syms``."""
    out = {}
    for t in sympy.Add.make_args(sympy.expand(expr)):
        c, rest = t.as_coeff_Mul()
        powers = rest.as_powers_dict()
        key = tuple(int(powers.get(v, 0)) for v in syms)
        out[key] = out.get(key, 0) + c
    return out


@pytest.mark.parametrize("g,seed", [(1, 0), (1, 1), (2, 0), (2, 1), (2, 2)])
def test_bracket_matches_symbolic_differentiation(g, seed):
    rng = random.Random(seed)
    tau = 3 if g == 1 else 2
    F = random_qexp(g, tau, QQ, rng, density=0.5)
    G = random_qexp(g, tau, QQ, rng, density=0.5)
    ctx = PQContext(g, 3 + seed, 2 + g)
    got = bracket(F, G, ctx)
    expr, a = _sympy_bracket(F, G, ctx)
    syms = [a[i][j] for i in range(g) for j in range(i, g)]
    table = _coeff_table(expr, syms)
    for n in indices_up_to(g, tau):
        key = tuple(n.doubled[i][j] if i != j else n.doubled[i][i] // 2 for i in range(g) for j in range(i, g))
        want = sympy.Rational(table.get(key, 0))
        assert Fraction(int(want.p), int(want.q)) == got[n].payload, n


def test_eigenrelation_symbolic():
    # d_q q^n = (n) q^n, entrywise, for g = 2 with symbolic exponents
    n11, n22, b = sympy.symbols("n11 n22 b", integer=True)
    q11, q12, q22 = sympy.symbols("q11 q12 q22", positive=True)
    mono = q11 ** n11 * q22 ** n22 * q12 ** b
    assert sympy.simplify(q11 * sympy.diff(mono, q11) / mono) == n11
    assert sympy.simplify(sympy.Rational(1, 2) * q12 * sympy.diff(mono, q12) / mono) == b / 2


def test_e4_e6_bracket():
    const = 12 * 240 + 8 * 504
    assert const == 6912
    B = bracket(eisenstein(4, 10), eisenstein(6, 10), PQContext(1, 4, 6))
    assert B.k == 12
    assert B.same_coefficients(delta(10).scale(const))


@given(st.integers(0, 10 ** 6))
def test_rankin_cohen_degeneration_series(seed):
    rng = random.Random(seed)
    F, G = random_qexp(1, 8, QQ, rng), random_qexp(1, 8, QQ, rng)
    k1, k2 = rng.randint(1, 10), rng.randint(1, 10)

    def theta(f):
        return f.replace(coeffs={n: c * n.trace for n, c in f.coeffs.items()})

    want = qexp_mul(theta(F), G).scale(2 * k2) - qexp_mul(F, theta(G)).scale(2 * k1)
    assert bracket(F, G, PQContext(1, k1, k2)).same_coefficients(want)


def test_bracket_with_zero():
    F = QExpansion(1, 1, 4, QQ, 5, {})
    assert bracket(F, eisenstein(6, 5), PQContext(1, 4, 6)).is_zero()


def test_theta_direct_examples():
    f = QExpansion(2, 1, 10, GF(7), 2, {((2, 1), (1, 2)): 1, ((0, 0), (0, 0)): 3, ((2, 2), (2, 2)): 5})
    t = theta_bn_direct(f)
    assert t[[[2, 1], [1, 2]]] == 6
    assert t.k == 10 + 7 + 1
    assert set(t.coeffs) == {FourierIndex(((2, 1), (1, 2)))}  # singular indices are killed
    g1 = reduce_mod_p(delta(8), 5)
    assert [c.payload for c in theta_bn_direct(g1.replace(k=12)).coefficient_list()] == [
        (n * c.payload) % 5 for n, c in enumerate(g1.coefficient_list())
    ]


def test_theta_hypotheses():
    with pytest.raises(ThetaHypothesisError):
        theta_bn_direct(QExpansion(2, 1, 4, GF(3), 1, {}))  # p = 3 = g(g+1)/2
    with pytest.raises(ThetaHypothesisError):
        theta_bn_direct(QExpansion(1, 5, 4, GF(5), 1, {}))  # N = 0 mod p
    with pytest.raises(ThetaHypothesisError):
        theta_bn_direct(delta(3))


@pytest.mark.parametrize("p", [5, 7, 11])
@pytest.mark.parametrize("F", [delta(15), eisenstein(4, 15), eisenstein(6, 15)], ids=["delta", "E4", "E6"])
def test_route_equivalence(p, F):
    via = theta_bn_via_bracket(F, eisenstein(p - 1, 15), 1, p)
    assert via == theta_bn_direct(reduce_mod_p(F, p).replace(k=F.k))


def test_route_equivalence_other_h():
    # H = E_6 is also 1 mod 7
    via = theta_bn_via_bracket(eisenstein(4, 12), eisenstein(6, 12), 1, 7)
    assert via == theta_bn_direct(reduce_mod_p(eisenstein(4, 12), 7))


@given(st.integers(0, 10 ** 6), st.sampled_from([5, 7]))
def test_route_equivalence_g2_synthetic_h(seed, p):
    rng = random.Random(seed)
    F = random_qexp(2, 2, QQ, rng, k=rng.randint(2, 8))
    H = QExpansion(2, 1, p - 1, QQ, 2, {n: p * rng.randint(-3, 3) for n in indices_up_to(2, 2)})
    H = H.replace(coeffs={**H.coeffs, FourierIndex.zero(2): 1 + p * rng.randint(-3, 3)})
    assert theta_bn_via_bracket(F, H, 2, p) == theta_bn_direct(reduce_mod_p(F, p).replace(k=F.k))


def test_h_must_be_one_mod_p():
    with pytest.raises(NotCongruentToOne):
        theta_bn_via_bracket(delta(5), eisenstein(4, 5).replace(k=6), 1, 7)
    with pytest.raises(ThetaHypothesisError):
        theta_bn_via_bracket(delta(5), eisenstein(6, 5).replace(k=4), 1, 7)


@pytest.mark.parametrize("g", [1, 2, 3])
@pytest.mark.parametrize("p", [5, 7, 11, 13])
def test_normalization(g, p):
    c = normalization_constant(g, p)
    assert GF(p)(c) == 1


def test_normalization_symbolic_g1():
    p = sympy.Symbol("p")
    expr = sympy.Rational(-1, 2) * sympy.binomial(2 * p - 2, 1)
    assert sympy.expand(sympy.expand_func(expr)) == 1 - p


def test_binom_convention():
    assert binom(5, -1) == 0
    assert binom(3, 5) == 0
    assert binom(-2, 2) == 3
