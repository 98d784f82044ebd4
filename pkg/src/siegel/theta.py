"""Bracket of Eholzer-Ibukiyama type and the Boecherer-Nagaoka theta operator.

The matrix operator d_q = ((1 + delta_ij)/2 * q_ij d/dq_ij) has every monomial
q_N^n as an eigenvector with eigenvalue n/N (a matrix; its entries commute).
So the bilinear operator Q(d_q1, d_q2) applied to F(q1) G(q2) and restricted
to the diagonal multiplies a(n1) b(n2) by Q(n1/N, n2/N), which is how
:func:`bracket` evaluates it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exactring import QQ, RingValue, _pdivmod, _pmul, _psub
from .qexp import FourierIndex, QExpansion, _check_compatible, reduce_mod_p

__all__ = [
    "PQContext",
    "ThetaHypothesisError",
    "NotCongruentToOne",
    "binom",
    "p_polys",
    "q_weights",
    "q_eval",
    "bracket",
    "theta_bn_direct",
    "theta_bn_via_bracket",
    "normalization_constant",
]


class ThetaHypothesisError(ValueError):
    pass


class NotCongruentToOne(ValueError):
    pass


def binom(a: int, b: int) -> int:
    """C(a, b) as a falling factorial over b!; zero for b < 0."""
    if b < 0:
        return 0
    num = 1
    for i in range(b):
        num *= a - i
    return num // math.factorial(b)


@dataclass(frozen=True)
class PQContext:
    g: int
    k1: int
    k2: int

    def __post_init__(self):
        if self.g < 1:
            raise ValueError("g must be positive")
        if 2 * self.k1 < self.g or 2 * self.k2 < self.g:
            raise ThetaHypothesisError(f"need 2k_i >= g, got k1={self.k1}, k2={self.k2}, g={self.g}")


def p_polys(R: Sequence[Sequence], S: Sequence[Sequence]) -> list[Fraction]:
    """Coefficients P_0..P_g of det(R + xS), by Bareiss elimination over Q[x]."""
    g = len(R)
    A = [[[Fraction(R[i][j]), Fraction(S[i][j])] for j in range(g)] for i in range(g)]
    A = [[_strip_poly(e) for e in row] for row in A]
    sign = 1
    prev = [Fraction(1)]
    for k in range(g - 1):
        if not A[k][k]:
            swap = next((i for i in range(k + 1, g) if A[i][k]), None)
            if swap is None:
                return [Fraction(0)] * (g + 1)
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, g):
            for j in range(k + 1, g):
                num = _psub(_pmul(A[k][k], A[i][j], None), _pmul(A[i][k], A[k][j], None), None)
                q, r = _pdivmod(num, prev, None)
                assert not r, "Bareiss division must be exact"
                A[i][j] = q
        prev = A[k][k]
    det = A[g - 1][g - 1]
    out = [Fraction(0)] * (g + 1)
    for i, c in enumerate(det):
        out[i] = sign * c
    return out


def _strip_poly(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def q_weights(ctx: PQContext) -> list[int]:
    """The integers (-1)^j j! (g-j)! C(2k2 - j, g - j) C(2k1 - g + j, j)."""
    g = ctx.g
    return [
        (-1) ** j
        * math.factorial(j)
        * math.factorial(g - j)
        * binom(2 * ctx.k2 - j, g - j)
        * binom(2 * ctx.k1 - g + j, j)
        for j in range(g + 1)
    ]


def q_eval(ctx: PQContext, R, S) -> Fraction:
    if len(R) != ctx.g or len(S) != ctx.g:
        raise ValueError("matrix size does not match g")
    return sum((w * pj for w, pj in zip(q_weights(ctx), p_polys(R, S))), Fraction(0))


def _half_matrix(n: FourierIndex, N: int):
    return [[Fraction(x, 2 * N) for x in row] for row in n.doubled]


def bracket(F: QExpansion, G: QExpansion, ctx: PQContext) -> QExpansion:
    """[F, G]: coefficient at n is sum_{n1+n2=n} Q(n1/N, n2/N) a_F(n1) a_G(n2)."""
    _check_compatible(F, G)
    if F.g != ctx.g:
        raise ValueError(f"context is for g={ctx.g}, series have g={F.g}")
    for s, k in ((F, ctx.k1), (G, ctx.k2)):
        if s.k is not None and s.k != k:
            raise ValueError(f"series weight {s.k} does not match context weight {k}")
    tau = min(F.tau, G.tau)
    N = F.N
    weights = q_weights(ctx)
    fa = sorted(((n, c) for n, c in F.coeffs.items() if n.trace <= tau), key=lambda t: t[0].trace)
    gb = sorted(((n, c) for n, c in G.coeffs.items() if n.trace <= tau), key=lambda t: t[0].trace)
    out: dict[FourierIndex, RingValue] = {}
    for n1, c1 in fa:
        R = _half_matrix(n1, N)
        room = tau - n1.trace
        for n2, c2 in gb:
            if n2.trace > room:
                break
            qv = sum((w * pj for w, pj in zip(weights, p_polys(R, _half_matrix(n2, N)))), Fraction(0))
            if qv == 0:
                continue
            n = n1 + n2
            v = c1 * c2 * F.ring(qv)
            out[n] = out[n] + v if n in out else v
    return QExpansion(F.g, N, ctx.k1 + ctx.k2 + 2, F.ring, tau, out)


def _require_theta_hypotheses(g: int, p: int, N: int):
    if 2 * p <= g * (g + 1):
        raise ThetaHypothesisError(f"need p > g(g+1)/2, got p={p}, g={g}")
    if N % p == 0:
        raise ThetaHypothesisError(f"level N={N} is not invertible mod p={p}")


def theta_bn_direct(f: QExpansion) -> QExpansion:
    """Multiply a(n) by det(n) / N^g in the prime field; weight rises by p + 1."""
    if f.ring.kind not in ("GF", "GFX"):
        raise ThetaHypothesisError(f"theta_bn_direct needs prime-field coefficients, got {f.ring}")
    p = f.ring.p
    _require_theta_hypotheses(f.g, p, f.N)
    scale = Fraction(1, f.N ** f.g)
    out = {n: c * f.ring(n.det * scale) for n, c in f.coeffs.items()}
    k = f.k + p + 1 if f.k is not None else None
    return QExpansion(f.g, f.N, k, f.ring, f.tau, out)


def normalization_constant(g: int, p: int) -> Fraction:
    """(-1)^g / (g+1)! * g! * C(2p - 2, g); equals 1 mod p for p > g + 1."""
    return Fraction((-1) ** g * math.factorial(g) * binom(2 * p - 2, g), math.factorial(g + 1))


def theta_bn_via_bracket(F: QExpansion, H: QExpansion, g: int, p: int) -> QExpansion:
    """Reduction mod p of ((-1)^g / (g+1)!) [F, H] with H = 1 mod p of weight p - 1."""
    if F.ring != QQ or H.ring != QQ:
        raise ValueError("bracket route works on rational series")
    if F.g != g or H.g != g:
        raise ValueError("series degree does not match g")
    if F.k is None:
        raise ValueError("the weight of F must be known")
    if H.k is not None and H.k != p - 1:
        raise ThetaHypothesisError(f"H must have weight p - 1 = {p - 1}, got {H.k}")
    _require_theta_hypotheses(g, p, F.N)
    Hbar = reduce_mod_p(H, p)
    zero = FourierIndex.zero(g)
    if any((c != 1) if n == zero else True for n, c in Hbar.coeffs.items()) or Hbar[zero] != 1:
        raise NotCongruentToOne("H is not congruent to 1 modulo p")
    ctx = PQContext(g, F.k, p - 1)
    B = bracket(F, H.replace(k=p - 1), ctx)
    scaled = B.scale(Fraction((-1) ** g, math.factorial(g + 1)))
    out = reduce_mod_p(scaled, p)
    return out.replace(k=F.k + p + 1)
