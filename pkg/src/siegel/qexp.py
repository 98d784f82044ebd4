"""Truncated Fourier expansions of degree-g Siegel modular forms.

An index n in F(g) (half-integral, symmetric, positive semidefinite, integral
diagonal) is stored doubled as the integer matrix 2n.  Series are truncated by
trace: a QExpansion with trace bound tau knows every coefficient a(n) with
Tr(n) <= tau and nothing beyond.  Trace is additive and bounds every entry of a
PSD matrix, so products stay exact up to the smaller bound.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Optional, TextIO

from .exactring import (
    GF,
    QQ,
    DescriptorMismatch,
    NonPIntegral,
    RingDescriptor,
    RingValue,
    reduce_to_prime_field,
)

__all__ = [
    "FourierIndex",
    "QExpansion",
    "IndexError_",
    "NotSymmetric",
    "OddDiagonal",
    "NotPSD",
    "index_validate",
    "indices_up_to",
    "qexp_linear",
    "qexp_mul",
    "eisenstein",
    "delta",
    "bernoulli",
    "reduce_mod_p",
    "reindex_level",
    "one",
    "random_qexp",
    "dumps",
    "loads",
    "write",
    "read",
]


class IndexError_(ValueError):
    """Invalid Fourier index."""


class NotSymmetric(IndexError_):
    pass


class OddDiagonal(IndexError_):
    pass


class NotPSD(IndexError_):
    pass


def _det(M) -> Fraction:
    """Exact determinant by fraction elimination."""
    n = len(M)
    A = [[Fraction(x) for x in row] for row in M]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det *= A[c][c]
        for r in range(c + 1, n):
            f = A[r][c] / A[c][c]
            if f:
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return det


def _principal_minors_nonneg(M) -> bool:
    n = len(M)
    for size in range(1, n + 1):
        for idx in itertools.combinations(range(n), size):
            if _det([[M[i][j] for j in idx] for i in idx]) < 0:
                return False
    return True


@dataclass(frozen=True, order=True)
class FourierIndex:
    """n in F(g), held as ``doubled`` = 2n."""

    doubled: tuple[tuple[int, ...], ...]

    @property
    def g(self) -> int:
        return len(self.doubled)

    @property
    def trace(self) -> int:
        return sum(self.doubled[i][i] for i in range(self.g)) // 2

    @property
    def det(self) -> Fraction:
        """det(n) = det(2n) / 2^g."""
        return _det(self.doubled) / 2 ** self.g

    def matrix(self) -> list[list[Fraction]]:
        """n itself, with half-integral entries."""
        return [[Fraction(x, 2) for x in row] for row in self.doubled]

    def __add__(self, other: "FourierIndex") -> "FourierIndex":
        return FourierIndex(tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.doubled, other.doubled)))

    def upper(self) -> tuple[int, ...]:
        g = self.g
        return tuple(self.doubled[i][j] for i in range(g) for j in range(i, g))

    @classmethod
    def from_upper(cls, g: int, entries) -> "FourierIndex":
        entries = list(entries)
        if len(entries) != g * (g + 1) // 2:
            raise IndexError_(f"need {g * (g + 1) // 2} upper-triangle entries for g={g}")
        M = [[0] * g for _ in range(g)]
        it = iter(entries)
        for i in range(g):
            for j in range(i, g):
                M[i][j] = M[j][i] = int(next(it))
        return index_validate(M)

    @classmethod
    def zero(cls, g: int) -> "FourierIndex":
        return cls(tuple((0,) * g for _ in range(g)))

    def __str__(self):
        return ",".join(map(str, self.upper()))


def index_validate(doubled) -> FourierIndex:
    """Accept 2n iff symmetric, even diagonal and positive semidefinite."""
    M = [list(map(int, row)) for row in doubled]
    g = len(M)
    if any(len(row) != g for row in M):
        raise NotSymmetric("index matrix must be square")
    for i in range(g):
        for j in range(i + 1, g):
            if M[i][j] != M[j][i]:
                raise NotSymmetric(f"entry ({i},{j}) differs from ({j},{i})")
    if any(M[i][i] % 2 for i in range(g)):
        raise OddDiagonal("diagonal of 2n must be even")
    if not _principal_minors_nonneg(M):
        raise NotPSD("index is not positive semidefinite")
    return FourierIndex(tuple(tuple(row) for row in M))


@lru_cache(maxsize=None)
def indices_up_to(g: int, tau: int) -> tuple[FourierIndex, ...]:
    """Every index of F(g) with trace <= tau, sorted by (trace, entries)."""
    out = []
    pairs = [(i, j) for i in range(g) for j in range(i + 1, g)]
    for diag in itertools.product(range(tau + 1), repeat=g):
        if sum(diag) > tau:
            continue
        ranges = [range(-math.isqrt(4 * diag[i] * diag[j]), math.isqrt(4 * diag[i] * diag[j]) + 1) for i, j in pairs]
        for off in itertools.product(*ranges):
            M = [[0] * g for _ in range(g)]
            for i in range(g):
                M[i][i] = 2 * diag[i]
            for (i, j), b in zip(pairs, off):
                M[i][j] = M[j][i] = b
            if g <= 2 or _principal_minors_nonneg(M):
                out.append(FourierIndex(tuple(tuple(r) for r in M)))
    out.sort(key=lambda n: (n.trace, n.upper()))
    return tuple(out)


@dataclass(frozen=True)
class QExpansion:
    """sum a(n) q_N^n over Tr(n) <= tau.  ``k`` is None when unknown."""

    g: int
    N: int
    k: Optional[int]
    ring: RingDescriptor
    tau: int
    coeffs: Mapping[FourierIndex, RingValue] = field(default_factory=dict)

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("level must be positive")
        if self.tau < 0:
            raise ValueError("trace bound must be nonnegative")
        clean = {}
        for n, c in self.coeffs.items():
            if not isinstance(n, FourierIndex):
                n = index_validate(n)
            if n.g != self.g:
                raise IndexError_(f"index of degree {n.g} in a degree {self.g} series")
            if n.trace > self.tau:
                continue
            c = self.ring(c)
            if not c.is_zero():
                clean[n] = c
        object.__setattr__(self, "coeffs", clean)

    def __getitem__(self, n) -> RingValue:
        if not isinstance(n, FourierIndex):
            n = index_validate(n)
        if n.trace > self.tau:
            raise KeyError(f"coefficient at trace {n.trace} is beyond the bound {self.tau}")
        return self.coeffs.get(n, self.ring.zero())

    def coefficient_list(self) -> list[RingValue]:
        """a(0), a(1), .., a(tau) for g = 1."""
        if self.g != 1:
            raise ValueError("coefficient_list is for g = 1")
        return [self.coeffs.get(FourierIndex(((2 * n,),)), self.ring.zero()) for n in range(self.tau + 1)]

    def truncate(self, tau: int) -> "QExpansion":
        return self.replace(tau=min(tau, self.tau))

    def replace(self, **kw) -> "QExpansion":
        args = dict(g=self.g, N=self.N, k=self.k, ring=self.ring, tau=self.tau, coeffs=self.coeffs)
        args.update(kw)
        return QExpansion(**args)

    def scale(self, c) -> "QExpansion":
        c = self.ring(c)
        return self.replace(coeffs={n: a * c for n, a in self.coeffs.items()})

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other):
        return qexp_linear(self.ring.one(), self, self.ring.one(), other)

    def __sub__(self, other):
        return qexp_linear(self.ring.one(), self, -self.ring.one(), other)

    def __mul__(self, other):
        if isinstance(other, QExpansion):
            return qexp_mul(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, QExpansion):
            return NotImplemented
        return (
            (self.g, self.N, self.k, self.ring, self.tau) == (other.g, other.N, other.k, other.ring, other.tau)
            and dict(self.coeffs) == dict(other.coeffs)
        )

    def same_coefficients(self, other: "QExpansion") -> bool:
        """Equal coefficients up to the common trace bound (ignores weight)."""
        tau = min(self.tau, other.tau)
        a = {n: c for n, c in self.coeffs.items() if n.trace <= tau}
        b = {n: c for n, c in other.coeffs.items() if n.trace <= tau}
        return a == b


def _check_compatible(f: QExpansion, h: QExpansion):
    if (f.g, f.N, f.ring) != (h.g, h.N, h.ring):
        raise DescriptorMismatch(f"series mismatch: (g={f.g}, N={f.N}, {f.ring}) vs (g={h.g}, N={h.N}, {h.ring})")


def qexp_linear(a, f: QExpansion, b, h: QExpansion) -> QExpansion:
    """a f + b h; weight kept only if both weights agree."""
    _check_compatible(f, h)
    a, b = f.ring(a), f.ring(b)
    tau = min(f.tau, h.tau)
    out: dict[FourierIndex, RingValue] = {}
    for n, c in f.coeffs.items():
        if n.trace <= tau:
            out[n] = a * c
    for n, c in h.coeffs.items():
        if n.trace <= tau:
            out[n] = out[n] + b * c if n in out else b * c
    k = f.k if f.k == h.k else None
    return QExpansion(f.g, f.N, k, f.ring, tau, out)


def qexp_mul(f: QExpansion, h: QExpansion) -> QExpansion:
    """Convolution sum_{n1 + n2 = n} a(n1) b(n2); weights add."""
    _check_compatible(f, h)
    tau = min(f.tau, h.tau)
    fa = sorted(((n, c) for n, c in f.coeffs.items() if n.trace <= tau), key=lambda t: t[0].trace)
    hb = sorted(((n, c) for n, c in h.coeffs.items() if n.trace <= tau), key=lambda t: t[0].trace)
    out: dict[FourierIndex, RingValue] = {}
    for n1, c1 in fa:
        room = tau - n1.trace
        for n2, c2 in hb:
            if n2.trace > room:
                break
            n = n1 + n2
            v = c1 * c2
            out[n] = out[n] + v if n in out else v
    k = f.k + h.k if f.k is not None and h.k is not None else None
    return QExpansion(f.g, f.N, k, f.ring, tau, out)


def one(g: int = 1, tau: int = 0, ring: RingDescriptor = QQ, N: int = 1, k: Optional[int] = 0) -> QExpansion:
    return QExpansion(g, N, k, ring, tau, {FourierIndex.zero(g): ring.one()})


def _from_list(coeffs, k, tau, ring=QQ) -> QExpansion:
    return QExpansion(1, 1, k, ring, tau, {FourierIndex(((2 * n,),)): c for n, c in enumerate(coeffs) if c})


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """B_n with B_1 = -1/2, from sum_{j<=n} C(n+1, j) B_j = 0."""
    if n == 0:
        return Fraction(1)
    return -sum(math.comb(n + 1, j) * bernoulli(j) for j in range(n)) / (n + 1)


def eisenstein(k: int, tau: int) -> QExpansion:
    """E_k = 1 - (2k / B_k) sum sigma_{k-1}(n) q^n, level 1, over QQ."""
    if k < 4 or k % 2:
        raise ValueError("Eisenstein series need even k >= 4")
    c = Fraction(-2 * k) / bernoulli(k)
    coeffs = [Fraction(1)] + [c * sum(d ** (k - 1) for d in range(1, n + 1) if n % d == 0) for n in range(1, tau + 1)]
    return _from_list(coeffs, k, tau)


def delta(tau: int) -> QExpansion:
    """q prod (1 - q^n)^24 to trace bound tau, level 1, weight 12."""
    series = [0] * (tau + 1)
    if tau >= 1:
        series[1] = 1
    for n in range(1, tau + 1):
        for _ in range(24):
            # multiply by (1 - q^n) in place, high degree first
            for i in range(tau, n - 1, -1):
                series[i] -= series[i - n]
    return _from_list([Fraction(x) for x in series], 12, tau)


def reduce_mod_p(f: QExpansion, p: int, zeta_image: Optional[RingValue] = None) -> QExpansion:
    out = {}
    for n, c in f.coeffs.items():
        try:
            out[n] = reduce_to_prime_field(c, p, zeta_image)
        except NonPIntegral as exc:
            raise NonPIntegral(f"coefficient at index {n} is not {p}-integral: {exc}") from None
    ring = zeta_image.ring if zeta_image is not None else GF(p)
    return QExpansion(f.g, f.N, f.k, ring, f.tau, out)


def lift(f: QExpansion) -> QExpansion:
    """Prime-field series to QQ via residues in [0, p)."""
    return QExpansion(f.g, f.N, f.k, QQ, f.tau, {n: c.lift() for n, c in f.coeffs.items()})


def reindex_level(f: QExpansion) -> QExpansion:
    """sum a_n q_N^n -> sum a_n q^n: same table, level 1."""
    return f.replace(N=1)


def random_qexp(
    g: int,
    tau: int,
    ring: RingDescriptor = QQ,
    rng: Optional[random.Random] = None,
    density: float = 0.5,
    N: int = 1,
    k: Optional[int] = None,
    height: int = 20,
) -> QExpansion:
    """Random formal series (not modular) for property tests."""
    rng = rng or random.Random(0)
    coeffs = {}
    for n in indices_up_to(g, tau):
        if rng.random() < density:
            if ring.kind == "QQ":
                coeffs[n] = Fraction(rng.randint(-height, height), rng.choice([1, 1, 1, 2, 3]))
            else:
                coeffs[n] = rng.randrange(ring.p)
    return QExpansion(g, N, k, ring, tau, coeffs)


# --- line-oriented file format ---------------------------------------------

HEADER = "SIEGELQEXP v1"


def dumps(f: QExpansion) -> str:
    k = "none" if f.k is None else str(f.k)
    lines = [f"{HEADER} g={f.g} N={f.N} k={k} ring={f.ring} tau={f.tau}"]
    for n in sorted(f.coeffs, key=lambda n: (n.trace, n.upper())):
        lines.append(f"{n}:{f.ring.format(f.coeffs[n])}")
    return "\n".join(lines) + "\n"


def loads(text: str) -> QExpansion:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith(HEADER):
        raise ValueError("missing SIEGELQEXP v1 header")
    fields = dict(tok.split("=", 1) for tok in lines[0][len(HEADER):].split())
    try:
        g, N, tau = int(fields["g"]), int(fields["N"]), int(fields["tau"])
        ring = RingDescriptor.parse(fields["ring"])
    except KeyError as exc:
        raise ValueError(f"header lacks field {exc}") from None
    k = None if fields.get("k", "none") == "none" else int(fields["k"])
    coeffs = {}
    for ln in lines[1:]:
        idx, _, val = ln.partition(":")
        n = FourierIndex.from_upper(g, idx.split(","))
        if n in coeffs:
            raise ValueError(f"duplicate index {n}")
        coeffs[n] = ring.parse_value(val)
    return QExpansion(g, N, k, ring, tau, coeffs)


def write(f: QExpansion, fh: TextIO) -> None:
    fh.write(dumps(f))


def read(fh: TextIO) -> QExpansion:
    return loads(fh.read())


def from_coefficients(coeffs: Iterable, k: Optional[int], ring: RingDescriptor = QQ, N: int = 1) -> QExpansion:
    """g = 1 series from a(0), a(1), ..."""
    coeffs = list(coeffs)
    return QExpansion(1, N, k, ring, len(coeffs) - 1, {FourierIndex(((2 * n,),)): c for n, c in enumerate(coeffs)})
