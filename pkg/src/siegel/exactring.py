"""Exact coefficient rings.

Four kinds of ring are supported, all with canonical payloads so that
equality of values is structural:

* ``QQ``         rationals, payload a :class:`fractions.Fraction`
* ``GF(p)``      the prime field, payload an int in ``[0, p)``
* ``CYC(M)``     ``Q[x]/Phi_M``, payload a tuple of Fractions (low degree first,
                 trailing zeros stripped)
* ``GF(p;m)``    ``F_p[x]/m(x)`` for a monic irreducible ``m``, payload a tuple
                 of ints (low degree first, trailing zeros stripped)

Integers of ``Z_(p)`` are plain rationals; p-integrality is only checked when
reducing (see :func:`reduce_to_prime_field`).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence, Union

__all__ = [
    "RingError",
    "DescriptorMismatch",
    "NonPIntegral",
    "RingDescriptor",
    "RingValue",
    "QQ",
    "GF",
    "CYC",
    "GFX",
    "ring_arith",
    "ring_inverse",
    "cyclotomic_poly",
    "reduce_to_prime_field",
    "is_prime",
    "euler_phi",
    "solve_linear",
]


class RingError(ValueError):
    """Base class for coefficient-ring errors."""


class DescriptorMismatch(RingError):
    pass


class NonPIntegral(RingError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def euler_phi(n: int) -> int:
    result, m, d = n, n, 2
    while d * d <= m:
        if m % d == 0:
            while m % d == 0:
                m //= d
            result -= result // d
        d += 1
    if m > 1:
        result -= result // m
    return result


# --- dense univariate polynomials, low degree first -------------------------
# ``p`` is None for coefficients in Q, else the prime of F_p.


def _strip(c: list) -> list:
    while c and c[-1] == 0:
        c.pop()
    return c


def _norm(c, p):
    if p is None:
        return _strip([Fraction(x) for x in c])
    return _strip([int(x) % p for x in c])


def _padd(a, b, p):
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]
    return _norm(out, p)


def _psub(a, b, p):
    return _padd(a, [-x for x in b], p)


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _norm(out, p)


def _inv_scalar(x, p):
    if p is None:
        return 1 / Fraction(x)
    return pow(int(x), -1, p)


def _pdivmod(a, b, p):
    a = _norm(a, p)
    b = _norm(b, p)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [0] * max(len(a) - len(b) + 1, 0)
    lead_inv = _inv_scalar(b[-1], p)
    r = list(a)
    while len(r) >= len(b) and r:
        shift = len(r) - len(b)
        c = r[-1] * lead_inv
        if p is not None:
            c %= p
        q[shift] = c
        for i, y in enumerate(b):
            r[shift + i] -= c * y
        r = _norm(r, p)
    return _norm(q, p), r


def _pxgcd(a, b, p):
    """Return (g, s, t) with s*a + t*b = g, g monic."""
    r0, r1 = _norm(a, p), _norm(b, p)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = _pdivmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _psub(s0, _pmul(q, s1, p), p)
        t0, t1 = t1, _psub(t0, _pmul(q, t1, p), p)
    if not r0:
        return r0, s0, t0
    inv = [_inv_scalar(r0[-1], p)]
    return _pmul(r0, inv, p), _pmul(s0, inv, p), _pmul(t0, inv, p)


@lru_cache(maxsize=None)
def cyclotomic_poly(M: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_M, low degree first.

    Computed from x^M - 1 = prod_{d | M} Phi_d by exact division.
    """
    if M < 1:
        raise ValueError("cyclotomic order must be positive")
    num = [-1] + [0] * (M - 1) + [1]
    for d in range(1, M):
        if M % d == 0:
            num, rem = _pdivmod(num, list(cyclotomic_poly(d)), None)
            assert not rem
    return tuple(int(c) for c in num)


def _is_irreducible_mod_p(modulus: Sequence[int], p: int) -> bool:
    deg = len(modulus) - 1
    if deg <= 1:
        return deg == 1
    for d in range(1, deg // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            cand = list(tail) + [1]
            _, r = _pdivmod(list(modulus), cand, p)
            if not r:
                return False
    return True


@dataclass(frozen=True)
class RingDescriptor:
    """Which exact ring a value lives in."""

    kind: str  # "QQ", "GF", "CYC", "GFX"
    p: Optional[int] = None
    M: Optional[int] = None
    modulus: Optional[tuple[int, ...]] = None

    def __post_init__(self):
        if self.kind == "QQ":
            pass
        elif self.kind == "GF":
            if self.p is None or not is_prime(self.p):
                raise RingError(f"GF needs a prime, got {self.p}")
        elif self.kind == "CYC":
            if self.M is None or self.M < 1:
                raise RingError(f"CYC needs a positive order, got {self.M}")
        elif self.kind == "GFX":
            if self.p is None or not is_prime(self.p):
                raise RingError(f"GF extension needs a prime, got {self.p}")
            m = self.modulus
            if not m or m[-1] % self.p != 1 or any(not 0 <= c < self.p for c in m):
                raise RingError("modulus must be monic with reduced coefficients")
            if not _is_irreducible_mod_p(m, self.p):
                raise RingError(f"modulus {m} is reducible over F_{self.p}")
        else:
            raise RingError(f"unknown ring kind {self.kind!r}")

    # -- construction of values ---------------------------------------------

    @property
    def characteristic(self) -> int:
        return self.p if self.kind in ("GF", "GFX") else 0

    @property
    def is_field(self) -> bool:
        return True

    def zero(self) -> "RingValue":
        return self(0)

    def one(self) -> "RingValue":
        return self(1)

    def __call__(self, x: Union[int, Fraction, "RingValue", Sequence]) -> "RingValue":
        if isinstance(x, RingValue):
            if x.ring != self:
                raise DescriptorMismatch(f"{x.ring} value given to {self}")
            return x
        if isinstance(x, (list, tuple)):
            return RingValue._make(self, self._canon_poly(x))
        x = Fraction(x)
        if self.kind == "QQ":
            return RingValue._make(self, x)
        if self.kind in ("GF", "GFX"):
            if x.denominator % self.p == 0:
                raise NonPIntegral(f"{x} is not {self.p}-integral")
            r = x.numerator * pow(x.denominator, -1, self.p) % self.p
            if self.kind == "GF":
                return RingValue._make(self, r)
            return RingValue._make(self, (r,) if r else ())
        return RingValue._make(self, tuple(_norm([x], None)))

    def _canon_poly(self, coeffs):
        if self.kind == "CYC":
            _, r = _pdivmod(list(coeffs), list(cyclotomic_poly(self.M)), None)
            return tuple(r)
        if self.kind == "GFX":
            _, r = _pdivmod(list(coeffs), list(self.modulus), self.p)
            return tuple(r)
        raise RingError(f"{self} has no polynomial payloads")

    def gen(self) -> "RingValue":
        """The residue class of x in a polynomial quotient ring."""
        return self([0, 1])

    def elements(self):
        """All elements of a finite ring, in a fixed order."""
        if self.kind == "GF":
            return [self(i) for i in range(self.p)]
        if self.kind == "GFX":
            d = len(self.modulus) - 1
            return [self(list(c)) for c in itertools.product(range(self.p), repeat=d)]
        raise RingError(f"{self} is infinite")

    # -- text encoding --------------------------------------------------------

    def __str__(self) -> str:
        if self.kind == "QQ":
            return "QQ"
        if self.kind == "GF":
            return f"GF({self.p})"
        if self.kind == "CYC":
            return f"CYC({self.M})"
        return f"GF({self.p};{','.join(map(str, self.modulus))})"

    @classmethod
    def parse(cls, text: str) -> "RingDescriptor":
        t = text.strip()
        if t in ("QQ", "Q"):
            return QQ
        if t.startswith("GF(") and t.endswith(")"):
            body = t[3:-1]
            if ";" in body:
                p, mod = body.split(";", 1)
                return GFX(int(p), [int(c) for c in mod.split(",")])
            return GF(int(body))
        if t.startswith("CYC(") and t.endswith(")"):
            return CYC(int(t[4:-1]))
        raise RingError(f"cannot parse ring descriptor {text!r}")

    def format(self, a: "RingValue") -> str:
        if self.kind == "QQ":
            return str(a.payload)
        if self.kind == "GF":
            return f"{a.payload} mod {self.p}"
        if self.kind == "CYC":
            return ",".join(str(c) for c in a.payload) or "0"
        return ",".join(str(c) for c in a.payload) or "0"

    def parse_value(self, text: str) -> "RingValue":
        t = text.strip()
        if self.kind == "QQ":
            return self(Fraction(t))
        if self.kind == "GF":
            r, _, p = t.partition("mod")
            if p and int(p) != self.p:
                raise DescriptorMismatch(f"value {t!r} is not in {self}")
            return self(int(r))
        if self.kind == "CYC":
            return self([Fraction(c) for c in t.split(",")])
        return self([int(c) for c in t.split(",")])


QQ = RingDescriptor("QQ")


def GF(p: int) -> RingDescriptor:
    return RingDescriptor("GF", p=p)


def CYC(M: int) -> RingDescriptor:
    return RingDescriptor("CYC", M=M)


def GFX(p: int, modulus: Sequence[int]) -> RingDescriptor:
    return RingDescriptor("GFX", p=p, modulus=tuple(int(c) % p for c in modulus))


class RingValue:
    """An immutable element of a :class:`RingDescriptor`."""

    __slots__ = ("ring", "payload")

    def __init__(self, ring: RingDescriptor, x=0):
        v = ring(x)
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "payload", v.payload)

    @classmethod
    def _make(cls, ring, payload) -> "RingValue":
        obj = object.__new__(cls)
        object.__setattr__(obj, "ring", ring)
        object.__setattr__(obj, "payload", payload)
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("RingValue is immutable")

    def _coerce(self, other) -> "RingValue":
        if isinstance(other, RingValue):
            if other.ring != self.ring:
                raise DescriptorMismatch(f"{self.ring} vs {other.ring}")
            return other
        return self.ring(other)

    def is_zero(self) -> bool:
        return self.payload == 0 if self.ring.kind in ("QQ", "GF") else not self.payload

    def __bool__(self):
        return not self.is_zero()

    def __add__(self, other):
        o = self._coerce(other)
        r = self.ring
        if r.kind == "QQ":
            return RingValue._make(r, self.payload + o.payload)
        if r.kind == "GF":
            return RingValue._make(r, (self.payload + o.payload) % r.p)
        return RingValue._make(r, tuple(_padd(list(self.payload), list(o.payload), r.p)))

    __radd__ = __add__

    def __neg__(self):
        r = self.ring
        if r.kind == "QQ":
            return RingValue._make(r, -self.payload)
        if r.kind == "GF":
            return RingValue._make(r, -self.payload % r.p)
        return RingValue._make(r, tuple(_norm([-c for c in self.payload], r.p)))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        r = self.ring
        if r.kind == "QQ":
            return RingValue._make(r, self.payload * o.payload)
        if r.kind == "GF":
            return RingValue._make(r, self.payload * o.payload % r.p)
        prod = _pmul(list(self.payload), list(o.payload), r.p)
        return RingValue._make(r, r._canon_poly(prod))

    __rmul__ = __mul__

    def inverse(self) -> Optional["RingValue"]:
        r = self.ring
        if self.is_zero():
            return None
        if r.kind == "QQ":
            return RingValue._make(r, 1 / self.payload)
        if r.kind == "GF":
            return RingValue._make(r, pow(self.payload, -1, r.p))
        mod = list(cyclotomic_poly(r.M)) if r.kind == "CYC" else list(r.modulus)
        g, s, _ = _pxgcd(list(self.payload), mod, r.p)
        if len(g) != 1:
            return None
        return RingValue._make(r, r._canon_poly(s))

    def __truediv__(self, other):
        inv = self._coerce(other).inverse()
        if inv is None:
            raise ZeroDivisionError(f"{other} is not invertible in {self.ring}")
        return self * inv

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, e: int):
        if e < 0:
            inv = self.inverse()
            if inv is None:
                raise ZeroDivisionError("negative power of a non-unit")
            return inv ** (-e)
        result, base = self.ring.one(), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, RingValue):
            return self.ring == other.ring and self.payload == other.payload
        if isinstance(other, (int, Fraction)):
            try:
                return self == self.ring(other)
            except NonPIntegral:
                return False
        return NotImplemented

    def __hash__(self):
        return hash((self.ring, self.payload))

    def lift(self) -> Fraction:
        """Rational representative (QQ value, or the residue in [0, p))."""
        if self.ring.kind == "QQ":
            return self.payload
        if self.ring.kind == "GF":
            return Fraction(self.payload)
        if len(self.payload) <= 1:
            return Fraction(self.payload[0] if self.payload else 0)
        raise RingError(f"{self} is not a scalar")

    def __repr__(self):
        return f"RingValue({self.ring}, {self.ring.format(self)})"

    def __str__(self):
        return self.ring.format(self)


def ring_arith(a: RingValue, b: RingValue, op: str) -> RingValue:
    if a.ring != b.ring:
        raise DescriptorMismatch(f"{a.ring} vs {b.ring}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def ring_inverse(a: RingValue) -> Optional[RingValue]:
    return a.inverse()


def reduce_to_prime_field(a: RingValue, p: int, zeta_image: Optional[RingValue] = None) -> RingValue:
    """Reduce a rational or cyclotomic value modulo p.

    For ``CYC(M)`` input, ``zeta_image`` must be a root of Phi_M in the target
    field (an ``GF(p)`` or ``GF(p;m)`` value); the class of x is sent to it.
    """
    if a.ring.kind == "QQ":
        target = zeta_image.ring if zeta_image is not None else GF(p)
        return _reduce_fraction(a.payload, target)
    if a.ring.kind != "CYC":
        raise RingError(f"cannot reduce values of {a.ring} modulo {p}")
    if zeta_image is None:
        raise RingError("cyclotomic reduction needs the image of zeta")
    target = zeta_image.ring
    if target.characteristic != p:
        raise DescriptorMismatch(f"zeta image lives in {target}, not over F_{p}")
    phi = cyclotomic_poly(a.ring.M)
    if _horner([target(c) for c in phi], zeta_image, target) != 0:
        raise RingError(f"{zeta_image} is not a root of Phi_{a.ring.M} mod {p}")
    coeffs = [_reduce_fraction(c, target) for c in a.payload]
    return _horner(coeffs, zeta_image, target)


def _reduce_fraction(x: Fraction, target: RingDescriptor) -> RingValue:
    if x.denominator % target.p == 0:
        raise NonPIntegral(f"{x} has denominator divisible by {target.p}")
    return target(x)


def _horner(coeffs, x, ring):
    acc = ring.zero()
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def solve_linear(A: list[list[RingValue]], b: list[RingValue]) -> Optional[list[RingValue]]:
    """Solve A x = b over a field by Gauss-Jordan elimination.

    Returns None when A is singular. ``A`` and ``b`` are not modified.
    """
    n = len(A)
    rows = [list(A[i]) + [b[i]] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if not rows[r][col].is_zero()), None)
        if piv is None:
            return None
        rows[col], rows[piv] = rows[piv], rows[col]
        inv = rows[col][col].inverse()
        prow = rows[col] = [x * inv for x in rows[col]]
        support = [j for j in range(col, n + 1) if not prow[j].is_zero()]
        for r in range(n):
            if r != col and not rows[r][col].is_zero():
                f = rows[r][col]
                row = rows[r]
                for j in support:
                    row[j] = row[j] - f * prow[j]
    return [rows[i][n] for i in range(n)]
