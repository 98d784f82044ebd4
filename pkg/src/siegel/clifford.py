"""Clifford algebra on 2g+1 anticommuting generators with c_i^2 = 1.

An element is a sparse map from subset bitmasks to coefficients; bit i-1 of a
mask stands for c_i and the mask denotes the ordered monomial c_{i1} c_{i2} ..
with i1 < i2 < ...  The algebra has dimension 2^(2g+1).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .exactring import QQ, DescriptorMismatch, RingDescriptor, RingValue, solve_linear

__all__ = [
    "CliffordElement",
    "NotInvertible",
    "cliff_mul",
    "parity_automorphism",
    "cliff_inverse",
    "twisted_conjugate",
    "is_gspin",
    "generator",
    "scalar",
    "parse_expr",
]

MAX_DENSE_G = 2


class NotInvertible(ValueError):
    pass


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _sign(s: int, t: int) -> int:
    """(-1)^#{(a, b) in S x T : a > b}."""
    inv = 0
    s >>= 1
    while s:
        inv += _popcount(s & t)
        s >>= 1
    return -1 if inv & 1 else 1


@dataclass(frozen=True)
class CliffordElement:
    g: int
    ring: RingDescriptor
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        size = 1 << (2 * self.g + 1)
        clean = {}
        for mask, c in self.terms.items():
            if not 0 <= mask < size:
                raise ValueError(f"mask {mask:b} out of range for g={self.g}")
            c = self.ring(c)
            if not c.is_zero():
                clean[mask] = c
        object.__setattr__(self, "terms", clean)

    @property
    def n_gens(self) -> int:
        return 2 * self.g + 1

    @property
    def dim(self) -> int:
        return 1 << self.n_gens

    def _check(self, other: "CliffordElement"):
        if other.g != self.g or other.ring != self.ring:
            raise DescriptorMismatch(f"Clifford mismatch: (g={self.g}, {self.ring}) vs (g={other.g}, {other.ring})")

    def __add__(self, other):
        if not isinstance(other, CliffordElement):
            other = scalar(self.g, self.ring, other)
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out[m] + c if m in out else c
        return CliffordElement(self.g, self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return CliffordElement(self.g, self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, CliffordElement):
            return cliff_mul(self, other)
        c = self.ring(other)
        return CliffordElement(self.g, self.ring, {m: x * c for m, x in self.terms.items()})

    def __rmul__(self, other):
        return self * other

    def __eq__(self, other):
        if not isinstance(other, CliffordElement):
            return NotImplemented
        return self.g == other.g and self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.g, self.ring, frozenset(self.terms.items())))

    def is_even(self) -> bool:
        return all(_popcount(m) % 2 == 0 for m in self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def scalar_part(self) -> RingValue:
        return self.terms.get(0, self.ring.zero())

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=lambda m: (_popcount(m), m)):
            mono = "*".join(f"c{i + 1}" for i in range(self.n_gens) if m >> i & 1) or "1"
            parts.append(f"({self.ring.format(self.terms[m])})*{mono}")
        return " + ".join(parts)


def scalar(g: int, ring: RingDescriptor, c) -> CliffordElement:
    return CliffordElement(g, ring, {0: ring(c)})


def generator(g: int, i: int, ring: RingDescriptor = QQ) -> CliffordElement:
    """c_i, 1-based."""
    if not 1 <= i <= 2 * g + 1:
        raise ValueError(f"c{i} is not a generator for g={g}")
    return CliffordElement(g, ring, {1 << (i - 1): ring.one()})


def cliff_mul(x: CliffordElement, y: CliffordElement) -> CliffordElement:
    """e_S e_T = (-1)^inv(S,T) e_{S xor T}, extended bilinearly."""
    x._check(y)
    out: dict[int, RingValue] = {}
    for s, a in x.terms.items():
        for t, b in y.terms.items():
            c = a * b if _sign(s, t) > 0 else -(a * b)
            m = s ^ t
            out[m] = out[m] + c if m in out else c
    return CliffordElement(x.g, x.ring, out)


def parity_automorphism(x: CliffordElement) -> CliffordElement:
    return CliffordElement(x.g, x.ring, {m: (-c if _popcount(m) & 1 else c) for m, c in x.terms.items()})


def cliff_inverse(x: CliffordElement) -> Optional[CliffordElement]:
    """Two-sided inverse by solving L_x y = 1 densely; None if singular."""
    if x.g > MAX_DENSE_G:
        raise ValueError(f"dense inverse limited to g <= {MAX_DENSE_G}")
    if x.is_zero():
        return None
    # An even element has an even inverse (gamma fixes both), so the solve
    # can stay inside the even subalgebra.
    masks = [m for m in range(x.dim) if _popcount(m) % 2 == 0] if x.is_even() else list(range(x.dim))
    pos = {m: i for i, m in enumerate(masks)}
    n = len(masks)
    zero = x.ring.zero()
    # Column t of L_x is x * e_t.
    A = [[zero] * n for _ in range(n)]
    for t in masks:
        for s, a in x.terms.items():
            A[pos[s ^ t]][pos[t]] = a if _sign(s, t) > 0 else -a
    rhs = [x.ring.one()] + [zero] * (n - 1)
    sol = solve_linear(A, rhs)
    if sol is None:
        return None
    return CliffordElement(x.g, x.ring, {masks[i]: c for i, c in enumerate(sol)})


def twisted_conjugate(x: CliffordElement, m: CliffordElement) -> CliffordElement:
    """gamma(x) m x^{-1}."""
    inv = cliff_inverse(x)
    if inv is None:
        raise NotInvertible("x is not invertible")
    return cliff_mul(cliff_mul(parity_automorphism(x), m), inv)


def _in_vector_span(y: CliffordElement) -> bool:
    return all(_popcount(m) == 1 for m in y.terms)


def is_gspin(x: CliffordElement) -> bool:
    """Even, invertible, and gamma(x) c_i x^{-1} in span(c_1..c_{2g+1}) for all i.

    Generators suffice because m -> gamma(x) m x^{-1} is linear.
    """
    if x.g > MAX_DENSE_G:
        raise ValueError(f"is_gspin limited to g <= {MAX_DENSE_G}")
    if x.is_zero() or not x.is_even():
        return False
    inv = cliff_inverse(x)
    if inv is None:
        return False
    gx = parity_automorphism(x)
    return all(
        _in_vector_span(cliff_mul(cliff_mul(gx, generator(x.g, i, x.ring)), inv))
        for i in range(1, x.n_gens + 1)
    )


_TOKEN = re.compile(r"\s*(?:(c\d+)|(\d+(?:/\d+)?)|(.))")


def parse_expr(text: str, g: int, ring: RingDescriptor = QQ) -> CliffordElement:
    """Parse an expression over c1..c(2g+1) with + - * , scalars and parentheses."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        gen, num, op = m.groups()
        if gen:
            tokens.append(("gen", int(gen[1:])))
        elif num:
            tokens.append(("num", Fraction(num)))
        elif op and not op.isspace():
            if op not in "+-*()":
                raise ValueError(f"unexpected character {op!r}")
            tokens.append(("op", op))
        pos = m.end()
    tokens.append(("end", None))
    i = 0

    def peek():
        return tokens[i]

    def take():
        nonlocal i
        t = tokens[i]
        i += 1
        return t

    def expr():
        acc = term()
        while peek() in (("op", "+"), ("op", "-")):
            op = take()[1]
            rhs = term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term():
        acc = factor()
        while peek() == ("op", "*"):
            take()
            acc = acc * factor()
        return acc

    def factor():
        kind, val = take()
        if kind == "op" and val == "-":
            return -factor()
        if kind == "op" and val == "(":
            inner = expr()
            if take() != ("op", ")"):
                raise ValueError("unbalanced parentheses")
            return inner
        if kind == "gen":
            return generator(g, val, ring)
        if kind == "num":
            return scalar(g, ring, val)
        raise ValueError(f"unexpected token {val!r}")

    result = expr()
    if peek()[0] != "end":
        raise ValueError(f"trailing input near token {peek()[1]!r}")
    return result
