"""Satake-side bookkeeping: triangular transform tables, eigensystems and
characters of the dual group evaluated on its torus.

The transform sends c_lam to sum_{mu <= lam} b_lam(mu) l^{<rho, mu>} chi_mu and
its inverse sends chi_lam to l^{-<rho, lam>} sum_{mu <= lam} d_lam(mu) c_mu.
The tables b and d are input data here.  Half-integral powers of l are kept as
powers of a formal v with v^2 = l and only substituted at evaluation time.

Weights of V_lam come from the Weyl character formula: the alternant of
lam + rho-hat is divided by the alternant of rho-hat as Laurent polynomials.
Exponents are doubled so that rho-hat is integral.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

from .exactring import GFX, RingDescriptor, RingValue
from .rootdatum import (
    Cocharacter,
    build_root_datum,
    dominance_compare,
    eta_exponent,
    is_dominant,
    iter_dominant,
    lower_set,
    pair,
    weyl_group,
)

__all__ = [
    "SatakeError",
    "LaurentV",
    "HeckeElement",
    "RepRingElement",
    "SatakeCoefficients",
    "Eigensystem",
    "DualTorusPoint",
    "rho_pairing",
    "satake_image",
    "satake_inverse_chi",
    "invert_coefficients",
    "twist_eigensystem",
    "weights_of_irrep",
    "central_exponent",
    "char_eval",
    "eta_dual",
    "weyl_act",
    "apply_eigensystem",
    "left_chain",
    "right_chain",
    "main_theorem_verify",
    "random_coefficients",
    "random_eigensystem",
    "sqrt_in_field",
    "F49",
    "random_instance_lambda",
    "Transcript",
    "parse_table",
    "format_table",
]

MAX_G = 2
MAX_NORM = 6


class SatakeError(ValueError):
    pass


def rho_pairing(mu: Cocharacter) -> int:
    """<2 rho, mu>, the v-exponent of l^{<rho, mu>}."""
    return pair(build_root_datum(mu.g).rho2, mu)


# --- Laurent polynomials in v --------------------------------------------------


@dataclass(frozen=True)
class LaurentV:
    """sum_e c_e v^e with v^2 = l left formal."""

    ring: RingDescriptor
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for e, c in self.terms.items():
            c = self.ring(c)
            if not c.is_zero():
                clean[int(e)] = c
        object.__setattr__(self, "terms", clean)

    @classmethod
    def monomial(cls, ring: RingDescriptor, c, e: int) -> "LaurentV":
        return cls(ring, {e: c})

    def __add__(self, other: "LaurentV") -> "LaurentV":
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out[e] + c if e in out else c
        return LaurentV(self.ring, out)

    def __mul__(self, other) -> "LaurentV":
        if not isinstance(other, LaurentV):
            c = self.ring(other)
            return LaurentV(self.ring, {e: x * c for e, x in self.terms.items()})
        out: dict[int, RingValue] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                out[e] = out[e] + c1 * c2 if e in out else c1 * c2
        return LaurentV(self.ring, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, LaurentV) and self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, frozenset(self.terms.items())))

    def evaluate(self, v_image: RingValue) -> RingValue:
        total = v_image.ring.zero()
        for e, c in self.terms.items():
            total = total + v_image.ring(c) * v_image ** e
        return total

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({self.ring.format(c)})v^{e}" for e, c in sorted(self.terms.items()))


def _check_dominant_keys(terms):
    for lam in terms:
        if not is_dominant(lam):
            raise SatakeError(f"{lam.coeffs} is not dominant")


@dataclass(frozen=True)
class HeckeElement:
    """sum_lam coeff_lam c_lam."""

    g: int
    ell: int
    terms: dict

    def __post_init__(self):
        _check_dominant_keys(self.terms)


@dataclass(frozen=True)
class RepRingElement:
    """sum_lam coeff_lam chi_lam."""

    g: int
    terms: dict

    def __post_init__(self):
        _check_dominant_keys(self.terms)


# --- transform tables ------------------------------------------------------


@dataclass(frozen=True)
class SatakeCoefficients:
    """table[lam][mu] for mu <= lam; unitriangular and closed under lower sets."""

    g: int
    ell: int
    ring: RingDescriptor
    table: dict

    def __post_init__(self):
        clean = {}
        for lam, row in self.table.items():
            if lam.g != self.g or not is_dominant(lam):
                raise SatakeError(f"{lam.coeffs} is not a dominant cocharacter for g={self.g}")
            below = set(lower_set(lam))
            crow = {}
            for mu, c in row.items():
                if mu not in below:
                    raise SatakeError(f"entry ({lam}, {mu}) is outside the lower set of {lam}")
                c = self.ring(c)
                if not c.is_zero():
                    crow[mu] = c
            if crow.get(lam) != self.ring.one():
                raise SatakeError(f"diagonal entry at {lam} is not 1")
            missing = below - set(self.table)
            if missing:
                raise SatakeError(f"table is not closed below {lam}: missing {sorted(m.coeffs for m in missing)}")
            clean[lam] = crow
        object.__setattr__(self, "table", clean)

    def get(self, lam: Cocharacter, mu: Cocharacter) -> RingValue:
        try:
            row = self.table[lam]
        except KeyError:
            raise SatakeError(f"no table row for {lam}") from None
        return row.get(mu, self.ring.zero())

    @classmethod
    def identity(cls, g: int, ell: int, ring: RingDescriptor, lam: Cocharacter) -> "SatakeCoefficients":
        return cls(g, ell, ring, {mu: {mu: ring.one()} for mu in lower_set(lam)})


def satake_image(lam: Cocharacter, b: SatakeCoefficients) -> RepRingElement:
    """sum_{mu <= lam} b_lam(mu) v^{<2rho, mu>} chi_mu."""
    if lam not in b.table:
        raise SatakeError(f"no table row for {lam}")
    terms = {mu: LaurentV.monomial(b.ring, c, rho_pairing(mu)) for mu, c in b.table[lam].items()}
    return RepRingElement(lam.g, terms)


def satake_inverse_chi(lam: Cocharacter, d: SatakeCoefficients) -> HeckeElement:
    """v^{-<2rho, lam>} sum_{mu <= lam} d_lam(mu) c_mu."""
    if lam not in d.table:
        raise SatakeError(f"no table row for {lam}")
    e = -rho_pairing(lam)
    terms = {mu: LaurentV.monomial(d.ring, c, e) for mu, c in d.table[lam].items()}
    return HeckeElement(lam.g, d.ell, terms)


def invert_coefficients(b: SatakeCoefficients) -> SatakeCoefficients:
    """The unitriangular d with sum_{nu <= mu <= lam} d_lam(mu) b_mu(nu) = [nu = lam].

    The v-powers in the defining identity factor out of each fixed (lam, nu),
    so d is the matrix inverse of b restricted to each lower set.
    """
    out = {}
    for lam in b.table:
        order = lower_set(lam)  # lam first, then by height below lam
        row = {lam: b.ring.one()}
        for nu in order[1:]:
            acc = b.ring.zero()
            for mu, dm in row.items():
                acc = acc + dm * b.get(mu, nu)
            row[nu] = -acc
        out[lam] = row
    return SatakeCoefficients(b.g, b.ell, b.ring, out)


# --- eigensystems ----------------------------------------------------------


@dataclass(frozen=True)
class Eigensystem:
    """lam -> Psi(c_lam) on a dominance lower set."""

    g: int
    ell: int
    p: int
    values: dict

    def __post_init__(self):
        for lam in self.values:
            if not is_dominant(lam):
                raise SatakeError(f"{lam.coeffs} is not dominant")
            if any(mu not in self.values for mu in lower_set(lam)):
                raise SatakeError(f"eigensystem is not defined on the lower set of {lam}")

    def __getitem__(self, lam: Cocharacter) -> RingValue:
        try:
            return self.values[lam]
        except KeyError:
            raise SatakeError(f"eigensystem has no value at {lam}") from None


def twist_eigensystem(psi: Eigensystem, m: int) -> Eigensystem:
    """Psi'(c_lam) = l^{m a_{g+1}(lam)} Psi(c_lam)."""
    if m < 0:
        raise SatakeError("twist exponent must be nonnegative")
    if psi.ell == psi.p:
        raise SatakeError("need l != p")
    vals = {lam: c * c.ring(psi.ell) ** (m * eta_exponent(lam)) for lam, c in psi.values.items()}
    return Eigensystem(psi.g, psi.ell, psi.p, vals)


def apply_eigensystem(h: HeckeElement, psi: Eigensystem, v_image: RingValue) -> RingValue:
    total = v_image.ring.zero()
    for mu, coeff in h.terms.items():
        total = total + coeff.evaluate(v_image) * psi[mu]
    return total


# --- dual torus and characters ---------------------------------------------


@dataclass(frozen=True)
class DualTorusPoint:
    """Coordinates (v_1, .., v_{g+1}); the cocharacter f_j evaluates to v_j."""

    g: int
    coords: tuple

    def __post_init__(self):
        if len(self.coords) != self.g + 1:
            raise SatakeError(f"need {self.g + 1} coordinates, got {len(self.coords)}")
        if any(c.inverse() is None for c in self.coords):
            raise SatakeError("torus coordinates must be invertible")

    def monomial(self, mu) -> RingValue:
        ring = self.coords[0].ring
        out = ring.one()
        for c, e in zip(self.coords, mu):
            out = out * c ** e
        return out

    def __mul__(self, other: "DualTorusPoint") -> "DualTorusPoint":
        return DualTorusPoint(self.g, tuple(a * b for a, b in zip(self.coords, other.coords)))


def eta_dual(g: int, a: RingValue) -> DualTorusPoint:
    """eta-vee(a) = (1, .., 1, a)."""
    one = a.ring.one()
    return DualTorusPoint(g, (one,) * g + (a,))


def weyl_act(w, t: DualTorusPoint) -> DualTorusPoint:
    """(w.t)^mu = t^{w^{-1} mu}; w^{-1} on cocharacters is the transpose of w on characters."""
    n = t.g + 1
    inv = [[w.on_char[j][i] for j in range(n)] for i in range(n)]
    coords = []
    for j in range(n):
        col = tuple(inv[i][j] for i in range(n))
        coords.append(t.monomial(col))
    return DualTorusPoint(t.g, tuple(coords))


def _laurent_divide(num: dict, den: dict) -> dict:
    """Exact quotient of integer Laurent polynomials in several variables.

    Uses lexicographic order on exponent vectors, which is a group order, so
    the usual leading-term division terminates on exact inputs.
    """
    num = dict(num)
    lead = max(den)
    lc = den[lead]
    q = {}
    steps = 0
    while num:
        steps += 1
        if steps > 100000:
            raise SatakeError("Laurent division did not terminate")
        top = max(num)
        c = num[top]
        if c % lc:
            raise SatakeError("Laurent division is not exact")
        qc = c // lc
        qe = tuple(a - b for a, b in zip(top, lead))
        q[qe] = qc
        for e, dc in den.items():
            ee = tuple(a + b for a, b in zip(qe, e))
            v = num.get(ee, 0) - qc * dc
            if v:
                num[ee] = v
            else:
                num.pop(ee, None)
        if top in num:
            raise SatakeError("Laurent division is not exact")
    return q


def _alternant(exp2) -> dict:
    out: dict = {}
    for w in weyl_group(len(exp2) - 1):
        e = w(tuple(exp2))
        out[e] = out.get(e, 0) + w.sign
    return {e: c for e, c in out.items() if c}


@lru_cache(maxsize=None)
def weights_of_irrep(lam: Cocharacter) -> dict:
    """Weight multiplicities of V_lam, by Weyl character formula in doubled exponents."""
    if lam.g > MAX_G:
        raise SatakeError(f"weights_of_irrep limited to g <= {MAX_G}")
    if not is_dominant(lam):
        raise SatakeError(f"{lam.coeffs} is not dominant")
    if max(abs(a) for a in lam.coeffs) > MAX_NORM:
        raise SatakeError(f"|lam| exceeds the guard {MAX_NORM}")
    rho2_hat = build_root_datum(lam.g).rho2_hat.coeffs
    top = tuple(2 * a + r for a, r in zip(lam.coeffs, rho2_hat))
    quotient = _laurent_divide(_alternant(top), _alternant(rho2_hat))
    out = {}
    for e, c in quotient.items():
        if any(x % 2 for x in e) or c <= 0:
            raise SatakeError(f"unexpected term {c} x^{e} in the character of {lam}")
        out[Cocharacter(tuple(x // 2 for x in e))] = c
    return out


def central_exponent(lam: Cocharacter) -> int:
    """The c with chi_lam(eta-vee(a) t) = a^c chi_lam(t), read off the weights."""
    comps = {mu[mu.g] for mu in weights_of_irrep(lam)}
    if len(comps) != 1:
        raise SatakeError(f"weights of {lam} do not share the last component: {sorted(comps)}")
    return comps.pop()


def char_eval(lam: Cocharacter, t: DualTorusPoint) -> RingValue:
    """sum_mu mult(mu) t^mu."""
    ring = t.coords[0].ring
    total = ring.zero()
    for mu, mult in weights_of_irrep(lam).items():
        total = total + t.monomial(mu.coeffs) * mult
    return total


# --- replay of the twisting argument ----------------------------------------


def left_chain(lam: Cocharacter, d: SatakeCoefficients, psi_twisted: Eigensystem, v_image: RingValue) -> RingValue:
    """l^{-<rho, lam>} sum_mu d_lam(mu) Psi_twisted(c_mu)."""
    return apply_eigensystem(satake_inverse_chi(lam, d), psi_twisted, v_image)


def right_chain(lam: Cocharacter, d: SatakeCoefficients, psi: Eigensystem, m: int, v_image: RingValue) -> RingValue:
    """l^{-<rho, lam>} sum_mu d_lam(mu) chi_lam(eta-vee(l^m)) Psi(c_mu),
    with chi_lam(eta-vee(l^m)) the central scalar l^{m c}."""
    scalar = v_image.ring(psi.ell) ** (m * central_exponent(lam))
    return apply_eigensystem(satake_inverse_chi(lam, d), psi, v_image) * scalar


@dataclass
class Transcript:
    lines: list = field(default_factory=list)
    symbolically_distinct: bool = False

    def add(self, text: str):
        self.lines.append(text)

    def __str__(self):
        return "\n".join(self.lines)


def main_theorem_verify(
    lam: Cocharacter,
    d: SatakeCoefficients,
    psi: Eigensystem,
    m: int,
    ell: int,
    p: int,
    v_image: RingValue,
) -> tuple[bool, Transcript]:
    """Evaluate both chains of the twisting argument and compare them."""
    if p % 2 == 0:
        raise SatakeError("p must be odd")
    if ell == p:
        raise SatakeError("need l != p")
    if v_image.ring.characteristic != p:
        raise SatakeError(f"v_image lives in {v_image.ring}, not in characteristic {p}")
    if v_image * v_image != v_image.ring(ell):
        raise SatakeError(f"v_image^2 != {ell} in {v_image.ring}")
    if psi.ell != ell or d.ell != ell or psi.p != p:
        raise SatakeError("inconsistent l or p between the inputs")
    if lam not in d.table:
        raise SatakeError(f"no table row for {lam}")
    ring = v_image.ring
    tr = Transcript()
    below = lower_set(lam)
    tr.add(f"lam={lam} lower set {[str(mu) for mu in below]} m={m} l={ell} p={p} ring={ring}")
    for mu in below:
        if dominance_compare(lam, mu) is None:
            raise SatakeError(f"{mu} is not below {lam}")
    twisted = twist_eigensystem(psi, m)
    for mu in below:
        tr.add(
            f"  mu={mu} d={ring.format(ring(d.get(lam, mu)))} Psi={ring.format(psi[mu])} "
            f"eta^m(mu(l))=l^{m * eta_exponent(mu)} Psi'={ring.format(twisted[mu])}"
        )
    left = left_chain(lam, d, twisted, v_image)
    right = right_chain(lam, d, psi, m, v_image)
    c = central_exponent(lam)
    dim = sum(weights_of_irrep(lam).values())
    tr.add(f"  central exponent of chi_lam: {c} (dim V_lam = {dim})")
    if dim > 1 and m * c != 0:
        literal = ring(dim) * ring(ell) ** (m * c)
        tr.add(f"  note: chi_lam evaluated at the point eta-vee(l^m) alone is {ring.format(literal)}, not the scalar")
    tr.symbolically_distinct = any(m * eta_exponent(mu) != 0 for mu in below)
    tr.add(f"  left  = {ring.format(left)}")
    tr.add(f"  right = {ring.format(right)}")
    tr.add(f"  symbolically distinct: {tr.symbolically_distinct}")
    ok = left == right
    tr.add("  PASS" if ok else "  FAIL")
    return ok, tr


# --- random data and text tables --------------------------------------------


def sqrt_in_field(ring: RingDescriptor, a) -> Optional[RingValue]:
    """Some square root of a by exhaustive search, or None."""
    target = ring(a)
    for x in ring.elements():
        if x * x == target:
            return x
    return None


def F49() -> RingDescriptor:
    """F_7[x] / (x^2 + 1)."""
    return GFX(7, (1, 0, 1))


def _random_element(ring: RingDescriptor, rng: random.Random, nonzero=False) -> RingValue:
    p = ring.p
    while True:
        if ring.kind == "GF":
            x = ring(rng.randrange(p))
        else:
            deg = len(ring.modulus) - 1
            x = ring([rng.randrange(p) for _ in range(deg)])
        if not (nonzero and x.is_zero()):
            return x


def random_coefficients(lam: Cocharacter, ell: int, ring: RingDescriptor, rng: random.Random) -> SatakeCoefficients:
    table = {}
    for mu in lower_set(lam):
        row = {nu: _random_element(ring, rng) for nu in lower_set(mu)[1:]}
        row[mu] = ring.one()
        table[mu] = row
    return SatakeCoefficients(lam.g, ell, ring, table)


def random_eigensystem(lam: Cocharacter, ell: int, p: int, ring: RingDescriptor, rng: random.Random) -> Eigensystem:
    return Eigensystem(lam.g, ell, p, {mu: _random_element(ring, rng) for mu in lower_set(lam)})


def random_instance_lambda(g: int, rng: random.Random, bound: int = 2, need_eta: bool = False) -> Cocharacter:
    pool = [lam for lam in iter_dominant(g, bound) if not need_eta or eta_exponent(lam) != 0]
    return rng.choice(pool)


def _parse_cochar(text: str) -> Cocharacter:
    return Cocharacter(tuple(int(x) for x in text.replace("(", "").replace(")", "").split(",")))


def parse_table(text: str, g: int, ell: int, ring: RingDescriptor) -> SatakeCoefficients:
    """Lines ``lam ; mu ; value``; missing diagonal entries default to 1."""
    table: dict = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [s.strip() for s in line.split(";")]
        if len(parts) != 3:
            raise SatakeError(f"bad table line {raw!r}")
        lam, mu = _parse_cochar(parts[0]), _parse_cochar(parts[1])
        table.setdefault(lam, {})[mu] = ring.parse_value(parts[2])
    for lam in list(table):
        table[lam].setdefault(lam, ring.one())
    return SatakeCoefficients(g, ell, ring, table)


def format_table(t: SatakeCoefficients) -> str:
    lines = []
    for lam in sorted(t.table, key=lambda x: x.coeffs):
        for mu in lower_set(lam):
            if mu in t.table[lam]:
                lines.append(f"{','.join(map(str, lam.coeffs))} ; {','.join(map(str, mu.coeffs))} ; {t.ring.format(t.table[lam][mu])}")
    return "\n".join(lines) + "\n"
