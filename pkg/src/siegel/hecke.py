"""Right cosets of K lam(l) K, slash operators and Hecke operators.

Every right coset of a double coset K lam(l) K (K = GSp_2g(Z_l)) has a block
upper triangular representative

    M = [[l^r D^{-T}, B], [0, D]],     B D^{-1} symmetric,  eta(M) = l^r,

with D determined up to left multiplication by GL_g(Z_l) and B up to adding
S D for integral symmetric S.  :func:`coset_reps` enumerates D in Hermite
normal form and B modulo S D, keeps the matrices with the right l-adic
elementary divisors and confirms with a brute-force coset-equality oracle that
no two are equivalent.

On a truncated series the slash of such an M is computed by pulling each
output index n' back to n = D n' D^T / eta, so the operator is exact on every
output coefficient whose preimages are known.  Phases exp(2 pi i Tr(n B
D^{-1}) / N) are tracked as exponents of a primitive root of unity of order
N l^{rg}.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .exactring import CYC, QQ, RingValue, is_prime
from .qexp import FourierIndex, QExpansion, indices_up_to, lift
from .rootdatum import Cocharacter, dominant_representative, eta_exponent, is_dominant, similitude_factor
from .theta import theta_bn_direct

__all__ = [
    "CosetRep",
    "HeckeOperator",
    "HeckeError",
    "InsufficientPrecision",
    "CoefficientNotRational",
    "CommutationReport",
    "coset_reps",
    "hecke_operator",
    "slash_block_upper",
    "hecke_apply",
    "eigenvalue_of",
    "commutation_check",
    "same_right_coset",
    "elementary_divisor_valuations",
    "lagrangian_count",
    "lattice_coset_count",
    "row_hnf",
    "required_precision",
]

MAX_G = 2
MAX_R = 2
PAIRWISE_LIMIT = 64


class HeckeError(ValueError):
    pass


class InsufficientPrecision(HeckeError):
    pass


class CoefficientNotRational(HeckeError):
    pass


# --- small exact matrix helpers ---------------------------------------------


def _mat(rows) -> list[list[Fraction]]:
    return [[Fraction(x) for x in row] for row in rows]


def _mul(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]))] for i in range(len(A))]


def _transpose(A):
    return [list(col) for col in zip(*A)]


def _inverse(A) -> list[list[Fraction]]:
    n = len(A)
    rows = [list(map(Fraction, A[i])) + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for c in range(n):
        piv = next((r for r in range(c, n) if rows[r][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        rows[c], rows[piv] = rows[piv], rows[c]
        inv = 1 / rows[c][c]
        rows[c] = [x * inv for x in rows[c]]
        for r in range(n):
            if r != c and rows[r][c] != 0:
                f = rows[r][c]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[c])]
    return [row[n:] for row in rows]


def _det_int(A) -> int:
    n = len(A)
    if n == 1:
        return A[0][0]
    if n == 2:
        return A[0][0] * A[1][1] - A[0][1] * A[1][0]
    return sum(
        (-1) ** j * A[0][j] * _det_int([row[:j] + row[j + 1:] for row in A[1:]]) for j in range(n)
    )


def _val(x: Fraction, ell: int) -> Optional[int]:
    """l-adic valuation; None for zero."""
    if x == 0:
        return None
    v, num, den = 0, x.numerator, x.denominator
    while num % ell == 0:
        num //= ell
        v += 1
    while den % ell == 0:
        den //= ell
        v -= 1
    return v


def _is_integral_at(x: Fraction, ell: int) -> bool:
    return x.denominator % ell != 0


def elementary_divisor_valuations(M, ell: int) -> tuple[int, ...]:
    """Sorted l-adic valuations of the elementary divisors of a nonsingular M."""
    A = _mat(M)
    n = len(A)
    out = []
    for k in range(n):
        best = None
        for i in range(k, n):
            for j in range(k, n):
                v = _val(A[i][j], ell)
                if v is not None and (best is None or v < best[0]):
                    best = (v, i, j)
        if best is None:
            raise HeckeError("matrix is singular")
        v, i, j = best
        A[k], A[i] = A[i], A[k]
        for row in A:
            row[k], row[j] = row[j], row[k]
        piv = A[k][k]
        for i in range(k + 1, n):
            f = A[i][k] / piv
            if f:
                A[i] = [x - f * y for x, y in zip(A[i], A[k])]
        for j in range(k + 1, n):
            f = A[k][j] / piv
            if f:
                for row in A:
                    row[j] -= f * row[k]
        out.append(v)
    return tuple(sorted(out))


def same_right_coset(M1, M2, ell: int) -> bool:
    """K M1 = K M2 iff M1 M2^{-1} lies in GSp_2g(Z_l)."""
    X = _mul(_mat(M1), _inverse(M2))
    if not all(_is_integral_at(x, ell) for row in X for x in row):
        return False
    return _val(similitude_factor(X), ell) == 0


# --- coset representatives ---------------------------------------------------


@dataclass(frozen=True)
class CosetRep:
    """M = [[l^r D^{-T}, B], [0, D]]."""

    g: int
    ell: int
    r: int
    D: tuple[tuple[int, ...], ...]
    B: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        Dinv = _inverse(self.D)
        eta = self.ell ** self.r
        if not all((eta * x).denominator == 1 for row in Dinv for x in row):
            raise HeckeError("l^r D^{-1} is not integral")
        S = _mul(_mat(self.B), Dinv)
        if any(S[i][j] != S[j][i] for i in range(self.g) for j in range(self.g)):
            raise HeckeError("B D^{-1} is not symmetric")

    @property
    def eta(self) -> int:
        return self.ell ** self.r

    @property
    def det_D(self) -> int:
        return _det_int([list(r) for r in self.D])

    def matrix(self) -> list[list[Fraction]]:
        g = self.g
        A = _transpose([[self.eta * x for x in row] for row in _inverse(self.D)])
        top = [A[i] + [Fraction(x) for x in self.B[i]] for i in range(g)]
        bottom = [[Fraction(0)] * g + [Fraction(x) for x in self.D[i]] for i in range(g)]
        return top + bottom

    def is_hnf(self) -> bool:
        D = self.D
        return all(
            D[i][j] == 0 if j < i else (D[i][i] > 0 if j == i else 0 <= D[i][j] < D[j][j])
            for i in range(self.g)
            for j in range(self.g)
        )

    def reduced(self) -> "CosetRep":
        """Same right coset, with the rows of D lattice-reduced.

        Left multiplication by diag(U^{-T}, U), U in GL_g(Z), replaces (D, B) by
        (U D, U^{-T} B).  Short rows keep n = D n' D^T / eta small, which keeps
        the input precision needed by a truncated slash near l^r tau.
        """
        if self.g == 1:
            return self
        if self.g != 2:
            raise HeckeError("lattice reduction implemented for g <= 2")
        b1, b2 = list(self.D[0]), list(self.D[1])
        U = [[1, 0], [0, 1]]
        dot = lambda u, v: u[0] * v[0] + u[1] * v[1]  # noqa: E731
        while True:
            if dot(b2, b2) < dot(b1, b1):
                b1, b2 = b2, b1
                U = [U[1], U[0]]
            mu = round(Fraction(dot(b1, b2), dot(b1, b1)))
            if mu == 0:
                break
            b2 = [b2[0] - mu * b1[0], b2[1] - mu * b1[1]]
            U[1] = [U[1][0] - mu * U[0][0], U[1][1] - mu * U[0][1]]
        if b1[0] * b2[1] - b1[1] * b2[0] < 0:
            b2 = [-x for x in b2]
            U[1] = [-x for x in U[1]]
        UinvT = _transpose(_inverse(U))
        B = _mul(UinvT, _mat(self.B))
        return CosetRep(self.g, self.ell, self.r, (tuple(b1), tuple(b2)), tuple(tuple(int(x) for x in row) for row in B))

    def __str__(self):
        return " ; ".join(",".join(str(x) for x in row) for row in self.matrix())


def _hnf_candidates(g: int, ell: int, r: int):
    """Upper-triangular HNF matrices D with l^r D^{-1} integral."""
    diag_choices = [ell ** e for e in range(r + 1)]
    eta = ell ** r
    for diag in itertools.product(diag_choices, repeat=g):
        slots = [(i, j) for i in range(g) for j in range(i + 1, g)]
        for off in itertools.product(*[range(diag[j]) for _, j in slots]):
            D = [[0] * g for _ in range(g)]
            for i in range(g):
                D[i][i] = diag[i]
            for (i, j), x in zip(slots, off):
                D[i][j] = x
            if all((eta * x).denominator == 1 for row in _inverse(D) for x in row):
                yield D


def _b_candidates(D, ell: int, r: int):
    """Integral B = S D with S symmetric, S mod integral symmetric matrices."""
    g = len(D)
    eta = ell ** r
    slots = [(i, j) for i in range(g) for j in range(i, g)]
    for vals in itertools.product(range(eta), repeat=len(slots)):
        Snum = [[0] * g for _ in range(g)]
        for (i, j), x in zip(slots, vals):
            Snum[i][j] = Snum[j][i] = x
        prod = [[sum(Snum[i][k] * D[k][j] for k in range(g)) for j in range(g)] for i in range(g)]
        if all(x % eta == 0 for row in prod for x in row):
            yield [[x // eta for x in row] for row in prod]


def _check_lambda(g: int, ell: int, lam: Cocharacter) -> int:
    if g > MAX_G:
        raise HeckeError(f"coset enumeration limited to g <= {MAX_G}")
    if not is_prime(ell):
        raise HeckeError(f"l = {ell} is not prime")
    if lam.g != g or not is_dominant(lam):
        raise HeckeError(f"{lam.coeffs} is not a dominant cocharacter for g={g}")
    r = eta_exponent(lam)
    if not 0 <= r <= MAX_R:
        raise HeckeError(f"eta exponent {r} outside 0..{MAX_R}")
    if lam[0] > r:
        raise HeckeError(f"lam(l) for {lam.coeffs} is not integral")
    return r


@lru_cache(maxsize=None)
def coset_reps(g: int, ell: int, lam: Cocharacter) -> tuple[CosetRep, ...]:
    """Duplicate-free right coset representatives of K lam(l) K."""
    r = _check_lambda(g, ell, lam)
    target = tuple(sorted([lam[j] for j in range(g)] + [r - lam[j] for j in range(g)]))
    reps = []
    for D in _hnf_candidates(g, ell, r):
        for B in _b_candidates(D, ell, r):
            rep = CosetRep(g, ell, r, tuple(map(tuple, D)), tuple(map(tuple, B)))
            if elementary_divisor_valuations(rep.matrix(), ell) == target:
                reps.append(rep)
    _assert_distinct(reps, ell)
    return tuple(reps)


def _assert_distinct(reps, ell: int):
    """No two representatives share a right coset.

    K M determines the lattice Z^{2g} M (and conversely, given the similitude),
    so the row-lattice HNF is a complete coset invariant.  Small sets are also
    checked pairwise with :func:`same_right_coset`.
    """
    mats = [rep.matrix() for rep in reps]
    seen = {}
    for rep, M in zip(reps, mats):
        key = row_hnf(M)
        if key in seen:
            raise HeckeError(f"representatives {seen[key]} and {rep} span the same lattice")
        seen[key] = rep
    if len(reps) <= PAIRWISE_LIMIT:
        for i, j in itertools.combinations(range(len(reps)), 2):
            if same_right_coset(mats[i], mats[j], ell):
                raise HeckeError(f"representatives {reps[i]} and {reps[j]} share a right coset")


def row_hnf(M) -> tuple[tuple[int, ...], ...]:
    """Hermite normal form of the row lattice of a nonsingular integer matrix:
    upper triangular, positive diagonal, entries above it reduced mod the pivot."""
    A = [[int(x) for x in row] for row in M]
    n = len(A)
    for c in range(n):
        while True:
            nz = [i for i in range(c, n) if A[i][c] != 0]
            if not nz:
                raise HeckeError("matrix is singular")
            piv = min(nz, key=lambda i: abs(A[i][c]))
            A[c], A[piv] = A[piv], A[c]
            done = True
            for i in range(c + 1, n):
                if A[i][c]:
                    q = A[i][c] // A[c][c]
                    A[i] = [x - q * y for x, y in zip(A[i], A[c])]
                    done = done and A[i][c] == 0
            if done:
                break
        if A[c][c] < 0:
            A[c] = [-x for x in A[c]]
        for i in range(c):
            q = A[i][c] // A[c][c]
            A[i] = [x - q * y for x, y in zip(A[i], A[c])]
    return tuple(tuple(row) for row in A)


def lattice_coset_count(g: int, ell: int, lam: Cocharacter) -> int:
    """Independent count of K lam(l) K / K by sublattices of Z^{2g}.

    Enumerates HNF sublattices of index l^{rg} on which the symplectic form is
    l^r times a unimodular form and whose elementary divisors match lam.
    """
    r = _check_lambda(g, ell, lam)
    n = 2 * g
    target = tuple(sorted([lam[j] for j in range(g)] + [r - lam[j] for j in range(g)]))
    eta = ell ** r
    J = [[0] * n for _ in range(n)]
    for i in range(g):
        J[i][i + g], J[i + g][i] = 1, -1
    count = 0
    for exps in itertools.product(range(r + 1), repeat=n):
        if sum(exps) != r * g:
            continue
        diag = [ell ** e for e in exps]
        slots = [(i, j) for i in range(n) for j in range(i + 1, n)]
        for vals in itertools.product(*[range(diag[j]) for _, j in slots]):
            H = [[0] * n for _ in range(n)]
            for i in range(n):
                H[i][i] = diag[i]
            for (i, j), x in zip(slots, vals):
                H[i][j] = x
            HJ = [[sum(H[i][k] * J[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
            G = [[sum(HJ[i][k] * H[j][k] for k in range(n)) for j in range(n)] for i in range(n)]
            if any(x % eta for row in G for x in row):
                continue
            if abs(_det_int([[x // eta for x in row] for row in G])) != 1:
                continue
            if elementary_divisor_valuations(H, ell) == target:
                count += 1
    return count


def lagrangian_count(g: int, ell: int) -> int:
    """Number of Lagrangian subspaces of F_l^{2g}, by brute-force enumeration."""
    n = 2 * g
    count = 0
    for pivots in itertools.combinations(range(n), g):
        free = [(i, c) for i in range(g) for c in range(n) if c > pivots[i] and c not in pivots]
        for vals in itertools.product(range(ell), repeat=len(free)):
            rows = [[0] * n for _ in range(g)]
            for i, p in enumerate(pivots):
                rows[i][p] = 1
            for (i, c), x in zip(free, vals):
                rows[i][c] = x
            if all(
                sum(rows[a][i] * rows[b][i + g] - rows[a][i + g] * rows[b][i] for i in range(g)) % ell == 0
                for a, b in itertools.combinations(range(g), 2)
            ):
                count += 1
    return count


# --- Hecke operators -----------------------------------------------------------


@dataclass(frozen=True)
class HeckeOperator:
    g: int
    ell: int
    name: str
    r: int
    lams: tuple[Cocharacter, ...]
    reps: tuple[CosetRep, ...] = field(repr=False)

    @property
    def lam(self) -> Optional[Cocharacter]:
        return self.lams[0] if len(self.lams) == 1 else None

    @property
    def det_exponent(self) -> int:
        """det(lam(l)) = l^{g r} for every lam in the operator."""
        return self.g * self.r


def _t_i_lambda(g: int, i: int) -> Cocharacter:
    raw = Cocharacter((0,) * (g - i) + (1,) * i + (2,))
    return dominant_representative(raw)


def hecke_operator(g: int, ell: int, name="T(ell)") -> HeckeOperator:
    """Build T(l), T_i(l^2), T(l^2), or the operator of a dominant cocharacter.

    ``name`` may be a Cocharacter, or a string such as "T(ell)", "T_1(ell^2)",
    "T(ell^2)" (the letter may also be "l" or the prime itself).
    """
    if isinstance(name, Cocharacter):
        lam = name
        return HeckeOperator(g, ell, f"c_{lam}", eta_exponent(lam), (lam,), coset_reps(g, ell, lam))
    ell_pat = r"(?:ell|l|\d+)"
    s = name.replace(" ", "")
    arg = re.search(r"\((\w+)(?:\^2)?\)$", s)
    if arg and arg.group(1).isdigit() and int(arg.group(1)) != ell:
        raise HeckeError(f"operator {name!r} does not match l = {ell}")
    if re.fullmatch(rf"T\({ell_pat}\)", s):
        lams = (Cocharacter((1,) * (g + 1)),)
    elif m := re.fullmatch(rf"T_(\d+)\({ell_pat}\^2\)", s):
        i = int(m.group(1))
        if not 0 <= i <= g:
            raise HeckeError(f"T_i needs 0 <= i <= g, got {i}")
        lams = (_t_i_lambda(g, i),)
    elif re.fullmatch(rf"T\({ell_pat}\^2\)", s):
        lams = tuple(_t_i_lambda(g, i) for i in range(g + 1))
    else:
        raise HeckeError(f"unknown Hecke operator {name!r}")
    reps = tuple(rep for lam in lams for rep in coset_reps(g, ell, lam))
    return HeckeOperator(g, ell, s, eta_exponent(lams[0]), lams, reps)


# --- pulling coefficients back through a slash ----------------------------


@dataclass(frozen=True)
class _PullEntry:
    out: FourierIndex
    src: FourierIndex
    phase: int


def _level_adjust(rep: CosetRep, N: int) -> CosetRep:
    """Move B within B + S D (S integral symmetric) so that B D^{-1} = 0 mod N."""
    if N == 1:
        return rep
    g = rep.g
    S = _mul(_mat(rep.B), _inverse(rep.D))
    T = [[0] * g for _ in range(g)]
    for i in range(g):
        for j in range(i, g):
            s = S[i][j]
            # s + t = 0 mod N in Z[1/l]:  t = -num * den^{-1} mod N
            T[i][j] = T[j][i] = (-s.numerator * pow(s.denominator, -1, N)) % N
    B = _mul([[S[i][j] + T[i][j] for j in range(g)] for i in range(g)], _mat(rep.D))
    return CosetRep(g, rep.ell, rep.r, rep.D, tuple(tuple(int(x) for x in row) for row in B))


@lru_cache(maxsize=None)
def _pull_table(rep: CosetRep, N: int, tau_out: int) -> tuple[tuple[_PullEntry, ...], int]:
    """Preimages and phase exponents for every output index; also the
    largest preimage trace (the input precision this rep needs)."""
    rep = _level_adjust(rep.reduced(), N)
    g, eta = rep.g, rep.eta
    D = _mat(rep.D)
    Dt = _transpose(D)
    S = _mul(_mat(rep.B), _inverse(rep.D))
    order = N * eta ** g
    entries, need = [], 0
    for n_out in indices_up_to(g, tau_out):
        X = _mul(_mul(D, _mat(n_out.doubled)), Dt)
        X = [[x / eta for x in row] for row in X]
        if any(x.denominator != 1 for row in X for x in row) or any(X[i][i] % 2 for i in range(g)):
            continue
        src = FourierIndex(tuple(tuple(int(x) for x in row) for row in X))
        tr = sum(X[i][j] * S[j][i] for i in range(g) for j in range(g)) / 2
        t = eta ** g * tr
        if t.denominator != 1:
            raise HeckeError(f"non-integral phase exponent {t} (internal)")
        entries.append(_PullEntry(n_out, src, int(t) % order))
        need = max(need, src.trace)
    return tuple(entries), need


def required_precision(op_or_rep, N: int, tau_out: int) -> int:
    reps = op_or_rep.reps if isinstance(op_or_rep, HeckeOperator) else (op_or_rep,)
    return max(_pull_table(rep, N, tau_out)[1] for rep in reps)


def _prefactor(rep: CosetRep, k: int) -> Fraction:
    g = rep.g
    return Fraction(rep.eta) ** (k * g - g * (g + 1) // 2) * Fraction(rep.det_D) ** (-k)


def _rational_part(phases: dict[int, Fraction], order: int) -> Fraction:
    poly = [Fraction(0)] * order
    for t, c in phases.items():
        poly[t] += c
    val = CYC(order)(poly)
    if len(val.payload) > 1:
        raise CoefficientNotRational(f"coset sum left a non-rational residue {val}")
    return val.payload[0] if val.payload else Fraction(0)


def _check_precision(f: QExpansion, need: int, tau_out: int):
    if f.tau < need:
        raise InsufficientPrecision(f"output to trace {tau_out} needs input trace bound {need}, have {f.tau}")


def slash_block_upper(rep: CosetRep, k: int, f: QExpansion, tau_out: int) -> QExpansion:
    """M|_k f for a block upper triangular M, over CYC(N l^{rg}).

    Only output indices in F(g) are kept (fractional n' are dropped).
    """
    if f.ring != QQ:
        raise HeckeError("slash_block_upper works on rational series")
    entries, need = _pull_table(rep, f.N, tau_out)
    _check_precision(f, need, tau_out)
    order = f.N * rep.eta ** rep.g
    ring = CYC(order)
    pref = _prefactor(rep, k)
    out = {}
    for e in entries:
        a = f.coeffs.get(e.src)
        if a is None:
            continue
        mono = [Fraction(0)] * e.phase + [pref * a.payload]
        out[e.out] = ring(mono)
    return QExpansion(f.g, f.N, k, ring, tau_out, out)


def _check_ell(op: HeckeOperator, f: QExpansion):
    if f.g != op.g:
        raise HeckeError(f"operator has g={op.g}, series has g={f.g}")
    p = f.ring.characteristic
    if f.N % op.ell == 0 or (p and p == op.ell):
        raise HeckeError(f"hypothesis ℓ ∤ pN violated: ℓ={op.ell}, p={p or 'none'}, N={f.N}")


def hecke_apply(op: HeckeOperator, k: int, f: QExpansion, tau_out: Optional[int] = None) -> QExpansion:
    """sum_i M_i|_k f over the coset representatives.

    Prime-field input is lifted to residues in [0, p), acted on over Q and
    reduced back.  Every output coefficient is checked to be rational.
    """
    _check_ell(op, f)
    if f.k is not None and f.k != k:
        raise HeckeError(f"series has weight {f.k}, operator applied in weight {k}")
    if tau_out is None:
        tau_out = f.tau // op.ell ** op.r
    if f.ring.kind in ("GF", "GFX"):
        if f.ring.kind == "GFX":
            raise HeckeError("hecke_apply supports QQ and GF(p) series")
        return _reduce_back(hecke_apply(op, k, lift(f).replace(k=k), tau_out), f.ring)
    if f.ring != QQ:
        raise HeckeError(f"unsupported coefficient ring {f.ring}")
    order = f.N * op.ell ** (op.r * op.g)
    acc: dict[FourierIndex, dict[int, Fraction]] = {}
    for rep in op.reps:
        entries, need = _pull_table(rep, f.N, tau_out)
        _check_precision(f, need, tau_out)
        pref = _prefactor(rep, k)
        for e in entries:
            a = f.coeffs.get(e.src)
            if a is None:
                continue
            slot = acc.setdefault(e.out, {})
            slot[e.phase] = slot.get(e.phase, Fraction(0)) + pref * a.payload
    out = {n: _rational_part(ph, order) for n, ph in acc.items()}
    return QExpansion(f.g, f.N, k, QQ, tau_out, out)


def _reduce_back(f: QExpansion, ring) -> QExpansion:
    return QExpansion(f.g, f.N, f.k, ring, f.tau, {n: ring(c.payload) for n, c in f.coeffs.items()})


def eigenvalue_of(op: HeckeOperator, k: int, f: QExpansion, tau_out: Optional[int] = None) -> Optional[RingValue]:
    """The scalar c with T f = c f on every known coefficient, or None."""
    if f.is_zero():
        raise HeckeError("eigenvalue of the zero series is undefined")
    Tf = hecke_apply(op, k, f, tau_out)
    tau = Tf.tau
    support = [n for n in f.coeffs if n.trace <= tau]
    if not support:
        raise HeckeError(f"series vanishes up to trace {tau}; raise the precision")
    n0 = min(support, key=lambda n: (n.trace, n.upper()))
    c = Tf[n0] / f[n0]
    for n in indices_up_to(f.g, tau):
        if Tf[n] != c * f[n]:
            return None
    return c


@dataclass
class CommutationReport:
    ok: bool
    factor: RingValue
    tau: int
    first_difference: Optional[FourierIndex] = None
    lhs: Optional[QExpansion] = field(default=None, repr=False)
    rhs: Optional[QExpansion] = field(default=None, repr=False)

    def __str__(self):
        if self.ok:
            return f"PASS factor={self.factor} tau={self.tau}"
        return f"FAIL first differing index {self.first_difference} (tau={self.tau})"


def commutation_check(f: QExpansion, k: int, op: HeckeOperator, tau_out: Optional[int] = None) -> CommutationReport:
    """T(theta f) against l^{g r} theta(T f), weights k + p + 1 and k."""
    if f.ring.kind != "GF":
        raise HeckeError("commutation_check needs a prime-field series")
    p = f.ring.p
    _check_ell(op, f)
    f = f.replace(k=k)
    lhs = hecke_apply(op, k + p + 1, theta_bn_direct(f), tau_out)
    rhs_inner = hecke_apply(op, k, f, tau_out)
    factor = f.ring(op.ell) ** op.det_exponent
    rhs = theta_bn_direct(rhs_inner).scale(factor)
    tau = min(lhs.tau, rhs.tau)
    for n in indices_up_to(f.g, tau):
        if lhs[n] != rhs[n]:
            return CommutationReport(False, factor, tau, n, lhs, rhs)
    return CommutationReport(True, factor, tau, None, lhs, rhs)
