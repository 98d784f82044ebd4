"""Root datum of GSp_2g.

Characters are written in the basis e_1..e_{g+1} of X and cocharacters in the
dual basis f_1..f_{g+1} of X^vee.  The torus element t(u_1, .., u_{g+1}) is
diag(u_1, .., u_g; u_{g+1}/u_1, .., u_{g+1}/u_g) and the similitude character
is eta = e_{g+1}.

The half sums rho and rho-hat are stored doubled (``rho2``, ``rho2_hat``) so
that every pairing stays integral; downstream code writes l^{<rho, mu>} as a
power of a formal square root v of l.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Optional, Sequence

__all__ = [
    "Character",
    "Cocharacter",
    "RootDatum",
    "WeylElement",
    "NotDominant",
    "NotSimilitude",
    "build_root_datum",
    "pair",
    "is_dominant",
    "dominance_compare",
    "dominant_representative",
    "lower_set",
    "eta_exponent",
    "det_exponent",
    "cochar_matrix",
    "similitude_factor",
    "symplectic_form",
    "weyl_group",
    "iter_dominant",
]


class NotDominant(ValueError):
    pass


class NotSimilitude(ValueError):
    pass


class _Lattice:
    __slots__ = ()
    coeffs: tuple[int, ...]

    @property
    def g(self) -> int:
        return len(self.coeffs) - 1

    def _check(self, other):
        if type(other) is not type(self) or len(other.coeffs) != len(self.coeffs):
            raise ValueError(f"cannot combine {self!r} and {other!r}")

    def __add__(self, other):
        self._check(other)
        return type(self)(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        self._check(other)
        return type(self)(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return type(self)(tuple(-a for a in self.coeffs))

    def __rmul__(self, n: int):
        return type(self)(tuple(n * a for a in self.coeffs))

    def __iter__(self):
        return iter(self.coeffs)

    def __getitem__(self, i):
        return self.coeffs[i]

    def __str__(self):
        return ",".join(map(str, self.coeffs))


@dataclass(frozen=True)
class Character(_Lattice):
    """sum a_j e_j, stored as (a_1, .., a_{g+1})."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(a) for a in self.coeffs))

    @classmethod
    def basis(cls, g: int, j: int) -> "Character":
        """e_j, 1-based."""
        return cls(tuple(int(i == j - 1) for i in range(g + 1)))


@dataclass(frozen=True)
class Cocharacter(_Lattice):
    """sum a_j f_j, stored as (a_1, .., a_{g+1})."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(a) for a in self.coeffs))

    @classmethod
    def basis(cls, g: int, j: int) -> "Cocharacter":
        """f_j, 1-based."""
        return cls(tuple(int(i == j - 1) for i in range(g + 1)))


def pair(x: Character, y: Cocharacter) -> int:
    if not isinstance(x, Character) or not isinstance(y, Cocharacter):
        raise TypeError("pair takes a Character and a Cocharacter")
    if len(x.coeffs) != len(y.coeffs):
        raise ValueError(f"degree mismatch: g={x.g} vs g={y.g}")
    return sum(a * b for a, b in zip(x.coeffs, y.coeffs))


@dataclass(frozen=True)
class RootDatum:
    g: int
    simple_roots: tuple[Character, ...]
    simple_coroots: tuple[Cocharacter, ...]
    positive_roots: tuple[Character, ...]
    positive_coroots: tuple[Cocharacter, ...]
    rho2: Character
    rho2_hat: Cocharacter


def _simple(g: int) -> tuple[tuple[Character, ...], tuple[Cocharacter, ...]]:
    e = lambda j: Character.basis(g, j)  # noqa: E731
    f = lambda j: Cocharacter.basis(g, j)  # noqa: E731
    roots = [e(j) - e(j + 1) for j in range(1, g)] + [2 * e(g) - e(g + 1)]
    coroots = [f(j) - f(j + 1) for j in range(1, g)] + [f(g)]
    return tuple(roots), tuple(coroots)


def _reflect_char(x: Character, alpha: Character, alpha_vee: Cocharacter) -> Character:
    return x - pair(x, alpha_vee) * alpha


def _reflect_cochar(y: Cocharacter, alpha: Character, alpha_vee: Cocharacter) -> Cocharacter:
    return y - pair(alpha, y) * alpha_vee


def _orbit(seeds, reflect, simple):
    seen = set(seeds)
    todo = list(seeds)
    while todo:
        x = todo.pop()
        for a, av in simple:
            y = reflect(x, a, av)
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return seen


def _simple_coords(v: Sequence[int], basis: Sequence[Sequence[int]]) -> Optional[list[Fraction]]:
    """Coordinates of v in the span of ``basis`` (exact), or None."""
    n, m = len(basis), len(v)
    # Solve basis^T c = v by elimination on the m x n system.
    rows = [[Fraction(basis[j][i]) for j in range(n)] + [Fraction(v[i])] for i in range(m)]
    piv_cols = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        rows[r] = [x / rows[r][c] for x in rows[r]]
        for i in range(m):
            if i != r and rows[i][c] != 0:
                rows[i] = [x - rows[i][c] * y for x, y in zip(rows[i], rows[r])]
        piv_cols.append(c)
        r += 1
    if any(rows[i][n] != 0 for i in range(r, m)):
        return None
    coords = [Fraction(0)] * n
    for i, c in enumerate(piv_cols):
        coords[c] = rows[i][n]
    return coords


@lru_cache(maxsize=None)
def build_root_datum(g: int) -> RootDatum:
    """Root datum of GSp_2g with the simple roots alpha_j = e_j - e_{j+1},
    alpha_g = 2e_g - e_{g+1} and coroots alpha_j^vee = f_j - f_{j+1},
    alpha_g^vee = f_g."""
    if g < 1:
        raise ValueError("g must be positive")
    roots, coroots = _simple(g)
    simple = list(zip(roots, coroots))
    all_roots = _orbit(roots, _reflect_char, simple)
    all_coroots = _orbit(coroots, _reflect_cochar, simple)

    def positive(vs, basis):
        out = []
        for v in vs:
            c = _simple_coords(v.coeffs, [b.coeffs for b in basis])
            if c is not None and all(x >= 0 for x in c):
                out.append(v)
        return tuple(sorted(out, key=lambda v: v.coeffs, reverse=True))

    pos_roots = positive(all_roots, roots)
    pos_coroots = positive(all_coroots, coroots)
    rho2 = Character((0,) * (g + 1))
    for a in pos_roots:
        rho2 = rho2 + a
    rho2_hat = Cocharacter((0,) * (g + 1))
    for a in pos_coroots:
        rho2_hat = rho2_hat + a
    return RootDatum(g, roots, coroots, pos_roots, pos_coroots, rho2, rho2_hat)


def is_dominant(lam: Cocharacter) -> bool:
    """2a_1 >= 2a_2 >= .. >= 2a_g >= a_{g+1}."""
    a = lam.coeffs
    g = len(a) - 1
    chain = [2 * x for x in a[:g]] + [a[g]]
    return all(chain[i] >= chain[i + 1] for i in range(g))


def dominance_compare(lam: Cocharacter, mu: Cocharacter) -> Optional[tuple[int, ...]]:
    """Witness n with lam - mu = sum n_j alpha_j^vee, n_j >= 0, or None.

    The coroot matrix is unitriangular in the f-basis, which forces
    n_j = d_1 + .. + d_j for d = lam - mu, and d_{g+1} = 0.
    """
    for x in (lam, mu):
        if not is_dominant(x):
            raise NotDominant(f"{x.coeffs} is not dominant")
    d = (lam - mu).coeffs
    if d[-1] != 0:
        return None
    n, s = [], 0
    for x in d[:-1]:
        s += x
        if s < 0:
            return None
        n.append(s)
    return tuple(n)


def dominant_representative(lam: Cocharacter) -> Cocharacter:
    """The dominant element of the Weyl orbit of ``lam``.

    W acts by permuting a_1..a_g and by a_j -> a_{g+1} - a_j; ties are broken
    by sorting descending.
    """
    a = lam.coeffs
    top = a[-1]
    parts = sorted((max(x, top - x) for x in a[:-1]), reverse=True)
    return Cocharacter(tuple(parts) + (top,))


def lower_set(lam: Cocharacter) -> list[Cocharacter]:
    """All dominant mu <= lam, lam first, then by decreasing height."""
    if not is_dominant(lam):
        raise NotDominant(f"{lam.coeffs} is not dominant")
    g = lam.g
    top = lam[g]
    floor_ = -(-top // 2)  # ceil(top / 2): 2 a_g >= a_{g+1}
    out = []

    def rec(prefix, upper):
        j = len(prefix)
        if j == g:
            mu = Cocharacter(tuple(prefix) + (top,))
            if is_dominant(mu) and dominance_compare(lam, mu) is not None:
                out.append(mu)
            return
        # partial sums of lam - mu stay nonnegative: sum(mu_1..mu_j) <= sum(lam_1..lam_j)
        budget = sum(lam.coeffs[: j + 1]) - sum(prefix)
        for x in range(min(upper, budget), floor_ - 1, -1):
            rec(prefix + [x], x)

    rec([], lam[0])

    def height(mu):
        return sum(dominance_compare(lam, mu))

    return sorted(out, key=lambda mu: (height(mu), [-c for c in mu.coeffs]))


def eta_exponent(lam: Cocharacter) -> int:
    """a_{g+1}: eta(lam(l)) = l^{a_{g+1}}."""
    return lam.coeffs[-1]


def det_exponent(lam: Cocharacter) -> int:
    """det(lam(l)) = l^{g a_{g+1}}."""
    return lam.g * lam.coeffs[-1]


def symplectic_form(g: int) -> list[list[int]]:
    return [
        [1 if j == i + g else (-1 if i == j + g else 0) for j in range(2 * g)]
        for i in range(2 * g)
    ]


def cochar_matrix(lam: Cocharacter, ell: int, r: int = 1) -> list[list[Fraction]]:
    """lam(ell^r) as a diagonal 2g x 2g matrix."""
    a = lam.coeffs
    g = lam.g
    base = Fraction(ell) ** r
    diag = [base ** a[j] for j in range(g)] + [base ** (a[g] - a[j]) for j in range(g)]
    return [[diag[i] if i == j else Fraction(0) for j in range(2 * g)] for i in range(2 * g)]


def similitude_factor(M: Sequence[Sequence]) -> Fraction:
    """eta with M J M^T = eta J; raises NotSimilitude otherwise."""
    n = len(M)
    if n % 2 or any(len(row) != n for row in M):
        raise NotSimilitude("matrix must be square of even size")
    J = symplectic_form(n // 2)
    MJ = [[sum(Fraction(M[i][k]) * J[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
    P = [[sum(MJ[i][k] * M[j][k] for k in range(n)) for j in range(n)] for i in range(n)]
    eta = P[0][n // 2]
    for i in range(n):
        for j in range(n):
            if P[i][j] != eta * J[i][j]:
                raise NotSimilitude("M J M^T is not a multiple of J")
    if eta == 0:
        raise NotSimilitude("similitude factor is zero")
    return eta


@dataclass(frozen=True)
class WeylElement:
    """A Weyl group element as integer matrices acting on coordinate vectors.

    ``on_cochar`` acts on f-coordinates, ``on_char`` on e-coordinates; they are
    mutually inverse-transpose so the pairing is preserved.  ``sign`` is
    (-1)^length.
    """

    on_cochar: tuple[tuple[int, ...], ...]
    on_char: tuple[tuple[int, ...], ...]
    sign: int

    def __call__(self, x):
        if isinstance(x, Cocharacter):
            return Cocharacter(_matvec(self.on_cochar, x.coeffs))
        if isinstance(x, Character):
            return Character(_matvec(self.on_char, x.coeffs))
        return tuple(_matvec(self.on_cochar, x))


def _matvec(A, v):
    return tuple(sum(a * b for a, b in zip(row, v)) for row in A)


def _matmul(A, B):
    n = len(A)
    return tuple(tuple(sum(A[i][k] * B[k][j] for k in range(n)) for j in range(n)) for i in range(n))


@lru_cache(maxsize=None)
def weyl_group(g: int) -> tuple[WeylElement, ...]:
    """Closure of the simple reflections; |W| = 2^g g!."""
    if g > 4:
        raise ValueError("weyl_group is limited to g <= 4")
    rd = build_root_datum(g)
    n = g + 1

    def refl_matrix(fn, basis_cls, a, av):
        cols = [fn(basis_cls.basis(g, j + 1), a, av).coeffs for j in range(n)]
        return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))

    gens = [
        (refl_matrix(_reflect_cochar, Cocharacter, a, av), refl_matrix(_reflect_char, Character, a, av))
        for a, av in zip(rd.simple_roots, rd.simple_coroots)
    ]
    ident = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    seen = {ident: (ident, 1)}
    frontier = [ident]
    while frontier:
        nxt = []
        for w in frontier:
            wc, sgn = seen[w]
            for gy, gx in gens:
                y = _matmul(gy, w)
                if y not in seen:
                    seen[y] = (_matmul(gx, wc), -sgn)
                    nxt.append(y)
        frontier = nxt
    return tuple(WeylElement(y, x, s) for y, (x, s) in seen.items())


def iter_dominant(g: int, bound: int) -> Iterator[Cocharacter]:
    """Dominant cocharacters with all |a_j| <= bound."""
    import itertools

    for a in itertools.product(range(-bound, bound + 1), repeat=g + 1):
        lam = Cocharacter(a)
        if is_dominant(lam):
            yield lam
