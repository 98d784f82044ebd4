"""Acceptance checks, one per numbered criterion, shared by `selftest` and the tests.

Each check returns a CheckResult; ``line()`` gives the report format
``CHECK <name> PASS|FAIL <detail>``.  Quick mode lowers trial counts only.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .clifford import CliffordElement, cliff_mul, generator, is_gspin, parity_automorphism, scalar
from .exactring import GF, QQ
from .hecke import coset_reps, commutation_check, eigenvalue_of, hecke_operator, lagrangian_count, same_right_coset
from .qexp import delta, eisenstein, random_qexp, reduce_mod_p
from .rootdatum import (
    Cocharacter,
    build_root_datum,
    dominance_compare,
    eta_exponent,
    iter_dominant,
    lower_set,
)
from .satake import (
    F49,
    DualTorusPoint,
    LaurentV,
    SatakeCoefficients,
    central_exponent,
    char_eval,
    eta_dual,
    invert_coefficients,
    main_theorem_verify,
    random_coefficients,
    random_eigensystem,
    random_instance_lambda,
    rho_pairing,
    satake_inverse_chi,
    sqrt_in_field,
    weights_of_irrep,
)
from .theta import PQContext, bracket, normalization_constant, q_eval, theta_bn_direct, theta_bn_via_bracket


@dataclass
class CheckResult:
    number: int
    name: str
    ok: bool
    detail: str
    seconds: float = 0.0
    budget: float = 0.0

    def line(self) -> str:
        return f"CHECK {self.name} {'PASS' if self.ok else 'FAIL'} {self.detail}"


class _Fail(Exception):
    pass


def _require(cond, msg):
    if not cond:
        raise _Fail(msg)


# 1 ---------------------------------------------------------------------------


def check_eta_on_coroots(rng, quick):
    counts = []
    for g in (1, 2, 3, 4):
        rd = build_root_datum(g)
        _require(len(rd.positive_coroots) == g * g, f"g={g}: {len(rd.positive_coroots)} positive coroots")
        for b in rd.positive_coroots:
            _require(eta_exponent(b) == 0, f"g={g}: coroot {b} has eta exponent {eta_exponent(b)}")
        counts.append(len(rd.positive_coroots))
    return f"positive coroots per g=1..4: {counts}, all with eta exponent 0"


# 2 ---------------------------------------------------------------------------


def check_dominance_eta(rng, quick):
    trials = 50 if quick else 200
    for g in (1, 2, 3):
        pool = list(iter_dominant(g, 3))
        for _ in range(trials):
            lam = rng.choice(pool)
            mu = rng.choice(lower_set(lam))
            n = dominance_compare(lam, mu)
            _require(n is not None and all(x >= 0 for x in n), f"no witness for {mu} <= {lam}")
            rd = build_root_datum(g)
            recon = mu
            for nj, cv in zip(n, rd.simple_coroots):
                recon = recon + nj * cv
            _require(recon == lam, f"witness {n} does not rebuild {lam} from {mu}")
            _require(eta_exponent(lam) == eta_exponent(mu), f"eta exponents differ for {lam}, {mu}")
    return f"{trials} pairs per g in 1..3: witnesses rebuild lam, eta exponents agree"


# 3 ---------------------------------------------------------------------------


def _rand_cliff(g, rng, nterms=4):
    size = 1 << (2 * g + 1)
    return CliffordElement(g, QQ, {rng.randrange(size): Fraction(rng.randint(-3, 3)) for _ in range(nterms)})


def _rand_vector(g, rng):
    while True:
        coeffs = [rng.randint(-3, 3) for _ in range(2 * g + 1)]
        if sum(c * c for c in coeffs):
            break
    out = scalar(g, QQ, 0)
    for i, c in enumerate(coeffs, start=1):
        out = out + generator(g, i, QQ) * c
    return out


def check_clifford(rng, quick):
    triples = 50 if quick else 200
    spins = 20 if quick else 50
    for g in (1, 2):
        size = 1 << (2 * g + 1)
        for s in range(size):
            for t in range(size):
                x = cliff_mul(CliffordElement(g, QQ, {s: 1}), CliffordElement(g, QQ, {t: 1}))
                _require(len(x.terms) == 1 and next(iter(x.terms)) == s ^ t, "basis product left the basis")
        for _ in range(triples):
            a, b, c = (_rand_cliff(g, rng) for _ in range(3))
            _require((a * b) * c == a * (b * c), "associativity failed")
            _require(parity_automorphism(a * b) == parity_automorphism(a) * parity_automorphism(b), "gamma not multiplicative")
            _require(parity_automorphism(parity_automorphism(a)) == a, "gamma^2 != id")
        for _ in range(spins):
            x = _rand_vector(g, rng) * _rand_vector(g, rng)
            _require(is_gspin(x), f"product of two vectors rejected: {x}")
    return f"dims 8 and 32 closed; {triples} associativity triples and {spins} two-vector GSpin products per g"


# 4 ---------------------------------------------------------------------------


def check_rankin_cohen(rng, quick):
    for k1, k2 in ((4, 6), (4, 4), (6, 6)):
        ctx = PQContext(1, k1, k2)
        for _ in range(100):
            R = Fraction(rng.randint(-50, 50), rng.randint(1, 9))
            S = Fraction(rng.randint(-50, 50), rng.randint(1, 9))
            got = q_eval(ctx, [[R]], [[S]])
            _require(got == 2 * k2 * R - 2 * k1 * S, f"Q({R},{S}) = {got} at (k1,k2)=({k1},{k2})")
    return "Q^(1) = 2k2 R - 2k1 S on 100 random pairs for each weight pair"


# 5 ---------------------------------------------------------------------------


def check_bracket_desk(rng, quick):
    tau = 10
    E4, E6, D = eisenstein(4, tau), eisenstein(6, tau), delta(tau)
    # q^1 coefficient: Q(1, 0) a4(1) + Q(0, 1) a6(1) = 2*6*240 - 2*4*(-504)
    const = 12 * E4.coefficient_list()[1].payload - 8 * E6.coefficient_list()[1].payload
    _require(const == 6912, f"derived constant {const}")
    B = bracket(E4, E6, PQContext(1, 4, 6))
    _require(B.same_coefficients(D.scale(const)), "[E4, E6] differs from 6912 Delta")
    _require(B.k == 12, f"weight {B.k}")
    return f"[E4,E6] = {const} Delta to tau={tau}; constant from 12*240 + 8*504"


# 6 ---------------------------------------------------------------------------


def check_theta_routes(rng, quick):
    tau = 15
    for p in (5, 7, 11):
        H = eisenstein(p - 1, tau)
        for F in (delta(tau), eisenstein(4, tau), eisenstein(6, tau)):
            via = theta_bn_via_bracket(F, H, 1, p)
            direct = theta_bn_direct(reduce_mod_p(F, p).replace(k=F.k))
            _require(via == direct, f"routes differ for weight {F.k}, p={p}")
        for g in (1, 2, 3):
            c = normalization_constant(g, p)
            _require(GF(p)(c) == 1, f"normalization g={g} p={p} gives {c}")
    return "bracket and direct routes agree for Delta, E4, E6 at p=5,7,11; normalization = 1 mod p for g=1..3"


# 7 ---------------------------------------------------------------------------


def check_hasse(rng, quick):
    for p in (5, 7, 11, 13):
        E = reduce_mod_p(eisenstein(p - 1, 20), p)
        lst = E.coefficient_list()
        _require(lst[0] == 1, f"E_{p - 1} constant term {lst[0]}")
        bad = [n for n in range(1, 21) if not lst[n].is_zero()]
        _require(not bad, f"E_{p - 1} mod {p} nonzero at {bad}")
    return "E_{p-1} = 1 mod p through q^20 for p=5,7,11,13"


# 8 ---------------------------------------------------------------------------


def check_coset_counts(rng, quick):
    found = []
    for g, ells in ((1, (2, 3, 5)), (2, (2, 3))):
        for ell in ells:
            lam = Cocharacter((1,) * (g + 1))
            reps = coset_reps(g, ell, lam)
            expect = ell + 1 if g == 1 else (ell + 1) * (ell * ell + 1)
            oracle = lagrangian_count(g, ell)
            _require(len(reps) == expect == oracle, f"g={g} l={ell}: {len(reps)} reps, formula {expect}, oracle {oracle}")
            mats = [r.matrix() for r in reps]
            for i in range(len(mats)):
                for j in range(i + 1, len(mats)):
                    _require(not same_right_coset(mats[i], mats[j], ell), f"g={g} l={ell}: reps {i}, {j} coincide")
            found.append(len(reps))
    return f"T(l) coset counts {found}; Lagrangian oracle and pairwise dedupe agree"


# 9 ---------------------------------------------------------------------------


def check_hecke_delta(rng, quick):
    e2 = eigenvalue_of(hecke_operator(1, 2), 12, delta(16), 8)
    e3 = eigenvalue_of(hecke_operator(1, 3), 12, delta(24), 8)
    _require(e2 is not None and e2 == -24, f"T(2) eigenvalue {e2}")
    _require(e3 is not None and e3 == 252, f"T(3) eigenvalue {e3}")
    return f"T(2) Delta = {e2} Delta, T(3) Delta = {e3} Delta"


# 10 --------------------------------------------------------------------------


def check_commutation(rng, quick):
    trials = 5 if quick else 50
    tau_out = 6
    for g in (1, 2):
        for ell in (2, 3):
            op = hecke_operator(g, ell)
            for p in (5, 7):
                for _ in range(trials):
                    f = random_qexp(g, ell * tau_out, GF(p), rng)
                    k = rng.randint(4, 20)
                    rep = commutation_check(f, k, op, tau_out)
                    _require(rep.ok, f"g={g} l={ell} p={p} k={k}: {rep}")
                    _require(rep.factor == GF(p)(ell ** g), f"factor {rep.factor}")
    f = reduce_mod_p(delta(16), 7).replace(k=12)
    ev = eigenvalue_of(hecke_operator(1, 2), 12 + 7 + 1, theta_bn_direct(f), 8)
    _require(ev is not None and ev == GF(7)(2 * -24) and ev == 1, f"T(2) eigenvalue of theta(Delta mod 7) is {ev}")
    return f"{trials} random series per (g,l,p) in {{1,2}}x{{2,3}}x{{5,7}}; T(2) theta(Delta mod 7) eigenvalue {ev}"


# 11 --------------------------------------------------------------------------


def check_satake_framework(rng, quick):
    ring = F49()
    trials = 20 if quick else 50
    pool = [lam for g in (1, 2) for lam in iter_dominant(g, 2) if len(lower_set(lam)) <= 8]
    sizes = set()
    for _ in range(trials):
        lam = rng.choice(pool)
        b = random_coefficients(lam, 3, ring, rng)
        _require(invert_coefficients(invert_coefficients(b)) == b, f"involution fails at {lam}")
        sizes.add(len(lower_set(lam)))
    for lam in pool:
        ident = SatakeCoefficients.identity(lam.g, 3, ring, lam)
        h = satake_inverse_chi(lam, ident)
        want = {lam: LaurentV.monomial(ring, 1, -rho_pairing(lam))}
        _require(h.terms == want, f"identity table at {lam} gives {h.terms}")
    return f"involution on {trials} tables (lower-set sizes {sorted(sizes)}); identity table gives the single-term inverse"


# 12 --------------------------------------------------------------------------


def check_main_theorem(rng, quick):
    ring = F49()
    trials = 20 if quick else 100
    summary = []
    for g in (1, 2):
        for m in sorted({0, 1, 2, g}):
            passed = distinct = 0
            for _ in range(trials):
                ell = rng.choice((2, 3, 5))
                v = sqrt_in_field(ring, ell)
                lam = random_instance_lambda(g, rng, need_eta=m > 0)
                d = random_coefficients(lam, ell, ring, rng)
                psi = random_eigensystem(lam, ell, 7, ring, rng)
                ok, tr = main_theorem_verify(lam, d, psi, m, ell, 7, v)
                _require(ok, f"g={g} m={m}:\n{tr}")
                passed += ok
                distinct += tr.symbolically_distinct
            if m > 0:
                _require(distinct == trials, f"g={g} m={m}: only {distinct}/{trials} non-vacuous")
            summary.append(f"(g={g},m={m}):{passed}/{trials},distinct={distinct}")
    return " ".join(summary)


# 13 --------------------------------------------------------------------------


def check_dual_characters(rng, quick):
    ring = F49()
    count = 0
    for g in (1, 2):
        for lam in iter_dominant(g, 2):
            w = weights_of_irrep(lam)
            _require(w.get(lam) == 1, f"highest weight multiplicity {w.get(lam)} at {lam}")
            _require({mu[g] for mu in w} == {eta_exponent(lam)}, f"eta components vary at {lam}")
            _require(central_exponent(lam) == eta_exponent(lam), f"central exponent at {lam}")
            for _ in range(3):
                t = DualTorusPoint(g, tuple(_nonzero(ring, rng) for _ in range(g + 1)))
                a = _nonzero(ring, rng)
                _require(
                    char_eval(lam, eta_dual(g, a) * t) == a ** eta_exponent(lam) * char_eval(lam, t),
                    f"eta-vee scaling fails at {lam}",
                )
            count += 1
    return f"{count} dominant lam with |lam| <= 2 at g=1,2: multiplicity-one top weight, constant eta component, eta-vee scaling"


def _nonzero(ring, rng):
    while True:
        x = ring([rng.randrange(ring.p) for _ in range(2)])
        if not x.is_zero():
            return x


CHECKS: list[tuple[int, str, Callable, float]] = [
    (1, "eta_on_coroots", check_eta_on_coroots, 1),
    (2, "dominance_eta_corollary", check_dominance_eta, 1),
    (3, "clifford_suite", check_clifford, 5),
    (4, "rankin_cohen_degeneration", check_rankin_cohen, 1),
    (5, "bracket_e4_e6", check_bracket_desk, 1),
    (6, "theta_route_equivalence", check_theta_routes, 10),
    (7, "hasse_invariant_lift", check_hasse, 5),
    (8, "coset_counts", check_coset_counts, 60),
    (9, "hecke_delta_eigenvalues", check_hecke_delta, 5),
    (10, "commutation_theorem", check_commutation, 60),
    (11, "satake_framework", check_satake_framework, 1),
    (12, "main_theorem_replay", check_main_theorem, 30),
    (13, "dual_character_properties", check_dual_characters, 30),
]


def run_check(number: int, seed: int = 0, quick: bool = False) -> CheckResult:
    num, name, fn, budget = CHECKS[number - 1]
    rng = random.Random(seed * 1000 + num)
    t0 = time.perf_counter()
    try:
        detail = fn(rng, quick)
        ok = True
    except _Fail as exc:
        detail, ok = str(exc), False
    except Exception as exc:  # a crash is a failure of the criterion, reported not raised
        detail, ok = f"{type(exc).__name__}: {exc}", False
    return CheckResult(num, name, ok, detail, time.perf_counter() - t0, budget)


def run_all(seed: int = 0, quick: bool = False) -> list[CheckResult]:
    return [run_check(n, seed, quick) for n, *_ in CHECKS]
