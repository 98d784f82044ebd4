"""Command line front end: ``siegel <subcommand> ...``.

Exit status is 0 on success, 1 on a domain error (the message names the
violated hypothesis) and 2 on a usage error.  All randomness is seeded from
--seed, which the SIEGEL_SEED environment variable overrides.
"""

from __future__ import annotations

import argparse
import os
import random
import sys
from dataclasses import dataclass, field
from typing import Optional

from . import acceptance, qexp
from .clifford import is_gspin, parse_expr
from .exactring import GF, GFX, RingDescriptor
from .hecke import commutation_check, coset_reps, hecke_apply, hecke_operator, lagrangian_count
from .rootdatum import Cocharacter, build_root_datum, dominance_compare, eta_exponent, lower_set, weyl_group
from .satake import (
    main_theorem_verify,
    parse_table,
    random_coefficients,
    random_eigensystem,
    sqrt_in_field,
)
from .theta import PQContext, bracket, theta_bn_direct, theta_bn_via_bracket


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    g: Optional[int] = None
    N: int = 1
    p: Optional[int] = None
    ell: Optional[int] = None
    tau: Optional[int] = None
    k: Optional[int] = None
    seed: int = 0
    inputs: list = field(default_factory=list)
    output: Optional[str] = None
    ring: Optional[RingDescriptor] = None

    def check(self) -> None:
        """Raise on violated hard hypotheses."""
        if self.p is not None and self.N % self.p == 0:
            raise ValueError(f"hypothesis p ∤ N violated: p={self.p}, N={self.N}")
        if self.ell is not None:
            bad = self.N % self.ell == 0 or (self.p is not None and self.p == self.ell)
            if bad:
                raise ValueError(f"hypothesis ℓ ∤ pN violated: ℓ={self.ell}, p={self.p}, N={self.N}")

    def warnings(self) -> list[str]:
        """Soft hypotheses of the theta-operator theorem, reported but not enforced."""
        out = []
        if self.g is not None and self.p is not None and 2 * self.p <= self.g * (self.g + 1):
            out.append(f"p={self.p} does not exceed g(g+1)/2 for g={self.g}")
        if self.g is not None and self.g == 1 and self.subcommand in ("theta", "commute-check"):
            out.append("g=1: the theta-operator theorem is stated for g > 1; results are formal identities here")
        if self.g is not None and self.k is not None and self.k <= self.g + 1:
            out.append(f"weight k={self.k} is not above g+1={self.g + 1}")
        return out


def _cochar(text: str) -> Cocharacter:
    try:
        return Cocharacter(tuple(int(x) for x in text.replace("(", "").replace(")", "").split(",")))
    except ValueError:
        raise UsageError(f"cannot parse cocharacter {text!r}") from None


def _read_series(path: str) -> qexp.QExpansion:
    if path == "-":
        return qexp.loads(sys.stdin.read())
    with open(path) as fh:
        return qexp.read(fh)


def _emit_series(f: qexp.QExpansion, out: Optional[str]):
    text = qexp.dumps(f)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _seed(args) -> int:
    env = os.environ.get("SIEGEL_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"SIEGEL_SEED={env!r} is not an integer") from None
    return args.seed


def _warn(cfg: RunConfig):
    for w in cfg.warnings():
        print(f"warning: {w}", file=sys.stderr)


# --- subcommands -------------------------------------------------------------


def cmd_rootdatum(args):
    rd = build_root_datum(args.g)
    print(f"g={rd.g}")
    print("simple roots: " + " ; ".join(str(a) for a in rd.simple_roots))
    print("simple coroots: " + " ; ".join(str(a) for a in rd.simple_coroots))
    print(f"positive roots ({len(rd.positive_roots)}): " + " ; ".join(str(a) for a in rd.positive_roots))
    print(f"positive coroots ({len(rd.positive_coroots)}): " + " ; ".join(str(a) for a in rd.positive_coroots))
    print(f"2rho: {rd.rho2}")
    print(f"2rho_hat: {rd.rho2_hat}")
    if args.g <= 4:
        print(f"|W| = {len(weyl_group(args.g))}")


def cmd_dominance(args):
    lam, mu = _cochar(args.lam), _cochar(args.mu)
    n = dominance_compare(lam, mu)
    if n is None:
        print(f"{mu} is not <= {lam}")
    else:
        print(f"{mu} <= {lam}: witness {','.join(map(str, n))}")
        print(f"eta exponents {eta_exponent(lam)} {eta_exponent(mu)}")
    if args.lower_set:
        for nu in lower_set(lam):
            print(f"  {nu}")


def cmd_clifford(args):
    ring = RingDescriptor.parse(args.ring)
    x = parse_expr(args.expr, args.g, ring)
    print(x)
    if args.gspin:
        print(f"gspin: {is_gspin(x)}")


def cmd_qexp(args):
    op = args.op
    if op == "eisenstein":
        f = qexp.eisenstein(args.k, args.tau)
    elif op == "delta":
        f = qexp.delta(args.tau)
    elif op in ("mul", "add"):
        if len(args.inputs) != 2:
            raise UsageError(f"qexp {op} takes two input files")
        a, b = (_read_series(p) for p in args.inputs)
        f = qexp.qexp_mul(a, b) if op == "mul" else qexp.qexp_linear(1, a, 1, b)
    elif op == "reduce":
        if len(args.inputs) != 1 or args.p is None:
            raise UsageError("qexp reduce takes one input file and --p")
        f = qexp.reduce_mod_p(_read_series(args.inputs[0]), args.p)
    else:  # "show" round-trips a file
        if len(args.inputs) != 1:
            raise UsageError("qexp show takes one input file")
        f = _read_series(args.inputs[0])
    _emit_series(f, args.output)


def cmd_theta(args):
    f = _read_series(args.input)
    if args.via_bracket:
        if args.p is None:
            raise UsageError("--via-bracket needs --p")
        cfg = RunConfig("theta", g=f.g, N=f.N, p=args.p, k=f.k)
        cfg.check()
        _warn(cfg)
        H = _read_series(args.H) if args.H else qexp.eisenstein(args.p - 1, f.tau)
        out = theta_bn_via_bracket(f, H, f.g, args.p)
    else:
        if f.ring.p is None:
            if args.p is None:
                raise UsageError("rational input needs --p")
            f = qexp.reduce_mod_p(f, args.p)
        elif args.p is not None and args.p != f.ring.p:
            raise UsageError(f"--p {args.p} does not match the input field {f.ring}")
        cfg = RunConfig("theta", g=f.g, N=f.N, p=f.ring.p, k=f.k)
        cfg.check()
        _warn(cfg)
        out = theta_bn_direct(f)
    _emit_series(out, args.output)


def cmd_bracket(args):
    F, G = _read_series(args.F), _read_series(args.G)
    k1 = args.k1 if args.k1 is not None else F.k
    k2 = args.k2 if args.k2 is not None else G.k
    if k1 is None or k2 is None:
        raise UsageError("weights unknown: pass --k1/--k2")
    _emit_series(bracket(F, G, PQContext(F.g, k1, k2)), args.output)


def _operator(args, g):
    if args.lam:
        return hecke_operator(g, args.ell, _cochar(args.lam))
    return hecke_operator(g, args.ell, args.op)


def cmd_cosets(args):
    if args.lam:
        reps = coset_reps(args.g, args.ell, _cochar(args.lam))
    else:
        reps = hecke_operator(args.g, args.ell, args.op).reps
    for rep in reps:
        print(rep)
    print(f"# {len(reps)} representatives", file=sys.stderr)
    if args.oracle:
        print(f"# Lagrangian count over F_{args.ell}: {lagrangian_count(args.g, args.ell)}", file=sys.stderr)


def cmd_hecke_apply(args):
    f = _read_series(args.input)
    RunConfig("hecke-apply", g=f.g, N=f.N, p=f.ring.p, ell=args.ell).check()
    op = _operator(args, f.g)
    _emit_series(hecke_apply(op, args.k, f, args.tau_out), args.output)


def cmd_commute_check(args, seed):
    if args.input:
        f = _read_series(args.input)
    else:
        if args.g is None or args.p is None:
            raise UsageError("without an input file pass --g and --p for a random series")
        tau_in = args.ell * (args.tau_out or 6)
        f = qexp.random_qexp(args.g, tau_in, GF(args.p), random.Random(seed))
    cfg = RunConfig("commute-check", g=f.g, N=f.N, p=f.ring.p, ell=args.ell, k=args.k)
    cfg.check()
    _warn(cfg)
    op = _operator(args, f.g)
    rep = commutation_check(f, args.k, op, args.tau_out)
    print(rep)
    return 0 if rep.ok else 1


def _field_with_sqrt(p: int, ell: int):
    base = GF(p)
    v = sqrt_in_field(base, ell)
    if v is not None:
        return base, v
    ring = GFX(p, ((-ell) % p, 0, 1))  # x^2 - l, irreducible when l is a non-residue
    return ring, ring.gen()


def cmd_satake_verify(args, seed):
    if args.p % 2 == 0:
        raise ValueError("hypothesis p odd violated")
    RunConfig("satake-verify", g=args.g, p=args.p, ell=args.ell).check()
    lam = _cochar(args.lam)
    if lam.g != args.g:
        raise UsageError(f"--lam has g={lam.g}, --g is {args.g}")
    ring, v = _field_with_sqrt(args.p, args.ell)
    rng = random.Random(seed)
    table = None
    if args.table:
        with open(args.table) as fh:
            table = parse_table(fh.read(), args.g, args.ell, ring)
    failures = 0
    for trial in range(args.trials):
        d = table or random_coefficients(lam, args.ell, ring, rng)
        psi = random_eigensystem(lam, args.ell, args.p, ring, rng)
        ok, tr = main_theorem_verify(lam, d, psi, args.m, args.ell, args.p, v)
        print(f"trial {trial}")
        print(tr)
        failures += not ok
    print(f"summary: {args.trials - failures}/{args.trials} PASS")
    return 0 if failures == 0 else 1


def cmd_selftest(args, seed):
    results = acceptance.run_all(seed=seed, quick=args.quick)
    for r in results:
        print(r.line())
    bad = sum(not r.ok for r in results)
    print(f"SUMMARY {len(results) - bad}/{len(results)} PASS")
    return 0 if bad == 0 else 1


# --- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="siegel", description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("rootdatum", help="roots, coroots and rho of GSp_2g")
    s.add_argument("--g", type=int, required=True)

    s = sub.add_parser("dominance", help="compare two dominant cocharacters")
    s.add_argument("--lam", required=True)
    s.add_argument("--mu", required=True)
    s.add_argument("--lower-set", action="store_true")

    s = sub.add_parser("clifford-eval", help="evaluate a Clifford expression")
    s.add_argument("--g", type=int, required=True)
    s.add_argument("--expr", required=True)
    s.add_argument("--ring", default="QQ")
    s.add_argument("--gspin", action="store_true")

    s = sub.add_parser("qexp", help="q-expansion utilities")
    s.add_argument("op", choices=["mul", "add", "reduce", "eisenstein", "delta", "show"])
    s.add_argument("inputs", nargs="*")
    s.add_argument("--k", type=int)
    s.add_argument("--tau", type=int, default=10)
    s.add_argument("--p", type=int)
    s.add_argument("-o", "--output")

    s = sub.add_parser("theta", help="theta operator")
    s.add_argument("kind", choices=["bn"])
    s.add_argument("input")
    s.add_argument("--via-bracket", action="store_true")
    s.add_argument("--p", type=int)
    s.add_argument("--H")
    s.add_argument("-o", "--output")

    s = sub.add_parser("bracket", help="bracket [F, G]")
    s.add_argument("F")
    s.add_argument("G")
    s.add_argument("--k1", type=int)
    s.add_argument("--k2", type=int)
    s.add_argument("-o", "--output")

    def hecke_args(s, need_g=True):
        if need_g:
            s.add_argument("--g", type=int, required=True)
        s.add_argument("--ell", type=int, required=True)
        s.add_argument("--op", default="T(ell)")
        s.add_argument("--lam")

    s = sub.add_parser("cosets", help="right coset representatives")
    hecke_args(s)
    s.add_argument("--oracle", action="store_true")

    s = sub.add_parser("hecke-apply", help="apply a Hecke operator")
    s.add_argument("input")
    hecke_args(s, need_g=False)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--tau-out", type=int)
    s.add_argument("-o", "--output")

    s = sub.add_parser("commute-check", help="Hecke operators against the theta operator")
    s.add_argument("input", nargs="?")
    s.add_argument("--g", type=int)
    s.add_argument("--p", type=int)
    s.add_argument("--ell", type=int, required=True)
    s.add_argument("--op", default="T(ell)")
    s.add_argument("--lam")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--tau-out", type=int)

    s = sub.add_parser("satake-verify", help="replay the twisting argument on random data")
    s.add_argument("--g", type=int, required=True)
    s.add_argument("--ell", type=int, required=True)
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--lam", required=True)
    s.add_argument("--trials", type=int, default=1)
    s.add_argument("--table")

    s = sub.add_parser("selftest", help="run the acceptance suite")
    s.add_argument("--quick", action="store_true")
    return ap


def run(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        seed = _seed(args)
        handlers = {
            "rootdatum": cmd_rootdatum,
            "dominance": cmd_dominance,
            "clifford-eval": cmd_clifford,
            "qexp": cmd_qexp,
            "theta": cmd_theta,
            "bracket": cmd_bracket,
            "cosets": cmd_cosets,
            "hecke-apply": cmd_hecke_apply,
        }
        if args.command in handlers:
            handlers[args.command](args)
            return 0
        seeded = {"commute-check": cmd_commute_check, "satake-verify": cmd_satake_verify, "selftest": cmd_selftest}
        return seeded[args.command](args, seed)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ZeroDivisionError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
