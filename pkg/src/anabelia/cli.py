"""Command-line front end.

Exit codes: 0 success, 1 verified rejection of an oracle, 2 budget, parse
or validation errors.  Reports go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import sys

from . import __version__
from .arith import factorint, is_prime
from .config import CurveConfig, parse_curve_spec
from .counting import (divisor_class_sequence, exact_residue_count, is_principal,
                       lefschetz_consistency, unit_image_lattice)
from .errors import (AnabeliaError, BudgetExceeded, OracleRejected, ParseError,
                     TowerExhausted, ValidationError)
from .field import gf
from .function_field import ConstantTower, ExceptionalSet, Mobius, Place
from .hyperelliptic import p_primary_exponent, predicted_count, torsion_probe
from .poly import Polynomial
from .recovery import (ADVERSARIAL_KINDS, adversarial_oracle, oracle_from_embedding,
                       oracle_from_params, random_oracle, recover_field_embedding,
                       verify_embedding)
from .report import Timer, emit, make_report

EXIT_OK, EXIT_REJECTED, EXIT_ERROR = 0, 1, 2


class _Rejected(Exception):
    def __init__(self, report):
        self.report = report


# --- input helpers ---------------------------------------------------------------------

def load_config(path: str) -> CurveConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as ex:
        raise ValidationError(f"cannot read {path}: {ex.strerror}") from None
    return parse_curve_spec(text).with_budget_env()


def parse_places(handle, text: str) -> list:
    """Semicolon-separated places: inf, pt:a (line) or pt:x,y (curve), poly:[c0,...]."""
    out = []
    F = handle.field
    for tok in filter(None, (s.strip() for s in text.split(";"))):
        if tok == "inf":
            out.append(Place.infinite(F) if handle.curve is None else handle.curve.places_of_degree(1)[0])
        elif tok.startswith("pt:"):
            coords = _int_list(tok[3:], tok)
            if handle.curve is None:
                if len(coords) != 1:
                    raise ValidationError(f"{tok}: a point of the line has one coordinate")
                out.append(Place.linear(F, F.coerce(coords[0])))
            else:
                if len(coords) != 2:
                    raise ValidationError(f"{tok}: a curve point needs x,y")
                try:
                    out.append(handle.curve.place_at_point(*coords))
                except ValueError as ex:
                    raise ValidationError(str(ex)) from None
        elif tok.startswith("poly:") and handle.curve is None:
            codes = json.loads(tok[5:])
            if not isinstance(codes, list) or not all(isinstance(c, int) for c in codes):
                raise ValidationError(f"{tok}: expected an integer list")
            pi = Polynomial(F, [F.coerce(c) for c in codes])
            if not pi.is_monic() or not pi.is_irreducible():
                raise ValidationError(f"{tok}: not monic irreducible")
            out.append(Place(F, pi))
        else:
            raise ValidationError(f"cannot parse place {tok!r}")
    return out


def _int_list(text: str, what: str) -> list:
    try:
        return [int(c) for c in text.split(",")]
    except ValueError:
        raise ValidationError(f"{what}: expected comma-separated integers") from None


def parse_sigma(text: str) -> list:
    try:
        sigma = sorted({int(s) for s in text.split(",") if s.strip()})
    except ValueError:
        raise ValidationError(f"bad prime list {text!r}") from None
    if not sigma or not all(is_prime(r) for r in sigma):
        raise ValidationError(f"sigma {text!r} must be a nonempty list of primes")
    return sigma


def _require_curve(handle):
    if handle.curve is None:
        raise ValidationError("this command needs a hyperelliptic model")
    return handle.curve


# --- commands ---------------------------------------------------------------------------------

def cmd_zeta(args, timer):
    cfg = load_config(args.curve)
    h = cfg.handle()
    g = h.genus
    m_max = args.m_max if args.m_max is not None else 2 * g + 2
    with timer.section("zeta"):
        if h.curve is None:
            L = [1]
            rows = lefschetz_consistency(h, m_max, cfg.budget)
            res = {"L": L, "genus": 0, "counts": [r[1] for r in rows]}
            ok = True
        else:
            Lp = h.curve.l_polynomial(cfg.budget)
            counts = [h.count(m, cfg.budget, args.threads) for m in range(1, m_max + 1)]
            pred = [predicted_count(Lp, m) for m in range(1, m_max + 1)]
            fe, wb = Lp.functional_equation_holds(), Lp.weil_bound_holds()
            ok = counts == pred and fe and wb
            res = {"L": list(Lp.coeffs), "genus": g, "counts": counts, "predicted": pred,
                   "functional_equation": fe, "weil_bound": wb, "jacobian_order": Lp(1)}
    return cfg, {}, res, ok


def cmd_count(args, timer):
    cfg = load_config(args.curve)
    h = cfg.handle()
    with timer.section("count"):
        n = h.count(args.m, cfg.budget, args.threads)
    return cfg, {"m": args.m}, {"count": n}, True


def cmd_residue_count(args, timer):
    cfg = load_config(args.curve)
    h = cfg.handle()
    with timer.section("residue-count"):
        n = exact_residue_count(h, args.N, cfg.budget)
    return cfg, {"N": args.N}, {"count": n, "moebius_equals_direct": True}, True


def cmd_jacobian(args, timer):
    cfg = load_config(args.curve)
    C = _require_curve(cfg.handle())
    with timer.section("jacobian"):
        N = C.jacobian_order()
        elems = C.enumerate_jacobian(cfg.class_cap)
        primes = sorted(factorint(N)) if N > 1 else []
        inv = []
        if primes:
            r = divisor_class_sequence(cfg.handle(), [], primes, cap=cfg.class_cap)
            inv = r.image_invariants if r.surjective else None
        exps = {str(r): p_primary_exponent(C, r, cfg.class_cap) for r in primes}
    res = {"order": N, "enumerated": len(elems), "invariant_factors": inv,
           "primary_exponents": exps}
    return cfg, {}, res, len(elems) == N


def cmd_torsion_probe(args, timer):
    cfg = load_config(args.curve)
    C = _require_curve(cfg.handle())
    sigma = parse_sigma(args.sigma)
    with timer.section("probe"):
        pr = torsion_probe(C, args.m, sigma, cfg.budget, args.threads)
    res = {"candidate_pairs": [[repr(P), repr(Q)] for P, Q in pr.pairs],
           "identity_pairs": [[repr(P), repr(Q)] for P, Q in pr.identity_pairs],
           "count": len(pr.pairs), "points": pr.points, "group_order": pr.group_order}
    return cfg, {"m": args.m, "sigma": sigma}, res, True


def cmd_lattice(args, timer):
    cfg = load_config(args.curve)
    h = cfg.handle()
    S = parse_places(h, args.places)
    with timer.section("lattice"):
        basis = unit_image_lattice(h, S, cfg.class_cap)
        principal = [is_principal(h, S, v) for v in basis]
    return cfg, {"places": [repr(P) for P in S]}, {"basis": basis, "principal": principal}, all(principal)


def cmd_class_sequence(args, timer):
    cfg = load_config(args.curve)
    h = cfg.handle()
    E = parse_places(h, args.E or "")
    sigma = parse_sigma(args.sigma)
    with timer.section("class-sequence"):
        r = divisor_class_sequence(h, E, sigma, cap=cfg.class_cap)
    res = {"jacobian_order": r.jacobian_order, "jacobian_sigma_order": r.jacobian_sigma_order,
           "image_order": r.image_order, "image_invariants": r.image_invariants,
           "quotient_invariants": r.quotient_invariants, "surjective": r.surjective,
           "checks": r.checks}
    return cfg, {"E": [repr(P) for P in E], "sigma": sigma}, res, all(r.checks.values())


def _field_from_q(q: int):
    f = factorint(q)
    if len(f) != 1:
        raise ValidationError(f"--field {q} is not a prime power")
    (p, d), = f.items()
    return gf(p, d)


def build_oracle(args):
    if args.params:
        try:
            with open(args.params, encoding="utf-8") as fh:
                params = json.load(fh)
        except OSError as ex:
            raise ValidationError(f"cannot read {args.params}: {ex.strerror}") from None
        except json.JSONDecodeError as ex:
            raise ParseError(f"params: {ex.msg}", ex.lineno, ex.colno) from None
        try:
            return oracle_from_params(params)
        except AnabeliaError:
            raise
        except (KeyError, TypeError, ValueError) as ex:
            raise ValidationError(f"bad oracle parameters: {ex!r}") from None
    if args.oracle == "random":
        return random_oracle(args.field, args.s, args.seed)
    F = _field_from_q(args.field)
    tower = ConstantTower(F, 3 if F.p == 2 else 2)
    E = ExceptionalSet(parse_places(_LineHandle(F), args.E or ""), field=F)
    if args.mobius:
        coeffs = _int_list(args.mobius, "--mobius")
        if len(coeffs) != 4:
            raise ValidationError("--mobius needs four coefficients a,b,c,d")
        M = Mobius.of(F, *coeffs)
    elif args.oracle == "shift":
        M = Mobius.of(F, 1, 1, 0, 1)
    else:
        M = Mobius.identity(F)
    s = args.s if args.oracle != "frobenius" else max(args.s, 1)
    if args.oracle in ADVERSARIAL_KINDS:
        return adversarial_oracle(args.oracle, tower, args.a, M, s, E, seed=args.seed, k=args.k)
    return oracle_from_embedding(tower, args.a, M, s, E)


class _LineHandle:
    def __init__(self, F):
        self.field = F
        self.curve = None


def cmd_recover(args, timer):
    oracle = build_oracle(args)
    inputs = {"oracle": oracle.params, "trials": args.trials, "seed": args.seed,
              "level_cap": args.level_cap}
    try:
        with timer.section("recover"):
            emb, tr = recover_field_embedding(oracle, args.level_cap, args.seed)
        with timer.section("verify"):
            vr = verify_embedding(emb, oracle, args.trials, args.seed)
    except OracleRejected as ex:
        res = {"rejected": True, "reason": str(ex), "error": type(ex).__name__}
        raise _Rejected(("recover", inputs, res, False, [ex.witness])) from None
    res = {"rejected": False, "embedding": emb.to_dict(), "verify": vr.to_dict()}
    if args.transcript:
        res["transcript"] = tr.to_dict()
    return None, inputs, res, vr.passed


def cmd_selftest(args, timer):
    from .selftest import run_selftest

    with timer.section("selftest"):
        rows = run_selftest(quick=args.quick)
    ok = all(r["passed"] for r in rows)
    return None, {"quick": args.quick}, {"checks": rows}, ok


COMMANDS = {
    "zeta": cmd_zeta, "count": cmd_count, "residue-count": cmd_residue_count,
    "jacobian": cmd_jacobian, "torsion-probe": cmd_torsion_probe, "lattice": cmd_lattice,
    "class-sequence": cmd_class_sequence, "recover": cmd_recover, "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="anabelia", description="Curves over finite fields: "
                                 "counting, Jacobians, and recovery of field embeddings.")
    ap.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--no-timings", action="store_true", help="omit timings from the report")
    common.add_argument("--threads", type=int, default=1, help="worker threads for enumeration")
    sub = ap.add_subparsers(dest="command", required=True)

    def curve_cmd(name, help_):
        p = sub.add_parser(name, help=help_, parents=[common])
        p.add_argument("--curve", required=True, help="curve spec file")
        return p

    p = curve_cmd("zeta", "fit the L-polynomial and compare with naive counts")
    p.add_argument("--m-max", type=int, default=None)
    p = curve_cmd("count", "number of points over F_{q^m}")
    p.add_argument("--m", type=int, default=1)
    p = curve_cmd("residue-count", "points with exact residue field F_{q^N}")
    p.add_argument("--N", type=int, required=True)
    curve_cmd("jacobian", "enumerate J(F_q), structure and primary exponents")
    p = curve_cmd("torsion-probe", "pairs of points with sigma-power torsion difference")
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--sigma", required=True, help="comma-separated primes")
    p = curve_cmd("lattice", "lattice of principal divisors supported on places")
    p.add_argument("--places", required=True, help="e.g. 'inf;pt:2,1'")
    p = curve_cmd("class-sequence", "divisor classes supported off E")
    p.add_argument("--E", default="", help="places, ';'-separated")
    p.add_argument("--sigma", required=True)

    p = sub.add_parser("recover", help="recover a field embedding from an oracle", parents=[common])
    p.add_argument("--oracle", default="identity",
                   choices=["identity", "shift", "frobenius", "random", *ADVERSARIAL_KINDS])
    p.add_argument("--field", type=int, default=5, help="q = p^d")
    p.add_argument("--s", type=int, default=0, help="Frobenius power")
    p.add_argument("--a", type=int, default=0, help="Frobenius exponent on constants")
    p.add_argument("--mobius", default=None, help="a,b,c,d for t -> (at+b)/(ct+d)")
    p.add_argument("--E", default="", help="exceptional places of X, ';'-separated")
    p.add_argument("--k", type=int, default=None, help="exponent for nonadditive-constants")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--level-cap", type=int, default=4)
    p.add_argument("--params", default=None, help="JSON oracle parameters to replay")
    p.add_argument("--transcript", action="store_true", help="include the recovery transcript")

    p = sub.add_parser("selftest", help="run the built-in invariant suite", parents=[common])
    p.add_argument("--quick", action="store_true")
    return ap


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    ap = build_parser()
    try:
        with contextlib.redirect_stderr(stderr), contextlib.redirect_stdout(stdout):
            args = ap.parse_args(argv)
    except SystemExit as ex:
        return EXIT_ERROR if ex.code else EXIT_OK
    timer = Timer()
    timings = None if args.no_timings else timer.sections
    try:
        cfg, extra, res, ok = COMMANDS[args.command](args, timer)
    except _Rejected as rj:
        command, inputs, res, ok, wit = rj.report
        emit(make_report(command, inputs, res, False, wit, timings), stdout)
        return EXIT_REJECTED
    except (ParseError, ValidationError, BudgetExceeded, TowerExhausted, AnabeliaError,
            ValueError) as ex:
        # library preconditions raise ValueError; on the command line they are bad input
        print(f"anabelia: {type(ex).__name__}: {ex}", file=stderr)
        err = {"error": type(ex).__name__, "message": str(ex)}
        if isinstance(ex, ParseError):
            err.update(line=ex.line, column=ex.column)
        emit(make_report(args.command, {}, err, False, [], timings), stdout)
        return EXIT_ERROR
    inputs = dict(extra)
    if cfg is not None:
        inputs["spec"] = cfg.canonical()
    emit(make_report(args.command, inputs, res, ok, [], timings), stdout)
    return EXIT_OK if ok else EXIT_REJECTED


if __name__ == "__main__":
    sys.exit(main())
