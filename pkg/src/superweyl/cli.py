"""Command-line front end: ``superweyl <command> [flags]``.

Every command prints a JSON report (to stdout, or to ``--out``) and a short
human summary on stderr.  Exit status is 0 when every check passes, 1 on a
verification failure and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Callable, Dict, List, Optional

from gmpy2 import mpq

from . import verify as V
from .realizations import ALGEBRAS, spo_in_fields

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _mu(text: str):
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")
    return mpq(value.numerator, value.denominator)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="superweyl",
                                     description="Exact checks of matrix and symbol realizations of "
                                                 "superconformal algebras over the Weyl algebra.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, algebra=False, n=False):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--window", type=int, default=3, help="mode window W (default 3)")
        p.add_argument("--depth", type=int, default=6, help="generation depth D (default 6)")
        p.add_argument("--tau-floor", type=int, default=-8, help="tau truncation floor (default -8)")
        p.add_argument("--mu", type=_mu, default=mpq(1, 2), help="module parameter (default 1/2)")
        p.add_argument("--out", help="write the report here instead of stdout")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        if algebra:
            p.add_argument("--algebra", choices=ALGEBRAS, default=None)
        if n:
            p.add_argument("--N", type=int, default=None)
        return p

    add("verify-axioms", "Weyl, Clifford and super Jacobi axioms")
    add("verify-k2", "closure, Virasoro relation and sigma homomorphism for K(2)")
    add("verify-k4hat", "closure of the 16 K4hat families with central terms")
    add("verify-ck6", "closure of the 32 CK6 families and the named CK6 identities")
    add("verify-cocycle", "central values of the K4hat brackets")
    add("verify-modules", "representation law on V^mu", algebra=True)
    add("verify-spo", "sl(2) relations and spo(2|2N) closure", n=True)
    add("generate", "bracket closure of spo(2|2N) and the loop algebra", n=True)
    add("export-tables", "serialize a bracket table", algebra=True).add_argument(
        "--picture", choices=("matrix", "symbol"), default="matrix")
    return parser


def _validate(args) -> None:
    if args.window < 1:
        raise UsageError("--window must be >= 1")
    if args.depth < 1:
        raise UsageError("--depth must be >= 1")
    if args.tau_floor > -2:
        raise UsageError("--tau-floor must be <= -2")
    if args.command in ("verify-k2", "verify-k4hat", "verify-ck6", "verify-cocycle", "export-tables") \
            and args.window < 2:
        raise UsageError("bracket tables need --window >= 2")
    if args.command == "verify-modules" and args.mu != 0 and args.mu.denominator == 1:
        raise UsageError("--mu must be non-integer or 0")
    if getattr(args, "N", None) is not None and args.N < 1:
        raise UsageError("--N must be >= 1")


def _table_summary(table: V.BracketTable) -> Dict:
    return {"pairs": len(table.entries), "closed": table.passed, "failures": table.failures[:20]}


def cmd_verify_axioms(args) -> Dict:
    res = V.verify_axioms()
    return {"checks": res, "passed": all(v["failures"] == 0 for v in res.values())}


def cmd_verify_k2(args) -> Dict:
    table = V.bracket_table("K2", args.window)
    vir = V.virasoro_failures(table)
    sigma = V.k2_sigma_check(args.window)
    return {"closure": _table_summary(table), "[L_n, L_m] = (m-n) L_{n+m}": {"failures": vir},
            "sigma{A, B} = [sigma A, sigma B]": {"failures": sigma},
            "passed": table.passed and not vir and not sigma}


def cmd_verify_k4hat(args) -> Dict:
    table = V.bracket_table("K4hat", args.window)
    report = V.cocycle_report(table)
    return {"closure": _table_summary(table), "central terms": report["values"],
            "central mismatches": report["mismatches"], "passed": report["passed"]}


def cmd_verify_ck6(args) -> Dict:
    table = V.bracket_table("CK6", args.window)
    spo = [{"element": lab, "holds": a == b} for lab, a, b in spo_in_fields("CK6")]
    ident = [{"identity": name, "holds": ok} for name, ok in V.cycle_identity_checks(args.window)]
    central = sorted(f"[{e.a}_{e.n}, {e.b}_{e.k}]" for e in table.entries if e.central)
    return {"closure": _table_summary(table), "rho(v)^+- as fields": spo,
            "[J~^{ij}_n, rho(eta_k)^+] = -n I^k_{n+1}, [J^{ij}_n, rho(eta_k)^+] = -n I_{n+1}": ident,
            "central terms": central,
            "passed": table.passed and all(x["holds"] for x in spo + ident) and not central}


def cmd_verify_cocycle(args) -> Dict:
    table = V.bracket_table("K4hat", args.window)
    report = V.cocycle_report(table)
    report["formulas"] = ["c(L_n, G^3_k) = -n delta_{n+k,0}", "c(X^i_n, G^j_k) = (-1)^j delta_{n+k,0}, i != j",
                          "c(Q_n, G^0_k) = delta_{n+k,0}"]
    return report


def cmd_verify_modules(args) -> Dict:
    algebras = [args.algebra] if args.algebra else ["K4hat", "CK6"]
    if "K2" in algebras:
        raise UsageError("module actions are tabulated for K4hat and CK6")
    out = {"law": "A_n (B_k v) - (-1)^{p(A)p(B)} B_k (A_n v) = [A_n, B_k] v", "mu": str(args.mu)}
    ok = True
    for alg in algebras:
        bad = V.module_representation_check(alg, args.mu, min(args.window, 2))
        out[alg] = {"failures": bad[:20], "failure_count": len(bad)}
        ok = ok and not bad
    out["passed"] = ok
    return out


def cmd_verify_spo(args) -> Dict:
    Ns = [args.N] if args.N else [1, 2, 3, 4]
    rows = [V.sl2_spo_checks(N) for N in Ns]
    ok = all(all(r["relations"].values()) and r["closed"] and [r["even_dim"], r["odd_dim"]] == r["expected"]
             for r in rows)
    symbols = {}
    for N in Ns:
        if N <= 3:
            res = V.sp_symbol_consistency(N)
            symbols[str(N)] = res
            ok = ok and res["passed"]
    return {"sl2 and spo(2|2N)": rows, "symbol generators vs rho images": symbols, "passed": ok}


def cmd_generate(args) -> Dict:
    N = args.N or 4
    report = V.generate_closure(N, args.depth, args.window, keep_spans=(N == 4))
    doc = report.to_json()
    if N == 4:
        checks = V.n4_identity_checks(args.window, report.spans)
        doc["identities"] = [{"identity": name, "holds": ok} for name, ok in checks]
        doc["passed"] = all(report.targets.values()) and all(ok for _, ok in checks)
    elif report.family_match is not None:
        doc["passed"] = bool(report.family_match)
    else:
        doc["passed"] = True
    return doc


def cmd_export_tables(args):
    algebra = args.algebra or "K2"
    table = V.bracket_table(algebra, args.window, picture=args.picture, floor=args.tau_floor)
    return V.export_tables(table, args.format), table.passed


COMMANDS: Dict[str, Callable] = {
    "verify-axioms": cmd_verify_axioms, "verify-k2": cmd_verify_k2, "verify-k4hat": cmd_verify_k4hat,
    "verify-ck6": cmd_verify_ck6, "verify-cocycle": cmd_verify_cocycle, "verify-modules": cmd_verify_modules,
    "verify-spo": cmd_verify_spo, "generate": cmd_generate,
}


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run_command(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        _validate(args)
        if args.command == "export-tables":
            text, passed = cmd_export_tables(args)
        else:
            if args.format == "csv":
                raise UsageError("--format csv is only available for export-tables")
            doc = COMMANDS[args.command](args)
            doc = {"command": args.command, **doc}
            text = json.dumps(doc, indent=1, sort_keys=True, default=str) + "\n"
            passed = doc["passed"]
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"superweyl: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(text, args.out)
    print(f"{args.command}: {'PASS' if passed else 'FAIL'}", file=sys.stderr)
    return EXIT_OK if passed else EXIT_FAIL


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
