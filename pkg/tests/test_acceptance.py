"""Acceptance criteria 1-9, each run at its stated window and time limit.

Every test appends a one-line PASS/FAIL record that the terminal summary prints.
"""

import json
import subprocess
import sys
import time
from contextlib import contextmanager

from gmpy2 import mpq

from superweyl.cli import EXIT_OK, run_command
from superweyl.realizations import spo_in_fields
from superweyl.verify import (bracket_table, cocycle_report, compare_tables, cycle_identity_checks,
                              generate_closure, k2_sigma_check, module_representation_check,
                              sl2_spo_checks, symbol_grading_checks, verify_axioms, virasoro_failures)

from conftest import ACCEPTANCE_LINES


@contextmanager
def criterion(number, title, limit):
    start = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        status = "PASS" if ok and elapsed < limit else "FAIL"
        line = f"criterion {number}: {status}  {title}  ({elapsed:.1f} s, limit {limit} s)"
        ACCEPTANCE_LINES.append(line)
        print(line)
    assert elapsed < limit, f"criterion {number} took {elapsed:.1f} s"


def test_criterion_1_axioms():
    with criterion(1, "Weyl, Clifford and super Jacobi axioms", 30):
        res = verify_axioms(samples=1000, seed=0)
        assert res["superbracket jacobi"]["samples"] >= 1000
        assert res["poisson jacobi"]["samples"] >= 1000
        assert res["clifford relations"]["samples"] == sum((2 * N) ** 2 for N in range(1, 5))
        assert all(v["failures"] == 0 for v in res.values()), res


def test_criterion_2_sl2_and_spo():
    with criterion(2, "sl(2) relations and spo(2|2N) closure, N = 1..4", 60):
        for N in range(1, 5):
            r = sl2_spo_checks(N)
            assert all(r["relations"].values()), r
            assert r["closed"], N
            assert [r["even_dim"], r["odd_dim"]] == [3 + N * (2 * N - 1), 4 * N]


def test_criterion_3_k2():
    with criterion(3, "K(2) closure at W=4, Virasoro relation, sigma homomorphism", 30):
        table = bracket_table("K2", 4)
        assert table.passed, table.failures
        assert virasoro_failures(table) == []
        assert all(not e.central for e in table.entries)
        assert k2_sigma_check(4) == []


def test_criterion_4_k4hat():
    with criterion(4, "K'(4)^ closure of 16 families at W=3 with central values", 300):
        table = bracket_table("K4hat", 3)
        assert len(table.families) == 16
        assert table.passed, table.failures
        report = cocycle_report(table)
        assert report["passed"], report["mismatches"]
        pairs = {(row["pair"]) for row in report["values"]}
        assert {"[L_1, G^3_-1]", "[Q_0, G^0_0]", "[X^1_2, G^2_-2]", "[X^2_-3, G^1_3]"} <= pairs


def test_criterion_5_ck6():
    with criterion(5, "CK6 closure of 32 families at W=3 and the named identities", 900):
        table = bracket_table("CK6", 3)
        assert len(table.families) == 32
        assert table.passed, table.failures
        assert all(not e.central for e in table.entries)
        for label, rho_side, field_side in spo_in_fields("CK6"):
            assert rho_side == field_side, label
        checks = cycle_identity_checks(3)
        assert len(checks) == 3 * 7 * 2
        assert all(ok for _, ok in checks), [name for name, ok in checks if not ok]


def test_criterion_6_modules():
    with criterion(6, "representation law on V^mu at mu = 1/2 and 0", 600):
        for algebra in ("K4hat", "CK6"):
            for mu in (mpq(1, 2), mpq(0)):
                bad = module_representation_check(algebra, mu, window=2)
                assert bad == [], (algebra, mu, bad[:5])


def test_criterion_7_generation(tmp_path):
    with criterion(7, "generation: family spans for N=1,2,3, full band coverage for N=4 at depth 6", 1800):
        for N in (1, 2, 3):
            report = generate_closure(N, 6, 3)
            assert report.family_match, N
            assert not all(report.targets.values()), N
        out = tmp_path / "n4.json"
        code = run_command(["generate", "--N", "4", "--depth", "6", "--window", "2", "--out", str(out)])
        doc = json.loads(out.read_text())
        assert all(doc["targets"].values()), doc["targets"]
        assert doc["full_depth"] is not None and doc["full_depth"] <= 6
        assert all(row["holds"] for row in doc["identities"]), doc["identities"]
        assert len(doc["e1_first_depth"]) == 64
        assert code == EXIT_OK


def test_criterion_8_symbols():
    with criterion(8, "symbol picture matches the matrix picture at W=2; grading law", 600):
        for algebra in ("K4hat", "CK6"):
            mat = bracket_table(algebra, 2)
            sym = bracket_table(algebra, 2, picture="symbol", floor=-8)
            assert mat.passed and sym.passed
            assert compare_tables(mat, sym) == []
        res = symbol_grading_checks(samples=1000, seed=0)
        assert all(v["samples"] >= 1000 and v["failures"] == 0 for v in res.values()), res


def _run_cli(args, path):
    subprocess.run([sys.executable, "-m", "superweyl.cli", *args, "--out", str(path)], check=True,
                   capture_output=True)
    return path.read_bytes()


def test_criterion_9_determinism(tmp_path):
    with criterion(9, "two runs give byte-identical JSON", 300):
        commands = [
            ["export-tables", "--algebra", "CK6", "--window", "2"],
            ["verify-cocycle", "--window", "3"],
            ["generate", "--N", "3", "--depth", "4", "--window", "3"],
        ]
        for k, args in enumerate(commands):
            first = _run_cli(args, tmp_path / f"{k}a.json")
            second = _run_cli(args, tmp_path / f"{k}b.json")
            assert first == second, args
            json.loads(first)
