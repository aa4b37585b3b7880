import random

import pytest

from superweyl.realizations import family_names, field, k2_field
from superweyl.scalars import ONE, ZERO
from superweyl.supermatrix import SuperMatrix, superbracket
from superweyl.verify import (BracketTable, bracket_table, closure_check, cocycle_extract, cocycle_report,
                              cycle_identity_checks, expected_k4hat_central, export_tables, generate_closure,
                              k2_sigma_check, n4_identity_checks, parse_table, random_homogeneous_matrix,
                              sp_symbol_consistency, span_coordinates, virasoro_failures)
from superweyl.weyl import WeylElement


def test_span_coordinates_examples():
    x = k2_field("G", 1)
    assert span_coordinates(x, [x]) == [ONE]
    br = superbracket(k2_field("L", 1), k2_field("L", -1))
    coords = span_coordinates(br, [k2_field("L", 0), k2_field("H", 0)])
    assert coords is not None and coords[0] == -2
    assert k2_field("L", 0).scale(coords[0]) + k2_field("H", 0).scale(coords[1]) == br
    off = SuperMatrix(1, 1, {(0, 0): WeylElement({(5, 3): 1})})
    assert span_coordinates(off, [k2_field("L", 0), k2_field("H", 0)]) is None


def test_k2_table():
    table = bracket_table("K2", 2)
    assert table.passed and not virasoro_failures(table)
    assert all(not e.central for e in table.entries)
    assert len(table.entries) == 16 * 19


def test_k4hat_central_values():
    table = bracket_table("K4hat", 2)
    assert table.passed
    c = table.central_values()
    assert c[("L", "G^3")] == {n: -n for n in range(-2, 3) if n}
    assert c[("Q", "G^0")] == {n: 1 for n in range(-2, 3)}
    assert cocycle_report(table)["passed"]


def test_expected_central_is_super_skew():
    assert expected_k4hat_central("G^3", 2, "L", -2) == -2
    assert expected_k4hat_central("G^0", 1, "Q", -1) == -1
    assert expected_k4hat_central("G^2", 0, "X^1", 0) == 1
    assert expected_k4hat_central("L", 1, "G^3", 0) == 0


def test_cocycle_extract():
    c, rest = cocycle_extract(SuperMatrix.identity(2, 2))
    assert c == ONE and not rest
    for n in (-2, 1, 3):
        c, rest = cocycle_extract(superbracket(field("K4hat", "X^1", n), field("K4hat", "G^2", -n)))
        assert c == ONE
        assert cocycle_extract(rest)[0] == ZERO
    rng = random.Random(1)
    for _ in range(10):
        a, b = rng.choice(family_names("K2")), rng.choice(family_names("K2"))
        n = rng.randint(-3, 3)
        c, _ = cocycle_extract(superbracket(k2_field(a, n), k2_field(b, -n)), "K2")
        assert c == ZERO


def test_cocycle_extract_rejects_off_span():
    with pytest.raises(ValueError):
        cocycle_extract(SuperMatrix(2, 2, {(0, 0): WeylElement({(1, 2): 1, (0, 1): 1})}))


def test_closure_negative_control():
    report = closure_check("CK6", 2, omit=["T^1"])
    assert not report["passed"] and report["offending_count"] > 0


def test_fits_reproduce_structure_constants():
    table = bracket_table("K2", 3)
    assert table.passed and table.fits
    assert not table.failures


def test_k2_sigma():
    assert k2_sigma_check(2) == []


@pytest.mark.parametrize("N", [1, 2, 3])
def test_symbol_generators_match_rho_images(N):
    assert sp_symbol_consistency(N)["passed"]


def test_cycle_identities():
    assert all(ok for _, ok in cycle_identity_checks(2))


def test_n4_identities_without_spans():
    checks = n4_identity_checks(1)
    assert checks and all(ok for _, ok in checks)
    assert any(name.startswith("[rho(xi_3)^+, t^1 E1^(1,8)]") for name, _ in checks)


def test_generation_n3_reproduces_family_span():
    report = generate_closure(3, 4, 3)
    assert report.family_match
    assert not all(report.targets.values())


@pytest.mark.parametrize("N", [1, 2])
def test_generation_monotone_and_idempotent(N):
    short, long = generate_closure(N, 3, 2), generate_closure(N, 4, 2)
    totals = [sum(d.values()) for d in long.dims_by_depth]
    assert totals == sorted(totals)
    assert short.dims_by_depth == long.dims_by_depth[:len(short.dims_by_depth)]
    assert long.family_match and long.targets == generate_closure(N, 6, 2).targets


def test_export_empty_table():
    empty = BracketTable("K2", 2, "matrix", (), [])
    for fmt in ("json", "csv"):
        assert parse_table(export_tables(empty, fmt), fmt) == empty


@pytest.mark.parametrize("fmt", ["json", "csv"])
def test_export_round_trip_and_stability(fmt):
    table = bracket_table("K4hat", 2)
    doc = export_tables(table, fmt)
    assert parse_table(doc, fmt) == table
    assert export_tables(bracket_table("K4hat", 2), fmt) == doc


def test_bracket_table_needs_window_two():
    with pytest.raises(ValueError):
        bracket_table("K2", 1)


def test_random_matrices_respect_parity():
    rng = random.Random(3)
    for p in (0, 1):
        assert random_homogeneous_matrix(rng, 2, 2, p).parity in (("even",) if p == 0 else ("odd", "even"))
