import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from superweyl.clifford import xi
from superweyl.realizations import (TABLES, ModuleVector, UnknownFieldError, family, family_names, field,
                                    k2_field, k4hat_field, ck6_field, matrix_module_action, module_action,
                                    module_basis_labels, sigma_k2, spo_in_fields, symbol_module_action)
from superweyl.scalars import GaussianRational
from superweyl.supermatrix import SuperMatrix, superbracket
from superweyl.symbols import poisson_bracket, sym
from superweyl.weyl import WeylElement, t

HALF = mpq(1, 2)


def tdt(n):
    # t d t^n = t^{n+1} d + n t^n
    return WeylElement({(n + 1, 1): 1, (n, 0): n})


def euler(n):
    return WeylElement({(n + 1, 1): 1})


def test_family_counts():
    assert [len(family_names(a)) for a in ("K2", "K4hat", "CK6")] == [4, 16, 32]


@pytest.mark.parametrize("algebra", ["K2", "K4hat", "CK6"])
def test_parity_matches_symbol(algebra):
    for name in family_names(algebra):
        fam = family(algebra, name)
        assert fam.matrix(1).parity_bit == fam.parity
        assert field(algebra, name, 1, "symbol").parity == fam.parity


def test_k2_examples():
    assert k2_field("L", 0) == SuperMatrix.diagonal_blocks(1, 1, euler(0), euler(0))
    for n in (-2, 0, 3):
        assert k2_field("G~", n).entries == {(1, 0): t(n)}


@given(st.integers(-3, 3), st.integers(-3, 3))
def test_k2_sigma_compatibility(n, m):
    A, B = sym(1, n + 1, 1), sym(1, m, 0, xi(1))
    lhs = superbracket(sigma_k2(A), sigma_k2(B))
    assert lhs == sigma_k2(poisson_bracket(A, B)) == k2_field("G~", n + m).scale(m)


def test_k4hat_examples():
    for n in (-1, 0, 2):
        assert k4hat_field("Q", n).entries == {(0, 1): t(n).scale(-1)}
        L = k4hat_field("L", n)
        assert L.entries == {(0, 0): euler(n), (1, 1): tdt(n), (2, 2): euler(n), (3, 3): euler(n)}
    assert k4hat_field("G^3", 0) == SuperMatrix.identity(2, 2)


def test_ck6_examples():
    labels = module_basis_labels("CK6")
    ix = {lab: k for k, lab in enumerate(labels)}
    n = 2
    T1 = ck6_field("T^1", n).entries
    assert T1 == {(ix["v1"], ix["v1"]): t(n).scale(-1), (ix["v4"], ix["v4"]): t(n).scale(-1),
                  (ix["vh1"], ix["vh1"]): t(n), (ix["vh4"], ix["vh4"]): t(n)}
    L = ck6_field("L", n).entries
    assert all(L[(ix[f"v{i}"], ix[f"v{i}"])] == euler(n) for i in range(1, 5))
    assert all(L[(ix[f"vh{i}"], ix[f"vh{i}"])] == tdt(n) for i in range(1, 5))
    assert ck6_field("I", n).entries == {(ix["v4"], ix["vh4"]): t(n)}


def test_reversed_index_names():
    assert ck6_field("J^{21}", 1) == ck6_field("J^{12}", 1).scale(-1)
    with pytest.raises(UnknownFieldError):
        ck6_field("T^{11}", 0)
    with pytest.raises(UnknownFieldError):
        field("K4hat", "W", 0)


@pytest.mark.parametrize("algebra", ["K4hat", "CK6"])
def test_spo_generators_are_field_combinations(algebra):
    for label, rho_side, field_side in spo_in_fields(algebra):
        assert rho_side == field_side, label


def test_named_spo_identities():
    rows = {lab: (a, b) for lab, a, b in spo_in_fields("K4hat")}
    expected = k4hat_field("Y^1", 1) - k4hat_field("G^2", 1).scale(HALF)
    assert rows["rho(xi_1)^+"][0] == expected
    rows = {lab: (a, b) for lab, a, b in spo_in_fields("CK6")}
    assert rows["rho(eta_3)^-"][0] == ck6_field("G^3", -1) + ck6_field("S^3", -1).scale(HALF)


def test_module_action_examples():
    mu = HALF
    for label in ("v0", "v1", "v2"):
        v = ModuleVector.basis(label, 3, mu)
        assert module_action("K4hat", "L", 2, v) == ModuleVector(mu, {(label, 5): 3 + mu})
    v = ModuleVector.basis("v1", 3, mu)
    assert module_action("K4hat", "Y^2", 2, v) == ModuleVector(mu, {("v3", 5): -(2 + 3 + mu)})


def test_integer_mu_rejected():
    with pytest.raises(ValueError):
        module_action("K4hat", "L", 0, ModuleVector.basis("v0", 0, 1))


@pytest.mark.parametrize("algebra", ["K4hat", "CK6"])
def test_three_module_routes_agree(algebra):
    mu = HALF
    for name in family_names(algebra):
        for n in (-2, 0, 1):
            for label in module_basis_labels(algebra):
                for m in (-1, 2):
                    v = ModuleVector.basis(label, m, mu)
                    a = module_action(algebra, name, n, v)
                    assert a == symbol_module_action(algebra, name, n, v), (name, n, label, m)
                    assert a == matrix_module_action(algebra, name, n, v), (name, n, label, m)


def test_g_tilde_row_is_odd():
    # G~^i(v^j) must land in the other parity; a v^j -> v^k row would be even
    table, labels = TABLES["CK6"]
    parity = {lab: int(k >= len(labels) // 2) for k, lab in enumerate(labels)}
    for i, j, k in ((1, 2, 3), (2, 3, 1), (3, 1, 2)):
        rows = table[f"G~^{i}"]
        assert all(parity[src] != parity[dst] for src, dst, _, _ in rows)
        assert (f"v{j}", f"vh{k}", "m", 1) in rows
        assert parity[f"v{j}"] == parity[f"v{k}"]
    mu = HALF
    v = ModuleVector.basis("v2", 1, mu)
    assert symbol_module_action("CK6", "G~^1", 0, v) == ModuleVector(mu, {("vh3", 1): 1 + mu})
