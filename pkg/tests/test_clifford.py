import itertools

import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from superweyl.clifford import (CliffordElement, clifford_mul, eta, fermion_basis, iota, loop_so_element,
                                rho_matrix, rho_pm, sl2_generators, so_basis_labels, spo_basis,
                                super_commutator, xi)
from superweyl.scalars import ONE, GaussianRational, LinearSpan
from superweyl.supermatrix import mat_mul, superbracket
from superweyl.weyl import WeylElement, t

from strategies import gaussians

X1, X2, E1 = (CliffordElement.generator(g) for g in (xi(1), xi(2), eta(1)))
HALF = GaussianRational(mpq(1, 2))


def test_eta_xi_relation():
    assert clifford_mul(E1, X1) == CliffordElement.scalar(1) - clifford_mul(X1, E1)


def test_xi_squares_to_zero():
    assert not clifford_mul(X1, X1)


def test_eta_on_xi_pair():
    assert clifford_mul(E1, clifford_mul(X1, X2)) == X2 + CliffordElement.product(xi(1), xi(2), eta(1))


def test_iota_values():
    assert iota("xi_1 eta_1") == clifford_mul(X1, E1) - CliffordElement.scalar(HALF)
    assert iota("C") == CliffordElement.scalar(1)
    assert super_commutator(iota("xi_1 eta_1"), iota("xi_1")) == X1
    with pytest.raises(ValueError):
        iota("xi_1 xi_1")


@pytest.mark.parametrize("N", [1, 2, 3])
def test_iota_preserves_brackets(N):
    labels = so_basis_labels(N) + [f"xi_{i}" for i in range(1, N + 1)] + \
        [f"eta_{i}" for i in range(1, N + 1)] + ["C"]
    span = LinearSpan(track=False)
    for lab in labels:
        span.add(iota(lab).terms)
    for a, b in itertools.product(labels, repeat=2):
        br = super_commutator(iota(a), iota(b))
        assert span.contains(br.terms), (a, b)
        if a.count(" ") == 0 and b.count(" ") == 0 and "C" not in (a, b):
            paired = a[:2] != b[:2] and a[-1] == b[-1]
            assert br == CliffordElement.scalar(1 if paired else 0)


def test_rho_n1_shapes():
    assert rho_matrix(X1, 1).entries == {(1, 0): ONE}
    assert rho_matrix(E1, 1).entries == {(0, 1): ONE}


def test_rho_pm_n1_entries():
    assert rho_pm("xi_1", 1, 1).entries == {(1, 0): t(1)}
    minus = WeylElement({(0, 1): 1, (-1, 0): -HALF})
    assert rho_pm("eta_1", -1, 1).entries == {(0, 1): minus}
    plus = WeylElement({(2, 1): 1, (1, 0): HALF})
    assert rho_pm("eta_1", 1, 1).entries == {(0, 1): plus}


def _clifford(N, coeffs):
    gens = [xi(i) for i in range(1, N + 1)] + [eta(i) for i in range(1, N + 1)]
    out = CliffordElement()
    for c, size in zip(coeffs, itertools.cycle(range(3))):
        out = out + CliffordElement.product(*gens[:size]).scale(c)
        gens = gens[1:] + gens[:1]
    return out


@given(st.integers(1, 3), st.lists(gaussians, min_size=1, max_size=5), st.lists(gaussians, min_size=1, max_size=5))
def test_rho_is_multiplicative(N, a, b):
    x, y = _clifford(N, a), _clifford(N, b)
    assert rho_matrix(clifford_mul(x, y), N) == mat_mul(rho_matrix(x, N), rho_matrix(y, N))


@pytest.mark.parametrize("N", [1, 2, 3])
def test_rho_is_onto(N):
    span = LinearSpan(track=False)
    gens = [xi(i) for i in range(1, N + 1)] + [eta(i) for i in range(1, N + 1)]
    for r in range(len(gens) + 1):
        for word in itertools.combinations(gens, r):
            span.add(rho_matrix(CliffordElement.product(*word), N).to_vector())
    assert span.dim == 4 ** N


@pytest.mark.parametrize("N", [1, 2, 3, 4])
def test_sl2_relations(N):
    E, H, F = sl2_generators(N)
    assert superbracket(H, E) == E.scale(2)
    assert superbracket(H, F) == F.scale(-2)
    assert superbracket(E, F) == H


def test_spo_dimensions_and_odd_bracket():
    for N, (even, odd) in ((1, (4, 4)), (3, (18, 12))):
        basis = spo_basis(N)
        e_span, o_span = LinearSpan(track=False), LinearSpan(track=False)
        for _, m in basis:
            (e_span if m.parity == "even" else o_span).add(m.to_vector())
        assert (e_span.dim, o_span.dim) == (even, odd)
    basis = dict(spo_basis(1))
    br = superbracket(basis["rho(xi_1)^+"], basis["rho(eta_1)^-"])
    span = LinearSpan(track=False)
    for _, m in spo_basis(1):
        if m.parity == "even":
            span.add(m.to_vector())
    assert span.contains(br.to_vector())


def test_loop_at_mode_zero():
    assert loop_so_element("xi_1 eta_1", 0, 2) == rho_matrix(iota("xi_1 eta_1"), 2).to_weyl()


@given(st.integers(0, 5), st.integers(0, 5), st.integers(-3, 3), st.integers(-3, 3))
def test_loop_algebra_law(i, j, n, m):
    labels = so_basis_labels(3)
    a, b = labels[i % len(labels)], labels[(i + j + 1) % len(labels)]
    lhs = superbracket(loop_so_element(a, n, 3), loop_so_element(b, m, 3))
    rhs = rho_matrix(super_commutator(iota(a), iota(b)), 3).to_weyl().left_mul_entries(t(n + m))
    assert lhs == rhs


def test_n4_basis_order():
    fb = fermion_basis(4)
    assert fb.names[:2] == ["v0", "v12"] and fb.names[7] == "vh0"
    assert fb.vectors[12] == (1, (2, 3, 4))
