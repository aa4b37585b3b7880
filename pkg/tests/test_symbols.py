import random

from gmpy2 import mpq
from hypothesis import assume, given
from hypothesis import strategies as st

from superweyl.clifford import eta, xi
from superweyl.scalars import GaussianRational
from superweyl.symbols import (SymbolElement, compose_truncated, ext_mul, lie_degree, p1_bracket,
                               poisson_bracket, sp_symbol_generators, sym)
from superweyl.verify import random_symbol, random_symbol_monomial, symbol_grading_checks

ONE_SYM = sym(1, 0, 0)
T, TAU = sym(1, 1, 0), sym(1, 0, 1)
HALF = GaussianRational(mpq(1, 2))


def test_poisson_examples():
    assert poisson_bracket(TAU, T) == ONE_SYM
    assert poisson_bracket(sym(1, 0, 0, xi(1)), sym(1, 0, 0, eta(1))) == ONE_SYM
    assert poisson_bracket(sym(1, 2, 1), sym(1, 3, 1)) == sym(1, 4, 1)


def test_lie_degree_examples():
    assert lie_degree((4, 1, ())) == 0
    assert lie_degree((-1, -1, (xi(1), xi(2), eta(1), eta(2)))) == 0
    assert lie_degree((0, 2, ())) == 1


def test_composition_examples():
    assert compose_truncated(T, T) == sym(1, 2, 0) and compose_truncated(T, T).exact
    tau_t = compose_truncated(TAU, T)
    assert tau_t.exact and tau_t == sym(1, 1, 1) + ONE_SYM
    series = compose_truncated(sym(1, 0, -1), sym(1, -1, 0), floor=-3)
    assert not series.exact
    assert series.terms == {(-1, -1, ()): 1, (-2, -2, ()): 1, (-3, -3, ()): 2}
    assert "O(tau^" in str(series)


def test_floor_comparison():
    a = SymbolElement({(0, 0, ()): 1, (0, -5, ()): 3}, floor=-5)
    b = SymbolElement({(0, 0, ()): 1, (0, -6, ()): 7}, floor=-3)
    assert a == b
    assert a != SymbolElement({(0, 0, ()): 2})


def test_p1_examples():
    assert p1_bracket(TAU, T) == ONE_SYM
    A = sym(2, 3, 1) + sym(1, 0, -1, xi(1), eta(1))
    assert not p1_bracket(A, A)


def _weight(key):
    # tau-degree plus half the word length; the Poisson bracket lowers it by exactly one
    return 2 * key[1] + len(key[2])


@given(st.randoms(use_true_random=False), st.integers(0, 1), st.integers(0, 1))
def test_p1_contracts_to_poisson(rng, p, q):
    A, B = random_symbol(rng, 3, p, 1), random_symbol(rng, 3, q, 1)
    assume(A and B)
    top = _weight(next(iter(A.terms))) + _weight(next(iter(B.terms)))
    pb = poisson_bracket(A, B)
    assert all(_weight(k) == top - 2 for k in pb.terms)
    diff = p1_bracket(A, B, floor=-20) - pb
    assert all(_weight(k) < top - 2 for k in diff.terms)


@given(st.integers(-3, 3), st.integers(0, 3), st.integers(-3, 3), st.integers(0, 3))
def test_p1_lowers_tau_degree_without_odd_variables(a1, b1, a2, b2):
    A, B = sym(1, a1, b1), sym(1, a2, b2)
    diff = p1_bracket(A, B, floor=-20) - poisson_bracket(A, B)
    assert all(k[1] < b1 + b2 - 1 for k in diff.terms)


@given(st.randoms(use_true_random=False), st.integers(0, 1), st.integers(0, 1))
def test_poisson_super_skew(rng, p, q):
    A, B = random_symbol(rng, 2, p), random_symbol(rng, 2, q)
    sign = -1 if p and q else 1
    assert poisson_bracket(A, B) == poisson_bracket(B, A).scale(-sign)


@given(st.randoms(use_true_random=False))
def test_grading_law_on_random_monomials(rng):
    A, B = random_symbol_monomial(rng, 3), random_symbol_monomial(rng, 3)
    want = lie_degree(next(iter(A.terms))) + lie_degree(next(iter(B.terms)))
    assert all(lie_degree(k) == want for k in poisson_bracket(A, B).terms)


def test_grading_and_degree_zero_closure_batch():
    res = symbol_grading_checks(1000, seed=7)
    assert all(v["failures"] == 0 and v["nonzero"] > 300 for v in res.values())


def test_sp_generators_examples():
    g1 = dict(sp_symbol_generators(1))
    assert g1["xi_1^+"] == sym(1, 1, 0, xi(1))
    g2 = dict(sp_symbol_generators(2))
    euler = sym(1, 0, 0, eta(1), xi(1)) + sym(1, 0, 0, eta(2), xi(2))
    assert g2["xi_1^+"] == sym(1, 1, 0, xi(1)) + ext_mul(sym(HALF, 0, -1), ext_mul(euler, sym(1, 0, 0, xi(1))))


def test_sp_generators_close_in_degree_zero():
    gens = dict(sp_symbol_generators(2))
    br = poisson_bracket(gens["xi_1^+"], gens["eta_1^-"])
    assert br and all(lie_degree(k) == 0 for k in br.terms)
    assert br.parity == 0
