import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from superweyl.scalars import (I, ONE, ZERO, GaussianDivisionError, GaussianRational, LinearSpan,
                               scalar_arith, solve_linear_system)

from strategies import gaussians, nonzero_gaussians


def test_conjugate_product():
    assert scalar_arith(1 + I, 1 - I, "mul") == 2


def test_conjugate_sum():
    a = GaussianRational(mpq(1, 2), mpq(1, 3))
    assert scalar_arith(a, a.conjugate(), "add") == ONE


def test_lowest_terms_and_positive_denominator():
    x = GaussianRational(mpq(4, -6), mpq(10, 4))
    assert x.re.denominator == 3 and x.re.numerator == -2
    assert x.im.denominator == 2


def test_two_argument_constructor_is_re_im():
    assert GaussianRational(1, 2) == ONE + I * 2
    assert GaussianRational(mpq(1, 2)) == ONE / 2


def test_division_by_zero():
    with pytest.raises(GaussianDivisionError):
        scalar_arith(ONE, ZERO, "div")
    with pytest.raises(ValueError):
        scalar_arith(ONE, ONE, "pow")


def test_json_round_trip():
    x = GaussianRational(mpq(-3, 7), mpq(5, 2))
    assert GaussianRational.from_json(x.to_json()) == x


@given(gaussians)
def test_multiplicative_identity(x):
    assert scalar_arith(x, ONE, "mul") == x


@given(gaussians, gaussians, gaussians)
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a


@given(gaussians, nonzero_gaussians)
def test_division_inverts_multiplication(a, b):
    assert (a * b) / b == a


def test_solve_unique():
    assert solve_linear_system([[1, 0], [0, 1]], [3, I]) == [3, I]


def test_solve_inconsistent():
    assert solve_linear_system([[1, 1]], [1, 2]) is None


def test_solve_dependent_columns_tie_break():
    assert solve_linear_system([[1, 0], [1, 0]], [5, 0]) == [5, 0]


def test_solve_dimension_mismatch():
    with pytest.raises(ValueError):
        solve_linear_system([[1, 0, 0]], [1, 0])


@given(st.lists(st.lists(gaussians, min_size=3, max_size=3), min_size=1, max_size=4),
       st.lists(gaussians, min_size=4, max_size=4))
def test_solution_resubstitutes(columns, coeffs):
    target = [sum((c * col[r] for c, col in zip(coeffs, columns)), ZERO) for r in range(3)]
    sol = solve_linear_system(columns, target)
    assert sol is not None and len(sol) == len(columns)
    back = [sum((c * col[r] for c, col in zip(sol, columns)), ZERO) for r in range(3)]
    assert back == target


def test_span_tracks_coordinates():
    span = LinearSpan()
    assert span.add({"a": ONE, "b": ONE}, label="x")
    assert span.add({"b": ONE}, label="y")
    assert not span.add({"a": 2 * ONE}, label="z")
    assert span.coordinates({"a": 2 * ONE}) == {"x": 2, "y": -2}
    assert span.coordinates({"c": ONE}) is None
    assert span.dim == 2
