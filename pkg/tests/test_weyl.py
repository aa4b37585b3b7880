from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from superweyl.scalars import ONE, GaussianRational
from superweyl.weyl import WeylElement, d, parse_weyl, t, weyl_apply, weyl_mul

from strategies import weyl_elements


def test_d_times_t():
    assert weyl_mul(d(), t()) == WeylElement.scalar(1) + t() * d()


def test_d2_times_t2():
    # two applications of d f = f' + f d
    assert weyl_mul(d(2), t(2)) == t(2) * d(2) + (t(1) * d(1)).scale(4) + WeylElement.scalar(2)


def test_no_stored_zero():
    x = t() - t()
    assert not x and x.terms == {}


@given(weyl_elements)
def test_unit(x):
    assert x * WeylElement.scalar(1) == x == WeylElement.scalar(1) * x


@given(weyl_elements, weyl_elements, weyl_elements)
def test_associative(x, y, z):
    assert (x * y) * z == x * (y * z)


@given(st.integers(-4, 4), st.integers(0, 3))
def test_commutator_with_d_is_derivative(a, k):
    f = t(a)
    assert d() * f - f * d() == f.derivative()


def test_apply_euler_field():
    for n in range(-2, 3):
        for m in range(-3, 4):
            out = weyl_apply(t(n + 1) * d(), {m: ONE})
            assert out == ({n + m: GaussianRational(m)} if m else {})


def test_apply_identity():
    f = {2: ONE, -1: GaussianRational(mpq(1, 3))}
    assert weyl_apply(WeylElement.scalar(1), f) == f


def test_apply_rho_eta_plus_entry():
    op = t(2) * d() + t(1).scale(mpq(1, 2))
    assert weyl_apply(op, {3: ONE}) == {4: GaussianRational(mpq(7, 2))}


def test_apply_rational_exponent():
    out = weyl_apply(t(1) * d(), {mpq(1, 2): ONE})
    assert out == {mpq(1, 2): GaussianRational(mpq(1, 2))}


@given(weyl_elements, weyl_elements, st.integers(-3, 3))
def test_apply_is_an_action(x, y, m):
    f = {m: ONE}
    assert weyl_apply(x * y, f) == weyl_apply(x, weyl_apply(y, f))


def test_parse_normalizes():
    assert parse_weyl("t*d*t - 1/2*t") == t(2) * d() + t(1).scale(mpq(1, 2))
    assert parse_weyl("d^2 t^2") == weyl_mul(d(2), t(2))


def test_mode_grading():
    assert (t(3) * d(2)).mode() == 1
    assert (t(1) + d()).mode() is None
