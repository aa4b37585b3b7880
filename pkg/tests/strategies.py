"""Hypothesis strategies shared by the unit tests."""

from gmpy2 import mpq
from hypothesis import strategies as st

from superweyl.scalars import GaussianRational
from superweyl.weyl import WeylElement

small = st.integers(-6, 6)
rationals = st.builds(lambda p, q: mpq(p, q), st.integers(-9, 9), st.integers(1, 5))
gaussians = st.builds(GaussianRational, rationals, rationals)
nonzero_gaussians = gaussians.filter(bool)

weyl_elements = st.dictionaries(st.tuples(st.integers(-3, 3), st.integers(0, 2)), nonzero_gaussians,
                                max_size=4).map(WeylElement)
