"""The Weyl algebra ``Q(i)[t, 1/t][d]`` with ``d = d/dt`` in normal order.

Every element is stored as a sum of ``c * t^a * d^k`` with all powers of ``t``
to the left.  Products are brought back to normal order with

    (t^a d^k)(t^b d^l) = sum_j C(k, j) * b(b-1)...(b-j+1) * t^(a+b-j) d^(k+l-j),

which is exact for negative ``b`` as well (the falling factorial never
vanishes then, but ``j`` is still bounded by ``k``).
"""

from __future__ import annotations

import re
from functools import lru_cache
from math import comb
from typing import Dict, Iterator, Mapping, Tuple

from gmpy2 import mpq

from .scalars import ZERO, GaussianRational, gq

__all__ = ["WeylElement", "weyl_mul", "weyl_apply", "parse_weyl", "t", "d"]

Key = Tuple[int, int]


@lru_cache(maxsize=None)
def _reorder(k: int, b: int) -> Tuple[Tuple[int, int], ...]:
    # d^k t^b = sum_j C(k,j) ff(b,j) t^(b-j) d^(k-j)
    out = []
    ff = 1
    for j in range(k + 1):
        if j:
            ff *= b - j + 1
        if ff == 0:
            break
        out.append((j, comb(k, j) * ff))
    return tuple(out)


def _falling(x, j: int):
    out = 1
    for i in range(j):
        out = out * (x - i)
    return out


class WeylElement:
    """A normal-ordered element of the Weyl algebra; treat as immutable."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Key, object] = None):
        clean: Dict[Key, GaussianRational] = {}
        if terms:
            for (a, k), c in terms.items():
                if k < 0:
                    raise ValueError("d-powers must be nonnegative")
                c = gq(c)
                if c:
                    clean[(int(a), int(k))] = c
        self.terms = clean

    @classmethod
    def _raw(cls, terms: Dict[Key, GaussianRational]) -> "WeylElement":
        obj = object.__new__(cls)
        obj.terms = terms
        return obj

    @classmethod
    def monomial(cls, a: int = 0, k: int = 0, coeff=1) -> "WeylElement":
        return cls({(a, k): coeff})

    @classmethod
    def scalar(cls, c) -> "WeylElement":
        return cls({(0, 0): c})

    # -- ring operations ----------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, WeylElement):
            other = WeylElement.scalar(other)
        out = dict(self.terms)
        for key, c in other.terms.items():
            nc = out.get(key, ZERO) + c
            if nc:
                out[key] = nc
            else:
                out.pop(key, None)
        return WeylElement._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return WeylElement._raw({key: -c for key, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, WeylElement):
            other = WeylElement.scalar(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "WeylElement":
        c = gq(c)
        if not c:
            return WeylElement._raw({})
        return WeylElement._raw({key: v * c for key, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, WeylElement):
            return weyl_mul(self, other)
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __rmul__(self, other):
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __pow__(self, n: int):
        out = ONE_W
        for _ in range(n):
            out = out * self
        return out

    # -- predicates ---------------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, WeylElement):
            return self.terms == other.terms
        try:
            return self.terms == WeylElement.scalar(other).terms
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __iter__(self) -> Iterator[Tuple[Key, GaussianRational]]:
        return iter(sorted(self.terms.items(), reverse=True))

    @property
    def d_degree(self) -> int:
        return max((k for _, k in self.terms), default=-1)

    def t_exponents(self):
        return {a for a, _ in self.terms}

    def mode(self):
        """The grading ``deg t = 1, deg d = -1`` if homogeneous, else None."""
        degs = {a - k for a, k in self.terms}
        return degs.pop() if len(degs) == 1 else None

    def derivative(self) -> "WeylElement":
        """d/dt of an element of the coefficient ring (all d-powers zero)."""
        if any(k for _, k in self.terms):
            raise ValueError("derivative is defined on Laurent polynomials only")
        return WeylElement({(a - 1, 0): c * a for (a, _), c in self.terms.items() if a})

    # -- text ---------------------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (a, k), c in self:
            factors = [str(c)]
            if a:
                factors.append(f"t^{a}")
            if k:
                factors.append(f"d^{k}")
            parts.append(" * ".join(factors))
        return " + ".join(parts)

    def __repr__(self):
        return f"WeylElement({self})"


ZERO_W = WeylElement()
ONE_W = WeylElement.scalar(1)


def t(a: int = 1) -> WeylElement:
    return WeylElement.monomial(a, 0)


def d(k: int = 1) -> WeylElement:
    return WeylElement.monomial(0, k)


def weyl_mul(x: WeylElement, y: WeylElement) -> WeylElement:
    """Normal-ordered product ``x * y``."""
    out: Dict[Key, GaussianRational] = {}
    get = out.get
    for (a, k), c1 in x.terms.items():
        for (b, l), c2 in y.terms.items():
            c12 = c1 * c2
            if k == 0:
                key = (a + b, l)
                nc = get(key, ZERO) + c12
                if nc:
                    out[key] = nc
                else:
                    out.pop(key, None)
                continue
            for j, coef in _reorder(k, b):
                key = (a + b - j, k + l - j)
                nc = get(key, ZERO) + c12 * coef
                if nc:
                    out[key] = nc
                else:
                    out.pop(key, None)
    return WeylElement._raw(out)


def weyl_apply(x: WeylElement, f: Mapping) -> Dict:
    """Apply ``x`` as a differential operator to ``f = {exponent: coeff}``.

    Exponents may be rational (for functions in ``t^mu Q(i)[t, 1/t]``); each
    term ``t^a d^k`` sends ``t^s`` to ``s(s-1)...(s-k+1) t^(s-k+a)``.
    """
    out: Dict = {}
    for s, fc in f.items():
        fc = gq(fc)
        s = mpq(s) if not isinstance(s, int) else s
        for (a, k), c in x.terms.items():
            coef = _falling(s, k)
            if not coef:
                continue
            e = s - k + a
            if not isinstance(e, int) and e.denominator == 1:
                e = int(e)
            nc = out.get(e, ZERO) + c * fc * coef
            if nc:
                out[e] = nc
            else:
                out.pop(e, None)
    return out


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<sym>[td])(?:\^(?P<exp>-?\d+|\{-?\d+\}))?|(?P<op>[-+*()]))")


def parse_weyl(text: str) -> WeylElement:
    """Parse words such as ``"t*d*t^2 - 1/2*t^2"`` and normalize them.

    Supports ``+``, ``-``, ``*`` (juxtaposition by whitespace also multiplies),
    parentheses, rational constants, ``t^a`` with any integer ``a`` and ``d^k``.
    The imaginary unit is not part of the grammar; scale afterwards.
    """
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse Weyl word near {text[pos:]!r}")
        pos = m.end()
        if m.group("num"):
            tokens.append(("num", mpq(m.group("num"))))
        elif m.group("sym"):
            e = m.group("exp")
            e = int(e.strip("{}")) if e else 1
            tokens.append(("sym", (m.group("sym"), e)))
        else:
            tokens.append(("op", m.group("op")))
    tokens.append(("end", None))
    idx = 0

    def peek():
        return tokens[idx]

    def take():
        nonlocal idx
        tok = tokens[idx]
        idx += 1
        return tok

    def expr():
        sign = 1
        if peek() == ("op", "-"):
            take()
            sign = -1
        elif peek() == ("op", "+"):
            take()
        acc = term().scale(sign)
        while peek()[0] == "op" and peek()[1] in "+-":
            op = take()[1]
            rhs = term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term():
        acc = factor()
        while True:
            tok = peek()
            if tok == ("op", "*"):
                take()
                acc = acc * factor()
            elif tok[0] in ("num", "sym") or tok == ("op", "("):
                acc = acc * factor()
            else:
                return acc

    def factor():
        kind, val = take()
        if kind == "num":
            return WeylElement.scalar(val)
        if kind == "sym":
            sym, e = val
            if sym == "t":
                return t(e)
            if e < 0:
                raise ValueError("negative powers of d are not in the Weyl algebra")
            return d(e)
        if (kind, val) == ("op", "("):
            inner = expr()
            if take() != ("op", ")"):
                raise ValueError("unbalanced parentheses")
            return inner
        raise ValueError(f"unexpected token {val!r}")

    result = expr()
    if peek()[0] != "end":
        raise ValueError(f"trailing input in {text!r}")
    return result
