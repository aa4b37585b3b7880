"""Pseudodifferential symbols on the supercircle.

A :class:`SymbolElement` is a finite sum of ``c * t^a * tau^b * w`` where ``w``
is a canonical Grassmann/Clifford word (see :mod:`superweyl.clifford`).  Two
products live on the same vector space:

* the Poisson superalgebra ``P(2N)``: pointwise product of the ``(t, tau)``
  parts, exterior product of words, and the Poisson bracket
  :func:`poisson_bracket`;
* its deformation ``P_1(2N)``: the composition
  ``A o B = sum_n 1/n! d_tau^n A d_t^n B`` with Clifford products of words
  (:func:`compose_truncated`) and the super-commutator :func:`p1_bracket`.

Composition produces infinite tails in negative ``tau`` powers.  Those tails
are cut at a ``tau`` floor, and the element records the lowest ``tau``
exponent from which its terms can still be trusted (``floor``; ``None``
means the element is exact).
"""

from __future__ import annotations

from math import factorial
from typing import Dict, Iterable, List, Optional, Tuple

from gmpy2 import mpq

from .clifford import (ETA, CliffordElement, clifford_word_mul, exterior_word_mul, eta, is_eta,
                       left_derivative, word_from_generators, word_label, word_parity, xi, xi_count)
from .scalars import ZERO, GaussianRational, gq

__all__ = [
    "SymbolElement", "poisson_bracket", "lie_degree", "compose_truncated", "p1_bracket",
    "ext_mul", "sym", "sym_cl", "sp_symbol_generators", "DEFAULT_TAU_FLOOR",
]

DEFAULT_TAU_FLOOR = -8

Key = Tuple[int, int, Tuple[int, ...]]


def _max_floor(*floors):
    vals = [f for f in floors if f is not None]
    return max(vals) if vals else None


class SymbolElement:
    """Finite sum of symbol monomials, possibly truncated below ``floor``."""

    __slots__ = ("terms", "floor")

    def __init__(self, terms=None, floor: Optional[int] = None):
        self.floor = floor
        clean: Dict[Key, GaussianRational] = {}
        for (a, b, w), c in (terms or {}).items():
            c = gq(c)
            if c and (floor is None or b >= floor):
                clean[(int(a), int(b), tuple(w))] = c
        self.terms = clean

    @classmethod
    def _raw(cls, terms, floor):
        obj = object.__new__(cls)
        obj.terms = terms
        obj.floor = floor
        if floor is not None:
            for key in [k for k in terms if k[1] < floor]:
                del terms[key]
        return obj

    @classmethod
    def monomial(cls, a=0, b=0, word=(), coeff=1):
        return cls({(a, b, tuple(word)): coeff})

    @classmethod
    def from_clifford(cls, a: int, b: int, x: CliffordElement, coeff=1) -> "SymbolElement":
        c0 = gq(coeff)
        return cls({(a, b, w): c * c0 for w, c in x.terms.items()})

    @property
    def exact(self) -> bool:
        return self.floor is None

    def with_floor(self, floor: Optional[int]) -> "SymbolElement":
        """Forget everything below ``floor`` (never lowers an existing floor)."""
        f = _max_floor(self.floor, floor)
        return SymbolElement._raw(dict(self.terms), f)

    # -- linear structure ---------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, SymbolElement):
            other = SymbolElement.monomial(coeff=other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            nc = out.get(k, ZERO) + c
            if nc:
                out[k] = nc
            else:
                out.pop(k, None)
        return SymbolElement._raw(out, _max_floor(self.floor, other.floor))

    __radd__ = __add__

    def __neg__(self):
        return SymbolElement._raw({k: -c for k, c in self.terms.items()}, self.floor)

    def __sub__(self, other):
        if not isinstance(other, SymbolElement):
            other = SymbolElement.monomial(coeff=other)
        return self + (-other)

    def scale(self, c):
        c = gq(c)
        if not c:
            return SymbolElement._raw({}, self.floor)
        return SymbolElement._raw({k: v * c for k, v in self.terms.items()}, self.floor)

    def __mul__(self, other):
        if isinstance(other, SymbolElement):
            raise TypeError("use ext_mul or compose_truncated for products of symbols")
        return self.scale(other)

    __rmul__ = __mul__

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, SymbolElement):
            return NotImplemented
        f = _max_floor(self.floor, other.floor)
        if f is None:
            return self.terms == other.terms
        return ({k: v for k, v in self.terms.items() if k[1] >= f}
                == {k: v for k, v in other.terms.items() if k[1] >= f})

    __hash__ = None

    # -- structure ----------------------------------------------------------
    @property
    def parity(self) -> Optional[int]:
        ps = {word_parity(w) for (_, _, w) in self.terms}
        if len(ps) > 1:
            return None
        return ps.pop() if ps else 0

    def parity_parts(self) -> Dict[int, "SymbolElement"]:
        parts: Dict[int, Dict] = {0: {}, 1: {}}
        for k, c in self.terms.items():
            parts[word_parity(k[2])][k] = c
        return {p: SymbolElement._raw(v, self.floor) for p, v in parts.items() if v}

    def max_tau(self) -> Optional[int]:
        return max((b for (_, b, _) in self.terms), default=None)

    def mode(self) -> Optional[int]:
        """Weight ``a - b`` (deg t = 1, deg tau = -1) when homogeneous, else None."""
        ms = {a - b for (a, b, _) in self.terms}
        return ms.pop() if len(ms) == 1 else None

    def to_vector(self, cutoff: Optional[int] = None) -> Dict[Key, GaussianRational]:
        """Coordinates over monomials with tau exponent >= cutoff (and >= floor)."""
        f = _max_floor(self.floor, cutoff)
        if f is None:
            return dict(self.terms)
        return {k: c for k, c in self.terms.items() if k[1] >= f}

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (a, b, w), c in sorted(self.terms.items(), reverse=True):
            factors = [str(c)]
            if a:
                factors.append(f"t^{a}")
            if b:
                factors.append(f"tau^{b}")
            xs = [str(g) for g in w if not is_eta(g)]
            es = [str(g - ETA) for g in w if is_eta(g)]
            if xs:
                factors.append("xi_{" + "".join(xs) + "}")
            if es:
                factors.append("eta_{" + "".join(es) + "}")
            parts.append(" * ".join(factors))
        text = " + ".join(parts)
        if self.floor is not None:
            text += f" + O(tau^{self.floor - 1})"
        return text

    def __repr__(self):
        return f"SymbolElement({self})"


def lie_degree(term: Key) -> int:
    """``b + (number of xi's) - 1`` for the monomial ``t^a tau^b w``."""
    _, b, w = term
    return b + xi_count(w) - 1


def _propagated_floor(A: SymbolElement, B: SymbolElement, extra: Optional[int] = None):
    """Lowest trusted tau exponent of a product/bracket of A and B."""
    cands = [extra]
    if A.floor is not None and B.terms:
        cands.append(A.floor + B.max_tau())
    if B.floor is not None and A.terms:
        cands.append(B.floor + A.max_tau())
    return _max_floor(*cands)


def _acc(out, key, val):
    nv = out.get(key, ZERO) + val
    if nv:
        out[key] = nv
    else:
        out.pop(key, None)


def ext_mul(A: SymbolElement, B: SymbolElement) -> SymbolElement:
    """Pointwise product in P(2N): exterior product of words, no tau/t interaction."""
    out: Dict[Key, GaussianRational] = {}
    for (a1, b1, w1), c1 in A.terms.items():
        for (a2, b2, w2), c2 in B.terms.items():
            s, w = exterior_word_mul(w1, w2)
            if s:
                _acc(out, (a1 + a2, b1 + b2, w), c1 * c2 * s)
    return SymbolElement._raw(out, _propagated_floor(A, B))


def _poisson_homogeneous(A: SymbolElement, B: SymbolElement, pA: int, out: Dict):
    odd_sign = 1 if pA == 1 else -1  # (-1)^(p(A)+1)
    for (a1, b1, w1), c1 in A.terms.items():
        for (a2, b2, w2), c2 in B.terms.items():
            c12 = c1 * c2
            if b1 and a2 or a1 and b2:
                s, w = exterior_word_mul(w1, w2)
                if s:
                    k = b1 * a2 - a1 * b2
                    if k:
                        _acc(out, (a1 + a2 - 1, b1 + b2 - 1, w), c12 * (s * k))
            gens = {g if g < ETA else g - ETA for g in w1} & {g if g < ETA else g - ETA for g in w2}
            for i in sorted(gens):
                for g1, g2 in ((xi(i), eta(i)), (eta(i), xi(i))):
                    s1, r1 = left_derivative(g1, w1)
                    if not s1:
                        continue
                    s2, r2 = left_derivative(g2, w2)
                    if not s2:
                        continue
                    s3, w = exterior_word_mul(r1, r2)
                    if s3:
                        _acc(out, (a1 + a2, b1 + b2, w), c12 * (odd_sign * s1 * s2 * s3))


def poisson_bracket(A: SymbolElement, B: SymbolElement) -> SymbolElement:
    """``{A, B} = d_tau A d_t B - d_t A d_tau B
    + (-1)^(p(A)+1) sum_i (d_xi_i A d_eta_i B + d_eta_i A d_xi_i B)``,
    with left derivatives in the odd variables; bilinear in mixed-parity input."""
    out: Dict[Key, GaussianRational] = {}
    for pA, part in A.parity_parts().items():
        _poisson_homogeneous(part, B, pA, out)
    return SymbolElement._raw(out, _propagated_floor(A, B))


def _falling(x: int, n: int) -> int:
    out = 1
    for i in range(n):
        out *= x - i
    return out


def compose_truncated(A: SymbolElement, B: SymbolElement, floor: int = DEFAULT_TAU_FLOOR) -> SymbolElement:
    """``A o B = sum_{n>=0} 1/n! d_tau^n A d_t^n B`` with Clifford products of words.

    Terms with tau exponent below ``floor`` are dropped; the result is exact
    only if every series stopped on its own and both inputs were exact.
    """
    out: Dict[Key, GaussianRational] = {}
    truncated = False
    for (a1, b1, w1), c1 in A.terms.items():
        for (a2, b2, w2), c2 in B.terms.items():
            words = clifford_word_mul(w1, w2)
            if not words:
                continue
            c12 = c1 * c2
            n = 0
            while True:
                tau_exp = b1 + b2 - n
                coef = _falling(b1, n) * _falling(a2, n)
                if coef == 0:
                    break
                if tau_exp < floor:
                    truncated = True
                    break
                val = c12 * mpq(coef, factorial(n))
                for w, k in words:
                    _acc(out, (a1 + a2 - n, tau_exp, w), val * k)
                n += 1
    result_floor = _propagated_floor(A, B, floor if truncated else None)
    return SymbolElement._raw(out, result_floor)


def p1_bracket(A: SymbolElement, B: SymbolElement, floor: int = DEFAULT_TAU_FLOOR) -> SymbolElement:
    """Super-commutator ``A o B - (-1)^{p(A)p(B)} B o A`` in P_1(2N)."""
    out = None
    for pA, a in A.parity_parts().items():
        for pB, b in B.parity_parts().items():
            ab = compose_truncated(a, b, floor)
            ba = compose_truncated(b, a, floor)
            term = ab + ba if pA and pB else ab - ba
            out = term if out is None else out + term
    if out is None:
        return SymbolElement(floor=_propagated_floor(A, B))
    return out


# --- constructors -------------------------------------------------------------

def sym(coeff, a: int, b: int, *gens: int) -> SymbolElement:
    """``coeff * t^a tau^b * g1 g2 ...`` with the exterior (P(2N)) product of generators."""
    s, w = word_from_generators(gens)
    return SymbolElement({(a, b, w): gq(coeff) * s}) if s else SymbolElement()


def sym_cl(coeff, a: int, b: int, *gens: int) -> SymbolElement:
    """``coeff * t^a tau^b * g1 g2 ...`` with the Clifford (P_1(2N)) product of generators."""
    return SymbolElement.from_clifford(a, b, CliffordElement.product(*gens), coeff)


def sp_symbol_generators(N: int) -> List[Tuple[str, SymbolElement]]:
    """The 4N odd generators of spo(2|2N) inside K(2N) in P(2N), all exact.

    The quartic correction in ``(eta_i)^+-`` sums ``eta_j xi_j eta_k xi_k`` over
    unordered pairs ``j < k``; summing over ordered pairs doubles it and the
    brackets then no longer close on an 18-dimensional even part at N = 3.
    """
    half = GaussianRational(1, 0) / 2
    euler = SymbolElement()  # sum_j eta_j xi_j
    pairs = SymbolElement()  # sum_{j<k} eta_j xi_j eta_k xi_k
    for j in range(1, N + 1):
        euler = euler + sym(1, 0, 0, eta(j), xi(j))
        for k in range(j + 1, N + 1):
            pairs = pairs + sym(1, 0, 0, eta(j), xi(j), eta(k), xi(k))
    out = []
    for i in range(1, N + 1):
        x = sym(1, 0, 0, xi(i))
        e = sym(1, 0, 0, eta(i))
        corr = ext_mul(euler, x)
        out.append((f"xi_{i}^+", sym(1, 1, 0, xi(i)) + ext_mul(sym(half, 0, -1), corr)))
        out.append((f"xi_{i}^-", sym(1, -1, 0, xi(i)) + ext_mul(sym(-half, -2, -1), corr)))
    for i in range(1, N + 1):
        e = sym(1, 0, 0, eta(i))
        lin = ext_mul(e, euler)
        quad = ext_mul(e, pairs)
        out.append((f"eta_{i}^+", sym(1, 2, 1, eta(i)) + ext_mul(sym(half, 1, 0), lin)
                    + ext_mul(sym(half, 0, -1), quad)))
        out.append((f"eta_{i}^-", sym(1, 0, 1, eta(i)) + ext_mul(sym(-half, -1, 0), lin)
                    + ext_mul(sym(half, -2, -1), quad)))
    return out
