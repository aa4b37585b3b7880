"""Grassmann words, the Clifford superalgebra C(2N) and its spinor module.

A word is a sorted tuple of generator codes: ``xi_i`` has code ``i`` and
``eta_i`` has code ``ETA + i``, so the canonical order is all xi's by index
followed by all eta's by index.  Clifford relations::

    xi_i xi_j = -xi_j xi_i,   eta_i eta_j = -eta_j eta_i,
    eta_i xi_j = delta_ij - xi_j eta_i.

``C(2N)`` acts on ``Lambda(xi_1..xi_N)``: ``xi_i`` by left multiplication,
``eta_i`` as the left derivative in ``xi_i``.  That action gives
:func:`rho_matrix`; :func:`rho_pm`, :func:`sl2_generators`, :func:`spo_basis`
and :func:`loop_so_element` assemble the Weyl-matrix pieces built from it.
"""

from __future__ import annotations

import re
from functools import lru_cache
from itertools import combinations
from typing import Dict, Iterable, List, Sequence, Tuple

from .scalars import I, ONE, ZERO, GaussianRational, gq
from .supermatrix import SuperMatrix, block_part
from .weyl import WeylElement, parse_weyl, t

__all__ = [
    "ETA", "xi", "eta", "word_parity", "word_label", "exterior_word_mul", "clifford_word_mul",
    "left_derivative", "CliffordElement", "clifford_mul", "iota", "FermionBasis", "fermion_basis",
    "rho_matrix", "rho_pm", "sl2_generators", "so_basis_labels", "spo_basis", "loop_so_element",
    "parse_so_label",
]

ETA = 100

Word = Tuple[int, ...]


def xi(i: int) -> int:
    return i


def eta(i: int) -> int:
    return ETA + i


def is_eta(g: int) -> bool:
    return g > ETA


def word_parity(word: Word) -> int:
    return len(word) % 2


def xi_count(word: Word) -> int:
    return sum(1 for g in word if g < ETA)


def word_label(word: Word) -> str:
    if not word:
        return "1"
    return " ".join(f"eta_{g - ETA}" if is_eta(g) else f"xi_{g}" for g in word)


def _insert(word: Word, g: int) -> Tuple[int, Word]:
    """Move ``g`` from the front of ``word`` into sorted position."""
    if g in word:
        return 0, word
    pos = 0
    while pos < len(word) and word[pos] < g:
        pos += 1
    return (-1) ** pos, word[:pos] + (g,) + word[pos:]


@lru_cache(maxsize=None)
def exterior_word_mul(w1: Word, w2: Word) -> Tuple[int, Word]:
    """Exterior product of canonical words as ``(sign, word)``; sign 0 if they overlap."""
    if set(w1) & set(w2):
        return 0, ()
    inversions = sum(1 for x in w1 for y in w2 if x > y)
    return (-1) ** inversions, tuple(sorted(w1 + w2))


@lru_cache(maxsize=None)
def _gen_times_word(g: int, word: Word) -> Tuple[Tuple[Word, int], ...]:
    """Clifford product ``g * word`` with ``word`` canonical."""
    if not is_eta(g):
        sign, w = _insert(word, g)
        return ((w, sign),) if sign else ()
    idx = g - ETA
    # carry eta_idx to the right through the xi-prefix
    out: Dict[Word, int] = {}
    nxi = xi_count(word)
    sign = 1
    for p in range(nxi):
        if word[p] == idx:
            # eta_i xi_i = 1 - xi_i eta_i: the contraction drops xi_i
            contracted = word[:p] + word[p + 1:]
            out[contracted] = out.get(contracted, 0) + sign
        sign = -sign
    s2, w = _insert(word[nxi:], g)
    if s2:
        full = word[:nxi] + w
        out[full] = out.get(full, 0) + sign * s2
    return tuple((w, c) for w, c in out.items() if c)


@lru_cache(maxsize=None)
def clifford_word_mul(w1: Word, w2: Word) -> Tuple[Tuple[Word, int], ...]:
    """Clifford product of canonical words as ``((word, int_coeff), ...)``."""
    if not w1:
        return ((w2, 1),)
    acc: Dict[Word, int] = {w2: 1}
    for g in reversed(w1):
        nxt: Dict[Word, int] = {}
        for w, c in acc.items():
            for w3, c3 in _gen_times_word(g, w):
                nxt[w3] = nxt.get(w3, 0) + c * c3
        acc = {w: c for w, c in nxt.items() if c}
    return tuple(sorted(acc.items()))


@lru_cache(maxsize=None)
def left_derivative(g: int, word: Word) -> Tuple[int, Word]:
    """Left derivative of a canonical word by generator ``g`` as ``(sign, word)``."""
    if g not in word:
        return 0, ()
    pos = word.index(g)
    return (-1) ** pos, word[:pos] + word[pos + 1:]


def word_from_generators(gens: Iterable[int]) -> Tuple[int, Word]:
    """Canonical ``(sign, word)`` of an exterior product of generators, in order."""
    sign, word = 1, ()
    for g in gens:
        s, word = exterior_word_mul(word, (g,))
        sign *= s
        if not sign:
            return 0, ()
    return sign, word


class CliffordElement:
    """Element of C(2N): mapping canonical word -> GaussianRational."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for w, c in (terms or {}).items():
            c = gq(c)
            if c:
                clean[tuple(w)] = c
        self.terms = clean

    @classmethod
    def generator(cls, code: int) -> "CliffordElement":
        return cls({(code,): 1})

    @classmethod
    def scalar(cls, c) -> "CliffordElement":
        return cls({(): c})

    @classmethod
    def product(cls, *codes: int) -> "CliffordElement":
        """Clifford product of generators in the given (not necessarily canonical) order."""
        out = cls.scalar(1)
        for g in codes:
            out = out * cls.generator(g)
        return out

    def __add__(self, other):
        if not isinstance(other, CliffordElement):
            other = CliffordElement.scalar(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            nc = out.get(w, ZERO) + c
            if nc:
                out[w] = nc
            else:
                out.pop(w, None)
        res = CliffordElement()
        res.terms = out
        return res

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        if not isinstance(other, CliffordElement):
            other = CliffordElement.scalar(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = gq(c)
        return CliffordElement({w: v * c for w, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, CliffordElement):
            return clifford_mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        if not isinstance(other, CliffordElement):
            other = CliffordElement.scalar(other)
        return self.terms == other.terms

    __hash__ = None

    def __bool__(self):
        return bool(self.terms)

    @property
    def parity(self):
        ps = {word_parity(w) for w in self.terms}
        if len(ps) > 1:
            return None
        return ps.pop() if ps else 0

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*{word_label(w)}" for w, c in sorted(self.terms.items()))

    __repr__ = __str__


def clifford_mul(x: CliffordElement, y: CliffordElement) -> CliffordElement:
    out: Dict[Word, GaussianRational] = {}
    for w1, c1 in x.terms.items():
        for w2, c2 in y.terms.items():
            c12 = c1 * c2
            for w, k in clifford_word_mul(w1, w2):
                nc = out.get(w, ZERO) + c12 * k
                if nc:
                    out[w] = nc
                else:
                    out.pop(w, None)
    res = CliffordElement()
    res.terms = out
    return res


def super_commutator(x: CliffordElement, y: CliffordElement) -> CliffordElement:
    px, py = x.parity, y.parity
    if px is None or py is None:
        raise ValueError("super commutator needs homogeneous elements")
    sign = -1 if px * py else 1
    return x * y - (y * x).scale(sign)


# --- the orthogonal algebra and its embedding ---------------------------------

_LABEL = re.compile(r"^(xi|eta)_(\d+)(?:\s+(xi|eta)_(\d+))?$")


def parse_so_label(label: str) -> Tuple[int, ...]:
    """``"xi_1 eta_2"`` -> generator codes ``(1, ETA+2)``; ``"C"`` -> ``()``."""
    label = label.strip()
    if label == "C":
        return ()
    m = _LABEL.match(label)
    if not m:
        raise ValueError(f"unrecognized basis element {label!r}")
    codes = [xi(int(m.group(2))) if m.group(1) == "xi" else eta(int(m.group(2)))]
    if m.group(3):
        codes.append(xi(int(m.group(4))) if m.group(3) == "xi" else eta(int(m.group(4))))
    return tuple(codes)


def iota(label: str) -> CliffordElement:
    """Embedding of o(2N) + hei(0|2N) into C(2N).

    Quadratic elements map to the same Clifford word except
    ``xi_i eta_i -> xi_i eta_i - 1/2``; odd generators map to themselves and the
    central element ``C`` to 1.
    """
    codes = parse_so_label(label)
    if not codes:
        return CliffordElement.scalar(1)
    if len(codes) == 2 and codes[0] == codes[1]:
        raise ValueError(f"unrecognized basis element {label!r}")
    out = CliffordElement.product(*codes)
    if len(codes) == 2 and not is_eta(codes[0]) and is_eta(codes[1]) and codes[1] - ETA == codes[0]:
        out = out - CliffordElement.scalar(GaussianRational(1, 0) / 2)
    return out


def so_basis_labels(N: int) -> List[str]:
    """A basis of o(2N) = Lambda^2(V): xi xi, eta eta, then xi eta."""
    labels = [f"xi_{i} xi_{j}" for i, j in combinations(range(1, N + 1), 2)]
    labels += [f"eta_{i} eta_{j}" for i, j in combinations(range(1, N + 1), 2)]
    labels += [f"xi_{i} eta_{j}" for i in range(1, N + 1) for j in range(1, N + 1)]
    return labels


# --- spinor module --------------------------------------------------------------

class FermionBasis:
    """Ordered signed basis of Lambda(xi_1..xi_N): even vectors first, then odd.

    Each basis vector is ``sign * word`` with ``word`` a canonical xi-word.
    """

    def __init__(self, N: int, even: Sequence[Tuple[int, Word]], odd: Sequence[Tuple[int, Word]],
                 names: Sequence[str] = None):
        if len(even) != len(odd):
            raise ValueError("even and odd parts must have equal size")
        self.N = N
        self.vectors = list(even) + list(odd)
        self.m = len(even)
        self.names = list(names) if names else [word_label(w) for _, w in self.vectors]
        self.index = {w: (k, s) for k, (s, w) in enumerate(self.vectors)}
        if len(self.index) != len(self.vectors) or len(self.vectors) != 2 ** N:
            raise ValueError("not a basis of the exterior algebra")


def _gradlex(N: int, parity: int) -> List[Word]:
    words = []
    for size in range(parity, N + 1, 2):
        words.extend(combinations(range(1, N + 1), size))
    return [tuple(w) for w in words]


@lru_cache(maxsize=None)
def fermion_basis(N: int) -> FermionBasis:
    """The ordered basis used for all matrix realizations at rank ``N``.

    N = 2: (1, xi1 xi2 | xi1, xi2).
    N = 3: (xi2 xi3, xi3 xi1, xi1 xi2, 1 | xi1, xi2, xi3, -xi1 xi2 xi3).
    N = 4: (1, xi_ij (i<j), xi1..xi4 | xi_i, the complements of xi_i).
    Otherwise graded-lexicographic within each parity.
    """
    if N == 3:
        even = [(1, (2, 3)), (-1, (1, 3)), (1, (1, 2)), (1, ())]
        odd = [(1, (1,)), (1, (2,)), (1, (3,)), (-1, (1, 2, 3))]
        names = ["vh1", "vh2", "vh3", "v4", "v1", "v2", "v3", "vh4"]
        return FermionBasis(3, even, odd, names)
    if N == 4:
        even = [(1, w) for w in _gradlex(4, 0)]
        odd = [(1, (i,)) for i in range(1, 5)]
        odd += [(1, tuple(k for k in range(1, 5) if k != i)) for i in range(1, 5)]
        names = ["v0", "v12", "v13", "v14", "v23", "v24", "v34", "vh0",
                 "v1", "v2", "v3", "v4", "vh1", "vh2", "vh3", "vh4"]
        return FermionBasis(4, even, odd, names)
    if N == 2:
        return FermionBasis(2, [(1, ()), (1, (1, 2))], [(1, (1,)), (1, (2,))], ["v0", "v3", "v1", "v2"])
    return FermionBasis(N, [(1, w) for w in _gradlex(N, 0)], [(1, w) for w in _gradlex(N, 1)])


def act(x: CliffordElement, vec: Dict[Word, GaussianRational]) -> Dict[Word, GaussianRational]:
    """Action of C(2N) on Lambda(xi): Clifford product, eta-words annihilate 1."""
    out: Dict[Word, GaussianRational] = {}
    for w1, c1 in x.terms.items():
        for w2, c2 in vec.items():
            for w, k in clifford_word_mul(w1, w2):
                if w and is_eta(w[-1]):
                    continue
                nc = out.get(w, ZERO) + c1 * c2 * k
                if nc:
                    out[w] = nc
                else:
                    out.pop(w, None)
    return out


def rho_matrix(x: CliffordElement, N: int, basis: FermionBasis = None) -> SuperMatrix:
    """Scalar supermatrix of ``x`` acting on Lambda(xi_1..xi_N)."""
    basis = basis or fermion_basis(N)
    entries = {}
    for col, (s_in, w_in) in enumerate(basis.vectors):
        image = act(x, {w_in: gq(s_in)})
        for w, c in image.items():
            row, s_out = basis.index[w]
            entries[(row, col)] = c * s_out
    return SuperMatrix(basis.m, basis.m, entries, ring="scalar")


def _odd_generator(label: str) -> int:
    codes = parse_so_label(label)
    if len(codes) != 1:
        raise ValueError(f"{label!r} is not an odd generator")
    return codes[0]


def rho_pm(v: str, sign: int, N: int, basis: FermionBasis = None) -> SuperMatrix:
    """The Weyl matrix rho(v)^+ (sign=+1) or rho(v)^- (sign=-1) for ``v = "xi_i"/"eta_i"``.

    The even->odd block of rho(v) is multiplied by ``t^sign``, the odd->even
    block by ``t d t^sign - sign/2 t^sign``.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    g = _odd_generator(v)
    rho = rho_matrix(CliffordElement.generator(g), N, basis)
    lower = block_part(rho, -1)
    upper = block_part(rho, 1)
    ts = t(sign)
    upper_factor = t(1) * parse_weyl("d") * ts - ts.scale(GaussianRational(sign) / 2)
    return lower.left_mul_entries(ts) + upper.left_mul_entries(upper_factor)


def sl2_generators(N: int) -> Tuple[SuperMatrix, SuperMatrix, SuperMatrix]:
    """Diagonal (E, H, F) realizing sl(2) inside End(W^{2^{N-1}|2^{N-1}})."""
    m = 2 ** (N - 1)
    half_i = I * GaussianRational(1, 0) / 2
    e_even = parse_weyl("t d t^2 - 1/2 t^2").scale(half_i)
    e_odd = parse_weyl("t^2 d t - 1/2 t^2").scale(half_i)
    f_even = parse_weyl("t d t^-2 + 1/2 t^-2").scale(half_i)
    f_odd = parse_weyl("d t^-1 + 1/2 t^-2").scale(half_i)
    h = parse_weyl("t d")
    E = SuperMatrix.diagonal_blocks(m, m, e_even, e_odd)
    F = SuperMatrix.diagonal_blocks(m, m, f_even, f_odd)
    H = SuperMatrix.diagonal_blocks(m, m, h, h)
    return E, H, F


def odd_generator_labels(N: int) -> List[str]:
    return [f"xi_{i}" for i in range(1, N + 1)] + [f"eta_{i}" for i in range(1, N + 1)]


def spo_basis(N: int, basis: FermionBasis = None) -> List[Tuple[str, SuperMatrix]]:
    """Labelled spanning set of spo(2|2N): rho(v)^+-, rho(o(2N)) and E, H, F."""
    out = []
    for v in odd_generator_labels(N):
        for sign, tag in ((1, "+"), (-1, "-")):
            out.append((f"rho({v})^{tag}", rho_pm(v, sign, N, basis)))
    for label in so_basis_labels(N):
        out.append((label, rho_matrix(iota(label), N, basis).to_weyl()))
    E, H, F = sl2_generators(N)
    out += [("E", E), ("H", H), ("F", F)]
    return out


def loop_so_element(label: str, n: int, N: int, basis: FermionBasis = None) -> SuperMatrix:
    """``t^n * rho(iota(x))`` for an o(2N) basis label ``x``."""
    if len(parse_so_label(label)) != 2:
        raise ValueError(f"{label!r} is not an o(2N) basis element")
    return rho_matrix(iota(label), N, basis).to_weyl().left_mul_entries(t(n))
