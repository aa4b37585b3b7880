"""Named field families of K(2), K'(4)^ and CK6 in the matrix and symbol pictures.

Matrix picture
    Every K'(4)^ / CK6 field acts on ``C[t, 1/t] (x) Lambda(xi)`` by sending a
    basis vector ``v_m`` to ``c * v'_{m+n}`` with ``c`` one of ``1``, ``m`` or
    ``m + n`` (times a sign).  Those three shapes are the Weyl words ``t^n``,
    ``t^{n+1} d`` and ``t d t^n``, so a single transcription table yields both
    the supermatrices and the ``V^mu`` actions (where ``m`` becomes ``m + mu``).

Symbol picture
    Fields are recorded in operator form ``c * t^a D^b (t^c X)`` with
    ``D^{-1}`` the antiderivative and ``X`` a Clifford element.  The same data
    gives the ``P_1(2N)`` symbol (via :func:`compose_truncated`) and an
    independent operator action on ``V^mu``, used to cross-check the tables.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from gmpy2 import mpq

from .clifford import (CliffordElement, act, eta, fermion_basis, rho_pm, xi)
from .scalars import ONE, ZERO, GaussianRational, gq
from .supermatrix import SuperMatrix
from .symbols import DEFAULT_TAU_FLOOR, SymbolElement, compose_truncated, sym, sym_cl
from .weyl import WeylElement, weyl_apply

__all__ = [
    "ALGEBRAS", "FieldFamily", "families", "family", "family_names", "k2_field", "k4hat_field",
    "ck6_field", "field", "sigma_k2", "spo_in_fields", "ModuleVector", "module_basis_labels",
    "module_action", "symbol_module_action", "matrix_module_action", "UnknownFieldError",
]

ALGEBRAS = ("K2", "K4hat", "CK6")
CYCLES = ((1, 2, 3), (2, 3, 1), (3, 1, 2))
HALF = GaussianRational(mpq(1, 2))


class UnknownFieldError(KeyError):
    """Raised for a field name that is not part of the requested algebra."""


# --- operator form --------------------------------------------------------------

@dataclass(frozen=True)
class OpTerm:
    """``coeff * t^outer D^dpow (t^inner X)`` with ``dpow`` in {-1, 0, 1}."""
    coeff: GaussianRational
    outer: int
    dpow: int
    inner: int
    gens: Tuple[int, ...]  # Clifford product of these generators, in order


def _op(coeff, outer, dpow, inner, *gens) -> OpTerm:
    return OpTerm(gq(coeff), outer, dpow, inner, tuple(gens))


def operator_symbol(terms: Sequence[OpTerm], floor: int = DEFAULT_TAU_FLOOR) -> SymbolElement:
    """The P_1(2N) symbol of an operator-form field."""
    out = SymbolElement()
    for term in terms:
        if not term.coeff:
            continue
        right = sym_cl(1, term.inner, 0, *term.gens)
        left = sym(term.coeff, term.outer, term.dpow)
        out = out + compose_truncated(left, right, floor)
    return out


Function = Dict[Tuple[Tuple[int, ...], object], GaussianRational]  # (word, exponent) -> coeff


def _norm_exp(e):
    if not isinstance(e, int) and e.denominator == 1:
        return int(e.numerator)
    return e


def apply_operator(terms: Sequence[OpTerm], f: Function) -> Function:
    """Apply an operator-form field to ``sum c * t^s * word`` (``s`` may be rational)."""
    out: Function = {}
    for term in terms:
        if not term.coeff:
            continue
        x = CliffordElement.product(*term.gens)
        for (w, s), c in f.items():
            for w2, c2 in act(x, {w: c}).items():
                e = s + term.inner
                val = c2 * term.coeff
                if term.dpow == 1:
                    val = val * e
                    e = e - 1
                elif term.dpow == -1:
                    if e == -1:
                        raise ZeroDivisionError("antiderivative of t^-1")
                    e = e + 1
                    val = val / gq(mpq(e) if isinstance(e, int) else e)
                e = _norm_exp(e + term.outer)
                if val:
                    key = (w2, e)
                    nv = out.get(key, ZERO) + val
                    if nv:
                        out[key] = nv
                    else:
                        out.pop(key, None)
    return out


# --- K(2) -----------------------------------------------------------------------------

def _k2_matrix(name: str, n: int) -> SuperMatrix:
    if name == "L":
        return SuperMatrix(1, 1, {(0, 0): WeylElement({(n + 1, 1): 1, (n, 0): n}),
                                  (1, 1): WeylElement({(n + 1, 1): 1})})
    if name == "H":
        return SuperMatrix(1, 1, {(0, 0): WeylElement({(n, 0): -1}), (1, 1): WeylElement({(n, 0): 1})})
    if name == "G":
        return SuperMatrix(1, 1, {(0, 1): WeylElement({(n + 1, 1): 1, (n, 0): mpq(n, 2)})})
    if name == "G~":
        return SuperMatrix(1, 1, {(1, 0): WeylElement({(n, 0): 1})})
    raise UnknownFieldError(f"K2 has no field {name!r}")



def _k2_symbol(name: str, n: int) -> SymbolElement:
    # preimages under sigma of the four matrix fields
    if name == "L":
        return sym(1, n + 1, 1) + sym(-n, n, 0, xi(1), eta(1))
    if name == "H":
        return sym(2, n, 0, xi(1), eta(1))
    if name == "G":
        return sym(1, n + 1, 1, eta(1))
    if name == "G~":
        return sym(1, n, 0, xi(1))
    raise UnknownFieldError(f"K2 has no field {name!r}")


def sigma_k2(symbol: SymbolElement) -> SuperMatrix:
    """The isomorphism K(2) -> 2x2 Weyl matrices, on degree-0 symbols in P(2)."""
    out = SuperMatrix.zero(1, 1)
    for (a, b, w), c in symbol.terms.items():
        if (b, w) == (1, ()):
            img = _k2_matrix("L", a - 1) + _k2_matrix("H", a - 1).scale(mpq(a - 1, 2))
        elif (b, w) == (0, (xi(1), eta(1))):
            img = _k2_matrix("H", a).scale(HALF)
        elif (b, w) == (0, (xi(1),)):
            img = _k2_matrix("G~", a)
        elif (b, w) == (1, (eta(1),)):
            img = _k2_matrix("G", a - 1)
        else:
            raise ValueError(f"term t^{a} tau^{b} {w} is not in K(2)")
        out = out + img.scale(c)
    return out


# --- transcription tables ---------------------------------------------------------------
# rows: (src label, dst label, kind, sign); kind "1" -> t^n, "m" -> t^{n+1}d, "m+n" -> t d t^n

K4HAT_LABELS = ("v0", "v3", "v1", "v2")
CK6_LABELS = ("vh1", "vh2", "vh3", "v4", "v1", "v2", "v3", "vh4")


def _k4hat_table() -> Dict[str, List[Tuple[str, str, str, int]]]:
    tab: Dict[str, List] = {}
    tab["L"] = [("v0", "v0", "m", 1), ("v1", "v1", "m", 1), ("v2", "v2", "m", 1), ("v3", "v3", "m+n", 1)]
    tab["X^1"] = [("v1", "v0", "m", 1), ("v3", "v2", "1", 1)]
    tab["X^2"] = [("v2", "v0", "m", 1), ("v3", "v1", "1", -1)]
    tab["Q"] = [("v3", "v0", "1", -1)]
    tab["Y^1"] = [("v0", "v1", "1", 1), ("v2", "v3", "m+n", 1)]
    tab["Y^2"] = [("v0", "v2", "1", 1), ("v1", "v3", "m+n", -1)]
    for i in (1, 2):
        j = 3 - i
        tab[f"R^{{{i}{i}}}"] = [("v0", "v0", "1", 1), (f"v{j}", f"v{j}", "1", 1)]
        tab[f"R^{{{i}{j}}}"] = [(f"v{i}", f"v{j}", "1", -1)]
    tab["Z^1"] = [("v2", "v0", "1", -1)]
    tab["Z^2"] = [("v1", "v0", "1", 1)]
    tab["G^0"] = [("v0", "v3", "1", 1)]
    tab["G^1"] = [("v1", "v3", "1", 1)]
    tab["G^2"] = [("v2", "v3", "1", 1)]
    tab["G^3"] = [(v, v, "1", 1) for v in ("v0", "v1", "v2", "v3")]
    return tab


def _ck6_table() -> Dict[str, List[Tuple[str, str, str, int]]]:
    tab: Dict[str, List] = {}
    tab["L"] = ([(f"v{i}", f"v{i}", "m", 1) for i in range(1, 5)]
                + [(f"vh{i}", f"vh{i}", "m+n", 1) for i in range(1, 5)])
    tab["I"] = [("vh4", "v4", "1", 1)]
    for i, j, k in CYCLES:
        tab[f"G^{i}"] = [(f"v{i}", "v4", "m", 1), ("vh4", f"vh{i}", "m+n", -1),
                         (f"vh{k}", f"v{j}", "1", 1), (f"vh{j}", f"v{k}", "1", -1)]
        # last row: G~^i(v^j) = (m + mu) vh^k, as the operator form of the symbol gives;
        # a v^j -> v^k row would be parity-even and break the bracket relations
        tab[f"G~^{i}"] = [("v4", f"v{i}", "1", 1), (f"vh{i}", "vh4", "1", -1),
                          (f"v{k}", f"vh{j}", "m+n", -1), (f"v{j}", f"vh{k}", "m", 1)]
        tab[f"T^{i}"] = [(f"v{i}", f"v{i}", "1", -1), ("v4", "v4", "1", -1),
                         (f"vh{i}", f"vh{i}", "1", 1), ("vh4", "vh4", "1", 1)]
        tab[f"S^{i}"] = [(f"v{i}", "v4", "1", -1), ("vh4", f"vh{i}", "1", -1)]
        tab[f"S~^{i}"] = [(f"v{k}", f"vh{j}", "1", -1), (f"v{j}", f"vh{k}", "1", -1)]
        tab[f"I^{i}"] = [(f"v{i}", f"vh{i}", "1", 1)]
        a, b = sorted((i, j))
        sgn = 1 if (a, b) == (i, j) else -1
        tab[f"J^{{{a}{b}}}"] = [(f"vh{k}", "v4", "1", -sgn), ("vh4", f"v{k}", "1", sgn)]
        tab[f"J~^{{{a}{b}}}"] = [("v4", f"vh{k}", "1", sgn), (f"v{k}", "vh4", "1", -sgn)]
    for i in (1, 2, 3):
        for j in (1, 2, 3):
            if i != j:
                tab[f"T^{{{i}{j}}}"] = [(f"v{i}", f"v{j}", "1", -1), (f"vh{j}", f"vh{i}", "1", 1)]
    return tab


TABLES = {"K4hat": (_k4hat_table(), K4HAT_LABELS), "CK6": (_ck6_table(), CK6_LABELS)}


def _kind_weyl(kind: str, n: int) -> WeylElement:
    if kind == "1":
        return WeylElement({(n, 0): 1})
    if kind == "m":
        return WeylElement({(n + 1, 1): 1})
    if kind == "m+n":
        return WeylElement({(n + 1, 1): 1, (n, 0): n})
    raise ValueError(kind)


def _kind_coeff(kind: str, m, n, mu) -> GaussianRational:
    if kind == "1":
        return ONE
    if kind == "m":
        return gq(mpq(m) + mu)
    return gq(mpq(m + n) + mu)


@lru_cache(maxsize=None)
def _table_matrix(algebra: str, name: str, n: int) -> SuperMatrix:
    table, labels = TABLES[algebra]
    idx = {lab: k for k, lab in enumerate(labels)}
    size = len(labels) // 2
    entries = {}
    for src, dst, kind, sign in table[name]:
        entries[(idx[dst], idx[src])] = _kind_weyl(kind, n).scale(sign)
    return SuperMatrix(size, size, entries)


# --- operator forms ---------------------------------------------------------------------

def _k4hat_ops(name: str, n: int) -> List[OpTerm]:
    e1, e2 = eta(1), eta(2)
    if name == "L":
        return [_op(1, n + 1, 1, 0)]
    if name == "Q":
        return [_op(1, n + 1, 1, 0, e1, e2)]
    if name in ("X^1", "X^2"):
        return [_op(1, n + 1, 1, 0, eta(int(name[-1])))]
    if name in ("Y^1", "Y^2"):
        return [_op(1, n, 0, 0, xi(int(name[-1])))]
    if name.startswith("R^{"):
        j, i = int(name[3]), int(name[4])
        return [_op(1, n, 0, 0, eta(j), xi(i))]
    if name in ("Z^1", "Z^2"):
        return [_op(1, n, 0, 0, e1, e2, xi(int(name[-1])))]
    if name == "G^0":
        return [_op(1, 0, -1, n - 1, xi(1), xi(2))]
    if name in ("G^1", "G^2"):
        return [_op(1, 0, -1, n - 1, xi(1), xi(2), eta(int(name[-1])))]
    if name == "G^3":
        return [_op(n, 0, -1, n - 1, xi(1), xi(2), e1, e2), _op(1, n, 0, 0)]
    raise UnknownFieldError(f"K4hat has no field {name!r}")


def _cycle_of(i: int) -> Tuple[int, int, int]:
    return next(c for c in CYCLES if c[0] == i)


def _ck6_ops(name: str, n: int) -> List[OpTerm]:
    if name == "L":
        return [_op(1, n + 1, 1, 0)]
    if name == "I":
        return [_op(1, n + 1, 1, 0, eta(1), eta(2), eta(3))]
    kind, idx = _split_name(name)
    if kind in ("J", "J~", "T") and len(idx) == 2:
        i, j = idx
        if kind == "J":
            return [_op(1, n + 1, 1, 0, eta(i), eta(j))]
        if kind == "J~":
            return [_op(1, 0, -1, n - 1, xi(i), xi(j))]
        k = 6 - i - j
        return [_op(1, n, 0, 0, eta(i), xi(j)), _op(-n, 0, -1, n - 1, xi(k), xi(j), eta(k), eta(i))]
    (i,) = idx
    _, j, k = _cycle_of(i)
    if kind == "G":
        return [_op(1, n + 1, 1, 0, eta(i))]
    if kind == "G~":
        return [_op(1, n, 0, 0, xi(i)), _op(-n, 0, -1, n - 1, xi(i), xi(j), eta(j))]
    if kind == "T":
        return [_op(-1, n, 0, 0, eta(j), xi(j)), _op(-1, n, 0, 0, eta(k), xi(k)),
                _op(n, 0, -1, n - 1, xi(j), xi(k), eta(j), eta(k)), _op(1, n, 0, 0)]
    if kind == "S":
        return [_op(-1, n, 0, 0, eta(i), eta(j), xi(j)), _op(-1, n, 0, 0, eta(i), eta(k), xi(k)),
                _op(n, 0, -1, n - 1, xi(j), xi(k), eta(i), eta(j), eta(k)), _op(1, n, 0, 0, eta(i))]
    if kind == "S~":
        return [_op(1, 0, -1, n - 1, xi(j), xi(i), eta(j)), _op(-1, 0, -1, n - 1, xi(k), xi(i), eta(k))]
    if kind == "I":
        return [_op(1, 0, -1, n - 1, xi(j), xi(k), eta(i))]
    raise UnknownFieldError(f"CK6 has no field {name!r}")


def _split_name(name: str) -> Tuple[str, Tuple[int, ...]]:
    """``"T^{12}"`` -> ("T", (1, 2)); ``"G~^3"`` -> ("G~", (3,))."""
    if "^" not in name:
        return name, ()
    kind, rest = name.split("^", 1)
    rest = rest.strip("{}")
    if not rest.isdigit():
        raise UnknownFieldError(f"malformed field name {name!r}")
    return kind, tuple(int(ch) for ch in rest)


# --- family registry ------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldFamily:
    """One named field of an algebra; ``matrix(n)`` and ``symbol(n, floor)`` build mode ``n``."""
    algebra: str
    name: str
    parity: int
    matrix: Callable[[int], SuperMatrix]
    symbol: Callable[..., SymbolElement]
    operator: Optional[Callable[[int], List[OpTerm]]] = None


_NAMES = {
    "K2": ["L", "H", "G", "G~"],
    "K4hat": ["L", "Q", "X^1", "X^2", "Y^1", "Y^2", "R^{11}", "R^{12}", "R^{21}", "R^{22}",
              "Z^1", "Z^2", "G^0", "G^1", "G^2", "G^3"],
    "CK6": (["L"] + [f"G^{i}" for i in (1, 2, 3)] + [f"G~^{i}" for i in (1, 2, 3)]
            + [f"T^{{{i}{j}}}" for i in (1, 2, 3) for j in (1, 2, 3) if i != j]
            + ["J^{12}", "J^{13}", "J^{23}", "J~^{12}", "J~^{13}", "J~^{23}", "I"]
            + [f"{k}^{i}" for k in ("T", "S", "S~", "I") for i in (1, 2, 3)]),
}


def family_names(algebra: str) -> List[str]:
    if algebra not in _NAMES:
        raise ValueError(f"unknown algebra {algebra!r}; expected one of {ALGEBRAS}")
    return list(_NAMES[algebra])


def _parity_of(ops: List[OpTerm]) -> int:
    return len(ops[0].gens) % 2


def _make_family(algebra: str, name: str) -> FieldFamily:
    if algebra == "K2":
        parity = 1 if name in ("G", "G~") else 0
        return FieldFamily("K2", name, parity, lambda n, _nm=name: _k2_matrix(_nm, n),
                           lambda n, floor=None, _nm=name: _k2_symbol(_nm, n))
    ops = _k4hat_ops if algebra == "K4hat" else _ck6_ops

    def matrix(n, _nm=name, _alg=algebra):
        return _table_matrix(_alg, _nm, n)

    def symbol(n, floor=DEFAULT_TAU_FLOOR, _nm=name):
        return _symbol_cached(algebra, _nm, n, floor)

    return FieldFamily(algebra, name, _parity_of(ops(name, 1)), matrix, symbol,
                       lambda n, _nm=name: ops(_nm, n))


@lru_cache(maxsize=None)
def _symbol_cached(algebra: str, name: str, n: int, floor: int) -> SymbolElement:
    ops = _k4hat_ops if algebra == "K4hat" else _ck6_ops
    return operator_symbol(ops(name, n), floor)


@lru_cache(maxsize=None)
def families(algebra: str) -> Tuple[FieldFamily, ...]:
    """All field families of ``algebra`` in a fixed order."""
    return tuple(_make_family(algebra, nm) for nm in family_names(algebra))


def family(algebra: str, name: str) -> FieldFamily:
    for fam in families(algebra):
        if fam.name == name:
            return fam
    raise UnknownFieldError(f"{algebra} has no field {name!r}")


def _canonical(algebra: str, name: str) -> Tuple[str, int]:
    """Resolve ``J^{21}``-style names to ``(J^{12}, -1)``; reject ``T^{11}``."""
    kind, idx = _split_name(name)
    if len(idx) == 2:
        i, j = idx
        if i == j and algebra == "CK6":
            raise UnknownFieldError(f"invalid index combination in {name!r}")
        if algebra == "CK6" and kind in ("J", "J~") and i > j:
            return f"{kind}^{{{j}{i}}}", -1
    return name, 1


def field(algebra: str, name: str, n: int, picture: str = "matrix", floor: int = DEFAULT_TAU_FLOOR):
    """Mode ``n`` of a named field as a SuperMatrix or a SymbolElement."""
    canon, sign = _canonical(algebra, name)
    fam = family(algebra, canon)
    if picture == "matrix":
        out = fam.matrix(n)
    elif picture == "symbol":
        out = fam.symbol(n, floor)
    else:
        raise ValueError(f"unknown picture {picture!r}")
    return out if sign == 1 else out.scale(-1)


def k2_field(name: str, n: int, picture: str = "matrix"):
    return field("K2", name, n, picture)


def k4hat_field(name: str, n: int, picture: str = "matrix", floor: int = DEFAULT_TAU_FLOOR):
    return field("K4hat", name, n, picture, floor)


def ck6_field(name: str, n: int, picture: str = "matrix", floor: int = DEFAULT_TAU_FLOOR):
    return field("CK6", name, n, picture, floor)


def spo_in_fields(algebra: str) -> List[Tuple[str, SuperMatrix, SuperMatrix]]:
    """Odd spo generators next to their field expressions: ``(label, rho-side, field-side)``."""
    out = []
    if algebra == "K4hat":
        N = 2
        recipes = {
            "xi_1": (("Y^1", 1), ("G^2", -1)), "xi_2": (("Y^2", 1), ("G^1", 1)),
            "eta_1": (("X^1", 1), ("Z^2", 1)), "eta_2": (("X^2", 1), ("Z^1", -1)),
        }
    elif algebra == "CK6":
        N = 3
        recipes = {}
        for i in (1, 2, 3):
            recipes[f"xi_{i}"] = ((f"G~^{i}", 1), (f"S~^{i}", -1))
            recipes[f"eta_{i}"] = ((f"G^{i}", 1), (f"S^{i}", -1))
    else:
        raise ValueError(f"no spo identities recorded for {algebra!r}")
    for v, ((main, _), (corr, csign)) in recipes.items():
        for sign, tag in ((1, "+"), (-1, "-")):
            lhs = rho_pm(v, sign, N)
            rhs = field(algebra, main, sign) + field(algebra, corr, sign).scale(HALF * (csign * sign))
            out.append((f"rho({v})^{tag}", lhs, rhs))
    return out


# --- modules V^mu ----------------------------------------------------------------------------

# label -> (canonical word, sign, normalized by 1/(m + mu))
_MODULE_BASIS = {
    "K4hat": {"v0": ((), 1, False), "v1": ((1,), 1, False), "v2": ((2,), 1, False),
              "v3": ((1, 2), 1, True)},
    "CK6": {"vh1": ((2, 3), 1, True), "vh2": ((1, 3), -1, True), "vh3": ((1, 2), 1, True),
            "v4": ((), 1, False), "v1": ((1,), 1, False), "v2": ((2,), 1, False),
            "v3": ((3,), 1, False), "vh4": ((1, 2, 3), -1, True)},
}


def module_basis_labels(algebra: str) -> Tuple[str, ...]:
    return TABLES[algebra][1]


@dataclass
class ModuleVector:
    """Finite combination of basis vectors ``v^label_m(mu)``."""
    mu: object
    coords: Dict[Tuple[str, int], GaussianRational]

    @classmethod
    def basis(cls, label: str, m: int, mu=0) -> "ModuleVector":
        return cls(mpq(mu), {(label, m): ONE})

    def __post_init__(self):
        self.mu = mpq(self.mu) if not isinstance(self.mu, type(mpq(0))) else self.mu
        self.coords = {k: gq(v) for k, v in self.coords.items() if gq(v)}

    def __add__(self, other: "ModuleVector") -> "ModuleVector":
        if self.mu != other.mu:
            raise ValueError("vectors from different modules")
        out = dict(self.coords)
        for k, v in other.coords.items():
            out[k] = out.get(k, ZERO) + v
        return ModuleVector(self.mu, out)

    def scale(self, c) -> "ModuleVector":
        return ModuleVector(self.mu, {k: v * c for k, v in self.coords.items()})

    def __sub__(self, other):
        return self + other.scale(-1)

    def __eq__(self, other):
        return isinstance(other, ModuleVector) and self.mu == other.mu and self.coords == other.coords


def _check_mu(mu):
    if mu != 0 and mu.denominator == 1:
        raise ValueError("mu must be non-integer, or exactly 0 for the matrix basis")


def module_action(algebra: str, name: str, n: int, vec: ModuleVector) -> ModuleVector:
    """Action of mode ``n`` of a field on ``V^mu`` from the explicit coefficient table."""
    _check_mu(vec.mu)
    canon, sign = _canonical(algebra, name)
    table = TABLES[algebra][0]
    if canon not in table:
        raise UnknownFieldError(f"{algebra} has no field {name!r}")
    out: Dict[Tuple[str, int], GaussianRational] = {}
    for (label, m), c in vec.coords.items():
        for src, dst, kind, s in table[canon]:
            if src == label:
                key = (dst, m + n)
                out[key] = out.get(key, ZERO) + c * _kind_coeff(kind, m, n, vec.mu) * (s * sign)
    return ModuleVector(vec.mu, out)


def _to_function(algebra: str, vec: ModuleVector) -> Function:
    basis = _MODULE_BASIS[algebra]
    f: Function = {}
    for (label, m), c in vec.coords.items():
        word, sign, normed = basis[label]
        s = _norm_exp(mpq(m) + vec.mu)
        val = c * sign
        if normed:
            val = val / gq(s)
        key = (word, s)
        f[key] = f.get(key, ZERO) + val
    return f


def _from_function(algebra: str, f: Function, mu) -> ModuleVector:
    by_word = {word: (label, sign, normed) for label, (word, sign, normed) in _MODULE_BASIS[algebra].items()}
    out = {}
    for (w, s), c in f.items():
        label, sign, normed = by_word[w]
        m = s - mu
        m = int(m) if isinstance(m, int) else int(m.numerator)
        val = c * sign
        if normed:
            val = val * gq(s)
        out[(label, m)] = val
    return ModuleVector(mu, out)


def symbol_module_action(algebra: str, name: str, n: int, vec: ModuleVector) -> ModuleVector:
    """Action computed from the defining symbol: ``tau`` -> d/dt, ``tau^-1`` -> antiderivative.

    The central element (mode 0 of G^3 in K'(4)^) acts as the identity.  Requires
    non-integer ``mu``.
    """
    if vec.mu.denominator == 1:
        raise ValueError("the symbol action needs non-integer mu")
    canon, sign = _canonical(algebra, name)
    fam = family(algebra, canon)
    f = apply_operator(fam.operator(n), _to_function(algebra, vec))
    return _from_function(algebra, f, vec.mu).scale(sign)


def matrix_module_action(algebra: str, name: str, n: int, vec: ModuleVector) -> ModuleVector:
    """Action obtained by applying the Weyl entries of the matrix to ``t^{m + mu}``."""
    labels = TABLES[algebra][1]
    M = field(algebra, name, n)
    out: Dict[Tuple[str, int], GaussianRational] = {}
    for (label, m), c in vec.coords.items():
        col = labels.index(label)
        for (i, j), w in M.entries.items():
            if j != col:
                continue
            s = mpq(m) + vec.mu
            for e, val in _apply_weyl(w, s).items():
                key = (labels[i], int(e - vec.mu))
                out[key] = out.get(key, ZERO) + c * val
    return ModuleVector(vec.mu, out)


def _apply_weyl(w: WeylElement, s) -> Dict:
    return {mpq(e): c for e, c in weyl_apply(w, {s: 1}).items()}
