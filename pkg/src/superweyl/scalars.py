"""Exact arithmetic over the Gaussian rationals Q(i) and exact linear solving.

Rationals are ``gmpy2.mpq`` (arbitrary precision, always in lowest terms with a
positive denominator).  Every span or closure computation in the package goes
through :class:`LinearSpan`, a sparse reduced row-echelon accumulator.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Dict, Hashable, Iterable, List, Mapping, Optional, Sequence

from gmpy2 import mpq, mpz

__all__ = [
    "GaussianRational",
    "GaussianDivisionError",
    "ZERO",
    "ONE",
    "I",
    "gq",
    "scalar_arith",
    "LinearSpan",
    "solve_linear_system",
]

_MPQ_ZERO = mpq(0)
_MPQ_ONE = mpq(1)


class GaussianDivisionError(ZeroDivisionError):
    """Raised on division by the zero Gaussian rational."""


def _to_mpq(x) -> mpq:
    if type(x) is mpq:
        return x
    if isinstance(x, (int, mpz)):
        return mpq(x)
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, Rational):
        return mpq(int(x.numerator), int(x.denominator))
    if isinstance(x, str):
        return mpq(Fraction(x).numerator, Fraction(x).denominator)
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass an exact rational")
    raise TypeError(f"cannot interpret {x!r} as a rational")


class GaussianRational:
    """An exact complex number ``re + im*i`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _to_mpq(re)
        self.im = _to_mpq(im)

    @classmethod
    def _raw(cls, re: mpq, im: mpq) -> "GaussianRational":
        obj = object.__new__(cls)
        obj.re = re
        obj.im = im
        return obj

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        if type(other) is not GaussianRational:
            try:
                return GaussianRational._raw(self.re + _to_mpq(other), self.im)
            except TypeError:
                return NotImplemented
        return GaussianRational._raw(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        if type(other) is not GaussianRational:
            try:
                return GaussianRational._raw(self.re - _to_mpq(other), self.im)
            except TypeError:
                return NotImplemented
        return GaussianRational._raw(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        try:
            return GaussianRational._raw(_to_mpq(other) - self.re, -self.im)
        except TypeError:
            return NotImplemented

    def __neg__(self):
        return GaussianRational._raw(-self.re, -self.im)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if type(other) is not GaussianRational:
            try:
                q = _to_mpq(other)
            except TypeError:
                return NotImplemented
            return GaussianRational._raw(self.re * q, self.im * q)
        a, b, c, d = self.re, self.im, other.re, other.im
        if not b and not d:
            return GaussianRational._raw(a * c, _MPQ_ZERO)
        return GaussianRational._raw(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def inverse(self) -> "GaussianRational":
        a, b = self.re, self.im
        if not b:
            if not a:
                raise GaussianDivisionError("division by zero in Q(i)")
            return GaussianRational._raw(_MPQ_ONE / a, _MPQ_ZERO)
        norm = a * a + b * b
        return GaussianRational._raw(a / norm, -b / norm)

    def __truediv__(self, other):
        if type(other) is not GaussianRational:
            try:
                other = GaussianRational(other)
            except TypeError:
                return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        try:
            other = GaussianRational(other)
        except TypeError:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        base = self if k >= 0 else self.inverse()
        out = ONE
        for _ in range(abs(k)):
            out = out * base
        return out

    def conjugate(self) -> "GaussianRational":
        return GaussianRational._raw(self.re, -self.im)

    # -- comparisons --------------------------------------------------------
    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if type(other) is GaussianRational:
            return self.re == other.re and self.im == other.im
        try:
            q = _to_mpq(other)
        except TypeError:
            return NotImplemented
        return not self.im and self.re == q

    def __hash__(self):
        if not self.im:
            return hash(Fraction(int(self.re.numerator), int(self.re.denominator)))
        return hash((int(self.re.numerator), int(self.re.denominator),
                     int(self.im.numerator), int(self.im.denominator)))

    @property
    def is_real(self) -> bool:
        return not self.im

    # -- text / json --------------------------------------------------------
    @staticmethod
    def _fmt(q: mpq) -> str:
        return str(int(q.numerator)) if q.denominator == 1 else f"{int(q.numerator)}/{int(q.denominator)}"

    def __str__(self):
        if not self.im:
            return self._fmt(self.re)
        if not self.re:
            return f"{self._fmt(self.im)}*i"
        sign = "-" if self.im < 0 else "+"
        return f"({self._fmt(self.re)} {sign} {self._fmt(abs(self.im))}*i)"

    def __repr__(self):
        return f"GaussianRational({self._fmt(self.re)!r}, {self._fmt(self.im)!r})"

    def to_json(self) -> dict:
        return {
            "re": [int(self.re.numerator), int(self.re.denominator)],
            "im": [int(self.im.numerator), int(self.im.denominator)],
        }

    @classmethod
    def from_json(cls, obj: Mapping) -> "GaussianRational":
        (rn, rd), (inum, iden) = obj["re"], obj["im"]
        if rd <= 0 or iden <= 0:
            raise ValueError("denominators must be positive")
        return cls(mpq(rn, rd), mpq(inum, iden))


def gq(x) -> GaussianRational:
    """Coerce an int/Fraction/mpq/str/GaussianRational to a GaussianRational."""
    if type(x) is GaussianRational:
        return x
    return GaussianRational(x)


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)


def scalar_arith(a, b, op: str) -> GaussianRational:
    """Apply ``op`` in {"add", "mul", "div"} to two Gaussian rationals."""
    a, b = gq(a), gq(b)
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


class LinearSpan:
    """Incremental span of sparse vectors in reduced row-echelon form.

    Vectors are mappings from orderable keys to :class:`GaussianRational`.
    Each stored row has a pivot key at which it equals 1 and every other row
    is zero there, so reducing a vector needs one pass over its keys.  With
    ``track=True`` each row remembers its expression in terms of the labelled
    vectors that were added, which is what :meth:`coordinates` reports.
    """

    def __init__(self, track: bool = True):
        self.track = track
        self.rows: Dict[Hashable, Dict[Hashable, GaussianRational]] = {}
        self.combos: Dict[Hashable, Dict[Hashable, GaussianRational]] = {}
        self.labels: List[Hashable] = []

    def __len__(self):
        return len(self.rows)

    @property
    def dim(self) -> int:
        return len(self.rows)

    def _reduce(self, vec: Mapping):
        rows = self.rows
        out = {k: v for k, v in vec.items() if v}
        used = [(p, out[p]) for p in out if p in rows]
        for p, c in used:
            for k, v in rows[p].items():
                nv = out.get(k, ZERO) - c * v
                if nv:
                    out[k] = nv
                else:
                    out.pop(k, None)
        return out, used

    def reduce(self, vec: Mapping) -> Dict:
        """Residual of ``vec`` modulo the span (empty dict means membership)."""
        return self._reduce(vec)[0]

    def contains(self, vec: Mapping) -> bool:
        return not self._reduce(vec)[0]

    def add(self, vec: Mapping, label: Hashable = None) -> bool:
        """Add ``vec``; return True if it enlarged the span."""
        residual, used = self._reduce(vec)
        if label is None:
            label = len(self.labels)
        self.labels.append(label)
        if not residual:
            return False
        pivot = min(residual)
        inv = residual[pivot].inverse()
        row = {k: v * inv for k, v in residual.items()}
        combo = None
        if self.track:
            combo = {label: inv}
            for p, c in used:
                for lab, w in self.combos[p].items():
                    nw = combo.get(lab, ZERO) - c * inv * w
                    if nw:
                        combo[lab] = nw
                    else:
                        combo.pop(lab, None)
        for p, other in self.rows.items():
            c = other.get(pivot)
            if c:
                for k, v in row.items():
                    nv = other.get(k, ZERO) - c * v
                    if nv:
                        other[k] = nv
                    else:
                        del other[k]
                if self.track:
                    oc = self.combos[p]
                    for lab, w in combo.items():
                        nw = oc.get(lab, ZERO) - c * w
                        if nw:
                            oc[lab] = nw
                        else:
                            del oc[lab]
        self.rows[pivot] = row
        if self.track:
            self.combos[pivot] = combo
        return True

    def coordinates(self, vec: Mapping) -> Optional[Dict[Hashable, GaussianRational]]:
        """Coefficients over the added labels reproducing ``vec``, or None."""
        if not self.track:
            raise RuntimeError("coordinates need a span built with track=True")
        residual, used = self._reduce(vec)
        if residual:
            return None
        out: Dict[Hashable, GaussianRational] = {}
        for p, c in used:
            for lab, w in self.combos[p].items():
                nw = out.get(lab, ZERO) + c * w
                if nw:
                    out[lab] = nw
                else:
                    out.pop(lab, None)
        return out


def solve_linear_system(columns: Sequence[Sequence], target: Sequence) -> Optional[List[GaussianRational]]:
    """Exact coefficients ``c`` with ``sum(c[i] * columns[i]) == target``.

    Returns None when the target is outside the column span.  Columns that
    depend on earlier ones receive coefficient zero.
    """
    n = len(target)
    for col in columns:
        if len(col) != n:
            raise ValueError(f"dimension mismatch: column of length {len(col)} against target of length {n}")
    span = LinearSpan(track=True)
    for idx, col in enumerate(columns):
        span.add({r: gq(v) for r, v in enumerate(col) if v}, label=idx)
    coords = span.coordinates({r: gq(v) for r, v in enumerate(target) if v})
    if coords is None:
        return None
    return [coords.get(idx, ZERO) for idx in range(len(columns))]


def dense(vec: Mapping, basis: Iterable[Hashable]) -> List[GaussianRational]:
    """Dense coordinate list of a sparse vector relative to an ordered basis."""
    return [gq(vec.get(b, ZERO)) for b in basis]
