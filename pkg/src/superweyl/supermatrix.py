"""Z2-graded square matrices over Q(i) or over the Weyl algebra.

Rows and columns ``0..m-1`` span the even subspace, ``m..m+n-1`` the odd one.
A matrix is even when it is block diagonal and odd when it lives in the two
off-diagonal blocks.  The block below the diagonal (even -> odd) carries the
grade -1 and the block above it (odd -> even) the grade +1; this is the
placement under which the explicit N = 1 matrices come out verbatim.
"""

from __future__ import annotations

from typing import Dict, Iterable, List, Optional, Tuple

from .scalars import ZERO, GaussianRational, gq
from .weyl import WeylElement, weyl_mul

__all__ = ["SuperMatrix", "mat_mul", "superbracket", "parity_decompose", "ShapeError"]

EVEN, ODD, MIXED = "even", "odd", "mixed"


class ShapeError(ValueError):
    """Raised when two supermatrices of different block shapes are combined."""


def _is_weyl(x) -> bool:
    return isinstance(x, WeylElement)


class SuperMatrix:
    """Sparse (m|n) supermatrix; entries are GaussianRational or WeylElement.

    ``ring`` is ``"scalar"`` or ``"weyl"``.  Instances are treated as immutable.
    """

    __slots__ = ("m", "n", "ring", "entries", "_parity")

    def __init__(self, m: int, n: int, entries: Dict[Tuple[int, int], object] = None,
                 ring: str = "weyl", parity: Optional[str] = None):
        self.m, self.n, self.ring = m, n, ring
        size = m + n
        clean = {}
        for (i, j), v in (entries or {}).items():
            if not (0 <= i < size and 0 <= j < size):
                raise IndexError(f"entry ({i}, {j}) outside a {size}x{size} matrix")
            v = _coerce(v, ring)
            if v:
                clean[(i, j)] = v
        self.entries = clean
        self._parity = None
        actual = self.parity
        if parity is not None and parity != actual and clean:
            raise ValueError(f"declared parity {parity} but entries give {actual}")

    @classmethod
    def _raw(cls, m, n, entries, ring):
        obj = object.__new__(cls)
        obj.m, obj.n, obj.ring, obj.entries, obj._parity = m, n, ring, entries, None
        return obj

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls, m, n, ring="weyl"):
        return cls._raw(m, n, {}, ring)

    @classmethod
    def identity(cls, m, n, ring="weyl", value=1):
        return cls(m, n, {(i, i): value for i in range(m + n)}, ring)

    @classmethod
    def elementary(cls, m, n, i, j, value=1, ring="weyl"):
        return cls(m, n, {(i, j): value}, ring)

    @classmethod
    def diagonal_blocks(cls, m, n, even_value, odd_value, ring="weyl"):
        """``(even_value * 1_m | odd_value * 1_n)``."""
        entries = {(i, i): even_value for i in range(m)}
        entries.update({(i, i): odd_value for i in range(m, m + n)})
        return cls(m, n, entries, ring)

    # -- structure ----------------------------------------------------------
    @property
    def size(self) -> int:
        return self.m + self.n

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.m, self.n)

    def block(self, i: int, j: int) -> int:
        """Block grade of position (i, j): 0 diagonal, +1 odd->even, -1 even->odd."""
        ei, ej = i < self.m, j < self.m
        if ei == ej:
            return 0
        return 1 if ei else -1

    @property
    def parity(self) -> str:
        if self._parity is None:
            blocks = {self.block(i, j) != 0 for (i, j) in self.entries}
            if not blocks or blocks == {False}:
                self._parity = EVEN
            elif blocks == {True}:
                self._parity = ODD
            else:
                self._parity = MIXED
        return self._parity

    @property
    def parity_bit(self) -> int:
        p = self.parity
        if p == MIXED:
            raise ValueError("mixed-parity matrix has no parity bit")
        return 0 if p == EVEN else 1

    def _check(self, other: "SuperMatrix"):
        if (self.m, self.n) != (other.m, other.n):
            raise ShapeError(f"shape mismatch: ({self.m}|{self.n}) vs ({other.m}|{other.n})")

    def to_weyl(self) -> "SuperMatrix":
        if self.ring == "weyl":
            return self
        return SuperMatrix._raw(self.m, self.n,
                                {k: WeylElement.scalar(v) for k, v in self.entries.items()}, "weyl")

    def _align(self, other):
        self._check(other)
        if self.ring == other.ring:
            return self, other
        return self.to_weyl(), other.to_weyl()

    # -- linear structure ---------------------------------------------------
    def __add__(self, other):
        a, b = self._align(other)
        out = dict(a.entries)
        for k, v in b.entries.items():
            nv = out[k] + v if k in out else v
            if nv:
                out[k] = nv
            else:
                out.pop(k, None)
        return SuperMatrix._raw(a.m, a.n, out, a.ring)

    def __neg__(self):
        return SuperMatrix._raw(self.m, self.n, {k: -v for k, v in self.entries.items()}, self.ring)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "SuperMatrix":
        c = gq(c)
        if not c:
            return SuperMatrix.zero(self.m, self.n, self.ring)
        if self.ring == "weyl":
            out = {k: v.scale(c) for k, v in self.entries.items()}
        else:
            out = {k: v * c for k, v in self.entries.items()}
        return SuperMatrix._raw(self.m, self.n, out, self.ring)

    def left_mul_entries(self, w: WeylElement) -> "SuperMatrix":
        """Multiply every entry on the left by the Weyl element ``w``."""
        a = self.to_weyl()
        out = {}
        for k, v in a.entries.items():
            nv = weyl_mul(w, v)
            if nv:
                out[k] = nv
        return SuperMatrix._raw(a.m, a.n, out, "weyl")

    def __mul__(self, other):
        if isinstance(other, SuperMatrix):
            return mat_mul(self, other)
        if isinstance(other, WeylElement):
            raise TypeError("use left_mul_entries for Weyl scalars")
        return self.scale(other)

    def __rmul__(self, other):
        if isinstance(other, WeylElement):
            return self.left_mul_entries(other)
        return self.scale(other)

    __matmul__ = __mul__

    def __bool__(self):
        return bool(self.entries)

    def __eq__(self, other):
        if not isinstance(other, SuperMatrix):
            return NotImplemented
        if (self.m, self.n) != (other.m, other.n):
            return False
        if self.ring == other.ring:
            return self.entries == other.entries
        a, b = self.to_weyl(), other.to_weyl()
        return a.entries == b.entries

    __hash__ = None

    def entry(self, i, j):
        v = self.entries.get((i, j))
        if v is None:
            return WeylElement() if self.ring == "weyl" else ZERO
        return v

    # -- flattening ---------------------------------------------------------
    def to_vector(self) -> Dict[Tuple[int, int, int, int], GaussianRational]:
        """Coordinates over the monomial basis ``E^{i,j} t^a d^k``."""
        vec = {}
        for (i, j), v in self.entries.items():
            if self.ring == "weyl":
                for (a, k), c in v.terms.items():
                    vec[(i, j, a, k)] = c
            else:
                vec[(i, j, 0, 0)] = v
        return vec

    @classmethod
    def from_vector(cls, m, n, vec) -> "SuperMatrix":
        entries: Dict[Tuple[int, int], Dict] = {}
        for (i, j, a, k), c in vec.items():
            entries.setdefault((i, j), {})[(a, k)] = c
        return cls(m, n, {ij: WeylElement(terms) for ij, terms in entries.items()}, "weyl")

    def mode(self):
        """Common grading ``deg t = 1, deg d = -1`` of all entries, or None."""
        if self.ring == "scalar":
            return 0 if self.entries else None
        degs = {a - k for v in self.entries.values() for (a, k) in v.terms}
        return degs.pop() if len(degs) == 1 else None

    # -- text ---------------------------------------------------------------
    def dump(self) -> str:
        """Row-major text with ``|`` between the even and odd column blocks."""
        lines = []
        size = self.size
        for i in range(size):
            if i == self.m and self.m and self.n:
                lines.append("-" * 8)
            cells = [str(self.entry(i, j)) for j in range(self.m)]
            cells_odd = [str(self.entry(i, j)) for j in range(self.m, size)]
            lines.append("[ " + ", ".join(cells) + " | " + ", ".join(cells_odd) + " ]")
        return "\n".join(lines)

    def __repr__(self):
        return f"SuperMatrix(({self.m}|{self.n}), {self.parity}, {len(self.entries)} nonzero)"


def _coerce(v, ring):
    if ring == "weyl":
        return v if isinstance(v, WeylElement) else WeylElement.scalar(v)
    if isinstance(v, WeylElement):
        raise TypeError("Weyl entry in a scalar matrix")
    return gq(v)


def mat_mul(A: SuperMatrix, B: SuperMatrix) -> SuperMatrix:
    """Ordinary matrix product with ring multiplication of the entries."""
    A, B = A._align(B)
    weyl = A.ring == "weyl"
    by_row: Dict[int, List] = {}
    for (s, j), v in B.entries.items():
        by_row.setdefault(s, []).append((j, v))
    out = {}
    for (i, s), u in A.entries.items():
        for j, v in by_row.get(s, ()):
            prod = weyl_mul(u, v) if weyl else u * v
            if not prod:
                continue
            key = (i, j)
            if key in out:
                nv = out[key] + prod
                if nv:
                    out[key] = nv
                else:
                    del out[key]
            else:
                out[key] = prod
    return SuperMatrix._raw(A.m, A.n, out, A.ring)


def parity_decompose(A: SuperMatrix) -> Tuple[SuperMatrix, SuperMatrix]:
    """Split into (block-diagonal part, off-diagonal part)."""
    even, odd = {}, {}
    for (i, j), v in A.entries.items():
        (odd if A.block(i, j) else even)[(i, j)] = v
    return (SuperMatrix._raw(A.m, A.n, even, A.ring), SuperMatrix._raw(A.m, A.n, odd, A.ring))


def block_part(A: SuperMatrix, grade: int) -> SuperMatrix:
    """The part of ``A`` in block grade -1, 0 or +1."""
    return SuperMatrix._raw(A.m, A.n, {k: v for k, v in A.entries.items() if A.block(*k) == grade}, A.ring)


def superbracket(A: SuperMatrix, B: SuperMatrix) -> SuperMatrix:
    """``AB - (-1)^{p(A)p(B)} BA``, extended bilinearly to mixed inputs."""
    A._check(B)
    if A.parity == MIXED or B.parity == MIXED:
        out = SuperMatrix.zero(A.m, A.n, "weyl" if "weyl" in (A.ring, B.ring) else "scalar")
        for a in parity_decompose(A):
            for b in parity_decompose(B):
                if a and b:
                    out = out + superbracket(a, b)
        return out
    ab = mat_mul(A, B)
    ba = mat_mul(B, A)
    if A.parity == ODD and B.parity == ODD:
        return ab + ba
    return ab - ba
