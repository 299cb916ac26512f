"""Exact integer matrices for SL(d,Z) and PSL(d,Z), plus operator norms.

Group arithmetic in this module never rounds: entries are Python ints,
products and inverses are exact.  Only operator_norm leaves the integers,
and it rescales first so that arbitrarily large entries stay representable.
"""

from __future__ import annotations

import itertools
import json
import math
from fractions import Fraction

from . import linalg
from .tolerances import TOL


class ExactMatrix:
    """Immutable d x d integer matrix."""

    __slots__ = ("dim", "entries")

    def __init__(self, entries):
        rows = tuple(tuple(int(v) for v in row) for row in entries)
        d = len(rows)
        if d == 0 or any(len(r) != d for r in rows):
            raise ValueError("entries must form a non-empty square matrix")
        object.__setattr__(self, "dim", d)
        object.__setattr__(self, "entries", rows)

    def __setattr__(self, *_):
        raise AttributeError("ExactMatrix is immutable")

    @classmethod
    def identity(cls, d: int) -> "ExactMatrix":
        return cls(tuple(tuple(1 if i == j else 0 for j in range(d)) for i in range(d)))

    @classmethod
    def elementary(cls, d: int, i: int, j: int, t: int) -> "ExactMatrix":
        """Identity with the extra entry t at position (i, j), 1-based."""
        if not (1 <= i <= d and 1 <= j <= d) or i == j:
            raise ValueError("need 1 <= i != j <= d")
        rows = [[1 if a == b else 0 for b in range(d)] for a in range(d)]
        rows[i - 1][j - 1] = int(t)
        return cls(rows)

    def __getitem__(self, ij):
        return self.entries[ij[0]][ij[1]]

    def __eq__(self, other):
        return isinstance(other, ExactMatrix) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __neg__(self):
        return ExactMatrix(tuple(tuple(-v for v in row) for row in self.entries))

    def __mul__(self, other):
        return mat_mul(self, other)

    def __pow__(self, e: int):
        if e < 0:
            return mat_inv(self) ** (-e)
        result = ExactMatrix.identity(self.dim)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __repr__(self):
        return f"ExactMatrix({[list(r) for r in self.entries]})"

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(tuple(zip(*self.entries)))

    def det(self) -> int:
        return _int_det(self.entries)

    def is_identity(self) -> bool:
        return self == ExactMatrix.identity(self.dim)

    def to_json(self) -> str:
        return json.dumps({"dim": self.dim, "entries": [[str(v) for v in row] for row in self.entries]})

    @classmethod
    def from_json(cls, text: str) -> "ExactMatrix":
        data = json.loads(text) if isinstance(text, str) else text
        return cls([[int(v) for v in row] for row in data["entries"]])


def _int_det(rows) -> int:
    """Fraction-free determinant (Bareiss) over the integers."""
    n = len(rows)
    m = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k] != 0:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[-1][-1]


def mat_mul(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    """Exact product of two matrices of equal dimension."""
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    bt = tuple(zip(*b.entries))
    return ExactMatrix(tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a.entries))


def mat_inv(a: ExactMatrix) -> ExactMatrix:
    """Inverse of a determinant-1 integer matrix (the adjugate)."""
    if a.det() != 1:
        raise ValueError("mat_inv requires determinant exactly 1")
    d = a.dim
    if d == 1:
        return ExactMatrix(((1,),))
    if d == 2:
        (u, v), (w, z) = a.entries
        return ExactMatrix(((z, -v), (-w, u)))
    cof = [[0] * d for _ in range(d)]
    for i in range(d):
        for j in range(d):
            minor = [row[:j] + row[j + 1:] for k, row in enumerate(a.entries) if k != i]
            cof[i][j] = (-1) ** (i + j) * _int_det(minor)
    return ExactMatrix(tuple(zip(*cof)))  # adjugate = transposed cofactors


def max_abs_entry(a: ExactMatrix) -> int:
    return max(abs(v) for row in a.entries for v in row)


def operator_norm(a: ExactMatrix) -> float:
    """Largest singular value of a, to relative accuracy ~1e-12.

    Entries may be arbitrarily large, so the matrix is scaled by its
    largest entry before any float conversion.
    """
    scale = max_abs_entry(a)
    if scale == 0:
        return 0.0
    scaled = [[float(Fraction(v, scale)) for v in row] for row in a.entries]
    return scale * linalg.operator_norm(scaled)


def log_operator_norm(a: ExactMatrix) -> float:
    """log(operator_norm(a)), safe even when the norm overflows a float."""
    scale = max_abs_entry(a)
    if scale == 0:
        raise ValueError("zero matrix")
    scaled = [[float(Fraction(v, scale)) for v in row] for row in a.entries]
    return math.log(scale) + math.log(linalg.operator_norm(scaled))


class PslElement:
    """Coset of +/-I in SL(d,Z), held as a canonical representative.

    For even d the representative is the sign choice whose first non-zero
    entry in row-major order is positive; for odd d the matrix itself.
    """

    __slots__ = ("rep",)

    def __init__(self, rep: ExactMatrix):
        object.__setattr__(self, "rep", rep)

    def __setattr__(self, *_):
        raise AttributeError("PslElement is immutable")

    def __eq__(self, other):
        return isinstance(other, PslElement) and self.rep == other.rep

    def __hash__(self):
        return hash(self.rep)

    def __mul__(self, other):
        return psl_canonicalize(mat_mul(self.rep, other.rep))

    def inverse(self) -> "PslElement":
        return psl_canonicalize(mat_inv(self.rep))

    def is_identity(self) -> bool:
        return self.rep.is_identity()

    @property
    def dim(self) -> int:
        return self.rep.dim

    def __repr__(self):
        return f"PslElement({[list(r) for r in self.rep.entries]})"


def psl_canonicalize(a: ExactMatrix) -> PslElement:
    """Canonical coset representative of a in PSL(d,Z)."""
    if a.det() != 1:
        raise ValueError("psl_canonicalize requires determinant exactly 1")
    if a.dim % 2 == 1:
        return PslElement(a)
    for row in a.entries:
        for v in row:
            if v != 0:
                return PslElement(a if v > 0 else -a)
    raise ValueError("zero matrix cannot lie in SL(d,Z)")


def _det1_permutation_matrices(d):
    """Non-identity permutation matrices of determinant 1, plus the odd
    permutations with a single entry flipped to -1 (one variant per
    position of the flipped entry)."""
    mats = []
    for perm in itertools.permutations(range(d)):
        rows = [[1 if j == perm[i] else 0 for j in range(d)] for i in range(d)]
        m = ExactMatrix(rows)
        if m.det() == 1:
            if not m.is_identity():
                mats.append(m)
        else:
            for i in range(d):
                flipped = [row[:] for row in rows]
                flipped[i][perm[i]] = -1
                mats.append(ExactMatrix(flipped))
    return mats


class GeneratorSet:
    """A named finite generating set of PSL(d,Z)."""

    __slots__ = ("dim", "names", "elements", "_index")

    def __init__(self, dim, names, elements):
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "names", tuple(names))
        object.__setattr__(self, "elements", tuple(elements))
        object.__setattr__(self, "_index", {g.rep.entries: i for i, g in enumerate(self.elements)})

    def __setattr__(self, *_):
        raise AttributeError("GeneratorSet is immutable")

    def __len__(self):
        return len(self.elements)

    def __getitem__(self, i) -> PslElement:
        return self.elements[i]

    def index_of(self, g: PslElement) -> int:
        try:
            return self._index[g.rep.entries]
        except KeyError:
            raise ValueError("element is not a generator") from None

    def index_of_matrix(self, m: ExactMatrix) -> int:
        return self.index_of(psl_canonicalize(m))

    def with_extra(self, name: str, element: PslElement) -> "GeneratorSet":
        return GeneratorSet(self.dim, self.names + (name,), self.elements + (element,))

    @classmethod
    def sigma(cls, d: int) -> "GeneratorSet":
        """The standard generating set: one-above-diagonal elementaries,
        determinant-1 permutation matrices, and sign-adjusted odd
        permutation matrices."""
        if d < 2:
            raise ValueError("need d >= 2")
        names, elements, seen = [], [], set()

        def add(name, mat):
            g = psl_canonicalize(mat)
            if g.rep.entries not in seen:
                seen.add(g.rep.entries)
                names.append(name)
                elements.append(g)

        for i in range(1, d + 1):
            for j in range(i + 1, d + 1):
                add(f"e{i}{j}", ExactMatrix.elementary(d, i, j, 1))
        for m in _det1_permutation_matrices(d):
            perm_digits = "".join(str(1 + next(k for k, v in enumerate(row) if v != 0)) for row in m.entries)
            sign_pos = [str(1 + r) for r, row in enumerate(m.entries) if any(v < 0 for v in row)]
            name = f"p{perm_digits}" if not sign_pos else f"p{perm_digits}n{sign_pos[0]}"
            add(name, m)
        if d == 2:
            names = ["u", "v"]
        return cls(d, names, elements)


def norm_entry_bounds(a: ExactMatrix) -> tuple:
    """(lower, upper) bracket of operator_norm(a) by its largest entry:
    max|a_ij| <= ||a|| <= d^(3/2) max|a_ij|."""
    m = max_abs_entry(a)
    return float(m), a.dim ** 1.5 * float(m)
