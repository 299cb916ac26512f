"""The space of symmetric positive-definite matrices of determinant 1.

The distance is d(S1, S2) = log lam_max(S1^-1 S2) + log lam_max(S2^-1 S1),
the spread of the generalized eigenvalues of the pair (S2, S1).  Writing
S_i = F_i F_i^T for any factor F_i, the eigenvalues of S1^-1 S2 are the
squared singular values of F1^-1 F2, so

    d(S1, S2) = 2 log||F1^-1 F2|| + 2 log||F2^-1 F1||

in the operator norm, which is how it is computed here (with Cholesky
factors; any factor gives the same value).  This is the reading of
"log||S1^-1 S2|| + log||S2^-1 S1||" under which the congruence action
M . S = M S M^T acts by isometries: (M.S1)^-1 (M.S2) is only similar to
S1^-1 S2, so its eigenvalues are invariant while its raw operator norm is
not.  The action descends to PSL(n,R) since M and -M act identically.
The upper half-plane embeds in the n = 2 case as a similarity with
d_P = 2 d_U.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .exactmat import ExactMatrix, PslElement, mat_inv, mat_mul
from .tolerances import TOL


def _rows_of(m):
    if isinstance(m, SpdPoint):
        return [list(r) for r in m.entries]
    if isinstance(m, PslElement):
        return [[float(v) for v in row] for row in m.rep.entries]
    if isinstance(m, ExactMatrix):
        return [[float(v) for v in row] for row in m.entries]
    return [list(map(float, row)) for row in m]


@dataclass(frozen=True)
class SpdPoint:
    """Symmetric positive-definite matrix with determinant 1."""

    entries: tuple

    def __post_init__(self):
        rows = tuple(tuple(float(v) for v in row) for row in self.entries)
        object.__setattr__(self, "entries", rows)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("entries must be square")
        scale = max(abs(v) for row in rows for v in row) or 1.0
        for i in range(n):
            for j in range(i + 1, n):
                if abs(rows[i][j] - rows[j][i]) > TOL.spd_symmetry * scale:
                    raise ValueError("matrix is not symmetric")
        eigs = linalg.sym_eigvals([list(r) for r in rows])
        if eigs[0] <= 0:
            raise ValueError("matrix is not positive definite")
        if abs(linalg.det([list(r) for r in rows]) - 1.0) > TOL.spd_det * scale ** n:
            raise ValueError("determinant must be 1")

    @property
    def dim(self) -> int:
        return len(self.entries)

    def matrix(self):
        return [list(r) for r in self.entries]

    @classmethod
    def identity(cls, n: int) -> "SpdPoint":
        return cls(tuple(tuple(1.0 if i == j else 0.0 for j in range(n)) for i in range(n)))

    def to_json(self) -> dict:
        return {"dim": self.dim, "entries": [list(r) for r in self.entries]}

    @classmethod
    def from_json(cls, data) -> "SpdPoint":
        return cls(tuple(tuple(row) for row in data["entries"]))


def dist_P(s1: SpdPoint, s2: SpdPoint) -> float:
    """log lam_max(S1^-1 S2) + log lam_max(S2^-1 S1).

    Computed through Cholesky factor quotients, which keeps both extreme
    generalized eigenvalues at full relative accuracy even when their
    ratio is astronomically large.
    """
    if s1.dim != s2.dim:
        raise ValueError("dimension mismatch")
    f1 = linalg.cholesky(s1.matrix())
    f2 = linalg.cholesky(s2.matrix())
    m = linalg.forward_solve(f1, f2)
    m_inv = linalg.forward_solve(f2, f1)
    return 2.0 * (math.log(linalg.operator_norm(m)) + math.log(linalg.operator_norm(m_inv)))


def act(m, s: SpdPoint) -> SpdPoint:
    """The congruence action M . S = M S M^T of a determinant-1 matrix."""
    if isinstance(m, PslElement):
        m = m.rep
    if isinstance(m, ExactMatrix):
        if m.det() != 1:
            raise ValueError("matrix must have determinant 1")
        rows = _rows_of(m)
    else:
        rows = _rows_of(m)
        if abs(linalg.det(rows) - 1.0) > TOL.det_one * max(1.0, linalg.frobenius(rows)) ** len(rows):
            raise ValueError("matrix must have determinant 1")
    out = linalg.matmul(linalg.matmul(rows, s.matrix()), linalg.transpose(rows))
    # symmetrise away rounding noise before validation
    n = len(out)
    sym = tuple(tuple((out[i][j] + out[j][i]) / 2.0 for j in range(n)) for i in range(n))
    return SpdPoint(sym)


def kak_sln(m) -> tuple:
    """M = K1 A K2 with K1, K2 special orthogonal and A positive diagonal
    of determinant 1.  Returns (k1, a, k2) as row lists."""
    rows = _rows_of(m)
    n = len(rows)
    gram = linalg.matmul(rows, linalg.transpose(rows))
    eigs, vecs = linalg.jacobi_eigh(gram)
    order = sorted(range(n), key=lambda i: -eigs[i])
    v = [[vecs[i][j] for j in order] for i in range(n)]
    if linalg.det(v) < 0:
        for i in range(n):
            v[i][0] = -v[i][0]
    d = [math.sqrt(max(eigs[j], 1e-300)) for j in order]
    # renormalise the product of the diagonal to exactly 1
    prod = math.prod(d)
    d = [x / prod ** (1.0 / n) for x in d]
    a = [[d[i] if i == j else 0.0 for j in range(n)] for i in range(n)]
    a_inv_vt = [[v[j][i] / d[i] for j in range(n)] for i in range(n)]
    k2 = linalg.matmul(a_inv_vt, rows)
    return v, a, k2


def sqrt_witness(s: SpdPoint):
    """A determinant-1 matrix M with M . I = S (rows of M)."""
    eigs, vecs = linalg.jacobi_eigh(s.matrix())
    n = s.dim
    v = [row[:] for row in vecs]
    if linalg.det(v) < 0:
        for i in range(n):
            v[i][0] = -v[i][0]
    d = [math.sqrt(max(e, 1e-300)) for e in eigs]
    prod = math.prod(d)
    d = [x / prod ** (1.0 / n) for x in d]
    return [[v[i][j] * d[j] for j in range(n)] for i in range(n)]


# --------------------------------------------------------------------------
# The upper half-plane inside the n = 2 space
# --------------------------------------------------------------------------

def phi_u2_to_p2(z: complex) -> SpdPoint:
    """Image of z = x + iy under g . I with g = [[sqrt y, x/sqrt y], [0, 1/sqrt y]]."""
    if z.imag <= 0:
        raise ValueError("point must lie in the upper half-plane")
    x, y = z.real, z.imag
    return SpdPoint((((x * x + y * y) / y, x / y), (x / y, 1.0 / y)))


def phi_p2_to_u2(s: SpdPoint) -> complex:
    if s.dim != 2:
        raise ValueError("inverse map needs a 2x2 point")
    y = 1.0 / s.entries[1][1]
    x = s.entries[0][1] * y
    return complex(x, y)


# --------------------------------------------------------------------------
# The geometric distance on PSL(d,Z)
# --------------------------------------------------------------------------

def base_point(d: int, eps: Fraction = Fraction(1, 8)) -> SpdPoint:
    """Default orbit base point: L^T L for L unit lower-triangular with
    subdiagonal eps, 2 eps, ..., (d-1) eps.

    The determinant is exactly 1, the matrix is near the identity for
    small eps, and its PSL(d,Z)-stabiliser is trivial (checked for small
    word-length balls by tests).  Exact rational entries ride along so the
    geometric distance can be evaluated without rounding until the final
    norm computation.
    """
    eps = Fraction(eps)
    lower = [[Fraction(1) if i == j else Fraction(0) for j in range(d)] for i in range(d)]
    for i in range(1, d):
        lower[i][i - 1] = i * eps
    exact = _fraction_matmul(_fraction_transpose(lower), lower)
    point = SpdPoint(tuple(tuple(float(v) for v in row) for row in exact))
    factor = _fraction_transpose(lower)  # F with F F^T = S0
    object.__setattr__(point, "_exact", tuple(tuple(row) for row in exact))
    object.__setattr__(point, "_exact_factor", (factor, _fraction_inverse_det1(factor)))
    return point


def _fraction_transpose(m):
    return [list(col) for col in zip(*m)]


def _fraction_matmul(a, b):
    n, p = len(a), len(b[0])
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(p)] for i in range(n)]


def _fraction_inverse_det1(m):
    """Adjugate inverse of a Fraction matrix with determinant exactly 1."""
    n = len(m)
    aug = [row[:] + [Fraction(1) if i == j else Fraction(0) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = Fraction(1) / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def _scaled_norm_log(frac_rows) -> float:
    """log of the operator norm of a Fraction matrix, scale-safe."""
    scale = max(abs(v) for row in frac_rows for v in row)
    floats = [[float(v / scale) for v in row] for row in frac_rows]
    return math.log(float(scale)) + math.log(linalg.operator_norm(floats))


def geometric_distance(g1: PslElement, g2: PslElement, base: SpdPoint = None) -> float:
    """Distance between the orbit points g1 . base and g2 . base.

    The base point must have trivial stabiliser so that distinct group
    elements give distinct orbit points; the default base does.
    """
    if g1.dim != g2.dim:
        raise ValueError("dimension mismatch")
    if base is None:
        base = base_point(g1.dim)
    factor = getattr(base, "_exact_factor", None)
    if factor is not None:
        # orbit points are (g F)(g F)^T, so the eigenvalue spread of the
        # pair is carried by T = F^-1 g1^-1 g2 F, computed exactly
        f0, f0_inv = factor
        h = mat_mul(mat_inv(g1.rep), g2.rep)
        h_rows = [[Fraction(v) for v in row] for row in h.entries]
        hinv_rows = [[Fraction(v) for v in row] for row in mat_inv(h).entries]
        t = _fraction_matmul(_fraction_matmul(f0_inv, h_rows), f0)
        t_inv = _fraction_matmul(_fraction_matmul(f0_inv, hinv_rows), f0)
        return 2.0 * (_scaled_norm_log(t) + _scaled_norm_log(t_inv))
    return dist_P(act(g1, base), act(g2, base))


def _orbit_point_exact(g: PslElement, exact_base):
    rows = [[Fraction(v) for v in row] for row in g.rep.entries]
    base = [list(row) for row in exact_base]
    return _fraction_matmul(_fraction_matmul(rows, base), _fraction_transpose(rows))


def orbit_point(g: PslElement, base: SpdPoint = None) -> SpdPoint:
    """g . base as an SpdPoint (float entries)."""
    if base is None:
        base = base_point(g.dim)
    return act(g, base)
