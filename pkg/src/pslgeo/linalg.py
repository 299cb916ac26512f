"""Small dense linear algebra over floats (matrices are lists of row lists).

Everything here is sized for the tiny matrices this library handles
(n <= 8 or so); clarity wins over vectorisation.
"""

import math

from .tolerances import TOL


def identity(n):
    return [[1.0 if i == j else 0.0 for j in range(n)] for i in range(n)]


def transpose(a):
    return [list(col) for col in zip(*a)]


def matmul(a, b):
    n, m, p = len(a), len(b), len(b[0])
    return [[sum(a[i][k] * b[k][j] for k in range(m)) for j in range(p)] for i in range(n)]


def matvec(a, x):
    return [sum(row[j] * x[j] for j in range(len(x))) for row in a]


def det(a):
    """Determinant by fraction-free-ish Gaussian elimination with pivoting."""
    n = len(a)
    m = [row[:] for row in a]
    sign = 1.0
    d = 1.0
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(m[r][col]))
        if m[piv][col] == 0.0:
            return 0.0
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            sign = -sign
        d *= m[col][col]
        inv = 1.0 / m[col][col]
        for r in range(col + 1, n):
            f = m[r][col] * inv
            for c in range(col, n):
                m[r][c] -= f * m[col][c]
    return sign * d


def solve(a, rhs_cols):
    """Solve a X = B for the matrix B given as a list of rows."""
    n = len(a)
    m = [a[i][:] + rhs_cols[i][:] for i in range(n)]
    w = len(m[0])
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(m[r][col]))
        if m[piv][col] == 0.0:
            raise ZeroDivisionError("singular matrix")
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
        inv = 1.0 / m[col][col]
        m[col] = [v * inv for v in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0.0:
                f = m[r][col]
                for c in range(col, w):
                    m[r][c] -= f * m[col][c]
    return [row[n:] for row in m]


def inverse(a):
    return solve(a, identity(len(a)))


def frobenius(a):
    return math.sqrt(sum(v * v for row in a for v in row))


def cholesky(s):
    """Lower-triangular L with L L^T = s for symmetric positive definite s."""
    n = len(s)
    low = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1):
            acc = s[i][j] - sum(low[i][k] * low[j][k] for k in range(j))
            if i == j:
                if acc <= 0.0:
                    raise ValueError("matrix is not positive definite")
                low[i][j] = math.sqrt(acc)
            else:
                low[i][j] = acc / low[j][j]
    return low


def forward_solve(low, b):
    """X with low X = b, for lower-triangular low."""
    n = len(low)
    cols = len(b[0])
    x = [[0.0] * cols for _ in range(n)]
    for j in range(cols):
        for i in range(n):
            x[i][j] = (b[i][j] - sum(low[i][k] * x[k][j] for k in range(i))) / low[i][i]
    return x


def _offdiag_mass(a):
    return sum(a[i][j] ** 2 for i in range(len(a)) for j in range(len(a)) if i != j)


def jacobi_eigh(s, tol=None):
    """Eigenvalues and eigenvectors of a symmetric matrix by cyclic Jacobi.

    Returns (eigenvalues, v) with the columns of v the corresponding
    orthonormal eigenvectors.  Sweeps stop once the off-diagonal mass
    drops below tol * frobenius(s)^2.
    """
    n = len(s)
    a = [row[:] for row in s]
    v = identity(n)
    if tol is None:
        tol = TOL.jacobi_offdiag
    # both sides of the stopping test are squared quantities
    scale = max(frobenius(a) ** 2, 1e-300)
    for _ in range(60):
        if _offdiag_mass(a) <= tol * tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if a[p][q] == 0.0:
                    continue
                theta = 0.5 * (a[q][q] - a[p][p]) / a[p][q]
                t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                sn = t * c
                for k in range(n):
                    akp, akq = a[k][p], a[k][q]
                    a[k][p] = c * akp - sn * akq
                    a[k][q] = sn * akp + c * akq
                for k in range(n):
                    apk, aqk = a[p][k], a[q][k]
                    a[p][k] = c * apk - sn * aqk
                    a[q][k] = sn * apk + c * aqk
                for k in range(n):
                    vkp, vkq = v[k][p], v[k][q]
                    v[k][p] = c * vkp - sn * vkq
                    v[k][q] = sn * vkp + c * vkq
    return [a[i][i] for i in range(n)], v


def sym_eigvals(s):
    n = len(s)
    if n == 1:
        return [s[0][0]]
    if n == 2:
        tr = s[0][0] + s[1][1]
        dt = s[0][0] * s[1][1] - s[0][1] * s[1][0]
        disc = math.sqrt(max(tr * tr - 4.0 * dt, 0.0))
        return [(tr - disc) / 2.0, (tr + disc) / 2.0]
    vals, _ = jacobi_eigh(s)
    return sorted(vals)


def operator_norm(a):
    """Largest singular value: sqrt of the top eigenvalue of a^T a."""
    g = matmul(transpose(a), a)
    return math.sqrt(max(sym_eigvals(g)[-1], 0.0))
