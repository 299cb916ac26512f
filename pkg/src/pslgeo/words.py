"""Constructive word-metric computations on PSL(d,Z).

The exact-length oracle is breadth-first search over the Cayley graph.
The constructive side produces words of length O(log norm) for d >= 3:
a determinant-1 matrix factors into d^2 blocks supported on pairs of
coordinates, each block reduces along a tessellation geodesic to an
alternating product of inversions and translations u(n), and each u(n)
becomes a word of length O(log|n|) built from the expanding block
A = [[2,1],[1,1]] acting on the translation lattice.

Every constructed word is verified by exact integer evaluation; floats
appear only in digit greed and in the geodesic tracing that picks the
block decomposition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .exactmat import (
    ExactMatrix,
    GeneratorSet,
    PslElement,
    mat_inv,
    mat_mul,
    max_abs_entry,
    psl_canonicalize,
)

LAMBDA = (3 + math.sqrt(5)) / 2  # top eigenvalue of [[2,1],[1,1]]


# --------------------------------------------------------------------------
# words
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Word:
    """A word over a generating set: (generator index, exponent +-1) pairs."""

    letters: tuple

    def __post_init__(self):
        ls = tuple((int(i), int(e)) for i, e in self.letters)
        if any(e not in (1, -1) for _, e in ls):
            raise ValueError("exponents are +1 or -1")
        object.__setattr__(self, "letters", ls)

    def __len__(self):
        return len(self.letters)

    def __add__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word(tuple((i, -e) for i, e in reversed(self.letters)))

    def evaluate(self, gens: GeneratorSet) -> ExactMatrix:
        """Exact product of the letters in SL(d,Z)."""
        mats = _letter_matrices(gens)
        out = ExactMatrix.identity(gens.dim)
        for i, e in self.letters:
            out = mat_mul(out, mats[(i, e)])
        return out

    def psl_evaluate(self, gens: GeneratorSet) -> PslElement:
        return psl_canonicalize(self.evaluate(gens))

    def to_json(self, gens: GeneratorSet) -> dict:
        return {"letters": [[gens.names[i], e] for i, e in self.letters], "length": len(self)}


_LETTER_CACHE = {}


def _letter_matrices(gens: GeneratorSet):
    key = (gens.dim, gens.names)
    cached = _LETTER_CACHE.get(key)
    if cached is None:
        cached = {}
        for i, g in enumerate(gens.elements):
            cached[(i, 1)] = g.rep
            cached[(i, -1)] = mat_inv(g.rep)
        _LETTER_CACHE[key] = cached
    return cached


# --------------------------------------------------------------------------
# breadth-first search in the Cayley graph
# --------------------------------------------------------------------------

def _bfs_steps(gens: GeneratorSet):
    """Distinct one-letter moves (generators and inverses, deduplicated)."""
    steps = {}
    for i, g in enumerate(gens.elements):
        steps.setdefault(g, (i, 1))
        steps.setdefault(g.inverse(), (i, -1))
    return steps


def bfs_ball(gens: GeneratorSet, radius: int, node_budget: int = 5_000_000):
    """{element: word length} for the full ball of the given radius."""
    identity = psl_canonicalize(ExactMatrix.identity(gens.dim))
    dist = {identity: 0}
    frontier = [identity]
    steps = list(_bfs_steps(gens))
    for r in range(1, radius + 1):
        nxt = []
        for g in frontier:
            for s in steps:
                h = g * s
                if h not in dist:
                    dist[h] = r
                    nxt.append(h)
                    if len(dist) > node_budget:
                        raise RuntimeError("search ball exceeded the node budget")
        frontier = nxt
    return dist


def bfs_word_length(gamma, gens: GeneratorSet, max_radius: int,
                    node_budget: int = 5_000_000):
    """Exact word length of gamma if it is at most max_radius, else None."""
    if isinstance(gamma, ExactMatrix):
        gamma = psl_canonicalize(gamma)
    if gamma.is_identity():
        return 0
    identity = psl_canonicalize(ExactMatrix.identity(gens.dim))
    seen = {identity}
    frontier = [identity]
    steps = list(_bfs_steps(gens))
    for r in range(1, max_radius + 1):
        nxt = []
        for g in frontier:
            for s in steps:
                h = g * s
                if h in seen:
                    continue
                if h == gamma:
                    return r
                seen.add(h)
                nxt.append(h)
                if len(seen) > node_budget:
                    raise RuntimeError("search ball exceeded the node budget")
        frontier = nxt
    return None


def bfs_shortest_word(gamma, gens: GeneratorSet, max_radius: int,
                      node_budget: int = 5_000_000):
    """A shortest word for gamma within max_radius, else None."""
    if isinstance(gamma, ExactMatrix):
        gamma = psl_canonicalize(gamma)
    identity = psl_canonicalize(ExactMatrix.identity(gens.dim))
    if gamma == identity:
        return Word(())
    parent = {identity: None}
    frontier = [identity]
    steps = _bfs_steps(gens)
    found = None
    for _ in range(max_radius):
        nxt = []
        for g in frontier:
            for s, letter in steps.items():
                h = g * s
                if h in parent:
                    continue
                parent[h] = (g, letter)
                if h == gamma:
                    found = h
                    break
                nxt.append(h)
                if len(parent) > node_budget:
                    raise RuntimeError("search ball exceeded the node budget")
            if found:
                break
        if found:
            break
        frontier = nxt
    if not found:
        return None
    letters = []
    node = found
    while parent[node] is not None:
        node, letter = parent[node]
        letters.append(letter)
    return Word(tuple(reversed(letters)))


# --------------------------------------------------------------------------
# bounded extended gcd and unimodular column reduction
# --------------------------------------------------------------------------

def _xgcd(a: int, b: int):
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    return x, y, g


def bounded_ext_gcd(y1: int, yi: int):
    """(u, v, a) with u y1 + v yi = a = gcd(y1, yi) > 0 and the size bounds
    |u| <= max(1, |yi|), |v| <= max(1, |y1|)."""
    if y1 == 0:
        raise ValueError("the first argument must be non-zero")
    if yi == 0 or abs(y1) == abs(yi):
        return (1 if y1 > 0 else -1), 0, abs(y1)
    u, v, g = _xgcd(y1, yi)
    if g < 0:
        u, v, g = -u, -v, -g
    if abs(y1) > abs(yi):
        # shift u to the minimal residue; the paired v stays within |y1|
        m = round(Fraction(-u, yi))
        u += m * yi
        v = (g - u * y1) // yi
    else:
        m = round(Fraction(-v, y1))
        v += m * y1
        u = (g - v * yi) // y1
    assert u * y1 + v * yi == g
    assert abs(u) <= max(1, abs(yi)) and abs(v) <= max(1, abs(y1))
    return u, v, g


def column_entry_bound(x) -> int:
    """5 (x1^2 + ... + xd^2)^2 bounds every entry of the reducing factors."""
    return 5 * sum(int(v) ** 2 for v in x) ** 2


def reduce_unimodular_column(x):
    """Matrices g1, ..., gd (each acting on coordinates {1, i} only) whose
    product gd ... g1 sends the unimodular column x to (1, 0, ..., 0)^T.

    g1 is an elementary matrix or the identity; every entry of every
    factor is bounded by column_entry_bound(x).
    """
    x = [int(v) for v in x]
    d = len(x)
    if d < 2:
        raise ValueError("need a column of length >= 2")
    if math.gcd(*x) != 1:
        raise ValueError("column is not unimodular")
    y = list(x)
    if y[0] != 0:
        g1 = ExactMatrix.identity(d)
    else:
        j = next(k for k, v in enumerate(y) if v != 0)
        g1 = ExactMatrix.elementary(d, 1, j + 1, 1)
        y[0] += y[j]
    factors = [g1]
    for i in range(2, d + 1):
        yi = y[i - 1]
        u, v, a = bounded_ext_gcd(y[0], yi)
        w, z = -yi // a, y[0] // a
        rows = [[1 if r == c else 0 for c in range(d)] for r in range(d)]
        rows[0][0], rows[0][i - 1] = u, v
        rows[i - 1][0], rows[i - 1][i - 1] = w, z
        factors.append(ExactMatrix(rows))
        y[0], y[i - 1] = a, 0
    return factors


# --------------------------------------------------------------------------
# block factorisation of SL(d,Z)
# --------------------------------------------------------------------------

def _embed_block(d: int, s: int, t: int, block: ExactMatrix) -> ExactMatrix:
    rows = [[1 if i == j else 0 for j in range(d)] for i in range(d)]
    (a, b), (c, e) = block.entries
    rows[s - 1][s - 1], rows[s - 1][t - 1] = a, b
    rows[t - 1][s - 1], rows[t - 1][t - 1] = c, e
    return ExactMatrix(rows)


def block_support(m: ExactMatrix):
    """The coordinate pair (s, t) on which m differs from the identity,
    or None for the identity (which lies in every block)."""
    d = m.dim
    touched = set()
    for i in range(d):
        for j in range(d):
            expected = 1 if i == j else 0
            if m.entries[i][j] != expected:
                touched.update((i + 1, j + 1))
    if not touched:
        return None
    if len(touched) == 1:
        touched.add(1 if 1 not in touched else 2)
    if len(touched) != 2:
        raise ValueError("matrix is not supported on one coordinate pair")
    s, t = sorted(touched)
    return s, t


def extract_block(m: ExactMatrix, s: int, t: int) -> ExactMatrix:
    e = m.entries
    return ExactMatrix([[e[s - 1][s - 1], e[s - 1][t - 1]], [e[t - 1][s - 1], e[t - 1][t - 1]]])


def factor_sl2_blocks(gamma: ExactMatrix):
    """gamma as an exact product of d^2 factors, each supported on a single
    coordinate pair (s, t)."""
    if gamma.det() != 1:
        raise ValueError("factorisation needs determinant exactly 1")
    d = gamma.dim
    if d == 2:
        return [gamma] + [ExactMatrix.identity(2)] * 3
    left = reduce_unimodular_column([row[0] for row in gamma.entries])
    work = gamma
    for g in left:
        work = mat_mul(g, work)
    right = []
    for j in range(2, d + 1):
        yj = work.entries[0][j - 1]
        rj = ExactMatrix.elementary(d, 1, j, -yj)
        right.append(rj)
        work = mat_mul(work, rj)
    # work now fixes e1 on both sides; recurse on the lower right corner
    sub = ExactMatrix([row[1:] for row in work.entries[1:]])
    inner = [
        _embed_block(d, s + 1, t + 1, extract_block(f, s, t))
        for f in factor_sl2_blocks(sub)
        for (s, t) in [block_support(f) or (1, 2)]
    ]
    factors = [mat_inv(g) for g in left]
    factors.extend(inner)
    factors.extend(mat_inv(r) for r in reversed(right))
    assert len(factors) == d * d
    return factors


def factor_entry_bound(gamma: ExactMatrix) -> int:
    """The implemented polynomial bound on the entries of the factors of
    factor_sl2_blocks(gamma), as a function of max|gamma_ij| per dimension."""
    return _entry_bound(gamma.dim, max(1, max_abs_entry(gamma)))


def _entry_bound(d: int, n: int) -> int:
    if d == 2:
        return n
    col = 5 * (d * n * n) ** 2        # bounds the column-reduction factors
    row1 = 2 * n                      # first row magnitude while reducing
    for _ in range(2, d + 1):
        row1 = col * (row1 + n)
    cleared = row1 + row1 * row1      # after clearing the first row
    return max(col, row1, _entry_bound(d - 1, cleared))


# --------------------------------------------------------------------------
# digit expansions along powers of lambda
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class DigitExpansion:
    """sign * sum_i digits[i-1] lambda^i with digits in {0,1,2}, top digit
    non-zero."""

    sign: int
    digits: tuple

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign is +1 or -1")
        ds = tuple(int(v) for v in self.digits)
        if not ds or ds[-1] == 0 or any(v not in (0, 1, 2) for v in ds):
            raise ValueError("digits lie in {0,1,2} with non-zero top digit")
        object.__setattr__(self, "digits", ds)

    def value(self) -> float:
        return self.sign * sum(a * LAMBDA ** (i + 1) for i, a in enumerate(self.digits))


def greedy_lambda_digits(a: float) -> DigitExpansion:
    """Digits a_1..a_m in {0,1,2} with |sum a_i lambda^i - a| <= lambda.

    Values below 1 take the single digit (1,).
    """
    if a < 0:
        raise ValueError("needs a >= 0")
    if a < 1:
        return DigitExpansion(1, (1,))
    m = max(1, int(math.log(a) / math.log(LAMBDA)))
    while LAMBDA ** (m + 1) <= a:
        m += 1
    while m > 1 and LAMBDA ** m > a:
        m -= 1
    digits = [0] * m
    r = a
    for k in range(m, 0, -1):
        q = min(2, max(0, int(r / LAMBDA ** k)))
        digits[k - 1] = q
        r -= q * LAMBDA ** k
    if digits[-1] == 0:
        digits[-1] = 1
    return DigitExpansion(1, tuple(digits))


# --------------------------------------------------------------------------
# logarithmic words for the elementary matrices, d >= 3
# --------------------------------------------------------------------------

_A_BLOCK = ExactMatrix([[2, 1], [1, 1]])
_A_BLOCK_INV = ExactMatrix([[1, -1], [-1, 2]])
_SIGMA_12_BLOCK = ExactMatrix([[0, -1], [1, 0]])


def _axis_indices(gens: GeneratorSet):
    """Generator indices used by the lattice construction on axes 1,2,3."""
    d = gens.dim
    e12 = gens.index_of_matrix(ExactMatrix.elementary(d, 1, 2, 1))
    e13 = gens.index_of_matrix(ExactMatrix.elementary(d, 1, 3, 1))
    e23 = gens.index_of_matrix(ExactMatrix.elementary(d, 2, 3, 1))
    sigma = gens.index_of_matrix(_embed_block(d, 1, 2, _SIGMA_12_BLOCK))
    return e12, e13, e23, sigma


def _mat_pow_vec(m: ExactMatrix, k: int, vec):
    out = list(vec)
    for _ in range(k):
        out = [m.entries[0][0] * out[0] + m.entries[0][1] * out[1],
               m.entries[1][0] * out[0] + m.entries[1][1] * out[1]]
    return out


def residual_radius() -> int:
    """Integer bound on |target - lattice approximation| in the digit
    construction, from the eigenvector decomposition of (1, 1)."""
    v1 = _unit(1.0, LAMBDA - 2.0)
    v2 = _unit(1.0, 1.0 / LAMBDA - 2.0)
    alpha = abs(v1[0] + v1[1])
    beta = abs(v2[0] + v2[1])
    tail = LAMBDA / (LAMBDA - 1.0)
    return math.ceil((alpha + beta) * (LAMBDA + tail))


def _unit(x, y):
    h = math.hypot(x, y)
    return (x / h, y / h)


def _digit_run_letters(digit_word_sign, digits, step_idx_pairs, y0_letters, y0_inv_letters):
    """Horner form A Y^(a1) A Y^(a2) ... A Y^(am) A^(-m) as letters."""
    a_word, a_inv_word = step_idx_pairs
    letters = []
    for a_i in digits:
        letters.extend(a_word)
        block = y0_letters if digit_word_sign > 0 else y0_inv_letters
        letters.extend(block * a_i)
    letters.extend(a_inv_word * len(digits))
    return letters


def u1_word(n: int, d: int = 3, gens: GeneratorSet = None) -> Word:
    """A word evaluating exactly to the elementary matrix E_13(n) in
    SL(d,Z), of length O(log(|n| + 1)), d >= 3."""
    if d < 3:
        raise ValueError("the logarithmic construction needs d >= 3")
    if gens is None:
        gens = GeneratorSet.sigma(d)
    e12, e13, e23, sigma = _axis_indices(gens)
    if n == 0:
        return Word(())
    if abs(n) <= 2:
        sgn = 1 if n > 0 else -1
        return Word(tuple([(e13, sgn)] * abs(n)))

    # lattice coordinates: E_13(k) E_23(l) <-> (k, l); A acts as [[2,1],[1,1]]
    v1 = _unit(1.0, LAMBDA - 2.0)
    v2 = _unit(1.0, 1.0 / LAMBDA - 2.0)
    alpha = v1[0] + v1[1]
    beta = v2[0] + v2[1]
    target_1 = n * v1[0] / alpha
    target_2 = n * v2[0] / beta
    exp_1 = greedy_lambda_digits(abs(target_1))
    exp_2 = greedy_lambda_digits(abs(target_2))
    sign_1 = 1 if target_1 >= 0 else -1
    sign_2 = 1 if target_2 >= 0 else -1

    s1 = [0, 0]
    for i, a_i in enumerate(exp_1.digits, start=1):
        p = _mat_pow_vec(_A_BLOCK, i, (1, 1))
        s1 = [s1[0] + sign_1 * a_i * p[0], s1[1] + sign_1 * a_i * p[1]]
    s2 = [0, 0]
    for j, b_j in enumerate(exp_2.digits, start=1):
        p = _mat_pow_vec(_A_BLOCK_INV, j, (1, 1))
        s2 = [s2[0] + sign_2 * b_j * p[0], s2[1] + sign_2 * b_j * p[1]]
    res_k = n - s1[0] - s2[0]
    res_l = -s1[1] - s2[1]
    assert res_k * res_k + res_l * res_l <= residual_radius() ** 2

    a_word = ((e12, 1), (sigma, 1), (e12, -1), (sigma, -1))
    a_inv_word = ((sigma, 1), (e12, 1), (sigma, -1), (e12, -1))
    y0 = ((e13, 1), (e23, 1))
    y0_inv = ((e23, -1), (e13, -1))

    letters = []
    letters.extend(_digit_run_letters(sign_1, exp_1.digits, (list(a_word), list(a_inv_word)), list(y0), list(y0_inv)))
    letters.extend(_digit_run_letters(sign_2, exp_2.digits, (list(a_inv_word), list(a_word)), list(y0), list(y0_inv)))
    letters.extend([(e13, 1 if res_k > 0 else -1)] * abs(res_k))
    letters.extend([(e23, 1 if res_l > 0 else -1)] * abs(res_l))
    return Word(tuple(letters))


def conjugator(i: int, j: int, d: int) -> ExactMatrix:
    """Signed permutation delta with delta E_13(1) delta^-1 = E_ij(1),
    determinant 1, and at most one negated entry (so it is a single
    generator of the standard set)."""
    if not (1 <= i <= d and 1 <= j <= d) or i == j:
        raise ValueError("need 1 <= i != j <= d")
    if d < 3:
        raise ValueError("need d >= 3")
    image = {1: i, 3: j}
    free_targets = [t for t in range(1, d + 1) if t not in (i, j)]
    free_sources = [s for s in range(1, d + 1) if s not in (1, 3)]
    image.update(dict(zip(free_sources, free_targets)))
    rows = [[0] * d for _ in range(d)]
    for s, t in image.items():
        rows[t - 1][s - 1] = 1
    m = ExactMatrix(rows)
    if m.det() == -1:
        flip = free_sources[0]
        rows[image[flip] - 1][flip - 1] = -1
        m = ExactMatrix(rows)
    assert m.det() == 1
    return m


def conjugated_u1_word(i: int, j: int, n: int, d: int, gens: GeneratorSet = None) -> Word:
    """A word evaluating exactly to E_ij(n) in SL(d,Z), d >= 3."""
    if d < 3:
        raise ValueError("needs d >= 3")
    if not (1 <= i <= d and 1 <= j <= d) or i == j:
        raise ValueError("need 1 <= i != j <= d")
    if gens is None:
        gens = GeneratorSet.sigma(d)
    core = u1_word(n, d, gens)
    if (i, j) == (1, 3) or n == 0:
        return core
    delta = conjugator(i, j, d)
    idx = gens.index_of_matrix(delta)
    return Word(((idx, 1),) + core.letters + ((idx, -1),))


# --------------------------------------------------------------------------
# the short-word pipeline for d >= 3
# --------------------------------------------------------------------------

def _v_block_index(gens: GeneratorSet, s: int, t: int) -> int:
    return gens.index_of_matrix(_embed_block(gens.dim, s, t, ExactMatrix([[0, 1], [-1, 0]])))


def short_word(gamma: ExactMatrix, gens: GeneratorSet = None) -> Word:
    """A word for gamma in SL(d,Z), d >= 3, of length O(log||gamma||).

    The word evaluates to gamma exactly.  Each block factor is routed
    along the geodesic [2i, block(2i)] of the tessellation, reduced to
    alternating inversion/translation terms, and each translation is
    expanded by the logarithmic construction.
    """
    from .tessellation import r_form_for

    d = gamma.dim
    if d < 3:
        raise ValueError("the logarithmic word construction needs d >= 3")
    if gamma.det() != 1:
        raise ValueError("needs determinant exactly 1")
    if gens is None:
        gens = GeneratorSet.sigma(d)
    letters = []
    for factor in factor_sl2_blocks(gamma):
        support = block_support(factor)
        if support is None:
            continue
        s, t = support
        block = extract_block(factor, s, t)
        v_idx = _v_block_index(gens, s, t)
        block_letters = []
        if block == -ExactMatrix.identity(2):
            block_letters = [(v_idx, 1), (v_idx, 1)]
        else:
            terms = r_form_for(block)
            for term in terms:
                if term.kind == "v":
                    block_letters.append((v_idx, 1))
                else:
                    block_letters.extend(conjugated_u1_word(s, t, term.n, d, gens).letters)
            achieved = Word(tuple(block_letters)).evaluate(gens)
            if achieved != factor:
                # the tessellation word recovers the block up to sign;
                # v^2 contributes the missing -I inside the block
                block_letters.extend([(v_idx, 1), (v_idx, 1)])
                flipped = mat_mul(achieved, _embed_block(d, s, t, -ExactMatrix.identity(2)))
                if flipped != factor:
                    raise AssertionError("block word failed exact evaluation")
        letters.extend(block_letters)
    return Word(tuple(letters))
