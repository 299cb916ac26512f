"""The PSL(2,Z) tessellation of the upper half-plane.

The base tile T is the hyperbolic triangle with vertices at
+-1/2 + (sqrt 3 / 2) i and infinity; its translates gamma T tile U^2.
This module reduces points into T, walks the tile chain crossed by a
geodesic segment, turns tile chains into words over {u, u^-1, v}, reduces
such words to alternating v / translation blocks, and renders tiles as SVG.

The tile walk runs in exact rational arithmetic: points are pairs of
Fractions, every side-crossing decision is a sign test on rationals, and
passes through tile vertices are detected exactly (and routed
counterclockwise around the vertex fan).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .exactmat import ExactMatrix, PslElement, mat_inv, mat_mul, psl_canonicalize
from .hyperbolic import GeodesicU2, dist_u2, geodesic_through
from .tolerances import TOL

U_MAT = ExactMatrix([[1, 1], [0, 1]])
V_MAT = ExactMatrix([[0, 1], [-1, 0]])
U = psl_canonicalize(U_MAT)
V = psl_canonicalize(V_MAT)
IDENTITY = psl_canonicalize(ExactMatrix.identity(2))

# sides of the base tile, named by the geodesic carrying them
LEFT, RIGHT, CIRCLE = "left", "right", "circle"
_SIDE_LETTER = {LEFT: mat_inv(U_MAT), RIGHT: U_MAT, CIRCLE: V_MAT}
_SIDE_AFTER_CROSSING = {LEFT: RIGHT, RIGHT: LEFT, CIRCLE: CIRCLE}

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class Tile:
    """The tile label.T of the tessellation, label in PSL(2,Z)."""

    label: PslElement


# --------------------------------------------------------------------------
# membership and reduction
# --------------------------------------------------------------------------

def in_fundamental_domain(z: complex, closed: bool = False) -> bool:
    """Is z in the base tile?  Open test is strict; the closed test allows
    the boundary with a small tolerance."""
    if z.imag <= 0:
        raise ValueError("point must lie in the upper half-plane")
    norm2 = z.real * z.real + z.imag * z.imag
    if closed:
        tol = TOL.boundary_closed
        return abs(z.real) <= 0.5 + tol and norm2 >= 1.0 - tol
    return abs(z.real) < 0.5 and norm2 > 1.0


def _in_closed_tile_exact(re: Fraction, im: Fraction) -> bool:
    return -HALF <= re <= HALF and re * re + im * im >= 1


def _lft_exact(m: ExactMatrix, re: Fraction, im: Fraction):
    """Exact image of re + i*im under an integer unimodular matrix."""
    (a, b), (c, d) = m.entries
    den = (c * re + d) ** 2 + (c * im) ** 2
    if den == 0:
        raise ZeroDivisionError("point maps to infinity")
    out_re = ((a * re + b) * (c * re + d) + a * c * im * im) / den
    out_im = im / den  # determinant 1 short-cut
    return out_re, out_im


def _reduce_exact(re: Fraction, im: Fraction):
    """Translate/invert until the point lies in the closed base tile.

    Returns (g, re0, im0) with g an exact SL(2,Z) matrix such that
    g(re0 + i*im0) equals the input point.
    """
    if im <= 0:
        raise ValueError("point must lie in the upper half-plane")
    g = ExactMatrix.identity(2)
    for _ in range(TOL.reduction_max_iter):
        shift = (re + HALF).__floor__()
        if shift:
            re -= shift
            g = mat_mul(g, U_MAT ** shift)
        norm2 = re * re + im * im
        if norm2 < 1:
            re, im = -re / norm2, im / norm2
            g = mat_mul(g, mat_inv(V_MAT))
        elif -HALF <= re <= HALF:
            return g, re, im
    raise RuntimeError("reduction failed to terminate (numeric pathology)")


def reduce_to_T(z: complex):
    """(gamma, z0) with z0 in the closed base tile and gamma(z0) = z."""
    g, re, im = _reduce_exact(Fraction(z.real), Fraction(z.imag))
    return psl_canonicalize(g), complex(re, im)


def dirichlet_halfspace_contains(z: complex, gamma: PslElement, p0: complex) -> bool:
    """Is z strictly closer to p0 than to gamma(p0)?"""
    if gamma.is_identity():
        raise ValueError("the half-space is only defined for gamma != 1")
    if z.imag <= 0 or p0.imag <= 0:
        raise ValueError("points must lie in the upper half-plane")
    (a, b), (c, d) = gamma.rep.entries
    image = (a * p0 + b) / (c * p0 + d)
    return dist_u2(z, p0) < dist_u2(z, image)


# --------------------------------------------------------------------------
# the tile walk
# --------------------------------------------------------------------------

def _local_geodesic(zr, zi, wr, wi):
    """Exact geodesic through two rational points: ('vertical', p, None)
    or ('semicircle', a, r2)."""
    if zr == wr:
        return "vertical", zr, None
    a = (zr * zr + zi * zi - wr * wr - wi * wi) / (2 * (zr - wr))
    r2 = (zr - a) ** 2 + zi * zi
    return "semicircle", a, r2


def _side_crossings_semicircle(a, r2):
    """Crossing x-coordinates of the path semicircle with each side
    geodesic of the base tile (None when the side is missed)."""
    out = {}
    y2 = r2 - (a + HALF) ** 2
    out[LEFT] = -HALF if y2 > 0 else None
    y2 = r2 - (a - HALF) ** 2
    out[RIGHT] = HALF if y2 > 0 else None
    if a == 0:
        out[CIRCLE] = None  # concentric with the unit circle
    else:
        xc = (a * a + 1 - r2) / (2 * a)
        out[CIRCLE] = xc if 1 - xc * xc > 0 else None
    return out


def _leaves_through(side, direction, a):
    """Is the path strictly outside the side's half-plane just past a
    crossing?  Crossings of the vertical sides are transversal in the
    x-coordinate, and |z(x)|^2 - 1 is linear in x along the path circle,
    so both tests reduce to direction signs."""
    if side == RIGHT:
        return direction > 0
    if side == LEFT:
        return direction < 0
    return a * direction < 0


_VERTEX = {frozenset((RIGHT, CIRCLE)): (0.5, math.sqrt(3) / 2),
           frozenset((LEFT, CIRCLE)): (-0.5, math.sqrt(3) / 2)}


def _ccw_tie_break(tied):
    """Choose the side that routes counterclockwise around the tile vertex
    shared by the two tied sides.

    Reflecting the inward bisector of the tile corner across a side's
    tangent line lands in the neighbouring sector across that side; the
    counterclockwise neighbour is the one reached by a positive rotation.
    """
    vx, vy = _VERTEX[frozenset(tied)]
    up = (0.0, 1.0)                      # the vertical side, directed to infinity
    tangent = (-vy, vx)                  # unit-circle tangent at the vertex
    into_circle = tangent if vx > 0 else (vy, -vx)   # directed into the arc side of T
    bis = (up[0] + into_circle[0], up[1] + into_circle[1])
    best = None
    for side in tied:
        t = up if side in (LEFT, RIGHT) else tangent
        dot = bis[0] * t[0] + bis[1] * t[1]
        refl = (2 * dot * t[0] - bis[0], 2 * dot * t[1] - bis[1])
        angle = math.atan2(bis[0] * refl[1] - bis[1] * refl[0],
                           bis[0] * refl[0] + bis[1] * refl[1])
        if angle > 0 and best is None:
            best = side
    return best if best is not None else sorted(tied)[0]


def _translation_run_length(side, zr, zi, wr, wi):
    """How many further tiles the path crosses through the same vertical
    side, entered through the opposite side (frame of the tile just
    entered).

    Along a translation run the exit flips from the vertical side to the
    circle side at the first tile index k with k > a and Q(k) >= 0, where
    Q(k) = k^2 + k(1 - 2a) + (a^2 - a - r^2 + 1) is the (rational,
    eventually increasing) clearance of the circle crossing; the run also
    ends at the tile containing the target.  Both bounds are exact, so
    arbitrarily long runs cost O(log run) rational operations.
    """
    kind, a, r2 = _local_geodesic(zr, zi, wr, wi)
    if kind == "vertical":
        return 0
    if side == LEFT:  # mirror a leftward run onto the rightward formulas
        a, wr = -a, -wr

    def clearance(k):
        return k * k + k * (1 - 2 * a) + (a * a - a - r2 + 1)

    k0 = max(0, a.__floor__() + 1)
    if clearance(k0) >= 0:
        j_exit = k0
    else:
        hi = max(2 * k0, 2)
        while clearance(hi) < 0:
            hi *= 2
        lo = k0
        while lo + 1 < hi:
            mid = (lo + hi) // 2
            if clearance(mid) >= 0:
                hi = mid
            else:
                lo = mid
        j_exit = hi
    j = j_exit
    for k in {(wr - HALF).__ceil__(), (wr + HALF).__floor__()}:
        if 0 <= k < j and abs(wr - k) <= HALF and (wr - k) ** 2 + wi * wi >= 1:
            j = k
    return j


def _walk_runs_exact(zr, zi, wr, wi):
    """The side-crossing walk, run-length encoded.

    Returns (first, runs) where first is the exact SL(2,Z) label of the
    tile containing z and runs is a list of (side, count) crossings with
    translation runs counted in bulk.
    """
    g, zr, zi = _reduce_exact(zr, zi)
    g_inv = mat_inv(g)
    wr, wi = _lft_exact(g_inv, wr, wi)
    first = g
    runs = []
    entry = None
    for _ in range(TOL.tile_walk_max_steps):
        if _in_closed_tile_exact(wr, wi):
            return first, runs
        kind, a, r2 = _local_geodesic(zr, zi, wr, wi)
        if kind == "vertical":
            side = _step_vertical(a, zi, wi, wr, entry)
        else:
            side = _step_semicircle(a, r2, zr, wr, wi, entry)
        letter = _SIDE_LETTER[side]
        zr, zi = _lft_exact(mat_inv(letter), zr, zi)
        wr, wi = _lft_exact(mat_inv(letter), wr, wi)
        count = 1
        if side in (LEFT, RIGHT):
            extra = _translation_run_length(side, zr, zi, wr, wi)
            if extra:
                shift = letter ** extra
                zr, zi = _lft_exact(mat_inv(shift), zr, zi)
                wr, wi = _lft_exact(mat_inv(shift), wr, wi)
                count += extra
        runs.append((side, count))
        entry = _SIDE_AFTER_CROSSING[side]
    raise RuntimeError("tile walk exceeded its step budget")


def _walk_exact(zr, zi, wr, wi):
    """Labels of the chain of adjacent tiles whose closures the geodesic
    segment [z, w] meets, in order, as exact SL(2,Z) matrices."""
    first, runs = _walk_runs_exact(zr, zi, wr, wi)
    total = sum(c for _, c in runs)
    if total > TOL.tile_walk_max_steps:
        raise RuntimeError(
            f"tile chain has {total + 1} tiles; too long to materialise")
    chain = [first]
    g = first
    for side, count in runs:
        letter = _SIDE_LETTER[side]
        for _ in range(count):
            g = mat_mul(g, letter)
            chain.append(g)
    return chain


def _step_vertical(p, zi, wi, wr, entry):
    # a vertical local path can only exit the tile downward through the
    # unit circle; upward it runs to the ideal vertex inside the tile
    if p == HALF or p == -HALF:
        raise ValueError("geodesic lies along a tile boundary")
    if not -HALF < p < HALF or entry is not None or wi > zi:
        raise AssertionError("vertical path inconsistent with walk invariants")
    y2c = 1 - p * p
    if y2c < zi * zi or (y2c == zi * zi and wr * wr + wi * wi < 1):
        return CIRCLE
    raise AssertionError("vertical path has no exit but target is outside")


def _step_semicircle(a, r2, zr, wr, wi, entry):
    crossings = _side_crossings_semicircle(a, r2)
    direction = 1 if wr > zr else -1
    c_entry = crossings[entry] if entry is not None else zr
    if entry is not None and c_entry is None:
        raise AssertionError("entry side does not meet the path")
    best_rel, chosen = None, []
    for side, c in crossings.items():
        if c is None or side == entry:
            continue
        rel = (c - c_entry) * direction
        # a crossing at rel == 0 is a pass through the tile corner shared
        # with the entry side; it counts like any other candidate
        if rel < 0 or not _leaves_through(side, direction, a):
            continue
        if best_rel is None or rel < best_rel:
            best_rel, chosen = rel, [side]
        elif rel == best_rel:
            chosen.append(side)
    if not chosen:
        raise AssertionError("no exit side found but target is outside the tile")
    if len(chosen) == 1:
        return chosen[0]
    return _ccw_tie_break(chosen)


def _to_fraction_pair(z):
    if isinstance(z, complex):
        return Fraction(z.real), Fraction(z.imag)
    re, im = z
    return Fraction(re), Fraction(im)


def geodesic_tile_sequence(z, w):
    """The tiles crossed by the geodesic segment from z to w, in order.

    Points may be complex numbers or (re, im) pairs of Fractions; the
    latter keep the walk fully exact.  Consecutive tiles share a side,
    the first contains z and the last contains w.
    """
    zr, zi = _to_fraction_pair(z)
    wr, wi = _to_fraction_pair(w)
    if zi <= 0 or wi <= 0:
        raise ValueError("points must lie in the upper half-plane")
    if zr == wr and zi == wi:
        raise ValueError("endpoints must be distinct")
    return [Tile(psl_canonicalize(m)) for m in _walk_exact(zr, zi, wr, wi)]


def tile_sequence_for(delta: ExactMatrix, p0=(Fraction(0), Fraction(2))):
    """Tiles crossed by [p0, delta p0]; [identity tile] when delta fixes p0."""
    re, im = Fraction(p0[0]), Fraction(p0[1])
    image = _lft_exact(delta, re, im)
    if image == (re, im):
        return [Tile(psl_canonicalize(ExactMatrix.identity(2)))]
    return geodesic_tile_sequence((re, im), image)


# --------------------------------------------------------------------------
# words from tile chains
# --------------------------------------------------------------------------

def word_from_tiles(tiles):
    """The word over {u, u^-1, v} read off a chain of adjacent tiles.

    Letter k is the side-pairing element mapping tile k-1 onto tile k;
    the product of the letters is the last tile's label.
    """
    from .words import Word  # runtime import; words builds on this module

    letters = []
    for prev, cur in zip(tiles, tiles[1:]):
        step = prev.label.inverse() * cur.label
        if step == U:
            letters.append((0, 1))
        elif step == U.inverse():
            letters.append((0, -1))
        elif step == V:
            letters.append((1, 1))
        else:
            raise ValueError("consecutive tiles are not adjacent")
    return Word(tuple(letters))


@dataclass(frozen=True)
class RTerm:
    """One block of the alternating form: 'v', or a translation u(n)."""

    kind: str  # "v" | "u"
    n: int = 0

    def __post_init__(self):
        if self.kind not in ("v", "u"):
            raise ValueError("kind is 'v' or 'u'")
        if self.kind == "u" and self.n == 0:
            raise ValueError("translation blocks need n != 0")
        if self.kind == "v" and self.n != 0:
            raise ValueError("v blocks carry no parameter")

    def matrix(self) -> ExactMatrix:
        return V_MAT if self.kind == "v" else ExactMatrix([[1, self.n], [0, 1]])


def r_form(word) -> list:
    """Collapse a word over {u, u^-1, v} into alternating blocks: maximal
    runs of u-letters merge into u(n) terms, and v v pairs cancel (v^2 acts
    trivially).  The block product equals the word product in PSL(2,Z)."""
    terms = []
    for index, exp in word.letters:
        if index == 0:
            if terms and terms[-1].kind == "u":
                n = terms[-1].n + exp
                terms.pop()
                if n != 0:
                    terms.append(RTerm("u", n))
            else:
                terms.append(RTerm("u", exp))
        elif index == 1:
            if terms and terms[-1].kind == "v":
                terms.pop()
            else:
                terms.append(RTerm("v"))
        else:
            raise ValueError("words here use the two generators u, v")
    return terms


def _push_rterm(terms, kind, n=0):
    if kind == "v":
        if terms and terms[-1].kind == "v":
            terms.pop()
        else:
            terms.append(RTerm("v"))
    else:
        if terms and terms[-1].kind == "u":
            n += terms[-1].n
            terms.pop()
        if n != 0:
            terms.append(RTerm("u", n))


def r_form_for(delta: ExactMatrix, p0=(Fraction(0), Fraction(2))) -> list:
    """The alternating-block form of delta read off the tile chain of
    [p0, delta p0], with translation runs taken in bulk (so the cost is
    logarithmic in the entries of delta, not linear)."""
    re, im = Fraction(p0[0]), Fraction(p0[1])
    image = _lft_exact(delta, re, im)
    if image == (re, im):
        return []
    first, runs = _walk_runs_exact(re, im, *image)
    assert first.is_identity()  # p0 is interior to the base tile
    terms = []
    for side, count in runs:
        if side == CIRCLE:
            _push_rterm(terms, "v")
        else:
            _push_rterm(terms, "u", count if side == RIGHT else -count)
    return terms


def f_sum(rform) -> float:
    """Sum of the block weights: 1 for v, log(|n| + 1) for u(n)."""
    return sum(1.0 if t.kind == "v" else math.log(abs(t.n) + 1) for t in rform)


def alpha_length(rform, p0: complex = 2j) -> float:
    """Length of the piecewise-geodesic path visiting the block images:
    sum of d_U(p0, r p0) over the blocks."""
    total = 0.0
    for t in rform:
        (a, b), (c, d) = t.matrix().entries
        total += dist_u2(p0, (a * p0 + b) / (c * p0 + d))
    return total


# --------------------------------------------------------------------------
# SVG rendering
# --------------------------------------------------------------------------

_OMEGA_PLUS = complex(0.5, math.sqrt(3) / 2)
_OMEGA_MINUS = complex(-0.5, math.sqrt(3) / 2)


def tiles_to_depth(depth: int):
    """All tiles whose labels have word length <= depth over {u, v}."""
    frontier = [IDENTITY]
    seen = {IDENTITY}
    tiles = [Tile(IDENTITY)]
    steps = [U, U.inverse(), V]
    for _ in range(depth):
        nxt = []
        for g in frontier:
            for s in steps:
                h = g * s
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
                    tiles.append(Tile(h))
        frontier = nxt
    return tiles


def _mobius_extended(m: ExactMatrix, z):
    """Image of a point of U^2 closure (complex, real, or None=infinity)."""
    (a, b), (c, d) = m.entries
    if z is None:
        return None if c == 0 else a / c
    den = c * z + d
    if den == 0:
        return None
    return (a * z + b) / den


def _tile_corners(label: PslElement):
    m = label.rep
    return (_mobius_extended(m, _OMEGA_MINUS), _mobius_extended(m, _OMEGA_PLUS), _mobius_extended(m, None))


class _SvgCanvas:
    def __init__(self, re_min, re_max, im_max, width):
        self.re_min, self.re_max, self.im_max = re_min, re_max, im_max
        self.scale = width / (re_max - re_min)
        self.width = width
        self.height = im_max * self.scale
        self.body = []

    def xy(self, z):
        return ((z.real - self.re_min) * self.scale, (self.im_max - z.imag) * self.scale)

    def line(self, z1, z2, cls):
        (x1, y1), (x2, y2) = self.xy(z1), self.xy(z2)
        self.body.append(f'<line class="{cls}" x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}"/>')

    def arc(self, z1, z2, cls):
        (x1, y1), (x2, y2) = self.xy(z1), self.xy(z2)
        center = (abs(z1) ** 2 - abs(z2) ** 2) / (2 * (z1.real - z2.real))
        r = abs(z1 - center) * self.scale
        sweep = 1 if z1.real < z2.real else 0
        self.body.append(
            f'<path class="{cls}" d="M {x1:.2f} {y1:.2f} A {r:.2f} {r:.2f} 0 0 {sweep} {x2:.2f} {y2:.2f}"/>')

    def segment(self, z1, z2, cls):
        """A geodesic segment with endpoints in the closed half-plane
        (None means the ideal point at infinity)."""
        if z1 is None and z2 is None:
            return
        if z1 is None or z2 is None:
            finite = z2 if z1 is None else z1
            finite = complex(finite)
            self.line(finite, complex(finite.real, self.im_max), cls)
            return
        z1, z2 = complex(z1), complex(z2)
        if abs(z1.real - z2.real) < 1e-12 * max(1.0, abs(z1), abs(z2)):
            self.line(z1, z2, cls)
        else:
            self.arc(z1, z2, cls)

    def render(self):
        header = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width:.0f}" '
                  f'height="{self.height:.0f}" viewBox="0 0 {self.width:.0f} {self.height:.0f}">')
        style = ('<style>.axis{stroke:#888;stroke-width:1;fill:none}'
                 '.tile{stroke:#2a6;stroke-width:0.8;fill:none}'
                 '.geodesic{stroke:#d33;stroke-width:1.6;fill:none}</style>')
        return "\n".join([header, style, *self.body, "</svg>"])


def svg_emit(re_min: float, re_max: float, im_max: float = 2.2,
             tiles=None, geodesic=None, width: float = 900.0) -> str:
    """Render tiles (and an optional geodesic segment) as an SVG drawing.

    With no tiles the output shows the real axis and the sides of the
    base tile only.
    """
    if re_max <= re_min or im_max <= 0:
        raise ValueError("empty drawing region")
    canvas = _SvgCanvas(re_min, re_max, im_max, width)
    canvas.line(complex(re_min, 0), complex(re_max, 0), "axis")
    base = Tile(IDENTITY)
    drawn = set()
    for tile in ([base] if not tiles else tiles):
        va, vb, vc = _tile_corners(tile.label)
        for p, q in ((va, vb), (vb, vc), (va, vc)):
            key = tuple(sorted(("inf", 0.0, 0.0) if v is None else ("p", round(v.real, 9), round(v.imag, 9))
                               for v in (p, q)))
            if key in drawn:
                continue
            drawn.add(key)
            canvas.segment(p, q, "axis" if not tiles else "tile")
    if geodesic is not None:
        z, w = geodesic
        canvas.segment(complex(z), complex(w), "geodesic")
    return canvas.render()
