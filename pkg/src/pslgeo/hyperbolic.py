"""Four models of hyperbolic n-space and the maps between them.

Models and distances:

  hyperboloid  H^n   cosh d = -<x,y>          (Lorentzian inner product)
  projective   D^n   d_D(x,y) = d_H(mu x, mu y)       via gnomonic projection
  conformal    B^n   cosh d = 1 + 2|x-y|^2 / ((1-|x|^2)(1-|y|^2))
  half-space   U^n   cosh d = 1 + |x-y|^2 / (2 x_n y_n)

Convention: the time coordinate of Lorentzian (n+1)-space comes FIRST in
every coordinate tuple; the conversion formulas below are arranged for
that ordering.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from . import linalg
from .tolerances import TOL


# --------------------------------------------------------------------------
# Lorentzian n-space
# --------------------------------------------------------------------------

def lorentz_inner(x, y) -> float:
    """-x1*y1 + x2*y2 + ... + xn*yn (time coordinate first)."""
    if len(x) != len(y) or len(x) < 2:
        raise ValueError("vectors must have equal length >= 2")
    return -x[0] * y[0] + sum(a * b for a, b in zip(x[1:], y[1:]))


def lorentz_cross(x, y):
    """J (x cross y) in Lorentzian 3-space, J = diag(-1, 1, 1)."""
    if len(x) != 3 or len(y) != 3:
        raise ValueError("cross product needs 3-vectors")
    cx = (x[1] * y[2] - x[2] * y[1], x[2] * y[0] - x[0] * y[2], x[0] * y[1] - x[1] * y[0])
    return (-cx[0], cx[1], cx[2])


# --------------------------------------------------------------------------
# Point types
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class HyperboloidPoint:
    """Point on the sheet <x,x> = -1, x_time > 0."""

    coords: tuple

    def __post_init__(self):
        c = tuple(float(v) for v in self.coords)
        object.__setattr__(self, "coords", c)
        if abs(lorentz_inner(c, c) + 1.0) > TOL.hyperboloid_norm * max(1.0, sum(v * v for v in c)):
            raise ValueError("not on the unit hyperboloid")
        if c[0] <= 0:
            raise ValueError("time coordinate must be positive")

    @property
    def n(self):
        return len(self.coords) - 1


@dataclass(frozen=True)
class DiscPoint:
    coords: tuple

    def __post_init__(self):
        c = tuple(float(v) for v in self.coords)
        object.__setattr__(self, "coords", c)
        if sum(v * v for v in c) >= 1.0:
            raise ValueError("projective disc points need |x| < 1")


@dataclass(frozen=True)
class BallPoint:
    coords: tuple

    def __post_init__(self):
        c = tuple(float(v) for v in self.coords)
        object.__setattr__(self, "coords", c)
        if sum(v * v for v in c) >= 1.0:
            raise ValueError("ball points need |x| < 1")


@dataclass(frozen=True)
class HalfSpacePoint:
    coords: tuple

    def __post_init__(self):
        c = tuple(float(v) for v in self.coords)
        object.__setattr__(self, "coords", c)
        if c[-1] <= 0.0:
            raise ValueError("half-space points need positive last coordinate")

    @classmethod
    def from_complex(cls, z: complex) -> "HalfSpacePoint":
        return cls((z.real, z.imag))

    def to_complex(self) -> complex:
        if len(self.coords) != 2:
            raise ValueError("only 2-dimensional points are complex numbers")
        return complex(self.coords[0], self.coords[1])


class ExtendedPoint:
    """The point at infinity of the one-point compactification."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"


INFINITY = ExtendedPoint()


# --------------------------------------------------------------------------
# Distances
# --------------------------------------------------------------------------

def _acosh(x: float) -> float:
    # tolerate tiny negative excursions of (cosh - 1) from rounding
    return math.acosh(x) if x >= 1.0 else (0.0 if x > 1.0 - 1e-9 else math.acosh(x))


def dist_H(x: HyperboloidPoint, y: HyperboloidPoint) -> float:
    c = -lorentz_inner(x.coords, y.coords)
    if c < 1.0 - 1e-7:
        raise ValueError("points are not both on the hyperboloid sheet")
    return _acosh(c)


def dist_D(x: DiscPoint, y: DiscPoint) -> float:
    return dist_H(gnomonic(x), gnomonic(y))


def dist_B(x: BallPoint, y: BallPoint) -> float:
    dx = sum((a - b) ** 2 for a, b in zip(x.coords, y.coords))
    nx = 1.0 - sum(v * v for v in x.coords)
    ny = 1.0 - sum(v * v for v in y.coords)
    return _acosh(1.0 + 2.0 * dx / (nx * ny))


def dist_U(x: HalfSpacePoint, y: HalfSpacePoint) -> float:
    dx = sum((a - b) ** 2 for a, b in zip(x.coords, y.coords))
    return _acosh(1.0 + dx / (2.0 * x.coords[-1] * y.coords[-1]))


def dist_u2(z: complex, w: complex) -> float:
    """d_U on the upper half-plane written with complex arguments."""
    return _acosh(1.0 + abs(z - w) ** 2 / (2.0 * z.imag * w.imag))


# --------------------------------------------------------------------------
# Projections between the models
# --------------------------------------------------------------------------

def gnomonic(x: DiscPoint) -> HyperboloidPoint:
    """Lift a projective-disc point to the hyperboloid: (1, x)/sqrt(1-|x|^2)."""
    s = 1.0 / math.sqrt(1.0 - sum(v * v for v in x.coords))
    return HyperboloidPoint((s,) + tuple(s * v for v in x.coords))


def gnomonic_inverse(y: HyperboloidPoint) -> DiscPoint:
    t = y.coords[0]
    return DiscPoint(tuple(v / t for v in y.coords[1:]))


def stereographic(x: BallPoint) -> HyperboloidPoint:
    """Lift a conformal-ball point: time coordinate (1+|x|^2)/(1-|x|^2)."""
    n2 = sum(v * v for v in x.coords)
    s = 1.0 - n2
    return HyperboloidPoint(((1.0 + n2) / s,) + tuple(2.0 * v / s for v in x.coords))


def stereographic_inverse(y: HyperboloidPoint) -> BallPoint:
    t = y.coords[0]
    return BallPoint(tuple(v / (t + 1.0) for v in y.coords[1:]))


def eta(x: HalfSpacePoint) -> BallPoint:
    """Half-space to ball: reflect in the boundary plane, then in the
    sphere of radius sqrt(2) about e_n."""
    n = len(x.coords)
    e_n = (0.0,) * (n - 1) + (1.0,)
    mirrored = x.coords[:-1] + (-x.coords[-1],)
    return BallPoint(reflect_sphere(e_n, math.sqrt(2.0), mirrored))


def eta_inverse(x: BallPoint) -> HalfSpacePoint:
    n = len(x.coords)
    e_n = (0.0,) * (n - 1) + (1.0,)
    y = reflect_sphere(e_n, math.sqrt(2.0), x.coords)
    return HalfSpacePoint(y[:-1] + (-y[-1],))


_CONVERTERS = {
    ("D", "H"): gnomonic, ("H", "D"): gnomonic_inverse,
    ("B", "H"): stereographic, ("H", "B"): stereographic_inverse,
    ("U", "B"): eta, ("B", "U"): eta_inverse,
}

_MODEL_TYPES = {"H": HyperboloidPoint, "D": DiscPoint, "B": BallPoint, "U": HalfSpacePoint}


def convert(point, source: str, target: str):
    """Route a point between models H, D, B, U through the isometries above."""
    if source not in _MODEL_TYPES or target not in _MODEL_TYPES:
        raise ValueError("models are named H, D, B, U")
    if not isinstance(point, _MODEL_TYPES[source]):
        point = _MODEL_TYPES[source](tuple(point))
    here = source
    # walk up to the hyperboloid, then back down to the target
    up = {"D": ["H"], "B": ["H"], "U": ["B", "H"], "H": []}
    down = {"H": [], "D": ["D"], "B": ["B"], "U": ["B", "U"]}
    for step in up[source]:
        point = _CONVERTERS[(here, step)](point)
        here = step
    for step in down[target]:
        point = _CONVERTERS[(here, step)](point)
        here = step
    return point


def point_to_json(point) -> dict:
    tag = next(tag for tag, cls in _MODEL_TYPES.items() if isinstance(point, cls))
    return {"model": tag, "coords": list(point.coords)}


def point_from_json(data: dict):
    return _MODEL_TYPES[data["model"]](tuple(data["coords"]))


# --------------------------------------------------------------------------
# Reflections in planes and spheres
# --------------------------------------------------------------------------

def reflect_plane(u, t: float, x):
    """Reflection in the plane {y : u . y = t} for a unit normal u."""
    if abs(math.sqrt(sum(v * v for v in u)) - 1.0) > TOL.unit_vector:
        raise ValueError("normal vector must have unit length")
    s = 2.0 * (t - sum(a * b for a, b in zip(u, x)))
    return tuple(a + s * b for a, b in zip(x, u))


def reflect_sphere(a, r: float, x):
    """Reflection (inversion) in the sphere of centre a and radius r.

    The centre maps to INFINITY and INFINITY maps to the centre.
    """
    if x is INFINITY:
        return tuple(a)
    d2 = sum((p - q) ** 2 for p, q in zip(x, a))
    if d2 == 0.0:
        return INFINITY
    s = r * r / d2
    return tuple(q + s * (p - q) for p, q in zip(x, a))


# --------------------------------------------------------------------------
# Linear fractional transformations of the upper half-plane
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class LftMap:
    """Isometry of U^2: z -> (az+b)/(cz+d) with ad - bc = 1, optionally
    pre-composed with z -> -conj(z)."""

    mat: tuple
    orientation: str = "preserving"

    def __post_init__(self):
        m = tuple(tuple(float(v) for v in row) for row in self.mat)
        object.__setattr__(self, "mat", m)
        det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
        if abs(det - 1.0) > TOL.det_one * max(1.0, abs(m[0][0]) + abs(m[1][1])) ** 2:
            raise ValueError("matrix must have determinant 1")
        if self.orientation not in ("preserving", "reversing"):
            raise ValueError("orientation is 'preserving' or 'reversing'")

    @classmethod
    def from_exact(cls, m) -> "LftMap":
        return cls(tuple(tuple(float(v) for v in row) for row in m.entries))


def lft_apply(g: LftMap, z: complex) -> complex:
    """Apply an isometry of the upper half-plane to a point with Im z > 0."""
    if z.imag <= 0:
        raise ValueError("point must lie in the upper half-plane")
    if isinstance(g, LftMap):
        (a, b), (c, d) = g.mat
        if g.orientation == "reversing":
            z = -z.conjugate()
    else:  # bare 2x2 matrix-like (ExactMatrix rows or tuples)
        rows = g.entries if hasattr(g, "entries") else g
        (a, b), (c, d) = rows
    return (a * z + b) / (c * z + d)


def kak_sl2(g) -> tuple:
    """Rotation-diagonal-rotation splitting of a real 2x2 matrix of
    determinant 1: g = k1 a k2 with a = diag(s, 1/s), s >= 1.

    Returns (k1, a, k2) as 2x2 row tuples; s equals the operator norm of g.
    """
    m = [[float(v) for v in row] for row in (g.entries if hasattr(g, "entries") else g)]
    det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
    if abs(det - 1.0) > TOL.det_one * max(1.0, linalg.frobenius(m)) ** 2:
        raise ValueError("kak_sl2 needs determinant 1")
    ggt = linalg.matmul(m, linalg.transpose(m))
    # ggt is symmetric positive definite with det 1; eigenvalues s^2, s^-2
    tr = ggt[0][0] + ggt[1][1]
    s2 = (tr + math.sqrt(max(tr * tr - 4.0, 0.0))) / 2.0
    s = math.sqrt(s2)
    if abs(s - 1.0) < 1e-13:
        k1 = ((1.0, 0.0), (0.0, 1.0))
        a = ((1.0, 0.0), (0.0, 1.0))
        return k1, a, tuple(tuple(row) for row in m)
    # unit eigenvector of ggt for s^2, chosen so that k1 is a rotation
    if abs(ggt[0][0] - s2) >= abs(ggt[1][1] - s2):
        v = (ggt[0][1], s2 - ggt[0][0])
    else:
        v = (s2 - ggt[1][1], ggt[1][0])
    norm = math.hypot(*v)
    c, sn = v[0] / norm, v[1] / norm
    k1 = ((c, -sn), (sn, c))
    a = ((s, 0.0), (0.0, 1.0 / s))
    a_inv_k1t = ((c / s, sn / s), (-sn * s, c * s))
    k2 = tuple(tuple(row) for row in linalg.matmul([list(r) for r in a_inv_k1t], m))
    return k1, a, k2


# --------------------------------------------------------------------------
# Geodesics of the upper half-plane
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class GeodesicU2:
    """A geodesic of U^2: a vertical line Re z = a, or the semicircle of
    centre a and radius r orthogonal to the real axis."""

    kind: str  # "vertical" | "semicircle"
    a: float
    r: float = 0.0

    def __post_init__(self):
        if self.kind not in ("vertical", "semicircle"):
            raise ValueError("kind is 'vertical' or 'semicircle'")
        if self.kind == "semicircle" and self.r <= 0:
            raise ValueError("semicircle needs r > 0")

    def contains(self, z: complex, tol: float = 1e-10) -> bool:
        if self.kind == "vertical":
            return abs(z.real - self.a) <= tol * max(1.0, abs(z))
        return abs(abs(z - self.a) - self.r) <= tol * max(1.0, self.r)


def geodesic_through(z: complex, w: complex) -> GeodesicU2:
    """The unique geodesic of U^2 through two distinct points."""
    if z == w:
        raise ValueError("points must be distinct")
    if z.imag <= 0 or w.imag <= 0:
        raise ValueError("points must lie in the upper half-plane")
    if abs(z.real - w.real) < TOL.vertical_line * max(1.0, abs(z), abs(w)):
        return GeodesicU2("vertical", z.real)
    a = (abs(z) ** 2 - abs(w) ** 2) / (2.0 * (z.real - w.real))
    return GeodesicU2("semicircle", a, abs(z - a))


def closest_point_on_geodesic(p: complex, line: GeodesicU2) -> complex:
    """The point of a geodesic at minimal hyperbolic distance from p."""
    if p.imag <= 0:
        raise ValueError("point must lie in the upper half-plane")
    if line.kind == "vertical":
        return complex(line.a, math.hypot(p.real - line.a, p.imag))
    x, py, r = p.real - line.a, p.imag, line.r
    cos_phi = 2.0 * x * r / (x * x + r * r + py * py)
    phi = math.acos(max(-1.0, min(1.0, cos_phi)))
    return line.a + line.r * cmath.exp(1j * phi)


# --------------------------------------------------------------------------
# Triangles on the hyperbolic plane H^2
# --------------------------------------------------------------------------

def _unit_tangent_toward(x, y, side):
    """Unit space-like tangent at x pointing along the geodesic toward y."""
    ch = math.cosh(side)
    sh = math.sinh(side)
    return tuple((b - ch * a) / sh for a, b in zip(x, y))


def triangle_data(x: HyperboloidPoint, y: HyperboloidPoint, z: HyperboloidPoint):
    """Side lengths and interior angles of the H^2 triangle (x, y, z).

    Returns ((a, b, c), (alpha, beta, gamma)) with a = d(y,z) opposite the
    angle alpha at x, and cyclically.  Angles are Lorentzian angles between
    the unit tangents of the two sides leaving each vertex.
    """
    if any(len(p.coords) != 3 for p in (x, y, z)):
        raise ValueError("triangles live on the hyperbolic plane H^2")
    a = dist_H(y, z)
    b = dist_H(z, x)
    c = dist_H(x, y)
    if min(a, b, c) < 1e-8:
        raise ValueError("vertices are hyperbolically collinear or coincident")
    angles = []
    for p, q, r_, side_pq, side_pr in (
        (x, y, z, c, b),
        (y, z, x, a, c),
        (z, x, y, b, a),
    ):
        t1 = _unit_tangent_toward(p.coords, q.coords, side_pq)
        t2 = _unit_tangent_toward(p.coords, r_.coords, side_pr)
        cos_angle = lorentz_inner(t1, t2)
        if abs(cos_angle) >= 1.0 - 1e-12:
            raise ValueError("vertices are hyperbolically collinear")
        angles.append(math.acos(cos_angle))
    return (a, b, c), tuple(angles)
