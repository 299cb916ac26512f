import cmath
import math
import random

import pytest

from pslgeo.hyperbolic import (
    INFINITY,
    BallPoint,
    DiscPoint,
    GeodesicU2,
    HalfSpacePoint,
    HyperboloidPoint,
    LftMap,
    closest_point_on_geodesic,
    convert,
    dist_B,
    dist_D,
    dist_H,
    dist_U,
    dist_u2,
    eta,
    eta_inverse,
    geodesic_through,
    gnomonic,
    gnomonic_inverse,
    kak_sl2,
    lft_apply,
    lorentz_cross,
    lorentz_inner,
    reflect_plane,
    reflect_sphere,
    stereographic,
    stereographic_inverse,
    triangle_data,
)

RNG_SEED = 20260810


def random_hyperboloid_point(rng, n=2, spread=1.5):
    spatial = [rng.gauss(0.0, spread) for _ in range(n)]
    t = math.sqrt(1.0 + sum(v * v for v in spatial))
    return HyperboloidPoint((t, *spatial))


def random_ball_point(rng, n=2, rmax=0.93):
    while True:
        coords = [rng.uniform(-rmax, rmax) for _ in range(n)]
        if sum(v * v for v in coords) < rmax * rmax:
            return BallPoint(tuple(coords))


def random_half_plane_point(rng):
    return HalfSpacePoint((rng.uniform(-4.0, 4.0), rng.uniform(0.05, 6.0)))


def random_sl2(rng, spread=1.0):
    a = rng.gauss(0, spread)
    b = rng.gauss(0, spread)
    c = rng.gauss(0, spread)
    # choose d to make the determinant exactly 1 (retry when a is tiny)
    while abs(a) < 1e-3:
        a = rng.gauss(0, spread)
    d = (1.0 + b * c) / a
    return ((a, b), (c, d))


class TestLorentzInner:
    def test_time_axis(self):
        assert lorentz_inner((1, 0, 0), (1, 0, 0)) == -1.0

    def test_space_axis(self):
        assert lorentz_inner((0, 1, 0), (0, 1, 0)) == 1.0

    def test_boost_against_apex(self):
        t = 0.7
        assert lorentz_inner((math.cosh(t), math.sinh(t), 0.0), (1, 0, 0)) == pytest.approx(-math.cosh(t))

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            lorentz_inner((1, 0), (1, 0, 0))


class TestDistances:
    def test_dist_H_zero_and_boost(self):
        apex = HyperboloidPoint((1, 0, 0))
        assert dist_H(apex, apex) == 0.0
        moved = HyperboloidPoint((math.cosh(1), math.sinh(1), 0))
        assert dist_H(apex, moved) == pytest.approx(1.0, abs=1e-12)

    def test_dist_H_triangle_inequality(self):
        rng = random.Random(RNG_SEED)
        for _ in range(1000):
            x, y, z = (random_hyperboloid_point(rng) for _ in range(3))
            assert dist_H(x, z) <= dist_H(x, y) + dist_H(y, z) + 1e-9

    def test_dist_B_closed_form(self):
        o = BallPoint((0.0, 0.0))
        assert dist_B(o, o) == 0.0
        assert dist_B(o, BallPoint((math.tanh(0.5), 0.0))) == pytest.approx(1.0, abs=1e-12)

    def test_dist_B_matches_hyperboloid(self):
        rng = random.Random(RNG_SEED + 1)
        for _ in range(1000):
            x, y = random_ball_point(rng), random_ball_point(rng)
            assert dist_B(x, y) == pytest.approx(dist_H(stereographic(x), stereographic(y)), abs=1e-9)

    def test_dist_U_imaginary_axis(self):
        for a, b in [(1.0, 2.0), (0.25, 4.0), (3.0, 3.0)]:
            lo, hi = HalfSpacePoint((0, a)), HalfSpacePoint((0, b))
            assert dist_U(lo, hi) == pytest.approx(abs(math.log(b / a)), abs=1e-12)

    def test_dist_U_inversion_pair(self):
        assert dist_u2(2j, 0.5j) == pytest.approx(math.log(4.0), abs=1e-12)

    def test_dist_U_horizontal(self):
        for n in (1, 5, 1000):
            assert dist_u2(2j, n + 2j) == pytest.approx(math.acosh(1 + n * n / 8.0), abs=1e-12)


class TestGnomonic:
    def test_center_to_apex(self):
        assert gnomonic(DiscPoint((0.0, 0.0))).coords == (1.0, 0.0, 0.0)

    def test_round_trip(self):
        rng = random.Random(RNG_SEED + 2)
        for _ in range(1000):
            x = DiscPoint(random_ball_point(rng).coords)
            back = gnomonic_inverse(gnomonic(x))
            assert max(abs(a - b) for a, b in zip(x.coords, back.coords)) < 1e-10

    def test_chord_maps_to_hyperbolic_line(self):
        rng = random.Random(RNG_SEED + 3)
        for _ in range(50):
            phi = rng.uniform(0, 2 * math.pi)
            v = (math.cos(phi), math.sin(phi))
            ts = sorted(rng.uniform(-0.9, 0.9) for _ in range(3))
            pts = [gnomonic(DiscPoint((t * v[0], t * v[1]))) for t in ts]
            # image lies in span{e_time, (0, v)}: spatial parts stay parallel to v
            for p in pts:
                assert abs(p.coords[1] * v[1] - p.coords[2] * v[0]) < 1e-10
            # and distances add along the chord
            assert dist_H(pts[0], pts[2]) == pytest.approx(
                dist_H(pts[0], pts[1]) + dist_H(pts[1], pts[2]), abs=1e-9
            )


class TestStereographic:
    def test_center_to_apex(self):
        assert stereographic(BallPoint((0.0, 0.0))).coords == (1.0, 0.0, 0.0)

    def test_half_radius_time_coordinate(self):
        p = stereographic(BallPoint((0.5, 0.0)))
        assert p.coords[0] == pytest.approx(5.0 / 3.0, abs=1e-14)

    def test_round_trip(self):
        rng = random.Random(RNG_SEED + 4)
        for _ in range(1000):
            x = random_ball_point(rng)
            back = stereographic_inverse(stereographic(x))
            assert max(abs(a - b) for a, b in zip(x.coords, back.coords)) < 1e-10


class TestEta:
    def test_i_to_center(self):
        b = eta(HalfSpacePoint((0.0, 1.0)))
        assert max(abs(v) for v in b.coords) < 1e-14

    def test_log2_pair(self):
        d = dist_B(eta(HalfSpacePoint((0, 1))), eta(HalfSpacePoint((0, 2))))
        assert d == pytest.approx(math.log(2.0), abs=1e-12)

    def test_round_trip(self):
        rng = random.Random(RNG_SEED + 5)
        for _ in range(1000):
            x = random_half_plane_point(rng)
            back = eta_inverse(eta(x))
            assert max(abs(a - b) for a, b in zip(x.coords, back.coords)) < 1e-10

    def test_isometry(self):
        rng = random.Random(RNG_SEED + 6)
        for _ in range(1000):
            x, y = random_half_plane_point(rng), random_half_plane_point(rng)
            assert dist_U(x, y) == pytest.approx(dist_B(eta(x), eta(y)), abs=1e-9)


class TestConvert:
    def test_all_pairs_agree(self):
        rng = random.Random(RNG_SEED + 7)
        dists = {"H": dist_H, "D": dist_D, "B": dist_B, "U": dist_U}
        for _ in range(200):
            x, y = random_half_plane_point(rng), random_half_plane_point(rng)
            d0 = dist_U(x, y)
            for model in ("H", "D", "B"):
                xm, ym = convert(x, "U", model), convert(y, "U", model)
                assert dists[model](xm, ym) == pytest.approx(d0, abs=1e-9)


class TestReflections:
    def test_plane_fixes_plane(self):
        u, t = (0.0, 1.0), 0.5
        assert reflect_plane(u, t, (3.0, 0.5)) == (3.0, 0.5)

    def test_plane_involution_and_flip(self):
        assert reflect_plane((1.0, 0.0), 0.0, (3.0, 4.0)) == (-3.0, 4.0)
        rng = random.Random(RNG_SEED + 8)
        for _ in range(200):
            phi = rng.uniform(0, 2 * math.pi)
            u = (math.cos(phi), math.sin(phi))
            t = rng.uniform(-2, 2)
            x = (rng.uniform(-5, 5), rng.uniform(-5, 5))
            y = reflect_plane(u, t, reflect_plane(u, t, x))
            assert max(abs(a - b) for a, b in zip(x, y)) < 1e-12

    def test_plane_rejects_non_unit_normal(self):
        with pytest.raises(ValueError):
            reflect_plane((2.0, 0.0), 0.0, (1.0, 1.0))

    def test_sphere_fixes_sphere_and_inverts(self):
        assert reflect_sphere((0.0, 0.0), 1.0, (1.0, 0.0)) == (1.0, 0.0)
        assert reflect_sphere((0.0, 0.0), 1.0, (2.0, 0.0)) == (0.5, 0.0)

    def test_sphere_pole(self):
        assert reflect_sphere((1.0, 2.0), 3.0, (1.0, 2.0)) is INFINITY
        assert reflect_sphere((1.0, 2.0), 3.0, INFINITY) == (1.0, 2.0)

    def test_sphere_distance_identity(self):
        rng = random.Random(RNG_SEED + 9)
        for _ in range(1000):
            a = (rng.uniform(-3, 3), rng.uniform(-3, 3))
            r = rng.uniform(0.2, 3.0)
            x = (rng.uniform(-5, 5), rng.uniform(-5, 5))
            y = (rng.uniform(-5, 5), rng.uniform(-5, 5))
            if math.dist(x, a) < 1e-6 or math.dist(y, a) < 1e-6:
                continue
            sx, sy = reflect_sphere(a, r, x), reflect_sphere(a, r, y)
            expected = r * r * math.dist(x, y) / (math.dist(x, a) * math.dist(y, a))
            assert math.dist(sx, sy) == pytest.approx(expected, rel=1e-10)

    def test_ball_preserving_compositions_preserve_dist_B(self):
        rng = random.Random(RNG_SEED + 10)
        for _ in range(200):
            maps = []
            for _ in range(rng.randint(1, 3)):
                if rng.random() < 0.5:
                    phi = rng.uniform(0, 2 * math.pi)
                    u = (math.cos(phi), math.sin(phi))
                    maps.append(lambda p, u=u: reflect_plane(u, 0.0, p))
                else:
                    # sphere orthogonal to the unit circle: |a|^2 = r^2 + 1
                    phi = rng.uniform(0, 2 * math.pi)
                    rho = rng.uniform(1.1, 3.0)
                    a = (rho * math.cos(phi), rho * math.sin(phi))
                    r = math.sqrt(rho * rho - 1.0)
                    maps.append(lambda p, a=a, r=r: reflect_sphere(a, r, p))
            x, y = random_ball_point(rng), random_ball_point(rng)
            fx, fy = x.coords, y.coords
            for f in maps:
                fx, fy = f(fx), f(fy)
            assert dist_B(BallPoint(fx), BallPoint(fy)) == pytest.approx(dist_B(x, y), abs=1e-9)


class TestLft:
    def test_identity(self):
        g = LftMap(((1, 0), (0, 1)))
        assert lft_apply(g, 0.3 + 2j) == 0.3 + 2j

    def test_inversion_generator(self):
        v = LftMap(((0, 1), (-1, 0)))
        assert lft_apply(v, 2j) == pytest.approx(0.5j)

    def test_v_squared_acts_trivially(self):
        v = LftMap(((0, 1), (-1, 0)))
        rng = random.Random(RNG_SEED + 11)
        for _ in range(100):
            z = complex(rng.uniform(-3, 3), rng.uniform(0.1, 3))
            assert lft_apply(v, lft_apply(v, z)) == pytest.approx(z, abs=1e-12)

    def test_isometry(self):
        rng = random.Random(RNG_SEED + 12)
        for _ in range(1000):
            g = LftMap(random_sl2(rng))
            z = complex(rng.uniform(-3, 3), rng.uniform(0.05, 3))
            w = complex(rng.uniform(-3, 3), rng.uniform(0.05, 3))
            if z == w:
                continue
            assert dist_u2(lft_apply(g, z), lft_apply(g, w)) == pytest.approx(dist_u2(z, w), abs=1e-9)

    def test_reversing_maps_preserve_distance(self):
        rng = random.Random(RNG_SEED + 13)
        for _ in range(200):
            g = LftMap(random_sl2(rng), orientation="reversing")
            z = complex(rng.uniform(-3, 3), rng.uniform(0.05, 3))
            w = complex(rng.uniform(-3, 3), rng.uniform(0.05, 3))
            if z == w:
                continue
            gz, gw = lft_apply(g, z), lft_apply(g, w)
            assert gz.imag > 0 and gw.imag > 0
            assert dist_u2(gz, gw) == pytest.approx(dist_u2(z, w), abs=1e-9)


class TestKak:
    def test_diagonal_input(self):
        for s in (1.0, 1.5, 9.0):
            k1, a, k2 = kak_sl2(((s, 0.0), (0.0, 1.0 / s)))
            assert a[0][0] == pytest.approx(s, rel=1e-12)

    def test_shear_singular_value(self):
        # top eigenvalue of [[2,1],[1,1]] computed from the quadratic formula
        expected = math.sqrt((3 + math.sqrt(5)) / 2)
        _, a, _ = kak_sl2(((1.0, 1.0), (0.0, 1.0)))
        assert a[0][0] == pytest.approx(expected, rel=1e-12)

    def test_reconstruction(self):
        rng = random.Random(RNG_SEED + 14)
        from pslgeo import linalg

        for _ in range(1000):
            m = [list(r) for r in random_sl2(rng)]
            k1, a, k2 = kak_sl2(m)
            # factors orthogonal with determinant 1, middle diagonal with s >= 1
            for k in (k1, k2):
                assert k[0][0] * k[1][1] - k[0][1] * k[1][0] == pytest.approx(1.0, abs=1e-9)
                assert k[0][0] == pytest.approx(k[1][1], abs=1e-9)
                assert k[0][1] == pytest.approx(-k[1][0], abs=1e-9)
            assert a[0][0] >= 1.0 - 1e-12
            rebuilt = linalg.matmul(linalg.matmul([list(r) for r in k1], [list(r) for r in a]), [list(r) for r in k2])
            for i in range(2):
                for j in range(2):
                    assert rebuilt[i][j] == pytest.approx(m[i][j], abs=1e-9 * max(1.0, abs(m[i][j])))


class TestGeodesics:
    def test_vertical(self):
        g = geodesic_through(1j, 2j)
        assert g.kind == "vertical" and g.a == 0.0

    def test_semicircle_through_i_and_1_plus_i(self):
        g = geodesic_through(1j, 1 + 1j)
        assert g.kind == "semicircle"
        assert g.a == pytest.approx(0.5, abs=1e-12)
        assert g.r == pytest.approx(math.sqrt(5) / 2, abs=1e-12)

    def test_horizontal_family(self):
        for n in (1, 4, 9):
            g = geodesic_through(2j, n + 2j)
            assert g.a == pytest.approx(n / 2.0, abs=1e-12)
            assert g.r == pytest.approx(math.sqrt(n * n / 4.0 + 4.0), abs=1e-12)

    def test_coincident_points_rejected(self):
        with pytest.raises(ValueError):
            geodesic_through(1j, 1j)

    def test_both_points_on_result(self):
        rng = random.Random(RNG_SEED + 15)
        for _ in range(500):
            z = complex(rng.uniform(-3, 3), rng.uniform(0.05, 3))
            w = complex(rng.uniform(-3, 3), rng.uniform(0.05, 3))
            if abs(z - w) < 1e-6:
                continue
            g = geodesic_through(z, w)
            assert g.contains(z) and g.contains(w)


class TestClosestPoint:
    def test_point_on_line(self):
        g = GeodesicU2("vertical", 0.0)
        assert closest_point_on_geodesic(2j, g) == 2j

    def test_vertical_line_from_2i(self):
        for a in (0.5, 1.0, 3.0):
            q = closest_point_on_geodesic(2j, GeodesicU2("vertical", a))
            assert q == pytest.approx(complex(a, math.sqrt(a * a + 4)), abs=1e-12)

    def test_semicircle_centred_at_origin(self):
        for r in (0.5, 1.0, 2.5):
            q = closest_point_on_geodesic(2j, GeodesicU2("semicircle", 0.0, r))
            assert q == pytest.approx(complex(0.0, r), abs=1e-12)

    def test_minimality_by_sampling(self):
        rng = random.Random(RNG_SEED + 16)
        for _ in range(200):
            p = complex(rng.uniform(-3, 3), rng.uniform(0.1, 3))
            if rng.random() < 0.5:
                g = GeodesicU2("vertical", rng.uniform(-3, 3))
            else:
                g = GeodesicU2("semicircle", rng.uniform(-3, 3), rng.uniform(0.2, 3))
            q = closest_point_on_geodesic(p, g)
            d0 = dist_u2(p, q)
            for _ in range(20):
                if g.kind == "vertical":
                    other = complex(g.a, q.imag * math.exp(rng.uniform(-1, 1)))
                else:
                    phi = cmath.phase(q - g.a) + rng.uniform(-1.0, 1.0)
                    phi = min(max(phi, 0.05), math.pi - 0.05)
                    other = g.a + g.r * cmath.exp(1j * phi)
                assert d0 <= dist_u2(p, other) + 1e-12


def _det3(rows):
    (a, b, c), (d, e, f), (g, h, i) = rows
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


class TestLorentzCross:
    def test_identities(self):
        rng = random.Random(RNG_SEED + 17)
        for _ in range(500):
            x, y, z, w = (tuple(rng.gauss(0, 2) for _ in range(3)) for _ in range(4))
            xy = lorentz_cross(x, y)
            assert abs(lorentz_inner(x, xy)) < 1e-10 * 100
            assert abs(lorentz_inner(y, xy)) < 1e-10 * 100
            yx = lorentz_cross(y, x)
            assert all(abs(p + q) < 1e-10 for p, q in zip(xy, yx))
            assert lorentz_inner(xy, z) == pytest.approx(_det3((x, y, z)), rel=1e-9, abs=1e-9)
            assert lorentz_inner(x, lorentz_cross(y, z)) == pytest.approx(
                lorentz_inner(lorentz_cross(x, y), z), rel=1e-9, abs=1e-9)
            lhs = lorentz_cross(x, lorentz_cross(y, z))
            rhs = tuple(lorentz_inner(x, y) * zc - lorentz_inner(z, x) * yc for yc, zc in zip(y, z))
            assert all(abs(p - q) < 1e-8 for p, q in zip(lhs, rhs))
            gram = (lorentz_inner(x, w) * lorentz_inner(y, z)
                    - lorentz_inner(x, z) * lorentz_inner(y, w))
            assert lorentz_inner(xy, lorentz_cross(z, w)) == pytest.approx(gram, rel=1e-9, abs=1e-8)


class TestTriangles:
    @staticmethod
    def random_triangle(rng):
        while True:
            pts = [random_hyperboloid_point(rng, spread=1.0) for _ in range(3)]
            try:
                return triangle_data(*pts)
            except ValueError:
                continue

    def test_sine_rule(self):
        rng = random.Random(RNG_SEED + 18)
        for _ in range(500):
            (a, b, c), (al, be, ga) = self.random_triangle(rng)
            r1 = math.sinh(a) / math.sin(al)
            r2 = math.sinh(b) / math.sin(be)
            r3 = math.sinh(c) / math.sin(ga)
            assert r1 == pytest.approx(r2, rel=1e-8)
            assert r1 == pytest.approx(r3, rel=1e-8)

    def test_first_cosine_rule(self):
        rng = random.Random(RNG_SEED + 19)
        for _ in range(500):
            (a, b, c), (_, _, ga) = self.random_triangle(rng)
            expected = (math.cosh(a) * math.cosh(b) - math.cosh(c)) / (math.sinh(a) * math.sinh(b))
            assert math.cos(ga) == pytest.approx(expected, abs=1e-8)

    def test_second_cosine_rule(self):
        rng = random.Random(RNG_SEED + 20)
        for _ in range(500):
            (a, b, c), (al, be, ga) = self.random_triangle(rng)
            expected = (math.cos(al) * math.cos(be) + math.cos(ga)) / (math.sin(al) * math.sin(be))
            assert math.cosh(c) == pytest.approx(expected, abs=1e-8)

    def test_angle_sum_below_pi(self):
        rng = random.Random(RNG_SEED + 21)
        for _ in range(500):
            _, angles = self.random_triangle(rng)
            assert sum(angles) < math.pi

    def test_collinear_rejected(self):
        x = HyperboloidPoint((1, 0, 0))
        y = HyperboloidPoint((math.cosh(1), math.sinh(1), 0))
        z = HyperboloidPoint((math.cosh(2), math.sinh(2), 0))
        with pytest.raises(ValueError):
            triangle_data(x, y, z)


class TestVertexAtInfinity:
    def test_absolute_length(self):
        # triangle bounded by the unit semicircle, the vertical Re z = t and
        # the imaginary axis: angles (alpha, pi/2, 0), finite side [i, A]
        for t in (0.1, 0.3, 0.5, 0.8):
            A = complex(t, math.sqrt(1 - t * t))
            B = 1j
            # interior angle at A between the upward vertical and the circle
            up = (0.0, 1.0)
            theta = math.atan2(A.imag, A.real)
            tangent = (-math.sin(theta), math.cos(theta))  # toward B along the circle
            alpha = math.acos(up[0] * tangent[0] + up[1] * tangent[1])
            c = dist_u2(A, B)
            assert c == pytest.approx(math.acosh(1.0 / math.sin(alpha)), abs=1e-8)
