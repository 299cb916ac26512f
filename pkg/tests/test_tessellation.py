import math
import random
import xml.etree.ElementTree as ET
from fractions import Fraction

import pytest

from pslgeo.exactmat import ExactMatrix, GeneratorSet, mat_inv, mat_mul, psl_canonicalize
from pslgeo.hyperbolic import dist_u2
from pslgeo.tessellation import (
    IDENTITY,
    RTerm,
    Tile,
    U,
    V,
    alpha_length,
    dirichlet_halfspace_contains,
    f_sum,
    geodesic_tile_sequence,
    in_fundamental_domain,
    r_form,
    reduce_to_T,
    svg_emit,
    tile_sequence_for,
    tiles_to_depth,
    word_from_tiles,
)
from pslgeo.words import Word

SEED = 20260810
SIGMA2 = GeneratorSet.sigma(2)


def random_point(rng, remax=4.0):
    return complex(rng.uniform(-remax, remax), rng.uniform(0.02, 5.0))


def random_psl2(rng, max_letters=12):
    m = ExactMatrix.identity(2)
    for _ in range(rng.randint(0, max_letters)):
        pick = rng.choice((SIGMA2[0].rep, SIGMA2[1].rep))
        if rng.random() < 0.5:
            pick = mat_inv(pick)
        m = mat_mul(m, pick)
    return psl_canonicalize(m)


def lft(g, z):
    (a, b), (c, d) = g.rep.entries if hasattr(g, "rep") else g.entries
    return (a * z + b) / (c * z + d)


class TestFundamentalDomain:
    def test_interior_point(self):
        assert in_fundamental_domain(2j)
        assert in_fundamental_domain(2j, closed=True)

    def test_boundary_point(self):
        assert not in_fundamental_domain(1j)
        assert in_fundamental_domain(1j, closed=True)

    def test_translated_point(self):
        assert not in_fundamental_domain(1 + 2j)
        assert not in_fundamental_domain(1 + 2j, closed=True)
        gamma, z0 = reduce_to_T(1 + 2j)
        assert gamma == U and z0 == 2j


class TestReduce:
    def test_interior_identity(self):
        gamma, z0 = reduce_to_T(0.2 + 1.5j)
        assert gamma.is_identity() and z0 == 0.2 + 1.5j

    def test_translates(self):
        for n in (-3, 1, 7):
            gamma, z0 = reduce_to_T(n + 2j)
            assert z0 == 2j
            assert gamma.rep == ExactMatrix([[1, n], [0, 1]])

    def test_inversion(self):
        gamma, z0 = reduce_to_T(0.5j)
        assert z0 == 2j and gamma == V

    def test_round_trip(self):
        rng = random.Random(SEED)
        for _ in range(10_000):
            z = random_point(rng)
            gamma, z0 = reduce_to_T(z)
            assert in_fundamental_domain(z0, closed=True)
            assert abs(lft(gamma, z0) - z) < 1e-9 * max(1.0, abs(z))

    def test_tile_membership_unique(self):
        rng = random.Random(SEED + 1)
        hits = 0
        while hits < 10_000:
            z = random_point(rng)
            gamma, z0 = reduce_to_T(z)
            if not in_fundamental_domain(z0):
                continue  # boundary point; skip for the uniqueness check
            hits += 1
            for other in (gamma * U, gamma * U.inverse(), gamma * V, U * gamma, V * gamma):
                if other == gamma:
                    continue
                assert not in_fundamental_domain(lft(other.inverse(), z))


class TestDirichlet:
    def test_base_point_in_all_halfspaces(self):
        for gamma in (U, U.inverse(), V, U * V):
            assert dirichlet_halfspace_contains(2j, gamma, 2j)

    def test_u_boundary_is_half_line(self):
        # points left of Re z = 1/2 are closer to p0 than to u p0
        assert dirichlet_halfspace_contains(0.49 + 1j, U, 2j)
        assert not dirichlet_halfspace_contains(0.51 + 1j, U, 2j)
        mid = 0.5 + 1.7j
        assert abs(dist_u2(mid, 2j) - dist_u2(mid, 1 + 2j)) < 1e-12

    def test_v_boundary_is_unit_circle(self):
        assert dirichlet_halfspace_contains(1.01j, V, 2j)
        assert not dirichlet_halfspace_contains(0.99j, V, 2j)
        on_circle = complex(math.cos(1.3), math.sin(1.3))
        assert abs(dist_u2(on_circle, 2j) - dist_u2(on_circle, lft(V, 2j))) < 1e-12

    def test_identity_rejected(self):
        with pytest.raises(ValueError):
            dirichlet_halfspace_contains(1j, IDENTITY, 2j)


class TestTileSequence:
    def test_both_in_base_tile(self):
        tiles = geodesic_tile_sequence(0.1 + 2j, -0.2 + 1.4j)
        assert tiles == [Tile(IDENTITY)]

    def test_single_crossing(self):
        tiles = geodesic_tile_sequence(2j, 1 + 2j)
        assert [t.label for t in tiles] == [IDENTITY, U]

    @pytest.mark.parametrize("n", [1, 2, 3, 7, 20])
    def test_horizontal_run(self, n):
        tiles = geodesic_tile_sequence((Fraction(0), Fraction(2)), (Fraction(n), Fraction(2)))
        assert len(tiles) == n + 1
        expected = [psl_canonicalize(ExactMatrix([[1, k], [0, 1]])) for k in range(n + 1)]
        assert [t.label for t in tiles] == expected

    def test_adjacency_everywhere(self):
        rng = random.Random(SEED + 2)
        for _ in range(300):
            z, w = random_point(rng), random_point(rng)
            if abs(z - w) < 1e-6:
                continue
            tiles = geodesic_tile_sequence(z, w)
            assert in_fundamental_domain(lft(tiles[0].label.inverse(), z), closed=True)
            assert in_fundamental_domain(lft(tiles[-1].label.inverse(), w), closed=True)
            for a, b in zip(tiles, tiles[1:]):
                assert a.label.inverse() * b.label in (U, U.inverse(), V)

    @staticmethod
    def _crossing_point(z_local, w_local, step):
        """Where the local path meets the side shared with the next tile."""
        from pslgeo.hyperbolic import geodesic_through

        g = geodesic_through(z_local, w_local)
        if step == U:
            x = 0.5
        elif step == U.inverse():
            x = -0.5
        else:  # the unit-circle side
            if g.kind == "vertical":
                return complex(g.a, math.sqrt(1 - g.a * g.a))
            x = (g.a * g.a + 1 - g.r * g.r) / (2 * g.a)
        if g.kind == "vertical":
            raise AssertionError("vertical path cannot cross a vertical side")
        return complex(x, math.sqrt(max(g.r ** 2 - (x - g.a) ** 2, 0.0)))

    def test_closures_meet_segment(self):
        # consecutive tiles share their crossing point, which must lie on
        # the segment and in both closures; endpoints anchor the ends
        rng = random.Random(SEED + 3)
        checked = 0
        while checked < 50:
            z, w = random_point(rng, 2.0), random_point(rng, 2.0)
            if abs(z - w) < 1e-6:
                continue
            checked += 1
            tiles = geodesic_tile_sequence(z, w)
            total = dist_u2(z, w)
            for a, b in zip(tiles, tiles[1:]):
                step = a.label.inverse() * b.label
                p_local = self._crossing_point(lft(a.label.inverse(), z),
                                               lft(a.label.inverse(), w), step)
                assert in_fundamental_domain(p_local, closed=True)
                assert in_fundamental_domain(lft(step.inverse(), p_local), closed=True)
                p = lft(a.label, p_local)
                assert dist_u2(z, p) + dist_u2(p, w) == pytest.approx(total, abs=1e-7)

    def test_vertex_pass_is_deterministic_and_adjacent(self):
        start = (Fraction(0), Fraction(2))
        end = (Fraction(3, 5), Fraction(1, 5))  # exact pass through 1/2 + (r3/2) i
        first = geodesic_tile_sequence(start, end)
        second = geodesic_tile_sequence(start, end)
        assert first == second
        for a, b in zip(first, first[1:]):
            assert a.label.inverse() * b.label in (U, U.inverse(), V)
        # the route turns through the corner fan, so it is longer than the
        # two tiles a generic nearby segment crosses
        assert len(first) == 5

    def test_identical_endpoints_rejected(self):
        with pytest.raises(ValueError):
            geodesic_tile_sequence(2j, 2j)


class TestWordFromTiles:
    def test_empty(self):
        assert word_from_tiles([Tile(IDENTITY)]).letters == ()

    def test_translation_chain(self):
        u2 = psl_canonicalize(ExactMatrix([[1, 2], [0, 1]]))
        w = word_from_tiles([Tile(IDENTITY), Tile(U), Tile(u2)])
        assert w.letters == ((0, 1), (0, 1))

    def test_non_adjacent_rejected(self):
        u2 = psl_canonicalize(ExactMatrix([[1, 2], [0, 1]]))
        with pytest.raises(ValueError):
            word_from_tiles([Tile(IDENTITY), Tile(u2)])

    def test_word_recovers_group_element(self):
        rng = random.Random(SEED + 4)
        for _ in range(200):
            gamma = random_psl2(rng)
            tiles = tile_sequence_for(gamma.rep)
            word = word_from_tiles(tiles)
            assert word.psl_evaluate(SIGMA2) == gamma


class TestRForm:
    def test_merge_translations(self):
        w = Word(((0, 1), (0, 1), (0, 1)))
        assert r_form(w) == [RTerm("u", 3)]

    def test_single_inversion(self):
        assert r_form(Word(((1, 1),))) == [RTerm("v")]

    def test_mixed(self):
        w = Word(((0, 1), (1, 1), (0, -1), (0, -1)))
        assert r_form(w) == [RTerm("u", 1), RTerm("v"), RTerm("u", -2)]

    def test_cancellations(self):
        w = Word(((0, 1), (0, -1), (1, 1), (1, 1), (0, 1)))
        assert r_form(w) == [RTerm("u", 1)]

    def test_product_preserved(self):
        rng = random.Random(SEED + 5)
        for _ in range(300):
            letters = tuple(
                (rng.randint(0, 1), rng.choice((1, -1))) for _ in range(rng.randint(0, 20))
            )
            word = Word(letters)
            terms = r_form(word)
            prod = ExactMatrix.identity(2)
            for t in terms:
                prod = mat_mul(prod, t.matrix())
            assert psl_canonicalize(prod) == word.psl_evaluate(SIGMA2)
            for a, b in zip(terms, terms[1:]):
                assert a.kind != b.kind  # alternation invariant


class TestWeights:
    def test_f_values(self):
        assert f_sum([RTerm("v")]) == 1.0
        assert f_sum([RTerm("u", 1)]) == pytest.approx(math.log(2))
        mixed = [RTerm("u", 3), RTerm("v"), RTerm("u", -2)]
        assert f_sum(mixed) == pytest.approx(math.log(4) + 1 + math.log(3))

    def test_alpha_values(self):
        assert alpha_length([]) == 0.0
        assert alpha_length([RTerm("v")]) == pytest.approx(math.log(4), abs=1e-12)
        for n in (1, 5, -9):
            assert alpha_length([RTerm("u", n)]) == pytest.approx(
                math.acosh(1 + n * n / 8.0), abs=1e-12)

    def test_weight_length_bracket(self):
        rng = random.Random(SEED + 6)
        for _ in range(500):
            terms = []
            kind = rng.choice(("u", "v"))
            for _ in range(rng.randint(1, 12)):
                if kind == "v":
                    terms.append(RTerm("v"))
                else:
                    n = rng.choice((1, -1)) * rng.randint(1, 10 ** rng.randint(1, 6))
                    terms.append(RTerm("u", n))
                kind = "u" if kind == "v" else "v"
            length = alpha_length(terms)
            weight = f_sum(terms)
            assert length / 3.0 <= weight <= 3.0 * length

    def test_geodesic_weight_bracket_measured(self):
        # the weight of the traced word brackets the hyperbolic distance;
        # the interval below was measured once over this seeded family
        rng = random.Random(SEED + 7)
        p0 = 2j
        ratios = []
        for _ in range(500):
            gamma = random_psl2(rng)
            image = lft(gamma, p0)
            if abs(image - p0) < 1e-9:
                continue
            terms = r_form(word_from_tiles(tile_sequence_for(gamma.rep)))
            d = dist_u2(p0, image)
            ratios.append(f_sum(terms) / d)
        assert min(ratios) > 0.19
        assert max(ratios) < 1.75


class TestSvg:
    def test_empty_scene_is_valid_xml(self):
        text = svg_emit(-2.0, 2.0)
        root = ET.fromstring(text)
        assert root.tag.endswith("svg")

    def test_tiles_render_arcs(self):
        tiles = tiles_to_depth(5)
        text = svg_emit(-2.0, 2.0, tiles=tiles)
        root = ET.fromstring(text)
        ns = "{http://www.w3.org/2000/svg}"
        arcs = [el for el in root.iter(f"{ns}path") if el.get("class") == "tile"]
        assert len(arcs) > 0

    def test_geodesic_overlay_present(self):
        text = svg_emit(-1.0, 6.0, tiles=tiles_to_depth(3), geodesic=(2j, 5 + 2j))
        root = ET.fromstring(text)
        ns = "{http://www.w3.org/2000/svg}"
        marked = [el for el in root.iter(f"{ns}path") if el.get("class") == "geodesic"]
        assert len(marked) == 1

    def test_bad_region_rejected(self):
        with pytest.raises(ValueError):
            svg_emit(2.0, -2.0)
