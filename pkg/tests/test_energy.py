import math
import unittest

import numpy as np

from pharmonic.energy import (
    check_exponent, conjugate, dirichlet_sum, gradient_p, monotonicity_gap,
    norms, p_laplacian, pairing, pairing_bound, region_energy,
    signed_power)
from pharmonic.exceptions import ExponentError, FieldUndefined
from pharmonic.families import FreeGroup, Lattice
from pharmonic.graph import FiniteRegion, ball, load_edge_list


def random_field(rng, vertices, low=-1.0, high=1.0):
    return {x: float(rng.uniform(low, high)) for x in sorted(vertices)}


class ExponentTest(unittest.TestCase):

    def test_valid(self):
        self.assertEqual(2.0, check_exponent(2))
        self.assertEqual(1.5, check_exponent('1.5'))

    def test_invalid(self):
        for p in (1, 0.5, -3, float('inf'), float('nan'), True, 'x', None):
            with self.assertRaises(ExponentError):
                check_exponent(p)

    def test_conjugate(self):
        self.assertEqual(2.0, conjugate(2))
        self.assertEqual(1.5, conjugate(3))

    def test_signed_power(self):
        self.assertEqual(0.0, signed_power(0.0, -0.5))
        self.assertAlmostEqual(-2.0, signed_power(-8.0, 1 / 3))
        self.assertEqual(9.0, signed_power(3.0, 2))


class DirichletSumTest(unittest.TestCase):

    def setUp(self):
        self.g = Lattice(1)
        self.linear = {(x,): float(x) for x in range(-5, 6)}

    def test_gradient_of_linear_field(self):
        for p in (1.5, 2, 3):
            self.assertAlmostEqual(
                2.0, gradient_p(self.g, self.linear, (0,), p))

    def test_dirichlet_sum_counts_edges_twice(self):
        self.assertEqual(
            4.0, dirichlet_sum(self.g, self.linear, {(0,), (1,)}, 2))

    def test_region_energy_doubles_boundary_edges(self):
        region = FiniteRegion(self.g, [(0,), (1,)])
        self.assertEqual(6.0, region_energy(self.g, self.linear, region, 2))

    def test_undefined_field(self):
        with self.assertRaises(FieldUndefined):
            gradient_p(self.g, {(0,): 1.0}, (0,), 2)

    def test_dirichlet_sum_is_reproducible(self):
        g = FreeGroup(2)
        B = ball(g, g.base, 4)
        f = random_field(np.random.default_rng(3), B.closure)
        first = dirichlet_sum(g, f, B.vertices, 2.5)
        shuffled = dict(reversed(list(f.items())))
        self.assertEqual(first, dirichlet_sum(g, shuffled,
                                              list(B.vertices), 2.5))


class LaplacianTest(unittest.TestCase):

    def test_linear_fields_are_harmonic(self):
        g = Lattice(2)
        f = {x: 2.0 * x[0] - 0.5 * x[1]
             for x in ball(g, g.base, 3).closure}
        for p in (1.5, 2, 4):
            self.assertAlmostEqual(0.0, p_laplacian(g, f, (0, 0), p))

    def test_square(self):
        g = Lattice(1)
        f = {(x,): float(x * x) for x in (-1, 0, 1)}
        self.assertEqual(2.0, p_laplacian(g, f, (0,), 2))


class PairingTest(unittest.TestCase):

    def setUp(self):
        self.g = Lattice(2)
        self.B = ball(self.g, self.g.base, 3)
        self.centers = sorted(ball(self.g, self.g.base, 2).vertices)

    def test_pairing_with_a_point_mass(self):
        rng = np.random.default_rng(0)
        for _ in range(1000):
            p = float(rng.uniform(1.1, 4.0))
            h = random_field(rng, self.B.closure)
            x = self.centers[rng.integers(len(self.centers))]
            delta = {y: 1.0 if y == x else 0.0 for y in h}
            expected = -2 * p_laplacian(self.g, h, x, p)
            got = pairing(self.g, h, delta, {x}, p)
            self.assertTrue(
                math.isclose(got, expected, rel_tol=1e-9, abs_tol=1e-12),
                '%r != %r at p=%g' % (got, expected, p))

    def test_hoelder_bound(self):
        rng = np.random.default_rng(1)
        support = ball(self.g, self.g.base, 2).vertices
        for _ in range(1000):
            p = float(rng.uniform(1.1, 4.0))
            h = random_field(rng, self.B.closure)
            f = random_field(rng, self.B.closure)
            value = pairing(self.g, h, f, support, p)
            bound = pairing_bound(self.g, h, f, support, p)
            self.assertLessEqual(abs(value), bound * (1 + 1e-12) + 1e-12)

    def test_monotonicity(self):
        rng = np.random.default_rng(2)
        support = ball(self.g, self.g.base, 2).vertices
        for _ in range(1000):
            p = float(rng.uniform(1.1, 4.0))
            f1 = random_field(rng, self.B.closure)
            f2 = random_field(rng, self.B.closure)
            self.assertGreaterEqual(
                monotonicity_gap(self.g, f1, f2, support, p), -1e-12)

    def test_monotonicity_gap_vanishes_on_shifts(self):
        rng = np.random.default_rng(4)
        f1 = random_field(rng, self.B.closure)
        f2 = {x: v + 3.0 for x, v in f1.items()}
        gap = monotonicity_gap(self.g, f1, f2, self.B.vertices, 2.5)
        self.assertAlmostEqual(0.0, gap, places=10)


class NormsTest(unittest.TestCase):

    def test_norms(self):
        g = Lattice(1)
        f = {(x,): float(x) for x in (-1, 0, 1)}
        result = norms(g, f, {(0,)}, 2)
        self.assertAlmostEqual(math.sqrt(2), result.dp_norm)
        self.assertEqual(1.0, result.sup_norm)
        self.assertAlmostEqual(math.sqrt(2) + 1, result.bdp_norm)
        self.assertEqual(frozenset({(0,)}), result.truncation)

    def test_norms_need_the_base_vertex(self):
        g = Lattice(1)
        f = {(x,): float(x) for x in (1, 2, 3)}
        with self.assertRaises(FieldUndefined):
            norms(g, f, {(2,)}, 2)


class ClosedFormTest(unittest.TestCase):

    def setUp(self):
        self.g = Lattice(1)
        self.delta = {(x,): 1.0 if x == 0 else 0.0 for x in range(-2, 3)}

    def test_gradient_of_a_point_mass(self):
        self.assertEqual(2.0, gradient_p(self.g, self.delta, (0,), 2))

    def test_dirichlet_sum_of_a_point_mass(self):
        self.assertEqual(
            4.0, dirichlet_sum(self.g, self.delta, {(-1,), (0,), (1,)}, 2))

    def test_norms_of_a_point_mass(self):
        result = norms(self.g, self.delta, {(-1,), (0,), (1,)}, 2)
        self.assertAlmostEqual(math.sqrt(5), result.dp_norm)
        self.assertEqual(3.0, result.bdp_norm)
        self.assertEqual(1.0, result.sup_norm)

    def test_norms_of_constants(self):
        ones = dict.fromkeys(self.delta, 1.0)
        self.assertEqual((1.0, 1.0, 1.0),
                         tuple(norms(self.g, ones, {(0,)}, 3)[:3]))
        zeros = dict.fromkeys(self.delta, 0.0)
        self.assertEqual((0.0, 0.0, 0.0),
                         tuple(norms(self.g, zeros, {(0,)}, 3)[:3]))

    def test_path_laplacian(self):
        g = load_edge_list('a b\nb c\n')
        self.assertEqual(
            0.0, p_laplacian(g, {'a': 0.0, 'b': 0.5, 'c': 1.0}, 'b', 3))
        self.assertEqual(
            -1.0, p_laplacian(g, {'a': 0.0, 'b': 1.0, 'c': 1.0}, 'b', 2))

    def test_ramp_energy(self):
        for n in (3, 7):
            u = {(k,): max(0.0, 1 - abs(k) / n) for k in range(-n - 1, n + 2)}
            for p in (1.5, 3):
                self.assertAlmostEqual(
                    4 * n ** (1 - p),
                    dirichlet_sum(self.g, u, [(k,) for k in range(-n, n + 1)],
                                  p))


class IdentitiesTest(unittest.TestCase):
    """Randomized identities and inequalities on a Z^2 ball."""

    checks = 1000

    def setUp(self):
        self.g = Lattice(2)
        self.B = ball(self.g, self.g.base, 2)
        self.closure = ball(self.g, self.g.base, 3).closure

    def fields(self, rng, count):
        return [random_field(rng, self.closure) for _ in range(count)]

    def energy(self, f, p):
        return dirichlet_sum(self.g, f, self.B.vertices, p)

    def test_laplacian_sign_and_scaling(self):
        rng = np.random.default_rng(10)
        for _ in range(self.checks):
            p = float(rng.uniform(1.1, 4.0))
            c = float(rng.uniform(-3, 3)) or 1.0
            f, = self.fields(rng, 1)
            x = (int(rng.integers(-1, 2)), int(rng.integers(-1, 2)))
            value = p_laplacian(self.g, f, x, p)
            negated = {y: -v for y, v in f.items()}
            scaled = {y: c * v for y, v in f.items()}
            self.assertTrue(math.isclose(
                -value, p_laplacian(self.g, negated, x, p),
                rel_tol=1e-9, abs_tol=1e-12))
            self.assertTrue(math.isclose(
                abs(c) ** (p - 2) * c * value,
                p_laplacian(self.g, scaled, x, p),
                rel_tol=1e-9, abs_tol=1e-12))

    def test_linear_laplacian(self):
        rng = np.random.default_rng(11)
        for _ in range(self.checks):
            f, = self.fields(rng, 1)
            x = (int(rng.integers(-1, 2)), int(rng.integers(-1, 2)))
            direct = sum(f[y] - f[x] for y in self.g.neighbors(x))
            self.assertTrue(math.isclose(
                direct, p_laplacian(self.g, f, x, 2),
                rel_tol=1e-9, abs_tol=1e-12))

    def test_product_bound(self):
        rng = np.random.default_rng(12)
        for _ in range(self.checks):
            p = float(rng.uniform(1.1, 4.0))
            f, h = self.fields(rng, 2)
            fh = {x: f[x] * h[x] for x in f}
            a = max(abs(f[x]) for x in self.B.closure)
            b = max(abs(h[x]) for x in self.B.closure)
            bound = b * self.energy(f, p) ** (1 / p) \
                + a * self.energy(h, p) ** (1 / p)
            self.assertLessEqual(self.energy(fh, p) ** (1 / p),
                                 bound * (1 + 1e-9))

    def test_clarkson_for_p_at_least_2(self):
        rng = np.random.default_rng(13)
        for _ in range(self.checks):
            p = float(rng.uniform(2.0, 5.0))
            f1, f2 = self.fields(rng, 2)
            plus = {x: f1[x] + f2[x] for x in f1}
            minus = {x: f1[x] - f2[x] for x in f1}
            left = self.energy(plus, p) + self.energy(minus, p)
            right = 2 ** (p - 1) * (self.energy(f1, p) + self.energy(f2, p))
            self.assertLessEqual(left, right * (1 + 1e-9))

    def test_clarkson_for_p_up_to_2(self):
        rng = np.random.default_rng(14)
        for _ in range(self.checks):
            p = float(rng.uniform(1.05, 2.0))
            q = conjugate(p)
            f1, f2 = self.fields(rng, 2)
            plus = {x: f1[x] + f2[x] for x in f1}
            minus = {x: f1[x] - f2[x] for x in f1}
            left = self.energy(plus, p) ** (q / p) \
                + self.energy(minus, p) ** (q / p)
            right = 2 * (self.energy(f1, p) + self.energy(f2, p)) ** (q - 1)
            self.assertLessEqual(left, right * (1 + 1e-9))
