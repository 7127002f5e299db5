"""Steering vector, channel sampling, and link-budget tests."""

from __future__ import annotations

import numpy as np
import pytest
from scipy.stats import chisquare

import parasim
from parasim import ArrayGeometry, LinkBudget, PathSet

from helpers import F_C, LAMBDA, single_active_geometry


@pytest.fixture(scope="module")
def geom22(half_wave_spec):
    return ArrayGeometry(n_active=2, n_parasitic_per_active=2,
                         dx=0.4 * LAMBDA, dy=0.5 * LAMBDA,
                         dipole=half_wave_spec)


class TestSteering:
    def test_x_broadside_all_ones(self, geom22):
        a = parasim.steering_x(0.0, geom22)
        assert np.allclose(a, 1.0)

    def test_x_endfire_two_elements(self, geom22):
        a = parasim.steering_x(np.pi / 2, geom22)
        expected = np.array([np.exp(-1j * 0.8 * np.pi),
                             np.exp(+1j * 0.8 * np.pi)])
        assert np.allclose(a, expected, atol=1e-12)

    def test_x_unit_modulus(self, geom22):
        rng = np.random.default_rng(3)
        for theta in rng.uniform(-np.pi, np.pi, 25):
            assert np.allclose(np.abs(parasim.steering_x(theta, geom22)), 1.0)

    def test_x_conjugate_symmetry(self, geom22):
        for theta in (0.3, -1.2, 2.8):
            a_pos = parasim.steering_x(theta, geom22)
            a_neg = parasim.steering_x(-theta, geom22)
            assert np.allclose(a_neg, np.conj(a_pos), atol=1e-12)

    def test_x_odd_count_asymmetric_exponents(self, half_wave_spec):
        geom = single_active_geometry(3)
        a = parasim.steering_x(0.7, geom)
        m = geom.signed_offsets()
        assert list(m) == [-1, 1, 2]
        phases = 2 * np.pi * m * 0.4 * np.sin(0.7)
        assert np.allclose(a, np.exp(1j * phases), atol=1e-12)

    def test_y_perpendicular_all_ones(self, geom22):
        a = parasim.steering_y(np.pi / 2, geom22)
        assert np.allclose(a, 1.0)

    def test_y_axial_two_elements(self, geom22):
        a = parasim.steering_y(0.0, geom22)
        assert np.allclose(a, [1.0, np.exp(-1j * np.pi)], atol=1e-12)

    def test_y_first_entry_one(self, geom22):
        for theta in (-2.0, 0.1, 1.4):
            assert parasim.steering_y(theta, geom22)[0] == 1.0

    def test_y_mirror_symmetries(self, geom22):
        # phases go with cos(theta): even in theta, conjugated about pi/2
        for theta in (0.4, -0.9):
            assert np.allclose(parasim.steering_y(-theta, geom22),
                               parasim.steering_y(theta, geom22), atol=1e-12)
            assert np.allclose(parasim.steering_y(np.pi - theta, geom22),
                               np.conj(parasim.steering_y(theta, geom22)),
                               atol=1e-12)


class TestMultipathChannel:
    def test_los_reduction_single_active(self, half_wave_spec):
        geom = single_active_geometry(4)
        theta = 0.6
        paths = PathSet(alphas=np.array([1.0 + 0j]),
                        thetas=np.array([theta]))
        ch = parasim.multipath_channel(paths, geom)
        assert np.allclose(ch.h_a, [1.0])
        assert np.allclose(ch.h_p, parasim.steering_x(theta, geom))
        assert np.allclose(ch.h, np.concatenate([[1.0], ch.h_p]))

    def test_destructive_superposition(self, geom22):
        paths = PathSet(alphas=np.array([1.0, -1.0], dtype=complex),
                        thetas=np.array([0.8, 0.8]))
        ch = parasim.multipath_channel(paths, geom22)
        assert np.abs(ch.h).max() < 1e-14

    def test_single_path_norm(self, geom22):
        paths = PathSet(alphas=np.array([1.0 + 0j]), thetas=np.array([1.1]))
        ch = parasim.multipath_channel(paths, geom22)
        n_a, n_p = 2, 2
        assert np.linalg.norm(ch.h) ** 2 == pytest.approx(n_a * (n_p + 1),
                                                          abs=1e-12)

    def test_linearity_in_gains(self, geom22):
        thetas = np.array([0.2, -1.0, 2.2])
        a1 = np.array([1.0 + 2j, 0.5, -1j])
        a2 = np.array([-0.3, 1j, 2.0 + 0j])
        h1 = parasim.multipath_channel(PathSet(a1, thetas), geom22).h
        h2 = parasim.multipath_channel(PathSet(a2, thetas), geom22).h
        h12 = parasim.multipath_channel(PathSet(a1 + 3 * a2, thetas), geom22).h
        assert np.allclose(h12, h1 + 3 * h2, atol=1e-12)

    def test_kron_ordering_against_double_loop(self, geom22):
        paths = parasim.sample_paths(3, (9, 0))
        ch = parasim.multipath_channel(paths, geom22)
        n_p = 2
        for j in range(2):
            for i in range(n_p):
                expected = 0.0
                for alpha, theta in zip(paths.alphas, paths.thetas):
                    a_y = parasim.steering_y(theta, geom22)
                    a_x = parasim.steering_x(theta, geom22)
                    expected += alpha * a_y[j] * a_x[i]
                expected /= np.sqrt(paths.n_paths)
                assert ch.h_p[j * n_p + i] == pytest.approx(expected)

    def test_mean_channel_power(self, geom22):
        # law of large numbers on ||h_a||^2 over many independent draws
        n_draws = 100_000
        total = 0.0
        rng = np.random.default_rng(np.random.SeedSequence((77, 0)))
        k = np.arange(geom22.n_active)
        for _ in range(n_draws):
            thetas = rng.uniform(-np.pi, np.pi, 4)
            alphas = (rng.standard_normal(4)
                      + 1j * rng.standard_normal(4)) / np.sqrt(2)
            a_y = np.exp(-1j * 2 * np.pi * np.outer(k, np.cos(thetas))
                         * geom22.dy / LAMBDA)
            h_a = (a_y @ alphas) / 2.0
            total += np.linalg.norm(h_a) ** 2
        assert total / n_draws == pytest.approx(geom22.n_active, rel=0.02)


class TestSamplePaths:
    def test_determinism(self):
        a = parasim.sample_paths(8, (5, 3))
        b = parasim.sample_paths(8, (5, 3))
        assert np.array_equal(a.alphas, b.alphas)
        assert np.array_equal(a.thetas, b.thetas)

    def test_distinct_keys_differ(self):
        a = parasim.sample_paths(8, (5, 3))
        b = parasim.sample_paths(8, (5, 4))
        assert not np.array_equal(a.alphas, b.alphas)

    def test_gain_moments(self):
        p = parasim.sample_paths(100_000, (11, 0))
        assert abs(p.alphas.mean()) < 0.02
        assert np.var(p.alphas) == pytest.approx(1.0, rel=0.02)

    def test_angle_uniformity(self):
        p = parasim.sample_paths(100_000, (13, 0))
        counts, _ = np.histogram(p.thetas, bins=50, range=(-np.pi, np.pi))
        assert chisquare(counts).pvalue > 0.01

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            parasim.sample_paths(0, 1)


class TestLinkConstant:
    def test_reference_value(self, half_wave_spec):
        value = parasim.link_constant(LinkBudget(), half_wave_spec)
        # hand evaluation: (lam/4 pi r)^2 * R_r / (4 kB T BW)
        lam = half_wave_spec.wavelength
        by_hand = (lam / (4 * np.pi * 250.0)) ** 2 * 95.5 \
            / (4 * 1.38e-23 * 300.0 * 20e6)
        assert value == pytest.approx(by_hand, rel=1e-12)
        assert value == pytest.approx(5.36e4, rel=0.01)

    def test_inverse_square_range(self, half_wave_spec):
        near = parasim.link_constant(LinkBudget(range_m=250.0), half_wave_spec)
        far = parasim.link_constant(LinkBudget(range_m=500.0), half_wave_spec)
        assert near / far == pytest.approx(4.0, rel=1e-12)

    def test_bandwidth_scaling(self, half_wave_spec):
        narrow = parasim.link_constant(LinkBudget(bandwidth_hz=20e6),
                                       half_wave_spec)
        wide = parasim.link_constant(LinkBudget(bandwidth_hz=40e6),
                                     half_wave_spec)
        assert narrow / wide == pytest.approx(2.0, rel=1e-12)

    def test_positive_fields_enforced(self):
        with pytest.raises(ValueError):
            LinkBudget(range_m=-1.0)
