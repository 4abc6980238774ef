import math

import numpy as np
import pytest

from bellband import (
    AngleTriple,
    DomainError,
    JointDistribution4,
    OctetSequences,
    ShapeError,
    boole_check,
    empirical_correlation,
    feasible_band,
    feasible_distribution,
    sample_lhv_pairs,
    sample_octet,
    sample_singlet_pairs,
)


def lhv_correlation_by_quadrature(theta_a, theta_b, points=200_000):
    """Independent oracle: Riemann average of the deterministic outcome
    product over the hidden angle."""
    lam = (np.arange(points) + 0.5) / points * 2 * math.pi
    a = np.where(np.cos(lam - theta_a) >= 0, 1, -1)
    b = np.where(np.cos(lam - theta_b) >= 0, -1, 1)
    return float(np.mean(a * b))


class TestSingletSampler:
    def test_theta_zero_forces_opposite(self):
        a, b = sample_singlet_pairs(0.0, 100, seed=7)
        assert np.array_equal(b, -a)
        assert empirical_correlation(a, b) == -1.0

    def test_theta_pi_forces_equal(self):
        a, b = sample_singlet_pairs(math.pi, 100, seed=7)
        assert np.array_equal(b, a)
        assert empirical_correlation(a, b) == 1.0

    def test_convergence_at_pi_over_three(self):
        a, b = sample_singlet_pairs(math.pi / 3, 10**6, seed=42)
        assert empirical_correlation(a, b) == pytest.approx(-0.5, abs=0.005)

    def test_deterministic(self):
        a1, b1 = sample_singlet_pairs(1.1, 5000, seed=9)
        a2, b2 = sample_singlet_pairs(1.1, 5000, seed=9)
        assert np.array_equal(a1, a2) and np.array_equal(b1, b2)
        a3, _ = sample_singlet_pairs(1.1, 5000, seed=10)
        assert not np.array_equal(a1, a3)

    def test_zero_count_rejected(self):
        with pytest.raises(DomainError):
            sample_singlet_pairs(0.5, 0)

    def test_concentration(self):
        # empirical correlation within 4/sqrt(n) of -cos(theta) in at
        # least 99.99% of trials; checked at a desk-scale trial count
        n, trials, misses = 400, 400, 0
        rng = np.random.default_rng(5)
        for k in range(trials):
            theta = rng.uniform(0, math.pi)
            a, b = sample_singlet_pairs(theta, n, seed=k)
            if abs(empirical_correlation(a, b) + math.cos(theta)) > 4 / math.sqrt(n):
                misses += 1
        assert misses == 0


class TestLhvSampler:
    def test_equal_settings(self):
        a, b = sample_lhv_pairs(0.7, 0.7, 1000, seed=3)
        assert empirical_correlation(a, b) == -1.0

    def test_right_angle_gap(self):
        oracle = lhv_correlation_by_quadrature(0.0, math.pi / 2)
        assert oracle == pytest.approx(0.0, abs=1e-3)
        a, b = sample_lhv_pairs(0.0, math.pi / 2, 10**6, seed=11)
        assert empirical_correlation(a, b) == pytest.approx(0.0, abs=0.005)

    def test_opposite_settings(self):
        oracle = lhv_correlation_by_quadrature(0.0, math.pi)
        assert oracle == pytest.approx(1.0, abs=1e-3)
        a, b = sample_lhv_pairs(0.0, math.pi, 10**6, seed=11)
        assert empirical_correlation(a, b) == pytest.approx(1.0, abs=0.005)

    def test_sawtooth(self):
        for gap in (0.4, 1.0, 2.0, 3.0):
            expected = -1 + 2 * gap / math.pi
            assert lhv_correlation_by_quadrature(0.2, 0.2 + gap) == pytest.approx(
                expected, abs=1e-3
            )
            a, b = sample_lhv_pairs(0.2, 0.2 + gap, 200_000, seed=int(gap * 10))
            assert empirical_correlation(a, b) == pytest.approx(expected, abs=0.01)


class TestJointDistribution4:
    def test_validation(self):
        with pytest.raises(DomainError):
            JointDistribution4(np.full(16, 0.1))
        with pytest.raises(ShapeError):
            JointDistribution4(np.full(8, 0.125))

    def test_point_mass_moments(self):
        d = JointDistribution4.point_mass((1, -1, 1, -1))
        assert d.moment(0, 1) == -1.0
        assert d.moment(2, 3) == -1.0
        assert d.moment(0, 2) == 1.0

    def test_uniform_moments(self):
        d = JointDistribution4.uniform()
        for i in range(4):
            for j in range(i + 1, 4):
                assert d.moment(i, j) == 0.0


class TestOctetSampler:
    def test_point_mass(self):
        octet = sample_octet(JointDistribution4.point_mass((1, 1, 1, 1)), 10, seed=0)
        for seq in (octet.a_oo, octet.b_oo, octet.a_bo, octet.b_ob):
            assert np.all(seq == 1)

    def test_uniform_independence(self):
        octet = sample_octet(JointDistribution4.uniform(), 10**6, seed=1)
        seqs = [octet.a_oo, octet.b_oo, octet.a_bo, octet.b_ob]
        for i in range(4):
            for j in range(i + 1, 4):
                assert empirical_correlation(seqs[i], seqs[j]) == pytest.approx(
                    0.0, abs=0.005
                )

    def test_band_midpoint_targets(self):
        theta = AngleTriple(math.pi / 3, math.pi / 2, 2 * math.pi / 3)
        c1, c2, c3 = (-math.cos(t) for t in (theta.theta1, theta.theta2, theta.theta3))
        f = feasible_band(theta).midpoint
        octet = sample_octet(feasible_distribution(c1, c2, c3, f), 10**6, seed=42)
        assert empirical_correlation(octet.a_oo, octet.b_oo) == pytest.approx(-0.5, abs=0.01)
        assert empirical_correlation(octet.a_bo, octet.b_oo) == pytest.approx(0.0, abs=0.01)
        assert empirical_correlation(octet.a_oo, octet.b_ob) == pytest.approx(0.5, abs=0.01)
        assert empirical_correlation(octet.a_bo, octet.b_ob) == pytest.approx(f, abs=0.01)

    def test_identified_sequences_are_aliases(self):
        octet = sample_octet(JointDistribution4.uniform(), 100, seed=2)
        assert octet.b_bo is octet.b_oo
        assert octet.a_ob is octet.a_oo

    def test_length_mismatch_rejected(self):
        with pytest.raises(ShapeError):
            OctetSequences(np.ones(3), np.ones(3), np.ones(3), np.ones(4))

    def test_sampled_octets_satisfy_boole(self):
        rng = np.random.default_rng(8)
        for seed in range(20):
            p = rng.dirichlet(np.ones(16))
            octet = sample_octet(JointDistribution4(p), 500, seed=seed)
            result = boole_check(octet.a_oo, octet.b_oo, octet.a_bo, octet.b_ob)
            assert result.holds

    def test_deterministic(self):
        d = JointDistribution4.uniform()
        first = sample_octet(d, 70_000, seed=123)
        second = sample_octet(d, 70_000, seed=123)
        assert np.array_equal(first.a_oo, second.a_oo)
        assert np.array_equal(first.b_ob, second.b_ob)
