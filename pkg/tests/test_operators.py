import math

import numpy as np
import pytest

from heckebaxter import (
    DegenerateEvaluationPointError,
    ExcessSingularSamplesError,
    RadialProfile,
    RandomStream,
    Signature,
    SpectralParams,
    all_signatures,
    cartan_eigenvalue_estimate,
    convolve_vector,
    eigenvalue_check,
    epsilon_spherical,
    haar_normalization,
    l_factor,
    q_hat,
    q_s,
    ramified_convolution_check,
    spherical_function,
)
from heckebaxter.operators import polar_normalization

from conftest import random_orthogonal


def sig(*bits):
    return Signature.of(bits)


def make_params(s, c, gamma, epsilon):
    return SpectralParams(s=s, c=c, gamma=gamma, epsilon=Signature.of(epsilon))


class TestKernels:
    def test_rank_one_value(self):
        assert q_s(np.array([[1.0]]), 2.0, 1.0) == pytest.approx(math.exp(-1.0))

    def test_rank_two_prefactor_cancels_at_c_pi(self):
        got = q_s(np.eye(2), 0.0, math.pi)
        assert got == pytest.approx(math.exp(-2.0 * math.pi), rel=1e-13)

    def test_bi_invariance(self, rng):
        g = rng.standard_normal((3, 3))
        value = q_s(g, 1.3 + 0.4j, 0.8)
        for _ in range(20):
            k1 = random_orthogonal(rng, 3)
            k2 = random_orthogonal(rng, 3)
            moved = q_s(k1 @ g @ k2, 1.3 + 0.4j, 0.8)
            assert abs(moved - value) <= 1e-12 * abs(value)

    def test_q_hat_identity(self):
        got = q_hat(np.eye(2), 0.0, math.pi)
        assert got == pytest.approx(6.0 * math.exp(-2.0 * math.pi), rel=1e-13)

    def test_q_hat_rank_one_closed_form(self, rng):
        x = 0.83
        s, c = 1.7, 0.9
        expected = (1.0 + x) * abs(x) ** s * math.exp(-c * x * x)
        assert q_hat(np.array([[x]]), s, c) == pytest.approx(expected, rel=1e-13)

    def test_q_hat_sign_conjugation_invariance(self, rng):
        g = rng.standard_normal((3, 3))
        value = q_hat(g, 2.1, 1.0)
        for eps in all_signatures(3):
            m = np.diag([(-1.0) ** b for b in eps])
            assert abs(q_hat(m @ g @ m, 2.1, 1.0) - value) <= 1e-12 * abs(value)


class TestNormalizations:
    def test_haar_constant(self):
        assert haar_normalization(1) == pytest.approx(1.0, rel=1e-14)
        assert haar_normalization(2) == pytest.approx(1.0 / math.pi, rel=1e-14)
        expected3 = math.gamma(0.5) * math.gamma(1.0) * math.gamma(1.5) / math.pi**3
        assert haar_normalization(3) == pytest.approx(expected3, rel=1e-13)

    def test_polar_constant(self):
        assert polar_normalization(1) == pytest.approx(2.0, rel=1e-13)
        assert polar_normalization(2) == pytest.approx(2.0 * math.pi, rel=1e-13)
        assert polar_normalization(3) == pytest.approx(8.0 * math.pi**2 / 3.0, rel=1e-13)


class TestConvolveVector:
    def test_variance_guard(self):
        p = make_params(0.4, 1.0, (0.0,), (0,))
        with pytest.raises(ValueError, match="square-integrability"):
            convolve_vector(p, [[1.0]], 2000, RandomStream(0))

    def test_rank_one_trivial_signature(self):
        p = make_params(2.5, 1.0, (0.3,), (0,))
        g_tilde = np.array([[1.7]])
        est = convolve_vector(p, g_tilde, 200_000, RandomStream(11))
        expected = l_factor(p).value * epsilon_spherical(p, g_tilde)
        assert est.z_score(expected) < 4.0

    def test_rank_one_full_signature(self):
        p = make_params(2.5, 1.0, (0.3,), (1,))
        g_tilde = np.array([[-0.9]])
        est = convolve_vector(p, g_tilde, 200_000, RandomStream(12))
        expected = l_factor(p).value * epsilon_spherical(p, g_tilde)
        assert est.z_score(expected) < 4.0

    def test_real_for_real_data(self):
        p = make_params(2.5, 1.0, (0.0,), (0,))
        est = convolve_vector(p, np.eye(1), 50_000, RandomStream(13))
        assert abs(est.mean.imag) <= 4.0 * est.stderr

    def test_worker_independence(self):
        p = make_params(3.0, 1.0, (0.2, -0.4), (0, 1))
        one = convolve_vector(p, np.eye(2), 100_000, RandomStream(14))
        four = convolve_vector(p, np.eye(2), 100_000, RandomStream(14), workers=4)
        assert one.mean == four.mean and one.stderr == four.stderr

    def test_excess_singular_samples(self):
        # a huge rate makes every draw fall below the determinant floor
        p = make_params(2.5, 1e30, (0.0,), (0,))
        with pytest.raises(ExcessSingularSamplesError):
            convolve_vector(p, [[1.0]], 2000, RandomStream(0))


class TestEigenvalueCheck:
    def test_rank_one_ramified(self):
        p = make_params(2.5, 1.0, (0.3,), (1,))
        report = eigenvalue_check(p, [np.eye(1), [[2.0]]], 200_000, RandomStream(21))
        assert report.all_passed
        assert report.reference.value == pytest.approx(
            l_factor(p).value, rel=1e-14
        )

    def test_rank_two_trivial_data(self):
        p = make_params(2.0, 1.0, (0.0, 0.0), (0, 0))
        report = eigenvalue_check(p, [np.eye(2)], 200_000, RandomStream(22))
        assert report.all_passed
        assert report.reference.value == pytest.approx(1.0, rel=1e-13)

    def test_ratio_point_independent(self):
        # the eigenfunction property: ratios at distinct points agree pairwise
        p = make_params(3.0, 1.0, (0.3, -0.7), (0, 1))
        points = [np.eye(2), np.array([[1.6, 0.0], [0.0, 0.75]]), np.array([[1.1, 0.15], [0.25, 1.1]])]
        report = eigenvalue_check(p, points, 200_000, RandomStream(23))
        for i in range(len(points)):
            for j in range(i + 1, len(points)):
                assert report.ratios[i].agrees_with(report.ratios[j], tol_sigma=4.0)

    def test_signature_sensitivity(self):
        # with gamma_1 != gamma_2 the two mixed signatures have different
        # L-factors, and the estimate picks out its own
        s, gamma = 3.0 + 0.5j, (0.3, -0.7)
        p01 = make_params(s, 1.0, gamma, (0, 1))
        p10 = make_params(s, 1.0, gamma, (1, 0))
        report = eigenvalue_check(p01, [np.eye(2)], 400_000, RandomStream(24))
        assert report.all_passed
        wrong = l_factor(p10).value
        assert report.ratios[0].z_score(wrong) > 3.0

    def test_degenerate_point_rejected(self):
        # a quarter rotation zeroes the leading wedge element
        p = make_params(3.0, 1.0, (0.1, 0.2), (1, 0))
        quarter = np.array([[0.0, -1.0], [1.0, 0.0]])
        with pytest.raises(DegenerateEvaluationPointError):
            eigenvalue_check(p, [quarter], 2000, RandomStream(0))

    def test_spherical_kernel_regression(self):
        # for the trivial signature the bare radial kernel has the same
        # eigenvalue as the dressed one
        p = make_params(2.5, 1.0, (0.4,), (0,))
        bare = convolve_vector(p, np.eye(1), 200_000, RandomStream(25), with_delta_w=False)
        assert bare.z_score(l_factor(p).value) < 4.0

    def test_two_stage_commutativity(self):
        gamma, eps = (0.3, -0.7), (0, 1)
        p1 = make_params(3.0, 1.0, gamma, eps)
        p2 = make_params(3.5, 1.0, gamma, eps)
        r1 = eigenvalue_check(p1, [np.eye(2)], 150_000, RandomStream(26))
        r2 = eigenvalue_check(p2, [np.eye(2)], 150_000, RandomStream(27))
        assert r1.all_passed and r2.all_passed
        forward = l_factor(p1).value * l_factor(p2).value
        backward = l_factor(p2).value * l_factor(p1).value
        assert forward == backward


class TestCartanEstimate:
    def test_rank_one_both_signatures(self):
        for eps, seed in (((0,), 31), ((1,), 32)):
            p = make_params(2.5, 1.0, (0.3,), eps)
            est = cartan_eigenvalue_estimate(p, 200_000, RandomStream(seed))
            assert est.z_score(l_factor(p).value) < 4.0

    def test_rank_two_value(self):
        p = make_params(3.0 + 0.5j, 1.0, (0.3, -0.7), (1, 0))
        est = cartan_eigenvalue_estimate(p, 300_000, RandomStream(33))
        assert est.z_score(l_factor(p).value) < 4.0

    def test_agrees_with_direct_route(self):
        p = make_params(3.0, 1.0, (0.2, -0.4), (1, 1))
        direct = eigenvalue_check(p, [np.eye(2)], 200_000, RandomStream(34))
        polar = cartan_eigenvalue_estimate(p, 200_000, RandomStream(35))
        assert direct.ratios[0].agrees_with(polar, tol_sigma=4.0)

    def test_general_rate_constant(self):
        # c enters the kernel rate, the prefactor and the L-factor powers
        p = make_params(3.0, math.pi, (0.3, -0.7), (0, 1))
        reference = l_factor(p).value
        direct = convolve_vector(p, np.eye(2), 200_000, RandomStream(36))
        polar = cartan_eigenvalue_estimate(p, 200_000, RandomStream(37))
        assert direct.z_score(reference) < 4.0
        assert polar.z_score(reference) < 4.0


class TestSphericalFunction:
    def test_trivial_signature_exact(self):
        p = make_params(0.0, 1.0, (0.0, 0.0), (0, 0))
        est = spherical_function(p, np.eye(2), 5000, RandomStream(0))
        assert est.mean == 1.0 and est.stderr == 0.0

    def test_rank_two_weight_one(self):
        p = make_params(0.0, 1.0, (0.2, -0.5), (1, 0))
        est = spherical_function(p, np.eye(2), 200_000, RandomStream(41))
        assert est.z_score(0.5) < 4.0

    def test_rank_three_weight_two(self):
        p = make_params(0.0, 1.0, (0.2, 0.0, -0.4), (1, 0, 1))
        est = spherical_function(p, np.eye(3), 200_000, RandomStream(42))
        assert est.z_score(1.0 / 3.0) < 4.0


class TestRadialProfile:
    def test_bi_invariance(self, rng):
        profile = RadialProfile(det_power=2.0, rate=0.7)
        g = rng.standard_normal((3, 3))
        base = profile(g)
        k1 = random_orthogonal(rng, 3)
        k2 = random_orthogonal(rng, 3)
        assert profile(k1 @ g @ k2) == pytest.approx(base, rel=1e-12)

    def test_requires_decay(self):
        with pytest.raises(ValueError):
            RadialProfile(det_power=1.0, rate=0.0)


class TestRamifiedConvolution:
    def setup_profiles(self, n):
        return RadialProfile(det_power=float(n), rate=1.0), RadialProfile(
            det_power=float(n), rate=1.3
        )

    def test_vanishing_case(self):
        f, g = self.setup_profiles(2)
        report = ramified_convolution_check(
            f, g, sig(1, 0), sig(1, 0), sig(0, 1), sig(0, 1),
            np.array([[1.1, 0.15], [0.25, 1.1]]), 150_000, RandomStream(51),
        )
        assert report.coefficient == 0.0
        assert report.passed  # |left| <= 4 sigma

    def test_matching_case_ratio_one(self):
        f, g = self.setup_profiles(2)
        report = ramified_convolution_check(
            f, g, sig(1, 0), sig(0, 1), sig(0, 1), sig(1, 0),
            np.array([[1.1, 0.15], [0.25, 1.1]]), 150_000, RandomStream(52),
        )
        assert report.coefficient == pytest.approx(0.5)
        assert report.passed
        assert abs(report.ratio - 1.0) < 0.1

    def test_grade_zero_reduces_to_scalar(self):
        f, g = self.setup_profiles(2)
        zero = sig(0, 0)
        report = ramified_convolution_check(
            f, g, zero, zero, zero, zero,
            np.array([[1.1, 0.15], [0.25, 1.1]]), 100_000, RandomStream(53),
        )
        assert report.coefficient == 1.0 and report.wedge_at_eval == 1.0
        assert report.passed

    def test_weight_mismatch_rejected(self):
        f, g = self.setup_profiles(2)
        with pytest.raises(ValueError):
            ramified_convolution_check(
                f, g, sig(1, 0), sig(1, 1), sig(1, 1), sig(1, 1),
                np.eye(2), 2000, RandomStream(0),
            )
