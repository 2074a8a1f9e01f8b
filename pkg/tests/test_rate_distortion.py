import math

import numpy as np
import pytest

from phasebound.errors import ValidationError
from phasebound.priors import PhasePrior
from phasebound.rate_distortion import (BA_MAX_ITER, blahut_arimoto_point,
                                        discrete_entropy_power,
                                        discretize_prior, rd_curve,
                                        shannon_lb_distortion, shannon_lb_rate)

TWO_PI = 2.0 * math.pi

# ln 2 - h_b(0.1), the binary Hamming rate at D = 0.1
BINARY_RATE_AT_D01 = 0.3680642071684971
# 0.5 * ln((2 pi / e) / 0.1)
SLB_RATE_Q_UNIFORM_D01 = 1.5702310797016956
# (2 pi / e) e^{-2}
SLB_DIST_Q_UNIFORM_R1 = 0.3128213764565083


def test_shannon_lb_rate_values():
    q = TWO_PI / math.e
    assert shannon_lb_rate(q, q) == 0.0
    assert shannon_lb_rate(0.7, 2.0) == 0.0  # vacuous region clamps
    assert abs(shannon_lb_rate(q, q / math.e**2) - 1.0) < 1e-12
    assert abs(shannon_lb_rate(q, 0.1) - SLB_RATE_Q_UNIFORM_D01) < 1e-12


def test_shannon_lb_distortion_values():
    q = TWO_PI / math.e
    assert shannon_lb_distortion(q, 0.0) == q
    assert abs(shannon_lb_distortion(q, 1.0) - SLB_DIST_Q_UNIFORM_R1) < 1e-12


def test_shannon_lb_pair_inverts():
    # D(R(D)) = D wherever the rate bound is active, i.e. D in (0, Q]
    q = 1.7
    for d in [1e-4, 0.03, 0.5, q]:
        r = shannon_lb_rate(q, d)
        assert abs(shannon_lb_distortion(q, r) - d) < 1e-12 * max(1.0, 1.0 / d)


def test_shannon_lb_validation():
    with pytest.raises(ValidationError):
        shannon_lb_rate(0.0, 0.1)
    with pytest.raises(ValidationError):
        shannon_lb_rate(1.0, 0.0)
    with pytest.raises(ValidationError):
        shannon_lb_distortion(-1.0, 0.5)
    with pytest.raises(ValidationError):
        shannon_lb_distortion(1.0, -0.5)


def test_ba_binary_hamming_point():
    # equiprobable bits, 0/1 distortion; optimal slope for D = 0.1 is ln 9
    p = [0.5, 0.5]
    d = [[0.0, 1.0], [1.0, 0.0]]
    point = blahut_arimoto_point(p, d, math.log(9.0))
    assert point.converged
    assert abs(point.distortion - 0.1) < 1e-9
    assert abs(point.rate - BINARY_RATE_AT_D01) < 1e-6
    expected = math.log(2.0) + 0.1 * math.log(0.1) + 0.9 * math.log(0.9)
    assert abs(BINARY_RATE_AT_D01 - expected) < 1e-12
    # the symmetric marginal is a fixed point
    assert np.abs(point.output_marginal - 0.5).max() < 1e-12


def test_ba_zero_slope_and_single_atom():
    d = np.array([[0.0, 2.0, 5.0], [3.0, 1.0, 4.0]])
    point = blahut_arimoto_point([0.25, 0.75], d, 0.0)
    assert point.rate == 0.0 and point.converged and point.iterations == 0
    assert abs(point.distortion - (0.25 * d[0] + 0.75 * d[1]).min()) < 1e-15

    atom = blahut_arimoto_point([0.0, 1.0], d, 3.0)
    assert atom.rate == 0.0 and atom.converged
    assert atom.distortion == 1.0


def test_ba_lossless_limit():
    # huge slope drives D to 0 and R to the source entropy ln K
    k = 16
    p = np.full(k, 1.0 / k)
    x = np.arange(k) * (TWO_PI / k)
    d = (x[:, None] - x[None, :]) ** 2
    point = blahut_arimoto_point(p, d, 1e5)
    assert point.distortion < 1e-8
    assert abs(point.rate - math.log(k)) < 1e-3


def test_ba_validation():
    d = [[0.0, 1.0], [1.0, 0.0]]
    with pytest.raises(ValidationError):
        blahut_arimoto_point([0.5, 0.6], d, 1.0)
    with pytest.raises(ValidationError):
        blahut_arimoto_point([0.5, 0.5], [[0.0, -1.0], [1.0, 0.0]], 1.0)
    with pytest.raises(ValidationError):
        blahut_arimoto_point([0.5, 0.5], d, -0.1)
    with pytest.raises(ValidationError):
        blahut_arimoto_point([0.5, 0.5], [0.0, 1.0], 1.0)
    with pytest.raises(ValidationError):
        blahut_arimoto_point([0.5, 0.5], d, 1.0, init_marginal=[1.0, 2.0, 3.0])


def test_ba_warm_start_is_stationary():
    p = [0.5, 0.3, 0.2]
    x = np.array([0.0, 1.0, 2.5])
    d = (x[:, None] - x[None, :]) ** 2
    cold = blahut_arimoto_point(p, d, 0.8)
    warm = blahut_arimoto_point(p, d, 0.8, init_marginal=cold.output_marginal)
    assert warm.iterations <= 2
    assert abs(warm.distortion - cold.distortion) < 1e-8
    assert abs(warm.rate - cold.rate) < 1e-8


def test_ba_lagrangian_descends():
    # the alternating minimization descends R + s D; the rate alone
    # genuinely rises at some low slopes, so that is not checked
    prior = PhasePrior.uniform()
    phi, masses = discretize_prior(prior, 256)
    d = (np.abs(np.arange(256)[:, None] - np.arange(256)[None, :])
         * (TWO_PI / 256)) ** 2
    for slope in [0.25, 0.5, 1.0]:
        point = blahut_arimoto_point(masses, d, slope)
        lag = point.lagrangian_history()
        assert lag.size == point.iterations
        assert np.diff(lag).max(initial=-1.0) < 1e-12


def test_zero_rate_distortion_uniform_grid():
    # best single reproduction point for the discretized full-circle prior:
    # grid variance plus the half-cell offset of the mean, exactly
    # pi^2/3 + 2 pi^2 / (3 K^2) for even K
    for k in [16, 512]:
        curve = rd_curve(PhasePrior.uniform(), k, slopes=[0.0])
        expected = math.pi**2 / 3.0 + 2.0 * math.pi**2 / (3.0 * k**2)
        assert abs(curve.distortions()[0] - expected) < 1e-12 * expected
        assert curve.rates()[0] == 0.0


def test_discretize_prior():
    phi, masses = discretize_prior(PhasePrior.uniform(), 64)
    assert abs(masses.sum() - 1.0) < 1e-14
    assert np.abs(masses - 1.0 / 64).max() < 1e-15

    window = PhasePrior.uniform(center=math.pi, width=1.0)
    phi, masses = discretize_prior(window, 128)
    assert abs(masses.sum() - 1.0) < 1e-14
    assert masses[np.abs(phi - math.pi) > 0.6].max() == 0.0

    with pytest.raises(ValidationError):
        discretize_prior(PhasePrior.uniform(), 8)


def test_discrete_entropy_power():
    phi, masses = discretize_prior(PhasePrior.uniform(), 512)
    assert abs(discrete_entropy_power(masses, TWO_PI / 512)
               - TWO_PI / math.e) < 1e-12
    # smooth periodic density: the grid sum is spectrally accurate
    wg = PhasePrior.wrapped_gaussian(math.pi, 0.8)
    phi, masses = discretize_prior(wg, 2048)
    assert abs(discrete_entropy_power(masses, TWO_PI / 2048)
               - wg.entropy_power()) < 1e-9


def test_curve_ordering_and_invariants():
    curve = rd_curve(PhasePrior.uniform(), 128, slopes=[0.5, 0.0, 2.0, 1.0])
    assert len(curve) == 4
    dd = curve.distortions()
    assert np.all(np.diff(dd) > 0.0)
    assert list(curve.slope_values) == sorted(curve.slope_values, reverse=True)
    curve.check_invariants()
    assert curve.source_descriptor["grid_size"] == 128


def test_curve_stays_above_shannon_bound():
    # BA reports I(true) + KL(q_tilde || q) >= R(D), so points sit on or
    # above the curve even before convergence; the discretized source can
    # undercut the continuous bound by O(1/K) at fixed D, hence the
    # grid-scaled slack. Slopes are kept to the fast-converging ones; the
    # slow regimes get exercised by the acceptance sweep.
    prior = PhasePrior.uniform()
    for k, slopes in [(128, [0.0, 0.25, 0.5]), (256, [0.0, 0.25]),
                      (512, [0.0, 0.5])]:
        curve = rd_curve(prior, k, slopes)
        q = discrete_entropy_power(discretize_prior(prior, k)[1], TWO_PI / k)
        slack = 0.05 * 512.0 / k
        for dist, rate in curve.points:
            assert rate >= shannon_lb_rate(q, dist) - slack
        curve.check_invariants()
