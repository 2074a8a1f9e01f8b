import math

import numpy as np
import pytest

from phasebound.capacity import (binomial_loss_matrix, capacity_upper_bound_lossy,
                                 shannon_entropy, unrestricted_capacity)
from phasebound.errors import NumericalError, ValidationError
from phasebound.fock import (ChiDecomposition, DensityMatrix, ProbeSpec,
                             average_state, chi_decompose, holevo_quantity,
                             modulated_state, phase_randomize,
                             von_neumann_entropy)
from phasebound.priors import PhasePrior

# chi at eta = 0.5 under the uniform prior
CHI_02_UNIFORM = 0.3127515147113673
CHI_02_WG = 0.2946671904491114        # wrapped gaussian mu=pi sigma=0.8
CHI_FLAT4 = 1.012795733073747
CHI_COHERENT1 = 0.9276374674957972
CHI_01 = 0.4773856262211096
# lossless uniform-prior chi of coherent alpha=1 is the Poisson(1) entropy
H_POISSON_1 = 1.3048422422562516
# joint photon/loss entropies for (|0>+|2>)/sqrt2 at eta = 0.5
H_JOINT_02 = 1.2130075659799042
H_LOSS_02 = 0.9002560512685369

PROBE_02 = [2.0**-0.5, 0.0, 2.0**-0.5]
PROBE_01 = [2.0**-0.5, 2.0**-0.5]


def random_probe(rng, cutoff):
    c = rng.standard_normal(cutoff + 1) + 1j * rng.standard_normal(cutoff + 1)
    return ProbeSpec(c / np.linalg.norm(c))


def flat_branch_vectors(decomp):
    """Branch vectors embedded in the union (n, m) basis, one per column."""
    basis = {}
    for ns, l in zip(decomp.branch_ns, decomp.loss_counts):
        for n in ns:
            basis.setdefault((int(n), int(n - l)), len(basis))
    vecs = np.zeros((len(basis), len(decomp)))
    for col, (ns, amps, l) in enumerate(zip(decomp.branch_ns,
                                            decomp.branch_amps,
                                            decomp.loss_counts)):
        for n, a in zip(ns, amps):
            vecs[basis[(int(n), int(n - l))], col] = a
    return vecs


def test_probe_families():
    coh = ProbeSpec.coherent(1.0)
    assert abs(coh.mean_photons - 1.0) < 1e-10
    assert abs(coh.probabilities[0] - math.exp(-1.0)) < 1e-12
    assert 8 <= coh.cutoff <= 32

    num = ProbeSpec.number(3)
    assert num.mean_photons == 3.0 and num.photon_variance == 0.0
    assert num.probabilities[-1] == 1.0

    flat = ProbeSpec.flat_superposition(4)
    assert np.abs(flat.probabilities - 0.25).max() < 1e-15
    assert abs(flat.mean_photons - 1.5) < 1e-14
    assert abs(flat.photon_variance - 1.25) < 1e-14

    binom = ProbeSpec.binomial_phase(4)
    assert np.abs(binom.probabilities - np.array([1, 3, 3, 1]) / 8.0).max() < 1e-15
    assert abs(binom.mean_photons - 1.5) < 1e-14
    assert abs(binom.photon_variance - 0.75) < 1e-14

    same = ProbeSpec.from_amplitudes(PROBE_02)
    assert same.cutoff == 2 and abs(same.mean_photons - 1.0) < 1e-14


def test_probe_validation():
    with pytest.raises(ValidationError):
        ProbeSpec([0.8, 0.8])             # norm off
    with pytest.raises(ValidationError):
        ProbeSpec([])
    with pytest.raises(ValidationError):
        ProbeSpec.number(-1)
    with pytest.raises(ValidationError):
        ProbeSpec.flat_superposition(0)
    with pytest.raises(ValidationError):
        ProbeSpec.binomial_phase(2.5)
    with pytest.raises(ValidationError):
        ProbeSpec.coherent(12.0)          # needs cutoff past the cap
    amps = np.zeros(140)
    amps[0] = 1.0
    with pytest.raises(ValidationError):
        ProbeSpec(amps)


def test_chi_decompose_weights():
    single = chi_decompose(ProbeSpec.number(1), 0.7)
    assert single.loss_counts == [0, 1]
    assert np.abs(single.weights - [0.7, 0.3]).max() < 1e-15

    d02 = chi_decompose(ProbeSpec(PROBE_02), 0.5)
    assert d02.loss_counts == [0, 1, 2]
    assert np.abs(d02.weights - [0.625, 0.25, 0.125]).max() < 1e-15
    assert abs(d02.weights.sum() - 1.0) < 1e-14

    lossless = chi_decompose(ProbeSpec(PROBE_02), 1.0)
    assert lossless.loss_counts == [0]
    assert abs(lossless.weights[0] - 1.0) < 1e-14

    opaque = chi_decompose(ProbeSpec(PROBE_02), 0.0)
    assert opaque.loss_counts == [0, 2]   # the n=1 branch carries no mass
    assert np.abs(opaque.weights - [0.5, 0.5]).max() < 1e-15

    with pytest.raises(ValidationError):
        chi_decompose(ProbeSpec(PROBE_02), 1.2)


def test_chi_branches_orthonormal():
    rng = np.random.default_rng(7)
    cases = [chi_decompose(ProbeSpec(PROBE_02), 0.5)]
    cases += [chi_decompose(random_probe(rng, 12), eta)
              for eta in [0.3, 0.5, 0.8] for _ in range(3)]
    for decomp in cases:
        vecs = flat_branch_vectors(decomp)
        gram = vecs.T @ vecs
        assert np.abs(gram - np.eye(len(decomp))).max() < 1e-12


def test_modulated_state_matches_hand_assembly():
    decomp = chi_decompose(ProbeSpec(PROBE_02), 0.5)
    phi = 0.7
    vecs = flat_branch_vectors(decomp).astype(complex)
    state = modulated_state(decomp, phi)
    ns = np.array([n for n, _ in state.basis])
    phase = np.exp(1j * ns * phi)
    expected = np.zeros((len(state.basis),) * 2, dtype=complex)
    for col, w in enumerate(decomp.weights):
        v = phase * vecs[:, col]
        expected += w * np.outer(v, v.conj())
    assert np.abs(state.matrix - expected).max() < 1e-14
    assert abs(np.trace(state.matrix).real - 1.0) < 1e-12


def test_number_probe_is_phase_invariant():
    decomp = chi_decompose(ProbeSpec.number(3), 0.6)
    a = modulated_state(decomp, 0.0)
    b = modulated_state(decomp, 2.1)
    assert np.abs(a.matrix - b.matrix).max() < 1e-15


def test_reduced_signal_of_companion_state_is_diagonal():
    # distinct companions kill every coherence, leaving the post-loss
    # photon-number distribution on the diagonal
    decomp = chi_decompose(ProbeSpec(PROBE_02), 0.3)
    rho = modulated_state(decomp, 1.3)
    red = rho.reduced_signal()
    expect = np.diag([0.5 + 0.5 * 0.49, 0.5 * 2 * 0.3 * 0.7, 0.5 * 0.09])
    assert np.abs(red - expect).max() < 1e-14


def test_density_matrix_validation():
    with pytest.raises(ValidationError):
        DensityMatrix(np.array([[0.5, 0.5], [0.0, 0.5]]), [(0, 0), (1, 1)])
    with pytest.raises(ValidationError):
        DensityMatrix(np.eye(2), [(0, 0), (1, 1)])      # trace 2
    with pytest.raises(ValidationError):
        DensityMatrix(np.eye(2) / 2.0, [(0, 0)])        # basis mismatch


def test_average_state_uniform_dephases():
    decomp = chi_decompose(ProbeSpec(PROBE_02), 0.5)
    avg = average_state(decomp, PhasePrior.uniform())
    randomized = phase_randomize(modulated_state(decomp, 0.0))
    assert np.abs(avg.matrix - randomized.matrix).max() < 1e-14
    # diagonal holds the joint (photon, loss) masses
    joint = {(2, 2 - l): 0.5 * w for l, w in zip([0, 1, 2], [0.25, 0.5, 0.25])}
    joint[(0, 0)] = 0.5
    for i, b in enumerate(avg.basis):
        assert abs(avg.matrix[i, i].real - joint[b]) < 1e-14


def test_average_state_window_coherence():
    # width-pi window keeps |F_1| = 2/pi of each one-step coherence
    decomp = chi_decompose(ProbeSpec(PROBE_01), 1.0)
    avg = average_state(decomp, PhasePrior.uniform(width=math.pi))
    off = abs(avg.matrix[0, 1])
    assert abs(off - 1.0 / math.pi) < 1e-15


def test_average_state_quadrature_cross_check():
    prior = PhasePrior.wrapped_gaussian(math.pi, 0.8)
    decomp = chi_decompose(ProbeSpec(PROBE_02), 0.5)
    a = average_state(decomp, prior, method="fourier")
    b = average_state(decomp, prior, grid_size=512, method="quadrature")
    assert np.abs(a.matrix - b.matrix).max() < 1e-12

    with pytest.raises(ValidationError):
        average_state(decomp, prior, grid_size=32)
    with pytest.raises(ValidationError):
        average_state(decomp, prior, method="spline")


def test_phase_randomize_uses_generator_labels():
    # estimation-style basis: companion is the loss count, the generator is
    # companion + m; same-generator coherences must survive
    v = np.array([0.6, 0.48, 0.64])
    rho = DensityMatrix(np.outer(v, v), [(0, 0), (0, 1), (1, 0)],
                        generator=[0, 1, 1])
    out = phase_randomize(rho)
    assert out.matrix[0, 1] == 0.0 and out.matrix[0, 2] == 0.0
    assert abs(out.matrix[1, 2] - v[1] * v[2]) < 1e-15


def test_von_neumann_entropy_basics():
    pure = DensityMatrix(np.full((2, 2), 0.5), [(0, 0), (0, 1)])
    assert abs(von_neumann_entropy(pure)) < 1e-12
    mixed = DensityMatrix(np.eye(4) / 4.0, [(i, i) for i in range(4)])
    assert abs(von_neumann_entropy(mixed) - math.log(4.0)) < 1e-14

    bad = DensityMatrix(np.diag([1.5, -0.5]), [(0, 0), (0, 1)])
    with pytest.raises(NumericalError):
        von_neumann_entropy(bad)


def test_randomizing_never_lowers_entropy():
    rng = np.random.default_rng(3)
    prior = PhasePrior.wrapped_gaussian(2.0, 0.5)
    for eta in [0.4, 0.8]:
        for _ in range(4):
            decomp = chi_decompose(random_probe(rng, 10), eta)
            avg = average_state(decomp, prior)
            assert (von_neumann_entropy(phase_randomize(avg))
                    >= von_neumann_entropy(avg) - 1e-10)


def test_holevo_frozen_values():
    uniform = PhasePrior.uniform()
    d02 = chi_decompose(ProbeSpec(PROBE_02), 0.5)
    assert abs(holevo_quantity(d02, uniform) - CHI_02_UNIFORM) < 1e-9
    wg = PhasePrior.wrapped_gaussian(math.pi, 0.8)
    assert abs(holevo_quantity(d02, wg) - CHI_02_WG) < 1e-9

    cases = [(ProbeSpec.flat_superposition(4), CHI_FLAT4),
             (ProbeSpec.coherent(1.0), CHI_COHERENT1),
             (ProbeSpec(PROBE_01), CHI_01)]
    for probe, expected in cases:
        chi = holevo_quantity(chi_decompose(probe, 0.5), uniform)
        assert abs(chi - expected) < 1e-9


def test_holevo_lossless_uniform_is_number_entropy():
    uniform = PhasePrior.uniform()
    flat4 = chi_decompose(ProbeSpec.flat_superposition(4), 1.0)
    assert abs(holevo_quantity(flat4, uniform) - math.log(4.0)) < 1e-12
    coh = chi_decompose(ProbeSpec.coherent(1.0), 1.0)
    assert abs(holevo_quantity(coh, uniform) - H_POISSON_1) < 1e-9


def test_holevo_point_mass_prior_vanishes():
    spike = PhasePrior.uniform(center=1.0, width=1e-8)
    chi = holevo_quantity(chi_decompose(ProbeSpec(PROBE_02), 0.5), spike)
    assert abs(chi) < 1e-9


def test_dephased_entropy_is_joint_photon_loss_entropy():
    uniform = PhasePrior.uniform()
    decomp = chi_decompose(ProbeSpec(PROBE_02), 0.5)
    avg = average_state(decomp, uniform)
    s_deph = von_neumann_entropy(phase_randomize(avg))
    assert abs(s_deph - H_JOINT_02) < 1e-10
    assert abs(shannon_entropy(decomp.weights) - H_LOSS_02) < 1e-12

    # same identity for a generic probe against direct summation
    rng = np.random.default_rng(19)
    probe = random_probe(rng, 12)
    eta = 0.3
    decomp = chi_decompose(probe, eta)
    avg = average_state(decomp, uniform)
    joint = probe.probabilities[:, None] * binomial_loss_matrix(probe.cutoff, eta)
    direct = shannon_entropy(joint[joint > 0.0])
    s_deph = von_neumann_entropy(phase_randomize(avg))
    assert abs(s_deph - direct) < 1e-8
    # dephasing can only raise entropy, so chi obeys the sandwich
    chi = holevo_quantity(decomp, uniform)
    assert chi <= s_deph - shannon_entropy(decomp.weights) + 1e-8


def test_holevo_respects_capacity_bounds():
    uniform = PhasePrior.uniform()
    probes = [ProbeSpec.flat_superposition(4), ProbeSpec.coherent(1.0),
              ProbeSpec.binomial_phase(5)]
    for probe in probes:
        chi = holevo_quantity(chi_decompose(probe, 1.0), uniform)
        assert chi <= unrestricted_capacity(probe.mean_photons) + 1e-8
        for eta in [0.3, 0.5, 0.8]:
            chi = holevo_quantity(chi_decompose(probe, eta), uniform)
            cap = capacity_upper_bound_lossy(probe.mean_photons, eta)
            assert chi <= cap + 1e-8
