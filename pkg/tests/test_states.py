import numpy as np
import pytest

from esdsim.errors import NotHermitian, NotPositive, OutOfRange, TraceDefect
from esdsim.linalg import I4, SX, SY, SZ, kron, partial_trace
from esdsim.states import (
    BELL_VECTORS,
    CorrelationTriple,
    MAXIMAL_TRIPLE,
    PHI_PLUS,
    PSI_MINUS,
    bell_projector,
    bell_weights,
    state_from_bloch,
    state_from_correlations,
    validate_state,
    werner,
)


def random_valid_triple(rng):
    # rejection-sample triples whose Bell weights are all nonnegative
    while True:
        c = CorrelationTriple(*rng.uniform(-1, 1, size=3))
        if min(bell_weights(c)) >= 0.0:
            return c


def test_bloch_zero_gives_maximally_mixed():
    rho = state_from_bloch(np.zeros(3), np.zeros(3), np.zeros((3, 3)))
    assert np.allclose(rho.mat, I4 / 4, atol=1e-14)


def test_bloch_pure_product_pole():
    rho = state_from_bloch((0, 0, 1), (0, 0, 1), np.diag([0.0, 0.0, 1.0]))
    expect = np.zeros((4, 4), dtype=complex)
    expect[0, 0] = 1.0  # |00><00| with |0> the sigma_z = +1 eigenstate
    assert np.allclose(rho.mat, expect, atol=1e-14)


def test_bloch_bell_correlations():
    rho = state_from_bloch(np.zeros(3), np.zeros(3), np.diag([1.0, -1.0, 1.0]))
    assert np.allclose(rho.mat, bell_projector(PHI_PLUS), atol=1e-14)


def test_bloch_rejects_unphysical():
    with pytest.raises(NotPositive):
        state_from_bloch(np.zeros(3), np.zeros(3), np.diag([1.0, 1.0, 1.0]))
    with pytest.raises(OutOfRange):
        state_from_bloch((0, 0, 1.5), np.zeros(3), np.zeros((3, 3)))


def test_bell_weights_examples():
    assert np.allclose(bell_weights(CorrelationTriple(0, 0, 0)), [0.25] * 4)
    w = bell_weights(CorrelationTriple(-1, -1, -1))
    assert np.allclose(w, [0, 0, 1, 0], atol=1e-15)  # singlet
    w = bell_weights(MAXIMAL_TRIPLE)
    assert np.allclose(w, [1, 0, 0, 0], atol=1e-15)


def test_bell_weights_sum_to_one_exactly():
    rng = np.random.default_rng(2)
    for _ in range(100):
        c = CorrelationTriple(*rng.uniform(-1, 1, size=3))
        assert sum(bell_weights(c)) == pytest.approx(1.0, abs=1e-15)


def test_state_from_correlations_examples():
    assert np.allclose(state_from_correlations(CorrelationTriple(0, 0, 0)).mat, I4 / 4)
    singlet = state_from_correlations(CorrelationTriple(-1, -1, -1))
    assert np.allclose(singlet.mat, bell_projector(PSI_MINUS), atol=1e-14)
    with pytest.raises(NotPositive) as err:
        state_from_correlations(CorrelationTriple(1, 1, 1))
    assert "psi_minus" in str(err.value)


def test_correlation_state_matches_bell_mixture():
    rng = np.random.default_rng(4)
    for _ in range(100):
        c = random_valid_triple(rng)
        rho = state_from_correlations(c)
        w = bell_weights(c)
        mix = sum(p * bell_projector(v) for p, v in zip(w, BELL_VECTORS))
        assert np.allclose(rho.mat, mix, atol=1e-12)
        # min eigenvalue equals min weight, Bell diagonal equals the weights
        vals = np.linalg.eigvalsh(rho.mat)
        assert abs(vals[0] - min(w)) <= 1e-12
        diag = [float(np.real(v.conj() @ rho.mat @ v)) for v in BELL_VECTORS]
        assert np.allclose(diag, w, atol=1e-12)


def test_correlation_state_reduced_states_are_maximally_mixed():
    rng = np.random.default_rng(6)
    for _ in range(25):
        c = random_valid_triple(rng)
        rho = state_from_correlations(c)
        for keep in ("A", "B"):
            assert np.allclose(partial_trace(rho.mat, keep), np.eye(2) / 2, atol=1e-12)


def test_werner_endpoints():
    assert np.allclose(werner(1.0).mat, bell_projector(PSI_MINUS), atol=1e-14)
    assert np.allclose(werner(0.0).mat, I4 / 4, atol=1e-14)
    edge = werner(-1.0 / 3.0)
    w = [float(np.real(v.conj() @ edge.mat @ v)) for v in BELL_VECTORS]
    # order: phi+, phi-, psi-, psi+
    assert np.allclose(w, [1 / 3, 1 / 3, 0.0, 1 / 3], atol=1e-12)
    with pytest.raises(OutOfRange):
        werner(1.1)
    with pytest.raises(OutOfRange):
        werner(-0.4)


def test_validate_state_accepts_and_clamps():
    ok = validate_state(I4 / 4)
    assert np.allclose(ok.mat, I4 / 4)
    assert ok.trace_defect == 0.0

    # perturb one eigenvalue of a Bell projector into the clamp band
    proj = bell_projector(PHI_PLUS)
    vals, vecs = np.linalg.eigh(proj)
    vals[0] -= 1e-10
    vals[-1] += 1e-10  # keep the trace at 1
    perturbed = (vecs * vals) @ vecs.conj().T
    fixed = validate_state(perturbed)
    assert np.linalg.eigvalsh(fixed.mat)[0] >= -1e-15
    assert abs(np.trace(fixed.mat) - 1) <= 1e-14


def test_validate_state_rejections():
    with pytest.raises(NotHermitian):
        validate_state(np.triu(np.ones((4, 4))) / 2.5)
    with pytest.raises(TraceDefect):
        validate_state(I4 / 3)
    bad = (I4 + kron(SX, SX) + kron(SY, SY) + kron(SZ, SZ)) / 4
    with pytest.raises(NotPositive) as err:
        validate_state(bad)
    assert err.value.defect == pytest.approx(-0.5, abs=1e-12)


def test_density_matrix_is_read_only():
    rho = state_from_correlations(MAXIMAL_TRIPLE)
    with pytest.raises(ValueError):
        rho.mat[0, 0] = 2.0
