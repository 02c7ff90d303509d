import math

import numpy as np
import pytest

from esdsim.errors import DimensionMismatch
from esdsim.lindblad import (
    LindbladSpec,
    _run_fixed,
    integrate,
    lindblad_rhs,
    liouvillian,
    single_qubit_steady_state,
)
from esdsim.reservoir import ReservoirParams, squeeze_bound
from esdsim.states import MAXIMAL_TRIPLE, state_from_correlations

from thermal_reference import thermal_pair_channel


def random_hermitian(rng, dim):
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (a + a.conj().T) / 2


def test_rhs_vanishes_at_thermal_fixed_point():
    for n in (0.1, 0.5, 2.0):
        p = ReservoirParams(gamma=1.3, n=n)
        pe = n / (2 * n + 1)
        fixed = np.diag([1 - pe, pe]).astype(complex)
        assert np.linalg.norm(lindblad_rhs(fixed, LindbladSpec(p))) <= 1e-12


def test_rhs_structure_traceless_hermiticity_preserving():
    rng = np.random.default_rng(21)
    specs = [
        LindbladSpec(ReservoirParams(n=0.4, m_abs=0.3, theta=0.7)),
        LindbladSpec(ReservoirParams(n=0.2), ReservoirParams(n=1.0, m_abs=0.9, theta=-0.3)),
    ]
    for spec in specs:
        d = spec.dim
        for _ in range(20):
            rho = random_hermitian(rng, d)
            out = lindblad_rhs(rho, spec)
            assert abs(np.trace(out)) <= 1e-14 * max(np.linalg.norm(rho), 1.0)
            assert np.linalg.norm(out - out.conj().T) <= 1e-14 * max(np.linalg.norm(rho), 1.0)


def test_rhs_vacuum_flow_toward_ground():
    p = ReservoirParams(gamma=1.0, n=0.0)
    out = lindblad_rhs(np.eye(2, dtype=complex) / 2, LindbladSpec(p))
    # population flows |1> -> |0> at rate gamma/2 from the mixed state
    assert out[0, 0].real == pytest.approx(0.5, abs=1e-14)
    assert out[1, 1].real == pytest.approx(-0.5, abs=1e-14)
    assert abs(np.trace(out)) <= 1e-15


def test_rhs_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        lindblad_rhs(np.eye(4, dtype=complex) / 4, LindbladSpec(ReservoirParams()))


def test_integrate_t0_is_identity():
    p = ReservoirParams(n=0.2)
    rho0 = state_from_correlations(MAXIMAL_TRIPLE).mat
    res = integrate(rho0, LindbladSpec(p, p), 0.0)
    assert np.allclose(res.state, rho0)
    assert res.step_count == 0
    assert res.error_estimate == 0.0


def test_integrate_amplitude_damping_analytic():
    p = ReservoirParams(gamma=1.0, n=0.0)
    excited = np.diag([0.0, 1.0]).astype(complex)
    res = integrate(excited, LindbladSpec(p), 1.0, tol=1e-10)
    assert res.state[1, 1].real == pytest.approx(math.exp(-1.0), abs=1e-6)
    assert res.error_estimate <= 1e-10


def test_integrate_pair_matches_thermal_reference():
    p = ReservoirParams(gamma=1.0, n=0.2)
    rho0 = state_from_correlations(MAXIMAL_TRIPLE).mat
    res = integrate(rho0, LindbladSpec(p, p), 1.0, tol=1e-10)
    ref = thermal_pair_channel(rho0, 1.0, 0.2, 1.0)
    assert np.abs(res.state - ref).max() <= 1e-8


def test_trajectory_trace_and_hermiticity():
    p = ReservoirParams(n=0.3, m_abs=0.5 * squeeze_bound(0.3), theta=0.9)
    spec = LindbladSpec(p, p)
    rho0 = state_from_correlations(MAXIMAL_TRIPLE).mat
    for ts in (0.1, 0.4, 0.9, 1.7, 3.0):
        res = integrate(rho0, spec, ts, tol=1e-9)
        assert abs(np.trace(res.state).real - 1.0) <= 1e-9
        assert np.linalg.norm(res.state - res.state.conj().T) <= 1e-9


def test_rk4_order_factor():
    p = ReservoirParams(n=0.3, m_abs=0.3 * squeeze_bound(0.3), theta=0.4)
    gen = liouvillian(LindbladSpec(p))
    v0 = (np.eye(2, dtype=complex) / 2 + 0.3 * np.array([[0, 1], [1, 0]]) / 2).reshape(4)
    ref = _run_fixed(gen, v0, 1.0, 2**14)
    e_coarse = np.linalg.norm(_run_fixed(gen, v0, 1.0, 64) - ref)
    e_fine = np.linalg.norm(_run_fixed(gen, v0, 1.0, 128) - ref)
    assert 12.0 <= e_coarse / e_fine <= 20.0


def test_steady_state_thermal_detailed_balance():
    ss = single_qubit_steady_state(ReservoirParams(gamma=1.0, n=0.0))
    assert np.allclose(ss, np.diag([1.0, 0.0]), atol=1e-6)
    ss = single_qubit_steady_state(ReservoirParams(gamma=1.0, n=0.5))
    assert ss[1, 1].real == pytest.approx(0.25, abs=1e-6)
    assert abs(ss[0, 1]) <= 1e-9


def test_steady_state_squeezed_stays_diagonal():
    # The two-photon terms couple coherences only to coherences and both
    # coherence modes decay at zeta -+ eta > 0, so from I/2 the state stays
    # diagonal and the populations match the thermal fixed point even at
    # the squeezing bound.
    p = ReservoirParams(gamma=1.0, n=0.5, m_abs=squeeze_bound(0.5), theta=0.0)
    ss = single_qubit_steady_state(p)
    assert abs(ss[0, 1]) <= 1e-9
    assert ss[1, 1].real == pytest.approx(0.25, abs=1e-6)
    # and the fixed point is genuinely stationary
    assert np.linalg.norm(lindblad_rhs(ss, LindbladSpec(p))) <= 1e-6


def test_steady_state_fixed_point_residual():
    p = ReservoirParams(gamma=1.0, n=0.8, m_abs=0.4 * squeeze_bound(0.8), theta=1.1)
    ss = single_qubit_steady_state(p)
    assert np.linalg.norm(lindblad_rhs(ss, LindbladSpec(p))) <= 1e-6
