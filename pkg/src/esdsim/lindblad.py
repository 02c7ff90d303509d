"""Direct master-equation integration: the oracle every channel result is checked against.

One qubit in a squeezed thermal bath evolves under the dissipator

    L(rho) = -(g/2)(1+n) (s+ s- rho - 2 s- rho s+ + rho s+ s-)
             -(g/2) n    (s- s+ rho - 2 s+ rho s- + rho s- s+)
             -(g/2) M    (s+ s+ rho - 2 s+ rho s+ + rho s+ s+)
             -(g/2) M*   (s- s- rho - 2 s- rho s- + rho s- s-)

with M = m_abs exp(i theta), s+ = |1><0|, s- = |0><1| (the conventional
half is absorbed into the operators; the thermal steady state pins the
convention: excited population n / (2n + 1)).  A qubit pair gets one such
dissipator per qubit, embedded via s x I and I x s.

Integration is classical fixed-step RK4.  The generator is linear and
time independent, so one RK4 step is exactly the quartic Taylor polynomial
of the step propagator; it is assembled once and applied as a matrix-vector
product per step.  Accuracy is verified by Richardson comparison: the full
run is repeated with halved steps until the two endpoints agree within the
requested tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .errors import DimensionMismatch, IntegratorFailure
from .linalg import I2, SIGMA_MINUS, SIGMA_PLUS, frobenius, kron
from .reservoir import ReservoirParams

_MAX_STEPS = 2**20  # smallest allowed step is t / 2**20


@dataclass(frozen=True)
class LindbladSpec:
    """One bath (single-qubit mode) or one bath per qubit (pair mode)."""

    params_a: ReservoirParams
    params_b: ReservoirParams | None = None

    @property
    def dim(self) -> int:
        return 2 if self.params_b is None else 4


class IntegrationResult(NamedTuple):
    state: np.ndarray
    step_count: int
    error_estimate: float


def _dissipator(rho: np.ndarray, p: ReservoirParams, sp: np.ndarray, sm: np.ndarray) -> np.ndarray:
    g = p.gamma
    n = p.n
    m = p.m
    pm = sp @ sm
    mp = sm @ sp
    pp = sp @ sp
    mm = sm @ sm
    out = -(g / 2.0) * (1.0 + n) * (pm @ rho - 2.0 * (sm @ rho @ sp) + rho @ pm)
    out += -(g / 2.0) * n * (mp @ rho - 2.0 * (sp @ rho @ sm) + rho @ mp)
    out += -(g / 2.0) * m * (pp @ rho - 2.0 * (sp @ rho @ sp) + rho @ pp)
    out += -(g / 2.0) * np.conj(m) * (mm @ rho - 2.0 * (sm @ rho @ sm) + rho @ mm)
    return out


def lindblad_rhs(rho: np.ndarray, spec: LindbladSpec) -> np.ndarray:
    """Generator applied to a matrix: traceless and Hermiticity preserving."""
    rho = np.asarray(rho, dtype=complex)
    d = spec.dim
    if rho.shape != (d, d):
        raise DimensionMismatch(f"rho shape {rho.shape} does not match spec dimension {d}")
    if d == 2:
        return _dissipator(rho, spec.params_a, SIGMA_PLUS, SIGMA_MINUS)
    out = _dissipator(rho, spec.params_a, kron(SIGMA_PLUS, I2), kron(SIGMA_MINUS, I2))
    out += _dissipator(rho, spec.params_b, kron(I2, SIGMA_PLUS), kron(I2, SIGMA_MINUS))
    return out


def generator_matrix(apply_fn: Callable[[np.ndarray], np.ndarray], dim: int) -> np.ndarray:
    """Matrix of a linear map on dim x dim matrices in the row-major vec basis."""
    size = dim * dim
    mat = np.zeros((size, size), dtype=complex)
    for idx in range(size):
        basis = np.zeros((dim, dim), dtype=complex)
        basis[idx // dim, idx % dim] = 1.0
        mat[:, idx] = apply_fn(basis).reshape(size)
    return mat


def liouvillian(spec: LindbladSpec) -> np.ndarray:
    """Generator of the master equation as a matrix acting on vec(rho)."""
    return generator_matrix(lambda m: lindblad_rhs(m, spec), spec.dim)


def _rk4_step_matrix(gen: np.ndarray, h: float) -> np.ndarray:
    # One classical RK4 step of an autonomous linear system is the quartic
    # Taylor polynomial of the step propagator.
    size = gen.shape[0]
    k = np.eye(size, dtype=complex)
    term = np.eye(size, dtype=complex)
    for order in range(1, 5):
        term = (h / order) * (gen @ term)
        k = k + term
    return k


def _run_fixed(gen: np.ndarray, v0: np.ndarray, t: float, steps: int) -> np.ndarray:
    k = _rk4_step_matrix(gen, t / steps)
    v = v0
    for _ in range(steps):
        v = k @ v
    return v


def _run_fixed_series(
    gen: np.ndarray, v0: np.ndarray, dt: float, intervals: int, substeps: int
) -> np.ndarray:
    """March over ``intervals`` uniform intervals, recording after each one."""
    k = _rk4_step_matrix(gen, dt / substeps)
    out = np.empty((intervals + 1, v0.size), dtype=complex)
    out[0] = v0
    v = v0
    for i in range(intervals):
        for _ in range(substeps):
            v = k @ v
        out[i + 1] = v
    return out


def _initial_steps(gen: np.ndarray, t: float) -> int:
    # keep h * ||gen|| <= ~0.5 so the first rung is already stable
    scale = frobenius(gen)
    steps = 8
    while steps * 0.5 < t * scale and steps < _MAX_STEPS:
        steps *= 2
    return steps


def richardson_rk4(
    gen: np.ndarray, v0: np.ndarray, t: float, tol: float, initial_steps: int | None = None
) -> tuple[np.ndarray, int, float]:
    """Fixed-step RK4 with step halving until two full runs agree within tol.

    Returns the finer run, its step count, and the Richardson error
    estimate (Frobenius distance between the h and h/2 runs).
    """
    if t == 0.0:
        return v0.copy(), 0, 0.0
    steps = initial_steps or _initial_steps(gen, t)
    prev = _run_fixed(gen, v0, t, steps)
    while True:
        steps *= 2
        cur = _run_fixed(gen, v0, t, steps)
        err = float(np.linalg.norm(cur - prev))
        if err <= tol:
            return cur, steps, err
        if steps >= _MAX_STEPS:
            raise IntegratorFailure(
                f"Richardson estimate {err:.3e} > tol {tol:.1e} at the step floor t/2^20"
            )
        prev = cur


def richardson_rk4_series(
    gen: np.ndarray, v0: np.ndarray, times: Sequence[float], tol: float
) -> tuple[np.ndarray, int, float]:
    """Richardson-verified RK4 over a uniform time grid starting at 0.

    The error estimate is the maximum Frobenius distance between the h and
    h/2 runs over all recorded samples, so every sample meets ``tol``.
    """
    times = np.asarray(times, dtype=float)
    if times.size < 2 or times[0] != 0.0:
        raise ValueError("series integration needs a grid starting at 0 with >= 2 samples")
    dts = np.diff(times)
    dt = float(dts[0])
    if not np.allclose(dts, dt, rtol=1e-9, atol=1e-12):
        raise ValueError("series integration needs a uniform time grid")
    intervals = times.size - 1
    horizon = float(times[-1])
    substeps = max(1, _initial_steps(gen, horizon) // intervals)
    prev = _run_fixed_series(gen, v0, dt, intervals, substeps)
    while True:
        substeps *= 2
        cur = _run_fixed_series(gen, v0, dt, intervals, substeps)
        err = float(np.max(np.linalg.norm(cur - prev, axis=1)))
        if err <= tol:
            return cur, substeps * intervals, err
        if substeps * intervals >= _MAX_STEPS:
            raise IntegratorFailure(
                f"series Richardson estimate {err:.3e} > tol {tol:.1e} at the step floor"
            )
        prev = cur


def integrate(
    rho0: np.ndarray, spec: LindbladSpec, t: float, tol: float = 1e-8
) -> IntegrationResult:
    """Evolve a density matrix for time t and validate the endpoint.

    The final state is Hermitized and eigenvalues inside the clamp band
    [-1e-9, 0) are clipped before renormalizing, mirroring the state
    validator; larger violations raise.
    """
    from .states import validate_state

    rho0 = np.asarray(rho0, dtype=complex)
    d = spec.dim
    if rho0.shape != (d, d):
        raise DimensionMismatch(f"rho0 shape {rho0.shape} does not match spec dimension {d}")
    if t < 0.0:
        raise ValueError(f"t must be >= 0, got {t}")
    gen = liouvillian(spec)
    vec, steps, err = richardson_rk4(gen, rho0.reshape(d * d), t, tol)
    rho = vec.reshape(d, d)
    rho = (rho + rho.conj().T) / 2.0
    if d == 4:
        rho = validate_state(rho, trace_tol=1e-9).mat
    else:
        tr = float(np.trace(rho).real)
        if abs(tr - 1.0) > 1e-9:
            raise IntegratorFailure(f"single-qubit trace drifted by {abs(tr - 1.0):.3e}")
        rho = rho / tr
    return IntegrationResult(rho, steps, err)


def single_qubit_steady_state(p: ReservoirParams, tol: float = 1e-10) -> np.ndarray:
    """Long-time limit (gamma t = 40) of one qubit starting from I/2.

    For a thermal bath this is diag(1 - pe, pe) with pe = n / (2n + 1).
    The squeezing terms couple coherences only to coherences and both
    coherence modes decay at zeta -+ eta > 0, so the steady state stays
    diagonal for every physical m_abs.
    """
    spec = LindbladSpec(p)
    return integrate(np.eye(2, dtype=complex) / 2.0, spec, 40.0 / p.gamma, tol=tol).state
