"""Scalar diagnostics on evolved pair states.

Degree of entanglement is the negativity sum |lambda_i| - 1 over the
partial-transpose spectrum (1 for a Bell state, 0 exactly on separable
two-qubit states).  Fidelity here is the plain trace overlap
Tr(rho_f rho_i) -- not the Uhlmann fidelity, with which it only agrees on
pure states -- because that is the definition the disturbance
D = 1 - F is built on.  Entropy exchange is the base-2 von Neumann
entropy of the evolved pair, so the maximally mixed value is exactly 2.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np

from .errors import EmptySeries
from .linalg import hermitian_eig, partial_transpose
from .states import DensityMatrix

_NEG_CLAMP = 1e-12


def _mat(rho) -> np.ndarray:
    return np.asarray(rho.mat if isinstance(rho, DensityMatrix) else rho, dtype=complex)


def negativity(rho: DensityMatrix | np.ndarray, subsystem: str = "B") -> float:
    """Sum |lambda_i| - 1 over the partial-transpose eigenvalues, clamped at zero."""
    vals, _ = hermitian_eig(partial_transpose(_mat(rho), subsystem))
    doe = float(np.sum(np.abs(vals))) - 1.0
    return 0.0 if doe < _NEG_CLAMP else doe


def fidelity(rho_i: DensityMatrix | np.ndarray, rho_f: DensityMatrix | np.ndarray) -> float:
    """Trace overlap Tr(rho_f rho_i); symmetric in its arguments."""
    return float(np.trace(_mat(rho_f) @ _mat(rho_i)).real)


def disturbance(rho_i: DensityMatrix | np.ndarray, rho_f: DensityMatrix | np.ndarray) -> float:
    """1 - Tr(rho_f rho_i): how far the evolved state drifted from the input."""
    return 1.0 - fidelity(rho_i, rho_f)


def entropy_exchange(rho: DensityMatrix | np.ndarray) -> float:
    """Base-2 von Neumann entropy of the state, with 0 log 0 = 0."""
    vals, _ = hermitian_eig(_mat(rho))
    s = 0.0
    for lam in vals:
        if lam > 0.0:
            s -= float(lam) * math.log2(float(lam))
    return max(s, 0.0)


def trace_distance(rho1: DensityMatrix | np.ndarray, rho2: DensityMatrix | np.ndarray) -> float:
    """Half the trace norm of the difference of two Hermitian matrices."""
    diff = _mat(rho1) - _mat(rho2)
    # the difference of two Hermitian matrices is Hermitian; symmetrizing
    # strips the rounding noise that dominates when the difference is tiny
    diff = (diff + diff.conj().T) / 2.0
    vals, _ = hermitian_eig(diff)
    return 0.5 * float(np.sum(np.abs(vals)))


def esd_time(
    series: Sequence[tuple[float, float]],
    eps: float = 1e-6,
    refine: Callable[[float], float] | None = None,
) -> float | None:
    """First time the entanglement series drops below eps and stays there.

    ``series`` is (t, doe) on an increasing grid.  Returns None when the
    series ends above eps (no sudden death inside the horizon).  When a
    ``refine`` callable (t -> doe) is supplied, the bracketing grid
    interval is bisected ten times, resolving the crossing to
    (grid step) / 2**10.
    """
    if len(series) == 0:
        raise EmptySeries("esd_time needs at least one sample")
    idx = len(series)
    for k in range(len(series) - 1, -1, -1):
        if series[k][1] < eps:
            idx = k
        else:
            break
    if idx == len(series):
        return None
    if idx == 0:
        return float(series[0][0])
    lo, hi = float(series[idx - 1][0]), float(series[idx][0])
    if refine is None:
        return hi
    for _ in range(10):
        mid = 0.5 * (lo + hi)
        if refine(mid) < eps:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def plateau_onset(series: Sequence[tuple[float, float]], slope_tol: float) -> float | None:
    """First sample time after which |dv/dt| stays below slope_tol.

    Slopes are forward differences on the sampled series; None when even
    the final step moves faster than the tolerance.
    """
    if len(series) < 2:
        raise EmptySeries("plateau_onset needs at least two samples")
    idx = len(series) - 1
    for k in range(len(series) - 2, -1, -1):
        t0, v0 = series[k]
        t1, v1 = series[k + 1]
        if abs(v1 - v0) <= slope_tol * (t1 - t0):
            idx = k
        else:
            break
    if idx == len(series) - 1:
        return None
    return float(series[idx][0])


def saturation_onset(series: Sequence[tuple[float, float]], step_tol: float) -> float | None:
    """First sample time after which |delta v| per sample step stays below step_tol."""
    if len(series) < 2:
        raise EmptySeries("saturation_onset needs at least two samples")
    idx = len(series) - 1
    for k in range(len(series) - 2, -1, -1):
        if abs(series[k + 1][1] - series[k][1]) < step_tol:
            idx = k
        else:
            break
    if idx == len(series) - 1:
        return None
    return float(series[idx][0])
