"""Two-qubit state constructors and validation.

The initial-state family used throughout the package is Bell diagonal:
zero single-qubit Bloch vectors and a diagonal correlation matrix
diag(c1, c2, c3).  Its Bell-basis weights are the projections
<Bell|rho|Bell>,

    p(phi+-) = (1 +- c1 -+ c2 + c3) / 4,
    p(psi+-) = (1 +- c1 +- c2 - c3) / 4,

which sum to one identically; a triple is physical exactly when all four
weights are nonnegative.  The general Bloch-form constructor and the
Werner line are provided alongside.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import linalg
from .errors import NotHermitian, NotPositive, OutOfRange, TraceDefect

# Bell basis vectors in the computational basis |00>, |01>, |10>, |11>.
PHI_PLUS = np.array([1.0, 0.0, 0.0, 1.0], dtype=complex) / np.sqrt(2.0)
PHI_MINUS = np.array([1.0, 0.0, 0.0, -1.0], dtype=complex) / np.sqrt(2.0)
PSI_PLUS = np.array([0.0, 1.0, 1.0, 0.0], dtype=complex) / np.sqrt(2.0)
PSI_MINUS = np.array([0.0, 1.0, -1.0, 0.0], dtype=complex) / np.sqrt(2.0)

# Order matches BellWeights.
BELL_VECTORS = (PHI_PLUS, PHI_MINUS, PSI_MINUS, PSI_PLUS)

_WEIGHT_FLOOR = -1e-12  # absorbs rounding at exact boundary triples


def bell_projector(vec: np.ndarray) -> np.ndarray:
    return np.outer(vec, vec.conj())


class CorrelationTriple(NamedTuple):
    """Diagonal correlation parameters (c1, c2, c3), each in [-1, 1]."""

    c1: float
    c2: float
    c3: float


class BellWeights(NamedTuple):
    """Bell-basis populations of the correlation-triple state."""

    phi_plus: float
    phi_minus: float
    psi_minus: float
    psi_plus: float


# The canonical inputs used by the sweeps: the maximally entangled triple
# is exactly |phi+><phi+|; the partial triple is its valid partially mixed
# counterpart (the all-equal triple 0.85 is not a physical state).
MAXIMAL_TRIPLE = CorrelationTriple(1.0, -1.0, 1.0)
PARTIAL_TRIPLE = CorrelationTriple(0.85, -0.85, 0.85)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Validated 4x4 state: Hermitian, unit trace, positive within the clamp band.

    ``trace_defect`` records |tr - 1| as measured before renormalization,
    so channel outputs stay auditable after validation.
    """

    mat: np.ndarray
    trace_defect: float = 0.0

    def __post_init__(self):
        self.mat.setflags(write=False)

    def __array__(self, dtype=None, copy=None):
        return np.array(self.mat, dtype=dtype)


def validate_state(
    mat: np.ndarray,
    *,
    herm_tol: float = 1e-10,
    trace_tol: float = 1e-10,
    psd_floor: float = 1e-9,
) -> DensityMatrix:
    """Check and normalize a candidate 4x4 density matrix.

    Hermiticity is relative (||M - M^dagger||_F <= herm_tol * ||M||_F),
    the trace must be 1 within ``trace_tol``, and eigenvalues in
    [-psd_floor, 0) are clamped to zero with the trace renormalized.
    Raises NotHermitian / TraceDefect / NotPositive with the measured
    defect attached.
    """
    a = np.array(mat, dtype=complex)  # copy: the result is frozen read-only
    if a.shape != (4, 4):
        raise OutOfRange(f"expected a 4x4 matrix, got shape {a.shape}")
    hdef = linalg.herm_defect(a)
    nrm = linalg.frobenius(a)
    if nrm == 0.0 or hdef > herm_tol * nrm:
        raise NotHermitian(f"state is not Hermitian (defect {hdef:.3e})", defect=hdef)
    tdef = abs(float(np.trace(a).real) - 1.0)
    if tdef > trace_tol:
        raise TraceDefect(f"state trace differs from 1 by {tdef:.3e}", defect=tdef)
    vals, vecs = linalg.hermitian_eig(a, tol=herm_tol)
    min_eig = float(vals[0])
    if min_eig < -psd_floor:
        raise NotPositive(f"state has eigenvalue {min_eig:.3e} < -{psd_floor:.1e}", defect=min_eig)
    if min_eig < 0.0:
        clamped = np.maximum(vals, 0.0)
        a = (vecs * clamped) @ vecs.conj().T
        a = (a + a.conj().T) / 2.0
        a = a / float(np.trace(a).real)
    elif tdef != 0.0:
        a = a / float(np.trace(a).real)
    return DensityMatrix(np.ascontiguousarray(a), trace_defect=tdef)


def bell_weights(c: CorrelationTriple) -> BellWeights:
    """Bell-basis populations of the diag(c1, c2, c3) correlation state.

    Negative entries are returned as-is; they signal an unphysical triple
    rather than raising here.
    """
    c1, c2, c3 = float(c[0]), float(c[1]), float(c[2])
    return BellWeights(
        phi_plus=(1.0 + c1 - c2 + c3) / 4.0,
        phi_minus=(1.0 - c1 + c2 + c3) / 4.0,
        psi_minus=(1.0 - c1 - c2 - c3) / 4.0,
        psi_plus=(1.0 + c1 + c2 - c3) / 4.0,
    )


def state_from_bloch(s, t, c) -> DensityMatrix:
    """General two-qubit state from Bloch vectors s, t and 3x3 cross dyadic C.

    rho = (1/4) (I + s.sigma x I + I x t.sigma + sum_jk C[j,k] sigma_j x sigma_k).
    The parameter ranges alone do not guarantee positivity, so the result
    goes through :func:`validate_state`.
    """
    s = np.asarray(s, dtype=float).reshape(3)
    t = np.asarray(t, dtype=float).reshape(3)
    c = np.asarray(c, dtype=float).reshape(3, 3)
    if np.linalg.norm(s) > 1.0 + 1e-12 or np.linalg.norm(t) > 1.0 + 1e-12:
        raise OutOfRange("Bloch vectors must have norm <= 1")
    if np.max(np.abs(c)) > 1.0 + 1e-12:
        raise OutOfRange("cross-dyadic entries must lie in [-1, 1]")
    rho = linalg.I4.copy()
    for j, sig in enumerate(linalg.PAULIS):
        rho += s[j] * linalg.kron(sig, linalg.I2)
        rho += t[j] * linalg.kron(linalg.I2, sig)
        for k, sig2 in enumerate(linalg.PAULIS):
            if c[j, k] != 0.0:
                rho += c[j, k] * linalg.kron(sig, sig2)
    return validate_state(rho / 4.0)


def state_from_correlations(c: CorrelationTriple) -> DensityMatrix:
    """Bell-diagonal state for a correlation triple (zero Bloch vectors)."""
    w = bell_weights(c)
    for name, weight in zip(w._fields, w):
        if weight < _WEIGHT_FLOOR:
            raise NotPositive(
                f"triple {tuple(float(x) for x in c)} gives negative weight "
                f"{name}={weight:.6g}",
                defect=weight,
            )
    return state_from_bloch((0.0, 0.0, 0.0), (0.0, 0.0, 0.0), np.diag([c[0], c[1], c[2]]))


def werner(x: float) -> DensityMatrix:
    """Werner line: ((3x+1)/4) psi- + ((1-x)/4) (phi+ + phi- + psi+).

    Positivity forces x into [-1/3, 1].
    """
    x = float(x)
    if x < -1.0 / 3.0 - 1e-12 or x > 1.0 + 1e-12:
        raise OutOfRange(f"werner parameter {x} outside [-1/3, 1]")
    rho = ((3.0 * x + 1.0) / 4.0) * bell_projector(PSI_MINUS)
    for vec in (PHI_PLUS, PHI_MINUS, PSI_PLUS):
        rho += ((1.0 - x) / 4.0) * bell_projector(vec)
    return validate_state(rho)
