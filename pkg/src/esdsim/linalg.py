"""Dense complex linear algebra for one- and two-qubit operators.

Everything operates on plain numpy arrays of shape (2, 2) or (4, 4).
The Hermitian eigensolver is a cyclic complex Jacobi iteration: at these
sizes it is simple, deterministic, and accurate to near machine
precision, which the rest of the package leans on (partial-transpose
spectra, Choi decompositions, entropies).  A characteristic-polynomial
root solver is kept alongside as an algorithmically independent
cross-check path.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .errors import DimensionMismatch, NotHermitian

I2 = np.eye(2, dtype=complex)
I4 = np.eye(4, dtype=complex)

SX = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SY = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SZ = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
PAULIS = (SX, SY, SZ)

# Level convention used everywhere: |0> is the ground state (sigma_z = +1
# eigenvector), |1> is the excited state.  SIGMA_MINUS lowers |1> -> |0>.
SIGMA_MINUS = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
SIGMA_PLUS = SIGMA_MINUS.conj().T.copy()

_JACOBI_MAX_SWEEPS = 100
_JACOBI_OFF_FACTOR = 1e-14


def dagger(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def frobenius(a: np.ndarray) -> float:
    return float(np.linalg.norm(a))


def herm_defect(a: np.ndarray) -> float:
    """Frobenius norm of the anti-Hermitian part, ||A - A^dagger||_F."""
    return frobenius(a - dagger(a))


def _square(a: np.ndarray, dims=(2, 4)) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] not in dims:
        raise DimensionMismatch(f"expected a square matrix of size {dims}, got shape {a.shape}")
    return a


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Tensor product of two single-qubit operators, (A x B)[2i+k, 2j+l] = A[i,j] B[k,l]."""
    a = _square(a, dims=(2,))
    b = _square(b, dims=(2,))
    return np.kron(a, b)


def partial_transpose(rho: np.ndarray, subsystem: str = "B") -> np.ndarray:
    """Transpose one tensor factor of a two-qubit operator.

    ``subsystem`` selects which qubit's indices are transposed ("A" is the
    first factor).  Applying it twice on the same subsystem is the identity.
    """
    rho = _square(rho, dims=(4,))
    r = rho.reshape(2, 2, 2, 2)  # (a_out, b_out, a_in, b_in)
    sub = subsystem.upper()
    if sub == "A":
        r = r.transpose(2, 1, 0, 3)
    elif sub == "B":
        r = r.transpose(0, 3, 2, 1)
    else:
        raise ValueError(f"subsystem must be 'A' or 'B', got {subsystem!r}")
    return np.ascontiguousarray(r.reshape(4, 4))


def partial_trace(rho: np.ndarray, keep: str = "A") -> np.ndarray:
    """Trace out one qubit of a two-qubit operator, keeping the other.

    Linear and trace preserving; the input is not required to be a state
    (the channel code applies it to Choi matrices of trace 2).
    """
    rho = _square(rho, dims=(4,))
    r = rho.reshape(2, 2, 2, 2)
    which = keep.upper()
    if which == "A":
        return np.einsum("akbk->ab", r)
    if which == "B":
        return np.einsum("kakb->ab", r)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


class EigenResult(NamedTuple):
    """Ascending real eigenvalues and the matching orthonormal eigenvector columns."""

    values: np.ndarray
    vectors: np.ndarray


def hermitian_eig(m: np.ndarray, tol: float = 1e-10) -> EigenResult:
    """Diagonalize a Hermitian 2x2 or 4x4 matrix by cyclic Jacobi rotations.

    Sweeps run until the off-diagonal Frobenius mass drops below
    1e-14 * ||M||_F, capped at 100 sweeps (quadratic convergence makes the
    cap generous).  Raises :class:`NotHermitian` when
    ||M - M^dagger||_F > tol * ||M||_F.
    """
    a = _square(m)
    n = a.shape[0]
    nrm = frobenius(a)
    if nrm == 0.0:
        return EigenResult(np.zeros(n), np.eye(n, dtype=complex))
    defect = herm_defect(a)
    if defect > tol * nrm:
        raise NotHermitian(
            f"matrix is not Hermitian: defect {defect:.3e} > {tol:.1e} * norm {nrm:.3e}",
            defect=defect,
        )
    a = (a + dagger(a)) / 2.0
    v = np.eye(n, dtype=complex)
    off_tol = _JACOBI_OFF_FACTOR * nrm
    pairs = [(p, q) for p in range(n - 1) for q in range(p + 1, n)]
    for _ in range(_JACOBI_MAX_SWEEPS):
        # measure the off-diagonal entries directly: the norm-difference
        # form cancels catastrophically once the mass is near sqrt(eps)
        off = frobenius(a - np.diag(np.diag(a)))
        if off <= off_tol:
            break
        for p, q in pairs:
            apq = complex(a[p, q])
            r = abs(apq)
            if r == 0.0:
                continue
            phase = apq / r
            delta = float(a[q, q].real - a[p, p].real)
            if abs(delta) > r * 1e150:  # rotation angle below resolution
                continue
            tau = delta / (2.0 * r)
            if tau >= 0.0:
                t = 1.0 / (tau + math.sqrt(tau * tau + 1.0))
            else:
                t = -1.0 / (-tau + math.sqrt(tau * tau + 1.0))
            c = 1.0 / math.sqrt(t * t + 1.0)
            s = t * c
            rot = np.eye(n, dtype=complex)
            rot[p, p] = c
            rot[q, q] = c
            rot[p, q] = s * phase
            rot[q, p] = -s * np.conj(phase)
            a = dagger(rot) @ a @ rot
            v = v @ rot
    vals = np.diag(a).real.copy()
    order = np.argsort(vals, kind="stable")
    return EigenResult(vals[order], np.ascontiguousarray(v[:, order]))


def charpoly_eigvalsh(m: np.ndarray) -> np.ndarray:
    """Hermitian eigenvalues via characteristic-polynomial roots, ascending.

    Coefficients come from the Faddeev-LeVerrier recursion and the roots
    from numpy's companion-matrix solver, so this path shares no machinery
    with :func:`hermitian_eig` and serves as its independent check.
    """
    a = _square(m)
    n = a.shape[0]
    defect = herm_defect(a)
    nrm = frobenius(a)
    if nrm > 0.0 and defect > 1e-10 * nrm:
        raise NotHermitian(f"matrix is not Hermitian (defect {defect:.3e})", defect=defect)
    coeffs = [1.0]
    mk = np.zeros_like(a)
    ck = 1.0
    for k in range(1, n + 1):
        mk = a @ mk + ck * np.eye(n, dtype=complex)
        ck = -float(np.trace(a @ mk).real) / k
        coeffs.append(ck)
    roots = np.roots(coeffs)
    return np.sort(roots.real)
