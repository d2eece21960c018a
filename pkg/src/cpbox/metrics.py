"""Reduced states and scalar observables of the joint qubit-field state.

Eigenvalue routines act on explicitly symmetrized inputs, (M + M^dag)/2, so
accumulated asymmetry noise never reaches the spectral computations.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .density import DensityMatrix
from .errors import DimensionMismatchError, InvalidParameterError

SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])


def _as_array(rho) -> np.ndarray:
    return rho.data if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)


def _hermitize(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + m.conj().T)


def _split(rho) -> np.ndarray:
    """Reshape a joint matrix to indices [n, q, m, q']."""
    data = _as_array(rho)
    dim = data.shape[0]
    if data.ndim != 2 or data.shape[0] != data.shape[1] or dim % 2 != 0:
        raise DimensionMismatchError("joint state must be square with even dimension")
    n_fock = dim // 2
    return data.reshape(n_fock, 2, n_fock, 2)


def partial_trace_field(rho) -> np.ndarray:
    """Reduced 2x2 qubit state, tracing out the field."""
    return np.einsum("nqnr->qr", _split(rho))


def partial_trace_qubit(rho) -> np.ndarray:
    """Reduced field state over the Fock basis, tracing out the qubit."""
    return np.einsum("nqmq->nm", _split(rho))


def purity(rho_j: np.ndarray) -> float:
    """Tr rho^2 of a reduced state."""
    return float(np.real(np.trace(rho_j @ rho_j)))


def atomic_inversion(rho_j: np.ndarray) -> float:
    """W = P_e - P_g of the reduced qubit state."""
    return float(np.real(rho_j[0, 0] - rho_j[1, 1]))


def idempotency_defect(rho_j: np.ndarray) -> float:
    """Rescaled linear entropy 2 (1 - Tr rho^2) of the reduced qubit.

    The raw linear entropy of a qubit maxes at 1/2; the factor 2 stretches
    the range to [0, 1] so a completely mixed qubit scores 1.
    """
    return max(0.0, 2.0 * (1.0 - purity(rho_j)))


def mean_photons(rho) -> float:
    """Expectation of the photon-number operator."""
    diag = np.real(np.diag(partial_trace_qubit(rho)))
    return float(np.dot(diag, np.arange(len(diag))))


def concurrence_two_qubit(rho4) -> float:
    """Two-qubit concurrence from the spectrum of rho * rho~.

    rho~ = (sigma_y x sigma_y) rho* (sigma_y x sigma_y).  The eigenvalues of
    rho rho~ are real and nonnegative for a valid state, so no matrix square
    roots are needed: C = max(0, sqrt(l1) - sqrt(l2) - sqrt(l3) - sqrt(l4))
    with the l_i sorted descending.
    """
    rho4 = np.asarray(rho4, dtype=complex)
    if rho4.shape != (4, 4):
        raise DimensionMismatchError("concurrence_two_qubit expects a 4x4 matrix")
    if float(np.max(np.abs(rho4 - rho4.conj().T))) > 1e-8:
        raise InvalidParameterError("input is not Hermitian")
    if abs(np.trace(rho4) - 1.0) > 1e-6:
        raise InvalidParameterError("input trace deviates from 1")
    sy2 = np.kron(SIGMA_Y, SIGMA_Y)
    rho_tilde = sy2 @ rho4.conj() @ sy2
    lam = np.linalg.eigvals(rho4 @ rho_tilde)
    lam = np.sort(np.maximum(lam.real, 0.0))[::-1]
    s = np.sqrt(lam)
    return float(max(0.0, s[0] - s[1] - s[2] - s[3]))


def concurrence_effective(rho) -> float:
    """Concurrence of the qubit with the two dominant field modes.

    Projects the field onto the two leading eigenvectors of the reduced
    field state, renormalizes the resulting 4x4 block and applies the
    two-qubit concurrence.  This is one defensible reading of a pair
    measure on a qubit x field state and is flagged approximate wherever it
    is reported; a warning is emitted when the 2nd and 3rd field eigenvalues
    are nearly degenerate, in which case the value is unreliable.
    """
    split = _split(rho)
    n_fock = split.shape[0]
    if n_fock < 2:
        raise DimensionMismatchError("field dimension must be at least 2")
    rho_f = _hermitize(np.einsum("nqmq->nm", split))
    w, v = np.linalg.eigh(rho_f)
    if n_fock > 2 and (w[-2] - w[-3]) < 1e-12:
        warnings.warn(
            "field spectrum nearly degenerate below the two dominant modes; "
            "concurrence_2q is unreliable here",
            RuntimeWarning,
            stacklevel=2,
        )
    modes = v[:, [-1, -2]]
    rho4 = np.einsum("na,nqmr,mb->aqbr", modes.conj(), split, modes).reshape(4, 4)
    rho4 = _hermitize(rho4)
    tr = float(np.real(np.trace(rho4)))
    if tr <= 0.0:
        return 0.0
    return concurrence_two_qubit(rho4 / tr)


def negativity(rho) -> float:
    """Sum of the negative eigenvalues of the partial transpose over the qubit.

    For a qubit coupled to a field of any dimension this vanishes exactly on
    separable states, which makes it the well-defined entanglement monotone
    used in the acceptance checks.
    """
    split = _split(rho)
    dim = 2 * split.shape[0]
    pt = split.transpose(0, 3, 2, 1).reshape(dim, dim)
    lam = np.linalg.eigvalsh(_hermitize(pt))
    return float(np.sum(np.abs(lam[lam < 0.0])))


def schmidt_negativity_pure(psi: np.ndarray, n_fock: int) -> float:
    """Independent oracle: negativity of a pure joint state from its Schmidt values."""
    mat = np.asarray(psi, dtype=complex).reshape(n_fock, 2)
    s = np.linalg.svd(mat, compute_uv=False)
    total = 0.0
    for i in range(len(s)):
        for j in range(i + 1, len(s)):
            total += s[i] * s[j]
    return float(total)


@dataclass(frozen=True)
class MetricRow:
    """All scalar observables of one joint state at one time."""

    t: float
    inversion: float
    linear_entropy_raw: float
    idempotency_defect: float
    concurrence_2q: float | None
    negativity: float
    purity: float
    mean_photons: float
    trace_error: float


def metric_row(rho: DensityMatrix, t: float) -> MetricRow:
    """Compute every metric from a single joint state.

    ``trace_error`` is the deviation of the trace from one before any
    normalization, as recorded on the state itself.
    """
    rho_j = _hermitize(partial_trace_field(rho))
    pur = purity(rho_j)
    raw = max(0.0, 1.0 - pur)
    return MetricRow(
        t=float(t),
        inversion=atomic_inversion(rho_j),
        linear_entropy_raw=raw,
        idempotency_defect=2.0 * raw,
        concurrence_2q=concurrence_effective(rho),
        negativity=negativity(rho),
        purity=pur,
        mean_photons=mean_photons(rho),
        trace_error=float(rho.trace_deficit),
    )
