"""Dense joint density matrix over the ordered qubit-field basis.

Basis convention used everywhere in the package: the joint basis state with
``n`` photons and qubit level ``q`` (``q = 0`` for ``|e>``, ``q = 1`` for
``|g>``) sits at index ``2n + q``, so the qubit index runs fastest and a
product state is ``kron(rho_field, rho_qubit)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatchError, NumericalError


def basis_index(n: int, q: int) -> int:
    """Flat index of ``|n, q>`` with q=0 for the excited level."""
    return 2 * n + q


@dataclass
class DensityMatrix:
    """Square complex matrix plus the trace deficit recorded at construction.

    ``trace_deficit`` is ``|Tr rho - 1|`` before any renormalization was
    applied; it is what metric rows report as ``trace_error``.
    """

    data: np.ndarray
    trace_deficit: float = field(default=0.0)

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=complex)
        if self.data.ndim != 2 or self.data.shape[0] != self.data.shape[1]:
            raise DimensionMismatchError("density matrix must be square")
        if self.data.shape[0] % 2 != 0:
            raise DimensionMismatchError("joint dimension must be even (qubit x field)")

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    @property
    def n_fock(self) -> int:
        """Photon-number cutoff n_max implied by the dimension."""
        return self.dim // 2 - 1

    def trace(self) -> complex:
        return complex(np.trace(self.data))

    def hermiticity_defect(self) -> float:
        return float(np.max(np.abs(self.data - self.data.conj().T)))

    def min_eigenvalue(self) -> float:
        herm = 0.5 * (self.data + self.data.conj().T)
        return float(np.linalg.eigvalsh(herm)[0])

    def copy(self) -> "DensityMatrix":
        return DensityMatrix(self.data.copy(), trace_deficit=self.trace_deficit)

    def validate(
        self,
        herm_tol: float = 1e-10,
        trace_tol: float = 1e-8,
        eig_floor: float = -1e-8,
        check_positivity: bool = True,
    ) -> None:
        """Raise :class:`NumericalError` if the state invariants are violated."""
        defect = self.hermiticity_defect()
        if defect > herm_tol:
            raise NumericalError(f"hermiticity defect {defect:.3e} exceeds {herm_tol:.1e}")
        tr_err = abs(self.trace() - 1.0)
        if tr_err > trace_tol:
            raise NumericalError(f"trace error {tr_err:.3e} exceeds {trace_tol:.1e}")
        if check_positivity:
            lo = self.min_eigenvalue()
            if lo < eig_floor:
                raise NumericalError(f"minimum eigenvalue {lo:.3e} below {eig_floor:.1e}")
