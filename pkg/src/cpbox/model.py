"""Physical parameters, natural units, and initial-state preparation.

Everything downstream of :func:`reduce_params` works in natural units: rates
are fractions of the reference rate ``lambda = sqrt(e^2 omega / (hbar C_F))``
and time is the dimensionless product ``lambda * t``.  SI quantities enter
only through :class:`DeviceParams`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .density import DensityMatrix
from .errors import InvalidParameterError, TruncationTooSmallError

# SI defined constants (2019 redefinition).
ELEMENTARY_CHARGE = 1.602176634e-19  # C
HBAR = 1.054571817e-34  # J s


@dataclass(frozen=True)
class DeviceParams:
    """Raw charge-qubit device parameters, SI units.

    ``c_j``, ``c_g`` and ``c_f`` are the junction, gate and effective cavity
    capacitances in farad; ``omega`` is the cavity angular frequency in
    rad/s; ``e_j`` is the Josephson energy in joule; ``temperature`` is the
    optional bath energy scale k_B*T, also in joule.
    """

    c_j: float
    c_g: float
    c_f: float
    omega: float
    e_j: float
    temperature: float | None = None

    def __post_init__(self):
        if self.c_j <= 0.0 or self.c_g <= 0.0 or self.c_f <= 0.0:
            raise InvalidParameterError("all capacitances must be strictly positive")
        if self.omega <= 0.0:
            raise InvalidParameterError("omega must be strictly positive")


@dataclass(frozen=True)
class ReducedParams:
    """Dimensionless working parameter set.

    ``g`` (qubit-field coupling), ``delta`` (half-detuning) and ``gamma``
    (phase-damping rate) are all expressed in units of ``lambda_scale``.
    ``lambda_scale`` itself is kept in rad/s for reference only; it never
    enters the dynamics.  ``g = 0`` is allowed so the bare-dephasing limit
    stays constructible.
    """

    g: float
    delta: float
    gamma: float
    lambda_scale: float = 1.0

    def __post_init__(self):
        if self.g < 0.0:
            raise InvalidParameterError("coupling g must be nonnegative")
        if self.gamma < 0.0:
            raise InvalidParameterError("gamma must be nonnegative")
        if self.lambda_scale <= 0.0:
            raise InvalidParameterError("lambda_scale must be positive")


@dataclass(frozen=True)
class FockTruncation:
    """Photon-number cutoff plus the tail mass the cutoff is allowed to drop."""

    n_max: int
    tail_tolerance: float = 1e-10

    def __post_init__(self):
        if self.n_max < 1:
            raise InvalidParameterError("n_max must be at least 1")
        if not 0.0 < self.tail_tolerance < 1.0:
            raise InvalidParameterError("tail_tolerance must lie in (0, 1)")


@dataclass(frozen=True)
class CoherentAmplitudes:
    """Truncated coherent-state amplitude vector.

    ``amplitudes[n]`` is the Fock amplitude of ``|alpha|, beta`` for
    ``n = 0 .. n_max``, renormalized to unit norm after the raw tail mass
    (stored as ``tail_deficit``) passed the truncation check.
    """

    alpha_abs: float
    beta_phase: float
    amplitudes: np.ndarray
    tail_deficit: float

    @property
    def n_max(self) -> int:
        return len(self.amplitudes) - 1

    @property
    def nbar(self) -> float:
        return self.alpha_abs**2


@dataclass(frozen=True)
class InitialState:
    """Factorized initial state: qubit mixing angle theta plus a coherent field.

    The joint state is ``cos^2(theta) |e><e| (+) sin^2(theta) |g><g|`` tensored
    with the coherent-field projector; ``theta = 0`` is the pure excited start.
    """

    theta: float
    field: CoherentAmplitudes

    def __post_init__(self):
        if not 0.0 <= self.theta < math.pi / 2.0:
            raise InvalidParameterError("theta must lie in [0, pi/2)")

    def qubit_weights(self) -> tuple[float, float]:
        c = math.cos(self.theta)
        s = math.sin(self.theta)
        return c * c, s * s

    def joint_density(self) -> DensityMatrix:
        """Dense joint density matrix over the ordered basis index 2n+q."""
        b = self.field.amplitudes
        rho_f = np.outer(b, b.conj())
        we, wg = self.qubit_weights()
        rho_q = np.diag([we, wg]).astype(complex)
        return DensityMatrix(np.kron(rho_f, rho_q), trace_deficit=0.0)


def reduce_params(device: DeviceParams, gamma_raw: float = 0.0) -> ReducedParams:
    """Reduce SI device parameters to the natural-unit working set.

    The reference rate is ``lambda = sqrt(e^2 omega / (hbar C_F))``.  In
    units of lambda the coupling is ``C_J/(C_J+C_g) / (2 sqrt 2)``, the
    half-detuning is ``(E_J - hbar omega) / (2 hbar lambda)`` and the raw
    dephasing rate ``gamma_raw`` (rad/s) becomes ``gamma_raw / lambda``.
    """
    if gamma_raw < 0.0:
        raise InvalidParameterError("gamma_raw must be nonnegative")
    lam = math.sqrt(ELEMENTARY_CHARGE**2 * device.omega / (HBAR * device.c_f))
    g = device.c_j / (device.c_j + device.c_g) / (2.0 * math.sqrt(2.0))
    delta_rate = (device.e_j - HBAR * device.omega) / (2.0 * HBAR)
    return ReducedParams(
        g=g, delta=delta_rate / lam, gamma=gamma_raw / lam, lambda_scale=lam
    )


def validate_regime(device: DeviceParams) -> list[str]:
    """Check the charge-qubit operating-regime orderings.

    Returns one warning string per violated ordering among
    ``k_B T << E_J``, ``E_J ~ hbar omega``, ``hbar omega << E_c`` and
    ``E_J << E_c`` with ``E_c = e^2 / (2 (C_g + C_J))``.  "<<" means a
    ratio below 0.1 and "~" means within a factor of 3.  Advisory only,
    never raises.
    """
    warnings: list[str] = []
    e_c = ELEMENTARY_CHARGE**2 / (2.0 * (device.c_g + device.c_j))
    hw = HBAR * device.omega
    if device.temperature is not None and device.temperature > 0.0:
        ratio = device.temperature / device.e_j
        if ratio >= 0.1:
            warnings.append(
                f"k_B*T = {device.temperature:.3e} J is not << E_J = "
                f"{device.e_j:.3e} J (ratio {ratio:.3g} >= 0.1)"
            )
    ratio = device.e_j / hw
    if not (1.0 / 3.0 <= ratio <= 3.0):
        warnings.append(
            f"E_J = {device.e_j:.3e} J is not within a factor 3 of "
            f"hbar*omega = {hw:.3e} J (ratio {ratio:.3g})"
        )
    ratio = hw / e_c
    if ratio >= 0.1:
        warnings.append(
            f"hbar*omega = {hw:.3e} J is not << E_c = {e_c:.3e} J "
            f"(ratio {ratio:.3g} >= 0.1)"
        )
    ratio = device.e_j / e_c
    if ratio >= 0.1:
        warnings.append(
            f"E_J = {device.e_j:.3e} J is not << E_c = {e_c:.3e} J "
            f"(ratio {ratio:.3g} >= 0.1)"
        )
    return warnings


def rabi_frequency(params: ReducedParams, n):
    """Dressed-splitting rate ``mu_n = sqrt(delta^2 + g^2 (n+1))`` in lambda units.

    ``n`` may be a scalar photon index or an integer array; the return type
    follows the input.
    """
    arr = np.asarray(n)
    if np.any(arr < 0):
        raise InvalidParameterError("photon index n must be nonnegative")
    mu = np.sqrt(params.delta**2 + params.g**2 * (arr + 1.0))
    if np.isscalar(n) or arr.ndim == 0:
        return float(mu)
    return mu


def _poisson_log_pmf(k: int, nbar: float) -> float:
    return -nbar + k * math.log(nbar) - math.lgamma(k + 1)


def poisson_tail(n_max: int, nbar: float) -> float:
    """Poisson mass at photon numbers strictly above ``n_max``, by direct summation."""
    if nbar <= 0.0:
        return 0.0
    total = 0.0
    k = n_max + 1
    while k < n_max + 200000:
        term = math.exp(_poisson_log_pmf(k, nbar))
        total += term
        # past the mean the terms fall off superexponentially
        if k > nbar and term < total * 1e-18:
            break
        k += 1
    return total


def coherent_amplitudes(
    alpha_abs: float, beta_phase: float, trunc: FockTruncation
) -> CoherentAmplitudes:
    """Truncated coherent-state amplitudes b_n = e^{-|a|^2/2} a^n / sqrt(n!).

    Built by the multiplicative recurrence ``b_{n+1} = b_n * alpha / sqrt(n+1)``
    so no factorial or power is ever formed explicitly.  Raises
    :class:`TruncationTooSmallError` when the dropped tail mass exceeds
    ``trunc.tail_tolerance``; otherwise the vector is renormalized to unit
    norm so the joint state carries exactly unit trace.
    """
    if alpha_abs < 0.0:
        raise InvalidParameterError("alpha_abs must be nonnegative")
    n_max = trunc.n_max
    alpha = alpha_abs * complex(math.cos(beta_phase), math.sin(beta_phase))
    b = np.zeros(n_max + 1, dtype=complex)
    b[0] = math.exp(-0.5 * alpha_abs**2)
    for k in range(n_max):
        b[k + 1] = b[k] * alpha / math.sqrt(k + 1.0)
    norm2 = float(np.sum(np.abs(b) ** 2))
    deficit = 1.0 - norm2
    if deficit > trunc.tail_tolerance:
        raise TruncationTooSmallError(
            f"tail mass {deficit:.3e} above n_max={n_max} exceeds "
            f"tail_tolerance={trunc.tail_tolerance:.3e}"
        )
    b /= math.sqrt(norm2)
    return CoherentAmplitudes(
        alpha_abs=alpha_abs,
        beta_phase=beta_phase,
        amplitudes=b,
        tail_deficit=max(deficit, 0.0),
    )


def choose_truncation(alpha_abs: float, tail_tolerance: float = 1e-10) -> FockTruncation:
    """Smallest cutoff whose Poisson tail mass is below ``tail_tolerance``.

    Starts from the floor ``max(4, ceil(nbar + 6 sqrt(nbar)))`` and walks up
    until the directly summed tail drops below tolerance.
    """
    if alpha_abs < 0.0:
        raise InvalidParameterError("alpha_abs must be nonnegative")
    if not 0.0 < tail_tolerance < 1.0:
        raise InvalidParameterError("tail_tolerance must lie in (0, 1)")
    nbar = alpha_abs**2
    n = max(4, math.ceil(nbar + 6.0 * math.sqrt(nbar)))
    while poisson_tail(n, nbar) >= tail_tolerance:
        n += 1
    return FockTruncation(n_max=n, tail_tolerance=tail_tolerance)
