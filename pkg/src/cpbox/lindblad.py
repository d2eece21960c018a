"""Ground-truth integrator of the phase-damping master equation.

The joint Hamiltonian is built in the rotating frame at the cavity
frequency, so only the half-detuning ``delta`` and the coupling ``g``
appear and step sizes are set by those rates rather than by the bare
cavity frequency.  The dephasing dissipator commutes with the frame
generator, so the master equation keeps its form in this frame.

Whenever the closed-form solution and this integrator disagree, the
integrator is authoritative.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .density import DensityMatrix
from .errors import (
    DimensionMismatchError,
    InvalidParameterError,
    PositivityError,
    StepSizeUnderflowError,
)
from .model import FockTruncation, ReducedParams

METHOD_RK45 = "rk45"
METHOD_RK4 = "rk4"

# Dormand-Prince 5(4) tableau; the 5th-order solution is propagated and the
# embedded 4th-order difference drives the step controller (FSAL).
_A21 = 1.0 / 5.0
_A31, _A32 = 3.0 / 40.0, 9.0 / 40.0
_A41, _A42, _A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
_A51, _A52, _A53, _A54 = (
    19372.0 / 6561.0,
    -25360.0 / 2187.0,
    64448.0 / 6561.0,
    -212.0 / 729.0,
)
_A61, _A62, _A63, _A64, _A65 = (
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
)
_B1, _B3, _B4, _B5, _B6 = (
    35.0 / 384.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
)
_E1, _E3, _E4, _E5, _E6, _E7 = (
    71.0 / 57600.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
)


@dataclass(frozen=True)
class JointHamiltonian:
    """Rotating-frame joint Hamiltonian (dense, exactly Hermitian) plus its parameters."""

    matrix: np.ndarray
    params: ReducedParams

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class IntegratorConfig:
    """Time-stepping knobs.

    ``method`` is ``"rk45"`` (adaptive, ``dt_or_tol`` is the local error
    tolerance) or ``"rk4"`` (fixed step, ``dt_or_tol`` is the step in scaled
    time).  ``renorm_interval`` renormalizes the trace every so many accepted
    steps; 0 disables it so conservation laws are measured, not enforced.
    ``atol`` optionally splits the absolute floor of the adaptive error norm
    away from the relative tolerance; it defaults to ``dt_or_tol``.
    """

    method: str = METHOD_RK45
    dt_or_tol: float = 1e-9
    renorm_interval: int = 0
    atol: float | None = None

    def __post_init__(self):
        if self.method not in (METHOD_RK45, METHOD_RK4):
            raise InvalidParameterError(f"unknown integrator method {self.method!r}")
        if self.dt_or_tol <= 0.0:
            raise InvalidParameterError("dt_or_tol must be positive")
        if self.renorm_interval < 0:
            raise InvalidParameterError("renorm_interval must be nonnegative")
        if self.atol is not None and self.atol <= 0.0:
            raise InvalidParameterError("atol must be positive when given")


def build_hamiltonian(params: ReducedParams, trunc: FockTruncation) -> JointHamiltonian:
    """Joint Hamiltonian in the rotating frame at the cavity frequency.

    Diagonal: +delta on |n,e> rows and -delta on |n,g> rows.  Coupling:
    <n+1,g| H |n,e> = -i g sqrt(n+1) and its conjugate, i.e. the block
    tridiagonal structure where |n,e> couples only to |n+1,g>.
    """
    n_max = trunc.n_max
    dim = 2 * (n_max + 1)
    h = np.zeros((dim, dim), dtype=complex)
    n = np.arange(n_max + 1)
    h[2 * n, 2 * n] = params.delta
    h[2 * n + 1, 2 * n + 1] = -params.delta
    nc = np.arange(n_max)  # manifolds with an in-space |n+1,g> partner
    coup = params.g * np.sqrt(nc + 1.0)
    h[2 * (nc + 1) + 1, 2 * nc] = -1j * coup
    h[2 * nc, 2 * (nc + 1) + 1] = 1j * coup
    return JointHamiltonian(matrix=h, params=params)


def dephasing_rate_matrix(dim: int, gamma: float) -> np.ndarray:
    """Elementwise decay rates -gamma (n_i - n_j)^2 of the photon-number dissipator."""
    nvec = (np.arange(dim) // 2).astype(float)
    return -gamma * (nvec[:, None] - nvec[None, :]) ** 2


def liouvillian_apply(ham: JointHamiltonian, gamma: float, rho) -> np.ndarray:
    """Right-hand side -i[H, rho] + gamma (2 N rho N - N^2 rho - rho N^2).

    N is the photon-number operator, diagonal in the joint basis, so the
    dissipator acts elementwise as -gamma (n_i - n_j)^2.  The output is
    Hermitian whenever the input is.
    """
    if gamma < 0.0:
        raise InvalidParameterError("gamma must be nonnegative")
    data = rho.data if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    if data.shape != ham.matrix.shape:
        raise DimensionMismatchError(
            f"state dimension {data.shape} does not match Hamiltonian {ham.matrix.shape}"
        )
    h = ham.matrix
    return -1j * (h @ data - data @ h) + dephasing_rate_matrix(data.shape[0], gamma) * data


def _rk4_segment(rhs, y, seg: float, dt: float, renorm, accepted: int):
    nsteps = max(1, int(np.ceil(seg / dt - 1e-12)))
    h = seg / nsteps
    for _ in range(nsteps):
        k1 = rhs(y)
        k2 = rhs(y + 0.5 * h * k1)
        k3 = rhs(y + 0.5 * h * k2)
        k4 = rhs(y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        accepted += 1
        y = renorm(y, accepted)
    return y, accepted


def evolve(
    ham: JointHamiltonian,
    gamma: float,
    rho0,
    t_end: float,
    cfg: IntegratorConfig | None = None,
    sample_times=None,
    check_positivity: bool = True,
) -> list[DensityMatrix]:
    """Integrate the master equation and snapshot the state at ``sample_times``.

    Sample times must be ascending and lie inside ``[0, t_end]``; they
    default to ``[t_end]``.  A sampled state whose minimum eigenvalue drops
    below -1e-6 raises :class:`PositivityError`, which almost always means
    the Fock cutoff is too small for the requested dynamics.
    """
    cfg = cfg or IntegratorConfig()
    if t_end < 0.0:
        raise InvalidParameterError("t_end must be nonnegative")
    if gamma < 0.0:
        raise InvalidParameterError("gamma must be nonnegative")
    y = np.array(rho0.data if isinstance(rho0, DensityMatrix) else rho0, dtype=complex)
    if y.shape != ham.matrix.shape:
        raise DimensionMismatchError(
            f"state dimension {y.shape} does not match Hamiltonian {ham.matrix.shape}"
        )
    ts = [float(t) for t in (sample_times if sample_times is not None else [t_end])]
    if not ts:
        raise InvalidParameterError("sample_times must not be empty")
    if any(b < a for a, b in zip(ts, ts[1:])):
        raise InvalidParameterError("sample_times must be ascending")
    if ts[0] < 0.0 or ts[-1] > t_end + 1e-12 * max(1.0, t_end):
        raise InvalidParameterError("sample_times must lie within [0, t_end]")

    h_mat = ham.matrix
    decay = dephasing_rate_matrix(y.shape[0], gamma)

    def rhs(state):
        return -1j * (h_mat @ state - state @ h_mat) + decay * state

    interval = cfg.renorm_interval

    def renorm(state, accepted):
        if interval and accepted % interval == 0:
            return state / np.trace(state).real
        return state

    def snapshot(state) -> DensityMatrix:
        dm = DensityMatrix(state.copy(), trace_deficit=float(abs(np.trace(state) - 1.0)))
        if check_positivity:
            lo = dm.min_eigenvalue()
            if lo < -1e-6:
                raise PositivityError(
                    f"minimum eigenvalue {lo:.3e} below -1e-6; the Fock cutoff is "
                    f"likely too small, increase n_max"
                )
        return dm

    out: list[DensityMatrix] = []
    t = 0.0
    accepted = 0

    if cfg.method == METHOD_RK4:
        for target in ts:
            seg = target - t
            if seg > 1e-14 * max(1.0, target):
                y, accepted = _rk4_segment(rhs, y, seg, cfg.dt_or_tol, renorm, accepted)
                t = target
            out.append(snapshot(y))
        return out

    rtol = cfg.dt_or_tol
    atol = cfg.atol if cfg.atol is not None else cfg.dt_or_tol
    k1 = rhs(y)
    h = min(max(ts[-1], 1e-6), 0.1 / (1.0 + float(np.max(np.abs(k1)))))
    # below this the controller is chasing rounding noise and cannot finish;
    # boundary-clipped nudges into a sample time are exempt
    min_h = 1e-12 * max(1.0, t_end)
    max_steps = 5_000_000

    for target in ts:
        while t < target - 1e-14 * max(1.0, target):
            clipped = h > target - t
            h_try = min(h, target - t)
            if not clipped and h_try < min_h:
                raise StepSizeUnderflowError(f"step size underflow at t={t:.6g}")
            k2 = rhs(y + h_try * (_A21 * k1))
            k3 = rhs(y + h_try * (_A31 * k1 + _A32 * k2))
            k4 = rhs(y + h_try * (_A41 * k1 + _A42 * k2 + _A43 * k3))
            k5 = rhs(y + h_try * (_A51 * k1 + _A52 * k2 + _A53 * k3 + _A54 * k4))
            k6 = rhs(
                y + h_try * (_A61 * k1 + _A62 * k2 + _A63 * k3 + _A64 * k4 + _A65 * k5)
            )
            y5 = y + h_try * (_B1 * k1 + _B3 * k3 + _B4 * k4 + _B5 * k5 + _B6 * k6)
            k7 = rhs(y5)
            err = h_try * (
                _E1 * k1 + _E3 * k3 + _E4 * k4 + _E5 * k5 + _E6 * k6 + _E7 * k7
            )
            scale = atol + rtol * np.maximum(np.abs(y), np.abs(y5))
            ratio = float(np.max(np.abs(err) / scale))
            if ratio <= 1.0:
                t = target if clipped and h_try == target - t else t + h_try
                y = y5
                k1 = k7
                accepted += 1
                if interval and accepted % interval == 0:
                    y = y / np.trace(y).real
                    k1 = rhs(y)
                grow = 0.9 * ratio ** (-0.2) if ratio > 0.0 else 5.0
                proposal = h_try * min(5.0, max(0.2, grow))
                h = max(proposal, h) if clipped else proposal
            else:
                h = h_try * min(1.0, max(0.2, 0.9 * ratio ** (-0.2)))
            max_steps -= 1
            if max_steps <= 0:
                raise StepSizeUnderflowError("step budget exhausted")
        out.append(snapshot(y))
    return out
