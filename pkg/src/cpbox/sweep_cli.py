"""Sweep engine and command-line driver.

Subcommands:

* ``simulate``       single (delta, gamma) point, full trajectory to CSV
* ``sweep-detuning`` time x detuning grid (gamma held fixed)
* ``sweep-damping``  time x damping grid (delta held fixed)
* ``compare``        closed-form vs integrator report over a grid
* ``validate``       invariant battery at the configured point

Configuration is a flat ``key = value`` text file overridable by
command-line flags of the same names; flags win.  An axis is written as
``start:stop:points`` (for example ``--gamma-over-lambda 0:0.1:21``); at most
one of delta / gamma may be an axis, matching the time x parameter layout of
the output.

Every run emits one flat CSV schema; missing values (for example the
residual outside ``--mode both``) are left as empty fields.  Rows are
ordered axis-major, time-minor and floats are printed with 17 significant
digits, so identical configurations produce byte-identical files no matter
how many workers computed them.  A ``#``-prefixed run manifest (config echo,
code version, wall time) is written next to the CSV as ``<out>.manifest``;
it lives outside the CSV so timing never perturbs the data bytes.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields, replace

import numpy as np

from . import __version__
from .closed_form import ClosedFormMode, joint_state
from .density import DensityMatrix
from .errors import CpboxError, InvalidParameterError, NumericalError
from .lindblad import IntegratorConfig, build_hamiltonian, evolve
from .metrics import MetricRow, metric_row
from .model import (
    FockTruncation,
    InitialState,
    ReducedParams,
    choose_truncation,
    coherent_amplitudes,
)

# Coupling in units of lambda for a junction-dominated device (C_g << C_J).
DEFAULT_G_OVER_LAMBDA = 1.0 / (2.0 * math.sqrt(2.0))

MODES = ("closed_printed", "closed_corrected", "lindblad", "both")

CSV_HEADER = (
    "t_scaled,delta_over_lambda,gamma_over_lambda,theta,nbar,mode,inversion,"
    "linear_entropy_raw,idempotency_defect,concurrence_2q,negativity,purity,"
    "mean_photons,trace_error,residual"
)

COMPARE_GATE = 1e-6

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2
EXIT_GATE = 3


@dataclass(frozen=True)
class AxisSpec:
    """Linearly spaced sweep axis."""

    start: float
    stop: float
    points: int

    def __post_init__(self):
        if self.points < 1:
            raise InvalidParameterError("axis needs at least one point")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.points)


def parse_axis_or_scalar(text: str):
    """Parse ``x`` as a scalar or ``start:stop:points`` as an axis."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise InvalidParameterError(f"axis spec {text!r} is not start:stop:points")
        try:
            return AxisSpec(float(parts[0]), float(parts[1]), int(parts[2]))
        except ValueError as exc:
            raise InvalidParameterError(f"bad axis spec {text!r}: {exc}") from exc
    try:
        return float(text)
    except ValueError as exc:
        raise InvalidParameterError(f"bad numeric value {text!r}: {exc}") from exc


@dataclass(frozen=True)
class SweepConfig:
    """Full description of one run; every record echoes its scalars."""

    nbar: float = 10.0
    theta: float = 0.0
    beta_phase: float = 0.0
    g_over_lambda: float = DEFAULT_G_OVER_LAMBDA
    delta_over_lambda: "float | AxisSpec" = 0.0
    gamma_over_lambda: "float | AxisSpec" = 0.0
    t_max: float = 25.0
    t_points: int = 500
    mode: str = "closed_corrected"
    n_max: int | None = None
    tail_tolerance: float = 1e-10
    integrator: str = "rk45"
    tol: float = 1e-9
    atol: float | None = None
    renorm_interval: int = 0
    out: str | None = None
    workers: int = 0
    seed: int | None = None  # reserved; the dynamics are deterministic

    def __post_init__(self):
        if self.mode not in MODES:
            raise InvalidParameterError(f"mode must be one of {MODES}")
        if self.t_points < 2:
            raise InvalidParameterError("t_points must be at least 2")
        if self.t_max < 0.0:
            raise InvalidParameterError("t_max must be nonnegative")
        if self.nbar < 0.0:
            raise InvalidParameterError("nbar must be nonnegative")
        if isinstance(self.delta_over_lambda, AxisSpec) and isinstance(
            self.gamma_over_lambda, AxisSpec
        ):
            raise InvalidParameterError(
                "at most one of delta_over_lambda / gamma_over_lambda may be an axis"
            )
        if self.workers < 0:
            raise InvalidParameterError("workers must be nonnegative")

    def integrator_config(self) -> IntegratorConfig:
        return IntegratorConfig(
            method=self.integrator,
            dt_or_tol=self.tol,
            renorm_interval=self.renorm_interval,
            atol=self.atol,
        )

    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.t_max, self.t_points)


@dataclass(frozen=True)
class SweepRecord:
    """One CSV row: config scalars, metrics, mode tag, optional residual."""

    t_scaled: float
    delta_over_lambda: float
    gamma_over_lambda: float
    theta: float
    nbar: float
    mode: str
    metrics: MetricRow
    residual: float | None = None


def _fmt(value) -> str:
    if value is None:
        return ""
    return format(float(value), ".17g")


def record_to_csv_line(rec: SweepRecord) -> str:
    m = rec.metrics
    cells = [
        _fmt(rec.t_scaled),
        _fmt(rec.delta_over_lambda),
        _fmt(rec.gamma_over_lambda),
        _fmt(rec.theta),
        _fmt(rec.nbar),
        rec.mode,
        _fmt(m.inversion),
        _fmt(m.linear_entropy_raw),
        _fmt(m.idempotency_defect),
        _fmt(m.concurrence_2q),
        _fmt(m.negativity),
        _fmt(m.purity),
        _fmt(m.mean_photons),
        _fmt(m.trace_error),
        _fmt(rec.residual),
    ]
    return ",".join(cells)


def grid_points(cfg: SweepConfig) -> list[tuple[float, float]]:
    """(delta, gamma) pairs in deterministic axis-major order."""
    if isinstance(cfg.delta_over_lambda, AxisSpec):
        return [(float(d), float(cfg.gamma_over_lambda)) for d in cfg.delta_over_lambda.values()]
    if isinstance(cfg.gamma_over_lambda, AxisSpec):
        return [(float(cfg.delta_over_lambda), float(g)) for g in cfg.gamma_over_lambda.values()]
    return [(float(cfg.delta_over_lambda), float(cfg.gamma_over_lambda))]


def _prepare_point(cfg: SweepConfig, delta: float, gamma: float):
    params = ReducedParams(g=cfg.g_over_lambda, delta=delta, gamma=gamma)
    if cfg.n_max is not None:
        trunc = FockTruncation(n_max=cfg.n_max, tail_tolerance=cfg.tail_tolerance)
    else:
        trunc = choose_truncation(math.sqrt(cfg.nbar), cfg.tail_tolerance)
    amps = coherent_amplitudes(math.sqrt(cfg.nbar), cfg.beta_phase, trunc)
    init = InitialState(theta=cfg.theta, field=amps)
    return params, trunc, init


def _closed_rows(cfg, params, init, mode_tag, times) -> list[SweepRecord]:
    mode = (
        ClosedFormMode.AS_PRINTED
        if mode_tag == "closed_printed"
        else ClosedFormMode.CORRECTED
    )
    rows = []
    for t in times:
        rho = joint_state(params, init, float(t), mode=mode, normalize=True)
        rows.append(
            SweepRecord(
                t_scaled=float(t),
                delta_over_lambda=params.delta,
                gamma_over_lambda=params.gamma,
                theta=cfg.theta,
                nbar=cfg.nbar,
                mode=mode_tag,
                metrics=metric_row(rho, float(t)),
            )
        )
    return rows


def _oracle_states(cfg, params, trunc, init, times) -> list[DensityMatrix]:
    ham = build_hamiltonian(params, trunc)
    return evolve(
        ham,
        params.gamma,
        init.joint_density(),
        float(times[-1]),
        cfg.integrator_config(),
        sample_times=times,
    )


def point_records(cfg: SweepConfig, delta: float, gamma: float) -> list[SweepRecord]:
    """All records of one grid point, time-minor, mode order fixed."""
    try:
        params, trunc, init = _prepare_point(cfg, delta, gamma)
        times = cfg.times()
        if cfg.mode in ("closed_printed", "closed_corrected"):
            return _closed_rows(cfg, params, init, cfg.mode, times)
        if cfg.mode == "lindblad":
            states = _oracle_states(cfg, params, trunc, init, times)
            return [
                SweepRecord(
                    t_scaled=float(t),
                    delta_over_lambda=delta,
                    gamma_over_lambda=gamma,
                    theta=cfg.theta,
                    nbar=cfg.nbar,
                    mode="lindblad",
                    metrics=metric_row(rho, float(t)),
                )
                for t, rho in zip(times, states)
            ]
        # both: corrected closed form against the integrator, residual filled in
        closed = [
            joint_state(params, init, float(t), mode=ClosedFormMode.CORRECTED)
            for t in times
        ]
        states = _oracle_states(cfg, params, trunc, init, times)
        rows: list[SweepRecord] = []
        for t, rho_c, rho_o in zip(times, closed, states):
            residual = float(np.max(np.abs(rho_c.data - rho_o.data)))
            for tag, rho in (("closed_corrected", rho_c), ("lindblad", rho_o)):
                rows.append(
                    SweepRecord(
                        t_scaled=float(t),
                        delta_over_lambda=delta,
                        gamma_over_lambda=gamma,
                        theta=cfg.theta,
                        nbar=cfg.nbar,
                        mode=tag,
                        metrics=metric_row(rho, float(t)),
                        residual=residual,
                    )
                )
        return rows
    except NumericalError as exc:
        raise type(exc)(
            f"grid point delta={delta:.6g} gamma={gamma:.6g}: {exc}"
        ) from exc


def _point_task(args) -> list[SweepRecord]:
    cfg, delta, gamma = args
    return point_records(cfg, delta, gamma)


def run_sweep(cfg: SweepConfig, stream=None) -> list[SweepRecord]:
    """Evaluate the whole grid and write CSV rows to ``stream`` (or cfg.out).

    Grid points are independent work units; with more than one worker they
    are distributed over a process pool, but the output order (axis-major,
    time-minor) and the bytes written do not depend on the worker count.
    """
    points = grid_points(cfg)
    if not points:
        raise InvalidParameterError("no grid points")
    t0 = time.monotonic()
    workers = cfg.workers if cfg.workers > 0 else (os.cpu_count() or 1)
    tasks = [(cfg, d, g) for d, g in points]
    if workers == 1 or len(tasks) == 1:
        per_point = [_point_task(task) for task in tasks]
    else:
        with ProcessPoolExecutor(max_workers=min(workers, len(tasks))) as pool:
            per_point = list(pool.map(_point_task, tasks, chunksize=1))
    records = [rec for batch in per_point for rec in batch]

    own_stream = stream is None and cfg.out is not None
    if own_stream:
        stream = open(cfg.out, "w", newline="")
    elif stream is None:
        stream = sys.stdout
    try:
        stream.write(CSV_HEADER + "\n")
        for rec in records:
            stream.write(record_to_csv_line(rec) + "\n")
    finally:
        if own_stream:
            stream.close()
    if cfg.out is not None:
        _write_manifest(cfg, len(records), time.monotonic() - t0)
    return records


def _write_manifest(cfg: SweepConfig, rows: int, wall_s: float) -> None:
    path = cfg.out + ".manifest"
    with open(path, "w") as fh:
        fh.write("# cpbox run manifest\n")
        fh.write(f"# version = {__version__}\n")
        fh.write(f"# wall_time_s = {wall_s:.3f}\n")
        fh.write(f"# rows = {rows}\n")
        for f in fields(cfg):
            value = getattr(cfg, f.name)
            if isinstance(value, AxisSpec):
                value = f"{value.start:g}:{value.stop:g}:{value.points}"
            fh.write(f"# {f.name} = {value}\n")


@dataclass(frozen=True)
class ComparePoint:
    """Aggregates of one grid point in a closed-form vs integrator comparison."""

    delta: float
    gamma: float
    max_residual: float
    printed_trace_deficit: float
    max_metric_delta: float


def compare_report(cfg: SweepConfig, stream=None) -> tuple[int, list[ComparePoint]]:
    """Closed-form vs integrator comparison over the configured grid.

    Per grid point: the max elementwise residual over all sample times, the
    worst trace deficit of the printed form, and the worst metric
    disagreement.  The exit code is 0 when every gamma = 0 point passes the
    1e-6 residual gate; residuals at gamma > 0 are expected (the closed form
    carries a secular approximation there) and are reported, not gated.
    """
    stream = stream or sys.stdout
    points = grid_points(cfg)
    if not points:
        raise InvalidParameterError("no grid points")
    times = cfg.times()
    results: list[ComparePoint] = []
    for delta, gamma in points:
        params, trunc, init = _prepare_point(cfg, delta, gamma)
        closed = [
            joint_state(params, init, float(t), mode=ClosedFormMode.CORRECTED)
            for t in times
        ]
        oracle = _oracle_states(cfg, params, trunc, init, times)
        residual = max(
            float(np.max(np.abs(c.data - o.data))) for c, o in zip(closed, oracle)
        )
        printed_deficit = max(
            joint_state(
                params, init, float(t), mode=ClosedFormMode.AS_PRINTED, normalize=False
            ).trace_deficit
            for t in times
        )
        metric_delta = 0.0
        for t, c, o in zip(times, closed, oracle):
            mc = metric_row(c, float(t))
            mo = metric_row(o, float(t))
            metric_delta = max(
                metric_delta,
                abs(mc.inversion - mo.inversion),
                abs(mc.idempotency_defect - mo.idempotency_defect),
                abs(mc.negativity - mo.negativity),
            )
        results.append(
            ComparePoint(delta, gamma, residual, printed_deficit, metric_delta)
        )

    stream.write("closed-form (corrected) vs integrator comparison\n")
    stream.write(
        f"{'delta':>12} {'gamma':>12} {'max|drho|':>12} "
        f"{'printed_tr_deficit':>20} {'max|dmetric|':>14}\n"
    )
    for r in results:
        stream.write(
            f"{r.delta:>12.6g} {r.gamma:>12.6g} {r.max_residual:>12.4e} "
            f"{r.printed_trace_deficit:>20.4e} {r.max_metric_delta:>14.4e}\n"
        )
    worst = sorted(results, key=lambda r: r.max_residual, reverse=True)[:3]
    stream.write("worst residuals:\n")
    for r in worst:
        stream.write(
            f"  delta={r.delta:.6g} gamma={r.gamma:.6g} max|drho|={r.max_residual:.4e}\n"
        )
    gate_points = [r for r in results if r.gamma == 0.0]
    gate_ok = all(r.max_residual <= COMPARE_GATE for r in gate_points)
    if gate_points:
        stream.write(
            f"gamma=0 gate ({COMPARE_GATE:.0e}): {'PASS' if gate_ok else 'FAIL'}\n"
        )
    else:
        stream.write("gamma=0 gate: no gamma=0 points in grid, trivially PASS\n")
    if cfg.out is not None:
        with open(cfg.out, "w", newline="") as fh:
            fh.write(
                "delta_over_lambda,gamma_over_lambda,max_residual,"
                "printed_trace_deficit,max_metric_delta\n"
            )
            for r in results:
                fh.write(
                    f"{_fmt(r.delta)},{_fmt(r.gamma)},{_fmt(r.max_residual)},"
                    f"{_fmt(r.printed_trace_deficit)},{_fmt(r.max_metric_delta)}\n"
                )
    return (EXIT_OK if gate_ok else EXIT_GATE), results


def validate_point(cfg: SweepConfig, stream=None) -> int:
    """Invariant battery at the configured (scalar) grid point."""
    from .model import rabi_frequency

    stream = stream or sys.stdout
    pts = grid_points(cfg)
    if len(pts) != 1:
        raise InvalidParameterError("validate expects a single grid point, not an axis")
    delta, gamma = pts[0]
    params, trunc, init = _prepare_point(cfg, delta, gamma)
    checks: list[tuple[str, bool, str]] = []

    n = np.arange(0, min(trunc.n_max, 40))
    mu = rabi_frequency(params, n)
    mirrored = ReducedParams(params.g, -params.delta, params.gamma)
    checks.append(
        (
            "mu monotone and even in delta",
            bool(np.all(np.diff(mu) > 0.0) if params.g > 0 else np.all(np.diff(mu) >= 0.0))
            and bool(np.allclose(mu, rabi_frequency(mirrored, n), rtol=0, atol=0)),
            f"mu_0={mu[0]:.6g}",
        )
    )

    b = init.field.amplitudes
    ref = [
        math.exp(-0.5 * init.field.nbar)
        * init.field.alpha_abs**k
        / math.sqrt(math.factorial(k))
        for k in range(min(21, len(b)))
    ]
    amp_ok = all(
        abs(abs(b[k]) - ref[k]) <= 1e-9 * max(ref[k], 1e-300)
        or abs(abs(b[k]) - ref[k]) < 1e-15
        for k in range(len(ref))
    )
    checks.append(("amplitudes match direct formula", amp_ok, f"n_max={trunc.n_max}"))

    ham = build_hamiltonian(params, trunc)
    eig_ok = True
    for k in range(min(trunc.n_max, 30)):
        block = ham.matrix[np.ix_([2 * k, 2 * (k + 1) + 1], [2 * k, 2 * (k + 1) + 1])]
        ev = np.linalg.eigvalsh(block)
        target = rabi_frequency(params, k)
        if abs(ev[0] + target) > 1e-12 or abs(ev[1] - target) > 1e-12:
            eig_ok = False
            break
    checks.append(("hamiltonian block eigenvalues are +-mu_n", eig_ok, ""))

    short_times = np.linspace(0.0, min(cfg.t_max, 5.0), 21)
    states = evolve(
        ham,
        gamma,
        init.joint_density(),
        float(short_times[-1]),
        cfg.integrator_config(),
        sample_times=short_times,
    )
    tr_err = max(abs(s.trace() - 1.0) for s in states)
    herm = max(s.hermiticity_defect() for s in states)
    lo = min(s.min_eigenvalue() for s in states)
    checks.append(
        (
            "trajectory conservation (trace/herm/positivity)",
            tr_err < 1e-8 and herm < 1e-10 and lo > -1e-8,
            f"trace_err={tr_err:.2e} herm={herm:.2e} min_eig={lo:.2e}",
        )
    )

    free_params = ReducedParams(params.g, params.delta, 0.0)
    free_states = evolve(
        build_hamiltonian(free_params, trunc),
        0.0,
        init.joint_density(),
        float(short_times[-1]),
        cfg.integrator_config(),
        sample_times=short_times,
    )
    residual = max(
        float(
            np.max(
                np.abs(
                    joint_state(free_params, init, float(t)).data - s.data
                )
            )
        )
        for t, s in zip(short_times, free_states)
    )
    checks.append(
        (
            "closed form matches integrator at gamma=0",
            residual <= COMPARE_GATE,
            f"max|drho|={residual:.2e}",
        )
    )

    ok = True
    for name, passed, detail in checks:
        ok &= passed
        tail = f" ({detail})" if detail else ""
        stream.write(f"{'PASS' if passed else 'FAIL'}: {name}{tail}\n")
    return EXIT_OK if ok else EXIT_NUMERICAL


CONFIG_KEYS = {f.name for f in fields(SweepConfig)}


def load_config_file(path: str) -> dict:
    """Flat ``key = value`` file; '#' starts a comment, blank lines ignored."""
    values: dict = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise InvalidParameterError(f"{path}:{lineno}: expected key = value")
            key, _, text = line.partition("=")
            key = key.strip().replace("-", "_")
            text = text.strip()
            if key not in CONFIG_KEYS:
                raise InvalidParameterError(f"{path}:{lineno}: unknown key {key!r}")
            values[key] = _coerce_config_value(key, text)
    return values


def _coerce_config_value(key: str, text: str):
    if key in ("delta_over_lambda", "gamma_over_lambda"):
        return parse_axis_or_scalar(text)
    if key in ("t_points", "renorm_interval", "workers", "n_max", "seed"):
        return int(text)
    if key in ("mode", "integrator", "out"):
        return text
    if key == "atol":
        return None if text.lower() == "none" else float(text)
    return float(text)


def _add_common_options(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--config", help="flat key = value config file")
    sp.add_argument("--nbar", type=float)
    sp.add_argument("--theta", type=float)
    sp.add_argument("--beta-phase", type=float, dest="beta_phase")
    sp.add_argument("--g-over-lambda", type=float, dest="g_over_lambda")
    sp.add_argument(
        "--delta-over-lambda", dest="delta_over_lambda",
        help="scalar or start:stop:points axis",
    )
    sp.add_argument(
        "--gamma-over-lambda", dest="gamma_over_lambda",
        help="scalar or start:stop:points axis",
    )
    sp.add_argument("--t-max", type=float, dest="t_max")
    sp.add_argument("--t-points", type=int, dest="t_points")
    sp.add_argument("--mode", choices=MODES)
    sp.add_argument("--n-max", type=int, dest="n_max")
    sp.add_argument("--tail-tolerance", type=float, dest="tail_tolerance")
    sp.add_argument("--integrator", choices=("rk45", "rk4"))
    sp.add_argument("--tol", type=float, help="local tolerance (rk45) or step (rk4)")
    sp.add_argument("--atol", type=float)
    sp.add_argument("--renorm-interval", type=int, dest="renorm_interval")
    sp.add_argument("--out", help="output CSV path (default stdout)")
    sp.add_argument("--workers", type=int, help="0 = available parallelism")
    sp.add_argument("--seed", type=int, help="reserved, dynamics are deterministic")


def build_config(args: argparse.Namespace) -> SweepConfig:
    values: dict = {}
    if args.config:
        values.update(load_config_file(args.config))
    for key in CONFIG_KEYS:
        flag = getattr(args, key, None)
        if flag is not None:
            if key in ("delta_over_lambda", "gamma_over_lambda") and isinstance(flag, str):
                flag = parse_axis_or_scalar(flag)
            values[key] = flag
    return SweepConfig(**values)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="cpbox",
        description="charge qubit + phase-damped cavity simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, descr in (
        ("simulate", "single grid point, full trajectory"),
        ("sweep-detuning", "time x detuning sweep (gamma fixed)"),
        ("sweep-damping", "time x damping sweep (delta fixed)"),
        ("compare", "closed form vs integrator report"),
        ("validate", "invariant battery at the configured point"),
    ):
        sp = sub.add_parser(name, help=descr)
        _add_common_options(sp)

    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
        if args.command == "simulate":
            if isinstance(cfg.delta_over_lambda, AxisSpec) or isinstance(
                cfg.gamma_over_lambda, AxisSpec
            ):
                raise InvalidParameterError("simulate expects scalar delta and gamma")
            run_sweep(cfg)
            return EXIT_OK
        if args.command == "sweep-detuning":
            if not isinstance(cfg.delta_over_lambda, AxisSpec):
                if getattr(args, "delta_over_lambda", None) is not None:
                    raise InvalidParameterError(
                        "sweep-detuning expects an axis for delta_over_lambda"
                    )
                cfg = replace(cfg, delta_over_lambda=AxisSpec(0.0, 10.0, 21))
            if isinstance(cfg.gamma_over_lambda, AxisSpec):
                raise InvalidParameterError("gamma must be scalar in sweep-detuning")
            run_sweep(cfg)
            return EXIT_OK
        if args.command == "sweep-damping":
            if not isinstance(cfg.gamma_over_lambda, AxisSpec):
                if getattr(args, "gamma_over_lambda", None) is not None:
                    raise InvalidParameterError(
                        "sweep-damping expects an axis for gamma_over_lambda"
                    )
                cfg = replace(cfg, gamma_over_lambda=AxisSpec(0.0, 0.1, 21))
            if isinstance(cfg.delta_over_lambda, AxisSpec):
                raise InvalidParameterError("delta must be scalar in sweep-damping")
            run_sweep(cfg)
            return EXIT_OK
        if args.command == "compare":
            code, _ = compare_report(cfg)
            return code
        if args.command == "validate":
            return validate_point(cfg)
        raise InvalidParameterError(f"unknown command {args.command!r}")
    except (InvalidParameterError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except CpboxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
