"""Command-line front end: figure replication, sweeps, curves and verification.

Every data-producing command writes a CSV (or a single JSON with ``--format
json``) plus a JSON metadata sidecar, and renders a PNG next to the data when
``--plot`` is given.  Outputs are deterministic functions of the command line:
re-running an identical invocation reproduces byte-identical files.
``QDL_THREADS`` caps the worker threads used by ``sweep``.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .core import BlochVector, SystemParams
from .correlators import classify_statistics, g2, g2_strong
from .dynamics import (
    affine_bloch_sums,
    paper_dipole_moment,
    paper_inversion,
    steady_state,
)
from .figures import FIGURE_RANGE, figure_data
from .report import (
    render_line,
    render_surface,
    sidecar,
    sidecar_path,
    write_csv,
    write_json,
)
from .spectrum import decompose, evaluate, mollow_strong, peaks
from .squeezing import quadrature_variances, squeezing_scan
from .verify import run_verify


@dataclass(frozen=True)
class GridSpec:
    """Scalar or lo:hi:count range parsed from a parameter flag."""

    start: float
    stop: float
    count: int

    @property
    def is_scalar(self) -> bool:
        return self.count == 1

    def values(self) -> np.ndarray:
        if self.is_scalar:
            return np.array([self.start])
        return np.linspace(self.start, self.stop, self.count)

    def meta(self) -> dict | float:
        if self.is_scalar:
            return self.start
        return {"start": self.start, "stop": self.stop, "count": self.count}


def parse_grid(text: str) -> GridSpec:
    parts = text.split(":")
    if len(parts) == 1:
        value = float(parts[0])
        return GridSpec(value, value, 1)
    if len(parts) == 3:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        if count < 2:
            raise argparse.ArgumentTypeError("grid count must be at least 2")
        if not start < stop:
            raise argparse.ArgumentTypeError("grid range must be ordered (start < stop)")
        return GridSpec(start, stop, count)
    raise argparse.ArgumentTypeError(f"expected a number or start:stop:count, got {text!r}")


def _thread_count() -> int:
    env = os.environ.get("QDL_THREADS", "").strip()
    if env:
        return max(1, int(env))
    return min(8, os.cpu_count() or 1)


def _scalar(spec: GridSpec, name: str) -> float:
    if not spec.is_scalar:
        raise ValueError(f"--{name} must be a scalar for this command")
    return spec.start


def _params_from(args) -> SystemParams:
    return SystemParams(
        omega=_scalar(args.omega, "omega"),
        gamma=_scalar(args.gamma, "gamma"),
        nbar=_scalar(args.nbar, "nbar"),
    )


def _emit(args, command, header, columns, params_meta, grids_meta, formula_path, plot=None):
    """Write CSV (+sidecar) or single JSON, optionally render a PNG."""
    out = Path(args.out) if args.out else Path(f"{command}.csv")
    meta = sidecar(command, params_meta, grids_meta, formula_path)
    if args.format == "json":
        out = out.with_suffix(".json")
        payload = dict(meta)
        payload["columns"] = list(header)
        payload["rows"] = [
            [float(col[i]) for col in columns] for i in range(len(columns[0]))
        ]
        write_json(out, payload)
    else:
        write_csv(out, header, columns)
        write_json(sidecar_path(out), meta)
    if args.plot and plot is not None:
        plot(out.with_suffix(".png"))
    print(f"wrote {out}")
    return 0


def _cmd_steady(args) -> int:
    params = _params_from(args)
    ss = steady_state(params)
    header = [
        "Omega",
        "gamma",
        "nbar",
        "inversion_w",
        "rho_aa",
        "dipole_ss",
        "inversion_w_published",
        "dipole_ss_published",
    ]
    columns = [
        np.array([v])
        for v in (
            params.omega,
            params.gamma,
            params.nbar,
            ss.inversion_w,
            ss.rho_aa,
            ss.bloch.sp.real,
            paper_inversion(params),
            paper_dipole_moment(params),
        )
    ]
    params_meta = {"omega": params.omega, "gamma": params.gamma, "nbar": params.nbar}
    return _emit(args, "steady", header, columns, params_meta, {}, _path_name(args))


def _path_name(args) -> str:
    return "paper" if getattr(args, "strict_paper", False) else "corrected"


def _cmd_dynamics(args) -> int:
    params = _params_from(args)
    t_max = args.tau_max
    times = np.linspace(0.0, t_max, args.points)
    init = BlochVector(sm=0j, sp=0j, sz=1.0)  # start from the excited state
    sm_sum, _, sz_sum = affine_bloch_sums(params, init.as_array(), 1.0)
    sm_t = sm_sum.value(times)
    sz_t = sz_sum.value(times).real
    header = ["gamma*t", "Re_sm", "Im_sm", "sz"]
    columns = [times * params.gamma, sm_t.real, sm_t.imag, sz_t]
    params_meta = {
        "omega": params.omega,
        "gamma": params.gamma,
        "nbar": params.nbar,
        "initial_state": "excited",
    }
    grids_meta = {"gamma*t": {"start": 0.0, "stop": t_max * params.gamma, "count": args.points}}

    def plot(png):
        render_line(
            png,
            times * params.gamma,
            [("Re <sigma_m>", sm_t.real), ("<sigma_z>", sz_t)],
            "gamma*t",
            "expectation value",
            f"Transient from the excited state, Omega={params.omega:g}, nbar={params.nbar:g}",
        )

    return _emit(args, "dynamics", header, columns, params_meta, grids_meta, _path_name(args), plot)


def _cmd_spectrum(args) -> int:
    params = _params_from(args)
    window = args.omega_window if args.omega_window is not None else 2.0 * params.omega + 10.0 * params.gamma
    freqs = np.linspace(-window, window, args.points)
    decomp = decompose(params)
    if args.strict_paper:
        values = np.asarray(mollow_strong(params, freqs))
        column_name = "S_strong_drive [1/gamma]"
    else:
        values = np.asarray(evaluate(decomp, freqs))
        column_name = "S_inc [1/gamma]"
    header = ["omega/gamma", column_name]
    columns = [freqs / params.gamma, values]
    params_meta = {
        "omega": params.omega,
        "gamma": params.gamma,
        "nbar": params.nbar,
        "derived": {"coherent_weight": decomp.coherent_weight},
    }
    grids_meta = {"omega": {"start": -window, "stop": window, "count": args.points}}

    def plot(png):
        render_line(
            png,
            freqs / params.gamma,
            [(column_name, values)],
            "omega/gamma",
            "S(omega) [1/gamma]",
            f"Emission spectrum, Omega={params.omega:g}, nbar={params.nbar:g}",
        )

    return _emit(args, "spectrum", header, columns, params_meta, grids_meta, _path_name(args), plot)


def _cmd_g2(args) -> int:
    params = _params_from(args)
    taus = np.linspace(0.0, args.tau_max, args.points)
    curve = g2(params, taus)
    strong = np.asarray(g2_strong(params, taus))
    stats = classify_statistics(curve)
    header = ["gamma*tau", "g2", "g2_strong_drive"]
    columns = [taus * params.gamma, curve.values, strong]
    params_meta = {
        "omega": params.omega,
        "gamma": params.gamma,
        "nbar": params.nbar,
        "derived": {"antibunched": stats.antibunched},
    }
    grids_meta = {"gamma*tau": {"start": 0.0, "stop": args.tau_max * params.gamma, "count": args.points}}

    def plot(png):
        render_line(
            png,
            taus * params.gamma,
            [("g2", curve.values), ("strong-drive limit", strong)],
            "gamma*tau",
            "g2(tau)",
            f"Intensity correlation, Omega={params.omega:g}, nbar={params.nbar:g}",
        )

    return _emit(args, "g2", header, columns, params_meta, grids_meta, _path_name(args), plot)


def _cmd_squeezing(args) -> int:
    gamma = _scalar(args.gamma, "gamma")
    nbar = _scalar(args.nbar, "nbar")
    window = args.omega_window if args.omega_window is not None else 1.5 * gamma
    path = _path_name(args)
    omegas = np.linspace(0.0, window, args.points)
    var_x = np.empty(args.points)
    var_y = np.empty(args.points)
    for i, om in enumerate(omegas):
        rep = quadrature_variances(SystemParams(om, gamma, nbar), path)
        var_x[i] = rep.var_x_normal
        var_y[i] = rep.var_y_normal
    pockets = squeezing_scan(nbar, (0.0, window), args.points, gamma, path)
    header = ["Omega/gamma", "var_x_normal", "var_y_normal"]
    columns = [omegas / gamma, var_x, var_y]
    params_meta = {
        "gamma": gamma,
        "nbar": nbar,
        "derived": {"squeezing_pockets": [list(p) for p in pockets]},
    }
    grids_meta = {"Omega": {"start": 0.0, "stop": window, "count": args.points}}

    def plot(png):
        render_line(
            png,
            omegas / gamma,
            [("var_x (normal order)", var_x), ("var_y (normal order)", var_y)],
            "Omega/gamma",
            "normal-ordered variance",
            f"Quadrature squeezing scan, nbar={nbar:g} ({path})",
        )

    return _emit(args, "squeezing", header, columns, params_meta, grids_meta, path, plot)


def _cmd_figure(args) -> int:
    if args.number not in FIGURE_RANGE:
        print(f"error: figure number must be 1..9, got {args.number}", file=sys.stderr)
        return 2
    gamma = _scalar(args.gamma, "gamma")
    data = figure_data(args.number, strict_paper=args.strict_paper, gamma=gamma)
    out_default = Path(f"{data.name}.csv")
    if args.out:
        out_default = Path(args.out)
    args.out = str(out_default)

    def plot(png):
        if data.plot_kind == "surface":
            nx, ny = data.surface_shape
            x = np.unique(data.columns[0])
            y = np.unique(data.columns[1])
            z = np.asarray(data.columns[2]).reshape(nx, ny)
            render_surface(png, x, y, z, data.xlabel, data.ylabel, data.title)
        else:
            render_line(
                png,
                data.columns[0],
                list(zip(data.header[1:], data.columns[1:])),
                data.xlabel,
                data.ylabel,
                data.title,
            )

    return _emit(
        args,
        data.name,
        data.header,
        data.columns,
        data.params,
        data.grids,
        _path_name(args),
        plot,
    )


_OBSERVABLES = {
    "inversion_w": lambda p, path: (
        paper_inversion(p) if path == "paper" else steady_state(p).inversion_w
    ),
    "rho_aa": lambda p, path: (
        0.5 * (1.0 + paper_inversion(p)) if path == "paper" else steady_state(p).rho_aa
    ),
    "dipole_ss": lambda p, path: (
        paper_dipole_moment(p) if path == "paper" else float(steady_state(p).bloch.sp.real)
    ),
    "var_x": lambda p, path: quadrature_variances(p, path).var_x_normal,
    "var_y": lambda p, path: quadrature_variances(p, path).var_y_normal,
    "coherent_weight": lambda p, path: decompose(p).coherent_weight,
    "central_fwhm": lambda p, path: _central_fwhm(p),
}


def _central_fwhm(params: SystemParams) -> float:
    window = 2.0 * params.omega + 10.0 * params.gamma
    found = peaks(decompose(params), (-window, window))
    if not found:
        return math.nan
    central = min(found, key=lambda pk: abs(pk.center))
    return central.fwhm


def _cmd_sweep(args) -> int:
    if args.observable not in _OBSERVABLES:
        print(
            f"error: unknown observable {args.observable!r}; "
            f"choose from {sorted(_OBSERVABLES)}",
            file=sys.stderr,
        )
        return 2
    gamma = _scalar(args.gamma, "gamma")
    path = _path_name(args)
    func = _OBSERVABLES[args.observable]
    omegas = args.omega.values()
    nbars = args.nbar.values()
    points = [
        SystemParams(om, gamma, nb) for om in omegas for nb in nbars
    ]  # lexicographic row order: omega outer, nbar inner
    workers = _thread_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(lambda p: func(p, path), points))
    else:
        values = [func(p, path) for p in points]
    header = ["Omega", "gamma", "nbar", args.observable]
    columns = [
        np.array([p.omega for p in points]),
        np.array([p.gamma for p in points]),
        np.array([p.nbar for p in points]),
        np.array(values, dtype=float),
    ]
    params_meta = {"gamma": gamma, "observable": args.observable}
    grids_meta = {"Omega": args.omega.meta(), "nbar": args.nbar.meta()}

    def plot(png):
        if args.nbar.is_scalar or args.omega.is_scalar:
            x = columns[0] if args.nbar.is_scalar else columns[2]
            xlabel = "Omega" if args.nbar.is_scalar else "nbar"
            render_line(png, x, [(args.observable, columns[3])], xlabel, args.observable,
                        f"Sweep of {args.observable}")
        else:
            z = columns[3].reshape(len(omegas), len(nbars))
            render_surface(png, omegas, nbars, z, "Omega", "nbar",
                           f"Sweep of {args.observable}")

    return _emit(args, "sweep", header, columns, params_meta, grids_meta, path, plot)


def _cmd_verify(args) -> int:
    report = run_verify(quick=args.quick, strict_paper=args.strict_paper)
    for line in report.lines():
        print(line)
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qdl",
        description=(
            "Driven two-level atom in a thermal reservoir: steady states, "
            "transients, emission spectra, intensity correlations, squeezing."
        ),
    )
    parser.add_argument("--version", action="version", version=f"qdl {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, tau_default=None, points_default=201):
        p.add_argument("--omega", type=parse_grid, default=GridSpec(1.0, 1.0, 1),
                       help="drive amplitude (units of gamma); scalar or start:stop:count")
        p.add_argument("--gamma", type=parse_grid, default=GridSpec(1.0, 1.0, 1),
                       help="atomic damping rate (canonical 1)")
        p.add_argument("--nbar", type=parse_grid, default=GridSpec(0.0, 0.0, 1),
                       help="reservoir mean photon number; scalar or start:stop:count")
        if tau_default is not None:
            p.add_argument("--tau-max", type=float, default=tau_default,
                           help="time window in units of 1/gamma")
        p.add_argument("--omega-window", type=float, default=None,
                       help="half-width of the frequency/drive window")
        p.add_argument("--points", type=int, default=points_default,
                       help="number of grid points")
        p.add_argument("--out", type=str, default=None, help="output data path")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--plot", action="store_true", help="render a PNG next to the data")
        p.add_argument("--strict-paper", action="store_true",
                       help="use the as-published closed-form variants where they "
                            "disagree with the master-equation solution")

    p_steady = sub.add_parser("steady", help="steady-state observables at one parameter point")
    add_common(p_steady)
    p_steady.set_defaults(func=_cmd_steady)

    p_dyn = sub.add_parser("dynamics", help="transient from the excited state")
    add_common(p_dyn, tau_default=10.0)
    p_dyn.set_defaults(func=_cmd_dynamics)

    p_spec = sub.add_parser("spectrum", help="emission spectrum S(omega)")
    add_common(p_spec, points_default=801)
    p_spec.set_defaults(func=_cmd_spectrum)

    p_g2 = sub.add_parser("g2", help="normalized intensity correlation g2(tau)")
    add_common(p_g2, tau_default=20.0, points_default=801)
    p_g2.set_defaults(func=_cmd_g2)

    p_sq = sub.add_parser("squeezing", help="quadrature-variance scan over drive amplitude")
    add_common(p_sq, points_default=601)
    p_sq.set_defaults(func=_cmd_squeezing)

    p_fig = sub.add_parser("figure", help="replicate one of the nine report figures")
    p_fig.add_argument("number", type=int, help="figure number, 1..9")
    add_common(p_fig)
    p_fig.set_defaults(func=_cmd_figure)

    p_ver = sub.add_parser("verify", help="run the analytic-vs-oracle verification suite")
    p_ver.add_argument("--quick", action="store_true", help="subset grid, runs in a few seconds")
    p_ver.add_argument("--strict-paper", action="store_true",
                       help="include per-nbar comparison of the published inversion formula")
    p_ver.set_defaults(func=_cmd_verify)

    p_sweep = sub.add_parser("sweep", help="tabulate a scalar observable over a parameter grid")
    p_sweep.add_argument("observable", type=str,
                         help=f"one of {sorted(_OBSERVABLES)}")
    add_common(p_sweep)
    p_sweep.set_defaults(func=_cmd_sweep)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
