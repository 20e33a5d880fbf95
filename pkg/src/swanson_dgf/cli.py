"""Command-line front end: figure presets, parameter sweeps, validation.

Every data-producing command writes CSV (12 significant digits, ``.``
decimal separator, LF line endings) with the run parameters echoed as
``#`` comment lines, so identical configurations regenerate identical
bytes.  Exit codes: 0 ok, 1 usage, 2 numeric-domain error, 3 validation
failure.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from . import __version__, fock_oracle, iho, model_space, response
from .errors import SwansonError

GRID_GUARD = 10_000_000

_ARG_DEFAULTS = {
    "omega": 1.0, "alpha": 0.0, "gamma": 0.0, "b0": 1.0, "abs_omega": None,
    "V": 0.26, "W": 1.0, "epsilon": 0.05, "t0": 0.0, "beta": None,
    "t_min": 0.0, "t_max": 20.0, "t_steps": 201,
    "T_min": 0.5, "T_max": 5.0, "T_steps": 20,
    "mode": "both", "exact_method": "resummed", "drive_variant": "printed",
    "out": "out.csv",
}


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors; the contract here is 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


@dataclass
class RunConfig:
    command: str
    omega: float = 1.0
    alpha: float = 0.0
    gamma: float = 0.0
    b0: float = 1.0
    abs_omega: Optional[float] = None
    V: float = 0.26
    W: float = 1.0
    epsilon: float = 0.05
    t0: float = 0.0
    beta: Optional[float] = None
    t_min: float = 0.0
    t_max: float = 20.0
    t_steps: int = 201
    T_min: float = 0.5
    T_max: float = 5.0
    T_steps: int = 20
    mode: str = "both"
    exact_method: str = "resummed"
    drive_variant: str = "printed"
    out: str = "out.csv"

    def validate(self):
        if self.t_steps < 1 or self.T_steps < 1:
            raise ValueError("grid steps must be >= 1")
        if self.t_steps * self.T_steps > GRID_GUARD:
            raise ValueError("grid larger than the 1e7-point guard")

    def t_grid(self) -> np.ndarray:
        return np.linspace(self.t_min, self.t_max, self.t_steps)

    def temp_grid(self) -> np.ndarray:
        return np.linspace(self.T_min, self.T_max, self.T_steps)

    def params(self) -> model_space.SwansonParams:
        return model_space.SwansonParams(self.omega, self.alpha, self.gamma,
                                         self.b0)

    def drive(self) -> response.DriveParams:
        return response.DriveParams(V=self.V, W=self.W, epsilon=self.epsilon,
                                    t0=self.t0)


def _fmt(x: float) -> str:
    return f"{x:.11e}"


def _write_csv(path: str, header_lines: Sequence[str],
               column_names: Sequence[str],
               rows: Iterable[Sequence[float]]):
    """Atomic CSV write; the partial file is removed on any failure."""
    tmp = path + ".tmp"
    try:
        with open(tmp, "w", newline="") as fh:
            for line in header_lines:
                fh.write(f"# {line}\n")
            fh.write(",".join(column_names) + "\n")
            for row in rows:
                fh.write(",".join(_fmt(v) for v in row) + "\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _worker_count() -> int:
    raw = os.environ.get("SWANSON_DGF_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _pmap(func: Callable, items: list) -> list:
    """Map over grid points with an optional process pool.

    Results always come back in submission order, so the CSV layout is
    independent of worker scheduling.
    """
    workers = _worker_count()
    if workers == 1 or len(items) < 4 * workers:
        return [func(it) for it in items]
    chunk = max(1, len(items) // (8 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items, chunksize=chunk))


def _split(path: str, suffix: str) -> str:
    root, ext = os.path.splitext(path)
    return f"{root}_{suffix}{ext or '.csv'}"


# (omega, alpha, gamma) with an exact Omega = 1, Region I, nontrivial map
_PRESET_REGION1 = (0.6, -0.4, 0.4)


def _region1_preset_config(cfg: RunConfig):
    cfg.omega, cfg.alpha, cfg.gamma = _PRESET_REGION1
    return model_space.classify_region(cfg.params())


# ---------------------------------------------------------------- commands


def _cmd_fig1(cfg: RunConfig) -> int:
    cfg.V, cfg.W, cfg.epsilon = 0.26, 1.0, 0.05
    beta = 1.0 if cfg.beta is None else cfg.beta
    eff = _region1_preset_config(cfg)
    drive = cfg.drive()
    ts = cfg.t_grid()
    x2e, p2e = response.exact_moments_grid(drive, eff, beta, ts,
                                           method=cfg.exact_method)
    lin = [response.moments_linear_ex1(drive, eff, beta, t) for t in ts]
    header = [
        f"preset fig1: driven oscillator moments, exact ({cfg.exact_method}) vs linear",
        f"omega={cfg.omega} alpha={cfg.alpha} gamma={cfg.gamma} b0={cfg.b0}",
        f"V={cfg.V} W={cfg.W} epsilon={cfg.epsilon} beta={beta}",
        f"t_min={cfg.t_min} t_max={cfg.t_max} t_steps={cfg.t_steps}",
        "units: x2 in btilde^2, p2 in hbar^2/btilde^2",
    ]
    cols = ["t", "exact_re", "exact_im", "linear_re", "linear_im"]
    _write_csv(_split(cfg.out, "x2"), header, cols,
               [(t, xe, 0.0, m.x2, 0.0) for t, xe, m in zip(ts, x2e, lin)])
    _write_csv(_split(cfg.out, "p2"), header, cols,
               [(t, pe, 0.0, m.p2, 0.0) for t, pe, m in zip(ts, p2e, lin)])
    return 0


def _moments_vs_temperature(cfg: RunConfig, which: str) -> int:
    """Shared body of the fig2/fig3 presets: (t, T) sweeps at two V values."""
    cfg.W = 1.0
    eff = _region1_preset_config(cfg)
    ts = cfg.t_grid()
    temps = cfg.temp_grid()
    for v_val in (0.16, 0.26):
        drive = response.DriveParams(V=v_val, W=cfg.W, epsilon=cfg.epsilon,
                                     t0=cfg.t0)
        header = [
            f"preset {which}: moments over (t, T) at V={v_val}",
            f"omega={cfg.omega} alpha={cfg.alpha} gamma={cfg.gamma} b0={cfg.b0}",
            f"V={v_val} W={cfg.W} "
            + (f"epsilon={cfg.epsilon}" if which == "fig2" else f"t0={cfg.t0}"),
            f"t grid [{cfg.t_min}, {cfg.t_max}] x {cfg.t_steps}; "
            f"T grid [{cfg.T_min}, {cfg.T_max}] x {cfg.T_steps}",
            "units: x2 in btilde^2, p2 in hbar^2/btilde^2",
        ]
        tag = f"V{v_val:.2f}".replace("0.", "0")
        if which == "fig2":
            cols = ["t", "T", "exact_re", "exact_im", "linear_re", "linear_im"]
            rows_x2, rows_p2 = [], []
            for temp in temps:
                beta = 1.0 / temp
                x2e, p2e = response.exact_moments_grid(
                    drive, eff, beta, ts, method=cfg.exact_method)
                for t, xe, pe in zip(ts, x2e, p2e):
                    m = response.moments_linear_ex1(drive, eff, beta, t)
                    rows_x2.append((t, temp, xe, 0.0, m.x2, 0.0))
                    rows_p2.append((t, temp, pe, 0.0, m.p2, 0.0))
        else:
            cols = ["t", "T", "linear_re", "linear_im"]
            pts = [(t, temp) for temp in temps for t in ts]

            def one(pt, _drive=drive, _eff=eff):
                t, temp = pt
                m = response.moments_linear_ex2(_drive, _eff, 1.0 / temp, t)
                return m.x2, m.p2

            vals = _pmap(one, pts)
            rows_x2 = [(t, temp, v[0], 0.0) for (t, temp), v in zip(pts, vals)]
            rows_p2 = [(t, temp, v[1], 0.0) for (t, temp), v in zip(pts, vals)]
        _write_csv(_split(cfg.out, f"{tag}_x2"), header, cols, rows_x2)
        _write_csv(_split(cfg.out, f"{tag}_p2"), header, cols, rows_p2)
    return 0


def _cmd_fig2(cfg: RunConfig) -> int:
    cfg.epsilon = 0.05
    return _moments_vs_temperature(cfg, "fig2")


def _cmd_fig3(cfg: RunConfig) -> int:
    cfg.t0 = 0.0
    return _moments_vs_temperature(cfg, "fig3")


def _cmd_fig4(cfg: RunConfig) -> int:
    abs_om = 2.0 * math.pi if cfg.abs_omega is None else cfg.abs_omega
    t_lo = 1.1 * abs_om / (2.0 * math.pi)
    temps = np.linspace(t_lo, 10.0 * abs_om, 200) if cfg.T_steps == 20 \
        else np.linspace(cfg.T_min, cfg.T_max, cfg.T_steps)
    header = [
        "preset fig4: reduced thermodynamics of the inverted oscillator",
        f"abs_omega={abs_om}",
        f"T grid [{temps[0]}, {temps[-1]}] x {len(temps)}",
        "units: energies in the common energy unit, C_r dimensionless",
    ]
    rows = []
    for temp in temps:
        th = iho.thermo_reduced(abs_om, float(temp))
        rows.append((temp, th.U_r, th.C_r, th.n_r))
    _write_csv(cfg.out, header, ["T", "U_r", "C_r", "n_r"], rows)
    return 0


def _cmd_fig5(cfg: RunConfig) -> int:
    abs_om = 2.0 * math.pi if cfg.abs_omega is None else cfg.abs_omega
    drive = response.DriveParams(V=math.pi, W=math.pi, t0=0.0)
    ts = np.linspace(0.0, 0.5, 51) if (cfg.t_min, cfg.t_max, cfg.t_steps) == (0.0, 20.0, 201) \
        else cfg.t_grid()
    temps = np.linspace(1.05, 5.0, 40) if cfg.T_steps == 20 \
        else cfg.temp_grid()
    header = [
        "preset fig5: driven reduced occupation of the inverted oscillator",
        f"abs_omega={abs_om} W={drive.W} V={drive.V}",
        f"t grid [{ts[0]}, {ts[-1]}] x {len(ts)}; "
        f"T grid [{temps[0]}, {temps[-1]}] x {len(temps)}",
    ]
    pts = [(float(t), float(temp)) for temp in temps for t in ts]

    def one(pt):
        t, temp = pt
        n_bar, _ = iho.occupation_driven(drive, abs_om, t, 1.0 / temp)
        return n_bar.real, n_bar.imag

    vals = _pmap(one, pts)
    rows = [(t, temp, v[0], v[1]) for (t, temp), v in zip(pts, vals)]
    _write_csv(cfg.out, header, ["t", "T", "n_re", "n_im"], rows)
    return 0


def _cmd_example1(cfg: RunConfig) -> int:
    beta = 1.0 if cfg.beta is None else cfg.beta
    eff = model_space.classify_region(cfg.params())
    drive = cfg.drive()
    ts = cfg.t_grid()
    header = [
        "example1: adiabatically switched cosine drive, Region I",
        f"omega={cfg.omega} alpha={cfg.alpha} gamma={cfg.gamma} b0={cfg.b0}",
        f"V={cfg.V} W={cfg.W} epsilon={cfg.epsilon} beta={beta} "
        f"mode={cfg.mode} exact_method={cfg.exact_method}",
    ]
    cols = ["t"]
    blocks = []
    if cfg.mode in ("exact", "both"):
        x2e, p2e = response.exact_moments_grid(drive, eff, beta, ts,
                                               method=cfg.exact_method)
        cols += ["x2_exact_re", "x2_exact_im", "p2_exact_re", "p2_exact_im"]
        blocks.append(np.column_stack(
            [x2e, np.zeros_like(x2e), p2e, np.zeros_like(p2e)]))
    if cfg.mode in ("linear", "both"):
        lin = [response.moments_linear_ex1(drive, eff, beta, t) for t in ts]
        cols += ["x2_linear_re", "x2_linear_im", "p2_linear_re", "p2_linear_im"]
        blocks.append(np.array([[m.x2, 0.0, m.p2, 0.0] for m in lin]))
    if cfg.mode == "oracle":
        x2o, p2o = fock_oracle.example1_trajectory(eff, drive, beta, ts)
        cols += ["x2_oracle_re", "x2_oracle_im", "p2_oracle_re", "p2_oracle_im"]
        blocks.append(np.column_stack(
            [x2o, np.zeros_like(x2o), p2o, np.zeros_like(p2o)]))
    data = np.column_stack([ts] + blocks)
    _write_csv(cfg.out, header, cols, data)
    return 0


def _cmd_example2(cfg: RunConfig) -> int:
    beta = 1.0 if cfg.beta is None else cfg.beta
    eff = model_space.classify_region(cfg.params())
    drive = cfg.drive()
    ts = cfg.t_grid()
    header = [
        "example2: sharply switched drive via the time-dependent gauge",
        f"omega={cfg.omega} alpha={cfg.alpha} gamma={cfg.gamma} b0={cfg.b0}",
        f"V={cfg.V} W={cfg.W} t0={cfg.t0} beta={beta} "
        f"drive_variant={cfg.drive_variant}",
    ]
    rows = []
    for t in ts:
        m = response.moments_linear_ex2(drive, eff, beta, t)
        rows.append((t, m.x2, 0.0, m.p2, 0.0))
    _write_csv(cfg.out, header,
               ["t", "x2_linear_re", "x2_linear_im",
                "p2_linear_re", "p2_linear_im"], rows)
    return 0


def _cmd_example3(cfg: RunConfig) -> int:
    abs_om = 2.0 * math.pi if cfg.abs_omega is None else cfg.abs_omega
    drive = response.DriveParams(V=cfg.V, W=cfg.W, t0=0.0)
    ts = cfg.t_grid()
    temps = cfg.temp_grid()
    header = [
        "example3: driven inverted oscillator, reduced occupation and energy",
        f"abs_omega={abs_om} V={cfg.V} W={cfg.W}",
        f"t grid [{cfg.t_min}, {cfg.t_max}] x {cfg.t_steps}; "
        f"T grid [{cfg.T_min}, {cfg.T_max}] x {cfg.T_steps}",
    ]
    rows = []
    for temp in temps:
        beta = 1.0 / temp
        for t in ts:
            n_bar, u_bar = iho.occupation_driven(drive, abs_om, float(t), beta)
            rows.append((t, temp, n_bar.real, n_bar.imag,
                         u_bar.real, u_bar.imag))
    _write_csv(cfg.out, header,
               ["t", "T", "n_re", "n_im", "U_re", "U_im"], rows)
    return 0


def _cmd_thermo(cfg: RunConfig) -> int:
    abs_om = 2.0 * math.pi if cfg.abs_omega is None else cfg.abs_omega
    temps = cfg.temp_grid()
    header = ["reduced thermodynamics sweep", f"abs_omega={abs_om}",
              f"T grid [{cfg.T_min}, {cfg.T_max}] x {cfg.T_steps}"]
    rows = []
    for temp in temps:
        th = iho.thermo_reduced(abs_om, float(temp))
        rows.append((temp, th.Z_r.real, th.Z_r.imag, th.F_r.real, th.F_r.imag,
                     th.S_r.real, th.S_r.imag, th.U_r, th.C_r, th.n_r))
    _write_csv(cfg.out, header,
               ["T", "Zr_re", "Zr_im", "Fr_re", "Fr_im", "Sr_re", "Sr_im",
                "U_r", "C_r", "n_r"], rows)
    return 0


def _cmd_region(cfg: RunConfig) -> int:
    p = cfg.params()
    eff = model_space.classify_region(p)
    exponent = model_space.gauge_exponent(p)
    print(f"region      : {eff.region.value}")
    print(f"mass        : {eff.mass:.12g}")
    print(f"Omega^2     : {eff.omega_sq:.12g}")
    print(f"|Omega|     : {eff.abs_omega:.12g}")
    print(f"btilde      : {eff.btilde if eff.btilde is not None else 'undefined'}")
    print(f"gauge coeff : {exponent.coefficient:.12g}")
    return 0


def _cmd_version(cfg: RunConfig) -> int:
    print(f"swanson-dgf {__version__}")
    return 0


def _cmd_validate(cfg: RunConfig) -> int:
    from . import validate as validate_mod

    ok = validate_mod.run_all(verbose=True)
    return 0 if ok else 3


_COMMANDS = {
    "fig1": _cmd_fig1, "fig2": _cmd_fig2, "fig3": _cmd_fig3,
    "fig4": _cmd_fig4, "fig5": _cmd_fig5,
    "example1": _cmd_example1, "example2": _cmd_example2,
    "example3": _cmd_example3,
    "thermo": _cmd_thermo, "region": _cmd_region,
    "validate": _cmd_validate, "version": _cmd_version,
}


def _load_config_file(path: str) -> dict:
    values = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"bad config line: {raw.rstrip()}")
            key, val = (part.strip() for part in line.split("=", 1))
            for cast in (int, float):
                try:
                    values[key] = cast(val)
                    break
                except ValueError:
                    continue
            else:
                values[key] = val
    return values


def _build_parser() -> _Parser:
    parser = _Parser(prog="swanson-dgf",
                     description="Finite-temperature Swanson-oscillator toolkit")
    sub = parser.add_subparsers(dest="command", required=True)
    d = _ARG_DEFAULTS
    for name in _COMMANDS:
        p = sub.add_parser(name, description=f"{name} command")
        p.add_argument("--config", default=None,
                       help="key = value file; flags override file values")
        p.add_argument("--omega", type=float, default=d["omega"])
        p.add_argument("--alpha", type=float, default=d["alpha"])
        p.add_argument("--gamma", type=float, default=d["gamma"])
        p.add_argument("--b0", type=float, default=d["b0"])
        p.add_argument("--abs-omega", dest="abs_omega", type=float,
                       default=None,
                       help="inverted-well |Omega| (fig4/5, example3, thermo)")
        p.add_argument("--V", type=float, default=d["V"])
        p.add_argument("--W", type=float, default=d["W"])
        p.add_argument("--epsilon", type=float, default=d["epsilon"])
        p.add_argument("--t0", type=float, default=d["t0"])
        p.add_argument("--beta", type=float, default=None)
        p.add_argument("--t-min", dest="t_min", type=float, default=d["t_min"])
        p.add_argument("--t-max", dest="t_max", type=float, default=d["t_max"])
        p.add_argument("--t-steps", dest="t_steps", type=int,
                       default=d["t_steps"])
        p.add_argument("--T-min", dest="T_min", type=float, default=d["T_min"])
        p.add_argument("--T-max", dest="T_max", type=float, default=d["T_max"])
        p.add_argument("--T-steps", dest="T_steps", type=int,
                       default=d["T_steps"])
        p.add_argument("--mode", choices=("exact", "linear", "both", "oracle"),
                       default=d["mode"])
        p.add_argument("--exact-method", dest="exact_method",
                       choices=("resummed", "propagator"),
                       default=d["exact_method"])
        p.add_argument("--drive-variant", dest="drive_variant",
                       choices=("printed", "rescaled"),
                       default=d["drive_variant"])
        p.add_argument("--out", default=d["out"])
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    fields = set(RunConfig.__dataclass_fields__)
    raw = {k: v for k, v in vars(args).items() if k in fields and v is not None}
    if args.config:
        try:
            file_vals = _load_config_file(args.config)
        except (OSError, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        for key, val in file_vals.items():
            if key not in fields:
                print(f"error: unknown config key {key!r}", file=sys.stderr)
                return 1
            # a flag left at its built-in default yields to the config file
            if key not in raw or raw[key] == _ARG_DEFAULTS.get(key):
                raw[key] = val
    cfg = RunConfig(command=args.command, **{k: v for k, v in raw.items()
                                             if k != "command"})
    try:
        cfg.validate()
        return _COMMANDS[cfg.command](cfg)
    except SwansonError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
