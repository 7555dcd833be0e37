"""Command-line front end.

Subcommands
-----------
free-toa      arrival-time density of the free packet at the detector
barrier-toa   space-conditional density behind the square barrier
compare       space-conditional vs transmitted-Kijowski densities + L1 distance
sweep         the above over a list of barrier heights (optionally threaded)
oracle        cross-check arrival probability against the grid solver
selfcheck     run the fast invariant suite and print pass/fail lines

Exit codes: 0 success, 2 configuration error, 3 numerical failure
(zero arrival, aliasing grid, evanescent overflow, unstable solver grid,
or a failed selfcheck).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .errors import (ConfigError, DivergenceWarning, GridMismatch,
                     GridTooCoarse, ResonancePole, UnstableConfig, ZeroArrival)
from .scenario import MODEL_NAMES, ScenarioConfig, emit_csv, emit_svg, run_scenario

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

_NUMERIC_ERRORS = (ZeroArrival, GridTooCoarse, DivergenceWarning,
                   UnstableConfig, GridMismatch, ResonancePole)


def _thread_cap() -> int:
    raw = os.environ.get("STS_TOA_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ConfigError("STS_TOA_THREADS", f"not an integer: {raw!r}")
    if n < 1:
        raise ConfigError("STS_TOA_THREADS", "must be >= 1")
    return n


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--config", metavar="PATH", help="JSON scenario config")
    p.add_argument("--preset", choices=["fig2"], help="named parameter preset")
    p.add_argument("--v0", metavar="LIST",
                   help="comma-separated barrier heights, overrides config")
    p.add_argument("--method", metavar="M",
                   help="propagation method: closed | slices:<n>")
    p.add_argument("--models", metavar="LIST",
                   help=f"comma-separated subset of {','.join(MODEL_NAMES)}")
    p.add_argument("--out-csv", metavar="PATH", help="write density table(s)")
    p.add_argument("--out-svg", metavar="PATH", help="write stacked-panel plot")


def _build_config(args, forced_models=None, forced_v0=None) -> ScenarioConfig:
    raw = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                raw = json.load(fh)
        except OSError as exc:
            raise ConfigError("--config", str(exc))
        except json.JSONDecodeError as exc:
            raise ConfigError("--config", f"invalid JSON: {exc}")
        if not isinstance(raw, dict):
            raise ConfigError("--config", "top-level value must be an object")
    if args.preset:
        raw["preset"] = args.preset
    if not raw:
        raise ConfigError("--config", "provide --config and/or --preset")
    if args.v0 is not None:
        try:
            v0 = [float(s) for s in args.v0.split(",") if s.strip()]
        except ValueError:
            raise ConfigError("--v0", f"not a number list: {args.v0!r}")
        raw.setdefault("barrier", {})
        raw["barrier"] = dict(raw["barrier"], v0=v0)
    if args.method is not None:
        raw["method"] = args.method
    if args.models is not None:
        raw["models"] = [s.strip() for s in args.models.split(",") if s.strip()]
    if forced_models is not None:
        raw["models"] = list(forced_models)
    if forced_v0 is not None:
        raw.setdefault("barrier", {})
        raw["barrier"] = dict(raw["barrier"], v0=forced_v0)
    return ScenarioConfig.from_dict(raw)


def _emit(result, args):
    if args.out_csv:
        for p in emit_csv(result, args.out_csv):
            print(f"wrote {p}", file=sys.stderr)
    if args.out_svg:
        print(f"wrote {emit_svg(result, args.out_svg)}", file=sys.stderr)
    json.dump(result.summary(), sys.stdout, indent=2, sort_keys=True)
    print()


def _cmd_free_toa(args) -> int:
    cfg = _build_config(args, forced_models=["kijowski_free"], forced_v0=[0.0])
    _emit(run_scenario(cfg), args)
    return EXIT_OK


def _cmd_barrier_toa(args) -> int:
    cfg = _build_config(args, forced_models=["sts"])
    _emit(run_scenario(cfg), args)
    return EXIT_OK


def _cmd_compare(args) -> int:
    cfg = _build_config(args)
    if not {"sts", "kijowski_transmitted"} <= set(cfg.models):
        cfg = _build_config(args, forced_models=["sts", "kijowski_transmitted"])
    _emit(run_scenario(cfg), args)
    return EXIT_OK


def _cmd_sweep(args) -> int:
    cfg = _build_config(args)
    _emit(run_scenario(cfg, max_workers=_thread_cap()), args)
    return EXIT_OK


def _cmd_oracle(args) -> int:
    from .kijowski import transmitted_kijowski
    from .oracle import barrier_transmission_norm

    cfg = _build_config(args)
    rows = []
    for v0 in sorted(set(cfg.v0_list)):
        model = transmitted_kijowski(cfg.packet, v0, cfg.barrier_length,
                                     cfg.detector_x, cfg.tgrid,
                                     egrid=cfg.energy_grid())
        solver = barrier_transmission_norm(cfg.packet, v0, cfg.barrier_length,
                                           time_factor=args.time_factor)
        rows.append({"v0": v0,
                     "arrival_probability": model.arrival_probability,
                     "grid_solver_transmitted_norm": solver,
                     "difference": model.arrival_probability - solver})
    json.dump({"oracle": rows}, sys.stdout, indent=2, sort_keys=True)
    print()
    return EXIT_OK


def _selfcheck_cases():
    from .evolution import propagate_closed_form, propagate_slices
    from .kijowski import transmission_amplitude
    from .numerics import EnergyGrid, TimeGrid, fourier_E_to_t
    from .oracle import transfer_matrix_T
    from .packet import GaussianPacketSpec, sc_initial_amplitude
    from .potential import PiecewisePotential

    spec = GaussianPacketSpec(x_i=-50.0, p_i=2.0, delta=10.0)
    egrid = EnergyGrid(0.5, 4.0, 4096)
    tgrid = TimeGrid(0.0, 120.0, 1024)

    def fourier_paths():
        rng = np.random.default_rng(7)
        e = egrid.samples
        a = (np.exp(-((e - 2.0) / 0.4) ** 2)
             * np.exp(1j * rng.normal(0.0, 0.1) * e))
        fft = fourier_E_to_t(a, egrid, tgrid, method="fft")
        direct = fourier_E_to_t(a, egrid, tgrid, method="direct")
        return float(np.max(np.abs(fft - direct))), 1e-8

    def transfer_vs_closed():
        p = np.linspace(0.501, 4.001, 512)
        T, _ = transfer_matrix_T(p, 4.5, 10.0)
        Tc = transmission_amplitude(p, 4.5, 10.0)
        return float(np.max(np.abs(T - Tc))), 1e-10

    def unitarity():
        p = np.linspace(0.501, 4.001, 512)
        T, R = transfer_matrix_T(p, 1.8, 10.0)
        return float(np.max(np.abs(np.abs(T) ** 2 + np.abs(R) ** 2 - 1.0))), 1e-12

    def slices_vs_closed():
        pot = PiecewisePotential.square_barrier(1.8, 10.0)
        amps = sc_initial_amplitude(spec, egrid)
        a = propagate_closed_form(amps, pot, 50.0)
        # 50 slices over [0, 50]: boundaries land on the barrier edges
        b = propagate_slices(amps, pot, 50.0, 50)
        scale = float(np.max(np.abs(a.values)))
        return float(np.max(np.abs(a.values - b.values))) / scale, 1e-10

    return [("fourier fft vs direct quadrature", fourier_paths),
            ("transfer matrix vs closed-form T", transfer_vs_closed),
            ("|T|^2 + |R|^2 = 1", unitarity),
            ("slice propagation vs closed form", slices_vs_closed)]


def _cmd_selfcheck(args) -> int:
    failures = 0
    for name, fn in _selfcheck_cases():
        try:
            err, tol = fn()
            ok = err < tol
            detail = f"max err {err:.3g} (tol {tol:g})"
        except Exception as exc:  # a crash is a failure, not an abort
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
        failures += 0 if ok else 1
    return EXIT_OK if failures == 0 else EXIT_NUMERIC


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sts-toa",
        description="Quantum time-of-arrival distributions behind a square "
                    "barrier: space-conditional model vs Kijowski, with a "
                    "standard-QM grid-solver oracle.")
    sub = parser.add_subparsers(dest="command", required=True)

    handlers = {}
    for name, fn, doc in [
            ("free-toa", _cmd_free_toa, "free-packet arrival density"),
            ("barrier-toa", _cmd_barrier_toa, "space-conditional density behind the barrier"),
            ("compare", _cmd_compare, "model comparison with L1 distances"),
            ("sweep", _cmd_sweep, "barrier-height sweep (STS_TOA_THREADS caps workers)"),
            ("oracle", _cmd_oracle, "arrival probability vs grid-solver transmitted norm"),
            ("selfcheck", _cmd_selfcheck, "run the fast invariant suite")]:
        p = sub.add_parser(name, help=doc)
        if name != "selfcheck":
            _add_common(p)
        if name == "oracle":
            p.add_argument("--time-factor", type=float, default=4.0,
                           help="measurement time in units of the free crossing time")
        handlers[name] = fn
    parser.set_defaults(_handlers=handlers)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args._handlers[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except _NUMERIC_ERRORS as exc:
        print(f"numerical failure ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
