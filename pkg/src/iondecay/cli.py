"""Command line front end.

Subcommands:

* ``fit`` (alias ``discriminate``): read a visibility CSV, fit both decay
  families, report the verdict as JSON.
* ``simulate-field``: coherence curves under a fluctuating field.
* ``simulate-reservoir``: coherence curves under engineered intensity noise.
* ``generate``: synthetic visibility datasets.

File formats: input CSV has header ``time,visibility[,visibility_err]``,
comma separated, UTF-8, ``#`` starts a comment line.  Curve CSVs have header
``time,abs_k,re_k,im_k,stderr``.  Reports are JSON with sorted keys and no
timestamps, so a fixed seed byte-reproduces every output file regardless of
worker count.

Exit codes: 0 success, 2 bad data or configuration, 1 internal error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__, fieldnoise, modelfit, reservoir
from .errors import (
    ConfigError,
    IonDecayError,
    OrderError,
    ParseError,
    RangeError,
)
from .spinspace import FourLevelState

_SQ2 = 1.0 / math.sqrt(2.0)
DFS_STATE = FourLevelState(0.0, _SQ2, _SQ2, 0.0)
TEST_STATE = FourLevelState(_SQ2, 0.0, 0.0, _SQ2)

VALIDITY_WARN = 0.01


def parse_times(text: str) -> np.ndarray:
    """Inclusive time grid from 'start:stop:steps' (steps = point count)."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"times {text!r} is not start:stop:steps")
    try:
        start, stop = float(parts[0]), float(parts[1])
        steps = int(parts[2])
    except ValueError as e:
        raise ConfigError(f"times {text!r}: {e}") from None
    if not (math.isfinite(start) and math.isfinite(stop)):
        raise ConfigError("times must be finite")
    if start < 0:
        raise ConfigError("start must be >= 0")
    if stop < start:
        raise ConfigError("stop must be >= start")
    if steps < 1 or (steps == 1 and stop != start):
        raise ConfigError("steps must be >= 1 (and start == stop for 1)")
    if steps > 1 and stop == start:
        raise ConfigError("start == stop needs steps == 1")
    return np.linspace(start, stop, steps)


def ingest_csv(path) -> modelfit.VisibilityDataset:
    """Read a visibility CSV; errors carry 1-based line numbers."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(f"{path}: {e}") from None
    except UnicodeDecodeError as e:
        raise ParseError(f"{path}: not UTF-8 ({e})") from None

    header: list[str] | None = None
    rows: list[tuple[int, list[float]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        cells = [c.strip() for c in line.split(",")]
        if header is None:
            if cells == ["time", "visibility"] or cells == [
                    "time", "visibility", "visibility_err"]:
                header = cells
                continue
            raise ParseError(
                f"line {lineno}: header must be time,visibility"
                "[,visibility_err]")
        if len(cells) != len(header):
            raise ParseError(
                f"line {lineno}: expected {len(header)} columns, "
                f"got {len(cells)}")
        try:
            values = [float(c) for c in cells]
        except ValueError:
            raise ParseError(f"line {lineno}: non-numeric value") from None
        rows.append((lineno, values))

    if header is None:
        raise ParseError(f"{path}: no header line found")
    if len(rows) < 3:
        raise ParseError(f"{path}: need at least 3 data rows, got {len(rows)}")

    has_err = len(header) == 3
    prev_t = None
    for lineno, values in rows:
        t, v = values[0], values[1]
        if not all(math.isfinite(x) for x in values):
            raise RangeError(f"line {lineno}: non-finite value")
        if prev_t is not None and t <= prev_t:
            raise OrderError(
                f"line {lineno}: time {t!r} does not increase")
        prev_t = t
        if v <= 0.0 or v > 1.0 + 1e-9:
            raise RangeError(
                f"line {lineno}: visibility {v!r} outside (0, 1]")
        if has_err and values[2] < 0.0:
            raise RangeError(f"line {lineno}: negative visibility_err")

    data = np.array([values for _, values in rows])
    return modelfit.VisibilityDataset(
        times=data[:, 0],
        visibility=data[:, 1],
        err=data[:, 2] if has_err else None,
        label=path.stem,
    )


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_dataset_csv(path, ds: modelfit.VisibilityDataset) -> None:
    lines = []
    if ds.err is None:
        lines.append("time,visibility")
        for t, v in zip(ds.times, ds.visibility):
            lines.append(f"{_fmt(t)},{_fmt(v)}")
    else:
        lines.append("time,visibility,visibility_err")
        for t, v, e in zip(ds.times, ds.visibility, ds.err):
            lines.append(f"{_fmt(t)},{_fmt(v)},{_fmt(e)}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def write_curve_csv(path, curve: fieldnoise.DecoherenceCurve) -> None:
    lines = ["time,abs_k,re_k,im_k,stderr"]
    for t, k, s in zip(curve.times, curve.k, curve.stderr):
        lines.append(f"{_fmt(t)},{_fmt(abs(k))},{_fmt(k.real)},"
                     f"{_fmt(k.imag)},{_fmt(s)}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _emit_report(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _report(config: dict, *, seed: int | None = None,
            fits: list | None = None, verdict: dict | None = None,
            curves: list | None = None, extra: dict | None = None) -> dict:
    payload = {
        "version": __version__,
        "config": config,
        "seed": seed,
        "fits": fits if fits is not None else [],
        "verdict": verdict,
        "curves": curves if curves is not None else [],
    }
    if extra:
        payload.update(extra)
    return payload


def _fit_dict(fit: modelfit.FitResult) -> dict:
    return {"family": fit.family.value, "p0": float(fit.p0),
            "p1": float(fit.p1), "asd": float(fit.asd)}


def _verdict_dict(verdict: modelfit.SieveVerdict,
                  tie_threshold: float) -> dict:
    return {
        "winner": verdict.label,
        "asd_exp": float(verdict.asd_exp),
        "asd_gauss": float(verdict.asd_gauss),
        "margin": float(verdict.margin),
        "tie_threshold": float(tie_threshold),
    }


def _cmd_fit(args) -> int:
    ds = ingest_csv(args.input)
    fit_exp, fit_gauss, verdict = modelfit.sieve(ds, args.tie_threshold)
    payload = _report(
        {"command": "fit", "input": str(args.input),
         "tie_threshold": float(args.tie_threshold), "label": ds.label,
         "n_points": len(ds)},
        fits=[_fit_dict(fit_exp), _fit_dict(fit_gauss)],
        verdict=_verdict_dict(verdict, args.tie_threshold),
    )
    _emit_report(payload, args.out)
    return 0


def _dist_from_args(args) -> fieldnoise.FrequencyDistribution:
    try:
        if args.dist == "gaussian":
            if args.sigma is None:
                raise ConfigError("--dist gaussian needs --sigma")
            return fieldnoise.Gaussian(args.center, args.sigma)
        if args.dist == "lorentzian":
            if args.gamma is None:
                raise ConfigError("--dist lorentzian needs --gamma")
            return fieldnoise.Lorentzian(args.center, args.gamma)
        if args.samples is None:
            raise ConfigError("--dist empirical needs --samples")
        values = [float(c) for c in args.samples.split(",") if c.strip()]
        if not values:
            raise ConfigError("--samples is empty")
        return fieldnoise.Empirical(np.array(values))
    except ValueError as e:
        raise ConfigError(str(e)) from None


def _dist_config(args) -> dict:
    cfg: dict = {"dist": args.dist, "center": float(args.center)}
    if args.dist == "gaussian":
        cfg["sigma"] = float(args.sigma)
    elif args.dist == "lorentzian":
        cfg["gamma"] = float(args.gamma)
    else:
        cfg["samples"] = args.samples
    return cfg


def _both_paths(stem: str) -> dict[str, Path]:
    base = Path(stem)
    if base.suffix == ".csv":
        base = base.with_suffix("")
    return {"dfs": base.with_suffix(".dfs.csv"),
            "test": base.with_suffix(".test.csv")}


def _cmd_simulate_field(args) -> int:
    dist = _dist_from_args(args)
    times = parse_times(args.times)
    if args.method == "mc" and args.n_samples < 1:
        raise ConfigError("--n-samples must be >= 1")
    kwargs = dict(n_points=args.n_points, n_samples=args.n_samples,
                  seed=args.seed, workers=args.workers)
    makers = {"dfs": fieldnoise.dfs_visibility_curve,
              "test": fieldnoise.test_state_visibility_curve}
    states = ("dfs", "test") if args.state == "both" else (args.state,)

    curve_entries = []
    if args.curve_out is not None:
        paths = (_both_paths(args.curve_out) if args.state == "both"
                 else {args.state: Path(args.curve_out)})
    else:
        paths = {}
    for name in states:
        try:
            curve = makers[name](dist, times, args.method, **kwargs)
        except ValueError as e:
            raise ConfigError(str(e)) from None
        entry = {"state": name, "n_points": len(curve)}
        if name in paths:
            write_curve_csv(paths[name], curve)
            entry["path"] = str(paths[name])
        curve_entries.append(entry)

    config = {"command": "simulate-field", "state": args.state,
              "times": args.times, "method": args.method}
    config.update(_dist_config(args))
    if args.method == "quadrature":
        config["n_points"] = int(args.n_points)
    if args.method == "mc":
        config["n_samples"] = int(args.n_samples)
    payload = _report(config, seed=args.seed if args.method == "mc" else None,
                      curves=curve_entries)
    _emit_report(payload, args.out)
    return 0


def _cmd_simulate_reservoir(args) -> int:
    try:
        p = reservoir.JcParams(args.g, args.omega, args.omega_f)
        noise = reservoir.IntensityNoise(args.n_mean, args.n_std, args.dt)
    except ValueError as e:
        raise ConfigError(str(e)) from None
    if args.n_traj < 1:
        raise ConfigError("--n-traj must be >= 1")
    times = parse_times(args.times)
    n_eval = int(math.ceil(noise.n_mean + 3.0 * noise.n_std))
    ratio = reservoir.check_dispersive_validity(p, n_eval)
    if ratio > VALIDITY_WARN:
        print(f"warning: dispersive validity ratio {ratio:.3g} exceeds "
              f"{VALIDITY_WARN} at n = {n_eval}; shifts are unreliable",
              file=sys.stderr)

    paths = (_both_paths(args.curve_out)
             if args.curve_out is not None else {})
    curve_entries = []
    for name, state in (("dfs", DFS_STATE), ("test", TEST_STATE)):
        curve = reservoir.engineered_decoherence_mc(
            state, noise, p, times, args.n_traj, args.seed,
            workers=args.workers)
        entry = {"state": name, "n_points": len(curve)}
        if name in paths:
            write_curve_csv(paths[name], curve)
            entry["path"] = str(paths[name])
        curve_entries.append(entry)

    config = {"command": "simulate-reservoir", "g": float(args.g),
              "omega": float(args.omega), "omega_f": float(args.omega_f),
              "n_mean": float(args.n_mean), "n_std": float(args.n_std),
              "dt": float(args.dt), "times": args.times,
              "n_traj": int(args.n_traj)}
    payload = _report(config, seed=args.seed, curves=curve_entries,
                      extra={"validity_ratio": float(ratio),
                             "validity_photon_number": n_eval,
                             "gamma_white_noise": float(
                                 reservoir.white_noise_rate(noise, p).gamma)})
    _emit_report(payload, args.out)
    return 0


def _cmd_generate(args) -> int:
    times = parse_times(args.times)
    family = modelfit.DecayFamily(args.family)
    try:
        ds = modelfit.generate_synthetic(family, args.p0, args.p1, times,
                                         args.noise_std, args.seed)
    except ValueError as e:
        raise ConfigError(str(e)) from None
    write_dataset_csv(args.out, ds)
    return 0


def _add_common(sub, *, times: bool = True) -> None:
    sub.add_argument("--seed", type=int, default=0,
                     help="random seed (default 0)")
    sub.add_argument("--out", default=None,
                     help="report path (default: stdout)")
    if times:
        sub.add_argument("--times", required=True,
                         help="time grid start:stop:steps (inclusive)")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="iondecay",
        description="Ion-pair dephasing curves and decay-law discrimination")
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)

    for name in ("fit", "discriminate"):
        sub = subs.add_parser(
            name, help="fit both decay families to a visibility CSV")
        sub.add_argument("--input", required=True, help="visibility CSV")
        sub.add_argument("--tie-threshold", type=float,
                         default=modelfit.DEFAULT_TIE_THRESHOLD,
                         help="relative asd margin treated as a tie")
        sub.add_argument("--out", default=None,
                         help="report path (default: stdout)")
        sub.set_defaults(func=_cmd_fit)

    sub = subs.add_parser(
        "simulate-field", help="coherence curves under a fluctuating field")
    sub.add_argument("--dist", required=True,
                     choices=("gaussian", "lorentzian", "empirical"))
    sub.add_argument("--center", type=float, default=0.0)
    sub.add_argument("--sigma", type=float, default=None,
                     help="gaussian std")
    sub.add_argument("--gamma", type=float, default=None,
                     help="lorentzian half width")
    sub.add_argument("--samples", default=None,
                     help="comma-separated empirical frequencies")
    sub.add_argument("--state", choices=("dfs", "test", "both"),
                     default="dfs")
    sub.add_argument("--method", choices=("analytic", "quadrature", "mc"),
                     default="analytic")
    sub.add_argument("--n-points", type=int,
                     default=fieldnoise.DEFAULT_QUAD_POINTS,
                     help="quadrature grid points")
    sub.add_argument("--n-samples", "--n", type=int,
                     default=fieldnoise.DEFAULT_MC_SAMPLES,
                     help="monte carlo sample count")
    sub.add_argument("--workers", type=int, default=1,
                     help="worker threads (output is worker-independent)")
    sub.add_argument("--curve-out", default=None,
                     help="curve CSV path (stem when --state both)")
    _add_common(sub)
    sub.set_defaults(func=_cmd_simulate_field)

    sub = subs.add_parser(
        "simulate-reservoir",
        help="coherence curves under engineered intensity noise")
    sub.add_argument("--g", type=float, required=True,
                     help="ion-field coupling")
    sub.add_argument("--omega", type=float, required=True,
                     help="ion splitting")
    sub.add_argument("--omega-f", type=float, required=True,
                     help="field frequency")
    sub.add_argument("--n-mean", type=float, required=True)
    sub.add_argument("--n-std", type=float, required=True)
    sub.add_argument("--dt", type=float, required=True,
                     help="intensity step length; times must be multiples")
    sub.add_argument("--n-traj", type=int, default=100_000)
    sub.add_argument("--workers", type=int, default=1,
                     help="worker threads (output is worker-independent)")
    sub.add_argument("--curve-out", default=None,
                     help="curve CSV stem; writes <stem>.dfs.csv and "
                          "<stem>.test.csv")
    _add_common(sub)
    sub.set_defaults(func=_cmd_simulate_reservoir)

    sub = subs.add_parser("generate", help="synthetic visibility CSV")
    sub.add_argument("--family", required=True,
                     choices=("exponential", "gaussian"))
    sub.add_argument("--p0", type=float, required=True,
                     help="log-visibility intercept (b or B)")
    sub.add_argument("--p1", type=float, required=True,
                     help="decay coefficient (a or A)")
    sub.add_argument("--noise-std", type=float, default=0.0,
                     help="std of additive noise on ln v")
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--out", required=True, help="output CSV path")
    sub.add_argument("--times", required=True,
                     help="time grid start:stop:steps (inclusive)")
    sub.set_defaults(func=_cmd_generate)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        code = e.code
        if code is None:
            return 0
        return code if isinstance(code, int) else 2
    try:
        return args.func(args)
    except IonDecayError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except Exception as e:  # defensive: anything else is a bug
        print(f"internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return 1


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
