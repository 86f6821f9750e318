"""Command-line front end: ``ucmvdr {ensemble,montecarlo,rectify}``.

Exit codes: 0 success, 1 invalid input, 2 run aborted.
"""

from __future__ import annotations

import argparse
import hashlib
import os
import sys
from dataclasses import replace

import numpy as np

from . import plots
from .array_model import UlaGeometry, ensemble_covariance
from .arraypoly import DegenerateLeadingCoefficient, beampattern, find_zeros, weights_to_polynomial
from .beamformers import WeightVector, cbf_weights, mvdr_weights
from .config import ConfigError, load_config
from .experiments import ExperimentAborted, ecdf, ensemble_reference, run_experiment
from .metrics import to_db
from .output import RunManifest, WeightsFileError, fmt, power, read_weights, write_csv, write_weights
from .rectify import uc_mvdr_weights

EXIT_OK, EXIT_INVALID, EXIT_ABORT = 0, 1, 2


class UsageError(ValueError):
    pass


def _grid(points: int) -> np.ndarray:
    return np.linspace(-1.0, 1.0, points)


def _prepare_out(path):
    os.makedirs(path, exist_ok=True)
    return path


def _zero_rows(zeros):
    for i, z in enumerate(zeros):
        yield [i, fmt(z.real), fmt(z.imag), fmt(abs(z)), fmt(np.angle(z)), fmt(np.angle(z) / np.pi),
               f"{abs(abs(z) - 1):.3e}"]


ZERO_HEADER = ["index", "re", "im", "radius", "angle", "u", "abs_radius_minus_1"]


# --------------------------------------------------------------------------
# ensemble


def cmd_ensemble(args) -> int:
    cfg = load_config(args.config)
    scenario = cfg.scenario
    geom = scenario.geometry
    if geom.spacing_over_wavelength != 0.5:
        raise ConfigError("array polynomial output needs spacing_over_wavelength = 0.5",
                          "array.spacing_over_wavelength")
    u0 = scenario.look_direction
    linear = args.linear_power or cfg.linear_power
    w = mvdr_weights(ensemble_covariance(scenario), geom, u0)
    cbf = cbf_weights(geom, u0)
    zeros = find_zeros(weights_to_polynomial(w)).zeros
    grid = _grid(cfg.beampattern_points)
    b_mvdr = beampattern(w, grid)
    b_cbf = beampattern(cbf, grid)

    out = _prepare_out(args.out)
    man = RunManifest("ensemble", cfg.config_hash)
    write_weights(man.add(os.path.join(out, "weights.txt"), out), w.weights)
    write_csv(man.add(os.path.join(out, "zeros.csv"), out), ZERO_HEADER, _zero_rows(zeros), "zeros")
    unit = "lin" if linear else "dB"
    write_csv(
        man.add(os.path.join(out, "beampattern.csv"), out),
        ["u", "mvdr_re", "mvdr_im", f"mvdr_power_{unit}", f"cbf_power_{unit}"],
        ([fmt(u), fmt(b.real), fmt(b.imag), power(abs(b) ** 2, linear), power(abs(c) ** 2, linear)]
         for u, b, c in zip(grid, b_mvdr, b_cbf)),
        "beampattern",
    )
    interf = [s.direction_cosine for s in scenario.interferers]
    plots.zero_plot(man.add(os.path.join(out, "zeros.svg"), out),
                    {"MVDR": zeros, "CBF": find_zeros(weights_to_polynomial(cbf)).zeros},
                    [np.pi * u for u in interf], title=f"ensemble MVDR zeros, N={geom.num_sensors}")
    plots.beampattern_plot(man.add(os.path.join(out, "beampattern.svg"), out), grid,
                           {"MVDR": b_mvdr, "CBF": b_cbf}, interf, title="ensemble MVDR beampattern")
    rec = ensemble_reference(scenario)
    man.extra["ensemble"] = {"wng": rec.wng, "interferer_power": rec.interferer_power,
                             "max_abs_radius_minus_1": float(np.max(np.abs(np.abs(zeros) - 1)))}
    man.write(out)
    print(f"ensemble MVDR: WNG={rec.wng:.6g}, max ||zeta|-1|={man.extra['ensemble']['max_abs_radius_minus_1']:.2e}")
    return EXIT_OK


# --------------------------------------------------------------------------
# montecarlo


def _write_point(result, out, man, linear, emit_zeros):
    config = result.config
    names = config.beamformers
    n = config.num_sensors
    unit = "lin" if linear else "dB"
    sfx = "" if linear else "_dB"

    def rows():
        for rec in result.trials:
            for bf in names:
                m = rec.metrics.get(bf)
                if rec.failed or m is None:
                    yield [rec.trial_index, bf, "", "", "", "", 1]
                else:
                    yield [rec.trial_index, bf, power(m.interferer_power, linear), power(m.noise_power, linear),
                           fmt(m.wng), power(m.notch_depth, linear), 0]

    write_csv(man.add(os.path.join(out, "trials.csv"), out),
              ["trial", "beamformer", f"P_I{sfx}", f"P_N{sfx}", "WNG", f"ND{sfx}", "failed"], rows(), "trials")

    summary = result.summary()
    n_ok = len(result.trials) - len(result.failed_trials)
    srows = []
    for bf in names:
        s = summary[bf]
        load = result.loading.get(bf)
        srows.append([
            bf, "" if load is None else power(load, linear), n_ok, len(result.failed_trials),
            power(s["interferer_power_mean"], linear), power(s["interferer_power_var"], linear),
            power(s["interferer_power_median"], linear),
            power(s["noise_power_mean"], linear), fmt(s["wng_mean"]), fmt(s["wng_var"]), fmt(s["wng_median"]),
            power(s["notch_depth_median"], linear),
        ])
    write_csv(man.add(os.path.join(out, "summary.csv"), out),
              ["beamformer", f"loading_{unit}", "trials", "failed", f"P_I_mean_{unit}", f"P_I_var_{unit}",
               f"P_I_median_{unit}", f"P_N_mean_{unit}", "WNG_mean", "WNG_var", "WNG_median", f"ND_median_{unit}"],
              srows, "summary")

    curves = {}
    for bf in names:
        curve = ecdf(result.values(bf, "interferer_power"))
        curves[bf] = curve
        write_csv(man.add(os.path.join(out, f"ecdf_{bf}.csv"), out), [f"P_I{sfx}", "probability"],
                  ([power(v, linear), fmt(p)] for v, p in zip(curve.values, curve.probabilities)), "ecdf")

    if emit_zeros:
        def zrows():
            for rec in result.trials:
                for bf, zs in rec.zeros.items():
                    for i, z in enumerate(zs.zeros):
                        yield [rec.trial_index, bf, i, fmt(z.real), fmt(z.imag)]
        write_csv(man.add(os.path.join(out, "zeros.csv"), out), ["trial", "beamformer", "index", "re", "im"],
                  zrows(), "zeros")

    ref = ensemble_reference(config.scenario)
    title = f"N={n}, L={config.num_snapshots}"
    plots.ecdf_plot(man.add(os.path.join(out, "ecdf.svg"), out), curves,
                    ref.interferer_power if config.scenario.interferers else None, title)
    wngs = {bf: result.values(bf, "wng") for bf in names if bf not in ("CBF", "MVDR")}
    plots.wng_histogram(man.add(os.path.join(out, "wng_hist.svg"), out), wngs, n, ref.wng, title)
    if "SMI" in names and "UC" in names:
        plots.wng_scatter(man.add(os.path.join(out, "wng_scatter.svg"), out),
                          result.values("SMI", "wng"), result.values("UC", "wng"), n, title=title)
    return summary


def cmd_montecarlo(args) -> int:
    cfg = load_config(args.config)
    if cfg.experiment is None:
        raise ConfigError("missing [experiment] section", "experiment")
    if args.seed is not None:
        cfg = cfg.with_seed(args.seed)
    linear = args.linear_power or cfg.linear_power
    emit = args.emit_zeros or cfg.experiment.capture_zeros
    points = list(cfg.sweep_points())
    # run everything before touching the output directory
    results = []
    for label, exp in points:
        if emit and not exp.capture_zeros:
            exp = replace(exp, capture_zeros=True)
        results.append((label, run_experiment(exp, workers=args.workers)))

    out = _prepare_out(args.out)
    man = RunManifest("montecarlo", cfg.config_hash, cfg.experiment.base_seed)
    sweep_rows = []
    for label, result in results:
        sub = os.path.join(out, label) if label else out
        os.makedirs(sub, exist_ok=True)
        summary = _write_point(result, sub, man, linear, emit)
        for bf, s in summary.items():
            sweep_rows.append((label, bf, s))
        man.extra.setdefault("loading", {})[label or "run"] = result.loading
        man.extra.setdefault("failed_trials", {})[label or "run"] = len(result.failed_trials)

    if cfg.sweep is not None:
        key, values = cfg.sweep
        unit = "lin" if linear else "dB"
        write_csv(man.add(os.path.join(out, "sweep_summary.csv"), out),
                  [key, "beamformer", f"P_I_mean_{unit}", f"P_I_var_{unit}", f"P_I_median_{unit}", "WNG_mean"],
                  ([v, bf, power(s["interferer_power_mean"], linear), power(s["interferer_power_var"], linear),
                    power(s["interferer_power_median"], linear), fmt(s["wng_mean"])]
                   for v, (label, bf, s) in zip(np.repeat(values, len(cfg.experiment.beamformers)), sweep_rows)),
                  "sweep")
        series = {bf: [s["interferer_power_mean"] for _, b, s in sweep_rows if b == bf]
                  for bf in cfg.experiment.beamformers}
        refs = [ensemble_reference(r.config.scenario).interferer_power for _, r in results]
        plots.sweep_plot(man.add(os.path.join(out, "sweep.svg"), out), list(values), series, key,
                         reference=refs if cfg.experiment.scenario.interferers else None)
    man.write(out)
    for label, result in results:
        s = result.summary()
        parts = [f"{bf}: mean WNG {s[bf]['wng_mean']:.4g}, median P_I {fmt(to_db(s[bf]['interferer_power_median']))} dB"
                 for bf in result.config.beamformers]
        print((label + " " if label else "") + "; ".join(parts))
    return EXIT_OK


# --------------------------------------------------------------------------
# rectify


def cmd_rectify(args) -> int:
    raw = read_weights(args.weights)
    if args.num_sensors is not None and raw.size != args.num_sensors:
        raise UsageError(f"weights file has {raw.size} entries but --num-sensors is {args.num_sensors}")
    if args.spacing != 0.5:
        raise UsageError("rectification needs half-wavelength spacing (--spacing 0.5)")
    if not -1 <= args.look_direction <= 1:
        raise UsageError("--look-direction must lie in [-1, 1]")
    w_in = WeightVector(raw, args.look_direction, 0.5)
    w_uc, report = uc_mvdr_weights(w_in, UlaGeometry(raw.size))
    linear = args.linear_power
    grid = _grid(args.points)
    before = beampattern(w_in, grid)
    after = beampattern(w_uc, grid)

    out = _prepare_out(args.out)
    man = RunManifest("rectify", hashlib.sha256(np.ascontiguousarray(raw).tobytes()).hexdigest())
    write_weights(man.add(os.path.join(out, "uc_weights.txt"), out), w_uc.weights)
    rows = ([r["index"], fmt(r["orig_re"]), fmt(r["orig_im"]), fmt(r["orig_radius"]), fmt(r["orig_angle"]),
             f"{r['proj_re']:.17g}", f"{r['proj_im']:.17g}", fmt(r["proj_angle"]), r["mainlobe_moved"]]
            for r in report.rows())
    write_csv(man.add(os.path.join(out, "projection.csv"), out),
              ["index", "orig_re", "orig_im", "orig_radius", "orig_angle", "proj_re", "proj_im", "proj_angle",
               "mainlobe_moved"], rows, "projection")
    unit = "lin" if linear else "dB"
    write_csv(man.add(os.path.join(out, "beampattern.csv"), out), ["u", f"before_{unit}", f"after_{unit}"],
              ([fmt(u), power(abs(b) ** 2, linear), power(abs(a) ** 2, linear)]
               for u, b, a in zip(grid, before, after)), "beampattern")
    plots.beampattern_plot(man.add(os.path.join(out, "beampattern.svg"), out), grid, {"SMI": before, "UC": after},
                           title="before / after unit circle rectification")
    plots.zero_plot(man.add(os.path.join(out, "zeros.svg"), out),
                    {"SMI": report.original_zeros.zeros, "UC": report.projected_zeros.zeros})
    man.extra["collapsed_mainlobe_zeros"] = report.collapsed
    man.write(out)
    print(f"rectified {raw.size} weights; {len(report.mainlobe_moved)} main-lobe zero(s) relocated")
    return EXIT_OK


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ucmvdr", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("ensemble", help="ensemble MVDR weights, zeros and beampattern")
    e.add_argument("--config", required=True)
    e.add_argument("--out", required=True)
    e.add_argument("--linear-power", action="store_true")
    e.set_defaults(func=cmd_ensemble)

    m = sub.add_parser("montecarlo", help="Monte Carlo comparison of SMI, UC MVDR and DL MVDR")
    m.add_argument("--config", required=True)
    m.add_argument("--out", required=True)
    m.add_argument("--workers", type=int, default=1)
    m.add_argument("--seed", type=int, default=None, help="override experiment.base_seed")
    m.add_argument("--emit-zeros", action="store_true")
    m.add_argument("--linear-power", action="store_true")
    m.set_defaults(func=cmd_montecarlo)

    r = sub.add_parser("rectify", help="apply unit circle rectification to a weights file")
    r.add_argument("--weights", required=True, help="text file, one 're im' pair per line")
    r.add_argument("--out", required=True)
    r.add_argument("--num-sensors", type=int, default=None)
    r.add_argument("--look-direction", type=float, default=0.0)
    r.add_argument("--spacing", type=float, default=0.5)
    r.add_argument("--points", type=int, default=1001, help="beampattern grid size")
    r.add_argument("--linear-power", action="store_true")
    r.set_defaults(func=cmd_rectify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "workers", 1) < 1:
        parser.error("--workers must be >= 1")
    try:
        return args.func(args)
    except (ConfigError, WeightsFileError, UsageError, DegenerateLeadingCoefficient, ValueError) as exc:
        print(f"ucmvdr {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ExperimentAborted as exc:
        print(f"ucmvdr {args.command}: aborted: {exc}", file=sys.stderr)
        return EXIT_ABORT


if __name__ == "__main__":
    sys.exit(main())
