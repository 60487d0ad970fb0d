"""Command-line entry point: ``dcl <group> <action> [options]``.

Exit codes: 0 success, 2 validation error, 3 I/O error. Outputs are written
atomically under ``--output-dir``; the same config and ``--seed`` give
byte-identical files regardless of ``DCL_THREADS``.
"""

import argparse
import json
import math
import os
import sys

import numpy as np

from dcl import __version__
from dcl import config as cfgmod
from dcl import constants as C
from dcl import dynamics as dyn
from dcl import lattice as lat
from dcl import mechanism as mech
from dcl import mocap
from dcl import stiffness as st
from dcl.config import ConfigError
from dcl.io import write_csv, write_json, write_text

EXIT_OK, EXIT_VALIDATION, EXIT_IO = 0, 2, 3

_MODULE_OF = [
    (ConfigError, "config"),
    (lat.LatticeError, "lattice"),
    (st.StiffnessError, "stiffness"),
    (dyn.JumpError, "dynamics"),
    (mech.MechanismError, "mechanism"),
    (mocap.MocapError, "mocap"),
]


def _out(args, name):
    return os.path.join(args.output_dir, name)


def _figures(args):
    return not args.no_figures


# --- lattice ---------------------------------------------------------------

def cmd_lattice_gen(args):
    cfg = cfgmod.load(args.config, "lattice")
    for key in ("kind", "level", "shell_halfwidth", "target_density", "resolution", "samples_per_axis"):
        cfgmod.set_path(cfg, key, getattr(args, key))
    cfgmod.set_path(cfg, "cell_size_mm", args.cell_size_mm)
    cfgmod.validate(cfgmod.strip_private(cfg), "lattice")
    field, domain = cfgmod.build_lattice(cfg)
    n = cfg.get("samples_per_axis", 64)
    if "target_density" in cfg:
        w = lat.solve_level_for_density(field.kind, cfg["target_density"], domain, field.cell_size, field.level,
                                        samples_per_axis=n, seed=args.seed)
        field = field.with_halfwidth(w)
    vf = lat.volume_fraction(field, domain, n, seed=args.seed)
    mesh = lat.mesh_module(field, domain, cfg.get("resolution", 16))
    lat.export_stl(mesh, _out(args, "lattice.stl"))
    report = {
        "kind": field.kind.value,
        "cell_size_mm": field.cell_size * 1e3,
        "level": field.level,
        "shell_halfwidth": field.shell_halfwidth,
        "volume_fraction": vf,
        "triangle_count": mesh.n_triangles,
        "vertex_count": len(mesh.vertices),
        "euler_characteristic": mesh.euler_characteristic(),
        "mesh_volume_mm3": mesh.signed_volume() * 1e9,
        "domain_volume_mm3": domain.volume() * 1e9,
        "seed": args.seed,
    }
    write_json(_out(args, "lattice_report.json"), report)
    print(f"volume fraction {vf:.4f}, {mesh.n_triangles} triangles -> {_out(args, 'lattice.stl')}")
    return EXIT_OK


# --- stiffness -------------------------------------------------------------

def _stiffness_outputs(args, model, samples, prefix="stiffness"):
    write_json(_out(args, f"{prefix}_model.json"), {**model.to_json(), "provenance": "fitted to " + (
        "surrogate data (coefficients are not published values)" if args.stiffness_source == "surrogate"
        else "external characterization data")})
    theta = np.array([s.theta for s in samples])
    tau = np.array([s.torque for s in samples])
    fit = np.array([model.polynomial(t) if t <= model.safety_max else np.nan for t in theta])
    rows = [(math.degrees(t), q, (float(f) if np.isfinite(f) else "")) for t, q, f in zip(theta, tau, fit)]
    write_csv(_out(args, f"{prefix}_curve.csv"), ["theta_deg", "torque_nm", "fit_nm"], rows)
    write_csv(_out(args, f"{prefix}_samples.csv"), ["theta_deg", "torque_nm"],
              [(math.degrees(t), q) for t, q in zip(theta, tau)])
    from dcl import plotting

    plotting.write_gnuplot(_out(args, f"{prefix}_curve.gp"), f"{prefix}_curve.csv", f"{prefix}_curve.png",
                           "Torque-angle characterization", "compression angle (deg)", "torque (N m)",
                           [(1, 2, "data", "points"), (1, 3, "cubic fit", "lines")])
    if _figures(args):
        fit_deg = np.linspace(0.0, math.degrees(model.safety_max), 200)
        plotting.stiffness_figure(_out(args, f"{prefix}_curve.png"), np.degrees(theta), tau, fit_deg,
                                  [model.polynomial(math.radians(d)) for d in fit_deg],
                                  math.degrees(model.operating_max), math.degrees(model.safety_max))


def cmd_stiffness_fit(args):
    cfg = cfgmod.load(args.config, "stiffness")
    cfgmod.set_path(cfg, "csv", args.csv)
    if args.csv:
        cfg["source"] = "csv"
    cfgmod.set_path(cfg, "operating_max_deg", args.operating_max_deg)
    cfgmod.set_path(cfg, "safety_max_deg", args.safety_max_deg)
    cfgmod.validate(cfgmod.strip_private(cfg), "stiffness")
    wrapped = {"stiffness": cfg, "_base_dir": cfg.get("_base_dir")}
    samples = cfgmod.stiffness_samples(wrapped, args.seed)
    op, safety = cfgmod.stiffness_regions(cfg)
    model = st.fit_operating_region(samples, op, safety)
    args.stiffness_source = cfg.get("source", "surrogate")
    _stiffness_outputs(args, model, samples)
    onset = st.detect_densification(samples, op)
    summary = {
        **model.to_json(),
        "torque_at_operating_max_nm": st.torque_at(model, op),
        "stored_energy_at_operating_max_j": st.stored_energy(model, op),
        "detected_densification_deg": None if onset is None else math.degrees(onset),
        "n_samples": len(samples),
        "source": args.stiffness_source,
        "seed": args.seed,
    }
    write_json(_out(args, "stiffness_summary.json"), summary)
    a = model.alpha
    print(f"alpha = [{a[0]:.4g}, {a[1]:.4g}, {a[2]:.4g}, {a[3]:.4g}]  R^2 = {model.r_squared:.4f}")
    return EXIT_OK


# --- jump ------------------------------------------------------------------

def _trajectory_rows(res):
    tr = res.trajectory
    return [(float(t), float(z), float(zd), math.degrees(q), float(tm), float(te))
            for t, z, zd, q, tm, te in zip(tr["t"], tr["z"], tr["zdot"], tr["q"], tr["tau_motor"], tr["tau_exo"])]


TRAJ_HEADER = ["t", "z", "zdot", "q_knee_deg", "tau_motor", "tau_exo"]


def _result_json(res):
    return {
        "h_max_mm": res.h_max * 1e3,
        "delta_h_mm": res.delta_h * 1e3,
        "liftoff_velocity_m_s": res.liftoff_velocity,
        "liftoff_height_mm": res.liftoff_height * 1e3,
        "energy_motor_j": res.energy_motor,
        "energy_elastic_j": res.energy_elastic,
        "lifted_off": res.lifted_off,
    }


def cmd_jump_sim(args):
    cfg = cfgmod.load(args.config, "jump")
    cfgmod.set_path(cfg, "scenario.mode", args.mode)
    cfgmod.set_path(cfg, "scenario.squat_height_mm", args.squat_height_mm)
    cfgmod.set_path(cfg, "robot.knee_torque_max", args.knee_torque_max)
    cfgmod.set_path(cfg, "robot.knee_speed_max", args.knee_speed_max)
    cfgmod.set_path(cfg, "robot.body_mass", args.body_mass)
    cfgmod.set_path(cfg, "dt", args.dt)
    cfgmod.validate(cfgmod.strip_private(cfg), "jump")
    params = cfgmod.build_robot(cfg)
    mode = cfg.get("scenario", {}).get("mode", "Baseline")
    model = None
    if mode == "Deployed":
        model, _ = cfgmod.build_stiffness(cfg, args.seed)
    scenario = cfgmod.build_scenario(cfg, model)
    res = dyn.simulate_jump(scenario, params, cfg.get("dt", 1e-4))
    summary = {"mode": mode, **_result_json(res),
               "stance_energy_residual": dyn.stance_energy_residual(res, scenario, params),
               "robot": params.__dict__, "seed": args.seed}
    write_json(_out(args, "jump_summary.json"), summary)
    write_csv(_out(args, "jump_trajectory.csv"), TRAJ_HEADER, _trajectory_rows(res))
    from dcl import plotting

    plotting.write_gnuplot(_out(args, "jump_trajectory.gp"), "jump_trajectory.csv", "jump_trajectory.png",
                           f"{mode} jump", "time (s)", "hip height (m)", [(1, 2, mode, "lines")])
    if _figures(args):
        plotting.trajectory_figure(_out(args, "jump_trajectory.png"), {mode: res.trajectory})
    print(f"{mode}: delta_h = {res.delta_h * 1e3:.1f} mm, h_max = {res.h_max * 1e3:.1f} mm")
    return EXIT_OK


# --- mechanism -------------------------------------------------------------

def cmd_mechanism_sweep(args):
    cfg = cfgmod.load(args.config, "cam")
    cfgmod.set_path(cfg, "stroke_mm", args.stroke_mm)
    cfgmod.set_path(cfg, "samples", args.samples)
    cfgmod.validate(cfgmod.strip_private(cfg), "cam")
    if cfg.get("detents") is not None and args.stroke_mm is not None:
        cfg["detents"][1]["s_mm"] = args.stroke_mm
    cam = mech.cam_from_json(cfg)
    rows = mech.sweep(cam, cfg.get("samples", 201))
    write_csv(_out(args, "mechanism_sweep.csv"), ["s_mm", "phi_deg", "U_mJ", "F_N"], rows)
    minima = mech.local_minima(cam)
    summary = {
        "stroke_mm": cam.stroke * 1e3,
        "rotation_at_stroke_deg": math.degrees(mech.rotation_of(cam.stroke, cam)),
        "minima_mm": [m * 1e3 for m in minima],
        "minima_states": [mech.lock_state(m, cam).value for m in minima],
        "required_force_n": mech.required_force(cam),
    }
    write_json(_out(args, "mechanism_summary.json"), summary)
    from dcl import plotting

    plotting.write_gnuplot(_out(args, "mechanism_sweep.gp"), "mechanism_sweep.csv", "mechanism_sweep.png",
                           "Flipping mechanism energy landscape", "push-rod travel (mm)", "U (mJ) / F (N)",
                           [(1, 3, "U (mJ)", "lines"), (1, 4, "F (N)", "lines")])
    if _figures(args):
        plotting.mechanism_figure(_out(args, "mechanism_sweep.png"), rows)
    print(f"{len(minima)} stable states at {', '.join(f'{m * 1e3:.3f} mm' for m in minima)}; "
          f"required force {summary['required_force_n']:.2f} N")
    return EXIT_OK


# --- mocap -----------------------------------------------------------------

def _format_table(rows, title):
    head = ("Experimental Group", "Max Height (H_max)", "Eff. Jump Height (dH)", "Relative Change (vs. Baseline)")
    body = []
    for r in rows:
        pct = r.get("relative_change_pct")
        body.append((r["group"], f"{r['max_height_mm']:.1f} mm", f"{r['eff_jump_height_mm']:.1f} mm",
                     "N/A" if pct is None else f"{pct:+.1f}%"))
    widths = [max(len(h), *(len(b[i]) for b in body)) for i, h in enumerate(head)]
    line = "-" * (sum(widths) + 3 * (len(widths) - 1))
    fmt = "   ".join(f"{{:<{w}}}" for w in widths)
    out = [title, line, fmt.format(*head).rstrip(), line]
    out += [fmt.format(*b).rstrip() for b in body]
    out.append(line)
    return "\n".join(out) + "\n"


def cmd_mocap_analyze(args):
    cfg = cfgmod.load(args.config, "mocap")
    cfgmod.set_path(cfg, "input_dir", args.input_dir)
    cfgmod.set_path(cfg, "h_base_mm", args.h_base_mm)
    cfgmod.set_path(cfg, "smoothing_window", args.smoothing_window)
    cfgmod.set_path(cfg, "baseline_mean_mm", args.baseline_mean_mm)
    if args.auto_h_base:
        cfg["auto_h_base"] = True
    cfgmod.validate(cfgmod.strip_private(cfg), "mocap")
    directory = cfgmod.resolve_input(cfg, cfg.get("input_dir")) or cfgmod.shipped_dataset()
    if not directory or not os.path.isdir(directory):
        raise ConfigError(f"invalid config field 'input_dir': not a directory: {cfg.get('input_dir')}")
    if not any(f.endswith(".csv") for f in os.listdir(directory)):
        raise ConfigError(f"invalid config field 'input_dir': no trial CSV files in {directory}")
    trials = mocap.analyze_directory(directory, cfg.get("h_base_mm", C.H_BASE_MM), cfg.get("smoothing_window", 5),
                                     cfg.get("body", "trunk"), cfg.get("auto_h_base", False))
    if len(trials) < 2:
        raise mocap.MocapError(f"need >=2 trials, found {len(trials)}")
    agg = mocap.aggregate_trials(trials, cfg.get("baseline_mean_mm"))
    write_csv(_out(args, "mocap_trials.csv"), ["trial", "h_max_mm", "h_base_mm", "delta_h_mm"],
              [(t.name, t.h_max, t.h_base, t.delta_h) for t in trials], fmt="{:.3f}")
    write_json(_out(args, "mocap_summary.json"), {**agg, "trials": [t.__dict__ for t in trials]})
    row = {"group": os.path.basename(os.path.normpath(directory)), "max_height_mm": agg["h_max_mean"],
           "eff_jump_height_mm": agg["mean"], "relative_change_pct": agg["delta_percent"]}
    text = _format_table([row], f"Mean over N={agg['n']} trials (std {agg['std']:.2f} mm)")
    write_text(_out(args, "mocap_table.txt"), text)
    print(text, end="")
    return EXIT_OK


def cmd_mocap_synth(args):
    truth = mocap.write_synthetic_dataset(args.output_dir, apexes=tuple(args.apex_mm), seed=args.seed,
                                          rate_hz=args.rate_hz, noise_mm=args.noise_mm)
    print(f"wrote {len(truth)} synthetic trials to {args.output_dir}")
    return EXIT_OK


# --- pipeline --------------------------------------------------------------

def run_table1(cfg, seed=0):
    """Fit, calibrate and simulate the three groups. Returns a report dict."""
    model, samples = cfgmod.build_stiffness(cfg, seed)
    params = cfgmod.build_robot(cfg)
    squat = cfg.get("squat_height_mm", C.H_BASE_MM) / 1000.0
    eng = cfg.get("engagement_flexion_deg")
    eng = None if eng is None else math.radians(eng)
    targets = cfg.get("targets", {})
    base_t = targets.get("baseline_mm", C.MEASURED_JUMPS["Baseline"]["delta_h_mm"])
    stow_t = targets.get("stowed_mm", C.MEASURED_JUMPS["Stowed"]["delta_h_mm"])
    dt = cfg.get("dt", 1e-4)
    template = dyn.JumpScenario(dyn.JumpMode.BASELINE, squat, None, eng)
    calibrated = dyn.calibrate(base_t, stow_t, params, template, dt)
    results = dyn.run_scenarios(calibrated, model, squat, dt, eng)
    base = results["Baseline"].delta_h
    band = tuple(cfg.get("band_pct", C.DEPLOYED_BAND_PCT))
    provenance = {"Baseline": "calibrated (knee_torque_max fitted)",
                  "Stowed": "calibrated (module_mass fitted)",
                  "Deployed": "predicted (no fitting)"}
    rows = []
    for name, res in results.items():
        rows.append({
            "group": name,
            "max_height_mm": res.h_max * 1e3,
            "eff_jump_height_mm": res.delta_h * 1e3,
            "relative_change_pct": None if name == "Baseline" else dyn.relative_change(res.delta_h, base),
            "provenance": provenance[name],
            "energy_motor_j": res.energy_motor,
            "energy_elastic_j": res.energy_elastic,
        })
    deployed = rows[2]["relative_change_pct"]
    return {
        "rows": rows,
        "results": results,
        "model": model,
        "samples": samples,
        "calibrated": calibrated,
        "band_pct": list(band),
        "deployed_in_band": band[0] <= deployed <= band[1],
        "measured": C.MEASURED_JUMPS,
    }


def _table1_text(report):
    rows = report["rows"]
    text = _format_table(rows, "Vertical jumping, simulated")
    lo, hi = report["band_pct"]
    dep = rows[2]["relative_change_pct"]
    p = report["calibrated"]
    notes = [
        f"[a] Baseline: calibrated, knee_torque_max = {p.knee_torque_max:.4f} N m per leg (fitted).",
        f"[b] Stowed: calibrated, module_mass = {p.module_mass * 1e3:.2f} g per module (fitted).",
        "[c] Deployed: predicted from the stiffness model; nothing fitted to this row.",
        f"    prediction band [{lo:+.1f}%, {hi:+.1f}%] | predicted {dep:+.1f}% | measured "
        f"{C.MEASURED_JUMPS['Deployed']['relative_change_pct']:+.1f}% | "
        f"{'inside' if report['deployed_in_band'] else 'OUTSIDE'} band",
        "[d] Stiffness coefficients are fitted to surrogate data, not published values: "
        + ", ".join(f"a{i}={a:.4g}" for i, a in enumerate(report["model"].alpha)),
        "    measured (N=5): " + "; ".join(
            f"{g} {v['max_height_mm']:.1f}/{v['delta_h_mm']:.1f} mm" for g, v in C.MEASURED_JUMPS.items()),
    ]
    return text + "\n".join(notes) + "\n"


def cmd_pipeline_table1(args):
    cfg = cfgmod.load(args.config, "pipeline")
    cfgmod.set_path(cfg, "stiffness.csv", args.stiffness_csv)
    if args.stiffness_csv:
        cfg["stiffness"]["source"] = "csv"
    cfgmod.set_path(cfg, "dt", args.dt)
    cfgmod.validate(cfgmod.strip_private(cfg), "pipeline")
    report = run_table1(cfg, args.seed)
    rows = report["rows"]
    write_csv(_out(args, "table1.csv"),
              ["group", "max_height_mm", "eff_jump_height_mm", "relative_change_pct", "provenance"],
              [(r["group"], r["max_height_mm"], r["eff_jump_height_mm"],
                "" if r["relative_change_pct"] is None else r["relative_change_pct"], r["provenance"])
               for r in rows], fmt="{:.3f}")
    text = _table1_text(report)
    write_text(_out(args, "table1.txt"), text)
    write_json(_out(args, "table1.json"), {
        "rows": rows,
        "band_pct": report["band_pct"],
        "deployed_in_band": report["deployed_in_band"],
        "calibrated_robot": report["calibrated"].__dict__,
        "stiffness_model": report["model"].to_json(),
        "measured": C.MEASURED_JUMPS,
        "seed": args.seed,
    })
    for name, res in report["results"].items():
        write_csv(_out(args, f"jump_{name.lower()}.csv"), TRAJ_HEADER, _trajectory_rows(res))
    args.stiffness_source = cfg.get("stiffness", {}).get("source", "surrogate")
    if report["samples"] is not None:
        _stiffness_outputs(args, report["model"], report["samples"])
    from dcl import plotting

    plotting.write_gnuplot(_out(args, "jump_trajectories.gp"), "jump_baseline.csv", "jump_trajectories.png",
                           "Stance phase", "time (s)", "hip height (m)", [(1, 2, "Baseline", "lines")])
    with open(_out(args, "jump_trajectories.gp"), "a", encoding="utf-8") as fh:
        fh.write("replot 'jump_stowed.csv' using 1:2 with lines title 'Stowed', "
                 "'jump_deployed.csv' using 1:2 with lines title 'Deployed'\n")
    plotting.write_gnuplot(_out(args, "table1.gp"), "table1.csv", "table1.png", "Effective jump height",
                           "group", "delta H (mm)", [(0, 3, "eff. jump height", "boxes")])
    if _figures(args):
        plotting.table1_figure(_out(args, "table1.png"), rows, report["band_pct"])
        plotting.trajectory_figure(_out(args, "jump_trajectories.png"),
                                   {k: v.trajectory for k, v in report["results"].items()})
    print(text, end="")
    return EXIT_OK


# --- parser ----------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file (defaults to the shipped config)")
    common.add_argument("--output-dir", default=".", help="directory for all outputs")
    common.add_argument("--seed", type=int, default=0, help="seed for every random draw")
    common.add_argument("--no-figures", action="store_true", help="skip matplotlib PNG rendering")

    p = argparse.ArgumentParser(prog="dcl", description="Deployable compliant leg design and analysis toolkit.")
    p.add_argument("--version", action="version", version=f"dcl {__version__}")
    groups = p.add_subparsers(dest="group", required=True)

    g = groups.add_parser("lattice", help="TPMS lattice generation").add_subparsers(dest="action", required=True)
    s = g.add_parser("gen", parents=[common], help="mesh a lattice module and report its density")
    s.add_argument("--kind", choices=[k.value for k in lat.TpmsKind])
    s.add_argument("--cell-size-mm", type=float)
    s.add_argument("--level", type=float)
    s.add_argument("--shell-halfwidth", type=float)
    s.add_argument("--target-density", type=float)
    s.add_argument("--resolution", type=int)
    s.add_argument("--samples-per-axis", type=int)
    s.set_defaults(func=cmd_lattice_gen)

    g = groups.add_parser("stiffness", help="torque-angle model identification").add_subparsers(dest="action",
                                                                                              required=True)
    s = g.add_parser("fit", parents=[common], help="fit the cubic torque law on the operating region")
    s.add_argument("--csv", help="theta_deg,torque_nm data file (default: surrogate data)")
    s.add_argument("--operating-max-deg", type=float)
    s.add_argument("--safety-max-deg", type=float)
    s.set_defaults(func=cmd_stiffness_fit)

    g = groups.add_parser("jump", help="vertical jump simulation").add_subparsers(dest="action", required=True)
    s = g.add_parser("sim", parents=[common], help="simulate one jump")
    s.add_argument("--mode", choices=[m.value for m in dyn.JumpMode])
    s.add_argument("--squat-height-mm", type=float)
    s.add_argument("--knee-torque-max", type=float)
    s.add_argument("--knee-speed-max", type=float)
    s.add_argument("--body-mass", type=float)
    s.add_argument("--dt", type=float)
    s.set_defaults(func=cmd_jump_sim)

    g = groups.add_parser("mechanism", help="flipping mechanism").add_subparsers(dest="action", required=True)
    s = g.add_parser("sweep", parents=[common], help="energy landscape across the stroke")
    s.add_argument("--stroke-mm", type=float)
    s.add_argument("--samples", type=int)
    s.set_defaults(func=cmd_mechanism_sweep)

    g = groups.add_parser("mocap", help="motion-capture analysis").add_subparsers(dest="action", required=True)
    s = g.add_parser("analyze", parents=[common], help="jump heights from a directory of marker CSVs")
    s.add_argument("--input-dir")
    s.add_argument("--h-base-mm", type=float)
    s.add_argument("--auto-h-base", action="store_true", help="estimate H_base from the pre-launch plateau")
    s.add_argument("--smoothing-window", type=int)
    s.add_argument("--baseline-mean-mm", type=float)
    s.set_defaults(func=cmd_mocap_analyze)
    s = g.add_parser("synth", parents=[common], help="write a synthetic 15-marker trial set")
    s.add_argument("--apex-mm", type=float, nargs="+", default=[656.3] * C.N_TRIALS)
    s.add_argument("--rate-hz", type=float, default=240.0)
    s.add_argument("--noise-mm", type=float, default=C.MOCAP_NOISE_MM)
    s.set_defaults(func=cmd_mocap_synth)

    g = groups.add_parser("pipeline", help="end-to-end reproductions").add_subparsers(dest="action", required=True)
    s = g.add_parser("table1", parents=[common], help="fit, calibrate and simulate Baseline/Stowed/Deployed")
    s.add_argument("--stiffness-csv", help="use external characterization data instead of the surrogate")
    s.add_argument("--dt", type=float)
    s.set_defaults(func=cmd_pipeline_table1)
    return p


def _module_of(exc):
    for cls, name in _MODULE_OF:
        if isinstance(exc, cls):
            return name
    return "error"


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        os.makedirs(args.output_dir, exist_ok=True)
        return args.func(args)
    except (ValueError, KeyError) as exc:
        msg = exc.args[0] if exc.args else exc
        print(f"dcl: {_module_of(exc)}: {msg}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"dcl: io: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
