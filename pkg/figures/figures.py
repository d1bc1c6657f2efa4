#!/usr/bin/env python3
"""Render publication-style figure panels from ctmqc run directories.

Consumes only the documented output schemas of the primary package: the
observables CSV, the optional per-trajectory population dump, the model
curves JSON, and the dt / trajectory-count sweep summaries. Rendering is a
pure function of the inputs; rerunning produces byte-identical images.

Colour and line-style code follows the benchmark convention: double
intercept black, regularisation red, cut-off blue; solid lines for the
energy-corrected variants, dashed otherwise; exact reference green.
"""

import argparse
import json
import os
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

VARIANT_COLOR = {"di": "black", "reg": "red", "cutoff": "blue"}
COUNT_COLOR = {20: "red", 50: "orange", 100: "blue", 200: "black", 500: "purple"}
EXACT_COLOR = "green"

SAVE_OPTS = dict(dpi=150, metadata={"Software": "ctmqc-figures"})


class SchemaError(RuntimeError):
    pass


def read_csv(path):
    if not os.path.exists(path):
        raise SchemaError(f"missing input file: {path}")
    data = np.genfromtxt(path, delimiter=",", names=True)
    if data.dtype.names is None:
        raise SchemaError(f"no header row in {path}")
    if data.ndim == 0:
        data = data.reshape(1)
    return {name: np.asarray(data[name]) for name in data.dtype.names}


def require(data, columns, path):
    missing = [c for c in columns if c not in data]
    if missing:
        raise SchemaError(f"{path} lacks required columns {missing}")


def load_run(run_dir):
    obs_path = os.path.join(run_dir, "observables.csv")
    obs = read_csv(obs_path)
    require(obs, ["t_fs", "pop0", "coherence", "energy_drift_ha",
                  "spurious_per_fs"], obs_path)
    run = {"obs": obs, "dir": run_dir, "method": "", "variant": ""}
    meta_path = os.path.join(run_dir, "meta.json")
    if os.path.exists(meta_path):
        cfg = json.load(open(meta_path)).get("config", {})
        run["method"] = cfg.get("method", "")
        run["variant"] = cfg.get("qm_variant", "")
    traj_path = os.path.join(run_dir, "traj_pop0.csv")
    if os.path.exists(traj_path):
        traj = read_csv(traj_path)
        cols = [k for k in traj if k.startswith("pop0_traj")]
        run["traj"] = (traj["t_fs"], np.vstack([traj[k] for k in cols]))
    curves_path = os.path.join(run_dir, "model_curves.json")
    if os.path.exists(curves_path):
        run["curves"] = json.load(open(curves_path))
    return run


def style_of(run):
    color = VARIANT_COLOR.get(run["variant"], "grey")
    solid = run["method"] == "ctmqc-e"
    return color, "-" if solid else "--"


def build_fig1(run_dirs, exact_dir):
    """Surface sketch, per-method populations with trajectory traces, and
    coherence, against the exact reference."""
    runs = [load_run(d) for d in run_dirs]
    exact = load_run(exact_dir) if exact_dir else None
    fig, axes = plt.subplots(
        len(runs) + 2, 1, figsize=(5.0, 2.1 * (len(runs) + 2)), sharex=False
    )
    sketch, pop_axes, coh_ax = axes[0], axes[1:-1], axes[-1]

    curves = next((r["curves"] for r in runs if "curves" in r), None)
    if curves is None:
        raise SchemaError("no model_curves.json among the run directories")
    r = np.asarray(curves["r_bohr"])
    sketch.plot(r, curves["e0_ha"], color="black", lw=1.0)
    sketch.plot(r, curves["e1_ha"], color="black", lw=1.0)
    sketch.plot(r, np.asarray(curves["nacv01"]) / 50.0, color="orange", lw=1.0)
    dens = np.asarray(curves["initial_density"])
    sketch.plot(r, dens / np.max(dens) * 0.01, color="tab:blue", lw=1.0)
    sketch.set_ylabel("E (Ha)")
    sketch.set_xlabel("R (bohr)")

    for ax, run in zip(pop_axes, runs):
        if "traj" in run:
            t_traj, pops = run["traj"]
            step = max(1, pops.shape[0] // 80)
            ax.plot(t_traj, pops[::step].T, color="0.7", lw=0.3, zorder=1)
        color, _ = style_of(run)
        ax.plot(run["obs"]["t_fs"], run["obs"]["pop0"], color=color, lw=1.8, zorder=3)
        if exact is not None:
            ax.plot(exact["obs"]["t_fs"], exact["obs"]["pop0"],
                    color=EXACT_COLOR, lw=1.8, zorder=2)
        ax.set_ylim(-0.05, 1.05)
        ax.set_ylabel("pop$_0$")

    for run in runs:
        color, _ = style_of(run)
        coh_ax.plot(run["obs"]["t_fs"], run["obs"]["coherence"], color=color, lw=1.5)
    if exact is not None:
        coh_ax.plot(exact["obs"]["t_fs"], exact["obs"]["coherence"],
                    color=EXACT_COLOR, lw=1.8)
    coh_ax.set_xlabel("t (fs)")
    coh_ax.set_ylabel("coherence")
    fig.tight_layout()
    return fig


def build_fig2(sweep_dirs):
    """Norm deviation and |energy drift| against the integration step."""
    fig, (ax_norm, ax_e) = plt.subplots(2, 1, figsize=(5.0, 6.0), sharex=True)
    for d in sorted(sweep_dirs):
        path = os.path.join(d, "sweep_dt.csv")
        data = read_csv(path)
        require(data, ["dt_as", "abs_drift_mean_ha", "abs_drift_std_ha",
                       "norm_dev_mean", "norm_dev_std"], path)
        run = load_run_meta_only(d)
        color, style = style_of(run)
        order = np.argsort(data["dt_as"])
        ax_norm.errorbar(data["dt_as"][order], data["norm_dev_mean"][order],
                         yerr=data["norm_dev_std"][order], color=color,
                         ls=style, marker="o", ms=3, lw=1.2, capsize=2)
        ax_e.errorbar(data["dt_as"][order], data["abs_drift_mean_ha"][order],
                      yerr=data["abs_drift_std_ha"][order], color=color,
                      ls=style, marker="o", ms=3, lw=1.2, capsize=2)
    ax_norm.set_yscale("log")
    ax_e.set_yscale("log")
    ax_norm.set_ylabel("|1 - norm|")
    ax_e.set_ylabel(r"|$\Delta E_{sim}$| (Ha)")
    ax_e.set_xlabel("dt (as)")
    fig.tight_layout()
    return fig


def load_run_meta_only(run_dir):
    run = {"method": "", "variant": ""}
    meta_path = os.path.join(run_dir, "meta.json")
    if os.path.exists(meta_path):
        cfg = json.load(open(meta_path)).get("config", {})
        run["method"] = cfg.get("method", "")
        run["variant"] = cfg.get("qm_variant", "")
    return run


def build_fig3(run_dirs):
    """Zero-transfer indicator and trajectory-averaged drift against time."""
    fig, (ax_s, ax_e) = plt.subplots(2, 1, figsize=(5.0, 6.0), sharex=True)
    for d in run_dirs:
        run = load_run(d)
        color, style = style_of(run)
        t = run["obs"]["t_fs"]
        ax_s.plot(t, np.abs(run["obs"]["spurious_per_fs"]) + 1e-30,
                  color=color, ls=style, lw=1.2)
        ax_e.plot(t, run["obs"]["energy_drift_ha"], color=color, ls=style, lw=1.2)
    ax_s.set_yscale("log")
    ax_s.set_ylabel("|indicator| (1/fs)")
    ax_e.set_ylabel(r"$\Delta E(t)$ (Ha)")
    ax_e.set_xlabel("t (fs)")
    fig.tight_layout()
    return fig


def build_figS1(sweep_dir, exact_dir):
    """Population and coherence convergence with the swarm size."""
    path = os.path.join(sweep_dir, "sweep_ntraj.csv")
    data = read_csv(path)
    require(data, ["t_fs"], path)
    counts = sorted(
        int(k.split("_n")[1]) for k in data if k.startswith("pop0_n")
    )
    if not counts:
        raise SchemaError(f"{path} has no pop0_n<count> columns")
    fig, (ax_p, ax_c) = plt.subplots(2, 1, figsize=(5.0, 6.0), sharex=True)
    for count in counts:
        color = COUNT_COLOR.get(count, "grey")
        ax_p.plot(data["t_fs"], data[f"pop0_n{count}"], color=color, lw=1.2)
        ax_c.plot(data["t_fs"], data[f"coherence_n{count}"], color=color, lw=1.2)
    if exact_dir:
        exact = load_run(exact_dir)
        ax_p.plot(exact["obs"]["t_fs"], exact["obs"]["pop0"], color=EXACT_COLOR, lw=1.8)
        ax_c.plot(exact["obs"]["t_fs"], exact["obs"]["coherence"], color=EXACT_COLOR, lw=1.8)
    ax_p.set_ylabel("pop$_0$")
    ax_c.set_ylabel("coherence")
    ax_c.set_xlabel("t (fs)")
    fig.tight_layout()
    return fig


def build_figS_model(run_dirs, run_dirs2):
    """Per-model summary: populations, coherence and drift for the six
    method/variant combinations at two momenta (left/right columns)."""
    groups = [d for d in (run_dirs, run_dirs2) if d]
    fig, axes = plt.subplots(3, len(groups), figsize=(4.5 * len(groups), 8.0),
                             sharex="col", squeeze=False)
    for col, dirs in enumerate(groups):
        for d in dirs:
            run = load_run(d)
            color, style = style_of(run)
            t = run["obs"]["t_fs"]
            axes[0][col].plot(t, run["obs"]["pop0"], color=color, ls=style, lw=1.1)
            axes[1][col].plot(t, run["obs"]["coherence"], color=color, ls=style, lw=1.1)
            axes[2][col].plot(t, run["obs"]["energy_drift_ha"], color=color,
                              ls=style, lw=1.1)
        axes[2][col].set_xlabel("t (fs)")
    axes[0][0].set_ylabel("pop$_0$")
    axes[1][0].set_ylabel("coherence")
    axes[2][0].set_ylabel(r"$\Delta E(t)$ (Ha)")
    fig.tight_layout()
    return fig


BUILDERS = {
    "fig1": lambda a: build_fig1(a.runs, a.exact),
    "fig2": lambda a: build_fig2(a.runs),
    "fig3": lambda a: build_fig3(a.runs),
    "figS1": lambda a: build_figS1(a.runs[0], a.exact),
    "figS2": lambda a: build_figS_model(a.runs, a.runs2),
    "figS3": lambda a: build_figS_model(a.runs, a.runs2),
    "figS4": lambda a: build_figS_model(a.runs, a.runs2),
    "figS5": lambda a: build_figS_model(a.runs, a.runs2),
}


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--spec", required=True, choices=sorted(BUILDERS))
    parser.add_argument("--runs", nargs="+", required=True,
                        help="run or sweep directories")
    parser.add_argument("--runs2", nargs="*", default=[],
                        help="second momentum group (per-model summaries)")
    parser.add_argument("--exact", help="exact reference directory")
    parser.add_argument("--out", required=True, help="output image path")
    args = parser.parse_args(argv)
    try:
        fig = BUILDERS[args.spec](args)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 1
    fig.savefig(args.out, **SAVE_OPTS)
    plt.close(fig)
    return 0


if __name__ == "__main__":
    sys.exit(main())
