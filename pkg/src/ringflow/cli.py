"""Command-line front end: subcommands, config files, figure-data presets."""

from __future__ import annotations

import argparse
import configparser
import hashlib
import json
import math
import os
import re
import sys
from dataclasses import replace
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .dynamics import run_quench
from .errors import ConvergenceError, DimensionCapError
from .noon import (
    chain_gap_numeric,
    fig4_interaction,
    noon_gap_closed_form,
    noon_validity,
)
from .params import (
    ATOMIC_MASS_KG,
    PhysicalRing,
    SystemParams,
    lieb_liniger_gamma,
    to_physical,
)
from .single_particle import levels, tg_gap, tg_ground_energy, tg_spectrum
from .solver import DEFAULT_SEED, DEFAULT_TOL, solve_lowest
from .sweep import (
    SolveCache,
    SweepSpec,
    fig2_spec,
    fig3a_spec,
    linear_grid,
    log_grid,
    point_report,
    run_sweep,
)
from .validate import run_validation

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CONVERGENCE = 3
EXIT_DIMENSION = 4

SWEEP_COLUMNS = "param,gamma,g_tilde,E0_level,E1_level,deltaE,P0,PN,Q,Qbar_loss,iters,residual"


def fmt(x) -> str:
    if x is None:
        return "nan"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    return f"{x:.16e}"


_PATH_KEYS = {"output", "report", "distributions_dir"}


def _digest(command: str, parameters: dict, seed: int, tol: float) -> str:
    physical = {k: v for k, v in parameters.items() if k not in _PATH_KEYS}
    blob = json.dumps(
        {"command": command, "parameters": physical, "seed": seed, "tol": tol},
        sort_keys=True,
    )
    return hashlib.sha256(blob.encode()).hexdigest()


def write_manifest(output_path: str, command: str, parameters: dict, seed: int, tol: float) -> str:
    digest = _digest(command, parameters, seed, tol)
    manifest = {
        "tool": "ringflow",
        "version": __version__,
        "command": command,
        "parameters": parameters,
        "seed": seed,
        "tol": tol,
        "config_digest": digest,
        "created_utc": datetime.now(timezone.utc).isoformat(),
        "output": output_path,
    }
    with open(output_path + ".manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return digest


def load_config(path: str) -> dict[str, dict[str, str]]:
    """Load an INI config or a previously written manifest JSON."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if path.endswith(".json") or text.lstrip().startswith("{"):
        manifest = json.loads(text)
        section = {str(k): v for k, v in manifest.get("parameters", {}).items()}
        out = {str(manifest.get("command", "")): section}
        for key in ("seed", "tol"):
            if key in manifest:
                out.setdefault("global", {})[key] = manifest[key]
        return out
    parser = configparser.ConfigParser()
    parser.read_string(text)
    return {name: dict(parser[name]) for name in parser.sections()}


def _coerce(value, reference):
    if value is None or reference is None:
        return value
    if isinstance(reference, bool):
        if isinstance(value, bool):
            return value
        return str(value).strip().lower() in ("1", "true", "yes", "on")
    if isinstance(reference, int):
        return int(value)
    if isinstance(reference, float):
        return float(value)
    return str(value)


def resolve(command: str, defaults: dict, args: argparse.Namespace, config: dict) -> dict:
    """Defaults < config section < explicit flags."""
    section = config.get(command, {})
    resolved = {}
    for key, default in defaults.items():
        value = getattr(args, key, None)
        if value is None and key in section:
            value = _coerce(section[key], default)
        if value is None:
            value = default
        resolved[key] = value
    return resolved


def _print_or_write(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_report(payload: dict, output: str | None) -> None:
    _print_or_write(json.dumps(payload, indent=2, sort_keys=True) + "\n", output)


# ---------------------------------------------------------------- sweep

SWEEP_DEFAULTS = {
    "figure": "",
    "param": "interaction",
    "scale": "log",
    "start": 1e-4,
    "stop": 1e3,
    "points": 60,
    "atoms": 5,
    "modes": 20,
    "interaction": 0.1,
    "barrier": 0.008,
    "phase_over_pi": 1.0,
    "gamma": 200.0,
    "rescale": True,
    "warm_start": True,
    "outputs": "delta_e,distribution,quality,loss",
    "output": "",
}


def _sweep_spec_from(opts: dict, seed: int, tol: float) -> tuple[SweepSpec, str]:
    figure = opts["figure"]
    if figure == "fig4":
        raise ValueError("fig4 is produced by the `noon` subcommand")
    if figure in ("fig2", "fig3"):
        spec = fig2_spec(
            n_atoms=opts["atoms"],
            n_modes=opts["modes"],
            barrier=opts["barrier"],
            points=opts["points"],
            tol=tol,
            seed=seed,
        )
        default_name = f"{figure}.csv"
    elif figure == "fig3a":
        spec = fig3a_spec(gamma=opts["gamma"], barrier=opts["barrier"], tol=tol, seed=seed)
        default_name = "fig3a.csv"
    elif figure:
        raise ValueError(f"unknown figure preset {figure!r}")
    else:
        base = SystemParams(
            n_atoms=opts["atoms"],
            n_modes=opts["modes"],
            interaction=opts["interaction"],
            barrier=opts["barrier"],
            phase=opts["phase_over_pi"] * math.pi,
        )
        grid_fn = log_grid if opts["scale"] == "log" else linear_grid
        outputs = frozenset(s.strip() for s in opts["outputs"].split(",") if s.strip())
        spec = SweepSpec(
            parameter=opts["param"],
            grid=grid_fn(opts["start"], opts["stop"], opts["points"]),
            base=base,
            outputs=outputs,
            rescale=opts["rescale"],
            warm_start=opts["warm_start"],
            tol=tol,
            seed=seed,
        )
        default_name = f"sweep_{opts['param']}.csv"
    spec = replace(spec, rescale=opts["rescale"], warm_start=opts["warm_start"])
    return spec, (opts["output"] or default_name)


def write_sweep_csv(path: str, spec: SweepSpec, records, digest: str) -> None:
    lines = [
        f"# ringflow {__version__} sweep",
        f"# manifest: sha256:{digest}",
        "# units: couplings in E0*L, energies in E0, momenta in hbar",
        (
            f"# base: N={spec.base.n_atoms} r={spec.base.n_modes} "
            f"g={fmt(spec.base.interaction)} b={fmt(spec.base.barrier)} "
            f"omega={fmt(spec.base.phase)} sweep={spec.parameter} "
            f"points={spec.grid.size} rescale={spec.rescale} "
            f"warm_start={spec.warm_start} seed={spec.seed} tol={fmt(spec.tol)}"
        ),
        "# " + SWEEP_COLUMNS,
    ]
    for rec in records:
        lines.append(
            ",".join(
                [
                    fmt(rec.value),
                    fmt(rec.gamma),
                    fmt(rec.g_tilde),
                    fmt(rec.e0),
                    fmt(rec.e1),
                    fmt(rec.delta_e),
                    fmt(rec.p0),
                    fmt(rec.pn),
                    fmt(rec.quality),
                    fmt(rec.qbar_loss),
                    str(rec.iterations),
                    fmt(rec.residual),
                ]
            )
        )
    for i, rec in enumerate(records):
        if rec.error:
            lines.append(f"# point {i} error: {rec.error}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def handle_sweep(opts: dict, gopts: dict) -> int:
    spec, output = _sweep_spec_from(opts, gopts["seed"], gopts["tol"])
    if gopts["dry_run"]:
        payload = dict(opts)
        payload["resolved_output"] = output
        payload["grid_head"] = [float(v) for v in spec.grid[:3]]
        _json_report(
            {"command": "sweep", "parameters": payload,
             "config_digest": _digest("sweep", opts, gopts["seed"], gopts["tol"])},
            None,
        )
        return EXIT_OK
    records = run_sweep(spec, threads=gopts["threads"])
    if records and all(rec.error for rec in records):
        # per-point capture is for partial failures; a fully failed sweep is
        # reported through the exit code of the first failure
        message = records[0].error
        if message.startswith("DimensionCapError"):
            raise DimensionCapError(message)
        if message.startswith("ConvergenceError"):
            raise ConvergenceError(message)
        raise ValueError(message)
    digest = write_manifest(output, "sweep", opts, gopts["seed"], gopts["tol"])
    write_sweep_csv(output, spec, records, digest)
    print(f"wrote {output} ({len(records)} points)")
    return EXIT_OK


# ---------------------------------------------------------------- spectrum

SPECTRUM_DEFAULTS = {
    "method": "ed",
    "atoms": 3,
    "modes": 8,
    "interaction": 1.0,
    "barrier": 0.008,
    "levels": 4,
    "omega_start": 0.85,
    "omega_stop": 1.15,
    "omega_points": 31,
    "allow_even": False,
    "max_iterations": 0,
    "output": "",
}


def handle_spectrum(opts: dict, gopts: dict) -> int:
    omegas = np.linspace(opts["omega_start"], opts["omega_stop"], opts["omega_points"])
    m = opts["levels"]
    if gopts["dry_run"]:
        _json_report({"command": "spectrum", "parameters": opts}, None)
        return EXIT_OK
    rows = []
    for w in omegas:
        if opts["method"] == "tg":
            vals = tg_spectrum(
                opts["atoms"], opts["barrier"], w * math.pi, m, allow_even=opts["allow_even"]
            )
        else:
            params = SystemParams(
                n_atoms=opts["atoms"],
                n_modes=opts["modes"],
                interaction=opts["interaction"],
                barrier=opts["barrier"],
                phase=w * math.pi,
            )
            vals = solve_lowest(
                params, m=m, tol=gopts["tol"], seed=gopts["seed"],
                max_iterations=opts["max_iterations"] or None,
            ).eigenvalues
        rows.append((w, vals))
    output = opts["output"] or f"spectrum_{opts['method']}.csv"
    digest = write_manifest(output, "spectrum", opts, gopts["seed"], gopts["tol"])
    header = "omega_over_pi," + ",".join(f"level_{i}" for i in range(m))
    lines = [
        f"# ringflow {__version__} spectrum ({opts['method']})",
        f"# manifest: sha256:{digest}",
        "# energies in E0",
        "# " + header,
    ]
    for w, vals in rows:
        lines.append(",".join([fmt(w)] + [fmt(v) for v in vals]))
    with open(output, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    print(f"wrote {output} ({len(rows)} phases)")
    return EXIT_OK


# ---------------------------------------------------------------- single-particle

SP_DEFAULTS = {
    "barrier": 0.008,
    "omega_over_pi": 1.0,
    "count": 8,
    "tg_atoms": 0,
    "allow_even": False,
    "output": "",
}


def handle_single_particle(opts: dict, gopts: dict) -> int:
    if gopts["dry_run"]:
        _json_report({"command": "single-particle", "parameters": opts}, None)
        return EXIT_OK
    if opts["tg_atoms"]:
        n = opts["tg_atoms"]
        payload = {
            "n_atoms": n,
            "barrier": opts["barrier"],
            "tg_gap_E0": tg_gap(n, opts["barrier"], allow_even=opts["allow_even"]),
            "tg_ground_energy_E0": tg_ground_energy(n, opts["barrier"]),
            "max_gap_limit_E0": n / 2 + 0.25,
        }
        _json_report(payload, opts["output"] or None)
        return EXIT_OK
    sol = levels(opts["barrier"], opts["omega_over_pi"] * math.pi, opts["count"])
    lines = [
        f"# ringflow {__version__} single-particle levels",
        f"# b={fmt(opts['barrier'])} omega={fmt(sol.phase)}",
        "# mu,alpha,energy_E0",
    ]
    for mu, (alpha, eps) in enumerate(zip(sol.roots, sol.energies)):
        lines.append(f"{mu},{fmt(alpha)},{fmt(eps)}")
    _print_or_write("\n".join(lines) + "\n", opts["output"] or None)
    return EXIT_OK


# ---------------------------------------------------------------- noon

NOON_DEFAULTS = {
    "atoms_min": 2,
    "atoms_max": 8,
    "barrier": 0.008,
    "interaction": 0.0,  # 0 means: use the gap-scaling rule g = 4*pi*b*sqrt(N)/(N-1)
    "with_ed": False,
    "ed_max_atoms": 5,
    "ed_modes": 20,
    "output": "",
}


def handle_noon(opts: dict, gopts: dict) -> int:
    if gopts["dry_run"]:
        _json_report({"command": "noon", "parameters": opts}, None)
        return EXIT_OK
    rows = []
    cache = SolveCache()
    for n in range(opts["atoms_min"], opts["atoms_max"] + 1):
        g = opts["interaction"] or fig4_interaction(n, opts["barrier"])
        closed = noon_gap_closed_form(n, g, opts["barrier"])
        chain = chain_gap_numeric(n, g, opts["barrier"])
        validity = noon_validity(n, g, opts["barrier"])
        ed = math.nan
        if opts["with_ed"] and n <= opts["ed_max_atoms"]:
            params = SystemParams(
                n_atoms=n,
                n_modes=opts["ed_modes"],
                interaction=g,
                barrier=opts["barrier"],
                phase=math.pi,
            )
            solution, _, _, _ = point_report(
                params, cache=cache, with_loss=False, tol=gopts["tol"], seed=gopts["seed"]
            )
            ed = float(solution.eigenvalues[1] - solution.eigenvalues[0])
        rows.append((n, g, closed, chain, chain / closed, ed, validity))
    output = opts["output"] or "fig4.csv"
    digest = write_manifest(output, "noon", opts, gopts["seed"], gopts["tol"])
    lines = [
        f"# ringflow {__version__} noon gap scaling",
        f"# manifest: sha256:{digest}",
        f"# b={fmt(opts['barrier'])}; energies in E0",
        "# n_atoms,interaction,gap_closed_form,gap_chain,chain_over_closed,"
        "gap_ed,ratio_barrier,ratio_interaction,condition_met",
    ]
    for n, g, closed, chain, ratio, ed, validity in rows:
        lines.append(
            ",".join(
                [
                    str(n),
                    fmt(g),
                    fmt(closed),
                    fmt(chain),
                    fmt(ratio),
                    fmt(ed),
                    fmt(validity.ratio_barrier),
                    fmt(validity.ratio_interaction),
                    str(validity.condition_met),
                ]
            )
        )
    with open(output, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    print(f"wrote {output} ({len(rows)} atom numbers)")
    return EXIT_OK


# ---------------------------------------------------------------- loss

LOSS_DEFAULTS = {
    "atoms": 3,
    "modes": 8,
    "interaction": 1.0,
    "barrier": 0.008,
    "phase_over_pi": 1.0,
    "distributions_dir": "",
    "output": "",
}


def _write_distribution(path: str, dist, header: str) -> None:
    lines = [f"# {header}", "# K,P"]
    for k, p in zip(dist.momenta, dist.probabilities):
        lines.append(f"{int(k)},{fmt(p)}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def handle_loss(opts: dict, gopts: dict) -> int:
    if gopts["dry_run"]:
        _json_report({"command": "loss", "parameters": opts}, None)
        return EXIT_OK
    params = SystemParams(
        n_atoms=opts["atoms"],
        n_modes=opts["modes"],
        interaction=opts["interaction"],
        barrier=opts["barrier"],
        phase=opts["phase_over_pi"] * math.pi,
    )
    cache = SolveCache()
    keep = bool(opts["distributions_dir"])
    solution, coupling, dist, loss = point_report(
        params, cache=cache, tol=gopts["tol"], seed=gopts["seed"], keep_distributions=keep
    )
    _, _, _, loss_post = point_report(
        params, cache=cache, tol=gopts["tol"], seed=gopts["seed"], post_loss_weights=True
    )
    payload = {
        "n_atoms": params.n_atoms,
        "n_modes": params.n_modes,
        "interaction": params.interaction,
        "g_tilde": coupling.g_tilde,
        "barrier": params.barrier,
        "phase": params.phase,
        "gamma": lieb_liniger_gamma(params),
        "E0_level": float(solution.eigenvalues[0]),
        "E1_level": float(solution.eigenvalues[1]),
        "deltaE": float(solution.eigenvalues[1] - solution.eigenvalues[0]),
        "P0": dist.p_of(0),
        "PN": dist.p_of(params.n_atoms),
        "Q": 4.0 * dist.p_of(0) * dist.p_of(params.n_atoms),
        "qbar_pre_loss_weights": loss.qbar,
        "qbar_post_loss_weights": loss_post.qbar,
        "weighting_note": (
            "pre-loss weighting is the default (weights sum to 1); the "
            "post-loss variant is reported for comparison"
        ),
        "modes": [
            {"k": e.k, "occupation": e.occupation, "quality": e.quality, "weight": e.weight}
            for e in loss.entries
        ],
    }
    if keep:
        os.makedirs(opts["distributions_dir"], exist_ok=True)
        _write_distribution(
            os.path.join(opts["distributions_dir"], "ground.csv"), dist, "ground state P(K)"
        )
        for entry in loss.entries:
            if entry.distribution is not None:
                _write_distribution(
                    os.path.join(opts["distributions_dir"], f"loss_k{entry.k}.csv"),
                    entry.distribution,
                    f"P(K) after losing one atom from k={entry.k}",
                )
    _json_report(payload, opts["output"] or None)
    return EXIT_OK


# ---------------------------------------------------------------- dynamics

DYNAMICS_DEFAULTS = {
    "atoms": 3,
    "modes": 8,
    "interaction": 1.0,
    "barrier": 0.008,
    "omega_initial_over_pi": 0.9,
    "omega_final_over_pi": 1.0,
    "periods": 20.0,
    "samples_per_period": 48,
    "output": "",
    "report": "",
}


def handle_dynamics(opts: dict, gopts: dict) -> int:
    if gopts["dry_run"]:
        _json_report({"command": "dynamics", "parameters": opts}, None)
        return EXIT_OK
    params = SystemParams(
        n_atoms=opts["atoms"],
        n_modes=opts["modes"],
        interaction=opts["interaction"],
        barrier=opts["barrier"],
        phase=opts["omega_final_over_pi"] * math.pi,
    )
    report = run_quench(
        params,
        phase_initial=opts["omega_initial_over_pi"] * math.pi,
        periods=opts["periods"],
        samples_per_period=opts["samples_per_period"],
        tol=gopts["tol"],
        seed=gopts["seed"],
    )
    output = opts["output"] or "dynamics.csv"
    digest = write_manifest(output, "dynamics", opts, gopts["seed"], gopts["tol"])
    lines = [
        f"# ringflow {__version__} quench trace",
        f"# manifest: sha256:{digest}",
        "# time in hbar/E0",
        "# t,P_K0,norm",
    ]
    for t, p, n in zip(report.result.times, report.result.traces["P_K0"], report.result.norms):
        lines.append(f"{fmt(t)},{fmt(p)},{fmt(n)}")
    with open(output, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
    payload = {
        "deltaE_solver": report.delta_e,
        "fft_peak": report.fft_peak,
        "relative_deviation": report.relative_deviation,
        "norm_drift": report.norm_drift,
        "energy_drift": report.energy_drift,
        "steps_taken": report.result.steps_taken,
        "rejected_steps": report.result.rejected_steps,
        "trace_file": output,
    }
    _json_report(payload, opts["report"] or None)
    return EXIT_OK


# ---------------------------------------------------------------- units

UNITS_DEFAULTS = {
    "atoms": 100,
    "species": "mass=7u",
    "mass_kg": 0.0,
    "radius": 50e-6,
    "deltaE": 25.0,
    "phase_over_pi": 1.0,
    "output": "",
}


def _parse_species(spec: str) -> float:
    match = re.fullmatch(r"mass=([0-9eE.+-]+)(u|kg)", spec.strip())
    if not match:
        raise ValueError(f"cannot parse species {spec!r}; expected mass=<value>u or mass=<value>kg")
    value = float(match.group(1))
    return value * ATOMIC_MASS_KG if match.group(2) == "u" else value


def handle_units(opts: dict, gopts: dict) -> int:
    if gopts["dry_run"]:
        _json_report({"command": "units", "parameters": opts}, None)
        return EXIT_OK
    mass = opts["mass_kg"] or _parse_species(opts["species"])
    ring = PhysicalRing(atom_mass=mass, ring_radius=opts["radius"])
    params = SystemParams(
        n_atoms=opts["atoms"], n_modes=2, phase=opts["phase_over_pi"] * math.pi
    )
    _json_report(to_physical(params, ring, opts["deltaE"]), opts["output"] or None)
    return EXIT_OK


# ---------------------------------------------------------------- validate

VALIDATE_DEFAULTS = {"output": ""}


def handle_validate(opts: dict, gopts: dict) -> int:
    if gopts["dry_run"]:
        _json_report({"command": "validate", "parameters": opts}, None)
        return EXIT_OK
    report = run_validation(verbose_print=print)
    if opts["output"]:
        _json_report(report, opts["output"])
    return EXIT_OK if report["all_passed"] else 1


# ---------------------------------------------------------------- parser

DEFAULTS_BY_COMMAND = {
    "sweep": SWEEP_DEFAULTS,
    "spectrum": SPECTRUM_DEFAULTS,
    "single-particle": SP_DEFAULTS,
    "noon": NOON_DEFAULTS,
    "loss": LOSS_DEFAULTS,
    "dynamics": DYNAMICS_DEFAULTS,
    "units": UNITS_DEFAULTS,
    "validate": VALIDATE_DEFAULTS,
}

HANDLERS = {
    "sweep": handle_sweep,
    "spectrum": handle_spectrum,
    "single-particle": handle_single_particle,
    "noon": handle_noon,
    "loss": handle_loss,
    "dynamics": handle_dynamics,
    "units": handle_units,
    "validate": handle_validate,
}


def _add_flags(parser: argparse.ArgumentParser, defaults: dict) -> None:
    for key, default in defaults.items():
        flag = "--" + key.replace("_", "-")
        if isinstance(default, bool):
            group = parser.add_mutually_exclusive_group()
            group.add_argument(flag, dest=key, action="store_true", default=None)
            group.add_argument(
                "--no-" + key.replace("_", "-"), dest=key, action="store_false", default=None
            )
        elif isinstance(default, int):
            parser.add_argument(flag, dest=key, type=int, default=None)
        elif isinstance(default, float):
            parser.add_argument(flag, dest=key, type=float, default=None)
        else:
            parser.add_argument(flag, dest=key, type=str, default=None)


def build_parser() -> argparse.ArgumentParser:
    # SUPPRESS keeps subparser defaults from clobbering values parsed before
    # the subcommand name (global flags work in either position)
    shared = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    shared.add_argument("--seed", type=int, help="solver start-vector seed")
    shared.add_argument("--tol", type=float, help="eigensolver tolerance")
    shared.add_argument("--threads", type=int, help="worker threads for sweeps")
    shared.add_argument("--config", type=str, help="INI config or manifest JSON")
    shared.add_argument(
        "--json-errors", dest="json_errors", action="store_const", const=True,
        help="machine-readable errors",
    )
    shared.add_argument(
        "--dry-run", dest="dry_run", action="store_const", const=True,
        help="print the resolved spec and exit",
    )
    parser = argparse.ArgumentParser(
        prog="ringflow",
        parents=[shared],
        description=(
            "Diagonalization and analytics for superpositions of circulating "
            "states of interacting bosons on a barrier ring"
        ),
    )
    parser.add_argument("--version", action="version", version=f"ringflow {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, defaults in DEFAULTS_BY_COMMAND.items():
        sp = sub.add_parser(name, parents=[shared])
        _add_flags(sp, defaults)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    json_errors = bool(getattr(args, "json_errors", False))
    try:
        config_path = getattr(args, "config", None)
        config = load_config(config_path) if config_path else {}
        gsection = config.get("global", {})
        seed = getattr(args, "seed", None)
        tol = getattr(args, "tol", None)
        threads = getattr(args, "threads", None)
        gopts = {
            "seed": seed if seed is not None else int(gsection.get("seed", DEFAULT_SEED)),
            "tol": tol if tol is not None else float(gsection.get("tol", DEFAULT_TOL)),
            "threads": threads if threads is not None else int(gsection.get("threads", 1)),
            "dry_run": bool(getattr(args, "dry_run", False)),
        }
        opts = resolve(args.command, DEFAULTS_BY_COMMAND[args.command], args, config)
        return HANDLERS[args.command](opts, gopts)
    except DimensionCapError as exc:
        _report_error(exc, EXIT_DIMENSION, json_errors)
        return EXIT_DIMENSION
    except ConvergenceError as exc:
        _report_error(exc, EXIT_CONVERGENCE, json_errors)
        return EXIT_CONVERGENCE
    except (ValueError, OSError, KeyError, configparser.Error, json.JSONDecodeError) as exc:
        _report_error(exc, EXIT_USAGE, json_errors)
        return EXIT_USAGE


def _report_error(exc: Exception, code: int, json_errors: bool) -> None:
    if json_errors:
        print(
            json.dumps({"error": str(exc), "type": type(exc).__name__, "exit_code": code}),
            file=sys.stderr,
        )
    else:
        print(f"error: {exc}", file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
