"""``dqform`` command line: spectra, Gershgorin reports, graph checks and simulations.

Exit codes: 0 success, 1 I/O failure, 2 invalid input, 3 numerical instability.
Reports use 1-based vertex and eigenvalue indices; input files are 0-based.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Callable

import numpy as np

from . import __version__
from .dual import format_dual
from .errors import ConvergenceFailure, StepRejected, Unstable, ValidationError
from .formation import (
    Scenario,
    StabilityCertificate,
    check_target,
    control_inputs,
    simulate,
    simulate_pose_mode,
    stability_certificate,
)
from .graph import (
    CYCLE_TOL,
    LaplacianBundle,
    VisibilityGraph,
    adjacency_from_measurements,
    build_adjacency,
    cycle_consistency,
    deviation_size,
    fundamental_cycles,
    laplacian,
    laplacian_spectrum_report,
    log_adjacency,
    reduce_to_tree,
    unit_weight_adjacency,
)
from .io import (
    dumps,
    load_json,
    one_based,
    parse_graph,
    parse_matrix,
    parse_measurements,
    parse_poses,
    parse_vector,
    trajectory_csv,
    write_text,
)
from .matrix import DQMatrix, gershgorin, herm_eigen
from .sampling import make_rng, random_connected_graph, random_hermitian, random_pose_assignment, random_state

log = logging.getLogger("dqform")

GENERATOR = "Philox4x64"
MAX_RECORDS = 1000

EXIT_OK, EXIT_IO, EXIT_VALIDATION, EXIT_UNSTABLE = 0, 1, 2, 3


# ---------------------------------------------------------------------------
# input assembly

def _graph_and_adjacency(obj: dict) -> tuple[VisibilityGraph, DQMatrix, str]:
    g = parse_graph(obj)
    poses = parse_poses(obj, g.n)
    measured = parse_measurements(obj)
    default = "config" if (poses is not None or measured is not None) else "unit"
    weights = obj.get("weights", default)
    if weights == "unit":
        return g, unit_weight_adjacency(g), weights
    if weights != "config":
        raise ValidationError(f"weights must be 'config' or 'unit', got {weights!r}")
    if measured is not None:
        return g, adjacency_from_measurements(g, measured), weights
    if poses is None:
        raise ValidationError("config weights need poses or relative measurements")
    return g, build_adjacency(g, poses, "config"), weights


def _bundle(obj: dict) -> LaplacianBundle:
    g, h, _ = _graph_and_adjacency(obj)
    return laplacian(g, h)


def _target_matrix(obj: dict) -> tuple[DQMatrix, LaplacianBundle | None]:
    """A bare ``matrix``/``laplacian`` entry, or the Laplacian of a graph description."""
    for key in ("matrix", "laplacian"):
        if key in obj:
            return parse_matrix(obj[key]), None
    bundle = _bundle(obj)
    return bundle.laplacian, bundle


def _pair(d) -> list[float]:
    return [float(d.std), float(d.dual)]


def _certificate_dict(c: StabilityCertificate) -> dict:
    return {
        "verdict": c.verdict.value,
        "reason": c.reason,
        "zero_multiplicity": c.zero_multiplicity,
        "definiteness": c.definiteness.value,
        "lambda2": c.lambda2,
    }


# ---------------------------------------------------------------------------
# commands

def cmd_spectrum(args: argparse.Namespace) -> int:
    obj = load_json(args.input)
    a, bundle = _target_matrix(obj)
    if bundle is not None:
        rep = laplacian_spectrum_report(bundle)
        dec, gers = rep.decomposition, rep.gershgorin
    else:
        dec = herm_eigen(a)
        gers = gershgorin(a, dec.eigenvalues)
    out: dict[str, Any] = {
        "command": "spectrum",
        "n": dec.n,
        "eigenvalues": [_pair(v) for v in dec.eigenvalues],
        "eigenvalues_text": [format_dual(v) for v in dec.eigenvalues],
        "clusters": [[k + 1 for k in cl] for cl in dec.clusters],
        "residual": dec.residual,
        "gershgorin": [{"center": _pair(c), "radius": _pair(r)} for c, r in zip(gers.centers, gers.radii)],
    }
    if bundle is not None:
        out["zero_multiplicity"] = rep.zero_multiplicity
        out["definiteness"] = rep.definiteness.value
        out["stability_precondition"] = rep.stability_precondition
        out["certificate"] = _certificate_dict(stability_certificate(bundle))
    write_text(args.output, dumps(out))
    return EXIT_OK


def cmd_gershgorin(args: argparse.Namespace) -> int:
    obj = load_json(args.input)
    a, _ = _target_matrix(obj)
    rep = gershgorin(a)
    out = {
        "command": "gershgorin",
        "n": a.shape[0],
        "tol": rep.tol,
        "discs": [
            {"row": i + 1, "center": _pair(c), "radius": _pair(r)}
            for i, (c, r) in enumerate(zip(rep.centers, rep.radii))
        ],
        "eigenvalues": [
            {
                "value": _pair(v),
                "contained": ok,
                "contained_std": ok_std,
                "discs": [i + 1 for i in hits],
            }
            for v, ok, ok_std, hits in zip(rep.eigenvalues, rep.contained, rep.contained_std, rep.discs)
        ],
        "violations": sum(1 for ok in rep.contained if not ok),
    }
    write_text(args.output, dumps(out))
    return EXIT_OK


def cmd_graph_check(args: argparse.Namespace) -> int:
    obj = load_json(args.input)
    g, c, weights = _graph_and_adjacency(obj)
    if weights != "config":
        raise ValidationError("graph-check needs poses or relative measurements")
    tree, removed = reduce_to_tree(g)
    ln = log_adjacency(g, c)
    cycles = []
    worst = 0.0
    for cyc in fundamental_cycles(g):
        dev = cycle_consistency(g, c, cyc)
        worst = max(worst, deviation_size(dev))
        cycles.append({"vertices": [v + 1 for v in cyc], "deviation": _pair(dev)})
    consistent = worst <= CYCLE_TOL
    out = {
        "command": "graph-check",
        "n": g.n,
        "edges": one_based(g.sorted_edges()),
        "hermitian": {"config": c.is_hermitian(), "log": ln.is_hermitian()},
        "cycles": cycles,
        "max_cycle_deviation": worst,
        "consistent": consistent,
        "spanning_tree": one_based(tree.sorted_edges()),
        "removed_edges": one_based(removed),
        "warning": None if consistent else f"cycle deviation {worst:.3e} exceeds {CYCLE_TOL:g}",
    }
    if not consistent:
        log.warning("inconsistent relative configurations: max cycle deviation %.3e", worst)
    write_text(args.output, dumps(out))
    return EXIT_OK


def cmd_reduce(args: argparse.Namespace) -> int:
    g = parse_graph(load_json(args.input))
    tree, removed = reduce_to_tree(g)
    out = {
        "command": "reduce",
        "n": g.n,
        "spanning_tree": one_based(tree.sorted_edges()),
        "removed_edges": one_based(removed),
    }
    write_text(args.output, dumps(out))
    return EXIT_OK


def _setting(args: argparse.Namespace, obj: dict, name: str, default):
    value = getattr(args, name, None)
    if value is not None:
        return value
    return obj.get(name, default)


def _steps(dt: float, horizon: float) -> int:
    return max(1, int(round(horizon / dt)))


def _graph_from_matrix(lap: DQMatrix) -> VisibilityGraph:
    n = lap.shape[0]
    nz = (np.any(lap.std != 0.0, axis=-1) | np.any(lap.dual != 0.0, axis=-1))
    return VisibilityGraph(n, frozenset((i, j) for i in range(n) for j in range(i + 1, n) if nz[i, j] or nz[j, i]))


def _scenario(args: argparse.Namespace, obj: dict) -> Scenario:
    if "laplacian" in obj:
        lap: LaplacianBundle | DQMatrix = parse_matrix(obj["laplacian"])
        g = parse_graph(obj) if "n" in obj else _graph_from_matrix(lap)
    else:
        lap = _bundle(obj)
        g = lap.graph
    n = g.n
    z0 = parse_vector(obj["z0"], n, "z0") if "z0" in obj else random_state(make_rng(args.seed), n)
    target = parse_vector(obj["target"], n, "target") if obj.get("target") is not None else None
    dt = float(_setting(args, obj, "dt", 1e-3))
    horizon = float(_setting(args, obj, "T", 20.0))
    integrator = _setting(args, obj, "integrator", "rk4")
    record_every = obj.get("record_every", max(1, _steps(dt, horizon) // MAX_RECORDS))
    return Scenario(g, lap, z0, target, integrator, dt, horizon, int(record_every))


def _emit(args: argparse.Namespace, body: str, summary: dict) -> None:
    """Primary output to ``--output``; the summary to ``--summary``, else stdout or stderr."""
    write_text(args.output, body)
    text = dumps(summary)
    if args.summary:
        write_text(args.summary, text)
    elif args.output and args.output != "-":
        write_text(None, text)
    else:
        sys.stderr.write(text)


def cmd_simulate(args: argparse.Namespace) -> int:
    obj = load_json(args.input)
    s = _scenario(args, obj)
    cert = stability_certificate(s.laplacian)
    traj = simulate(s)
    summary = {
        "command": "simulate",
        "seed": args.seed,
        "generator": GENERATOR,
        "n": s.n,
        "integrator": s.integrator,
        "dt": s.dt,
        "T": s.T,
        "steps": traj.steps,
        "records": len(traj.times),
        "certificate": _certificate_dict(cert),
        "initial_disagreement": traj.disagreement[0],
        "final_disagreement": traj.disagreement[-1],
        "final_energy": traj.energy[-1],
        "control_law_difference": control_inputs(s).max_difference,
        "target_residual": _pair(check_target(s)) if s.target is not None else None,
        "wall_time": traj.wall_time,
    }
    if args.format == "json":
        body = dumps({
            "times": traj.times,
            "states": traj.states.reshape(len(traj.times), -1),
            "disagreement": traj.disagreement,
        })
    else:
        body = trajectory_csv(traj.times, traj.states, traj.disagreement)
    _emit(args, body, summary)
    return EXIT_OK


def cmd_pose_sim(args: argparse.Namespace) -> int:
    obj = load_json(args.input)
    g = parse_graph(obj)
    poses = parse_poses(obj, g.n)
    if poses is None or poses.twists is None:
        raise ValidationError("pose-sim needs poses and per-agent twists")
    dt = float(_setting(args, obj, "dt", 1e-3))
    horizon = float(_setting(args, obj, "T", 1.0))
    integrator = _setting(args, obj, "integrator", "rk4")
    record_every = obj.get("record_every", max(1, _steps(dt, horizon) // MAX_RECORDS))
    traj = simulate_pose_mode(poses, None, dt, horizon, integrator, int(record_every))
    summary = {
        "command": "pose-sim",
        "n": g.n,
        "integrator": integrator,
        "dt": dt,
        "T": horizon,
        "steps": traj.steps,
        "records": len(traj.times),
        "unit_drift": traj.unit_drift,
        "final_poses": traj.poses[-1],
    }
    if args.format == "json":
        body = dumps({"times": traj.times, "poses": traj.poses.reshape(len(traj.times), -1)})
    else:
        body = trajectory_csv(traj.times, traj.poses)
    _emit(args, body, summary)
    return EXIT_OK


# sweeps ---------------------------------------------------------------------

def _sweep_hermitian(seed: int, index: int, n_min: int, n_max: int) -> dict:
    rng = make_rng(seed, index)
    n = int(rng.integers(n_min, n_max + 1))
    a = random_hermitian(rng, n)
    dec = herm_eigen(a)
    gers = gershgorin(a, dec.eigenvalues)
    rel = dec.residual / max(dec.norm, 1e-300)
    unitary = dec.eigenvectors.is_unitary()
    ok = rel <= 1e-8 and unitary and gers.all_contained
    return {"index": index, "n": n, "ok": ok, "relative_residual": rel, "unitary": unitary,
            "gershgorin_violations": sum(1 for c in gers.contained if not c)}


def _sweep_laplacian(seed: int, index: int, n_min: int, n_max: int) -> dict:
    rng = make_rng(seed, index)
    n = int(rng.integers(n_min, n_max + 1))
    g = random_connected_graph(rng, n)
    poses = random_pose_assignment(rng, n)
    rep = laplacian_spectrum_report(laplacian(g, build_adjacency(g, poses, "config")))
    ref = np.sort(np.linalg.eigvalsh(g.laplacian_real()))
    got = np.sort([v.std for v in rep.eigenvalues])
    err = float(np.max(np.abs(got - ref)))
    dual = float(max(abs(v.dual) for v in rep.eigenvalues))
    ok = err <= 1e-8 and dual <= 1e-8 and rep.zero_multiplicity == 1 and rep.gershgorin.all_contained
    return {"index": index, "n": n, "edges": len(g.edges), "ok": ok, "spectrum_error": err,
            "max_dual_part": dual, "zero_multiplicity": rep.zero_multiplicity}


SWEEPS: dict[str, Callable[[int, int, int, int], dict]] = {
    "hermitian": _sweep_hermitian,
    "laplacian": _sweep_laplacian,
}


def _sweep_task(task: tuple[str, int, int, int, int]) -> dict:
    kind, seed, index, n_min, n_max = task
    return SWEEPS[kind](seed, index, n_min, n_max)


def cmd_sweep(args: argparse.Namespace) -> int:
    if args.count < 0 or not (1 <= args.n_min <= args.n_max):
        raise ValidationError("need count >= 0 and 1 <= n-min <= n-max")
    tasks = [(args.kind, args.seed, k, args.n_min, args.n_max) for k in range(args.count)]
    if args.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_sweep_task, tasks, chunksize=max(1, len(tasks) // (4 * args.jobs))))
    else:
        results = [_sweep_task(t) for t in tasks]
    out = {
        "command": "sweep",
        "kind": args.kind,
        "seed": args.seed,
        "generator": GENERATOR,
        "count": args.count,
        "failures": sum(1 for r in results if not r["ok"]),
        "instances": results,
    }
    write_text(args.output, dumps(out))
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", default=None, help="output path (default: standard output)")
    common.add_argument("--seed", type=int, default=0, help="seed for random instances and random initial states")
    common.add_argument("--format", choices=("json", "csv"), default=None, help="output format")

    with_input = argparse.ArgumentParser(add_help=False, parents=[common])
    with_input.add_argument("--input", "-i", required=True, help="input JSON file")

    timing = argparse.ArgumentParser(add_help=False)
    timing.add_argument("--dt", type=float, default=None, help="time step in seconds")
    timing.add_argument("--T", type=float, default=None, help="horizon in seconds")
    timing.add_argument("--integrator", choices=("euler", "rk4"), default=None)
    timing.add_argument("--summary", default=None, help="where to write the summary JSON")

    parser = argparse.ArgumentParser(prog="dqform", description=__doc__.splitlines()[0].replace("``", ""))
    parser.add_argument("--version", action="version", version=f"dqform {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("spectrum", parents=[with_input], help="eigenvalues of a Hermitian matrix or graph Laplacian")
    sub.add_parser("gershgorin", parents=[with_input], help="Gershgorin discs and eigenvalue containment")
    sub.add_parser("graph-check", parents=[with_input], help="Hermitian and cycle consistency checks")
    sub.add_parser("reduce", parents=[with_input], help="reduce a visibility graph to a spanning tree")
    sub.add_parser("simulate", parents=[with_input, timing], help="closed-loop consensus simulation")
    sub.add_parser("pose-sim", parents=[with_input, timing], help="per-agent pose kinematics")
    sweep = sub.add_parser("sweep", parents=[common], help="randomized property sweep")
    sweep.add_argument("--kind", choices=sorted(SWEEPS), default="laplacian")
    sweep.add_argument("--count", type=int, default=100)
    sweep.add_argument("--n-min", type=int, default=2)
    sweep.add_argument("--n-max", type=int, default=8)
    sweep.add_argument("--jobs", type=int, default=1, help="worker processes")
    return parser


COMMANDS: dict[str, Callable[[argparse.Namespace], int]] = {
    "spectrum": cmd_spectrum,
    "gershgorin": cmd_gershgorin,
    "graph-check": cmd_graph_check,
    "reduce": cmd_reduce,
    "simulate": cmd_simulate,
    "pose-sim": cmd_pose_sim,
    "sweep": cmd_sweep,
}

LOG_LEVELS = {"quiet": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}


def _configure_logging() -> None:
    level = LOG_LEVELS.get(os.environ.get("DQFORM_LOG", "quiet").lower(), logging.ERROR)
    log.setLevel(level)
    if not log.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter("dqform %(levelname)s: %(message)s"))
        log.addHandler(handler)
    log.propagate = False


def main(argv: list[str] | None = None) -> int:
    _configure_logging()
    args = build_parser().parse_args(argv)
    if args.format is None:
        args.format = "csv" if args.command in ("simulate", "pose-sim") else "json"
    elif args.format == "csv" and args.command not in ("simulate", "pose-sim"):
        sys.stderr.write(f"ValidationError: {args.command} only writes json\n")
        return EXIT_VALIDATION
    log.info("running %s", args.command)
    try:
        return COMMANDS[args.command](args)
    except (Unstable, StepRejected, ConvergenceFailure) as exc:
        return _fail(exc, EXIT_UNSTABLE)
    except (ValidationError, ValueError, KeyError, TypeError) as exc:
        return _fail(exc, EXIT_VALIDATION)
    except OSError as exc:
        return _fail(exc, EXIT_IO)


def _fail(exc: BaseException, code: int) -> int:
    sys.stderr.write(f"{type(exc).__name__}: {exc}\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
