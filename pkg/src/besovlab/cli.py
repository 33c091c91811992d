"""
Command-line front end.

    besovlab run <experiment|all> [--config FILE] [--out DIR] [--format csv|json|both]
                 [--grid-n N] [--grid-l L] [--k K] [--n N ...] [--i I] [--sigma S]
                 [--p P] [--epsilon E] [--model M] [--b B] [--t-end T] [--seed S]
    besovlab list [--json]

Exit codes: 0 when every verdict passes, 2 when any verdict fails, 1 on an
error (bad configuration, unresolvable grid, blow-up, ...).  Standard output
carries one JSON line per report; diagnostics go to standard error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import experiments as ex
from .config import EXPERIMENTS, MODELS, RunConfig, load_config
from .errors import BesovLabError, BlowUpError, ConfigurationError, ResolutionError
from .reporting import write_report

__all__ = ["main", "run", "list_experiments", "build_jobs"]

EXIT_PASS, EXIT_ERROR, EXIT_FAIL = 0, 1, 2


def build_jobs(cfg: RunConfig) -> list:
    """(label, thunk) pairs for the configured experiment(s)."""
    P = cfg.params
    grid = cfg.grid()
    common = {"grid": grid, "thresholds": cfg.thresholds}
    model = P.model_kind()
    names = EXPERIMENTS if cfg.experiment == "all" else (cfg.experiment,)
    jobs = []
    for name in names:
        if name == "localization":
            for n in P.n or (2,):
                jobs.append((f"localization n={n}", lambda n=n: ex.exp_localization(P.k, n, P.i, **common)))
        elif name == "ch-lower-bound":
            jobs.append(
                (name, lambda: ex.exp_ch_lower_bound(P.k, P.sigma, P.p, P.n or (1, 2), **common))
            )
        elif name == "novikov-lower-bound":
            jobs.append((name, lambda: ex.exp_novikov_lower_bound(P.sigma, P.j_list, **common)))
        elif name == "remainder":
            jobs.append(
                (name, lambda: ex.exp_remainder_scaling(model, P.t_list, sigma=P.sigma, p=P.p, k=P.k, **common))
            )
        elif name == "discontinuity":
            jobs.append(
                (name, lambda: ex.exp_discontinuity(model, P.k, P.n, P.epsilon, sigma=P.sigma, p=P.p, **common))
            )
        elif name == "conservation":
            jobs.append((name, lambda: ex.exp_conservation(model, P.t_end, k=P.k, sigma=P.sigma, **common)))
    return jobs


def _err(msg: str):
    print(msg, file=sys.stderr)


def execute(cfg: RunConfig) -> int:
    config = cfg.to_dict()
    any_fail = False
    for label, job in build_jobs(cfg):
        t0 = time.perf_counter()
        report = job()
        paths = write_report(report, config, cfg.out_dir, cfg.format)
        elapsed = time.perf_counter() - t0
        any_fail |= not report.verdict
        _err(f"{report.summary()}  [{label}, {elapsed:.1f} s]")
        for note in report.notes:
            _err(f"  note: {note}")
        line = {
            "experiment": report.name,
            "label": label,
            "verdict": "pass" if report.verdict else "fail",
            "files": [str(p) for p in paths],
        }
        print(json.dumps(line), flush=True)
    return EXIT_FAIL if any_fail else EXIT_PASS


def run(config_path=None, overrides: dict | None = None) -> int:
    """Load the config (if any), apply overrides, run, and return the exit code."""
    try:
        cfg = load_config(config_path) if config_path is not None else RunConfig()
        cfg = cfg.with_overrides(**(overrides or {}))
        return execute(cfg)
    except FileNotFoundError as exc:
        _err(f"error: {exc}")
    except ConfigurationError as exc:
        _err(f"configuration error: {exc}")
    except BlowUpError as exc:
        _err(f"blow-up: {exc} (time reached: {exc.t_reached})")
    except ResolutionError as exc:
        _err(f"resolution error: {exc}")
    except BesovLabError as exc:
        _err(f"error: {type(exc).__name__}: {exc}")
    return EXIT_ERROR


def list_experiments(as_json: bool = False) -> str:
    catalog = ex.list_experiments()
    if as_json:
        return json.dumps(catalog, indent=2)
    lines = []
    for e in catalog:
        defaults = ", ".join(f"{k}={v}" for k, v in e["defaults"].items())
        lines.append(f"{e['name']:<20} {e['checks']}\n{'':<20} defaults: {defaults}")
    return "\n".join(lines)


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="besovlab", description="Besov-norm ill-posedness experiments.")
    sub = ap.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run one experiment or all of them")
    r.add_argument("experiment", choices=(*EXPERIMENTS, "all"))
    r.add_argument("--config", help="YAML run configuration")
    r.add_argument("--out", dest="out_dir", help="output directory (default: reports)")
    r.add_argument("--format", choices=("csv", "json", "both"))
    r.add_argument("--grid-n", dest="grid_points", type=int, help="number of grid points (power of two)")
    r.add_argument("--grid-l", dest="grid_length", type=float, help="box length")
    r.add_argument("--k", type=int)
    r.add_argument("--n", type=int, nargs="+", help="series index (list for lower-bound / discontinuity)")
    r.add_argument("--i", type=int, help="shift index of a localisation packet")
    r.add_argument("--sigma", type=float)
    r.add_argument("--p", type=str, help="integrability index; 'inf' allowed")
    r.add_argument("--epsilon", type=float)
    r.add_argument("--model", choices=MODELS)
    r.add_argument("--b", type=float)
    r.add_argument("--t-end", dest="t_end", type=float)
    r.add_argument("--seed", type=int)

    ls = sub.add_parser("list", help="list the experiments")
    ls.add_argument("--json", action="store_true", help="machine-readable catalog")
    return ap


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    if args.command == "list":
        print(list_experiments(args.json))
        return EXIT_PASS
    overrides = {
        k: getattr(args, k)
        for k in (
            "out_dir", "format", "grid_points", "grid_length", "k", "n", "i",
            "sigma", "p", "epsilon", "model", "b", "t_end", "seed",
        )
    }
    overrides["experiment"] = args.experiment
    return run(args.config, overrides)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
