"""``osemo`` command line: run, aggregate, reference.

Errors exit nonzero with one line ``error: <category>: <message>`` on stderr.
"""

from __future__ import annotations

import argparse
import sys

from .benchmarks import get_benchmark, reference_front
from .harness import ConfigError, aggregate_directory, parse_config, run_experiment, write_aggregate
from .pareto import write_front_csv

EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_RUN = 4


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="osemo", description="Output-space entropy search experiments")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run an algorithm on a benchmark over seeds")
    r.add_argument("--config")
    r.add_argument("--benchmark")
    r.add_argument("--algorithm")
    g = r.add_mutually_exclusive_group()
    g.add_argument("--budget")
    g.add_argument("--iterations")
    r.add_argument("--seeds", help="comma-separated integers")
    r.add_argument("--samples", help="Pareto-front samples S per iteration")
    r.add_argument("--n-init", dest="n_init")
    r.add_argument("--hyperfit-interval", dest="hyperfit_interval")
    r.add_argument("--nsga-evals", dest="nsga_evals")
    r.add_argument("--recover-every", dest="recover_every")
    r.add_argument("--fidelity-filter", dest="fidelity_filter")
    r.add_argument("--timing", action="store_const", const="true")
    r.add_argument("--out")
    r.add_argument("--no-reference", action="store_true", help="skip the reference front (R2 left blank)")

    a = sub.add_parser("aggregate", help="aggregate per-seed CSVs of one directory")
    a.add_argument("--in", dest="in_dir", required=True)
    a.add_argument("--out", required=True)

    f = sub.add_parser("reference", help="compute a benchmark's reference Pareto front")
    f.add_argument("--benchmark", required=True)
    f.add_argument("--out", required=True)
    f.add_argument("--seed", type=int, default=0)
    return p


def _fail(category: str, message: str, code: int) -> int:
    print(f"error: {category}: {' '.join(str(message).split())}", file=sys.stderr)
    return code


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "run":
            flags = {
                k: getattr(args, k)
                for k in (
                    "benchmark", "algorithm", "budget", "iterations", "seeds", "samples", "n_init",
                    "hyperfit_interval", "nsga_evals", "recover_every", "fidelity_filter", "timing", "out",
                )
            }
            cfg = parse_config(args.config, **flags)
            sys.stdout.write(cfg.to_text())
            runs, errors = run_experiment(cfg, reference=not args.no_reference)
            for seed, err in sorted(errors.items()):
                print(f"seed {seed} failed: {err}", file=sys.stderr)
            if not any(runs.values()):
                return _fail("run_failed", "every seed failed", EXIT_RUN)
        elif args.command == "aggregate":
            write_aggregate(args.out, aggregate_directory(args.in_dir))
        else:
            front = reference_front(get_benchmark(args.benchmark), seed=args.seed)
            write_front_csv(args.out, front.points)
    except ConfigError as exc:
        return _fail("config", exc, EXIT_CONFIG)
    except KeyError as exc:
        return _fail("config", exc, EXIT_CONFIG)
    except OSError as exc:
        return _fail("io", exc, EXIT_IO)
    except ValueError as exc:
        return _fail("input", exc, EXIT_IO)
    return 0


if __name__ == "__main__":
    sys.exit(main())
