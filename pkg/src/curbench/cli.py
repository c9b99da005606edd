"""Command line front end.

Exit codes: 0 success, 1 a suite or agreement check failed, 2 bad
configuration or arguments, 3 file I/O failure.
"""

import argparse
import sys
import time
from dataclasses import replace
from pathlib import Path

import numpy as np

from ._kernels import numba_available
from .errors import ConfigError, InvalidInput, IoError
from .experiment import load_config, run_experiment, _parse_value
from .matgen import GENERATOR_NAMES, named_generator
from .matio import save_matrix
from .srrqr import srrqr
from .suites import SUITE_NAMES, run_property_suite

__all__ = ["main"]


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="curbench",
        description="Randomized row/column selection benchmarks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run an experiment from a config file")
    run_p.add_argument("--config", required=True, help="path to a key=value config file")
    run_p.add_argument("--plot", action="store_true", help="also write an SVG convergence plot")
    run_p.add_argument(
        "--full-scale",
        action="store_true",
        help="bump generator sizes to the large-scale extent (informational, slow)",
    )

    suite_p = sub.add_parser("suite", help="run a property suite")
    suite_p.add_argument("name", choices=SUITE_NAMES)
    suite_p.add_argument("--seed", type=int, default=0)

    gen_p = sub.add_parser("gen", help="write a generated matrix to disk")
    gen_p.add_argument("name", choices=GENERATOR_NAMES)
    gen_p.add_argument("params", nargs="*", help="generator parameters as key=value")
    gen_p.add_argument("--out", required=True, help="output path")
    gen_p.add_argument("--format", choices=("csv", "dmat"), default=None)

    kern_p = sub.add_parser(
        "kernels", help="time the factorization kernels on both backends"
    )
    kern_p.add_argument("--rows", type=int, default=400)
    kern_p.add_argument("--cols", type=int, default=300)
    kern_p.add_argument("--rank", type=int, default=20)
    kern_p.add_argument("--repeat", type=int, default=3)
    kern_p.add_argument("--seed", type=int, default=0)
    return parser


def _cmd_run(args):
    config = load_config(args.config)
    if args.plot and not config.svg_path:
        stem = Path(config.csv_path).with_suffix(".svg") if config.csv_path else Path(args.config).with_suffix(".svg")
        config = replace(config, svg_path=str(stem))
    elif not args.plot:
        config = replace(config, svg_path=None)
    result = run_experiment(config, full_scale=args.full_scale)
    if config.csv_path:
        print(f"wrote {config.csv_path} ({result.config.trials} trials, shape {result.shape})")
    else:
        sys.stdout.write(result.csv_text())
    if config.svg_path:
        print(f"wrote {config.svg_path}")
    return 0


def _cmd_suite(args):
    report = run_property_suite(args.name, seed=args.seed)
    print(report.summary())
    return 0 if report.passed else 1


def _cmd_gen(args):
    params = {}
    for token in args.params:
        if "=" not in token:
            raise ConfigError(f"expected key=value, got {token!r}", field="params")
        key, raw = token.split("=", 1)
        params[key.strip()] = _parse_value(raw)
    matrix = named_generator(args.name, **params)
    try:
        save_matrix(args.out, matrix, fmt=args.format)
    except OSError as exc:
        raise IoError(f"cannot write {args.out}: {exc}") from exc
    print(f"wrote {args.out}: {matrix.shape[0]}x{matrix.shape[1]} {args.name}")
    return 0


def _cmd_kernels(args):
    rng = np.random.default_rng(args.seed)
    a = rng.standard_normal((args.rows, args.cols))
    backends = ["numpy"]
    if numba_available():
        backends.append("numba")
    else:
        print("numba not importable; timing the numpy path only")
    rows = []
    selections = {}
    for backend in backends:
        srrqr(a, args.rank, rng=0, backend=backend)  # warm-up / JIT compile
        best = float("inf")
        for _ in range(max(1, args.repeat)):
            start = time.perf_counter()
            res = srrqr(a, args.rank, rng=0, backend=backend)
            best = min(best, time.perf_counter() - start)
        selections[backend] = tuple(int(v) for v in res.selected_cols)
        rows.append((backend, best, res.swaps))
    print(f"{'backend':<8} {'best-of-' + str(max(1, args.repeat)):>12} {'swaps':>6}")
    for backend, best, swaps in rows:
        print(f"{backend:<8} {best:>11.4f}s {swaps:>6}")
    if len(rows) == 2:
        base = rows[0][1]
        print(f"speedup numba vs numpy: {base / rows[1][1]:.2f}x")
        if selections["numpy"] != selections["numba"]:
            print("MISMATCH: the two backends selected different columns")
            return 1
        print("agreement: identical column selections")
    return 0


_COMMANDS = {
    "run": _cmd_run,
    "suite": _cmd_suite,
    "gen": _cmd_gen,
    "kernels": _cmd_kernels,
}


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except InvalidInput as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return 2
    except IoError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
