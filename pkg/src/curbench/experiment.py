"""Seeded Monte Carlo experiment harness.

An experiment is: generate one matrix, run the selection algorithm
``trials`` times with per-trial seeds, score each trial's index sets
with a projection CUR, and aggregate the error per iteration into
mean / 5th / 95th percentile rows. Output is a CSV table (stable,
byte-identical across reruns of the same config) and optionally an
SVG convergence plot.
"""

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .cur import build_projection_cur, cur_error
from .errors import ConfigError, InvalidInput, IoError
from .matgen import GENERATOR_NAMES, named_generator
from .selection import (
    Algorithm1Params,
    Algorithm2Params,
    run_algorithm1,
    run_algorithm2,
)

__all__ = [
    "ExperimentConfig",
    "TrialRecord",
    "ExperimentResult",
    "parse_config_text",
    "load_config",
    "run_experiment",
    "write_csv",
    "write_svg",
]

CSV_HEADER = "iteration,mean,p05,p95,metric,algorithm,trials,seed"

ALGORITHM_NAMES = ("alg1", "alg2")
METRIC_NAMES = ("spectral", "frobenius")

THREADS_ENV = "CURBENCH_THREADS"

# Parameter names accepted under ``algorithm.`` for each algorithm.
_ALG1_KEYS = frozenset({"ell_0", "ell_a", "ell_b", "eta"})
_ALG2_KEYS = frozenset(
    {
        "ell_0",
        "iterations",
        "ell_srrqr_col",
        "ell_new_col",
        "ell_srrqr_row",
        "ell_new_row",
        "eta",
        "accumulate_union",
    }
)

# Generator parameters that set the problem size, bumped by --full-scale.
_SIZE_KEYS = ("n", "m", "grid_n")
FULL_SCALE_EXTENT = 1000


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything needed to rerun an experiment exactly."""

    generator: str
    algorithm: str
    generator_params: dict = field(default_factory=dict)
    algorithm_params: dict = field(default_factory=dict)
    trials: int = 100
    seed: int = 0
    metric: str = "spectral"
    csv_path: str = None
    svg_path: str = None

    def __post_init__(self):
        if self.generator not in GENERATOR_NAMES:
            raise ConfigError(
                f"unknown generator {self.generator!r}, expected one of "
                f"{', '.join(GENERATOR_NAMES)}",
                field="generator",
            )
        if self.algorithm not in ALGORITHM_NAMES:
            raise ConfigError(
                f"unknown algorithm {self.algorithm!r}, expected alg1 or alg2",
                field="algorithm",
            )
        if self.metric not in METRIC_NAMES:
            raise ConfigError(
                f"unknown metric {self.metric!r}, expected spectral or frobenius",
                field="metric",
            )
        if not isinstance(self.trials, int) or self.trials < 1:
            raise ConfigError(f"trials must be a positive integer, got {self.trials}", field="trials")
        if not isinstance(self.seed, int) or self.seed < 0:
            raise ConfigError(f"seed must be a nonnegative integer, got {self.seed}", field="seed")


@dataclass(frozen=True)
class TrialRecord:
    """Outcome of a single seeded trial."""

    trial: int
    seed: int
    errors: tuple  # one float per reported iteration
    rows: tuple  # final row indices
    cols: tuple  # final column indices
    wall_time: float  # seconds, selection plus scoring


@dataclass(frozen=True)
class ExperimentResult:
    config: "ExperimentConfig"
    shape: tuple
    iterations: tuple  # iteration labels, aligned with the stats below
    mean: tuple
    p05: tuple
    p95: tuple
    records: tuple  # TrialRecord per trial

    def csv_text(self):
        """Render the aggregate table; reruns are byte-identical."""
        lines = [CSV_HEADER]
        cfg = self.config
        for it, m, lo, hi in zip(self.iterations, self.mean, self.p05, self.p95):
            lines.append(
                f"{it},{m!r},{lo!r},{hi!r},{cfg.metric},{cfg.algorithm},"
                f"{cfg.trials},{cfg.seed}"
            )
        return "\n".join(lines) + "\n"


def _parse_value(raw):
    text = raw.strip()
    if len(text) >= 2 and text[0] == text[-1] and text[0] in "'\"":
        return text[1:-1]
    low = text.lower()
    if low in ("true", "false"):
        return low == "true"
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        pass
    return text


_TOP_KEYS = ("generator", "algorithm", "trials", "seed", "metric", "csv", "svg")


def parse_config_text(text):
    """Parse ``key = value`` lines into an ExperimentConfig.

    Dotted keys ``generator.<p>`` and ``algorithm.<p>`` collect the
    per-component parameters; ``#`` starts a comment. Unknown keys are
    rejected so typos fail loudly instead of silently running a
    default.
    """
    top = {}
    gen_params = {}
    alg_params = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {stripped!r}")
        key, raw = stripped.split("=", 1)
        key = key.strip()
        value = _parse_value(raw)
        if key.startswith("generator."):
            gen_params[key[len("generator."):]] = value
        elif key.startswith("algorithm."):
            alg_params[key[len("algorithm."):]] = value
        elif key in _TOP_KEYS:
            if key in top:
                raise ConfigError(f"line {lineno}: duplicate key", field=key)
            top[key] = value
        else:
            raise ConfigError(f"line {lineno}: unknown key", field=key)
    for required in ("generator", "algorithm"):
        if required not in top:
            raise ConfigError("missing required key", field=required)
    for int_key in ("trials", "seed"):
        if int_key in top and not isinstance(top[int_key], int):
            raise ConfigError(f"expected an integer, got {top[int_key]!r}", field=int_key)
    return ExperimentConfig(
        generator=top["generator"],
        algorithm=top["algorithm"],
        generator_params=gen_params,
        algorithm_params=alg_params,
        trials=top.get("trials", 100),
        seed=top.get("seed", 0),
        metric=top.get("metric", "spectral"),
        csv_path=top.get("csv"),
        svg_path=top.get("svg"),
    )


def load_config(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise IoError(f"cannot read config file {path}: {exc}") from exc
    return parse_config_text(text)


def _algorithm1_params(params, seed):
    unknown = set(params) - _ALG1_KEYS
    if unknown:
        raise ConfigError("unknown parameter", field=f"algorithm.{sorted(unknown)[0]}")
    try:
        return Algorithm1Params(
            ell_0=params.get("ell_0", 4),
            ell_a=params.get("ell_a", 2),
            ell_b=params.get("ell_b", 2),
            eta=params.get("eta", 1.1),
            seed=seed,
        )
    except (InvalidInput, TypeError) as exc:
        raise ConfigError(str(exc), field="algorithm") from exc


def _algorithm2_params(params, seed):
    unknown = set(params) - _ALG2_KEYS
    if unknown:
        raise ConfigError("unknown parameter", field=f"algorithm.{sorted(unknown)[0]}")
    try:
        return Algorithm2Params.uniform(
            ell_0=params.get("ell_0", 4),
            iterations=params.get("iterations", 1),
            srrqr_col=params.get("ell_srrqr_col", 2),
            new_col=params.get("ell_new_col", 2),
            srrqr_row=params.get("ell_srrqr_row", 2),
            new_row=params.get("ell_new_row", 2),
            eta=params.get("eta", 1.1),
            accumulate_union=bool(params.get("accumulate_union", False)),
            seed=seed,
        )
    except (InvalidInput, TypeError) as exc:
        raise ConfigError(str(exc), field="algorithm") from exc


def _build_matrix(config):
    try:
        return named_generator(config.generator, **config.generator_params)
    except InvalidInput as exc:
        raise ConfigError(str(exc), field="generator") from exc


def _iteration_sets(trace, union):
    """Per-iteration (rows, cols) honoring the accumulate_union mode."""
    out = []
    rows = cols = None
    for step in trace.steps:
        if union:
            rows = step.i if rows is None else rows.union(step.i)
            cols = step.j if cols is None else cols.union(step.j)
        else:
            rows, cols = step.i, step.j
        out.append((rows, cols))
    return out


def _score(a, rows, cols, metric):
    factors = build_projection_cur(a, rows, cols)
    return float(cur_error(a, factors, norm=metric))


def _run_trial(a, config, trial):
    start = time.perf_counter()
    trial_seed = config.seed + trial
    if config.algorithm == "alg1":
        params = _algorithm1_params(config.algorithm_params, trial_seed)
        rows, cols, _ = run_algorithm1(a, params)
        errors = (_score(a, rows, cols, config.metric),)
        final_rows, final_cols = rows, cols
    else:
        params = _algorithm2_params(config.algorithm_params, trial_seed)
        final_rows, final_cols, trace = run_algorithm2(a, params)
        per_iter = _iteration_sets(trace, params.accumulate_union)
        errors = tuple(_score(a, r, c, config.metric) for r, c in per_iter)
    return TrialRecord(
        trial=trial,
        seed=trial_seed,
        errors=errors,
        rows=tuple(int(v) for v in final_rows),
        cols=tuple(int(v) for v in final_cols),
        wall_time=time.perf_counter() - start,
    )


def _thread_count():
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        count = int(raw)
    except ValueError:
        raise ConfigError(f"{THREADS_ENV} must be an integer, got {raw!r}")
    return max(1, count)


def full_scale_config(config):
    """Same experiment with the generator sized up to the large extent."""
    bumped = dict(config.generator_params)
    for key in _SIZE_KEYS:
        if key in bumped and isinstance(bumped[key], int):
            bumped[key] = max(bumped[key], FULL_SCALE_EXTENT)
    if not any(key in bumped for key in _SIZE_KEYS):
        bumped["n"] = FULL_SCALE_EXTENT
    return replace(config, generator_params=bumped)


def run_experiment(config, full_scale=False):
    """Run all trials and aggregate. Deterministic for a fixed config.

    Trial t uses seed ``config.seed + t``, so the trials are a fixed
    family regardless of threading; CURBENCH_THREADS > 1 only changes
    the wall time, not the table.
    """
    if full_scale:
        config = full_scale_config(config)
    a = _build_matrix(config)
    # Validate algorithm parameters once up front so a bad config fails
    # before the trial loop rather than inside a worker thread.
    if config.algorithm == "alg1":
        _algorithm1_params(config.algorithm_params, config.seed)
    else:
        _algorithm2_params(config.algorithm_params, config.seed)

    threads = _thread_count()
    trial_ids = range(config.trials)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(lambda t: _run_trial(a, config, t), trial_ids))
    else:
        records = [_run_trial(a, config, t) for t in trial_ids]

    depth = len(records[0].errors)
    table = np.array([rec.errors for rec in records], dtype=np.float64)
    mean = table.mean(axis=0)
    p05 = np.percentile(table, 5.0, axis=0)
    p95 = np.percentile(table, 95.0, axis=0)
    # Algorithm 1 has no iteration axis; its single row is labeled 0.
    # Algorithm 2 rows are labeled by iteration number starting at 1.
    labels = (0,) if config.algorithm == "alg1" else tuple(range(1, depth + 1))
    result = ExperimentResult(
        config=config,
        shape=tuple(int(v) for v in a.shape),
        iterations=labels,
        mean=tuple(float(v) for v in mean),
        p05=tuple(float(v) for v in p05),
        p95=tuple(float(v) for v in p95),
        records=tuple(records),
    )
    if config.csv_path:
        write_csv(config.csv_path, result)
    if config.svg_path:
        write_svg(config.svg_path, result)
    return result


def write_csv(path, result):
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(result.csv_text())
    except OSError as exc:
        raise IoError(f"cannot write CSV to {path}: {exc}") from exc


def write_svg(path, result):
    """Convergence plot: mean line with a 5th-95th percentile band.

    Rendered straight through matplotlib's Figure API (no pyplot, no
    global state) with a fixed hash salt so the SVG is reproducible.
    """
    import matplotlib

    matplotlib.rcParams["svg.hashsalt"] = str(result.config.seed)
    from matplotlib.figure import Figure

    fig = Figure(figsize=(6.0, 4.0))
    ax = fig.add_subplot()
    xs = list(result.iterations)
    if len(xs) == 1:
        ax.axhline(result.mean[0], color="tab:blue", linestyle="--", label="mean")
        ax.axhspan(result.p05[0], result.p95[0], color="tab:blue", alpha=0.2, label="5-95%")
    else:
        ax.plot(xs, result.mean, color="tab:blue", marker="o", label="mean")
        ax.fill_between(xs, result.p05, result.p95, color="tab:blue", alpha=0.2, label="5-95%")
        ax.set_xticks(xs)
    ax.set_yscale("log")
    ax.set_xlabel("iteration")
    ax.set_ylabel(f"{result.config.metric} error")
    ax.set_title(f"{result.config.generator} / {result.config.algorithm}, {result.config.trials} trials")
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    try:
        fig.savefig(path, format="svg", metadata={"Date": None})
    except OSError as exc:
        raise IoError(f"cannot write SVG to {path}: {exc}") from exc
