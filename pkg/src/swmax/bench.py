"""Benchmark harness and CLI.

Streams a dataset through one algorithm and records, at each query point,
the window utility, solution size, cumulative oracle calls, and the peak
number of buffered item references. Output is a CSV; wall-clock time is
informational only, oracle calls are the cost metric.

``greedy`` and ``sieve`` are not sliding-window algorithms: they are rerun
from scratch on every queried window (the usual quality/cost baselines).
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

from .core import Bounds, CountingOracle, Item, Window, window_members
from .ingest import (
    DatasetStore,
    gen_drift_vectors,
    gen_set_stream,
    load_dense_csv,
    load_set_stream,
    normalize_columns_then_rows,
)
from .objectives import CoverageOracle, IVMOracle, KernelParams, estimate_upper_bound
from .sliding import (
    PrioritySample,
    SieveGreedy,
    SieveNaive,
    SlidingWindowDP,
    sieve_reduction,
)
from .streaming import SieveStream, greedy_select

ALGORITHMS = ("greedy", "sieve", "sw-rd", "sw-dp", "sieve-naive", "sieve-greedy", "random")
OBJECTIVES = ("coverage", "ivm")
FORMATS = ("csv", "sets", "synth-vec", "synth-sets")

CSV_HEADER = "window_end,algorithm,k,W,epsilon,utility,solution_size,oracle_calls,peak_items,wall_ms"


@dataclass
class RunConfig:
    objective: str
    algorithm: str
    k: int
    window: int
    epsilon: float = 0.2
    upper_bound: float | None = None
    sample_c: float = 20.0
    kernel_h: float = 0.75
    sigma: float = 1.0
    query_every: int | None = None
    seed: int = 0
    input: str | None = None
    format: str = "csv"
    drop_columns: tuple[int, ...] = ()
    normalize: bool = False
    output: str | None = None
    jobs: int = 1
    # synthetic-stream knobs (used by the synth-* formats only)
    synth_n: int = 2000
    synth_d: int = 5
    synth_clusters: int = 4
    synth_drift_period: int = 500
    synth_universe: int = 60
    synth_mean_size: float = 8.0

    def validate(self) -> None:
        if self.objective not in OBJECTIVES:
            raise ValueError(f"unknown objective {self.objective!r}")
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.k < 1:
            raise ValueError("--k must be >= 1")
        if self.window < 1:
            raise ValueError("--window must be >= 1")
        if not self.epsilon > 0:
            raise ValueError("--epsilon must be > 0")
        if self.upper_bound is not None and self.upper_bound < 1:
            raise ValueError("--upper-bound must be >= 1")
        if self.algorithm == "sieve-greedy" and not self.sample_c > 0:
            raise ValueError("--sample-c must be > 0 for sieve-greedy")
        if self.kernel_h <= 0 or self.sigma <= 0:
            raise ValueError("--kernel-h and --sigma must be > 0")
        if self.query_every is not None and self.query_every < 1:
            raise ValueError("--query-every must be >= 1")
        if self.jobs < 1:
            raise ValueError("--jobs must be >= 1")
        if self.format in ("csv", "sets") and not self.input:
            raise ValueError(f"--format {self.format} requires --input")
        if self.drop_columns and self.format != "csv":
            raise ValueError("--drop-columns applies to the csv format only")
        if self.normalize and self.format not in ("csv", "synth-vec"):
            raise ValueError("--normalize applies to dense formats only")


@dataclass
class MetricsRecord:
    window_end: int
    algorithm: str
    k: int
    window: int
    epsilon: float
    utility: float
    solution_size: int
    oracle_calls: int
    peak_items: int
    wall_ms: float


def load_store(config: RunConfig) -> DatasetStore:
    if config.format == "csv":
        store = load_dense_csv(config.input, drop_columns=config.drop_columns)
    elif config.format == "sets":
        store = load_set_stream(config.input)
    elif config.format == "synth-vec":
        store = gen_drift_vectors(
            config.synth_n,
            config.synth_d,
            config.synth_clusters,
            config.synth_drift_period,
            config.seed,
        )
    else:
        store = gen_set_stream(
            config.synth_n, config.synth_universe, config.synth_mean_size, config.seed
        )
    if config.normalize:
        store = normalize_columns_then_rows(store)
    return store


def make_oracle(config: RunConfig, store: DatasetStore):
    if config.objective == "coverage":
        return CoverageOracle(store)
    return IVMOracle(store, KernelParams(config.kernel_h, config.sigma))


def _make_stream_algorithm(config: RunConfig, counting: CountingOracle, bounds: Bounds):
    k, w = config.k, config.window
    if config.algorithm == "sw-rd":
        return sieve_reduction(k, w, bounds, counting)
    if config.algorithm == "sw-dp":
        return SlidingWindowDP(k, w, bounds, counting)
    if config.algorithm == "sieve-naive":
        return SieveNaive(k, w, bounds, counting)
    if config.algorithm == "sieve-greedy":
        return SieveGreedy(k, w, bounds, counting, config.sample_c, seed=config.seed)
    if config.algorithm == "random":
        return PrioritySample(k, w, counting, seed=config.seed)
    raise ValueError(f"{config.algorithm!r} is not a streaming algorithm")


def run_benchmark(config: RunConfig, store: DatasetStore | None = None) -> list[MetricsRecord]:
    """Stream the dataset through the configured algorithm, recording metrics.

    Records are taken at every ``query_every``-th timestep and at the final
    one. Reported utility is always recomputed from the returned ids with a
    separate, uncounted oracle, so cross-algorithm comparisons use identical
    oracle code and counted calls reflect the algorithm alone.
    """
    config.validate()
    if store is None:
        store = load_store(config)
    n = len(store)
    if n == 0:
        raise ValueError("dataset is empty")
    params = KernelParams(config.kernel_h, config.sigma)
    upper = config.upper_bound
    if upper is None:
        upper = estimate_upper_bound(config.objective, store, config.k, params)
    bounds = Bounds(upper, config.epsilon)
    counting = CountingOracle(make_oracle(config, store))
    measure = make_oracle(config, store)
    query_every = config.query_every or max(1, math.ceil(config.window / 10))

    records: list[MetricsRecord] = []
    start = time.perf_counter()

    def record(window_end: int, solution: list[int], peak: int) -> None:
        records.append(
            MetricsRecord(
                window_end=window_end,
                algorithm=config.algorithm,
                k=config.k,
                window=config.window,
                epsilon=config.epsilon,
                utility=measure.eval(solution),
                solution_size=len(solution),
                oracle_calls=counting.calls,
                peak_items=peak,
                wall_ms=(time.perf_counter() - start) * 1000.0,
            )
        )

    if config.algorithm in ("greedy", "sieve"):
        peak = 0
        for t in range(1, n + 1):
            if t % query_every and t != n:
                continue
            members = window_members(Window(t, config.window), n)
            if config.algorithm == "greedy":
                solution, _ = greedy_select(members, config.k, counting)
                peak = max(peak, len(members))
            else:
                sieve = SieveStream(config.k, bounds, counting)
                for m in members:
                    sieve.step(Item(m, m))
                solution, _ = sieve.query()
                peak = max(peak, sieve.peak_items())
            record(t, solution, peak)
    else:
        alg = _make_stream_algorithm(config, counting, bounds)
        for t in range(1, n + 1):
            alg.step(Item(t, t))
            if t % query_every == 0 or t == n:
                solution, _ = alg.query()
                record(t, solution, alg.peak_items())
    return records


def _fmt(value: float) -> str:
    return f"{value:.6g}"


def render_metrics_csv(records: Sequence[MetricsRecord]) -> str:
    lines = [CSV_HEADER]
    for r in records:
        lines.append(
            f"{r.window_end},{r.algorithm},{r.k},{r.window},{_fmt(r.epsilon)},"
            f"{_fmt(r.utility)},{r.solution_size},{r.oracle_calls},{r.peak_items},"
            f"{_fmt(r.wall_ms)}"
        )
    return "\n".join(lines) + "\n"


def write_metrics_csv(records: Sequence[MetricsRecord], path) -> None:
    """Write records with LF line endings and 6-significant-digit floats."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(render_metrics_csv(records))


def run_many(configs: Sequence[RunConfig], jobs: int = 1) -> list[list[MetricsRecord]]:
    """Run independent configs, optionally in a worker pool.

    Each run owns its oracle, counters, and rng, so results are identical
    to a serial run; outputs come back in input order regardless of
    completion order.
    """
    if jobs <= 1 or len(configs) <= 1:
        return [run_benchmark(c) for c in configs]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(run_benchmark, configs))


def parse_cli(argv: Sequence[str]) -> RunConfig:
    """Map CLI flags onto a validated RunConfig; usage errors exit with 2."""
    parser = argparse.ArgumentParser(
        prog="swmax-bench",
        description="Benchmark submodular maximization algorithms over sliding windows.",
    )
    parser.add_argument("--objective", choices=OBJECTIVES, required=True)
    parser.add_argument("--algorithm", choices=ALGORITHMS, required=True)
    parser.add_argument("--k", type=int, required=True, help="cardinality constraint")
    parser.add_argument("--window", type=int, required=True, help="sliding window size W")
    parser.add_argument("--epsilon", type=float, default=0.2)
    parser.add_argument(
        "--upper-bound",
        type=float,
        default=None,
        help="upper bound on the window optimum; estimated by a prescan when omitted",
    )
    parser.add_argument(
        "--sample-c",
        type=float,
        default=None,
        help="sieve-greedy sampling parameter (an item is sampled w.p. c/W); required for sieve-greedy, typically 20",
    )
    parser.add_argument("--kernel-h", type=float, default=0.75)
    parser.add_argument("--sigma", type=float, default=1.0)
    parser.add_argument(
        "--query-every",
        type=int,
        default=None,
        help="record every Nth timestep (default: ceil(W/10))",
    )
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--input", default=None)
    parser.add_argument("--format", choices=FORMATS, default="csv")
    parser.add_argument(
        "--drop-columns",
        default="",
        help="comma-separated 0-based column indices to drop from CSV input",
    )
    parser.add_argument(
        "--normalize",
        action="store_true",
        help="min-max each column then L2-normalize each row (dense input)",
    )
    parser.add_argument("--output", default=None, help="metrics CSV path (default: stdout)")
    parser.add_argument("--jobs", type=int, default=1, help="worker pool size for multi-config runs")
    parser.add_argument("--synth-n", type=int, default=2000)
    parser.add_argument("--synth-d", type=int, default=5)
    parser.add_argument("--synth-clusters", type=int, default=4)
    parser.add_argument("--synth-drift-period", type=int, default=500)
    parser.add_argument("--synth-universe", type=int, default=60)
    parser.add_argument("--synth-mean-size", type=float, default=8.0)
    args = parser.parse_args(argv)

    if args.algorithm == "sieve-greedy" and args.sample_c is None:
        parser.error("--sample-c is required for sieve-greedy")
    drop: tuple[int, ...] = ()
    if args.drop_columns:
        try:
            drop = tuple(int(part) for part in args.drop_columns.split(","))
        except ValueError:
            parser.error(f"--drop-columns expects integers, got {args.drop_columns!r}")

    config = RunConfig(
        objective=args.objective,
        algorithm=args.algorithm,
        k=args.k,
        window=args.window,
        epsilon=args.epsilon,
        upper_bound=args.upper_bound,
        sample_c=args.sample_c if args.sample_c is not None else 20.0,
        kernel_h=args.kernel_h,
        sigma=args.sigma,
        query_every=args.query_every,
        seed=args.seed,
        input=args.input,
        format=args.format,
        drop_columns=drop,
        normalize=args.normalize,
        output=args.output,
        jobs=args.jobs,
        synth_n=args.synth_n,
        synth_d=args.synth_d,
        synth_clusters=args.synth_clusters,
        synth_drift_period=args.synth_drift_period,
        synth_universe=args.synth_universe,
        synth_mean_size=args.synth_mean_size,
    )
    try:
        config.validate()
    except ValueError as exc:
        parser.error(str(exc))
    return config


def main(argv: Sequence[str] | None = None) -> int:
    config = parse_cli(sys.argv[1:] if argv is None else argv)
    try:
        records = run_benchmark(config)
        if config.output:
            write_metrics_csv(records, config.output)
        else:
            sys.stdout.write(render_metrics_csv(records))
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
