"""Command-line interface: signal generation, entropy computation, sweeps.

Exit codes: 0 success, 2 usage/validation error, 3 missing resources
(e.g. MNIST files), 4 internal numeric failure.
"""
from __future__ import annotations

import argparse
import os
import sys
import time

from . import mnist, sweep as sweep_mod
from .lognnet import NetworkConfig, learning_inertia, nneten_from_vectors
from .reservoir import FillMethod
from .signals import (NOISE_GENERATOR_NAME, NoiseSpec, gen_binary, gen_logistic,
                      gen_noise, gen_sine, load_series, save_series)

EXIT_USAGE = 2
EXIT_MISSING = 3
EXIT_NUMERIC = 4

MNIST_DIR_ENV = "NNETEN_MNIST_DIR"


def parse_methods(text: str):
    """Parse a method list like '5', '1,3,5' or '1-6'."""
    methods = []
    for part in text.split(","):
        part = part.strip()
        if "-" in part[1:]:
            lo, hi = part.split("-")
            methods.extend(range(int(lo), int(hi) + 1))
        elif part:
            methods.append(int(part))
    if not methods:
        raise ValueError(f"no methods in {text!r}")
    return tuple(FillMethod(m) for m in methods)


def parse_grid(text: str, kind: str):
    if text == "default":
        if kind != "length":
            raise ValueError("'default' grid is only defined for length sweeps")
        return sweep_mod.DEFAULT_LENGTH_GRID
    values = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        num = float(part)
        if kind == "length":
            num = int(num)
        values.append(num)
    if not values:
        raise ValueError(f"empty grid {text!r}")
    return tuple(values)


def load_config_file(path) -> dict:
    """key=value lines; '#' comments and blanks ignored."""
    values = {}
    with open(path) as f:
        for line in f:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"bad config line {line!r} in {path}")
            key, _, value = line.partition("=")
            values[key.strip()] = value.strip()
    return values


class Settings:
    """Flag > config-file > default resolution for one parsed command."""

    def __init__(self, args, file_values):
        self.args = args
        self.file_values = file_values

    def get(self, name, default=None, cast=None):
        flag = getattr(self.args, name, None)
        if flag is not None:
            return flag
        if name in self.file_values:
            raw = self.file_values[name]
            return cast(raw) if cast else raw
        return default


def _add_network_flags(p):
    p.add_argument("--epochs", type=int, help="total training epochs")
    p.add_argument("--ep1", type=int, help="first LI checkpoint (default 100)")
    p.add_argument("--ep2", type=int, help="second LI checkpoint (default 400)")
    p.add_argument("--seed", type=int, help="seed for weight init (default 0)")
    p.add_argument("--lr", type=float, help="learning rate (default 0.1)")
    p.add_argument("--train-size", type=int, help="training subset size")
    p.add_argument("--test-size", type=int, help="test subset size")
    p.add_argument("--config", help="key=value config file; flags take precedence")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="nneten",
        description="Neural-network entropy of time series (reservoir filling, "
                    "noise robustness sweeps)")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a test signal file")
    g.add_argument("kind", choices=("sine", "binary", "logistic", "noise"))
    g.add_argument("--n", type=int, required=True, help="number of samples")
    g.add_argument("--amplitude", type=float, default=1.0, help="sine amplitude")
    g.add_argument("--periods-over-n", action="store_true",
                   help="scale the sine argument by N instead of 19625")
    g.add_argument("--r", type=float, default=3.8, help="logistic parameter")
    g.add_argument("--x0", type=float, default=0.1, help="logistic start value")
    g.add_argument("--discard", type=int, default=0,
                   help="logistic transient iterates to drop")
    g.add_argument("--a", type=float, default=1.0, help="noise amplitude")
    g.add_argument("--b", type=float, default=0.0, help="noise bias")
    g.add_argument("--seed", type=int, default=0, help="noise seed")
    g.add_argument("--out", default="-", help="output file ('-' for stdout)")

    e = sub.add_parser("entropy", help="compute NNetEn of a series file")
    e.add_argument("series", help="series file (one sample per line)")
    e.add_argument("--mnist-dir", help=f"MNIST IDX directory (or ${MNIST_DIR_ENV})")
    e.add_argument("--method", type=int, help="filling method 1-6 (default 5)")
    e.add_argument("--truncate", choices=("first", "last"),
                   help="kept window when the series exceeds 19625 samples")
    e.add_argument("--csv", help="also append the result as a CSV row")
    _add_network_flags(e)

    s = sub.add_parser("sweep", help="run an experiment grid, writing CSV + meta")
    s.add_argument("kind", choices=sweep_mod.SWEEP_KINDS)
    s.add_argument("--signal", required=True,
                   choices=sweep_mod.SIGNAL_KINDS)
    s.add_argument("--methods", help="e.g. '5', '1,3', '1-6' (default 5)")
    s.add_argument("--grid", help="comma-separated grid ('default' for length)")
    s.add_argument("--a", dest="grid_a", help="noise-amplitude grid (alias of --grid)")
    s.add_argument("--b", dest="grid_b", help="offset grid (alias of --grid)")
    s.add_argument("--noise-a", type=float,
                   help="fixed noise amplitude for offset sweeps (default 0)")
    s.add_argument("--noise-seed", type=int, help="noise generator seed (default 0)")
    s.add_argument("--base-n", type=int,
                   help="series length for noise/offset sweeps (default 19625)")
    s.add_argument("--amplitude", type=float, help="signal amplitude (default 1)")
    s.add_argument("--periods-over-n", action="store_true",
                   help="scale the sine argument by N instead of 19625")
    s.add_argument("--r", type=float, help="logistic parameter (default 3.8)")
    s.add_argument("--x0", type=float, help="logistic start value (default 0.1)")
    s.add_argument("--mnist-dir", help=f"MNIST IDX directory (or ${MNIST_DIR_ENV})")
    s.add_argument("--workers", type=int, help="parallel grid workers (default 1)")
    s.add_argument("--out", required=True, help="output CSV path")
    s.add_argument("--truncate", choices=("first", "last"))
    _add_network_flags(s)

    return parser


def _resolve_network_config(st: Settings):
    ep1 = st.get("ep1", cast=int)
    ep2 = st.get("ep2", cast=int)
    epochs = st.get("epochs", cast=int)
    if ep1 is None and ep2 is None:
        if epochs is None:
            ep1, ep2 = 100, 400
        else:
            ep1 = ep2 = epochs
    elif ep1 is None or ep2 is None:
        raise ValueError("--ep1 and --ep2 must be given together")
    checkpoints = tuple(sorted({ep1, ep2}))
    config = NetworkConfig(
        epochs=epochs,
        learning_rate=st.get("lr", 0.1, float),
        seed=st.get("seed", 0, int),
        train_size=st.get("train_size", cast=int),
        test_size=st.get("test_size", cast=int),
        epoch_checkpoints=checkpoints,
    )
    return config, ep1, ep2


def _resolve_mnist_dir(st: Settings):
    directory = st.get("mnist_dir") or os.environ.get(MNIST_DIR_ENV)
    if not directory:
        raise FileNotFoundError(
            f"no MNIST directory given; pass --mnist-dir or set ${MNIST_DIR_ENV}")
    return directory


def cmd_gen(args) -> int:
    header = [f"kind={args.kind} n={args.n}"]
    if args.kind == "sine":
        series = gen_sine(args.n, args.amplitude, periods_over_n=args.periods_over_n)
        header.append(f"amplitude={args.amplitude} periods_over_n={args.periods_over_n}")
    elif args.kind == "binary":
        series = gen_binary(args.n)
    elif args.kind == "logistic":
        series = gen_logistic(args.n, args.r, args.x0, discard=args.discard)
        header.append(f"r={args.r} x0={args.x0} discard={args.discard}")
    else:
        series = gen_noise(args.n, NoiseSpec(args.a, args.b, args.seed))
        header.append(f"a={args.a} b={args.b} seed={args.seed} "
                      f"generator={NOISE_GENERATOR_NAME}")
    if args.out == "-":
        for v in series:
            print(repr(float(v)))
    else:
        save_series(args.out, series, header_lines=header)
    return 0


def cmd_entropy(args) -> int:
    file_values = load_config_file(args.config) if args.config else {}
    st = Settings(args, file_values)
    config, ep1, ep2 = _resolve_network_config(st)
    method = FillMethod(st.get("method", 5, int))
    truncate = st.get("truncate", "first")

    series = load_series(args.series)
    dataset = mnist.load_dataset(_resolve_mnist_dir(st))
    n_train = config.train_size if config.train_size is not None else len(dataset.train)
    n_test = config.test_size if config.test_size is not None else len(dataset.test)
    vectors = (mnist.images_to_vectors(dataset.train.images[:n_train]),
               dataset.train.labels[:n_train],
               mnist.images_to_vectors(dataset.test.images[:n_test]),
               dataset.test.labels[:n_test])

    start = time.perf_counter()
    result = nneten_from_vectors(series, method, config, *vectors,
                                 truncate=truncate)
    runtime_ms = (time.perf_counter() - start) * 1e3

    for ep in sorted(result.nneten_at):
        print(f"NNetEn({ep}) = {result.nneten_at[ep]!r}")
    if ep1 != ep2:
        li = learning_inertia(result, ep1, ep2)
        print(f"LI({ep1}/{ep2}) = {li!r}")
    else:
        li = None
    meta = result.metadata
    print(f"seed={meta['seed']} method={meta['method']} n={meta['series_length']} "
          f"config={meta['config']} generator={meta['generator']}")

    if args.csv:
        rows = [sweep_mod.SweepRow(
            grid_var="N", grid_value=int(series.size), method=int(method),
            ep=ep, nneten=result.nneten_at[ep], li=li, snr_db=None,
            seed=config.seed, runtime_ms=runtime_ms)
            for ep in sorted(result.nneten_at)]
        sweep_mod.write_csv(rows, args.csv)
    return 0


def cmd_sweep(args) -> int:
    file_values = load_config_file(args.config) if args.config else {}
    st = Settings(args, file_values)
    config, _, _ = _resolve_network_config(st)

    grid_text = args.grid or args.grid_a or args.grid_b or file_values.get("grid")
    if not grid_text:
        raise ValueError("no grid given (use --grid, --a or --b)")
    spec = sweep_mod.SweepSpec(
        kind=args.kind,
        signal=args.signal,
        methods=parse_methods(st.get("methods", "5")),
        grid=parse_grid(grid_text, args.kind),
        config=config,
        signal_amplitude=st.get("amplitude", 1.0, float),
        logistic_r=st.get("r", 3.8, float),
        logistic_x0=st.get("x0", 0.1, float),
        base_length=st.get("base_n", 19625, int),
        noise_amplitude=st.get("noise_a", 0.0, float),
        noise_seed=st.get("noise_seed", 0, int),
        sine_periods_over_n=bool(args.periods_over_n),
        truncate=st.get("truncate", "first"),
    )

    mnist_dir = _resolve_mnist_dir(st)
    paths = mnist.dataset_paths(mnist_dir)
    dataset = mnist.load_dataset(mnist_dir)
    vectors = sweep_mod.prepare_vectors(dataset, config)

    checksums = {name: mnist.file_sha256(path) for name, path in paths.items()}
    sweep_mod.write_meta(args.out + ".meta",
                         sweep_mod.sweep_metadata(spec, checksums))

    n_jobs = len(spec.grid) * len(spec.methods)
    done = 0
    with open(args.out, "w", newline="") as f:
        f.write(",".join(sweep_mod.CSV_COLUMNS) + "\n")
        f.flush()

        def flush_rows(job_rows):
            nonlocal done
            for row in job_rows:
                f.write(",".join(sweep_mod.format_row(row)) + "\n")
            f.flush()
            done += 1
            head = job_rows[0]
            print(f"[{done}/{n_jobs}] {head.grid_var}={head.grid_value} "
                  f"method={head.method} done ({head.runtime_ms:.0f} ms)",
                  file=sys.stderr)

        sweep_mod.run_sweep(spec, vectors=vectors,
                            workers=st.get("workers", 1, int),
                            row_callback=flush_rows)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "gen":
            return cmd_gen(args)
        if args.command == "entropy":
            return cmd_entropy(args)
        return cmd_sweep(args)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        print("hint: supply the MNIST IDX files via --mnist-dir or "
              f"${MNIST_DIR_ENV}; the expected names are "
              f"{mnist.TRAIN_IMAGES}[.gz] etc.", file=sys.stderr)
        return EXIT_MISSING
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ArithmeticError, FloatingPointError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
