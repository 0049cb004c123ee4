"""Experiment grids: entropy vs. series length, noise amplitude, or offset.

Each sweep evaluates NNetEn over a grid of one variable for a set of filling
methods and emits one CSV row per (grid point, method, epoch checkpoint),
with a key=value sidecar recording full provenance.  Grid points are
independent jobs and may run in a thread pool; output order is always the
deterministic (grid value, method, epoch) order.
"""
from __future__ import annotations

import csv
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import mnist
from .lognnet import NetworkConfig, nneten_from_vectors
from .reservoir import FillMethod
from .signals import (NOISE_GENERATOR_NAME, NoiseSpec, gen_binary, gen_logistic,
                      gen_noise, gen_sine, snr)

SWEEP_KINDS = ("length", "noise", "offset")
SIGNAL_KINDS = ("sine", "binary", "logistic", "noise")

# Landmark lengths plus log-spaced intermediates; the last point is the
# full-reservoir reference level.
DEFAULT_LENGTH_GRID = (10, 20, 50, 100, 200, 500, 1000, 2000, 5000, 11000,
                       15000, 19625)
REFERENCE_LENGTH = 19625

CSV_COLUMNS = ("grid_var", "grid_value", "method", "ep", "nneten", "li",
               "snr_db", "seed", "runtime_ms")

GRID_VAR_BY_KIND = {"length": "N", "noise": "A", "offset": "B"}


@dataclass(frozen=True)
class SweepSpec:
    kind: str
    signal: str
    methods: tuple
    grid: tuple
    config: NetworkConfig
    signal_amplitude: float = 1.0
    logistic_r: float = 3.8
    logistic_x0: float = 0.1
    base_length: int = 19625
    noise_amplitude: float = 0.0   # fixed A for offset sweeps
    noise_seed: int = 0
    sine_periods_over_n: bool = False
    truncate: str = "first"

    def __post_init__(self):
        if self.kind not in SWEEP_KINDS:
            raise ValueError(f"unknown sweep kind {self.kind!r}")
        if self.signal not in SIGNAL_KINDS:
            raise ValueError(f"unknown signal kind {self.signal!r}")
        if self.signal == "noise" and self.kind != "offset":
            raise ValueError("the pure-noise signal is only swept over offsets")
        if not self.methods:
            raise ValueError("at least one filling method is required")
        for m in self.methods:
            FillMethod(m)
        if not self.grid:
            raise ValueError("sweep grid must be non-empty")
        if any(b <= a for a, b in zip(self.grid, self.grid[1:])):
            raise ValueError("sweep grid must be strictly increasing")
        if self.kind == "length" and any(
                g < 1 or int(g) != g for g in self.grid):
            raise ValueError("length grid points must be integers >= 1")
        if self.kind == "noise" and any(g < 0 for g in self.grid):
            raise ValueError("noise amplitude grid points must be >= 0")
        if self.noise_amplitude < 0:
            raise ValueError("noise amplitude must be >= 0")
        if self.base_length < 1:
            raise ValueError("base series length must be >= 1")


@dataclass
class SweepRow:
    grid_var: str
    grid_value: float
    method: int
    ep: int
    nneten: float
    li: float | None
    snr_db: float | None
    seed: int
    runtime_ms: float


def _base_signal(spec: SweepSpec, length: int) -> np.ndarray:
    if spec.signal == "sine":
        return gen_sine(length, spec.signal_amplitude,
                        periods_over_n=spec.sine_periods_over_n)
    if spec.signal == "binary":
        return gen_binary(length)
    if spec.signal == "logistic":
        return gen_logistic(length, spec.logistic_r, spec.logistic_x0)
    raise ValueError(f"no base signal for kind {spec.signal!r}")


def _series_for_point(spec: SweepSpec, grid_value):
    """Compose the series and the SNR column for one grid point."""
    if spec.kind == "length":
        return _base_signal(spec, int(grid_value)), None
    if spec.kind == "noise":
        x = _base_signal(spec, spec.base_length)
        z = gen_noise(spec.base_length,
                      NoiseSpec(grid_value, 0.0, spec.noise_seed))
        return x + z, snr(spec.signal_amplitude, grid_value)
    # offset sweep: fixed A, B varies
    z = gen_noise(spec.base_length,
                  NoiseSpec(spec.noise_amplitude, grid_value, spec.noise_seed))
    if spec.signal == "noise":
        return z, None
    x = _base_signal(spec, spec.base_length)
    return x + z, snr(spec.signal_amplitude, spec.noise_amplitude)


def prepare_vectors(dataset: mnist.MnistDataset, config: NetworkConfig,
                    permutation=None):
    """One-time image vectorization shared by every grid point."""
    n_train = config.train_size if config.train_size is not None else len(dataset.train)
    n_test = config.test_size if config.test_size is not None else len(dataset.test)
    return (mnist.images_to_vectors(dataset.train.images[:n_train], permutation),
            np.asarray(dataset.train.labels[:n_train]),
            mnist.images_to_vectors(dataset.test.images[:n_test], permutation),
            np.asarray(dataset.test.labels[:n_test]))


def _run_job(spec, vectors, grid_value, method):
    series, snr_db = _series_for_point(spec, grid_value)
    start = time.perf_counter()
    result = nneten_from_vectors(series, method, spec.config, *vectors,
                                 truncate=spec.truncate)
    runtime_ms = (time.perf_counter() - start) * 1e3
    grid_var = GRID_VAR_BY_KIND[spec.kind]
    return [SweepRow(grid_var=grid_var, grid_value=grid_value,
                     method=int(method), ep=ep, nneten=result.nneten_at[ep],
                     li=result.learning_inertia, snr_db=snr_db,
                     seed=spec.config.seed, runtime_ms=runtime_ms)
            for ep in sorted(result.nneten_at)]


def run_sweep(spec: SweepSpec, dataset: mnist.MnistDataset = None, *,
              vectors=None, workers: int = 1, row_callback=None):
    """Run all (grid point, method) jobs; returns rows in deterministic order.

    ``row_callback`` receives each job's rows as soon as that job completes,
    in job order, so callers can flush partial output.  ``vectors`` may be
    passed instead of ``dataset`` to reuse a prepared vectorization.
    """
    if vectors is None:
        if dataset is None:
            raise ValueError("either a dataset or prepared vectors is required")
        vectors = prepare_vectors(dataset, spec.config)
    jobs = [(g, m) for g in spec.grid for m in spec.methods]
    rows = []
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = pool.map(lambda jm: _run_job(spec, vectors, *jm), jobs)
            for job_rows in results:
                rows.extend(job_rows)
                if row_callback is not None:
                    row_callback(job_rows)
    else:
        for g, m in jobs:
            job_rows = _run_job(spec, vectors, g, m)
            rows.extend(job_rows)
            if row_callback is not None:
                row_callback(job_rows)
    return rows


def sweep_length(spec, dataset=None, **kwargs):
    if spec.kind != "length":
        raise ValueError(f"expected a length sweep, got {spec.kind!r}")
    return run_sweep(spec, dataset, **kwargs)


def sweep_noise_amplitude(spec, dataset=None, **kwargs):
    if spec.kind != "noise":
        raise ValueError(f"expected a noise-amplitude sweep, got {spec.kind!r}")
    return run_sweep(spec, dataset, **kwargs)


def sweep_offset(spec, dataset=None, **kwargs):
    if spec.kind != "offset":
        raise ValueError(f"expected an offset sweep, got {spec.kind!r}")
    return run_sweep(spec, dataset, **kwargs)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return repr(value)
    return str(value)


def _parse_opt_float(text):
    if text == "":
        return None
    if text == "inf":
        return math.inf
    if text == "-inf":
        return -math.inf
    return float(text)


def _parse_num(text):
    try:
        return int(text)
    except ValueError:
        return float(text)


def format_row(row: SweepRow):
    return [_fmt(getattr(row, col)) for col in CSV_COLUMNS]


def write_csv(rows, path) -> None:
    """Header plus one line per row; decimal point, comma separator, LF endings."""
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            writer.writerow(format_row(row))


def read_csv(path):
    rows = []
    with open(path, newline="") as f:
        reader = csv.reader(f)
        header = next(reader)
        if tuple(header) != CSV_COLUMNS:
            raise ValueError(f"unexpected CSV header {header} in {path}")
        for rec in reader:
            rows.append(SweepRow(
                grid_var=rec[0],
                grid_value=_parse_num(rec[1]),
                method=int(rec[2]),
                ep=int(rec[3]),
                nneten=float(rec[4]),
                li=_parse_opt_float(rec[5]),
                snr_db=_parse_opt_float(rec[6]),
                seed=int(rec[7]),
                runtime_ms=float(rec[8]),
            ))
    return rows


def sweep_metadata(spec: SweepSpec, mnist_checksums=None) -> dict:
    """Provenance mapping for the `.meta` sidecar."""
    meta = {
        "kind": spec.kind,
        "signal": spec.signal,
        "methods": ",".join(str(int(m)) for m in spec.methods),
        "grid": ",".join(_fmt(g) for g in spec.grid),
        "seed": spec.config.seed,
        "config": spec.config.digest(),
        "generator": NOISE_GENERATOR_NAME,
        "noise_seed": spec.noise_seed,
        "signal_amplitude": spec.signal_amplitude,
    }
    if spec.kind == "length":
        meta["reference_n"] = REFERENCE_LENGTH
    else:
        meta["base_length"] = spec.base_length
    if spec.kind == "offset":
        meta["noise_amplitude"] = spec.noise_amplitude
    if mnist_checksums:
        for name, digest in mnist_checksums.items():
            meta[f"sha256_{name}"] = digest
    return meta


def write_meta(path, meta: dict) -> None:
    with open(path, "w") as f:
        for key, value in meta.items():
            f.write(f"{key}={value}\n")
