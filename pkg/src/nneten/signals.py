"""Test-signal generators, uniform noise synthesis, SNR and summary statistics.

All generators use the 1-based sample index n = 1..N.  Series are plain
1-D float64 numpy arrays; every public function validates that its inputs
are non-empty and finite.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Fixed argument scale of the periodic map: x_n = A*sin(n*20*pi/19625).
SINE_DENOMINATOR = 19625

# Name of the seeded uniform generator, recorded in output metadata.
NOISE_GENERATOR_NAME = "numpy-pcg64"


@dataclass(frozen=True)
class NoiseSpec:
    """Uniform noise z_n = amplitude * (u_n - 0.5) + bias, u_n ~ U[0, 1)."""

    amplitude: float
    bias: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.amplitude < 0:
            raise ValueError(f"noise amplitude must be >= 0, got {self.amplitude}")


@dataclass(frozen=True)
class SignalStats:
    n_total: int
    mean: float
    std_dev: float
    sum: float
    minimum: float
    median: float
    maximum: float


def as_series(values) -> np.ndarray:
    """Coerce to a validated 1-D float64 series (length >= 1, all finite)."""
    x = np.asarray(values, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError(f"series must be 1-D, got shape {x.shape}")
    if x.size < 1:
        raise ValueError("series must contain at least one sample")
    if not np.all(np.isfinite(x)):
        raise ValueError("series contains non-finite samples")
    return x


def gen_sine(n_elements: int, amplitude: float = 1.0,
             periods_over_n: bool = False) -> np.ndarray:
    """Periodic map x_n = amplitude * sin(n*20*pi/19625), n = 1..n_elements.

    With ``periods_over_n`` the denominator tracks the series length instead
    of staying at 19625, so any length carries 10 full periods.
    """
    if n_elements < 1:
        raise ValueError("series must contain at least one sample")
    denom = n_elements if periods_over_n else SINE_DENOMINATOR
    n = np.arange(1, n_elements + 1, dtype=np.float64)
    return amplitude * np.sin(n * 20.0 * np.pi / denom)


def gen_binary(n_elements: int) -> np.ndarray:
    """Binary map x_n = n mod 2: the alternating series (1, 0, 1, 0, ...)."""
    if n_elements < 1:
        raise ValueError("series must contain at least one sample")
    n = np.arange(1, n_elements + 1)
    return (n % 2).astype(np.float64)


def gen_logistic(n_elements: int, r: float = 3.8, x0: float = 0.1,
                 discard: int = 0) -> np.ndarray:
    """Logistic map iterates x_{k+1} = r*x_k*(1-x_k), chaotic at r = 3.8.

    Returns the first ``n_elements`` iterates after x0 (x0 itself excluded);
    ``discard`` extra leading iterates are dropped as transient.
    """
    if n_elements < 1:
        raise ValueError("series must contain at least one sample")
    if not 0.0 < x0 < 1.0:
        raise ValueError(f"x0 must lie in (0, 1), got {x0}")
    if not 0.0 < r <= 4.0:
        raise ValueError(f"r must lie in (0, 4], got {r}")
    if discard < 0:
        raise ValueError("discard must be >= 0")
    out = np.empty(n_elements, dtype=np.float64)
    x = x0
    for _ in range(discard):
        x = r * x * (1.0 - x)
    for k in range(n_elements):
        x = r * x * (1.0 - x)
        out[k] = x
    return out


def gen_noise(n_elements: int, spec: NoiseSpec) -> np.ndarray:
    """Seeded uniform noise z_n = A*(u_n - 0.5) + B with u_n ~ U[0, 1).

    Identical (n_elements, spec) always produces a bitwise-identical series.
    """
    if n_elements < 1:
        raise ValueError("series must contain at least one sample")
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    u = rng.random(n_elements)
    return spec.amplitude * (u - 0.5) + spec.bias


def mix(signal, noise) -> np.ndarray:
    """Noisy signal y_n = x_n + z_n (elementwise, equal lengths)."""
    x = as_series(signal)
    z = as_series(noise)
    if x.size != z.size:
        raise ValueError(f"length mismatch: signal has {x.size} samples, noise has {z.size}")
    return x + z


def snr(a_signal: float, a_noise: float) -> float:
    """Signal-to-noise ratio 20*log10(a_signal/a_noise) in dB.

    A zero noise amplitude is a legitimate sweep endpoint and maps to +inf.
    """
    if a_signal <= 0:
        raise ValueError(f"signal amplitude must be > 0, got {a_signal}")
    if a_noise < 0:
        raise ValueError(f"noise amplitude must be >= 0, got {a_noise}")
    if a_noise == 0:
        return math.inf
    return 20.0 * math.log10(a_signal / a_noise)


def stats(series) -> SignalStats:
    """Summary statistics; std_dev uses the sample convention (divisor N-1)."""
    x = as_series(series)
    std = float(np.std(x, ddof=1)) if x.size > 1 else 0.0
    return SignalStats(
        n_total=int(x.size),
        mean=float(np.mean(x)),
        std_dev=std,
        sum=float(np.sum(x)),
        minimum=float(np.min(x)),
        median=float(np.median(x)),
        maximum=float(np.max(x)),
    )


def save_series(path, series, header_lines=()) -> None:
    """Write one decimal sample per line; header lines are '#'-prefixed."""
    x = as_series(series)
    with open(path, "w") as f:
        for line in header_lines:
            f.write(f"# {line}\n")
        for v in x:
            f.write(f"{float(v)!r}\n")


def load_series(path) -> np.ndarray:
    """Read a series file, skipping blank lines and '#' comments."""
    values = []
    with open(path) as f:
        for line in f:
            s = line.strip()
            if not s or s.startswith("#"):
                continue
            values.append(float(s))
    if not values:
        raise ValueError(f"no samples found in {path}")
    return as_series(values)
