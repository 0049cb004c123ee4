"""Neural-network entropy (NNetEn) of time series.

The entropy of a series is the MNIST classification accuracy of a tiny
feedforward network whose fixed 25x785 reservoir matrix is filled with the
series (six filling methods for short series), together with the learning
inertia between two epoch checkpoints and a sweep harness for length,
noise-amplitude and offset experiments.
"""

from .lognnet import (EntropyResult, NetworkConfig, learning_inertia, nneten,
                      nneten_from_vectors)
from .mnist import MnistDataset, MnistSplit, load_dataset, load_mnist
from .reservoir import (FillMethod, RESERVOIR_CELLS, RESERVOIR_COLS,
                        RESERVOIR_ROWS, fill, stretch)
from .signals import (NoiseSpec, SignalStats, gen_binary, gen_logistic,
                      gen_noise, gen_sine, load_series, mix, save_series, snr,
                      stats)
from .sweep import (SweepRow, SweepSpec, read_csv, run_sweep, sweep_length,
                    sweep_noise_amplitude, sweep_offset, write_csv)

__version__ = "0.1.0"

__all__ = [
    "EntropyResult", "NetworkConfig", "learning_inertia", "nneten",
    "nneten_from_vectors",
    "MnistDataset", "MnistSplit", "load_dataset", "load_mnist",
    "FillMethod", "RESERVOIR_CELLS", "RESERVOIR_COLS", "RESERVOIR_ROWS",
    "fill", "stretch",
    "NoiseSpec", "SignalStats", "gen_binary", "gen_logistic", "gen_noise",
    "gen_sine", "load_series", "mix", "save_series", "snr", "stats",
    "SweepRow", "SweepSpec", "read_csv", "run_sweep", "sweep_length",
    "sweep_noise_amplitude", "sweep_offset", "write_csv",
]
