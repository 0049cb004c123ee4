import math

import numpy as np
import pytest

from nneten import NetworkConfig
from nneten.lognnet import nneten_from_vectors
from nneten.signals import NoiseSpec, gen_noise, gen_sine, snr
from nneten.sweep import (CSV_COLUMNS, DEFAULT_LENGTH_GRID, REFERENCE_LENGTH,
                          SweepRow, SweepSpec, read_csv, run_sweep,
                          sweep_length, sweep_metadata, sweep_noise_amplitude,
                          sweep_offset, write_csv, write_meta)

FAST = NetworkConfig(epoch_checkpoints=(2,), seed=0)
EP100 = NetworkConfig(epoch_checkpoints=(100,), seed=0)


def spec_for(kind="length", signal="logistic", methods=(5,), grid=(100,),
             config=FAST, **kwargs):
    return SweepSpec(kind=kind, signal=signal, methods=methods, grid=grid,
                     config=config, **kwargs)


class TestSweepSpecValidation:
    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            spec_for(kind="frequency")

    def test_unknown_signal(self):
        with pytest.raises(ValueError):
            spec_for(signal="square")

    def test_pure_noise_only_for_offsets(self):
        with pytest.raises(ValueError):
            spec_for(kind="noise", signal="noise", grid=(0.0, 1.0))
        spec_for(kind="offset", signal="noise", grid=(0.0, 1.0))  # allowed

    def test_empty_grid(self):
        with pytest.raises(ValueError):
            spec_for(grid=())

    def test_unsorted_grid(self):
        with pytest.raises(ValueError):
            spec_for(grid=(100, 50))

    def test_non_integer_length(self):
        with pytest.raises(ValueError):
            spec_for(grid=(10.5, 20))

    def test_negative_noise_grid(self):
        with pytest.raises(ValueError):
            spec_for(kind="noise", signal="sine", grid=(-0.1, 0.5))

    def test_no_methods(self):
        with pytest.raises(ValueError):
            spec_for(methods=())

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            spec_for(methods=(9,))

    def test_default_length_grid_ends_at_reference(self):
        assert DEFAULT_LENGTH_GRID[-1] == REFERENCE_LENGTH == 19625


class TestLengthSweep:
    def test_grid_times_methods_rows(self, small_vectors):
        spec = spec_for(methods=(1, 2, 3, 4, 5, 6), grid=(100, 1000, 19625))
        rows = sweep_length(spec, vectors=small_vectors)
        assert len(rows) == 18
        assert [(r.grid_value, r.method) for r in rows] == \
            [(g, m) for g in (100, 1000, 19625) for m in range(1, 7)]
        assert all(r.grid_var == "N" and r.ep == 2 for r in rows)

    def test_exact_fit_collapse(self, small_vectors):
        spec = spec_for(methods=(1, 3, 4, 6), grid=(19625,))
        by_method = {r.method: r.nneten
                     for r in sweep_length(spec, vectors=small_vectors)}
        assert by_method[1] == by_method[3]
        assert by_method[4] == by_method[6]

    def test_kind_guard(self, small_vectors):
        with pytest.raises(ValueError):
            sweep_length(spec_for(kind="noise", signal="sine", grid=(0.0, 1.0)),
                         vectors=small_vectors)


class TestNoiseSweep:
    def test_zero_amplitude_equals_clean_signal(self, small_vectors):
        spec = spec_for(kind="noise", signal="sine", grid=(0.0, 0.5))
        rows = sweep_noise_amplitude(spec, vectors=small_vectors)
        clean = nneten_from_vectors(gen_sine(19625), 5, FAST, *small_vectors)
        assert rows[0].nneten == clean.nneten_at[2]
        assert rows[0].snr_db == math.inf

    def test_snr_column(self, small_vectors):
        spec = spec_for(kind="noise", signal="sine", grid=(0.03, 0.1, 1.0))
        rows = sweep_noise_amplitude(spec, vectors=small_vectors)
        assert [r.snr_db for r in rows] == [snr(1, 0.03), snr(1, 0.1), snr(1, 1)]
        assert rows[1].snr_db == pytest.approx(20.0, abs=0.01)

    def test_entropy_grows_with_noise(self, full_vectors):
        spec = spec_for(kind="noise", signal="sine",
                        grid=(0.0, 0.03, 0.05, 0.1, 1.0), config=EP100,
                        noise_seed=1)
        values = [r.nneten
                  for r in sweep_noise_amplitude(spec, vectors=full_vectors)]
        assert all(b >= a for a, b in zip(values, values[1:]))
        assert values[-1] > values[0]

    def test_chaotic_signal_is_noise_robust(self, full_vectors):
        spec = spec_for(kind="noise", signal="logistic", grid=(0.0, 0.05),
                        config=EP100, noise_seed=1)
        clean, noisy = [r.nneten
                        for r in sweep_noise_amplitude(spec, vectors=full_vectors)]
        assert abs(noisy - clean) / clean < 0.15


class TestOffsetSweep:
    def test_pure_noise_series(self, small_vectors):
        spec = spec_for(kind="offset", signal="noise", grid=(-1.0, 0.0, 1.0),
                        noise_amplitude=1.0)
        rows = sweep_offset(spec, vectors=small_vectors)
        assert [r.grid_value for r in rows] == [-1.0, 0.0, 1.0]
        assert all(r.grid_var == "B" and r.snr_db is None for r in rows)

    def test_offset_lowers_sine_entropy(self, full_vectors):
        spec = spec_for(kind="offset", signal="sine", grid=(0.0, 1.0),
                        config=EP100, noise_amplitude=0.3, noise_seed=1)
        at_zero, at_one = [r.nneten
                           for r in sweep_offset(spec, vectors=full_vectors)]
        assert at_one < at_zero

    def test_offset_series_composition(self, small_vectors):
        spec = spec_for(kind="offset", signal="sine", grid=(0.5,),
                        noise_amplitude=0.2, noise_seed=7)
        rows = sweep_offset(spec, vectors=small_vectors)
        series = gen_sine(19625) + gen_noise(19625, NoiseSpec(0.2, 0.5, 7))
        direct = nneten_from_vectors(series, 5, FAST, *small_vectors)
        assert rows[0].nneten == direct.nneten_at[2]
        assert rows[0].snr_db == snr(1, 0.2)


class TestExecution:
    def test_parallel_matches_serial(self, small_vectors):
        spec = spec_for(methods=(1, 5), grid=(100, 500))
        serial = run_sweep(spec, vectors=small_vectors, workers=1)
        parallel = run_sweep(spec, vectors=small_vectors, workers=4)
        assert [(r.grid_value, r.method, r.nneten) for r in serial] == \
            [(r.grid_value, r.method, r.nneten) for r in parallel]

    def test_row_callback_runs_per_job(self, small_vectors):
        spec = spec_for(methods=(1, 5), grid=(100, 500))
        batches = []
        run_sweep(spec, vectors=small_vectors, row_callback=batches.append)
        assert len(batches) == 4
        assert all(len(batch) == 1 for batch in batches)

    def test_requires_data(self):
        with pytest.raises(ValueError):
            run_sweep(spec_for())

    def test_multiple_checkpoints_multiply_rows(self, small_vectors):
        spec = spec_for(config=NetworkConfig(epoch_checkpoints=(2, 5), seed=0))
        rows = run_sweep(spec, vectors=small_vectors)
        assert [r.ep for r in rows] == [2, 5]
        assert rows[0].li == rows[1].li is not None


class TestCsv:
    def _rows(self, n):
        return [SweepRow(grid_var="N", grid_value=100 + k, method=5, ep=100,
                         nneten=0.1 * k, li=None if k % 2 else 0.25,
                         snr_db=math.inf if k == 0 else 20.0, seed=0,
                         runtime_ms=12.5)
                for k in range(n)]

    def test_empty_table(self, tmp_path):
        path = tmp_path / "out.csv"
        write_csv([], path)
        assert path.read_text() == ",".join(CSV_COLUMNS) + "\n"

    def test_line_count(self, tmp_path):
        path = tmp_path / "out.csv"
        write_csv(self._rows(18), path)
        assert len(path.read_text().splitlines()) == 19

    def test_round_trip_identity(self, tmp_path):
        path = tmp_path / "out.csv"
        rows = self._rows(6)
        write_csv(rows, path)
        assert read_csv(path) == rows

    def test_header_validation(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("a,b,c\n1,2,3\n")
        with pytest.raises(ValueError):
            read_csv(path)


class TestMetadata:
    def test_length_sweep_records_reference(self):
        meta = sweep_metadata(spec_for(grid=(100, 19625)))
        assert meta["reference_n"] == 19625
        assert meta["kind"] == "length" and meta["signal"] == "logistic"
        assert meta["generator"] == "numpy-pcg64"
        assert meta["config"] == FAST.digest()

    def test_offset_sweep_records_noise_level(self):
        meta = sweep_metadata(spec_for(kind="offset", signal="sine",
                                       grid=(0.0, 1.0), noise_amplitude=0.3))
        assert meta["noise_amplitude"] == 0.3
        assert meta["base_length"] == 19625

    def test_checksums_and_file_format(self, tmp_path):
        meta = sweep_metadata(spec_for(), {"train_images": "ab12"})
        path = tmp_path / "out.csv.meta"
        write_meta(path, meta)
        lines = dict(line.split("=", 1)
                     for line in path.read_text().splitlines())
        assert lines["sha256_train_images"] == "ab12"
        assert lines["seed"] == "0"
