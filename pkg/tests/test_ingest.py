import math

import numpy as np
import pytest

from swmax.core import Window, window_members
from swmax.ingest import (
    DatasetStore,
    ParseError,
    gen_drift_vectors,
    gen_set_stream,
    load_dense_csv,
    load_set_stream,
    normalize_columns_then_rows,
    write_set_stream,
)
from swmax.objectives import IVMOracle, KernelParams
from swmax.streaming import greedy_select


class TestDenseCsv:
    def test_basic(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("1,2\n3,4\n5,6\n")
        store = load_dense_csv(path)
        assert len(store) == 3 and store.dim == 2
        assert list(store.payload(2)) == [3.0, 4.0]

    def test_header_skipped(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("a,b\n1.5,2.5\n")
        store = load_dense_csv(path)
        assert len(store) == 1
        assert list(store.payload(1)) == [1.5, 2.5]

    def test_ragged_row_reports_line(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("1,2\n3,4,5\n")
        with pytest.raises(ParseError) as err:
            load_dense_csv(path)
        assert err.value.line_no == 2

    def test_non_numeric_body_reports_line(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("1,2\n3,4\nx,6\n")
        with pytest.raises(ParseError) as err:
            load_dense_csv(path)
        assert err.value.line_no == 3

    def test_drop_columns(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("1,2,9\n3,4,9\n")
        store = load_dense_csv(path, drop_columns=(2,))
        assert store.dim == 2
        assert list(store.payload(1)) == [1.0, 2.0]

    def test_custom_delimiter(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("1;2\n3;4\n")
        assert load_dense_csv(path, delimiter=";").dim == 2

    def test_eeg_shaped_file(self, tmp_path):
        rng = np.random.default_rng(0)
        path = tmp_path / "eeg.csv"
        data = rng.normal(size=(14980, 15))
        np.savetxt(path, data, delimiter=",", fmt="%.5f")
        store = load_dense_csv(path)
        assert len(store) == 14980
        assert store.dim == 15


class TestNormalize:
    def test_single_row_goes_to_zero(self):
        store = DatasetStore("dense", vectors=np.array([[3.0, -1.0]]))
        out = normalize_columns_then_rows(store)
        assert np.all(out.vectors == 0.0)

    def test_hand_case(self):
        store = DatasetStore("dense", vectors=np.array([[0.0, 3.0], [4.0, 3.0], [2.0, 0.0]]))
        out = normalize_columns_then_rows(store).vectors
        s = 1 / math.sqrt(2)
        expected = np.array([[0.0, 1.0], [s, s], [1.0, 0.0]])
        assert np.allclose(out, expected, atol=1e-12)

    def test_rows_unit_norm(self):
        rng = np.random.default_rng(7)
        store = DatasetStore("dense", vectors=rng.normal(size=(40, 6)))
        out = normalize_columns_then_rows(store).vectors
        norms = np.linalg.norm(out, axis=1)
        nonzero = norms > 0
        assert np.all(np.abs(norms[nonzero] - 1.0) <= 1e-12)

    def test_identity_on_already_normalized_data(self):
        # fixed point: columns span [0, 1] exactly and rows are unit norm,
        # so the column step maps ranges to themselves and the row step is
        # the identity
        s = 1 / math.sqrt(2)
        fixed = np.array([[1.0, 0.0], [0.0, 1.0], [s, s]])
        store = DatasetStore("dense", vectors=fixed)
        out = normalize_columns_then_rows(store).vectors
        assert np.allclose(out, fixed, atol=1e-12)

    def test_second_row_step_is_identity(self):
        # one application leaves entries in [0, 1] and rows unit norm; rows
        # of a second application are rescaled by column spans and re-normalized,
        # so they stay unit norm
        rng = np.random.default_rng(8)
        store = DatasetStore("dense", vectors=rng.uniform(size=(30, 5)))
        once = normalize_columns_then_rows(store).vectors
        assert np.all(once >= 0.0) and np.all(once <= 1.0 + 1e-12)
        twice = normalize_columns_then_rows(DatasetStore("dense", vectors=once)).vectors
        norms = np.linalg.norm(twice, axis=1)
        assert np.all(np.abs(norms[norms > 0] - 1.0) <= 1e-12)

    def test_rejects_set_store(self):
        with pytest.raises(ValueError):
            normalize_columns_then_rows(DatasetStore("sets", sets=[(1,)]))


class TestSetStream:
    def test_dedup_and_empty_lines(self, tmp_path):
        path = tmp_path / "s.txt"
        path.write_text("1 2 2 3\n\n7\n")
        store = load_set_stream(path)
        assert [store.payload(t) for t in (1, 2, 3)] == [(1, 2, 3), (), (7,)]

    def test_negative_token_reports_line(self, tmp_path):
        path = tmp_path / "s.txt"
        path.write_text("1 2\n3 -4\n")
        with pytest.raises(ParseError) as err:
            load_set_stream(path)
        assert err.value.line_no == 2

    def test_non_integer_token_reports_line(self, tmp_path):
        path = tmp_path / "s.txt"
        path.write_text("1 2\n3 x\n")
        with pytest.raises(ParseError) as err:
            load_set_stream(path)
        assert err.value.line_no == 2

    def test_day_of_seconds_loads(self, tmp_path):
        path = tmp_path / "day.txt"
        with open(path, "w") as fh:
            for t in range(86400):
                fh.write(f"{t % 97} {(t * 7) % 31}\n")
        store = load_set_stream(path)
        assert len(store) == 86400

    def test_round_trip(self, tmp_path):
        store = gen_set_stream(50, 30, 6, seed=5)
        path = tmp_path / "rt.txt"
        write_set_stream(store, path)
        back = load_set_stream(path)
        assert len(back) == len(store)
        for t in range(1, 51):
            assert back.payload(t) == store.payload(t)


class TestDriftVectors:
    def test_deterministic(self):
        a = gen_drift_vectors(200, 3, 4, 50, seed=42)
        b = gen_drift_vectors(200, 3, 4, 50, seed=42)
        assert np.array_equal(a.vectors, b.vectors)

    def test_degenerate_single_cluster(self):
        store = gen_drift_vectors(30, 1, 1, 10, seed=1, spread=0.0)
        assert np.all(store.vectors == store.vectors[0])

    def test_drift_changes_windowed_utility(self):
        # windowed greedy utility before vs after a phase boundary differs
        params = KernelParams(h=0.75, sigma=1.0)
        k, w, period = 5, 100, 250
        changed = 0
        for seed in range(20):
            store = gen_drift_vectors(1000, 4, 4, period, seed=seed, spread=0.15)
            oracle = IVMOracle(store, params)
            before = window_members(Window(period, w), len(store))
            after = window_members(Window(period + w, w), len(store))
            _, v_before = greedy_select(before, k, oracle)
            _, v_after = greedy_select(after, k, oracle)
            if abs(v_before - v_after) > 1e-6:
                changed += 1
        assert changed >= 19

    def test_validation(self):
        with pytest.raises(ValueError):
            gen_drift_vectors(0, 3, 2, 10, seed=0)
        with pytest.raises(ValueError):
            gen_drift_vectors(10, 3, 2, 10, seed=0, spread=-1.0)


class TestSetStreamGenerator:
    def test_full_universe(self):
        store = gen_set_stream(10, 8, 8, seed=0)
        for t in range(1, 11):
            assert store.payload(t) == tuple(range(8))

    def test_mean_size_concentrates(self):
        store = gen_set_stream(10**4, 50, 10, seed=77)
        total = sum(len(store.payload(t)) for t in range(1, 10**4 + 1))
        mean = total / 10**4
        assert abs(mean - 10) <= 0.5  # 5 percent

    def test_deterministic(self):
        a = gen_set_stream(50, 20, 5, seed=9)
        b = gen_set_stream(50, 20, 5, seed=9)
        assert all(a.payload(t) == b.payload(t) for t in range(1, 51))

    def test_validation(self):
        with pytest.raises(ValueError):
            gen_set_stream(10, 20, 25.0, seed=0)


class TestStore:
    def test_payload_bounds(self):
        store = gen_set_stream(5, 10, 3, seed=0)
        with pytest.raises(ValueError):
            store.payload(0)
        with pytest.raises(ValueError):
            store.payload(6)

    def test_dense_store_immutable(self):
        store = DatasetStore("dense", vectors=np.ones((2, 2)))
        with pytest.raises(ValueError):
            store.vectors[0, 0] = 5.0

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            DatasetStore("dense", vectors=np.array([[1.0, float("nan")]]))

    def test_items_iterates_timesteps(self):
        store = gen_set_stream(4, 5, 2, seed=0)
        items = list(store.items())
        assert [i.t for i in items] == [1, 2, 3, 4]
        assert all(i.t == i.payload_id for i in items)
