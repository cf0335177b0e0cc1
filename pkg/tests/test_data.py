"""Dataset loading, splitting, PCA (with dense oracles), and batching."""

import numpy as np
import pytest

from plateau_lab.data import (Dataset, batches, load_csv, pca_fit, pca_transform,
                              split)


class TestLoadCsv:
    def test_reference_digits_file(self, digits):
        # the bundled export: 1797 rows, all ten classes, 8x8 intensities 0-16
        assert len(digits) == 1797
        assert digits.features.shape == (1797, 64)
        assert sorted(np.unique(digits.labels)) == list(range(10))
        assert digits.features.min() >= 0.0 and digits.features.max() <= 16.0

    def test_two_row_fixture_roundtrip(self, tmp_path):
        row1 = [float(i % 17) for i in range(64)]
        row2 = [float((3 * i) % 17) for i in range(64)]
        path = tmp_path / "two.csv"
        lines = [",".join(str(v) for v in row1) + ",3",
                 ",".join(str(v) for v in row2) + ",9"]
        path.write_text("\n".join(lines) + "\n")
        ds = load_csv(str(path))
        np.testing.assert_array_equal(ds.features, [row1, row2])
        np.testing.assert_array_equal(ds.labels, [3, 9])

    def test_header_line_tolerated(self, tmp_path):
        path = tmp_path / "h.csv"
        header = ",".join(f"p{i}" for i in range(64)) + ",label"
        row = ",".join(["1"] * 64) + ",0"
        path.write_text(header + "\n" + row + "\n")
        assert len(load_csv(str(path))) == 1

    def test_wrong_column_count_names_row(self, tmp_path):
        path = tmp_path / "short.csv"
        good = ",".join(["1"] * 64) + ",0"
        bad = ",".join(["1"] * 63) + ",0"  # 64 columns total
        path.write_text(good + "\n" + bad + "\n")
        with pytest.raises(ValueError, match="row 2.*columns"):
            load_csv(str(path))

    def test_non_numeric_cell_names_row(self, tmp_path):
        path = tmp_path / "bad.csv"
        row = ",".join(["1"] * 63 + ["oops"]) + ",0"
        path.write_text(row + "\n")
        with pytest.raises(ValueError, match="row 1.*non-numeric"):
            load_csv(str(path))

    def test_label_out_of_range(self, tmp_path):
        path = tmp_path / "lab.csv"
        path.write_text(",".join(["1"] * 64) + ",11\n")
        with pytest.raises(ValueError, match="label"):
            load_csv(str(path))

    def test_missing_file(self, tmp_path):
        with pytest.raises(OSError):
            load_csv(str(tmp_path / "nope.csv"))

    def test_crlf_line_endings(self, tmp_path):
        path = tmp_path / "crlf.csv"
        row = ",".join(["2"] * 64) + ",4"
        path.write_bytes((row + "\r\n" + row + "\r\n").encode())
        ds = load_csv(str(path))
        assert len(ds) == 2
        np.testing.assert_array_equal(ds.labels, [4, 4])


class TestSplit:
    def test_reference_sizes(self, digits):
        sd = split(digits, 0.75, seed=0)
        assert len(sd.train) == 1347  # floor(0.75 * 1797)
        assert len(sd.test) == 450

    def test_deterministic_for_seed(self, digits):
        a = split(digits, 0.75, seed=5)
        b = split(digits, 0.75, seed=5)
        np.testing.assert_array_equal(a.train.labels, b.train.labels)
        np.testing.assert_array_equal(a.test.features, b.test.features)

    def test_four_rows(self):
        ds = Dataset(np.arange(8.0).reshape(4, 2), np.array([0, 1, 2, 3]))
        sd = split(ds, 0.75, seed=1)
        assert len(sd.train) == 3 and len(sd.test) == 1

    def test_partition_preserves_rows(self):
        rng = np.random.default_rng(2)
        ds = Dataset(rng.uniform(size=(37, 3)), rng.integers(0, 10, 37))
        sd = split(ds, 0.75, seed=9)
        merged = np.vstack([sd.train.features, sd.test.features])
        assert merged.shape == ds.features.shape
        orig = {tuple(row) for row in ds.features}
        assert {tuple(row) for row in merged} == orig

    def test_degenerate_rejected(self):
        ds = Dataset(np.zeros((1, 2)), np.array([0]))
        with pytest.raises(ValueError, match="at least 2"):
            split(ds, 0.75, seed=0)


class TestPca:
    def test_diagonal_line_gives_diagonal_component(self):
        t = np.linspace(-2, 2, 40)
        points = np.stack([t, t], axis=1)
        model = pca_fit(points, 1)
        np.testing.assert_allclose(np.abs(model.components[0]),
                                   [np.sqrt(0.5), np.sqrt(0.5)], atol=1e-12)

    def test_isotropic_cloud_has_near_equal_variances(self):
        rng = np.random.default_rng(3)
        points = rng.standard_normal((4000, 2))
        model = pca_fit(points, 2)
        ratio = model.explained_variances[1] / model.explained_variances[0]
        assert ratio > 0.9  # equal up to ~10% Monte-Carlo noise

    def test_rank_two_data_recovers_almost_all_variance(self):
        rng = np.random.default_rng(4)
        basis = rng.standard_normal((2, 64))
        coeffs = rng.standard_normal((300, 2))
        data = coeffs @ basis + 1e-6 * rng.standard_normal((300, 64))
        model = pca_fit(data, 2)
        total = np.var(data - data.mean(axis=0), axis=0, ddof=1).sum()
        assert model.explained_variances.sum() / total >= 0.999

    def test_components_orthonormal_and_sorted(self, digits):
        model = pca_fit(digits.features, 8)
        gram = model.components @ model.components.T
        np.testing.assert_allclose(gram, np.eye(8), atol=1e-8)
        assert np.all(np.diff(model.explained_variances) <= 1e-12)
        assert np.all(model.explained_variances >= 0.0)

    def test_sign_convention(self, digits):
        model = pca_fit(digits.features, 5)
        for row in model.components:
            assert row[np.argmax(np.abs(row))] > 0

    def test_transform_of_mean_is_zero(self, digits):
        model = pca_fit(digits.features, 3)
        np.testing.assert_allclose(pca_transform(model, model.mean),
                                   np.zeros(3), atol=1e-10)

    def test_transform_picks_out_component_coefficient(self, digits):
        model = pca_fit(digits.features, 3)
        x = model.mean + 2.5 * model.components[0]
        np.testing.assert_allclose(pca_transform(model, x), [2.5, 0, 0], atol=1e-8)

    def test_transform_matches_dense_oracle(self, digits):
        rng = np.random.default_rng(5)
        model = pca_fit(digits.features, 6)
        x = rng.uniform(0, 16, 64)
        oracle = model.components @ (x - model.mean)
        np.testing.assert_allclose(pca_transform(model, x), oracle, atol=1e-10)

    def test_rank_k_reconstruction(self):
        rng = np.random.default_rng(6)
        basis = np.linalg.qr(rng.standard_normal((8, 3)))[0].T  # 3 orthonormal rows
        data = rng.standard_normal((100, 3)) @ basis
        model = pca_fit(data, 3)
        projected = pca_transform(model, data)
        rebuilt = model.mean + projected @ model.components
        np.testing.assert_allclose(rebuilt, data, atol=1e-6)

    def test_k_bounds(self):
        with pytest.raises(ValueError, match="k"):
            pca_fit(np.zeros((10, 4)), 5)
        with pytest.raises(ValueError, match="rows"):
            pca_fit(np.zeros((2, 4)), 3)


class TestBatches:
    def test_sizes_including_final_partial(self):
        ds = Dataset(np.zeros((33, 2)), np.zeros(33, dtype=int))
        parts = batches(ds, 16, epoch_seed=0)
        assert [len(p) for p in parts] == [16, 16, 1]

    def test_deterministic_per_seed(self):
        ds = Dataset(np.zeros((20, 2)), np.zeros(20, dtype=int))
        a = batches(ds, 8, epoch_seed=[7, 1])
        b = batches(ds, 8, epoch_seed=[7, 1])
        for x, y in zip(a, b):
            np.testing.assert_array_equal(x, y)
        c = batches(ds, 8, epoch_seed=[7, 2])
        assert any(not np.array_equal(x, y) for x, y in zip(a, c))

    def test_union_is_exact_partition(self):
        ds = Dataset(np.zeros((45, 2)), np.zeros(45, dtype=int))
        seen = np.concatenate(batches(ds, 7, epoch_seed=3))
        assert sorted(seen.tolist()) == list(range(45))

    def test_batch_size_validated(self):
        ds = Dataset(np.zeros((4, 2)), np.zeros(4, dtype=int))
        with pytest.raises(ValueError, match="batch_size"):
            batches(ds, 0)
