import numpy as np
import pytest

from housegan.core import Layout, RoomType
from housegan.dataio import Palette, rasterize
from housegan.metrics import (
    FeatureStats,
    RandomProjectionPixels,
    TypeHistogram,
    compute_stats,
    frechet_distance,
    get_feature_extractor,
)


def _stats(mean, cov):
    return FeatureStats(np.asarray(mean, dtype=float), np.asarray(cov, dtype=float), count=10)


class TestFrechetDistance:
    def test_identical_stats_is_zero(self):
        rng = np.random.default_rng(0)
        feats = rng.standard_normal((50, 6))
        stats = compute_stats(feats)
        assert frechet_distance(stats, stats) < 1e-8

    def test_mean_shift_only(self):
        rng = np.random.default_rng(1)
        cov = np.cov(rng.standard_normal((80, 5)), rowvar=False)
        d = np.array([1.0, -2.0, 0.5, 0.0, 3.0])
        a = _stats(np.zeros(5), cov)
        b = _stats(d, cov)
        expected = float(d @ d)
        assert abs(frechet_distance(a, b) - expected) <= 1e-9 * expected

    def test_scalar_case(self):
        a = _stats([0.0], [[1.0]])
        b = _stats([1.0], [[4.0]])
        assert abs(frechet_distance(a, b) - 2.0) <= 2e-9

    def test_symmetry_and_nonnegativity(self):
        rng = np.random.default_rng(2)
        for _ in range(10):
            fa = rng.standard_normal((30, 4))
            fb = rng.standard_normal((30, 4)) * 2 + 1
            a, b = compute_stats(fa), compute_stats(fb)
            dab, dba = frechet_distance(a, b), frechet_distance(b, a)
            assert dab >= 0
            assert abs(dab - dba) < 1e-8 * max(1.0, dab)

    def test_orthogonal_invariance(self):
        rng = np.random.default_rng(3)
        fa = rng.standard_normal((40, 5))
        fb = rng.standard_normal((40, 5)) + 0.5
        q, _ = np.linalg.qr(rng.standard_normal((5, 5)))
        a, b = compute_stats(fa), compute_stats(fb)
        aq = _stats(q @ a.mean, q @ a.cov @ q.T)
        bq = _stats(q @ b.mean, q @ b.cov @ q.T)
        base = frechet_distance(a, b)
        assert abs(frechet_distance(aq, bq) - base) < 1e-8 * max(1.0, base)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            frechet_distance(_stats([0.0], [[1.0]]), _stats([0.0, 0.0], np.eye(2)))

    def test_extractor_mismatch(self):
        a = FeatureStats(np.zeros(2), np.eye(2), 5, extractor_id="pixels-rp64")
        b = FeatureStats(np.zeros(2), np.eye(2), 5, extractor_id="type-hist")
        with pytest.raises(ValueError):
            frechet_distance(a, b)


class TestComputeStats:
    def test_requires_two_rows(self):
        with pytest.raises(ValueError):
            compute_stats(np.zeros((1, 3)))

    def test_shapes(self):
        stats = compute_stats(np.random.default_rng(0).standard_normal((20, 7)), "pixels-rp64")
        assert stats.mean.shape == (7,)
        assert stats.cov.shape == (7, 7)
        assert stats.count == 20 and stats.extractor_id == "pixels-rp64"


class TestExtractors:
    def test_random_projection_shape_and_determinism(self):
        images = np.random.default_rng(4).integers(0, 256, size=(6, 32, 32, 3)).astype(np.uint8)
        a = RandomProjectionPixels().extract(images)
        b = RandomProjectionPixels().extract(images)
        assert a.shape == (6, 64)
        assert np.array_equal(a, b)

    def test_type_histogram_reads_areas(self):
        palette = Palette.default()
        layout = Layout([(0, 0, 128, 128)], [RoomType.KITCHEN])
        image = rasterize(layout, palette, 32)
        feats = TypeHistogram(palette).extract(image[None])[0]
        k = int(RoomType.KITCHEN)
        assert feats[3 * k] == pytest.approx(0.25)  # quadrant
        assert feats[3 * k + 1] == pytest.approx(0.25, abs=0.02)  # centroid row
        assert feats[3 * k + 2] == pytest.approx(0.25, abs=0.02)
        absent = int(RoomType.BALCONY)
        assert feats[3 * absent : 3 * absent + 3].tolist() == [0.0, 0.0, 0.0]

    def test_registry(self):
        assert get_feature_extractor("pixels-rp64").id == "pixels-rp64"
        assert get_feature_extractor("type-hist").id == "type-hist"
        with pytest.raises(KeyError):
            get_feature_extractor("inception")
