import numpy as np
import pytest

from housegan.core import RoomType
from housegan.dataio import derive_diagram, mask_from_box, masks_from_layout
from housegan.metrics import fit_rectangles


def brute_force_grid_box(mask, threshold=0.0):
    hits = [(r, c) for r in range(mask.shape[0]) for c in range(mask.shape[1]) if mask[r, c] > threshold]
    if not hits:
        return None
    rows = [r for r, _ in hits]
    cols = [c for _, c in hits]
    return min(rows), max(rows), min(cols), max(cols)


class TestFitRectangles:
    def test_two_pixel_example(self):
        mask = -np.ones((32, 32))
        mask[5, 5] = 0.4
        mask[10, 12] = 0.9
        layout = fit_rectangles(mask[None], [RoomType.KITCHEN])
        # rows 5..10, cols 5..12, scaled by 8 with exclusive upper cells
        assert layout.boxes[0] == (40.0, 40.0, 104.0, 88.0)

    def test_all_positive_gives_full_canvas(self):
        layout = fit_rectangles(np.ones((1, 32, 32)), [RoomType.KITCHEN])
        assert layout.boxes[0] == (0.0, 0.0, 256.0, 256.0)

    def test_all_negative_is_degenerate(self):
        layout = fit_rectangles(-np.ones((1, 32, 32)), [RoomType.KITCHEN])
        assert layout.boxes[0] is None
        assert layout.degenerate_rooms() == (0,)

    def test_threshold_is_strict(self):
        mask = np.zeros((1, 32, 32))  # exactly 0.0 everywhere: no positive pixel
        assert fit_rectangles(mask, [RoomType.KITCHEN]).boxes[0] is None

    def test_matches_brute_force_on_random_masks(self):
        rng = np.random.default_rng(21)
        for _ in range(200):
            mask = rng.uniform(-1, 1, size=(16, 16)) * (rng.random((16, 16)) < 0.1)
            layout = fit_rectangles(mask[None], [RoomType.BEDROOM], canvas=256)
            oracle = brute_force_grid_box(mask)
            if oracle is None:
                assert layout.boxes[0] is None
                continue
            r0, r1, c0, c1 = oracle
            scale = 256 / 16
            assert layout.boxes[0] == (c0 * scale, r0 * scale, (c1 + 1) * scale, (r1 + 1) * scale)

    def test_mask_roundtrip_preserves_boxes(self, small_corpus):
        # 8-aligned ground truth boxes survive mask -> fit exactly
        for sample in small_corpus.samples[:15]:
            masks = masks_from_layout(sample.layout)
            fitted = fit_rectangles(masks, sample.layout.room_types)
            assert fitted.boxes == sample.layout.boxes
            assert derive_diagram(fitted) == sample.diagram

    def test_rejects_misaligned_types(self):
        with pytest.raises(ValueError):
            fit_rectangles(np.ones((2, 32, 32)), [RoomType.KITCHEN])
