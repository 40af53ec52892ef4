"""Tightest axis-aligned rectangle per generated room mask."""

from __future__ import annotations

from typing import Sequence

import numpy as np

from ..core import CANVAS_SIZE, Layout, RoomType


def fit_rectangles(
    masks: np.ndarray,
    room_types: Sequence[RoomType],
    threshold: float = 0.0,
    canvas: int = CANVAS_SIZE,
) -> Layout:
    """Minimal box covering every pixel strictly above the threshold.

    Masks are (rooms, m, m); grid boxes are scaled up by canvas/m so a cell
    maps to its full (canvas/m)-pixel footprint. Rooms with no positive
    pixel come back with a ``None`` box (the degenerate sentinel).
    """
    masks = np.asarray(masks)
    if masks.ndim != 3 or masks.shape[0] != len(room_types):
        raise ValueError("masks must be (rooms, m, m) aligned with room_types")
    scale = canvas / masks.shape[1]
    boxes = []
    for mask in masks:
        positive = mask > threshold
        if not positive.any():
            boxes.append(None)
            continue
        row_hits = np.flatnonzero(positive.any(axis=1))
        col_hits = np.flatnonzero(positive.any(axis=0))
        r0, r1 = int(row_hits[0]), int(row_hits[-1])
        c0, c1 = int(col_hits[0]), int(col_hits[-1])
        boxes.append((c0 * scale, r0 * scale, (c1 + 1) * scale, (r1 + 1) * scale))
    return Layout(boxes, room_types, canvas=canvas)
