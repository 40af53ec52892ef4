"""Graph-constrained house layout generation.

Bubble diagram in (typed rooms + required adjacencies), diverse sets of
axis-aligned room boxes out. The package bundles the data pipeline, the
relational GAN and its baselines, WGAN-GP training, evaluation metrics
(compatibility via graph edit distance, diversity via Frechet distance),
an HTTP generation service, and the `housegan` CLI.
"""

from .core import (
    ADJACENCY_THRESHOLD,
    CANVAS_SIZE,
    MASK_SIZE,
    MAX_ROOMS,
    NOISE_DIM,
    NUM_ROOM_TYPES,
    BubbleDiagram,
    Layout,
    RoomType,
    manhattan_gap,
    one_hot,
)

__version__ = "0.1.0"
