"""Shared domain types: room taxonomy, bubble diagrams, layouts, noise.

Coordinate convention: x grows rightward, y grows downward, boxes are
(x0, y0, x1, y1) with both ends closed, on a 256x256 canvas.
All types are immutable value objects; instances are safe to share.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import IntEnum
from typing import Iterable, Optional, Sequence

import numpy as np

CANVAS_SIZE = 256
MASK_SIZE = 32
CELL_SIZE = CANVAS_SIZE // MASK_SIZE  # 8 px per mask cell
MAX_ROOMS = 40
NOISE_DIM = 128
NUM_ROOM_TYPES = 10
# Two rooms are adjacent iff the Manhattan gap between their boxes is
# strictly below this many pixels.
ADJACENCY_THRESHOLD = 8.0


class RoomType(IntEnum):
    """The ten room types. Integer codes double as one-hot positions."""

    LIVING_ROOM = 0
    KITCHEN = 1
    BEDROOM = 2
    BATHROOM = 3
    CLOSET = 4
    BALCONY = 5
    CORRIDOR = 6
    DINING_ROOM = 7
    LAUNDRY_ROOM = 8
    UNKNOWN = 9

    @property
    def label(self) -> str:
        return _ROOM_TYPE_LABELS[self.value]


_ROOM_TYPE_LABELS = (
    "living room",
    "kitchen",
    "bedroom",
    "bathroom",
    "closet",
    "balcony",
    "corridor",
    "dining room",
    "laundry room",
    "unknown",
)


def one_hot(room_type: RoomType) -> np.ndarray:
    """10-d one-hot encoding of a room type."""
    vec = np.zeros(NUM_ROOM_TYPES, dtype=np.float64)
    vec[int(room_type)] = 1.0
    return vec


Box = tuple[float, float, float, float]


def validate_box(box: Box, canvas: float = CANVAS_SIZE) -> None:
    x0, y0, x1, y1 = box
    if not (0 <= x0 <= x1 <= canvas and 0 <= y0 <= y1 <= canvas):
        raise ValueError(f"malformed box {box!r} on canvas {canvas}")


def box_area(box: Box) -> float:
    x0, y0, x1, y1 = box
    return (x1 - x0) * (y1 - y0)


def manhattan_gap(box_a: Box, box_b: Box) -> float:
    """Rectilinear separation between two boxes, in pixels.

    Sum of the per-axis interval gaps; 0 when the boxes touch or overlap.
    """
    ax0, ay0, ax1, ay1 = box_a
    bx0, by0, bx1, by1 = box_b
    gap_x = max(0.0, max(ax0, bx0) - min(ax1, bx1))
    gap_y = max(0.0, max(ay0, by0) - min(ay1, by1))
    return gap_x + gap_y


def boxes_adjacent(box_a: Box, box_b: Box) -> bool:
    return manhattan_gap(box_a, box_b) < ADJACENCY_THRESHOLD


Edge = tuple[int, int]


def _normalize_edges(edges: Iterable[Sequence[int]], node_count: int) -> frozenset[Edge]:
    out = set()
    for edge in edges:
        i, j = int(edge[0]), int(edge[1])
        if i == j:
            raise ValueError(f"self-loop on node {i}")
        if not (0 <= i < node_count and 0 <= j < node_count):
            raise ValueError(f"edge ({i},{j}) references a missing node")
        out.add((min(i, j), max(i, j)))
    return frozenset(out)


@dataclass(frozen=True)
class BubbleDiagram:
    """Input constraint graph: typed room nodes plus adjacency edges.

    Node ids are implicit: node i has type ``room_types[i]``. Edges are
    stored normalized as (lo, hi) pairs.
    """

    room_types: tuple[RoomType, ...]
    edges: frozenset[Edge]

    def __init__(self, room_types: Iterable[int], edges: Iterable[Sequence[int]] = ()):
        types = tuple(RoomType(t) for t in room_types)
        if not 1 <= len(types) <= MAX_ROOMS:
            raise ValueError(f"room count {len(types)} outside [1, {MAX_ROOMS}]")
        object.__setattr__(self, "room_types", types)
        object.__setattr__(self, "edges", _normalize_edges(edges, len(types)))

    @property
    def node_count(self) -> int:
        return len(self.room_types)

    def has_edge(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.edges

    def neighbors(self, i: int) -> frozenset[int]:
        return frozenset(b if a == i else a for a, b in self.edges if i in (a, b))

    def adjacency_matrix(self) -> np.ndarray:
        """Symmetric boolean (n, n) matrix with a zero diagonal."""
        n = self.node_count
        adj = np.zeros((n, n), dtype=bool)
        for a, b in self.edges:
            adj[a, b] = adj[b, a] = True
        return adj

    def permuted(self, perm: Sequence[int]) -> "BubbleDiagram":
        """Relabel node i as perm[i], keeping the same underlying graph."""
        inv = np.argsort(np.asarray(perm))
        types = tuple(self.room_types[inv[i]] for i in range(self.node_count))
        edges = [(perm[a], perm[b]) for a, b in self.edges]
        return BubbleDiagram(types, edges)

    def to_json_dict(self) -> dict:
        return {
            "nodes": [{"id": i, "type": int(t)} for i, t in enumerate(self.room_types)],
            "edges": [list(e) for e in sorted(self.edges)],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "BubbleDiagram":
        nodes = data["nodes"]
        ids = [int(n["id"]) for n in nodes]
        if sorted(ids) != list(range(len(ids))):
            raise ValueError(f"node ids must be contiguous from 0, got {sorted(ids)}")
        types = [0] * len(ids)
        for node in nodes:
            types[int(node["id"])] = int(node["type"])
        return cls(types, data.get("edges", ()))


@dataclass(frozen=True)
class Layout:
    """One axis-aligned box per room on the 256x256 canvas.

    A ``None`` box marks a degenerate room (a generated mask with no
    foreground pixel); ground-truth layouts never contain them.
    """

    boxes: tuple[Optional[Box], ...]
    room_types: tuple[RoomType, ...]
    canvas: int = CANVAS_SIZE

    def __init__(self, boxes, room_types, canvas: int = CANVAS_SIZE):
        boxes = tuple(None if b is None else tuple(float(v) for v in b) for b in boxes)
        types = tuple(RoomType(t) for t in room_types)
        if len(boxes) != len(types):
            raise ValueError("boxes and room_types must align")
        for box in boxes:
            if box is not None:
                validate_box(box, canvas)
        object.__setattr__(self, "boxes", boxes)
        object.__setattr__(self, "room_types", types)
        object.__setattr__(self, "canvas", int(canvas))

    @property
    def room_count(self) -> int:
        return len(self.boxes)

    def degenerate_rooms(self) -> tuple[int, ...]:
        return tuple(i for i, b in enumerate(self.boxes) if b is None)

    def to_json_dict(self) -> dict:
        return {
            "canvas": self.canvas,
            "rooms": [
                {
                    "id": i,
                    "type": int(t),
                    "box": None if b is None else [_as_jsonable(v) for v in b],
                }
                for i, (b, t) in enumerate(zip(self.boxes, self.room_types))
            ],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "Layout":
        rooms = data["rooms"]
        ids = [int(r["id"]) for r in rooms]
        if sorted(ids) != list(range(len(ids))):
            raise ValueError(f"room ids must be contiguous from 0, got {sorted(ids)}")
        boxes: list = [None] * len(rooms)
        types: list = [0] * len(rooms)
        for room in rooms:
            i = int(room["id"])
            boxes[i] = None if room["box"] is None else tuple(room["box"])
            types[i] = int(room["type"])
        return cls(boxes, types, canvas=int(data.get("canvas", CANVAS_SIZE)))


def _as_jsonable(v: float):
    # Integral coordinates serialize as ints so corpus files are byte-stable.
    return int(v) if float(v).is_integer() else float(v)


def dump_json_canonical(data: dict) -> str:
    """Key-sorted, whitespace-free JSON; byte-identical for equal inputs."""
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


def fresh_noise(rng: np.random.Generator, node_count: int, dim: int = NOISE_DIM) -> np.ndarray:
    """(node_count, dim) standard-normal noise from the given stream."""
    return rng.standard_normal((node_count, dim))


def pinned_noise_stream(seed: int, sample_index: int, node_id: int, dim: int = NOISE_DIM) -> np.ndarray:
    """Counter-based per-node noise: (seed, sample, node) -> 128-d vector.

    Philox keyed by the seed with the (sample, node) pair in the counter,
    so re-requesting any single node's noise never depends on how many
    other nodes or samples were drawn.
    """
    bits = np.random.Philox(key=np.uint64(seed & 0xFFFFFFFFFFFFFFFF),
                            counter=[0, 0, np.uint64(sample_index), np.uint64(node_id)])
    return np.random.Generator(bits).standard_normal(dim)
