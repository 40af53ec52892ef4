"""Corpus ingestion, diagram derivation, rasterization, and the synthetic corpus.

The real floorplan database behind the published statistics is proprietary,
so this module also ships a procedural generator: recursive axis-aligned
slicing of the canvas into rooms, with room types drawn from per-group
frequency targets. The generator matches the published marginal type
frequencies only approximately; the joint type/adjacency distribution of the
real data is not reproducible.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .core import (
    CANVAS_SIZE,
    MASK_SIZE,
    MAX_ROOMS,
    NUM_ROOM_TYPES,
    Box,
    BubbleDiagram,
    Layout,
    RoomType,
    box_area,
    boxes_adjacent,
    dump_json_canonical,
)

GROUPS = ("1-3", "4-6", "7-9", "10-12", "13+")
_GROUP_RANGES = {"1-3": (1, 3), "4-6": (4, 6), "7-9": (7, 9), "10-12": (10, 12), "13+": (13, MAX_ROOMS)}

# Average number of rooms of each type per sample, by room-count group
# (row order = RoomType codes). Used as sampling weights for the synthetic
# corpus; a small floor keeps every type reachable.
_TYPE_FREQUENCIES = {
    "1-3":   (0.0, 0.6, 0.4, 0.7, 0.3, 0.2, 0.1, 0.0, 0.0, 0.0),
    "4-6":   (0.0, 1.0, 0.8, 1.6, 1.0, 0.6, 0.1, 0.0, 0.0, 0.0),
    "7-9":   (0.1, 1.2, 1.3, 2.6, 1.6, 0.9, 0.4, 0.0, 0.0, 0.0),
    "10-12": (0.3, 1.1, 2.0, 3.0, 2.4, 1.0, 1.0, 0.0, 0.0, 0.0),
    "13+":   (0.3, 1.3, 2.8, 3.4, 3.6, 1.3, 1.4, 0.0, 0.0, 0.0),
}
_TYPE_WEIGHT_FLOOR = 0.02


def group_of(room_count: int) -> str:
    """Room-count bucket a sample belongs to."""
    if room_count < 1:
        raise ValueError(f"room count must be positive, got {room_count}")
    for name in GROUPS:
        lo, hi = _GROUP_RANGES[name]
        if lo <= room_count <= hi:
            return name
    raise ValueError(f"room count {room_count} exceeds the {MAX_ROOMS}-room cap")


@dataclass(frozen=True)
class Palette:
    """Room-type color table used for rasterization; part of the FID contract."""

    colors: tuple[tuple[int, int, int], ...]  # indexed by RoomType code
    background: tuple[int, int, int] = (255, 255, 255)

    def __post_init__(self):
        if len(self.colors) != NUM_ROOM_TYPES:
            raise ValueError("palette needs one color per room type")
        distinct = set(self.colors) | {self.background}
        if len(distinct) != NUM_ROOM_TYPES + 1:
            raise ValueError("palette colors must be pairwise distinct and differ from the background")

    @classmethod
    def default(cls) -> "Palette":
        data = json.loads(resources.files("housegan").joinpath("palette.json").read_text())
        return cls.from_json_dict(data)

    @classmethod
    def load(cls, path: str | Path) -> "Palette":
        return cls.from_json_dict(json.loads(Path(path).read_text()))

    @classmethod
    def from_json_dict(cls, data: dict) -> "Palette":
        colors = tuple(tuple(data["colors"][str(code)]) for code in range(NUM_ROOM_TYPES))
        return cls(colors=colors, background=tuple(data.get("background", (255, 255, 255))))

    def to_json_dict(self) -> dict:
        return {
            "background": list(self.background),
            "colors": {str(i): list(c) for i, c in enumerate(self.colors)},
        }

    def color_of(self, room_type: RoomType) -> tuple[int, int, int]:
        return self.colors[int(room_type)]

    def type_of_color(self) -> dict[tuple[int, int, int], int]:
        return {c: i for i, c in enumerate(self.colors)}


def derive_diagram(layout: Layout) -> BubbleDiagram:
    """Bubble diagram induced by a layout: edge iff Manhattan gap < 8 px.

    Degenerate rooms (``None`` boxes) are dropped, with the remaining rooms
    renumbered contiguously in their original order.
    """
    kept = [i for i, b in enumerate(layout.boxes) if b is not None]
    types = [layout.room_types[i] for i in kept]
    edges = []
    for a in range(len(kept)):
        for b in range(a + 1, len(kept)):
            if boxes_adjacent(layout.boxes[kept[a]], layout.boxes[kept[b]]):
                edges.append((a, b))
    return BubbleDiagram(types, edges)


def _covered_cells(lo: float, hi: float, scale: float, resolution: int) -> tuple[int, int]:
    # Cells whose centers (k + 0.5) * scale fall inside the closed interval.
    first = int(np.ceil(lo / scale - 0.5))
    last = int(np.floor(hi / scale - 0.5))
    return max(first, 0), min(last, resolution - 1)


def rasterize(layout: Layout, palette: Palette, resolution: int) -> np.ndarray:
    """Render a layout to an RGB uint8 image.

    Rooms are painted in decreasing-area order (ties broken by ascending
    node id), so smaller rooms overwrite larger ones. A cell is covered by
    a box iff the cell's center lies inside the box.
    """
    if resolution not in (MASK_SIZE, CANVAS_SIZE):
        raise ValueError(f"resolution must be {MASK_SIZE} or {CANVAS_SIZE}, got {resolution}")
    scale = layout.canvas / resolution
    image = np.empty((resolution, resolution, 3), dtype=np.uint8)
    image[:] = palette.background
    order = sorted(
        (i for i, b in enumerate(layout.boxes) if b is not None),
        key=lambda i: (-box_area(layout.boxes[i]), i),
    )
    for i in order:
        x0, y0, x1, y1 = layout.boxes[i]
        c0, c1 = _covered_cells(x0, x1, scale, resolution)
        r0, r1 = _covered_cells(y0, y1, scale, resolution)
        if c0 <= c1 and r0 <= r1:
            image[r0 : r1 + 1, c0 : c1 + 1] = palette.color_of(layout.room_types[i])
    return image


def mask_from_box(box: Box, resolution: int = MASK_SIZE, canvas: float = CANVAS_SIZE) -> np.ndarray:
    """Binary room mask: +1.0 where the cell center falls inside the box, else -1.0."""
    scale = canvas / resolution
    mask = np.full((resolution, resolution), -1.0)
    c0, c1 = _covered_cells(box[0], box[2], scale, resolution)
    r0, r1 = _covered_cells(box[1], box[3], scale, resolution)
    if c0 <= c1 and r0 <= r1:
        mask[r0 : r1 + 1, c0 : c1 + 1] = 1.0
    return mask


def masks_from_layout(layout: Layout, resolution: int = MASK_SIZE) -> np.ndarray:
    """(rooms, resolution, resolution) stack of ground-truth masks."""
    if layout.degenerate_rooms():
        raise ValueError("ground-truth layouts cannot contain degenerate rooms")
    return np.stack([mask_from_box(b, resolution, layout.canvas) for b in layout.boxes])


@dataclass(frozen=True)
class CorpusSample:
    sample_id: str
    group: str
    layout: Layout
    diagram: BubbleDiagram

    def to_json_dict(self) -> dict:
        return {"layout": self.layout.to_json_dict(), "diagram": self.diagram.to_json_dict()}


@dataclass(frozen=True)
class Corpus:
    samples: tuple[CorpusSample, ...]
    seed: Optional[int] = None

    def __len__(self) -> int:
        return len(self.samples)

    def by_group(self, group: str) -> tuple[CorpusSample, ...]:
        if group not in GROUPS:
            raise ValueError(f"unknown group {group!r}; expected one of {GROUPS}")
        return tuple(s for s in self.samples if s.group == group)

    def group_counts(self) -> dict[str, int]:
        counts = {g: 0 for g in GROUPS}
        for s in self.samples:
            counts[s.group] += 1
        return counts


def split_groups(corpus: Corpus, target_group: str) -> tuple[tuple[CorpusSample, ...], tuple[CorpusSample, ...]]:
    """Held-out-group split: test = the target bucket, train = everything else."""
    if target_group not in GROUPS:
        raise ValueError(f"unknown group {target_group!r}; expected one of {GROUPS}")
    train = tuple(s for s in corpus.samples if s.group != target_group)
    test = tuple(s for s in corpus.samples if s.group == target_group)
    return train, test


@dataclass(frozen=True)
class CorpusConfig:
    """Synthetic corpus shape: samples per group plus slicing knobs."""

    counts: Mapping[str, int]
    max_rooms: int = 18  # cap applied to the open-ended 13+ bucket
    inset_probability: float = 0.15  # per room side; an 8 px inset breaks adjacency

    def __post_init__(self):
        for group in self.counts:
            if group not in GROUPS:
                raise ValueError(f"unknown group {group!r}")
        if not 1 <= self.max_rooms <= MAX_ROOMS:
            raise ValueError(f"max_rooms must lie in [1, {MAX_ROOMS}], got {self.max_rooms}")
        if any(n < 0 for n in self.counts.values()):
            raise ValueError("sample counts must be non-negative")


_UNIT = CANVAS_SIZE // MASK_SIZE  # slicing happens on the 8 px grid


def _slice_regions(rng: np.random.Generator, room_count: int) -> list[tuple[int, int, int, int]]:
    # Guillotine-split the 32x32-unit canvas into `room_count` cells, always
    # splitting the largest region along its longer axis.
    regions = [(0, 0, MASK_SIZE, MASK_SIZE)]
    while len(regions) < room_count:
        regions.sort(key=lambda r: ((r[2] - r[0]) * (r[3] - r[1]),), reverse=True)
        x0, y0, x1, y1 = regions.pop(0)
        w, h = x1 - x0, y1 - y0
        along_x = w > h or (w == h and rng.random() < 0.5)
        length = w if along_x else h
        min_side = 2 if length >= 4 else 1
        cut = int(rng.integers(min_side, length - min_side + 1))
        if along_x:
            regions += [(x0, y0, x0 + cut, y1), (x0 + cut, y0, x1, y1)]
        else:
            regions += [(x0, y0, x1, y0 + cut), (x0, y0 + cut, x1, y1)]
    return regions


def _sample_layout(rng: np.random.Generator, group: str, config: CorpusConfig) -> Layout:
    lo, hi = _GROUP_RANGES[group]
    hi = min(hi, max(lo, config.max_rooms))
    room_count = int(rng.integers(lo, hi + 1))
    regions = _slice_regions(rng, room_count)
    boxes = []
    for x0, y0, x1, y1 in regions:
        # Insets pull a wall 8 px inward, turning a shared wall (gap 0)
        # into a gap of exactly 8, which is non-adjacent under gap < 8.
        if x1 - x0 > 1 and rng.random() < config.inset_probability:
            x0 += 1
        if x1 - x0 > 1 and rng.random() < config.inset_probability:
            x1 -= 1
        if y1 - y0 > 1 and rng.random() < config.inset_probability:
            y0 += 1
        if y1 - y0 > 1 and rng.random() < config.inset_probability:
            y1 -= 1
        boxes.append((x0 * _UNIT, y0 * _UNIT, x1 * _UNIT, y1 * _UNIT))
    weights = np.asarray(_TYPE_FREQUENCIES[group]) + _TYPE_WEIGHT_FLOOR
    types = rng.choice(NUM_ROOM_TYPES, size=room_count, p=weights / weights.sum())
    return Layout(boxes, [RoomType(int(t)) for t in types])


def synthesize_corpus(config: CorpusConfig, seed: int) -> Corpus:
    """Procedurally generated corpus, deterministic under the seed."""
    rng = np.random.default_rng(seed)
    samples = []
    for group in GROUPS:
        for index in range(config.counts.get(group, 0)):
            layout = _sample_layout(rng, group, config)
            samples.append(
                CorpusSample(
                    sample_id=f"{index:05d}",
                    group=group,
                    layout=layout,
                    diagram=derive_diagram(layout),
                )
            )
    return Corpus(samples=tuple(samples), seed=seed)


def save_corpus(corpus: Corpus, directory: str | Path) -> None:
    """Write corpus/{group}/{sample_id}.json plus a manifest. Byte-stable."""
    root = Path(directory)
    root.mkdir(parents=True, exist_ok=True)
    for sample in corpus.samples:
        group_dir = root / sample.group
        group_dir.mkdir(exist_ok=True)
        path = group_dir / f"{sample.sample_id}.json"
        path.write_text(dump_json_canonical(sample.to_json_dict()) + "\n")
    manifest = {"seed": corpus.seed, "counts": corpus.group_counts(), "format": "housegan-corpus-v1"}
    (root / "manifest.json").write_text(dump_json_canonical(manifest) + "\n")


def load_corpus(directory: str | Path, revalidate: bool = True) -> Corpus:
    """Read a corpus directory; optionally re-derive every diagram as a check."""
    root = Path(directory)
    manifest = json.loads((root / "manifest.json").read_text())
    samples = []
    for group in GROUPS:
        group_dir = root / group
        if not group_dir.is_dir():
            continue
        for path in sorted(group_dir.glob("*.json")):
            data = json.loads(path.read_text())
            layout = Layout.from_json_dict(data["layout"])
            diagram = BubbleDiagram.from_json_dict(data["diagram"])
            if group_of(layout.room_count) != group:
                raise ValueError(f"{path}: room count {layout.room_count} does not match group {group}")
            if revalidate and derive_diagram(layout) != diagram:
                raise ValueError(f"{path}: stored diagram disagrees with the one derived from the layout")
            samples.append(CorpusSample(path.stem, group, layout, diagram))
    return Corpus(samples=tuple(samples), seed=manifest.get("seed"))
