"""HTTP generation service.

One process serves read-only checkpoints; requests never mutate server
state, so identical requests (same seed) produce identical responses. A
request seed expands to per-sample, per-node noise through a counter-based
stream, which is what makes pinning any subset of a diagram's noise vectors
well defined across requests (the incremental room-addition workflow).
"""

from __future__ import annotations

import base64
import secrets
from pathlib import Path
from typing import Optional

import numpy as np
import torch
from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from .core import BubbleDiagram, RoomType, pinned_noise_stream
from .dataio import Palette
from .metrics import GedConfig, compatibility, fit_rectangles
from .models import Checkpoint, load_checkpoint

SAMPLE_NOISE_KEY = "*"  # noise record key for single-vector variants (cnn-only)


class NodePayload(BaseModel):
    id: int
    type: int


class DiagramPayload(BaseModel):
    nodes: list[NodePayload]
    edges: list[list[int]] = Field(default_factory=list)


class GenerateRequest(BaseModel):
    diagram: DiagramPayload
    checkpoint_id: str
    num_samples: int = Field(default=1, ge=1)
    seed: Optional[int] = None
    pinned_noise: Optional[dict[str, list[float]]] = None
    include_masks: bool = False


class CompatibilityPayload(BaseModel):
    distance: float
    exact: bool
    degenerate_rooms: int


class MaskPayload(BaseModel):
    shape: list[int]
    dtype: str
    data: str  # base64 of the raw little-endian buffer


class SamplePayload(BaseModel):
    layout: dict
    compatibility: CompatibilityPayload
    noise: dict[str, list[float]]
    masks: Optional[MaskPayload] = None


class GenerateResponse(BaseModel):
    checkpoint_id: str
    seed: int
    samples: list[SamplePayload]


class RoomTypePayload(BaseModel):
    code: int
    name: str
    color: list[int]


class CheckpointPayload(BaseModel):
    id: str
    variant: str
    preset: str
    ablation: str
    train_group: Optional[str]
    noise_dim: int
    mask_size: int
    per_room_noise: bool


class _LoadedModel:
    def __init__(self, checkpoint: Checkpoint):
        self.checkpoint = checkpoint
        self.generator = checkpoint.build_generator()
        self.generator.eval()
        self.per_room_noise = checkpoint.variant != "cnn-only"
        self.noise_dim = checkpoint.preset.noise_dim


def _parse_diagram(payload: DiagramPayload) -> BubbleDiagram:
    try:
        return BubbleDiagram.from_json_dict(payload.model_dump())
    except (ValueError, KeyError) as err:
        raise HTTPException(status_code=400, detail=f"invalid diagram: {err}") from err


def _mask_payload(masks: np.ndarray) -> MaskPayload:
    arr = np.ascontiguousarray(masks, dtype="<f4")
    return MaskPayload(
        shape=list(arr.shape),
        dtype="float32",
        data=base64.b64encode(arr.tobytes()).decode("ascii"),
    )


def create_app(
    checkpoint_dir: Optional[str | Path] = None,
    checkpoints: Optional[dict[str, Checkpoint]] = None,
    palette: Optional[Palette] = None,
    ged_config: GedConfig = GedConfig(),
) -> FastAPI:
    """Build the service with checkpoints from a directory and/or by value."""
    palette = palette or Palette.default()
    models: dict[str, _LoadedModel] = {}
    if checkpoint_dir is not None:
        for path in sorted(Path(checkpoint_dir).glob("*.npz")):
            models[path.stem] = _LoadedModel(load_checkpoint(path))
    for name, ckpt in (checkpoints or {}).items():
        models[name] = _LoadedModel(ckpt)

    app = FastAPI(title="housegan generation service", version="0.1.0")

    @app.get("/roomtypes", response_model=list[RoomTypePayload])
    def roomtypes() -> list[RoomTypePayload]:
        return [
            RoomTypePayload(code=int(t), name=t.label, color=list(palette.color_of(t)))
            for t in RoomType
        ]

    @app.get("/checkpoints", response_model=list[CheckpointPayload])
    def list_checkpoints() -> list[CheckpointPayload]:
        return [
            CheckpointPayload(
                id=name,
                variant=m.checkpoint.variant,
                preset=m.checkpoint.preset.name,
                ablation=m.checkpoint.ablation.name,
                train_group=m.checkpoint.train_group,
                noise_dim=m.noise_dim,
                mask_size=m.checkpoint.preset.mask_size,
                per_room_noise=m.per_room_noise,
            )
            for name, m in models.items()
        ]

    @app.post("/generate", response_model=GenerateResponse)
    def generate(request: GenerateRequest) -> GenerateResponse:
        model = models.get(request.checkpoint_id)
        if model is None:
            raise HTTPException(status_code=404, detail=f"unknown checkpoint {request.checkpoint_id!r}")
        diagram = _parse_diagram(request.diagram)

        pinned: dict[str, np.ndarray] = {}
        for key, values in (request.pinned_noise or {}).items():
            if model.per_room_noise:
                if not key.isdigit() or int(key) >= diagram.node_count:
                    raise HTTPException(status_code=422, detail=f"pinned noise for nonexistent node {key!r}")
            elif key != SAMPLE_NOISE_KEY:
                raise HTTPException(
                    status_code=422,
                    detail=f"this checkpoint takes one noise vector per sample, keyed {SAMPLE_NOISE_KEY!r}",
                )
            if len(values) != model.noise_dim:
                raise HTTPException(
                    status_code=422, detail=f"noise vectors for this checkpoint have {model.noise_dim} entries"
                )
            pinned[key] = np.asarray(values, dtype=np.float64)

        seed = request.seed if request.seed is not None else secrets.randbits(48)
        samples = []
        for index in range(request.num_samples):
            if model.per_room_noise:
                record = {
                    str(node): pinned.get(
                        str(node), pinned_noise_stream(seed, index, node, model.noise_dim)
                    )
                    for node in range(diagram.node_count)
                }
                noise = np.stack([record[str(node)] for node in range(diagram.node_count)])
                with torch.no_grad():
                    masks = model.generator(diagram, noise).numpy()
            else:
                record = {
                    SAMPLE_NOISE_KEY: pinned.get(
                        SAMPLE_NOISE_KEY, pinned_noise_stream(seed, index, 0, model.noise_dim)
                    )
                }
                with torch.no_grad():
                    masks = model.generator.room_masks(diagram, record[SAMPLE_NOISE_KEY]).numpy()
            layout = fit_rectangles(masks, diagram.room_types)
            score = compatibility(diagram, layout, ged_config)
            samples.append(
                SamplePayload(
                    layout=layout.to_json_dict(),
                    compatibility=CompatibilityPayload(
                        distance=score.distance, exact=score.exact, degenerate_rooms=score.degenerate_rooms
                    ),
                    noise={key: [float(v) for v in vec] for key, vec in record.items()},
                    masks=_mask_payload(masks) if request.include_masks else None,
                )
            )
        return GenerateResponse(checkpoint_id=request.checkpoint_id, seed=seed, samples=samples)

    return app
