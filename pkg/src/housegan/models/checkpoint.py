"""Versioned checkpoint container: one .npz with metadata plus named weights."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np
import torch
from torch import nn

from .baselines import CnnOnlyDiscriminator, CnnOnlyGenerator, GcnDiscriminator, GcnGenerator
from .common import init_params
from .convmpn import LayoutDiscriminator, LayoutGenerator
from .presets import AblationMode, ArchPreset

FORMAT_VERSION = 1
VARIANTS = ("housegan", "cnn-only", "gcn")

_GENERATORS = {"housegan": LayoutGenerator, "cnn-only": CnnOnlyGenerator, "gcn": GcnGenerator}
_DISCRIMINATORS = {"housegan": LayoutDiscriminator, "cnn-only": CnnOnlyDiscriminator, "gcn": GcnDiscriminator}


def create_models(variant: str, preset: ArchPreset, ablation: AblationMode, seed: int):
    """Freshly initialized (generator, discriminator) pair for a variant."""
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    generator = init_params(_GENERATORS[variant](preset, ablation), seed)
    discriminator = init_params(_DISCRIMINATORS[variant](preset, ablation), seed + 1)
    return generator, discriminator


def _state_arrays(module: nn.Module) -> dict[str, np.ndarray]:
    return {k: v.detach().cpu().numpy() for k, v in module.state_dict().items()}


def _load_state(module: nn.Module, arrays: dict[str, np.ndarray]) -> nn.Module:
    dtype = torch.from_numpy(next(iter(arrays.values()))).dtype
    module.to(dtype)
    module.load_state_dict({k: torch.from_numpy(v) for k, v in arrays.items()})
    return module


@dataclass
class Checkpoint:
    variant: str
    preset: ArchPreset
    ablation: AblationMode
    seed: int
    train_group: Optional[str] = None
    generator_state: dict = field(default_factory=dict)
    discriminator_state: Optional[dict] = None
    extra: dict = field(default_factory=dict)

    @classmethod
    def from_models(
        cls,
        generator: nn.Module,
        discriminator: Optional[nn.Module] = None,
        seed: int = 0,
        train_group: Optional[str] = None,
        extra: Optional[dict] = None,
    ) -> "Checkpoint":
        return cls(
            variant=generator.variant,
            preset=generator.preset,
            ablation=generator.ablation,
            seed=seed,
            train_group=train_group,
            generator_state=_state_arrays(generator),
            discriminator_state=None if discriminator is None else _state_arrays(discriminator),
            extra=dict(extra or {}),
        )

    def build_generator(self) -> nn.Module:
        module = _GENERATORS[self.variant](self.preset, self.ablation)
        return _load_state(module, self.generator_state)

    def build_discriminator(self) -> nn.Module:
        if self.discriminator_state is None:
            raise ValueError("checkpoint carries no discriminator weights")
        module = _DISCRIMINATORS[self.variant](self.preset, self.ablation)
        return _load_state(module, self.discriminator_state)

    def describe(self) -> dict:
        return {
            "variant": self.variant,
            "preset": self.preset.name,
            "ablation": self.ablation.name,
            "seed": self.seed,
            "train_group": self.train_group,
            **{k: v for k, v in self.extra.items()},
        }


def save_checkpoint(checkpoint: Checkpoint, path: str | Path) -> None:
    meta = {
        "format_version": FORMAT_VERSION,
        "variant": checkpoint.variant,
        "preset": {
            "name": checkpoint.preset.name,
            "noise_dim": checkpoint.preset.noise_dim,
            "channels": checkpoint.preset.channels,
            "init_size": checkpoint.preset.init_size,
            "gen_head": list(checkpoint.preset.gen_head),
            "disc_type_channels": checkpoint.preset.disc_type_channels,
            "disc_head": list(checkpoint.preset.disc_head),
        },
        "ablation": checkpoint.ablation.name,
        "seed": checkpoint.seed,
        "train_group": checkpoint.train_group,
        "extra": checkpoint.extra,
        "has_discriminator": checkpoint.discriminator_state is not None,
    }
    arrays = {f"generator/{k}": v for k, v in checkpoint.generator_state.items()}
    if checkpoint.discriminator_state is not None:
        arrays.update({f"discriminator/{k}": v for k, v in checkpoint.discriminator_state.items()})
    arrays["meta"] = np.frombuffer(json.dumps(meta).encode("utf-8"), dtype=np.uint8).copy()
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    np.savez(path, **arrays)
    if path.suffix != ".npz":  # numpy appends .npz; keep the requested name
        (path.parent / (path.name + ".npz")).replace(path)


def load_checkpoint(path: str | Path) -> Checkpoint:
    with np.load(path) as data:
        meta = json.loads(bytes(data["meta"]).decode("utf-8"))
        if meta["format_version"] != FORMAT_VERSION:
            raise ValueError(f"unsupported checkpoint format {meta['format_version']}")
        gen_state = {}
        disc_state = {} if meta["has_discriminator"] else None
        for key in data.files:
            if key.startswith("generator/"):
                gen_state[key[len("generator/") :]] = data[key]
            elif key.startswith("discriminator/"):
                disc_state[key[len("discriminator/") :]] = data[key]
    preset_meta = meta["preset"]
    preset = ArchPreset(
        name=preset_meta["name"],
        noise_dim=preset_meta["noise_dim"],
        channels=preset_meta["channels"],
        init_size=preset_meta["init_size"],
        gen_head=tuple(preset_meta["gen_head"]),
        disc_type_channels=preset_meta["disc_type_channels"],
        disc_head=tuple(preset_meta["disc_head"]),
    )
    return Checkpoint(
        variant=meta["variant"],
        preset=preset,
        ablation=AblationMode.from_name(meta["ablation"]),
        seed=meta["seed"],
        train_group=meta["train_group"],
        generator_state=gen_state,
        discriminator_state=disc_state,
        extra=meta.get("extra", {}),
    )
