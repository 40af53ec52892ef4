"""Architecture presets and constraint-ablation switches."""

from __future__ import annotations

from dataclasses import dataclass

from ..core import NOISE_DIM


@dataclass(frozen=True)
class AblationMode:
    """Which parts of the input constraint the model receives.

    Only the four nested combinations are legal: full constraints, dropped
    connectivity (graph treated as fully connected), dropped connectivity
    and types (type vectors zeroed), and nothing at all (the CNN-only
    variant with both condition vectors zeroed).
    """

    use_count: bool = True
    use_type: bool = True
    use_connectivity: bool = True

    def __post_init__(self):
        flags = (self.use_count, self.use_type, self.use_connectivity)
        if flags not in _LEGAL_MODES:
            raise ValueError(f"illegal ablation combination {flags}; constraints drop in order conn, type, count")

    @property
    def name(self) -> str:
        return _LEGAL_MODES[(self.use_count, self.use_type, self.use_connectivity)]

    @classmethod
    def from_name(cls, name: str) -> "AblationMode":
        for flags, key in _LEGAL_MODES.items():
            if key == name:
                return cls(*flags)
        raise ValueError(f"unknown ablation mode {name!r}; expected one of {sorted(_LEGAL_MODES.values())}")


_LEGAL_MODES = {
    (True, True, True): "full",
    (True, True, False): "no-conn",
    (True, False, False): "no-type",
    (False, False, False): "no-count",
}


@dataclass(frozen=True)
class ArchPreset:
    """Layer widths for one model family instantiation.

    ``default`` reproduces the published layer table exactly; ``tiny`` is a
    4-channel, 8x8-mask variant used only by gradient-check and oracle
    tests, where finite differences over every parameter must stay cheap.
    """

    name: str
    noise_dim: int = NOISE_DIM
    channels: int = 16
    init_size: int = 8  # spatial size straight after the linear reshape
    gen_head: tuple[int, int] = (256, 128)
    disc_type_channels: int = 8
    disc_head: tuple[int, int, int] = (256, 128, 128)

    @property
    def mask_size(self) -> int:
        return self.init_size * 4  # two 2x upsamplings

    @property
    def room_vector_dim(self) -> int:
        return self.disc_head[-1]


DEFAULT_PRESET = ArchPreset("default")
TINY_PRESET = ArchPreset(
    "tiny", noise_dim=8, channels=4, init_size=2, gen_head=(8, 4), disc_type_channels=2, disc_head=(8, 8, 8)
)

PRESETS = {p.name: p for p in (DEFAULT_PRESET, TINY_PRESET)}
