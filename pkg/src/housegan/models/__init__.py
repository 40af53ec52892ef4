from .presets import AblationMode, ArchPreset, DEFAULT_PRESET, TINY_PRESET, PRESETS
from .common import init_params
from .convmpn import ConvMessagePass, LayoutDiscriminator, LayoutGenerator
from .baselines import (
    CnnOnlyDiscriminator,
    CnnOnlyGenerator,
    GcnDiscriminator,
    GcnGenerator,
    cnn_condition,
    pad_mask_stack,
    pair_slot,
    CONN_SLOT_DIM,
    MAX_SLOT_ROOMS,
    TYPE_SLOT_DIM,
)
from .checkpoint import Checkpoint, VARIANTS, create_models, load_checkpoint, save_checkpoint

__all__ = [
    "AblationMode",
    "ArchPreset",
    "DEFAULT_PRESET",
    "TINY_PRESET",
    "PRESETS",
    "init_params",
    "ConvMessagePass",
    "LayoutGenerator",
    "LayoutDiscriminator",
    "CnnOnlyGenerator",
    "CnnOnlyDiscriminator",
    "GcnGenerator",
    "GcnDiscriminator",
    "cnn_condition",
    "pad_mask_stack",
    "pair_slot",
    "CONN_SLOT_DIM",
    "MAX_SLOT_ROOMS",
    "TYPE_SLOT_DIM",
    "Checkpoint",
    "VARIANTS",
    "create_models",
    "load_checkpoint",
    "save_checkpoint",
]
