"""Helpers shared by the relational models and the baselines."""

from __future__ import annotations

import math
from typing import Optional

import numpy as np
import torch
from torch import nn

from ..core import NUM_ROOM_TYPES, BubbleDiagram, one_hot
from .presets import AblationMode

LEAKY_SLOPE = 0.1


def leaky(x: torch.Tensor) -> torch.Tensor:
    return torch.nn.functional.leaky_relu(x, LEAKY_SLOPE)


def init_params(module: nn.Module, seed: int) -> nn.Module:
    """Fan-in-scaled uniform weights, zero biases, reproducible under seed."""
    gen = torch.Generator().manual_seed(seed)
    for name, param in module.named_parameters():
        with torch.no_grad():
            if param.dim() > 1:
                fan_in = param.shape[1] * math.prod(param.shape[2:])
                bound = 1.0 / math.sqrt(fan_in)
                values = torch.rand(param.shape, generator=gen, dtype=torch.float64)
                param.copy_((values * 2.0 - 1.0) * bound)
            else:
                param.zero_()
    return module


def type_matrix(diagram: BubbleDiagram, ablation: AblationMode, dtype, device=None) -> torch.Tensor:
    """(rooms, 10) one-hot type rows; all-zero under the no-type ablation."""
    if ablation.use_type:
        rows = np.stack([one_hot(t) for t in diagram.room_types])
    else:
        rows = np.zeros((diagram.node_count, NUM_ROOM_TYPES))
    return torch.as_tensor(rows, dtype=dtype, device=device)


def adjacency(diagram: BubbleDiagram, ablation: AblationMode, dtype, device=None) -> torch.Tensor:
    """(rooms, rooms) 0/1 adjacency; fully connected when connectivity is dropped."""
    n = diagram.node_count
    if ablation.use_connectivity:
        adj = torch.as_tensor(diagram.adjacency_matrix(), dtype=dtype, device=device)
    else:
        adj = torch.ones(n, n, dtype=dtype, device=device) - torch.eye(n, dtype=dtype, device=device)
    return adj


def as_param_tensor(module: nn.Module, values, extra_dims: Optional[int] = None) -> torch.Tensor:
    """Convert input arrays to the module's parameter dtype/device."""
    ref = next(module.parameters())
    return torch.as_tensor(values, dtype=ref.dtype, device=ref.device)
