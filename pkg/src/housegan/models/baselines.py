"""CNN-only and GCN baselines.

CNN-only flattens the whole diagram into one fixed 1308-d condition vector
(128 noise + 40x10 types + C(40,2) connectivity bits) and emits a 40-channel
mask stack, zero-padded for absent rooms. Room slots follow node-id order:
at generation time there is no ground-truth floorplan whose room-center
x-coordinates could order them. The discriminator's published layer table
concatenates the condition volume with a single mask channel, which forces
the 40-channel stack down to one channel; this implementation reduces it
with a channel-wise max (composite foreground, padding reads as background).

GCN keeps one 128-d vector per room and runs two message-passing rounds
(hidden width 512, average pooling over neighbors) before the same decode
head as the relational generator.
"""

from __future__ import annotations

from typing import Optional

import numpy as np
import torch
from torch import nn

from ..core import NUM_ROOM_TYPES, BubbleDiagram
from .common import adjacency, as_param_tensor, leaky, type_matrix
from .presets import DEFAULT_PRESET, AblationMode, ArchPreset

MAX_SLOT_ROOMS = 40
TYPE_SLOT_DIM = MAX_SLOT_ROOMS * NUM_ROOM_TYPES  # 400
CONN_SLOT_DIM = MAX_SLOT_ROOMS * (MAX_SLOT_ROOMS - 1) // 2  # 780


def _check_cnn_ablation(ablation: AblationMode) -> None:
    if ablation.name not in ("full", "no-count"):
        raise ValueError("the CNN-only variant supports the 'full' and 'no-count' modes only")


def pair_slot(i: int, j: int, n: int = MAX_SLOT_ROOMS) -> int:
    """Index of the unordered pair (i, j), i < j, in lexicographic order."""
    if not 0 <= i < j < n:
        raise ValueError(f"need 0 <= i < j < {n}, got ({i}, {j})")
    return i * (2 * n - i - 1) // 2 + (j - i - 1)


def cnn_condition(diagram: BubbleDiagram, ablation: AblationMode) -> np.ndarray:
    """(1180,) concatenated type and connectivity slots, zeroed when ablated."""
    _check_cnn_ablation(ablation)
    types = np.zeros(TYPE_SLOT_DIM)
    conn = np.zeros(CONN_SLOT_DIM)
    if ablation.use_type:
        for i, t in enumerate(diagram.room_types):
            types[i * NUM_ROOM_TYPES + int(t)] = 1.0
    if ablation.use_connectivity:
        for a, b in diagram.edges:
            conn[pair_slot(a, b)] = 1.0
    return np.concatenate([types, conn])


def pad_mask_stack(masks: np.ndarray) -> np.ndarray:
    """(rooms, m, m) -> (40, m, m) with zero channels for absent rooms."""
    masks = np.asarray(masks)
    out = np.zeros((MAX_SLOT_ROOMS,) + masks.shape[1:], dtype=masks.dtype)
    out[: masks.shape[0]] = masks
    return out


def _trace(trace, name, shape):
    if trace is not None:
        trace.append((name, tuple(shape)))


def _hwc(volume: torch.Tensor) -> tuple:
    return (volume.shape[2], volume.shape[3], volume.shape[1])


class CnnOnlyGenerator(nn.Module):
    """One 1308-d vector in, the full 40-channel mask stack out."""

    variant = "cnn-only"

    def __init__(self, preset: ArchPreset = DEFAULT_PRESET, ablation: AblationMode = AblationMode()):
        super().__init__()
        _check_cnn_ablation(ablation)
        self.preset = preset
        self.ablation = ablation
        c, s = preset.channels, preset.init_size
        w1, w2 = preset.gen_head
        self.linear_reshape_1 = nn.Linear(preset.noise_dim + TYPE_SLOT_DIM + CONN_SLOT_DIM, s * s * c)
        self.upsample_1 = nn.ConvTranspose2d(c, c, 4, stride=2, padding=1)
        self.upsample_2 = nn.ConvTranspose2d(c, c, 4, stride=2, padding=1)
        self.conv_leaky_relu_1 = nn.Conv2d(c, w1, 3, stride=1, padding=1)
        self.conv_leaky_relu_2 = nn.Conv2d(w1, w2, 3, stride=1, padding=1)
        self.conv_tanh_1 = nn.Conv2d(w2, MAX_SLOT_ROOMS, 3, stride=1, padding=1)

    def forward(self, diagram: BubbleDiagram, noise, trace: Optional[list] = None) -> torch.Tensor:
        noise = as_param_tensor(self, noise).reshape(-1)
        if noise.shape[0] != self.preset.noise_dim:
            raise ValueError(f"noise must be ({self.preset.noise_dim},), got {tuple(noise.shape)}")
        cond = as_param_tensor(self, cnn_condition(diagram, self.ablation))
        c, s = self.preset.channels, self.preset.init_size

        g = torch.cat([noise, cond]).unsqueeze(0)
        _trace(trace, "concat(z,t,c)", (1, g.shape[1]))
        g = leaky(self.linear_reshape_1(g)).reshape(1, c, s, s)
        _trace(trace, "linear_reshape_1", _hwc(g))
        g = leaky(self.upsample_1(g))
        _trace(trace, "upsample_1", _hwc(g))
        g = leaky(self.upsample_2(g))
        _trace(trace, "upsample_2", _hwc(g))
        g = leaky(self.conv_leaky_relu_1(g))
        _trace(trace, "conv_leaky_relu_1", _hwc(g))
        g = leaky(self.conv_leaky_relu_2(g))
        _trace(trace, "conv_leaky_relu_2", _hwc(g))
        g = torch.tanh(self.conv_tanh_1(g))
        _trace(trace, "conv_tanh_1", _hwc(g))
        return g.squeeze(0)

    def room_masks(self, diagram: BubbleDiagram, noise) -> torch.Tensor:
        """First `node_count` channels of the stack, one mask per room."""
        return self.forward(diagram, noise)[: diagram.node_count]


class CnnOnlyDiscriminator(nn.Module):
    """Mask stack + 1180-d condition volume -> realism scalar."""

    variant = "cnn-only"

    def __init__(self, preset: ArchPreset = DEFAULT_PRESET, ablation: AblationMode = AblationMode()):
        super().__init__()
        _check_cnn_ablation(ablation)
        self.preset = preset
        self.ablation = ablation
        c, m, tc = preset.channels, preset.mask_size, preset.disc_type_channels
        w1, w2, w3 = preset.disc_head
        self.linear_reshape_1 = nn.Linear(TYPE_SLOT_DIM + CONN_SLOT_DIM, m * m * tc)
        self.conv_leaky_relu_1 = nn.Conv2d(tc + 1, c, 3, stride=1, padding=1)
        self.conv_leaky_relu_2 = nn.Conv2d(c, c, 3, stride=1, padding=1)
        self.conv_leaky_relu_3 = nn.Conv2d(c, c, 3, stride=1, padding=1)
        self.downsample_1 = nn.Conv2d(c, c, 3, stride=2, padding=1)
        self.downsample_2 = nn.Conv2d(c, c, 3, stride=2, padding=1)
        self.conv_leaky_relu_4 = nn.Conv2d(c, w1, 3, stride=2, padding=1)
        self.conv_leaky_relu_5 = nn.Conv2d(w1, w2, 3, stride=2, padding=1)
        self.conv_leaky_relu_6 = nn.Conv2d(w2, w3, 3, stride=2, padding=1)
        self.reshape_linear_1 = nn.Linear(w3, 1)

    def forward(self, diagram: BubbleDiagram, mask_stack, trace: Optional[list] = None) -> torch.Tensor:
        x = as_param_tensor(self, mask_stack)
        m, tc = self.preset.mask_size, self.preset.disc_type_channels
        if x.shape != (MAX_SLOT_ROOMS, m, m):
            raise ValueError(f"mask stack must be ({MAX_SLOT_ROOMS}, {m}, {m}), got {tuple(x.shape)}")
        cond = as_param_tensor(self, cnn_condition(diagram, self.ablation)).unsqueeze(0)
        _trace(trace, "concat(t,c)", (1, cond.shape[1]))
        t = leaky(self.linear_reshape_1(cond)).reshape(1, tc, m, m)
        _trace(trace, "linear_reshape_1", _hwc(t))
        composite = x.max(dim=0).values.reshape(1, 1, m, m)
        x = torch.cat([t, composite], dim=1)
        _trace(trace, "concat_with(x)", _hwc(x))
        x = leaky(self.conv_leaky_relu_1(x))
        _trace(trace, "conv_leaky_relu_1", _hwc(x))
        x = leaky(self.conv_leaky_relu_2(x))
        _trace(trace, "conv_leaky_relu_2", _hwc(x))
        x = leaky(self.conv_leaky_relu_3(x))
        _trace(trace, "conv_leaky_relu_3", _hwc(x))
        x = leaky(self.downsample_1(x))
        _trace(trace, "downsample_1", _hwc(x))
        x = leaky(self.downsample_2(x))
        _trace(trace, "downsample_2", _hwc(x))
        x = leaky(self.conv_leaky_relu_4(x))
        _trace(trace, "conv_leaky_relu_4", _hwc(x))
        x = leaky(self.conv_leaky_relu_5(x))
        _trace(trace, "conv_leaky_relu_5", _hwc(x))
        x = leaky(self.conv_leaky_relu_6(x))
        _trace(trace, "conv_leaky_relu_6", _hwc(x))
        score = self.reshape_linear_1(x.reshape(-1))
        _trace(trace, "reshape_linear_1", ())
        return score.squeeze()


class GcnRound(nn.Module):
    """h_r <- MLP([h_r ; mean over neighbors of h_s]), width-512 hidden."""

    def __init__(self, dim: int = 128, hidden: int = 512):
        super().__init__()
        self.lin1 = nn.Linear(2 * dim, hidden)
        self.lin2 = nn.Linear(hidden, dim)

    def forward(self, h: torch.Tensor, adj: torch.Tensor) -> torch.Tensor:
        degree = adj.sum(dim=1, keepdim=True).clamp(min=1.0)
        pooled = (adj @ h) / degree
        x = torch.cat([h, pooled], dim=1)
        return leaky(self.lin2(leaky(self.lin1(x))))


class GcnGenerator(nn.Module):
    """Per-room 1-D message passing, then the shared volume decode head."""

    variant = "gcn"

    def __init__(
        self,
        preset: ArchPreset = DEFAULT_PRESET,
        ablation: AblationMode = AblationMode(),
        gcn_dim: int = 128,
        gcn_hidden: int = 512,
    ):
        super().__init__()
        if ablation.name != "full":
            raise ValueError("the GCN baseline runs with full constraints only")
        self.preset = preset
        self.ablation = ablation
        c, s = preset.channels, preset.init_size
        w1, w2 = preset.gen_head
        self.linear_1 = nn.Linear(preset.noise_dim + NUM_ROOM_TYPES, gcn_dim)
        self.gcn = nn.ModuleList([GcnRound(gcn_dim, gcn_hidden) for _ in range(2)])
        self.linear_2_reshape = nn.Linear(gcn_dim, s * s * c)
        self.upsample_1 = nn.ConvTranspose2d(c, c, 4, stride=2, padding=1)
        self.upsample_2 = nn.ConvTranspose2d(c, c, 4, stride=2, padding=1)
        self.conv_leaky_relu_1 = nn.Conv2d(c, w1, 3, stride=1, padding=1)
        self.conv_leaky_relu_2 = nn.Conv2d(w1, w2, 3, stride=1, padding=1)
        self.conv_tanh_1 = nn.Conv2d(w2, 1, 3, stride=1, padding=1)

    def forward(self, diagram: BubbleDiagram, noise, trace: Optional[list] = None) -> torch.Tensor:
        noise = as_param_tensor(self, noise)
        if noise.shape != (diagram.node_count, self.preset.noise_dim):
            raise ValueError(
                f"noise must be ({diagram.node_count}, {self.preset.noise_dim}), got {tuple(noise.shape)}"
            )
        types = type_matrix(diagram, self.ablation, noise.dtype, noise.device)
        adj = adjacency(diagram, self.ablation, noise.dtype, noise.device)
        c, s = self.preset.channels, self.preset.init_size

        h = torch.cat([noise, types], dim=1)
        _trace(trace, "concat(z,t)", (1, h.shape[1]))
        h = leaky(self.linear_1(h))
        _trace(trace, "linear_1", (1, h.shape[1]))
        for layer in self.gcn:
            h = layer(h, adj)
        _trace(trace, "gcn", (1, h.shape[1]))
        g = leaky(self.linear_2_reshape(h)).reshape(-1, c, s, s)
        _trace(trace, "linear_2_reshape", _hwc(g))
        g = leaky(self.upsample_1(g))
        _trace(trace, "upsample_1", _hwc(g))
        g = leaky(self.upsample_2(g))
        _trace(trace, "upsample_2", _hwc(g))
        g = leaky(self.conv_leaky_relu_1(g))
        _trace(trace, "conv_leaky_relu_1", _hwc(g))
        g = leaky(self.conv_leaky_relu_2(g))
        _trace(trace, "conv_leaky_relu_2", _hwc(g))
        g = torch.tanh(self.conv_tanh_1(g))
        _trace(trace, "conv_tanh_1", _hwc(g))
        return g.squeeze(1)


class GcnDiscriminator(nn.Module):
    """CNN mask encoder per room, two GCN rounds, sum-pool, linear scalar."""

    variant = "gcn"

    def __init__(
        self,
        preset: ArchPreset = DEFAULT_PRESET,
        ablation: AblationMode = AblationMode(),
        gcn_hidden: int = 512,
    ):
        super().__init__()
        if ablation.name != "full":
            raise ValueError("the GCN baseline runs with full constraints only")
        self.preset = preset
        self.ablation = ablation
        c, m, tc = preset.channels, preset.mask_size, preset.disc_type_channels
        w1, w2, w3 = preset.disc_head
        self.linear_reshape_1 = nn.Linear(NUM_ROOM_TYPES, m * m * tc)
        self.conv_leaky_relu_1 = nn.Conv2d(tc + 1, c, 3, stride=1, padding=1)
        self.conv_leaky_relu_2 = nn.Conv2d(c, c, 3, stride=1, padding=1)
        self.conv_leaky_relu_3 = nn.Conv2d(c, c, 3, stride=1, padding=1)
        self.downsample_1 = nn.Conv2d(c, c, 3, stride=2, padding=1)
        self.downsample_2 = nn.Conv2d(c, c, 3, stride=2, padding=1)
        self.conv_leaky_relu_4 = nn.Conv2d(c, w1, 3, stride=2, padding=1)
        self.conv_leaky_relu_5 = nn.Conv2d(w1, w2, 3, stride=2, padding=1)
        self.conv_leaky_relu_6 = nn.Conv2d(w2, w3, 3, stride=2, padding=1)
        self.gcn = nn.ModuleList([GcnRound(w3, gcn_hidden) for _ in range(2)])
        self.pool_reshape_linear_1 = nn.Linear(w3, 1)

    def forward(self, diagram: BubbleDiagram, masks, trace: Optional[list] = None) -> torch.Tensor:
        masks = as_param_tensor(self, masks)
        if masks.dim() == 3:
            masks = masks.unsqueeze(1)
        m, tc = self.preset.mask_size, self.preset.disc_type_channels
        if masks.shape != (diagram.node_count, 1, m, m):
            raise ValueError(f"masks must be ({diagram.node_count}, {m}, {m}), got {tuple(masks.shape)}")
        types = type_matrix(diagram, self.ablation, masks.dtype, masks.device)
        adj = adjacency(diagram, self.ablation, masks.dtype, masks.device)

        t = leaky(self.linear_reshape_1(types)).reshape(-1, tc, m, m)
        _trace(trace, "linear_reshape_1(t)", _hwc(t))
        x = torch.cat([t, masks], dim=1)
        _trace(trace, "concat(t,x)", _hwc(x))
        x = leaky(self.conv_leaky_relu_1(x))
        _trace(trace, "conv_leaky_relu_1", _hwc(x))
        x = leaky(self.conv_leaky_relu_2(x))
        _trace(trace, "conv_leaky_relu_2", _hwc(x))
        x = leaky(self.conv_leaky_relu_3(x))
        _trace(trace, "conv_leaky_relu_3", _hwc(x))
        x = leaky(self.downsample_1(x))
        _trace(trace, "downsample_1", _hwc(x))
        x = leaky(self.downsample_2(x))
        _trace(trace, "downsample_2", _hwc(x))
        x = leaky(self.conv_leaky_relu_4(x))
        _trace(trace, "conv_leaky_relu_4", _hwc(x))
        x = leaky(self.conv_leaky_relu_5(x))
        _trace(trace, "conv_leaky_relu_5", _hwc(x))
        x = leaky(self.conv_leaky_relu_6(x))
        _trace(trace, "conv_leaky_relu_6", _hwc(x))
        h = x.reshape(x.shape[0], -1)
        for layer in self.gcn:
            h = layer(h, adj)
        _trace(trace, "gcn", (1, h.shape[1]))
        score = self.pool_reshape_linear_1(h.sum(dim=0))
        _trace(trace, "pool_reshape_linear_1", ())
        return score.squeeze()
