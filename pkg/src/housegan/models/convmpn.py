"""Relational generator and discriminator over per-room feature volumes.

Message passing keeps one (C, H, W) volume per room and updates it by
concatenating the room's own volume with sum-pooled volumes over adjacent
and non-adjacent rooms, then applying a shared three-layer CNN. All layers
are shared across rooms, which is what makes the models permutation
equivariant (generator) / invariant (discriminator).
"""

from __future__ import annotations

from typing import Optional

import torch
from torch import nn

from ..core import NUM_ROOM_TYPES, BubbleDiagram
from .common import adjacency, as_param_tensor, leaky, type_matrix
from .presets import DEFAULT_PRESET, AblationMode, ArchPreset


def _trace(trace, name, shape):
    if trace is not None:
        trace.append((name, tuple(shape)))


def _hwc(volume: torch.Tensor) -> tuple:
    # per-node volumes are (rooms, C, H, W); the layer table reads H x W x C
    return (volume.shape[2], volume.shape[3], volume.shape[1])


class ConvMessagePass(nn.Module):
    """One Conv-MPN block: concat [self ; pooled neighbors ; pooled rest] -> CNN."""

    def __init__(self, channels: int):
        super().__init__()
        self.convs = nn.ModuleList(
            [
                nn.Conv2d(3 * channels, channels, 3, stride=1, padding=1),
                nn.Conv2d(channels, channels, 3, stride=1, padding=1),
                nn.Conv2d(channels, channels, 3, stride=1, padding=1),
            ]
        )

    def forward(self, volumes: torch.Tensor, adj: torch.Tensor) -> torch.Tensor:
        n = volumes.shape[0]
        eye = torch.eye(n, dtype=volumes.dtype, device=volumes.device)
        non_adj = torch.ones_like(adj) - eye - adj
        pooled_adj = torch.einsum("rs,schw->rchw", adj, volumes)
        pooled_non = torch.einsum("rs,schw->rchw", non_adj, volumes)
        x = torch.cat([volumes, pooled_adj, pooled_non], dim=1)
        for conv in self.convs:
            x = leaky(conv(x))
        return x


class LayoutGenerator(nn.Module):
    """Bubble diagram + per-room noise -> one segmentation mask per room."""

    variant = "housegan"

    def __init__(self, preset: ArchPreset = DEFAULT_PRESET, ablation: AblationMode = AblationMode()):
        super().__init__()
        if not ablation.use_count:
            raise ValueError("the relational generator needs at least the room count")
        self.preset = preset
        self.ablation = ablation
        c, s = preset.channels, preset.init_size
        w1, w2 = preset.gen_head
        self.linear_reshape_1 = nn.Linear(preset.noise_dim + NUM_ROOM_TYPES, s * s * c)
        self.conv_mpn_1 = ConvMessagePass(c)
        self.upsample_1 = nn.ConvTranspose2d(c, c, 4, stride=2, padding=1)
        self.conv_mpn_2 = ConvMessagePass(c)
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

        g = torch.cat([noise, types], dim=1)
        _trace(trace, "concat(z,t)", (1, g.shape[1]))
        g = leaky(self.linear_reshape_1(g)).reshape(-1, c, s, s)
        _trace(trace, "linear_reshape_1", _hwc(g))
        g = self.conv_mpn_1(g, adj)
        _trace(trace, "conv_mpn_1", _hwc(g))
        g = leaky(self.upsample_1(g))
        _trace(trace, "upsample_1", _hwc(g))
        g = self.conv_mpn_2(g, adj)
        _trace(trace, "conv_mpn_2", _hwc(g))
        g = leaky(self.upsample_2(g))
        _trace(trace, "upsample_2", _hwc(g))
        g = leaky(self.conv_leaky_relu_1(g))
        _trace(trace, "conv_leaky_relu_1", _hwc(g))
        g = leaky(self.conv_leaky_relu_2(g))
        _trace(trace, "conv_leaky_relu_2", _hwc(g))
        g = torch.tanh(self.conv_tanh_1(g))
        _trace(trace, "conv_tanh_1", _hwc(g))
        return g.squeeze(1)


class LayoutDiscriminator(nn.Module):
    """Graph of room masks -> realism scalar, permutation invariant."""

    variant = "housegan"

    def __init__(self, preset: ArchPreset = DEFAULT_PRESET, ablation: AblationMode = AblationMode()):
        super().__init__()
        if not ablation.use_count:
            raise ValueError("the relational discriminator needs at least the room count")
        self.preset = preset
        self.ablation = ablation
        c, m, tc = preset.channels, preset.mask_size, preset.disc_type_channels
        w1, w2, w3 = preset.disc_head
        self.linear_reshape_1 = nn.Linear(NUM_ROOM_TYPES, m * m * tc)
        self.conv_leaky_relu_1 = nn.Conv2d(tc + 1, c, 3, stride=1, padding=1)
        self.conv_leaky_relu_2 = nn.Conv2d(c, c, 3, stride=1, padding=1)
        self.conv_leaky_relu_3 = nn.Conv2d(c, c, 3, stride=1, padding=1)
        self.conv_mpn_1 = ConvMessagePass(c)
        self.downsample_1 = nn.Conv2d(c, c, 3, stride=2, padding=1)
        self.conv_mpn_2 = ConvMessagePass(c)
        self.downsample_2 = nn.Conv2d(c, c, 3, stride=2, padding=1)
        self.conv_leaky_relu_4 = nn.Conv2d(c, w1, 3, stride=2, padding=1)
        self.conv_leaky_relu_5 = nn.Conv2d(w1, w2, 3, stride=2, padding=1)
        self.conv_leaky_relu_6 = nn.Conv2d(w2, w3, 3, stride=2, padding=1)
        self.pool_reshape_linear_1 = nn.Linear(w3, 1)

    def forward(self, diagram: BubbleDiagram, masks, trace: Optional[list] = None) -> torch.Tensor:
        masks = as_param_tensor(self, masks)
        if masks.dim() == 3:
            masks = masks.unsqueeze(1)
        m = self.preset.mask_size
        if masks.shape != (diagram.node_count, 1, m, m):
            raise ValueError(f"masks must be ({diagram.node_count}, {m}, {m}), got {tuple(masks.shape)}")
        types = type_matrix(diagram, self.ablation, masks.dtype, masks.device)
        adj = adjacency(diagram, self.ablation, masks.dtype, masks.device)
        tc = self.preset.disc_type_channels

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
        x = self.conv_mpn_1(x, adj)
        _trace(trace, "conv_mpn_1", _hwc(x))
        x = leaky(self.downsample_1(x))
        _trace(trace, "downsample_1", _hwc(x))
        x = self.conv_mpn_2(x, adj)
        _trace(trace, "conv_mpn_2", _hwc(x))
        x = leaky(self.downsample_2(x))
        _trace(trace, "downsample_2", _hwc(x))
        x = leaky(self.conv_leaky_relu_4(x))
        _trace(trace, "conv_leaky_relu_4", _hwc(x))
        x = leaky(self.conv_leaky_relu_5(x))
        _trace(trace, "conv_leaky_relu_5", _hwc(x))
        x = leaky(self.conv_leaky_relu_6(x))
        _trace(trace, "conv_leaky_relu_6", _hwc(x))
        room_vectors = x.reshape(x.shape[0], -1)
        _trace(trace, "room_vector", (1, room_vectors.shape[1]))
        score = self.pool_reshape_linear_1(room_vectors.sum(dim=0))
        _trace(trace, "pool_reshape_linear_1", ())
        return score.squeeze()
