"""Frechet distance over feature statistics, with pluggable extractors.

The published diversity metric used Inception features; shipping pretrained
vision weights is out of scope here, so the extractor is an interface with
two deterministic built-ins. Scores are comparable within one extractor id
only, and every report carries that id.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..core import MASK_SIZE
from ..dataio import Palette

_EIGENVALUE_CLIP = 0.0  # tiny negative eigenvalues from roundoff clamp to 0


@dataclass(frozen=True)
class FeatureStats:
    mean: np.ndarray
    cov: np.ndarray
    count: int
    extractor_id: Optional[str] = None

    def __post_init__(self):
        if self.mean.ndim != 1 or self.cov.shape != (self.mean.size, self.mean.size):
            raise ValueError("mean must be (d,) and cov (d, d)")


def compute_stats(features: np.ndarray, extractor_id: Optional[str] = None) -> FeatureStats:
    """Mean and covariance of an (n, d) feature matrix."""
    features = np.asarray(features, dtype=np.float64)
    if features.ndim != 2 or features.shape[0] < 2:
        raise ValueError("need an (n, d) matrix with n >= 2")
    mean = features.mean(axis=0)
    cov = np.cov(features, rowvar=False)
    cov = np.atleast_2d(cov)
    return FeatureStats(mean=mean, cov=cov, count=features.shape[0], extractor_id=extractor_id)


def _psd_sqrt(matrix: np.ndarray) -> np.ndarray:
    sym = (matrix + matrix.T) / 2.0
    eigenvalues, eigenvectors = np.linalg.eigh(sym)
    eigenvalues = np.clip(eigenvalues, _EIGENVALUE_CLIP, None)
    return (eigenvectors * np.sqrt(eigenvalues)) @ eigenvectors.T


def frechet_distance(stats_a: FeatureStats, stats_b: FeatureStats) -> float:
    """||mu_a - mu_b||^2 + Tr(S_a + S_b - 2 (S_a S_b)^{1/2}).

    The cross-term trace is computed from the symmetrized product
    sqrt(S_b) S_a sqrt(S_b), whose eigenvalues are clamped at zero, so the
    result is always finite and non-negative.
    """
    if stats_a.mean.size != stats_b.mean.size:
        raise ValueError("feature dimensions differ")
    if stats_a.extractor_id != stats_b.extractor_id:
        raise ValueError(
            f"stats come from different extractors: {stats_a.extractor_id!r} vs {stats_b.extractor_id!r}"
        )
    diff = stats_a.mean - stats_b.mean
    b_half = _psd_sqrt(stats_b.cov)
    inner = b_half @ stats_a.cov @ b_half
    eigenvalues = np.linalg.eigvalsh((inner + inner.T) / 2.0)
    cross = np.sqrt(np.clip(eigenvalues, 0.0, None)).sum()
    value = float(diff @ diff + np.trace(stats_a.cov) + np.trace(stats_b.cov) - 2.0 * cross)
    return max(value, 0.0)


class RandomProjectionPixels:
    """Flattened RGB pixels reduced by a fixed random projection to 64-d."""

    id = "pixels-rp64"
    dim = 64

    def __init__(self, resolution: int = MASK_SIZE, seed: int = 170_000):
        rng = np.random.default_rng(seed)
        flat = resolution * resolution * 3
        self._projection = rng.standard_normal((flat, self.dim)) / np.sqrt(flat)
        self._resolution = resolution

    def extract(self, images: np.ndarray) -> np.ndarray:
        images = np.asarray(images)
        if images.ndim == 3:
            images = images[None]
        n = images.shape[0]
        flat = images.reshape(n, -1).astype(np.float64) / 255.0
        if flat.shape[1] != self._projection.shape[0]:
            raise ValueError(f"expected {self._resolution}x{self._resolution} RGB images")
        return flat @ self._projection


class TypeHistogram:
    """Per-room-type area fraction and centroid, read back off the rendering.

    For each of the ten type colors: [area fraction, centroid row, centroid
    col] with centroids normalized to [0, 1] and zeroed for absent types,
    giving a 30-d feature.
    """

    id = "type-hist"
    dim = 30

    def __init__(self, palette: Optional[Palette] = None):
        self._palette = palette or Palette.default()

    def extract(self, images: np.ndarray) -> np.ndarray:
        images = np.asarray(images)
        if images.ndim == 3:
            images = images[None]
        n, h, w, _ = images.shape
        rows = (np.arange(h, dtype=np.float64) + 0.5) / h
        cols = (np.arange(w, dtype=np.float64) + 0.5) / w
        out = np.zeros((n, self.dim))
        for k, color in enumerate(self._palette.colors):
            hit = np.all(images == np.asarray(color, dtype=images.dtype), axis=-1)
            area = hit.sum(axis=(1, 2)).astype(np.float64)
            present = area > 0
            safe = np.where(present, area, 1.0)
            out[:, 3 * k] = area / (h * w)
            out[:, 3 * k + 1] = np.where(present, (hit * rows[None, :, None]).sum(axis=(1, 2)) / safe, 0.0)
            out[:, 3 * k + 2] = np.where(present, (hit * cols[None, None, :]).sum(axis=(1, 2)) / safe, 0.0)
        return out


def get_feature_extractor(extractor_id: str, palette: Optional[Palette] = None):
    if extractor_id == RandomProjectionPixels.id:
        return RandomProjectionPixels()
    if extractor_id == TypeHistogram.id:
        return TypeHistogram(palette)
    raise KeyError(f"unknown feature extractor {extractor_id!r}")


FEATURE_EXTRACTOR_IDS = (RandomProjectionPixels.id, TypeHistogram.id)
