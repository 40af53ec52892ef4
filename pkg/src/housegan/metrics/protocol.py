"""Evaluation protocols: compatibility sweeps and diversity (FID) scoring.

Published protocol: sample bubble diagrams from the held-out group, let the
model generate X variations each (X=10 for diversity, X=1 for the costly
compatibility metric), and score against the group's ground truth. The
compatibility sample budget is 5000 diagrams, reduced to 1000 for the two
largest groups; desk-scale corpora hold fewer, in which case every available
diagram is evaluated and the report records both numbers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from ..core import BubbleDiagram, Layout, MASK_SIZE
from ..dataio import CorpusSample, Palette, derive_diagram, rasterize
from .frechet import compute_stats, frechet_distance, get_feature_extractor
from .ged import GedConfig, GedResult, ged
from .rectfit import fit_rectangles

_REDUCED_GED_GROUPS = ("10-12", "13+")


@dataclass(frozen=True)
class EvalProtocol:
    num_diagrams: int
    variations_per_diagram: int

    def __post_init__(self):
        if self.num_diagrams < 1 or self.variations_per_diagram < 1:
            raise ValueError("protocol counts must be positive")

    @classmethod
    def diversity_default(cls) -> "EvalProtocol":
        return cls(num_diagrams=5000, variations_per_diagram=10)

    @classmethod
    def compatibility_default(cls, group: Optional[str] = None) -> "EvalProtocol":
        reduced = group in _REDUCED_GED_GROUPS
        return cls(num_diagrams=1000 if reduced else 5000, variations_per_diagram=1)


@dataclass(frozen=True)
class CompatibilityResult:
    distance: float
    exact: bool
    degenerate_rooms: int


def compatibility(
    diagram_in: BubbleDiagram, layout_out: Layout, config: GedConfig = GedConfig()
) -> CompatibilityResult:
    """Edit distance between the input diagram and the one the layout realizes.

    Degenerate rooms vanish from the derived diagram, so the edit distance
    charges them as node deletions (plus their lost edges).
    """
    dropped = len(layout_out.degenerate_rooms())
    if dropped == layout_out.room_count:
        # Nothing survived: the whole input graph must be deleted.
        distance = float(diagram_in.node_count + len(diagram_in.edges))
        return CompatibilityResult(distance, exact=True, degenerate_rooms=dropped)
    result = ged(diagram_in, derive_diagram(layout_out), config)
    return CompatibilityResult(result.distance, result.exact, degenerate_rooms=dropped)


LayoutSampler = Callable[[BubbleDiagram, np.random.Generator], Layout]


def layout_sampler_from_checkpoint(checkpoint) -> LayoutSampler:
    """Wrap a checkpoint as diagram -> layout sampling via rectangle fitting."""
    import torch

    generator = checkpoint.build_generator()
    generator.eval()
    noise_dim = checkpoint.preset.noise_dim
    per_room = checkpoint.variant != "cnn-only"

    def sample(diagram: BubbleDiagram, rng: np.random.Generator) -> Layout:
        shape = (diagram.node_count, noise_dim) if per_room else (noise_dim,)
        noise = rng.standard_normal(shape)
        with torch.no_grad():
            if per_room:
                masks = generator(diagram, noise)
            else:
                masks = generator.room_masks(diagram, noise)
        return fit_rectangles(masks.numpy(), diagram.room_types)

    return sample


def _choose(samples: Sequence, count: int, rng: np.random.Generator) -> list:
    if len(samples) <= count:
        return list(samples)
    picks = rng.choice(len(samples), size=count, replace=False)
    return [samples[i] for i in picks]


def compatibility_report(
    sampler: LayoutSampler,
    samples: Sequence[CorpusSample],
    group: Optional[str] = None,
    protocol: Optional[EvalProtocol] = None,
    ged_config: GedConfig = GedConfig(),
    seed: int = 0,
) -> dict:
    """Run the compatibility protocol and return the report payload."""
    protocol = protocol or EvalProtocol.compatibility_default(group)
    rng = np.random.default_rng(seed)
    chosen = _choose(samples, protocol.num_diagrams, rng)
    distances = []
    exact_flags = []
    degenerate = 0
    for sample in chosen:
        for _ in range(protocol.variations_per_diagram):
            layout = sampler(sample.diagram, rng)
            result = compatibility(sample.diagram, layout, ged_config)
            distances.append(result.distance)
            exact_flags.append(result.exact)
            degenerate += result.degenerate_rooms
    return {
        "metric": "compat",
        "group": group,
        "protocol": {
            "num_diagrams": protocol.num_diagrams,
            "variations_per_diagram": protocol.variations_per_diagram,
            "ged_upper_bound": ged_config.upper_bound,
            "ged_timeout_seconds": ged_config.timeout,
            "ged_ignore_node_labels": ged_config.ignore_node_labels,
        },
        "num_diagrams_evaluated": len(chosen),
        "num_layouts_evaluated": len(distances),
        "mean_distance": float(np.mean(distances)) if distances else None,
        "max_distance": float(np.max(distances)) if distances else None,
        "exact_fraction": float(np.mean(exact_flags)) if exact_flags else None,
        "degenerate_room_count": degenerate,
        "seed": seed,
    }


def diversity_score(
    sampler: LayoutSampler,
    samples: Sequence[CorpusSample],
    protocol: Optional[EvalProtocol] = None,
    extractor=None,
    palette: Optional[Palette] = None,
    seed: int = 0,
) -> tuple[float, dict]:
    """Frechet distance between generated and ground-truth rendering features."""
    protocol = protocol or EvalProtocol.diversity_default()
    palette = palette or Palette.default()
    extractor = extractor or get_feature_extractor("pixels-rp64")
    if len(samples) < 2:
        raise ValueError("need at least two ground-truth samples for feature statistics")
    rng = np.random.default_rng(seed)
    real_images = np.stack([rasterize(s.layout, palette, MASK_SIZE) for s in samples])
    real_stats = compute_stats(extractor.extract(real_images), extractor.id)
    chosen = _choose(samples, protocol.num_diagrams, rng)
    fake_images = []
    for sample in chosen:
        for _ in range(protocol.variations_per_diagram):
            layout = sampler(sample.diagram, rng)
            fake_images.append(rasterize(layout, palette, MASK_SIZE))
    fake_stats = compute_stats(extractor.extract(np.stack(fake_images)), extractor.id)
    score = frechet_distance(fake_stats, real_stats)
    details = {
        "num_diagrams_evaluated": len(chosen),
        "num_layouts_evaluated": len(fake_images),
        "num_real_samples": len(samples),
        "feature_extractor": extractor.id,
    }
    return score, details


def diversity_report(
    sampler: LayoutSampler,
    samples: Sequence[CorpusSample],
    group: Optional[str] = None,
    protocol: Optional[EvalProtocol] = None,
    extractor=None,
    palette: Optional[Palette] = None,
    seed: int = 0,
) -> dict:
    protocol = protocol or EvalProtocol.diversity_default()
    score, details = diversity_score(sampler, samples, protocol, extractor, palette, seed)
    return {
        "metric": "fid",
        "group": group,
        "protocol": {
            "num_diagrams": protocol.num_diagrams,
            "variations_per_diagram": protocol.variations_per_diagram,
        },
        "score": score,
        "seed": seed,
        **details,
    }
