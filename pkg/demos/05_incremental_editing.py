"""Fixed-noise incremental editing: grow a diagram one room at a time.

Mirrors the design-iteration loop the generation service exposes: each
room's noise vector comes from a counter-based stream keyed by (seed,
sample, node), so previously placed rooms keep their noise as new nodes
arrive, and a returned noise record can be re-pinned verbatim. Note that
keeping noise fixed does NOT freeze the layout: the generator re-reasons
over the whole graph, and adding one room may rearrange the rest to
satisfy the new adjacencies.

Pass a trained checkpoint path for meaningful geometry; without one, a
freshly initialized model demonstrates the mechanics only.
"""

import sys
from pathlib import Path

import numpy as np
import torch
from PIL import Image

from housegan.core import BubbleDiagram, pinned_noise_stream
from housegan.dataio import Palette, rasterize
from housegan.metrics import compatibility, fit_rectangles
from housegan.models import AblationMode, TINY_PRESET, create_models, load_checkpoint

OUT = Path(__file__).resolve().parent / "out" / "incremental"

# bedroom, then kitchen attached to it, then bathroom, then a balcony
STAGES = [
    BubbleDiagram([2], []),
    BubbleDiagram([2, 1], [(0, 1)]),
    BubbleDiagram([2, 1, 3], [(0, 1), (0, 2)]),
    BubbleDiagram([2, 1, 3, 5], [(0, 1), (0, 2), (1, 3)]),
]

SEED = 11


def main():
    if len(sys.argv) > 1:
        checkpoint = load_checkpoint(sys.argv[1])
        generator = checkpoint.build_generator()
        noise_dim = checkpoint.preset.noise_dim
        print(f"using checkpoint {sys.argv[1]} ({checkpoint.variant}, preset {checkpoint.preset.name})")
    else:
        generator, _ = create_models("housegan", TINY_PRESET, AblationMode(), seed=1)
        noise_dim = TINY_PRESET.noise_dim
        print("no checkpoint given: using freshly initialized weights (mechanics demo)")
    generator.eval()

    OUT.mkdir(parents=True, exist_ok=True)
    palette = Palette.default()
    for stage, diagram in enumerate(STAGES):
        # node noise is pinned by construction: node k's vector never changes
        noise = np.stack(
            [pinned_noise_stream(SEED, 0, node, noise_dim) for node in range(diagram.node_count)]
        )
        with torch.no_grad():
            masks = generator(diagram, noise).numpy()
        layout = fit_rectangles(masks, diagram.room_types)
        score = compatibility(diagram, layout)
        png = OUT / f"stage_{stage}.png"
        Image.fromarray(rasterize(layout, palette, 256)).save(png)
        boxes = ["-" if b is None else "(%g,%g,%g,%g)" % b for b in layout.boxes]
        print(
            f"stage {stage}: {diagram.node_count} rooms, compatibility {score.distance:g} "
            f"-> {png.name}  boxes: {', '.join(boxes)}"
        )


if __name__ == "__main__":
    main()
