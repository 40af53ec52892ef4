"""Desk-scale training sanity check: memorize a single floorplan.

WGAN-GP on one fixed (diagram, masks) pair with the tiny architecture
preset. A healthy training stack drives the generated-vs-real mask IoU
toward 1.0 within a few thousand steps; the loss log lands next to this
script. Takes a few minutes on one CPU core.
"""

from pathlib import Path

import numpy as np
import torch

from housegan.core import Layout
from housegan.dataio import derive_diagram, masks_from_layout
from housegan.models import AblationMode, TINY_PRESET
from housegan.training import TrainConfig, init_train_state, mask_iou, train_step, write_metrics_log

OUT = Path(__file__).resolve().parent / "out"
STEPS = 3000


def main():
    layout = Layout([(0, 0, 128, 128), (128, 0, 256, 128), (0, 128, 256, 256)], [2, 1, 3])
    diagram = derive_diagram(layout)
    real = masks_from_layout(layout, TINY_PRESET.mask_size)

    config = TrainConfig(
        learning_rate_g=1e-3,
        learning_rate_d=1e-3,
        adam_beta2=0.9,
        batch_size=1,
        n_critic=5,
        iterations=STEPS,
        seed=0,
    )
    state = init_train_state(config, "housegan", TINY_PRESET, AblationMode())
    batch = [(diagram, real)]

    probe = torch.Generator().manual_seed(123)
    for step in range(STEPS):
        row = train_step(state, batch)
        if (step + 1) % 300 == 0:
            with torch.no_grad():
                noise = torch.randn((3, TINY_PRESET.noise_dim), generator=probe, dtype=torch.float64)
                fake = state.generator(diagram, noise).numpy()
            iou = np.mean([mask_iou(fake[i], real[i]) for i in range(3)])
            print(
                f"iter {row['iteration']:>5}: d_loss={row['d_loss']:+8.3f} "
                f"g_loss={row['g_loss']:+8.3f} gp={row['gp']:6.3f} IoU={iou:.3f}"
            )

    OUT.mkdir(parents=True, exist_ok=True)
    write_metrics_log(state.log_rows, OUT / "memorize_log.csv")
    print(f"loss log: {OUT / 'memorize_log.csv'}")


if __name__ == "__main__":
    main()
