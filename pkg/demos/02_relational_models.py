"""Walk through the relational generator and discriminator.

Prints the layer-by-layer output sizes for the full-size models, then
demonstrates the property the architecture is built around: permuting the
rooms of the input diagram permutes the generated masks and leaves the
discriminator's scalar untouched.
"""

import numpy as np
import torch

from housegan.core import BubbleDiagram
from housegan.models import AblationMode, DEFAULT_PRESET, create_models


def main():
    diagram = BubbleDiagram([2, 1, 3, 4], [(0, 1), (0, 2), (2, 3)])
    generator, discriminator = create_models("housegan", DEFAULT_PRESET, AblationMode(), seed=0)

    rng = np.random.default_rng(0)
    noise = rng.standard_normal((diagram.node_count, DEFAULT_PRESET.noise_dim))

    trace = []
    masks = generator(diagram, noise, trace=trace)
    print("generator:")
    for name, shape in trace:
        print(f"  {name:<22} {'x'.join(map(str, shape)) or 'scalar'}")
    trace = []
    discriminator(diagram, masks.detach(), trace=trace)
    print("discriminator:")
    for name, shape in trace:
        print(f"  {name:<22} {'x'.join(map(str, shape)) or 'scalar'}")

    # permutation equivariance, in double precision
    generator = generator.double()
    discriminator = discriminator.double()
    perm = [3, 1, 0, 2]
    permuted = diagram.permuted(perm)
    noise_p = np.empty_like(noise)
    for i, target in enumerate(perm):
        noise_p[target] = noise[i]
    with torch.no_grad():
        masks = generator(diagram, noise)
        masks_p = generator(permuted, noise_p)
        err = max(float((masks_p[t] - masks[i]).abs().max()) for i, t in enumerate(perm))
        s = float(discriminator(diagram, masks))
        s_p = float(discriminator(permuted, masks_p))
    print(f"\npermutation {perm}:")
    print(f"  generator max abs deviation: {err:.3e}")
    print(f"  discriminator scores: {s:.12f} vs {s_p:.12f}")


if __name__ == "__main__":
    main()
