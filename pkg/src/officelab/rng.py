"""Named random substreams derived from one master seed.

Every stage draws from its own substream so stages (and agents within the
simulate stage) can be rerun independently without perturbing each other.
"""

from __future__ import annotations

import numpy as np

# Stream namespaces. First spawn-key element; keep values stable, they are
# part of the reproducibility contract.
SIMULATE = 0
OBSERVE = 1


def substream(seed: int, *key: int) -> np.random.Generator:
    """Generator for the substream identified by (seed, *key)."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=tuple(key))))
