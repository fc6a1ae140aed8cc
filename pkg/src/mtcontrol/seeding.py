"""Deterministic counter-based seeding.

Every consumer of randomness (an env instance, a wall draw, a rollout worker)
gets its own stream derived from a (seed, counter) pair, so streams never
alias and any draw can be reproduced from those two integers alone.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np


def derive_seed(root: int, *tags: object) -> int:
    """Map a root seed plus arbitrary string/int tags to a fresh 63-bit seed.

    Stable across processes and platforms (pure SHA-256, no hash
    randomization).
    """
    h = hashlib.sha256()
    h.update(str(int(root)).encode())
    for tag in tags:
        h.update(b"|")
        h.update(str(tag).encode())
    return int.from_bytes(h.digest()[:8], "little") & 0x7FFF_FFFF_FFFF_FFFF


@dataclass
class RngState:
    """Splittable random state: (seed, counter) -> independent child streams.

    ``spawn()`` returns a numpy Generator keyed on the current counter and
    advances the counter, so the i-th spawn of two RngStates constructed with
    the same seed is bit-identical.
    """

    seed: int
    counter: int = field(default=0)

    def spawn(self) -> np.random.Generator:
        gen = self.peek()
        self.counter += 1
        return gen

    def peek(self) -> np.random.Generator:
        """Generator for the current (seed, counter) without advancing."""
        ss = np.random.SeedSequence(self.seed & 0xFFFF_FFFF_FFFF_FFFF,
                                    spawn_key=(self.counter,))
        return np.random.Generator(np.random.Philox(ss))

    def reseed(self, seed: int) -> None:
        self.seed = seed
        self.counter = 0
