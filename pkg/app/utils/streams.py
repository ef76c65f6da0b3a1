"""
Counter-based random streams keyed by (seed, label, index).

Every trial draws from its own Philox stream, so results do not depend on
how trials are scheduled across threads.
"""
from __future__ import annotations

import zlib
from dataclasses import dataclass

import numpy as np


def stream(seed: int, label: str, index: int = 0) -> np.random.Generator:
    key = zlib.crc32(label.encode("utf-8"))
    seq = np.random.SeedSequence(entropy=int(seed), spawn_key=(key, int(index)))
    return np.random.Generator(np.random.Philox(seq))


@dataclass(frozen=True)
class StreamFactory:
    seed: int
    prefix: str = ""

    def __call__(self, label: str, index: int = 0) -> np.random.Generator:
        return stream(self.seed, f"{self.prefix}{label}", index)

    def child(self, prefix: str) -> StreamFactory:
        return StreamFactory(self.seed, f"{self.prefix}{prefix}/")
