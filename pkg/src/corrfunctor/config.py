"""Sweep settings shared by the property checks and verifiers."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator

from .relations import Correspondence, all_up_to, random_correspondence

DEFAULT_BOUND = 3
DEFAULT_SEED = 0


@dataclass(frozen=True)
class SweepConfig:
    """Which correspondences a naturality-style check visits.

    Every correspondence between sets of size <= ``exhaustive_max`` is visited;
    above that, ``samples`` random correspondences whose larger side has size
    ``random_size`` are drawn from ``random.Random(seed)``.
    """

    exhaustive_max: int = 2
    random_size: int = 3
    samples: int = 500
    seed: int = DEFAULT_SEED

    def with_samples(self, samples: int) -> "SweepConfig":
        return SweepConfig(self.exhaustive_max, self.random_size, samples, self.seed)

    def with_seed(self, seed: int) -> "SweepConfig":
        return SweepConfig(self.exhaustive_max, self.random_size, self.samples, seed)


def sweep(bound: int, cfg: SweepConfig = SweepConfig()) -> Iterator[Correspondence]:
    top = min(bound, cfg.exhaustive_max)
    yield from all_up_to(top)
    size = cfg.random_size
    if size <= top or size > bound:
        return
    rng = random.Random(cfg.seed)
    for _ in range(cfg.samples):
        y = rng.randint(0, size)
        x = size if y < size else rng.randint(0, size)
        if rng.random() < 0.5:
            x, y = y, x
        yield random_correspondence(rng, y, x)


def exhaustive_count(bound: int) -> int:
    """Number of correspondences between sets of size <= bound."""
    return sum(1 << (x * y) for x in range(bound + 1) for y in range(bound + 1))
