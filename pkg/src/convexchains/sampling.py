"""Seeded point samplers for the uniform and Poisson models.

Every replicate draws from its own Philox stream keyed by a hash of
(master seed, replicate index), so results never depend on how many
replicates run or in which order.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .geometry import Triangle, map_to_standard, standard_triangle

MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class SeedSpec:
    master_seed: int
    replicate_index: int = 0

    def __post_init__(self):
        if not (0 <= self.master_seed <= MASK64):
            raise ValueError("master seed must be a 64-bit unsigned integer")
        if self.replicate_index < 0:
            raise ValueError("replicate index must be nonnegative")

    @property
    def stream_seed(self) -> int:
        """64-bit per-replicate seed derived by SeedSequence hashing."""
        ss = np.random.SeedSequence(self.master_seed, spawn_key=(self.replicate_index,))
        return int(ss.generate_state(1, dtype=np.uint64)[0])

    def generator(self) -> np.random.Generator:
        return np.random.Generator(np.random.Philox(self.stream_seed))


@dataclass(frozen=True)
class Uniform:
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("point count must be nonnegative")


@dataclass(frozen=True)
class Poisson:
    intensity_count: float

    def __post_init__(self):
        if not self.intensity_count > 0:
            raise ValueError("Poisson intensity count must be positive")


SampleModel = Union[Uniform, Poisson]


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, SeedSpec):
        return seed.generator()
    return SeedSpec(int(seed)).generator()


def _fold_to_standard(uv: np.ndarray) -> np.ndarray:
    flip = uv.sum(axis=1) > 1.0
    uv[flip] = 1.0 - uv[flip]
    return uv


def _standard_points(rng: np.random.Generator, n: int) -> np.ndarray:
    return _fold_to_standard(rng.random((n, 2)))


def _place(std: np.ndarray, T: Triangle | None) -> np.ndarray:
    if T is None or T == standard_triangle():
        return std
    return map_to_standard(T).inverse().apply(std)


def sample_uniform_triangle(seed, T: Triangle | None, n: int) -> np.ndarray:
    """n i.i.d. uniform points in T as an (n, 2) array."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return _place(_standard_points(_rng(seed), n), T)


def sample_poisson_triangle(seed, T: Triangle | None, intensity_count: float) -> np.ndarray:
    """Poisson process on T with ``intensity_count`` expected points: a
    Poisson count followed by that many uniform points."""
    if not intensity_count > 0:
        raise ValueError("intensity count must be positive")
    rng = _rng(seed)
    m = int(rng.poisson(intensity_count))
    return _place(_standard_points(rng, m), T)


def sample_uniform_square(seed, n: int) -> np.ndarray:
    if n < 0:
        raise ValueError("n must be nonnegative")
    return _rng(seed).random((n, 2))


def sample(seed, model: SampleModel, T: Triangle | None = None) -> np.ndarray:
    if isinstance(model, Uniform):
        return sample_uniform_triangle(seed, T, model.n)
    if isinstance(model, Poisson):
        return sample_poisson_triangle(seed, T, model.intensity_count)
    raise TypeError(f"unknown sample model {model!r}")
