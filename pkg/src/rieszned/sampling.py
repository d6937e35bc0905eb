"""Seeded random instances: spaces, partitions, block-constant vectors."""
from __future__ import annotations

import numpy as np

from .lattice import CondExpOperator, Partition, SampleSpace, make_space


def random_space(rng: np.random.Generator, atoms: int, low: float = 0.05) -> SampleSpace:
    w = rng.uniform(low, 1.0, size=atoms)
    return make_space(atoms, list(w / w.sum()))


def random_partition(rng: np.random.Generator, size: int, blocks: int | None = None) -> Partition:
    if blocks is None:
        blocks = int(rng.integers(1, size + 1))
    blocks = max(1, min(blocks, size))
    # every block gets one atom first so none is empty
    perm = rng.permutation(size)
    labels = np.empty(size, dtype=int)
    labels[perm[:blocks]] = np.arange(blocks)
    labels[perm[blocks:]] = rng.integers(0, blocks, size=size - blocks)
    return Partition.from_labels(labels)


def random_refinement(rng: np.random.Generator, coarse: Partition, max_split: int = 3) -> Partition:
    """A partition refining ``coarse``: each block is split at random."""
    labels = np.empty(coarse.size, dtype=object)
    for k, b in enumerate(coarse.blocks):
        parts = int(rng.integers(1, min(max_split, len(b)) + 1))
        sub = random_partition(rng, len(b), parts).labels
        for i, s in zip(b, sub):
            labels[i] = (k, int(s))
    return Partition.from_labels(_relabel(labels))


def random_coarsening(rng: np.random.Generator, fine: Partition, blocks: int | None = None) -> Partition:
    """A partition that ``fine`` refines, by merging its blocks."""
    merged = random_partition(rng, fine.n_blocks, blocks).labels
    return Partition.from_labels(merged[fine.labels])


def _relabel(keys) -> list[int]:
    index: dict = {}
    return [index.setdefault(k, len(index)) for k in keys]


def random_block_constant(rng: np.random.Generator, T: CondExpOperator, scale: float = 1.0) -> np.ndarray:
    return T.broadcast(rng.uniform(-scale, scale, size=T.n_blocks))


def random_nonneg(rng: np.random.Generator, size: int, high: float) -> np.ndarray:
    return rng.uniform(0.0, high, size=size)
