"""Finite atomic Riesz spaces.

The space ``E`` is the set of real functions on a finite set of weighted atoms,
stored as float arrays whose last axis runs over atoms. Order, lattice
operations and the f-algebra product are componentwise, and the all-ones
vector is the weak order unit ``e``. A conditional expectation operator is
weighted averaging over the blocks of a :class:`Partition`; its range is the
set of vectors that are constant on those blocks.
"""
from __future__ import annotations

import string
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    InvalidPartition,
    LengthMismatch,
    NegativeInput,
    NonPositiveWeight,
    SpaceMismatch,
    ValidationError,
)

ATOM_SOFT_LIMIT = 64


def _default_atoms(count: int) -> tuple[str, ...]:
    if count <= 26:
        return tuple(string.ascii_lowercase[:count])
    return tuple(f"w{i}" for i in range(count))


@dataclass(frozen=True)
class SampleSpace:
    """Atoms with strictly positive weights (total mass need not be 1)."""

    atoms: tuple[str, ...]
    weights: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(str(a) for a in self.atoms))
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        if len(self.atoms) < 1:
            raise ValidationError("a sample space needs at least one atom")
        if len(set(self.atoms)) != len(self.atoms):
            raise ValidationError("atom identifiers must be unique")
        if len(self.weights) != len(self.atoms):
            raise LengthMismatch(
                f"{len(self.weights)} weights for {len(self.atoms)} atoms"
            )
        for i, w in enumerate(self.weights):
            if not np.isfinite(w) or w <= 0.0:
                raise NonPositiveWeight(f"weight {i} is {w}; weights must be > 0")

    @property
    def size(self) -> int:
        return len(self.atoms)

    @cached_property
    def w(self) -> np.ndarray:
        arr = np.array(self.weights, dtype=float)
        arr.flags.writeable = False
        return arr

    @property
    def e(self) -> np.ndarray:
        return np.ones(self.size)

    def zeros(self) -> np.ndarray:
        return np.zeros(self.size)

    def check(self, f) -> np.ndarray:
        f = np.asarray(f, dtype=float)
        if f.ndim == 0 or f.shape[-1] != self.size:
            raise SpaceMismatch(
                f"vector of shape {f.shape} does not live on a {self.size}-atom space"
            )
        return f


def make_space(atom_count: int, weights: Sequence[float], atoms=None) -> SampleSpace:
    if atom_count < 1:
        raise ValidationError("atom_count must be at least 1")
    if len(weights) != atom_count:
        raise LengthMismatch(f"{len(weights)} weights for {atom_count} atoms")
    if atoms is None:
        atoms = _default_atoms(atom_count)
    return SampleSpace(tuple(atoms), tuple(weights))


def uniform_space(atom_count: int) -> SampleSpace:
    return make_space(atom_count, [1.0 / atom_count] * atom_count)


@dataclass(frozen=True)
class Partition:
    """Disjoint nonempty blocks of atom indices covering ``range(size)``.

    Blocks are stored sorted, and ordered by their smallest atom, so equal
    partitions compare and hash equal.
    """

    blocks: tuple[tuple[int, ...], ...]
    size: int

    def __post_init__(self):
        blocks = []
        seen: set[int] = set()
        for b in self.blocks:
            b = tuple(sorted(int(i) for i in b))
            if not b:
                raise InvalidPartition("empty block")
            for i in b:
                if i < 0 or i >= self.size:
                    raise InvalidPartition(f"atom index {i} outside 0..{self.size - 1}")
                if i in seen:
                    raise InvalidPartition(f"atom {i} appears in more than one block")
                seen.add(i)
            blocks.append(b)
        if len(seen) != self.size:
            missing = sorted(set(range(self.size)) - seen)
            raise InvalidPartition(f"atoms {missing} are not covered")
        blocks.sort(key=lambda b: b[0])
        object.__setattr__(self, "blocks", tuple(blocks))

    @classmethod
    def trivial(cls, size: int) -> "Partition":
        return cls((tuple(range(size)),), size)

    @classmethod
    def discrete(cls, size: int) -> "Partition":
        return cls(tuple((i,) for i in range(size)), size)

    @classmethod
    def from_labels(cls, labels) -> "Partition":
        labels = np.asarray(labels)
        groups: dict = {}
        for i, lab in enumerate(labels.tolist()):
            groups.setdefault(lab, []).append(i)
        return cls(tuple(tuple(g) for g in groups.values()), len(labels))

    @classmethod
    def level_sets(cls, f) -> "Partition":
        """Atoms share a block iff ``f`` takes the same value on them."""
        f = np.asarray(f, dtype=float)
        _, labels = np.unique(f, return_inverse=True)
        return cls.from_labels(labels)

    @property
    def n_blocks(self) -> int:
        return len(self.blocks)

    @cached_property
    def labels(self) -> np.ndarray:
        lab = np.empty(self.size, dtype=int)
        for k, b in enumerate(self.blocks):
            lab[list(b)] = k
        lab.flags.writeable = False
        return lab

    @cached_property
    def membership(self) -> np.ndarray:
        """``(n_blocks, size)`` 0/1 matrix; row k indicates block k."""
        m = np.zeros((self.n_blocks, self.size))
        m[self.labels, np.arange(self.size)] = 1.0
        m.flags.writeable = False
        return m

    def refines(self, other: "Partition") -> bool:
        """True iff every block of ``self`` lies inside a block of ``other``."""
        if other.size != self.size:
            raise SpaceMismatch("partitions live on different spaces")
        lab = other.labels
        return all(len({int(lab[i]) for i in b}) == 1 for b in self.blocks)

    def join(self, other: "Partition") -> "Partition":
        """Coarsest common refinement."""
        if other.size != self.size:
            raise SpaceMismatch("partitions live on different spaces")
        pairs = list(zip(self.labels.tolist(), other.labels.tolist()))
        return Partition.from_labels(pairs_to_labels(pairs))

    def is_constant_on_blocks(self, f, tol: float = 0.0) -> bool:
        f = np.asarray(f, dtype=float)
        for b in self.blocks:
            vals = f[..., list(b)]
            if np.any(vals.max(axis=-1) - vals.min(axis=-1) > tol):
                return False
        return True

    def to_lists(self) -> list[list[int]]:
        return [list(b) for b in self.blocks]


def pairs_to_labels(keys: Iterable) -> list[int]:
    index: dict = {}
    return [index.setdefault(k, len(index)) for k in keys]


@dataclass(frozen=True)
class CondExpOperator:
    """Weighted block averaging: ``(Sf)(w) = sum_{block(w)} weight*f / sum_{block(w)} weight``.

    Callable on arrays whose last axis runs over atoms.
    """

    space: SampleSpace
    partition: Partition

    def __post_init__(self):
        if self.partition.size != self.space.size:
            raise InvalidPartition(
                f"partition on {self.partition.size} atoms used with a "
                f"{self.space.size}-atom space"
            )

    @property
    def n_blocks(self) -> int:
        return self.partition.n_blocks

    @cached_property
    def matrix(self) -> np.ndarray:
        lab = self.partition.labels
        w = self.space.w
        same = (lab[:, None] == lab[None, :]).astype(float)
        mass = same @ w
        mat = same * w[None, :] / mass[:, None]
        mat.flags.writeable = False
        return mat

    def __call__(self, f) -> np.ndarray:
        f = self.space.check(f)
        return f @ self.matrix.T

    def block_values(self, f) -> np.ndarray:
        """Block averages, shape ``(..., n_blocks)``."""
        f = self.space.check(f)
        return self(f)[..., [b[0] for b in self.partition.blocks]]

    def broadcast(self, block_vals) -> np.ndarray:
        return np.asarray(block_vals, dtype=float)[..., self.partition.labels]

    def block_max(self, f) -> np.ndarray:
        """Per-block maximum of ``f`` broadcast back over the block."""
        f = self.space.check(f)
        out = np.empty_like(f)
        for b in self.partition.blocks:
            idx = list(b)
            out[..., idx] = f[..., idx].max(axis=-1, keepdims=True)
        return out

    def block_min(self, f) -> np.ndarray:
        return -self.block_max(-np.asarray(f, dtype=float))

    def in_range(self, f, tol: float | None = None) -> bool:
        f = self.space.check(f)
        if tol is None:
            tol = 1e-9 * max(1.0, float(np.max(np.abs(f))) if f.size else 1.0)
        return self.partition.is_constant_on_blocks(f, tol)


def as_partition(space: SampleSpace, partition) -> Partition:
    if isinstance(partition, Partition):
        return partition
    return Partition(tuple(tuple(b) for b in partition), space.size)


def cond_exp(space: SampleSpace, partition) -> CondExpOperator:
    return CondExpOperator(space, as_partition(space, partition))


def global_mean(space: SampleSpace) -> CondExpOperator:
    return CondExpOperator(space, Partition.trivial(space.size))


def identity_operator(space: SampleSpace) -> CondExpOperator:
    return CondExpOperator(space, Partition.discrete(space.size))


def is_compatible(S: CondExpOperator, T: CondExpOperator) -> bool:
    """Whether ``ST = TS = T``, i.e. ``S``'s partition refines ``T``'s.

    The combinatorial answer is cross-checked against the operator identity;
    a disagreement indicates a bug and raises ``AssertionError``.
    """
    if S.space != T.space:
        raise SpaceMismatch("operators act on different spaces")
    combinatorial = S.partition.refines(T.partition)
    ms, mt = S.matrix, T.matrix
    numeric = np.allclose(ms @ mt, mt, atol=1e-12, rtol=0) and np.allclose(
        mt @ ms, mt, atol=1e-12, rtol=0
    )
    if combinatorial != numeric:
        raise AssertionError(
            "compatibility self-check failed: refinement says "
            f"{combinatorial}, operator identity says {numeric}"
        )
    return combinatorial


@dataclass(frozen=True, eq=False)
class BandProjection:
    """Multiplication by a 0/1 indicator."""

    indicator: np.ndarray

    def __post_init__(self):
        ind = np.asarray(self.indicator, dtype=float).copy()
        if not np.all((ind == 0.0) | (ind == 1.0)):
            raise ValidationError("band projection indicator must be 0/1 valued")
        ind.flags.writeable = False
        object.__setattr__(self, "indicator", ind)

    def __call__(self, f) -> np.ndarray:
        return self.indicator * np.asarray(f, dtype=float)

    def __eq__(self, other) -> bool:
        return isinstance(other, BandProjection) and np.array_equal(
            self.indicator, other.indicator
        )

    def __hash__(self) -> int:
        return hash(self.indicator.tobytes())

    def compose(self, other: "BandProjection") -> "BandProjection":
        return BandProjection(self.indicator * other.indicator)

    def complement(self) -> "BandProjection":
        return BandProjection(1.0 - self.indicator)

    def belongs_to(self, S: CondExpOperator) -> bool:
        """``P`` is in ``B(S)`` iff ``Pe`` is in the range of ``S``."""
        return S.partition.is_constant_on_blocks(self.indicator)


def positive_part_projection(g) -> BandProjection:
    """Projection onto the band generated by ``g^+``: the indicator of ``{g > 0}``."""
    g = np.asarray(g, dtype=float)
    return BandProjection((g > 0).astype(float))


def multiply(f, g) -> np.ndarray:
    f = np.asarray(f, dtype=float)
    g = np.asarray(g, dtype=float)
    if f.shape != g.shape:
        raise SpaceMismatch(f"cannot multiply shapes {f.shape} and {g.shape}")
    return f * g


def sqrt_exact(f) -> np.ndarray:
    f = np.asarray(f, dtype=float)
    if np.any(f < 0):
        raise NegativeInput("square root of a vector with negative components")
    return np.sqrt(f)


def _dyadic_sum(f: np.ndarray, n: int, coeff, dense: bool) -> np.ndarray:
    scale = 2.0**n
    e = np.ones_like(f)
    top = n * (1 << n)
    if dense:
        ks = range(top)
    else:
        # Only levels k with k <= f*2^n < k+1 for some atom give a nonzero
        # band; neighbours are included as a guard against rounding.
        base = np.floor(f[f < n] * scale).astype(np.int64)
        cand = np.unique(np.concatenate([base - 1, base, base + 1]))
        ks = [int(k) for k in cand if 0 <= k < top]
    out = np.zeros_like(f)
    for k in ks:
        below_next = positive_part_projection((k + 1) / scale * e - f)
        below_this = positive_part_projection(k / scale * e - f)
        out += coeff(k / scale) * below_next(below_this.complement()(e))
    capped = positive_part_projection(n * e - f).complement()
    out += coeff(float(n)) * capped(e)
    return out


def dyadic_lower(f, n: int, dense: bool = False) -> np.ndarray:
    """The dyadic step approximation ``f_n`` with ``f_n`` increasing to ``f``."""
    f = np.asarray(f, dtype=float)
    if np.any(f < 0):
        raise NegativeInput("dyadic approximation needs f >= 0")
    if n < 1:
        raise ValueError("level n must be a positive integer")
    return _dyadic_sum(f, n, lambda x: x, dense)


def sqrt_dyadic(f, n: int, dense: bool = False) -> np.ndarray:
    """Square root of the level-``n`` dyadic approximation of ``f >= 0``.

    Built from band projections: on the band where ``k/2^n <= f < (k+1)/2^n``
    the value is ``sqrt(k/2^n)``, and ``sqrt(n)`` where ``f >= n``. The result
    increases with ``n`` and stays below ``sqrt(f)``; for ``f <= n e`` the gap
    is at most ``2^(-n/2)``.

    With ``dense=True`` all ``n*2^n`` terms are summed, including the ones
    whose band is zero; otherwise only levels that some atom occupies.
    """
    f = np.asarray(f, dtype=float)
    if np.any(f < 0):
        raise NegativeInput("square root of a vector with negative components")
    if n < 1:
        raise ValueError("level n must be a positive integer")
    return _dyadic_sum(f, n, np.sqrt, dense)
