"""Ground truth data model: a two-class isotropic Gaussian mixture.

Labels are uniform on {-1, +1} and inputs follow x | y ~ N(y * mean,
noise_var * I).  Datasets carry a per-point provenance tag (measured vs
generated) so augmented training sets can report both counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import IntEnum
from typing import Iterator, Sequence

import numpy as np

from .rng import stream


class Source(IntEnum):
    """Provenance of a data point."""

    REAL = 0
    SYNTHETIC = 1


class EmptyDatasetError(ValueError):
    """Raised by operations that need at least one data point."""


class DimensionMismatchError(ValueError):
    """Raised when a vector does not match the data dimension."""


def standard_mean(dim: int) -> np.ndarray:
    """Unit-norm mean vector with equal coordinates, every entry 1/sqrt(dim)."""
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise ValueError(f"dim must be a positive integer, got {dim!r}")
    return np.full(dim, 1.0 / math.sqrt(dim), dtype=np.float64)


def _readonly(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=np.float64, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class MixtureParams:
    """Mixture parameters; the label marginal is always uniform on {-1, +1}."""

    dim: int
    mean: np.ndarray
    noise_var: float

    def __post_init__(self) -> None:
        if not isinstance(self.dim, int) or isinstance(self.dim, bool) or self.dim < 1:
            raise ValueError(f"dim must be a positive integer, got {self.dim!r}")
        if not (math.isfinite(self.noise_var) and self.noise_var > 0.0):
            raise ValueError(f"noise_var must be positive, got {self.noise_var!r}")
        mean = np.asarray(self.mean, dtype=np.float64)
        if mean.shape != (self.dim,):
            raise DimensionMismatchError(
                f"mean must have shape ({self.dim},), got {mean.shape}"
            )
        object.__setattr__(self, "mean", _readonly(mean))
        object.__setattr__(self, "noise_var", float(self.noise_var))

    @property
    def noise_std(self) -> float:
        return math.sqrt(self.noise_var)

    @classmethod
    def standard(cls, dim: int, noise_var: float) -> "MixtureParams":
        """Mixture with the equal-coordinate unit-norm mean."""
        return cls(dim=dim, mean=standard_mean(dim), noise_var=noise_var)


@dataclass(frozen=True, eq=False)
class LabeledPoint:
    x: np.ndarray
    y: int
    source: Source


@dataclass(frozen=True, eq=False)
class LabeledDataset:
    """Ordered labeled sample stored as arrays.

    ``x`` has shape (n, dim), ``y`` holds labels in {-1, +1}, and ``source``
    holds ``Source`` tags.  Instances are immutable; concatenation happens by
    building a new dataset.
    """

    x: np.ndarray
    y: np.ndarray
    source: np.ndarray

    def __post_init__(self) -> None:
        x = np.asarray(self.x, dtype=np.float64)
        y = np.asarray(self.y, dtype=np.int64)
        source = np.asarray(self.source, dtype=np.int64)
        if x.ndim != 2:
            raise ValueError(f"x must be 2-dimensional, got shape {x.shape}")
        n = x.shape[0]
        if y.shape != (n,) or source.shape != (n,):
            raise ValueError(
                f"length mismatch: x has {n} rows, y {y.shape}, source {source.shape}"
            )
        if n and not np.all(np.abs(y) == 1):
            raise ValueError("labels must be -1 or +1")
        if n and not np.all((source == Source.REAL) | (source == Source.SYNTHETIC)):
            raise ValueError("source tags must be Source.REAL or Source.SYNTHETIC")
        for name, arr in (("x", x), ("y", y), ("source", source)):
            locked = arr.copy()
            locked.setflags(write=False)
            object.__setattr__(self, name, locked)

    def __len__(self) -> int:
        return self.x.shape[0]

    def __getitem__(self, index: int) -> LabeledPoint:
        return LabeledPoint(
            x=self.x[index],
            y=int(self.y[index]),
            source=Source(int(self.source[index])),
        )

    def __iter__(self) -> Iterator[LabeledPoint]:
        for i in range(len(self)):
            yield self[i]

    @property
    def dim(self) -> int:
        return self.x.shape[1]

    @property
    def real_count(self) -> int:
        return int(np.sum(self.source == Source.REAL))

    @property
    def synthetic_count(self) -> int:
        return int(np.sum(self.source == Source.SYNTHETIC))

    @property
    def total_count(self) -> int:
        return len(self)

    @classmethod
    def from_points(cls, points: Sequence[LabeledPoint], dim: int | None = None) -> "LabeledDataset":
        if not points:
            if dim is None:
                raise ValueError("dim is required for an empty dataset")
            return cls(
                x=np.empty((0, dim)), y=np.empty(0, dtype=np.int64), source=np.empty(0, dtype=np.int64)
            )
        dims = {np.asarray(p.x).shape for p in points}
        if len(dims) != 1 or len(next(iter(dims))) != 1:
            raise DimensionMismatchError(f"points carry inconsistent shapes: {sorted(dims)}")
        return cls(
            x=np.stack([np.asarray(p.x, dtype=np.float64) for p in points]),
            y=np.array([p.y for p in points], dtype=np.int64),
            source=np.array([int(p.source) for p in points], dtype=np.int64),
        )


def sample_dataset(params: MixtureParams, count: int, seed: int) -> LabeledDataset:
    """Draw ``count`` i.i.d. points from the mixture, tagged REAL.

    Labels come first from the stream (uniform on {-1, +1}), then one
    standard normal block of shape (count, dim); x = y * mean + std * g.
    The output is a pure function of (params, count, seed).
    """
    if not isinstance(count, int) or isinstance(count, bool) or count < 0:
        raise ValueError(f"count must be a nonnegative integer, got {count!r}")
    rng = stream(seed)
    y = rng.integers(0, 2, size=count, dtype=np.int64) * 2 - 1
    g = rng.standard_normal((count, params.dim))
    x = y[:, None] * params.mean[None, :] + params.noise_std * g
    return LabeledDataset(x=x, y=y, source=np.zeros(count, dtype=np.int64))


def zero_one_error(theta: np.ndarray, data: LabeledDataset) -> float:
    """Fraction of points whose predicted sign differs from the label.

    Prediction is sign(theta . x) with the tie sign(0) = -1, so a zero score
    counts as predicting the negative class.
    """
    if len(data) == 0:
        raise EmptyDatasetError("zero_one_error needs a nonempty dataset")
    theta = np.asarray(theta, dtype=np.float64)
    if theta.shape != (data.dim,):
        raise DimensionMismatchError(
            f"theta has shape {theta.shape}, data dimension is {data.dim}"
        )
    scores = data.x @ theta
    predicted = np.where(scores > 0.0, 1, -1)
    return float(np.mean(predicted != data.y))
