"""Conditional Gaussian generator fitted per class, and dataset augmentation.

Fitting estimates one mean per class and a single pooled diagonal variance:

    mean_hat_y  = sum_{i: y_i = y} x_i / n_y
    var_hat_k   = sum_y (n_y / n) * sum_{i: y_i = y} (x_ik - mean_hat_yk)^2 / (n_y - 1)

Both are unbiased for the mixture's class means and noise variance.  Sampling
draws labels uniformly on {-1, +1} and then x | y ~ N(mean_hat_y, diag(var)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .mixture import DimensionMismatchError, LabeledDataset, Source
from .rng import stream


class InsufficientClassData(ValueError):
    """Raised when a class has fewer than two points; callers should redraw."""


@dataclass(frozen=True, eq=False)
class FittedGenerator:
    """Estimated class means, pooled per-dimension variances, class counts."""

    mean_pos: np.ndarray
    mean_neg: np.ndarray
    var_diag: np.ndarray
    class_counts: tuple[int, int]

    def __post_init__(self) -> None:
        for name in ("mean_pos", "mean_neg", "var_diag"):
            arr = np.asarray(getattr(self, name), dtype=np.float64).copy()
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if not (self.mean_pos.shape == self.mean_neg.shape == self.var_diag.shape):
            raise DimensionMismatchError("generator parameter vectors disagree in shape")
        if np.any(self.var_diag < 0.0):
            raise ValueError("var_diag entries must be nonnegative")

    @property
    def dim(self) -> int:
        return self.mean_pos.shape[0]


def fit_conditional_gmm(data: LabeledDataset) -> FittedGenerator:
    """Estimate generator parameters from a labeled sample.

    Requires at least two points in each class so the within-class variance
    denominators (n_y - 1) are valid; otherwise raises InsufficientClassData
    and the caller is expected to redraw the sample.
    """
    positive = data.x[data.y == 1]
    negative = data.x[data.y == -1]
    n_pos, n_neg = positive.shape[0], negative.shape[0]
    if n_pos < 2 or n_neg < 2:
        raise InsufficientClassData(
            f"need at least 2 points per class, got {n_pos} positive / {n_neg} negative"
        )
    n = len(data)
    mean_pos = positive.mean(axis=0)
    mean_neg = negative.mean(axis=0)
    var_diag = (n_pos / n) * np.sum((positive - mean_pos) ** 2, axis=0) / (n_pos - 1)
    var_diag = var_diag + (n_neg / n) * np.sum((negative - mean_neg) ** 2, axis=0) / (n_neg - 1)
    return FittedGenerator(
        mean_pos=mean_pos,
        mean_neg=mean_neg,
        var_diag=var_diag,
        class_counts=(n_pos, n_neg),
    )


def sample_synthetic(gen: FittedGenerator, count: int, seed: int) -> LabeledDataset:
    """Draw ``count`` labeled points from the fitted generator, tagged SYNTHETIC.

    Zero variance entries are honored exactly: those coordinates equal the
    class mean.  Deterministic given (gen, count, seed).
    """
    if not isinstance(count, int) or isinstance(count, bool) or count < 0:
        raise ValueError(f"count must be a nonnegative integer, got {count!r}")
    rng = stream(seed)
    y = rng.integers(0, 2, size=count, dtype=np.int64) * 2 - 1
    g = rng.standard_normal((count, gen.dim))
    means = np.where((y == 1)[:, None], gen.mean_pos[None, :], gen.mean_neg[None, :])
    x = means + np.sqrt(gen.var_diag)[None, :] * g
    return LabeledDataset(x=x, y=y, source=np.full(count, int(Source.SYNTHETIC), dtype=np.int64))


def as_ratio(value: Fraction | int | float | str) -> Fraction:
    """Canonicalize an augmentation ratio to an exact nonnegative rational.

    Floats are read through their shortest decimal representation, so 0.1
    becomes exactly 1/10.
    """
    if isinstance(value, bool):
        raise ValueError("ratio must be a number, got a bool")
    if isinstance(value, Fraction):
        ratio = value
    elif isinstance(value, int):
        ratio = Fraction(value)
    elif isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"ratio must be finite, got {value!r}")
        ratio = Fraction(str(value))
    elif isinstance(value, str):
        ratio = Fraction(value)
    else:
        raise ValueError(f"cannot interpret {value!r} as a ratio")
    if ratio < 0:
        raise ValueError(f"ratio must be nonnegative, got {ratio}")
    return ratio


def synthetic_count(real_count: int, gamma: Fraction | int | float | str) -> int:
    """Number of synthetic points for a real sample of size ``real_count``.

    Exact rational rounding of gamma * real_count to the nearest integer,
    ties to even.
    """
    if not isinstance(real_count, int) or isinstance(real_count, bool) or real_count < 0:
        raise ValueError(f"real_count must be a nonnegative integer, got {real_count!r}")
    return int(round(as_ratio(gamma) * real_count))


def augment(
    real: LabeledDataset,
    gen: FittedGenerator,
    gamma: Fraction | int | float | str,
    seed: int,
) -> LabeledDataset:
    """Concatenate the real sample with freshly drawn synthetic points.

    The real points form an unmodified prefix; round(gamma * len(real))
    synthetic points follow.  With zero synthetic points the input dataset is
    returned as is.
    """
    if real.synthetic_count:
        raise ValueError("augment expects a dataset of REAL points only")
    if gen.dim != real.dim:
        raise DimensionMismatchError(
            f"generator dimension {gen.dim} does not match data dimension {real.dim}"
        )
    count = synthetic_count(len(real), gamma)
    if count == 0:
        return real
    synthetic = sample_synthetic(gen, count, seed)
    return LabeledDataset(
        x=np.concatenate([real.x, synthetic.x], axis=0),
        y=np.concatenate([real.y, synthetic.y]),
        source=np.concatenate([real.source, synthetic.source]),
    )
