"""Linear classifier with its closed-form empirical risk minimizer.

The working loss is the Gaussian negative log-likelihood
``l(theta, (x, y)) = ||x - y*theta||^2 / (2 * noise_var)``, whose minimizer
over a sample is the label-weighted mean ``theta = mean_i(y_i * x_i)``.  The
zero-one loss is available for risk evaluation behind the ``Loss`` flag.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .mixture import (
    DimensionMismatchError,
    EmptyDatasetError,
    LabeledDataset,
    LabeledPoint,
    MixtureParams,
    sample_dataset,
)


class Loss(Enum):
    NLL = "nll"
    ZERO_ONE = "zero-one"


@dataclass(frozen=True, eq=False)
class LinearClassifier:
    """Halfspace predictor sign(theta . x); noise_var scales the NLL loss."""

    theta: np.ndarray
    noise_var: float

    def __post_init__(self) -> None:
        theta = np.asarray(self.theta, dtype=np.float64)
        if theta.ndim != 1 or theta.shape[0] < 1:
            raise ValueError(f"theta must be a nonempty vector, got shape {theta.shape}")
        if not (math.isfinite(self.noise_var) and self.noise_var > 0.0):
            raise ValueError(f"noise_var must be positive, got {self.noise_var!r}")
        locked = theta.copy()
        locked.setflags(write=False)
        object.__setattr__(self, "theta", locked)
        object.__setattr__(self, "noise_var", float(self.noise_var))

    @property
    def dim(self) -> int:
        return self.theta.shape[0]


@dataclass(frozen=True)
class RiskReport:
    """Train/test risk pair with their absolute gap."""

    train_risk: float
    test_risk: float
    gen_error: float
    loss_kind: Loss

    def __post_init__(self) -> None:
        if self.gen_error != abs(self.test_risk - self.train_risk):
            raise ValueError("gen_error must equal |test_risk - train_risk| exactly")

    @classmethod
    def from_risks(cls, train_risk: float, test_risk: float, loss_kind: Loss) -> "RiskReport":
        return cls(
            train_risk=train_risk,
            test_risk=test_risk,
            gen_error=abs(test_risk - train_risk),
            loss_kind=loss_kind,
        )


def fit_erm(data: LabeledDataset, noise_var: float) -> LinearClassifier:
    """Closed-form risk minimizer: theta = mean over all points of y * x.

    Real and synthetic points enter identically.  The mean uses numpy's
    pairwise summation over the dataset's stored order, so refitting the same
    dataset is bit-stable.
    """
    if len(data) == 0:
        raise EmptyDatasetError("fit_erm needs a nonempty dataset")
    theta = np.mean(data.y[:, None] * data.x, axis=0)
    return LinearClassifier(theta=theta, noise_var=noise_var)


def nll_loss(clf: LinearClassifier, point: LabeledPoint) -> float:
    """Single-point loss ||x - y*theta||^2 / (2 * noise_var)."""
    x = np.asarray(point.x, dtype=np.float64)
    if x.shape != (clf.dim,):
        raise DimensionMismatchError(
            f"point has shape {x.shape}, classifier dimension is {clf.dim}"
        )
    residual = x - point.y * clf.theta
    return float(residual @ residual) / (2.0 * clf.noise_var)


def point_losses(clf: LinearClassifier, data: LabeledDataset, loss_kind: Loss) -> np.ndarray:
    """Per-point losses in dataset order."""
    if data.dim != clf.dim:
        raise DimensionMismatchError(
            f"data dimension {data.dim} does not match classifier dimension {clf.dim}"
        )
    if loss_kind is Loss.NLL:
        residual = data.x - data.y[:, None] * clf.theta[None, :]
        return np.sum(residual * residual, axis=1) / (2.0 * clf.noise_var)
    scores = data.x @ clf.theta
    predicted = np.where(scores > 0.0, 1, -1)
    return (predicted != data.y).astype(np.float64)


def empirical_risk(clf: LinearClassifier, data: LabeledDataset, loss_kind: Loss = Loss.NLL) -> float:
    """Mean of the chosen loss over all points (pairwise summation)."""
    if len(data) == 0:
        raise EmptyDatasetError("empirical_risk needs a nonempty dataset")
    return float(np.mean(point_losses(clf, data, loss_kind)))


def mc_true_risk(
    clf: LinearClassifier,
    params: MixtureParams,
    test_count: int,
    seed: int,
    loss_kind: Loss = Loss.NLL,
) -> float:
    """Monte Carlo estimate of the population risk on a fresh seeded sample."""
    if not isinstance(test_count, int) or isinstance(test_count, bool) or test_count < 1:
        raise ValueError(f"test_count must be a positive integer, got {test_count!r}")
    if params.dim != clf.dim:
        raise DimensionMismatchError(
            f"params dimension {params.dim} does not match classifier dimension {clf.dim}"
        )
    test_set = sample_dataset(params, test_count, seed)
    return empirical_risk(clf, test_set, loss_kind)
