"""Divergences between the fitted mixture and the ground truth.

The closed form uses the shared uniform label marginal to reduce the joint KL
to class-conditional Gaussian KLs:

    kl = sum_y (1/2) sum_k (1/2) * [ r_k - 1 - log(r_k)
                                     + (mean_hat_{y,k} - y*mu_k)^2 / s ]

with r_k = var_hat_k / s and s the true noise variance (natural log).  A
trapezoid-rule integrator over a wide 1-D grid serves as an independent
oracle for the closed form, and for checking that the Pinsker conversion
tv <= sqrt(kl / 2) really dominates the exact total variation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.integrate import trapezoid

from .generator import FittedGenerator
from .mixture import DimensionMismatchError, MixtureParams


class NonPositiveVariance(ValueError):
    """Raised when a fitted variance is not strictly positive."""


class DivergenceMethod(Enum):
    CLOSED_FORM = "closed-form"
    NUMERIC_1D = "numeric-1d"


@dataclass(frozen=True)
class IntegrationGrid:
    """Uniform grid spec: node count and half-width in units of the largest std."""

    nodes: int = 200_001
    span_sigmas: float = 10.0

    def __post_init__(self) -> None:
        if not isinstance(self.nodes, int) or isinstance(self.nodes, bool) or self.nodes < 2:
            raise ValueError(f"nodes must be an integer >= 2, got {self.nodes!r}")
        if not (math.isfinite(self.span_sigmas) and self.span_sigmas > 0.0):
            raise ValueError(f"span_sigmas must be positive, got {self.span_sigmas!r}")


@dataclass(frozen=True)
class DivergenceReport:
    kl: float
    tv: float
    method: DivergenceMethod

    def __post_init__(self) -> None:
        if self.kl < 0.0:
            raise ValueError(f"kl must be nonnegative, got {self.kl}")
        if not 0.0 <= self.tv <= 1.0:
            raise ValueError(f"tv must lie in [0, 1], got {self.tv}")


def _check_match(gen: FittedGenerator, params: MixtureParams) -> None:
    if gen.dim != params.dim:
        raise DimensionMismatchError(
            f"generator dimension {gen.dim} does not match mixture dimension {params.dim}"
        )


def kl_learned_vs_true(gen: FittedGenerator, params: MixtureParams) -> float:
    """KL divergence (nats) of the fitted joint law from the true joint law."""
    _check_match(gen, params)
    if np.any(gen.var_diag <= 0.0):
        raise NonPositiveVariance("all fitted variances must be strictly positive")
    ratio = gen.var_diag / params.noise_var
    shared = ratio - 1.0 - np.log(ratio)
    total = 0.0
    for sign, mean_hat in ((1.0, gen.mean_pos), (-1.0, gen.mean_neg)):
        offset = mean_hat - sign * params.mean
        total += 0.25 * float(np.sum(shared + offset * offset / params.noise_var))
    return total


def tv_pinsker(kl: float) -> float:
    """Pinsker upper bound on total variation, clamped to the TV range [0, 1]."""
    if not (math.isfinite(kl) and kl >= 0.0):
        raise ValueError(f"kl must be finite and nonnegative, got {kl!r}")
    return min(1.0, math.sqrt(kl / 2.0))


def _grid_nodes(gen: FittedGenerator, params: MixtureParams, grid: IntegrationGrid) -> np.ndarray:
    center = max(
        abs(float(gen.mean_pos[0])),
        abs(float(gen.mean_neg[0])),
        abs(float(params.mean[0])),
    )
    widest = max(math.sqrt(float(np.max(gen.var_diag))), params.noise_std)
    half_width = center + grid.span_sigmas * widest
    return np.linspace(-half_width, half_width, grid.nodes)


def _log_pdf(xs: np.ndarray, mean: float, var: float) -> np.ndarray:
    return -0.5 * math.log(2.0 * math.pi * var) - (xs - mean) ** 2 / (2.0 * var)


def _require_1d(gen: FittedGenerator, params: MixtureParams) -> None:
    _check_match(gen, params)
    if params.dim != 1:
        raise DimensionMismatchError("numeric integration is only available for dim = 1")
    if np.any(gen.var_diag <= 0.0):
        raise NonPositiveVariance("all fitted variances must be strictly positive")


def kl_numeric_1d(
    gen: FittedGenerator,
    params: MixtureParams,
    grid: IntegrationGrid = IntegrationGrid(),
) -> float:
    """Trapezoid-rule KL for dim = 1; independent of the closed form."""
    _require_1d(gen, params)
    xs = _grid_nodes(gen, params, grid)
    var = float(gen.var_diag[0])
    total = 0.0
    for sign, mean_hat in ((1.0, gen.mean_pos), (-1.0, gen.mean_neg)):
        log_g = _log_pdf(xs, float(mean_hat[0]), var)
        log_t = _log_pdf(xs, sign * float(params.mean[0]), params.noise_var)
        density = np.exp(log_g)
        total += 0.5 * float(trapezoid(density * (log_g - log_t), xs))
    return total


def tv_numeric_1d(
    gen: FittedGenerator,
    params: MixtureParams,
    grid: IntegrationGrid = IntegrationGrid(),
) -> float:
    """Exact total variation (half L1 of the joint densities) for dim = 1."""
    _require_1d(gen, params)
    xs = _grid_nodes(gen, params, grid)
    var = float(gen.var_diag[0])
    total = 0.0
    for sign, mean_hat in ((1.0, gen.mean_pos), (-1.0, gen.mean_neg)):
        density_g = np.exp(_log_pdf(xs, float(mean_hat[0]), var))
        density_t = np.exp(_log_pdf(xs, sign * float(params.mean[0]), params.noise_var))
        total += 0.25 * float(trapezoid(np.abs(density_g - density_t), xs))
    return min(1.0, total)


def closed_form_report(gen: FittedGenerator, params: MixtureParams) -> DivergenceReport:
    """Closed-form KL with its Pinsker TV bound."""
    kl = kl_learned_vs_true(gen, params)
    return DivergenceReport(kl=kl, tv=tv_pinsker(kl), method=DivergenceMethod.CLOSED_FORM)


def numeric_report_1d(
    gen: FittedGenerator,
    params: MixtureParams,
    grid: IntegrationGrid = IntegrationGrid(),
) -> DivergenceReport:
    """Numerically integrated KL and exact TV for dim = 1."""
    return DivergenceReport(
        kl=kl_numeric_1d(gen, params, grid),
        tv=tv_numeric_1d(gen, params, grid),
        method=DivergenceMethod.NUMERIC_1D,
    )
