"""Stability-based generalization bound evaluators.

Three evaluators, all with every suppressed constant set to 1 and natural
logarithms throughout:

* ``eval_theorem2``: the classical i.i.d. bound
  ``log(m) * beta * log(1/delta) + M * sqrt((1/m) * log(1/delta))``.

* ``eval_theorem3``: the augmented-sample bound from abstract inputs,
  reported as a three-part breakdown (divergence, sqrt-scale, log-scale):

      (mg/mt) * M * tv
      + [M*(sqrt(ms) + sqrt(mg)) + ms*sqrt(mg)*beta] / mt * sqrt(log(1/delta))
      + [beta*(ms*log ms + mg*log mg) + ms*log(ms)*M*tau] / mt * log(1/delta)

  With ``mg = 0`` the synthetic-sample stability ``tau`` is vacuous (the
  total variation between empty product laws is zero), and the evaluator
  computes the surviving terms through the identical expressions used by
  ``eval_theorem2`` so the two agree bit for bit.

* ``eval_bgmm_bound``: the explicit five-term mixture-model form, grouped
  into the same three-part breakdown (term 1 | terms 2-3 | terms 4-5).
  ``HIGH_PROB`` mode keeps every log(a/delta).  ``PREDICT`` mode applies the
  delta-free substitution log(a/delta) -> log(a), or -> 1 when a == 1 (so
  log(1/delta) -> 1), making the output independent of delta.  The two
  capped factors are evaluated as printed, cap(x) = max(1, x); pass
  ``min_cap=True`` to compare against the clamped variant min(1, x).

Conventions: 0 * log(0) = 0 for empty-sample terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable

from .generator import as_ratio, synthetic_count


class BoundMode(Enum):
    HIGH_PROB = "high-prob"
    PREDICT = "predict"


def _check_count(value: int, name: str, minimum: int) -> None:
    if not isinstance(value, int) or isinstance(value, bool) or value < minimum:
        raise ValueError(f"{name} must be an integer >= {minimum}, got {value!r}")


def _check_delta(delta: float) -> None:
    if not (isinstance(delta, (int, float)) and not isinstance(delta, bool)):
        raise ValueError(f"delta must be a number, got {delta!r}")
    if not (0.0 < float(delta) < 1.0):
        raise ValueError(f"delta must lie in (0, 1), got {delta!r}")


def _check_nonneg(value: float, name: str) -> None:
    if not (isinstance(value, (int, float)) and not isinstance(value, bool)):
        raise ValueError(f"{name} must be a number, got {value!r}")
    if not (math.isfinite(float(value)) and float(value) >= 0.0):
        raise ValueError(f"{name} must be finite and nonnegative, got {value!r}")


@dataclass(frozen=True)
class BoundInputs:
    """Abstract inputs for the augmented-sample bound."""

    real_count: int
    synthetic_count: int
    loss_bound: float
    beta: float
    tv: float
    tau: float
    delta: float

    def __post_init__(self) -> None:
        _check_count(self.real_count, "real_count", 1)
        _check_count(self.synthetic_count, "synthetic_count", 0)
        _check_nonneg(self.loss_bound, "loss_bound")
        if self.loss_bound <= 0.0:
            raise ValueError(f"loss_bound must be positive, got {self.loss_bound!r}")
        _check_nonneg(self.beta, "beta")
        _check_nonneg(self.tau, "tau")
        _check_nonneg(self.tv, "tv")
        if self.tv > 1.0:
            raise ValueError(f"tv must lie in [0, 1], got {self.tv!r}")
        _check_delta(self.delta)


@dataclass(frozen=True)
class BoundBreakdown:
    """Bound value split into divergence, sqrt-scale and log-scale parts."""

    divergence_term: float
    sqrt_term: float
    log_term: float
    total: float

    def __post_init__(self) -> None:
        for name in ("divergence_term", "sqrt_term", "log_term"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be nonnegative")
        if self.total != self.divergence_term + self.sqrt_term + self.log_term:
            raise ValueError("total must equal the sum of the three terms exactly")


def _breakdown(divergence: float, sqrt_part: float, log_part: float) -> BoundBreakdown:
    return BoundBreakdown(
        divergence_term=divergence,
        sqrt_term=sqrt_part,
        log_term=log_part,
        total=divergence + sqrt_part + log_part,
    )


def eval_theorem2(count: float, loss_bound: float, beta: float, delta: float) -> float:
    """Classical i.i.d. stability bound with unit constants.

    ``count`` may be any real >= 1; integer sizes are the normal case but the
    formula itself is well defined in between.
    """
    if isinstance(count, bool) or not isinstance(count, (int, float)):
        raise ValueError(f"count must be a number, got {count!r}")
    if not (math.isfinite(float(count)) and count >= 1):
        raise ValueError(f"count must be >= 1, got {count!r}")
    _check_nonneg(loss_bound, "loss_bound")
    _check_nonneg(beta, "beta")
    _check_delta(delta)
    confidence = math.log(1.0 / delta)
    return math.log(count) * beta * confidence + loss_bound * math.sqrt(
        (1.0 / count) * confidence
    )


def _xlogx(count: int) -> float:
    return 0.0 if count == 0 else count * math.log(count)


def eval_theorem3(inputs: BoundInputs) -> BoundBreakdown:
    """Augmented-sample stability bound from abstract inputs.

    At synthetic_count = 0 the breakdown reproduces ``eval_theorem2`` exactly
    (same floating-point expressions), with a zero divergence term.
    """
    ms = inputs.real_count
    mg = inputs.synthetic_count
    loss_bound = float(inputs.loss_bound)
    beta = float(inputs.beta)
    confidence = math.log(1.0 / inputs.delta)
    if mg == 0:
        sqrt_part = loss_bound * math.sqrt((1.0 / ms) * confidence)
        log_part = math.log(ms) * beta * confidence
        return _breakdown(0.0, sqrt_part, log_part)
    mt = ms + mg
    divergence = (mg / mt) * loss_bound * float(inputs.tv)
    sqrt_part = (
        (loss_bound * (math.sqrt(ms) + math.sqrt(mg)) + ms * math.sqrt(mg) * beta)
        / mt
        * math.sqrt(confidence)
    )
    log_part = (
        (beta * (_xlogx(ms) + _xlogx(mg)) + _xlogx(ms) * loss_bound * float(inputs.tau))
        / mt
        * confidence
    )
    return _breakdown(divergence, sqrt_part, log_part)


def _scaled_log(numerator: float, delta: float, mode: BoundMode) -> float:
    """log(numerator / delta), or its delta-free replacement in PREDICT mode."""
    if mode is BoundMode.HIGH_PROB:
        return math.log(numerator / delta)
    return 1.0 if numerator == 1 else math.log(numerator)


def eval_bgmm_bound(
    dim: int,
    real_count: int,
    synthetic_count: int,
    delta: float,
    mode: BoundMode = BoundMode.PREDICT,
    *,
    min_cap: bool = False,
) -> BoundBreakdown:
    """Explicit mixture-model bound, grouped as divergence | sqrt | log parts.

    The five underlying terms, with L(a) = log(a/delta) (or its PREDICT
    replacement) and cap = max(1, .) by default:

        t1 = (mg/mt) * (d + L(mt)) * cap(sqrt((d/ms) * L(d)))
        t2 = ((sqrt(ms) + sqrt(mg)) / mt) * (d + L(mt)) * sqrt(L(1))
        t3 = (ms * sqrt(mg) / mt^2) * (d + L(mt)) * sqrt(L(1))
        t4 = ((ms*log ms + mg*log mg) / mt^2) * (d + L(mt)) * L(1)
        t5 = (ms*log(ms) / mt) * (d + L(mt)) * cap((sqrt(mg*d)/ms) * L(ms*d)) * L(1)

    Breakdown: divergence = t1, sqrt = t2 + t3, log = t4 + t5.
    """
    _check_count(dim, "dim", 1)
    _check_count(real_count, "real_count", 1)
    _check_count(synthetic_count, "synthetic_count", 0)
    _check_delta(delta)
    if not isinstance(mode, BoundMode):
        raise ValueError(f"mode must be a BoundMode, got {mode!r}")
    ms, mg = real_count, synthetic_count
    mt = ms + mg
    cap = min if min_cap else max
    scale = dim + _scaled_log(float(mt), delta, mode)
    confidence = _scaled_log(1.0, delta, mode)
    tv_factor = cap(1.0, math.sqrt((dim / ms) * _scaled_log(float(dim), delta, mode)))
    tau_factor = cap(
        1.0, (math.sqrt(mg * dim) / ms) * _scaled_log(float(ms * dim), delta, mode)
    )
    t1 = (mg / mt) * scale * tv_factor
    t2 = ((math.sqrt(ms) + math.sqrt(mg)) / mt) * scale * math.sqrt(confidence)
    t3 = (ms * math.sqrt(mg) / mt**2) * scale * math.sqrt(confidence)
    t4 = ((_xlogx(ms) + _xlogx(mg)) / mt**2) * scale * confidence
    t5 = (_xlogx(ms) / mt) * scale * tau_factor * confidence
    return _breakdown(t1, t2 + t3, t4 + t5)


@dataclass(frozen=True)
class OptimalAugmentation:
    """Grid minimizer of the mixture-model bound."""

    gamma: Fraction
    synthetic_count: int
    bound: BoundBreakdown


def optimal_mg(
    dim: int,
    real_count: int,
    delta: float,
    mode: BoundMode,
    gamma_grid: Iterable[Fraction | int | float | str],
    *,
    min_cap: bool = False,
) -> OptimalAugmentation:
    """Pick the grid ratio minimizing the bound total; ties go to the smallest."""
    gammas = sorted({as_ratio(g) for g in gamma_grid})
    if not gammas:
        raise ValueError("gamma_grid must be nonempty")
    best: OptimalAugmentation | None = None
    for gamma in gammas:
        count = synthetic_count(real_count, gamma)
        candidate = eval_bgmm_bound(dim, real_count, count, delta, mode, min_cap=min_cap)
        if best is None or candidate.total < best.bound.total:
            best = OptimalAugmentation(gamma=gamma, synthetic_count=count, bound=candidate)
    assert best is not None
    return best
