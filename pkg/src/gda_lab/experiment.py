"""Seeded Monte Carlo trials and grid sweeps.

One trial: draw a real sample, optionally fit the generator and augment,
fit the classifier on the (augmented) training set, then measure the gap
between its training risk and a fresh Monte Carlo estimate of the true risk.

Every random draw inside a trial comes from its own stream keyed by
(master_seed, dim, real_count, gamma, trial_index, purpose), so trials can be
scheduled on any worker in any order and still produce identical numbers.
Cell statistics are aggregated in trial order in the parent process, which
makes sweep outputs byte-identical across worker counts.

If a drawn real sample leaves a class with fewer than two points (possible at
small sizes), the whole sample is redrawn on the next attempt stream, up to
``MAX_REDRAWS`` times; redraws are counted and reported per cell.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

from .bounds import BoundBreakdown, BoundMode, eval_bgmm_bound
from .classifier import Loss, empirical_risk, fit_erm, mc_true_risk
from .generator import InsufficientClassData, as_ratio, augment, fit_conditional_gmm, synthetic_count
from .mixture import MixtureParams, sample_dataset
from .rng import mix64

MAX_REDRAWS = 1000

_REAL_STREAM = 1
_SYNTH_STREAM = 2
_TEST_STREAM = 3


class RedrawLimitError(RuntimeError):
    """Raised when no valid real sample is found within the redraw budget."""


@dataclass(frozen=True)
class TrialConfig:
    """Everything one trial needs; the trial seed is derived, never stored."""

    dim: int
    real_count: int
    gamma: Fraction
    noise_std: float = 0.6
    test_count: int = 10000
    loss: Loss = Loss.NLL
    master_seed: int = 0
    trial_index: int = 0

    def __post_init__(self) -> None:
        if not isinstance(self.dim, int) or isinstance(self.dim, bool) or self.dim < 1:
            raise ValueError(f"dim must be a positive integer, got {self.dim!r}")
        if (
            not isinstance(self.real_count, int)
            or isinstance(self.real_count, bool)
            or self.real_count < 1
        ):
            raise ValueError(f"real_count must be a positive integer, got {self.real_count!r}")
        object.__setattr__(self, "gamma", as_ratio(self.gamma))
        if not (math.isfinite(self.noise_std) and self.noise_std > 0.0):
            raise ValueError(f"noise_std must be positive, got {self.noise_std!r}")
        if (
            not isinstance(self.test_count, int)
            or isinstance(self.test_count, bool)
            or self.test_count < 1
        ):
            raise ValueError(f"test_count must be a positive integer, got {self.test_count!r}")
        if not isinstance(self.loss, Loss):
            raise ValueError(f"loss must be a Loss, got {self.loss!r}")
        if not isinstance(self.master_seed, int) or self.master_seed < 0:
            raise ValueError(f"master_seed must be a nonnegative integer, got {self.master_seed!r}")
        if not isinstance(self.trial_index, int) or self.trial_index < 0:
            raise ValueError(f"trial_index must be a nonnegative integer, got {self.trial_index!r}")

    @property
    def trial_seed(self) -> int:
        """64-bit stream key, a pure function of the cell and trial index."""
        return mix64(
            self.master_seed,
            self.dim,
            self.real_count,
            self.gamma.numerator,
            self.gamma.denominator,
            self.trial_index,
        )

    @property
    def mixture(self) -> MixtureParams:
        return MixtureParams.standard(self.dim, self.noise_std**2)


@dataclass(frozen=True)
class TrialResult:
    gen_error: float
    train_risk: float
    test_risk: float
    redraws: int


def run_trial(cfg: TrialConfig) -> TrialResult:
    """Run one seeded trial; deterministic given the config."""
    params = cfg.mixture
    base = cfg.trial_seed
    redraws = 0
    if cfg.gamma > 0:
        fitted = None
        for attempt in range(MAX_REDRAWS + 1):
            real = sample_dataset(params, cfg.real_count, mix64(base, _REAL_STREAM, attempt))
            try:
                fitted = fit_conditional_gmm(real)
                break
            except InsufficientClassData:
                redraws += 1
        if fitted is None:
            raise RedrawLimitError(
                f"no sample with two points per class in {MAX_REDRAWS + 1} attempts "
                f"(real_count={cfg.real_count})"
            )
        train_set = augment(real, fitted, cfg.gamma, mix64(base, _SYNTH_STREAM))
    else:
        train_set = sample_dataset(params, cfg.real_count, mix64(base, _REAL_STREAM, 0))
    clf = fit_erm(train_set, params.noise_var)
    train_risk = empirical_risk(clf, train_set, cfg.loss)
    test_risk = mc_true_risk(clf, params, cfg.test_count, mix64(base, _TEST_STREAM), cfg.loss)
    return TrialResult(
        gen_error=abs(test_risk - train_risk),
        train_risk=train_risk,
        test_risk=test_risk,
        redraws=redraws,
    )


@dataclass(frozen=True)
class SweepGrid:
    """Cartesian grid over dimension, real sample size and augmentation ratio."""

    dims: tuple[int, ...]
    real_counts: tuple[int, ...]
    gammas: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if not self.dims or not self.real_counts or not self.gammas:
            raise ValueError("grid axes must be nonempty")
        object.__setattr__(self, "dims", tuple(sorted(set(self.dims))))
        object.__setattr__(self, "real_counts", tuple(sorted(set(self.real_counts))))
        object.__setattr__(self, "gammas", tuple(sorted({as_ratio(g) for g in self.gammas})))

    def cells(self) -> Iterator[tuple[int, int, Fraction]]:
        """Cells in canonical (dim, real_count, gamma) order."""
        return itertools.product(self.dims, self.real_counts, self.gammas)


@dataclass(frozen=True)
class CellStats:
    dim: int
    real_count: int
    gamma: Fraction
    synthetic_count: int
    runs: int
    mean_gen_error: float
    std_error: float
    mean_train_risk: float
    mean_test_risk: float
    redraw_count: int


@dataclass(frozen=True)
class SweepResult:
    """Aggregated sweep output plus the settings that produced it."""

    rows: tuple[CellStats, ...]
    runs: int
    master_seed: int
    noise_std: float
    test_count: int
    loss: Loss


def _cell_trials(args: tuple) -> list[TrialResult]:
    dim, real_count, gamma, runs, master_seed, noise_std, test_count, loss = args
    results = []
    for index in range(runs):
        cfg = TrialConfig(
            dim=dim,
            real_count=real_count,
            gamma=gamma,
            noise_std=noise_std,
            test_count=test_count,
            loss=loss,
            master_seed=master_seed,
            trial_index=index,
        )
        results.append(run_trial(cfg))
    return results


def _aggregate(
    dim: int, real_count: int, gamma: Fraction, runs: int, trials: Sequence[TrialResult]
) -> CellStats:
    gen_errors = np.array([t.gen_error for t in trials])
    std_error = float(np.std(gen_errors, ddof=1) / math.sqrt(runs)) if runs > 1 else 0.0
    return CellStats(
        dim=dim,
        real_count=real_count,
        gamma=gamma,
        synthetic_count=synthetic_count(real_count, gamma),
        runs=runs,
        mean_gen_error=float(np.mean(gen_errors)),
        std_error=std_error,
        mean_train_risk=float(np.mean(np.array([t.train_risk for t in trials]))),
        mean_test_risk=float(np.mean(np.array([t.test_risk for t in trials]))),
        redraw_count=int(sum(t.redraws for t in trials)),
    )


def run_sweep(
    grid: SweepGrid,
    runs: int,
    master_seed: int,
    *,
    noise_std: float = 0.6,
    test_count: int = 10000,
    loss: Loss = Loss.NLL,
    workers: int = 1,
) -> SweepResult:
    """Run ``runs`` trials per grid cell and aggregate in canonical order.

    Trials are pure functions of (cell, trial_index, master_seed, settings),
    and aggregation happens in the parent in trial order, so the result does
    not depend on ``workers``.
    """
    if not isinstance(runs, int) or isinstance(runs, bool) or runs < 1:
        raise ValueError(f"runs must be a positive integer, got {runs!r}")
    if not isinstance(workers, int) or isinstance(workers, bool) or workers < 1:
        raise ValueError(f"workers must be a positive integer, got {workers!r}")
    cells = list(grid.cells())
    args = [
        (dim, real_count, gamma, runs, master_seed, noise_std, test_count, loss)
        for dim, real_count, gamma in cells
    ]
    if workers == 1:
        per_cell = [_cell_trials(a) for a in args]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            per_cell = list(pool.map(_cell_trials, args))
    rows = tuple(
        _aggregate(dim, real_count, gamma, runs, trials)
        for (dim, real_count, gamma), trials in zip(cells, per_cell)
    )
    return SweepResult(
        rows=rows,
        runs=runs,
        master_seed=master_seed,
        noise_std=noise_std,
        test_count=test_count,
        loss=loss,
    )


@dataclass(frozen=True)
class BoundRow:
    dim: int
    real_count: int
    gamma: Fraction
    synthetic_count: int
    breakdown: BoundBreakdown


@dataclass(frozen=True)
class BoundTable:
    """Per-cell bound evaluations over a grid."""

    rows: tuple[BoundRow, ...]
    mode: BoundMode
    delta: float
    min_cap: bool


def predict_sweep(
    grid: SweepGrid,
    delta: float,
    mode: BoundMode = BoundMode.PREDICT,
    *,
    min_cap: bool = False,
) -> BoundTable:
    """Evaluate the mixture-model bound on every grid cell."""
    rows = []
    for dim, real_count, gamma in grid.cells():
        count = synthetic_count(real_count, gamma)
        breakdown = eval_bgmm_bound(dim, real_count, count, delta, mode, min_cap=min_cap)
        rows.append(
            BoundRow(
                dim=dim,
                real_count=real_count,
                gamma=gamma,
                synthetic_count=count,
                breakdown=breakdown,
            )
        )
    return BoundTable(rows=tuple(rows), mode=mode, delta=delta, min_cap=min_cap)


def grid_from_values(
    dims: Iterable[int],
    real_counts: Iterable[int],
    gammas: Iterable[Fraction | int | float | str],
) -> SweepGrid:
    """Convenience constructor accepting raw numbers for the gamma axis."""
    return SweepGrid(
        dims=tuple(dims),
        real_counts=tuple(real_counts),
        gammas=tuple(as_ratio(g) for g in gammas),
    )
