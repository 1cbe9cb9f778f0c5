"""Command-line front end.

Subcommands: sweep, predict, optimal-mg, kl-check, single-trial, and
reproduce (preset panels).  Grids come from strict JSON configs; a few flags
override config values.  Exit codes: 0 success, 2 config error, 3 runtime
abort (redraw exhaustion or a failed oracle check).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from .bounds import BoundMode, optimal_mg
from .classifier import Loss
from .config import ConfigError, ExperimentConfig, load_config_file
from .divergence import (
    kl_learned_vs_true,
    kl_numeric_1d,
    tv_numeric_1d,
    tv_pinsker,
)
from .experiment import (
    RedrawLimitError,
    TrialConfig,
    grid_from_values,
    predict_sweep,
    run_sweep,
    run_trial,
)
from .figures import render_bound_figure, render_sweep_figure
from .generator import FittedGenerator
from .mixture import MixtureParams
from .reports import emit_csv
from .rng import mix64, stream

_KL_ORACLE_TOL = 1e-4

_GAMMA_PRESET = (0, 1, 2, 5, 10, 20, 50)


@dataclass(frozen=True)
class _Panel:
    kind: str  # "sweep" or "predict"
    dims: tuple[int, ...]
    real_counts: tuple[int, ...]
    x_axis: str


PRESETS = {
    "fig1a": _Panel("sweep", (1,), (20, 50, 100, 200, 500), "m_S"),
    "fig1b": _Panel("sweep", (1,), (40,), "gamma"),
    "fig1c": _Panel("predict", (1,), (40,), "gamma"),
    "fig1d": _Panel("sweep", (2, 10, 25, 50, 100), (10,), "d"),
    "fig1e": _Panel("sweep", (50,), (10,), "gamma"),
    "fig1f": _Panel("predict", (50,), (10,), "gamma"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gda-lab",
        description="Monte Carlo lab for generative data augmentation on a "
        "two-class Gaussian mixture, with stability-bound evaluators.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, *, workers=False, seed=False, runs=False, loss=False, mode=False):
        p.add_argument("--out", type=Path, default=None, help="output CSV path")
        if workers:
            p.add_argument(
                "--workers",
                type=int,
                default=None,
                help="process count (falls back to GDA_LAB_WORKERS, then config)",
            )
        if seed:
            p.add_argument("--seed", type=int, default=None, help="64-bit master seed")
        if runs:
            p.add_argument("--runs", type=int, default=None, help="trials per grid cell")
        if loss:
            p.add_argument("--loss", choices=[l.value for l in Loss], default=None)
        if mode:
            p.add_argument("--mode", choices=[m.value for m in BoundMode], default=None)
            p.add_argument(
                "--min-cap",
                action="store_true",
                help="debug: clamp the bound's capped factors with min(1, x)",
            )

    p_sweep = sub.add_parser("sweep", help="measure generalization gaps over a grid")
    p_sweep.add_argument("--config", type=Path, required=True)
    add_common(p_sweep, workers=True, seed=True, runs=True, loss=True)

    p_predict = sub.add_parser("predict", help="evaluate the bound over a grid")
    p_predict.add_argument("--config", type=Path, required=True)
    add_common(p_predict, mode=True)

    p_opt = sub.add_parser("optimal-mg", help="search the bound-minimizing ratio")
    p_opt.add_argument("--config", type=Path, required=True)
    add_common(p_opt, mode=True)

    p_kl = sub.add_parser("kl-check", help="run the divergence oracle suite")
    p_kl.add_argument("--config", type=Path, default=None)
    add_common(p_kl, seed=True)

    p_single = sub.add_parser("single-trial", help="run one trial and print its numbers")
    p_single.add_argument("--config", type=Path, required=True)
    p_single.add_argument("--seed", type=int, default=None)
    p_single.add_argument("--loss", choices=[l.value for l in Loss], default=None)

    p_repro = sub.add_parser("reproduce", help="run a preset panel (CSV + PNG)")
    p_repro.add_argument("panel", choices=sorted(PRESETS))
    add_common(p_repro, workers=True, seed=True, runs=True, loss=True, mode=True)

    return parser


def _resolve_workers(flag: int | None, config_value: int) -> int:
    if flag is not None:
        if flag < 1:
            raise ConfigError(f"--workers: must be >= 1, got {flag}")
        return flag
    env = os.environ.get("GDA_LAB_WORKERS")
    if env:
        try:
            value = int(env)
        except ValueError:
            raise ConfigError(f"GDA_LAB_WORKERS: must be an integer, got {env!r}") from None
        if value < 1:
            raise ConfigError(f"GDA_LAB_WORKERS: must be >= 1, got {value}")
        return value
    return config_value


def _apply_overrides(cfg: ExperimentConfig, args) -> ExperimentConfig:
    updates = {}
    if getattr(args, "out", None) is not None:
        updates["out"] = str(args.out)
    if getattr(args, "seed", None) is not None:
        if args.seed < 0 or args.seed >= 1 << 64:
            raise ConfigError(f"--seed: must be an unsigned 64-bit integer, got {args.seed}")
        updates["master_seed"] = args.seed
    if getattr(args, "runs", None) is not None:
        if args.runs < 1:
            raise ConfigError(f"--runs: must be >= 1, got {args.runs}")
        updates["runs"] = args.runs
    if getattr(args, "loss", None) is not None:
        updates["loss"] = Loss(args.loss)
    if getattr(args, "mode", None) is not None:
        updates["mode"] = BoundMode(args.mode)
    if getattr(args, "min_cap", False):
        updates["min_cap"] = True
    return dataclasses.replace(cfg, **updates) if updates else cfg


def _load_for(command: str, args) -> ExperimentConfig:
    cfg = load_config_file(args.config)
    if cfg.command != command:
        raise ConfigError(
            f"command: config is for '{cfg.command}', expected '{command}'"
        )
    return _apply_overrides(cfg, args)


def _require_out(cfg: ExperimentConfig) -> Path:
    if cfg.out is None:
        raise ConfigError('out: required (pass --out or set "out" in the config)')
    return Path(cfg.out)


def _cmd_sweep(args) -> int:
    cfg = _load_for("sweep", args)
    out = _require_out(cfg)
    workers = _resolve_workers(args.workers, cfg.workers)
    result = run_sweep(
        cfg.grid,
        cfg.runs,
        cfg.master_seed,
        noise_std=cfg.sigma,
        test_count=cfg.n_test,
        loss=cfg.loss,
        workers=workers,
    )
    emit_csv(result, out)
    print(f"wrote {out} ({len(result.rows)} cells, {cfg.runs} runs each)")
    return 0


def _cmd_predict(args) -> int:
    cfg = _load_for("predict", args)
    out = _require_out(cfg)
    table = predict_sweep(cfg.grid, cfg.delta, cfg.mode, min_cap=cfg.min_cap)
    emit_csv(table, out)
    print(f"wrote {out} ({len(table.rows)} cells, mode={cfg.mode.value})")
    return 0


def _cmd_optimal_mg(args) -> int:
    cfg = _load_for("optimal-mg", args)
    dim = cfg.dims[0]
    real_count = cfg.real_counts[0]
    best = optimal_mg(
        dim, real_count, cfg.delta, cfg.mode, cfg.gammas, min_cap=cfg.min_cap
    )
    print(
        json.dumps(
            {
                "gamma": float(best.gamma),
                "m_G": best.synthetic_count,
                "divergence_term": best.bound.divergence_term,
                "sqrt_term": best.bound.sqrt_term,
                "log_term": best.bound.log_term,
                "total": best.bound.total,
                "mode": cfg.mode.value,
            },
            sort_keys=True,
        )
    )
    if cfg.out is not None:
        table = predict_sweep(
            grid_from_values([dim], [real_count], cfg.gammas),
            cfg.delta,
            cfg.mode,
            min_cap=cfg.min_cap,
        )
        emit_csv(table, Path(cfg.out))
        print(f"wrote {cfg.out}")
    return 0


def _perturbed_generator(params: MixtureParams, rng) -> FittedGenerator:
    """Random fitted-generator state near the truth for oracle checks."""
    ratio = rng.uniform(0.5, 2.0, size=params.dim)
    offset_pos = rng.uniform(-params.noise_std, params.noise_std, size=params.dim)
    offset_neg = rng.uniform(-params.noise_std, params.noise_std, size=params.dim)
    return FittedGenerator(
        mean_pos=params.mean + offset_pos,
        mean_neg=-params.mean + offset_neg,
        var_diag=ratio * params.noise_var,
        class_counts=(2, 2),
    )


def _cmd_kl_check(args) -> int:
    if args.config is not None:
        cfg = _load_for("kl-check", args)
        cfg = _apply_overrides(cfg, args)
    else:
        cfg = _apply_overrides(ExperimentConfig(command="kl-check"), args)
    params = MixtureParams.standard(1, 0.36)
    failures = 0
    lines = []
    for draw in range(cfg.draws):
        rng = stream(mix64(cfg.master_seed, draw))
        gen = _perturbed_generator(params, rng)
        kl_closed = kl_learned_vs_true(gen, params)
        kl_numeric = kl_numeric_1d(gen, params)
        tv_exact = tv_numeric_1d(gen, params)
        tv_bound = tv_pinsker(kl_closed)
        gap = abs(kl_closed - kl_numeric)
        ok = gap <= _KL_ORACLE_TOL and tv_exact <= tv_bound
        failures += not ok
        lines.append((draw, kl_closed, kl_numeric, gap, tv_exact, tv_bound, ok))
        print(
            f"draw {draw:3d}: kl_closed={kl_closed:.8f} kl_numeric={kl_numeric:.8f} "
            f"|diff|={gap:.2e} tv={tv_exact:.6f} pinsker={tv_bound:.6f} "
            f"{'ok' if ok else 'FAIL'}"
        )
    if cfg.out is not None:
        with open(cfg.out, "w", encoding="utf-8", newline="\n") as handle:
            handle.write("draw,kl_closed,kl_numeric,abs_diff,tv_numeric,tv_pinsker,ok\n")
            for row in lines:
                handle.write(",".join(repr(v) if isinstance(v, float) else str(v) for v in row) + "\n")
        print(f"wrote {cfg.out}")
    print(f"{cfg.draws - failures}/{cfg.draws} draws passed (tolerance {_KL_ORACLE_TOL:g})")
    if failures:
        print("kl-check failed", file=sys.stderr)
        return 3
    return 0


def _cmd_single_trial(args) -> int:
    cfg = _load_for("single-trial", args)
    trial = TrialConfig(
        dim=cfg.dims[0],
        real_count=cfg.real_counts[0],
        gamma=cfg.gammas[0],
        noise_std=cfg.sigma,
        test_count=cfg.n_test,
        loss=cfg.loss,
        master_seed=cfg.master_seed,
        trial_index=cfg.trial_index,
    )
    result = run_trial(trial)
    print(
        json.dumps(
            {
                "gen_error": result.gen_error,
                "train_risk": result.train_risk,
                "test_risk": result.test_risk,
                "redraws": result.redraws,
            },
            sort_keys=True,
        )
    )
    return 0


def _cmd_reproduce(args) -> int:
    panel = PRESETS[args.panel]
    grid = grid_from_values(panel.dims, panel.real_counts, _GAMMA_PRESET)
    out = Path(args.out) if args.out is not None else Path(f"{args.panel}.csv")
    figure = out.with_suffix(".png")
    runs = args.runs if args.runs is not None else 1000
    seed = args.seed if args.seed is not None else 0
    loss = Loss(args.loss) if args.loss is not None else Loss.NLL
    mode = BoundMode(args.mode) if args.mode is not None else BoundMode.PREDICT
    if runs < 1:
        raise ConfigError(f"--runs: must be >= 1, got {runs}")
    if seed < 0 or seed >= 1 << 64:
        raise ConfigError(f"--seed: must be an unsigned 64-bit integer, got {seed}")
    if panel.kind == "sweep":
        workers = _resolve_workers(args.workers, 1)
        result = run_sweep(grid, runs, seed, loss=loss, workers=workers)
        emit_csv(result, out)
        render_sweep_figure(result, panel.x_axis, figure)
    else:
        table = predict_sweep(grid, delta=0.05, mode=mode, min_cap=args.min_cap)
        emit_csv(table, out)
        render_bound_figure(table, figure)
    print(f"wrote {out} and {figure}")
    return 0


_HANDLERS = {
    "sweep": _cmd_sweep,
    "predict": _cmd_predict,
    "optimal-mg": _cmd_optimal_mg,
    "kl-check": _cmd_kl_check,
    "single-trial": _cmd_single_trial,
    "reproduce": _cmd_reproduce,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except RedrawLimitError as exc:
        print(f"runtime abort: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
