"""CSV emission with a fixed schema and byte-stable formatting.

Floats are rendered as their shortest round-trip decimal (Python ``repr``),
rows are sorted by (d, m_S, gamma), files are UTF-8 with LF endings and no
BOM.  The delta column of a bound table is left empty in predict mode, where
the evaluation does not depend on it.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path
from typing import Union

from .bounds import BoundMode
from .experiment import BoundTable, SweepResult

SWEEP_HEADER = "d,m_S,gamma,m_G,runs,mean_gen_error,std_error,mean_train_risk,mean_test_risk,redraw_count"
BOUND_HEADER = "d,m_S,gamma,m_G,divergence_term,sqrt_term,log_term,total,mode,delta"


def _decimal(value: float) -> str:
    return repr(float(value))


def _gamma_text(gamma: Fraction) -> str:
    return repr(float(gamma))


def render_csv(result: Union[SweepResult, BoundTable]) -> str:
    """Render a sweep result or bound table to CSV text."""
    if isinstance(result, SweepResult):
        lines = [SWEEP_HEADER]
        for row in sorted(result.rows, key=lambda r: (r.dim, r.real_count, r.gamma)):
            lines.append(
                ",".join(
                    (
                        str(row.dim),
                        str(row.real_count),
                        _gamma_text(row.gamma),
                        str(row.synthetic_count),
                        str(row.runs),
                        _decimal(row.mean_gen_error),
                        _decimal(row.std_error),
                        _decimal(row.mean_train_risk),
                        _decimal(row.mean_test_risk),
                        str(row.redraw_count),
                    )
                )
            )
    elif isinstance(result, BoundTable):
        delta_text = "" if result.mode is BoundMode.PREDICT else _decimal(result.delta)
        lines = [BOUND_HEADER]
        for row in sorted(result.rows, key=lambda r: (r.dim, r.real_count, r.gamma)):
            lines.append(
                ",".join(
                    (
                        str(row.dim),
                        str(row.real_count),
                        _gamma_text(row.gamma),
                        str(row.synthetic_count),
                        _decimal(row.breakdown.divergence_term),
                        _decimal(row.breakdown.sqrt_term),
                        _decimal(row.breakdown.log_term),
                        _decimal(row.breakdown.total),
                        result.mode.value,
                        delta_text,
                    )
                )
            )
    else:
        raise TypeError(f"cannot render {type(result).__name__} as CSV")
    return "\n".join(lines) + "\n"


def emit_csv(result: Union[SweepResult, BoundTable], path: Union[str, Path]) -> Path:
    """Write the CSV to ``path`` and return the path."""
    target = Path(path)
    with open(target, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(render_csv(result))
    return target
