"""Input-averaged expected loss of aggregation operators (the league table)
and pointwise surfaces for plotting."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO, Union

import numpy as np

from .operators import Operator, OperatorId
from .posterior_loss import (
    coefficient_arrays,
    expected_kl_arrays,
    optimal_estimate_arrays,
    optimal_expected_kl_arrays,
)
from .prior import prior_density_arrays
from .quadrature import GridSpec, build_grid, integrate_marginal_average

DEFAULT_CLAMP = 1e-12

OperatorLike = Union[OperatorId, str, tuple[str, Operator]]

LEAGUE_COLUMNS = ("operator", "avg_loss", "grid_n", "alpha", "clamp_epsilon")


@dataclass(frozen=True)
class LeagueEntry:
    op: OperatorId | str
    avg_loss: float
    clamp_epsilon: float
    grid: GridSpec

    @property
    def name(self) -> str:
        return self.op.value if isinstance(self.op, OperatorId) else self.op

    def as_row(self) -> dict:
        return {
            "operator": self.name,
            "avg_loss": self.avg_loss,
            "grid_n": self.grid.n,
            "alpha": self.grid.alpha,
            "clamp_epsilon": self.clamp_epsilon,
        }


def _resolve(op: OperatorLike) -> tuple[OperatorId | str, Operator]:
    if isinstance(op, OperatorId):
        return op, op.function
    if isinstance(op, str):
        parsed = OperatorId.parse(op)
        return parsed, parsed.function
    name, fn = op
    return name, fn


def pointwise_loss(fn: Operator, a, b, clamp_epsilon: float = DEFAULT_CLAMP, coefficients=None):
    """Expected KL of the (clamped) estimate ``fn(a, b)`` at each (a, b)."""
    x = np.clip(np.asarray(fn(a, b), dtype=float), clamp_epsilon, 1.0 - clamp_epsilon)
    return np.maximum(expected_kl_arrays(a, b, x, coefficients), 0.0)


def league_table(
    ops: Sequence[OperatorLike] = tuple(OperatorId),
    grid: GridSpec = GridSpec(),
    clamp_epsilon: float = DEFAULT_CLAMP,
    *,
    workers: int = 1,
) -> list[LeagueEntry]:
    """Average each operator's expected loss over the marginal prior.

    Operators are given as :class:`OperatorId` members, their CLI names, or
    ``(name, function)`` pairs for custom operators.  Outputs are clamped to
    [eps, 1 - eps] before the loss is taken, since the expected loss
    diverges for estimates of exactly 0 or 1.  Entries come back sorted by
    average loss.
    """
    if not (0.0 < clamp_epsilon < 0.5):
        raise ValueError(f"clamp epsilon must lie in (0, 0.5), got {clamp_epsilon!r}")
    resolved = [_resolve(op) for op in ops]
    if not resolved:
        return []

    def stacked_losses(a, b):
        coeffs = coefficient_arrays(a, b)
        return np.stack(
            [pointwise_loss(fn, a, b, clamp_epsilon, coeffs) for _, fn in resolved]
        )

    totals = integrate_marginal_average(stacked_losses, build_grid(grid), workers=workers)
    entries = [
        LeagueEntry(op, float(total), clamp_epsilon, grid)
        for (op, _), total in zip(resolved, totals)
    ]
    return sorted(entries, key=lambda e: e.avg_loss)


def write_league_csv(entries: Iterable[LeagueEntry], stream: TextIO) -> None:
    writer = csv.DictWriter(stream, fieldnames=LEAGUE_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for entry in entries:
        row = entry.as_row()
        row["avg_loss"] = f"{entry.avg_loss:.10g}"
        writer.writerow(row)


def uniform_centers(resolution: int) -> tuple[np.ndarray, np.ndarray]:
    """Cell centres of a resolution x resolution grid, a varying slowest."""
    if resolution < 2:
        raise ValueError(f"resolution must be >= 2, got {resolution!r}")
    c = (np.arange(resolution) + 0.5) / resolution
    a, b = np.meshgrid(c, c, indexing="ij")
    return a.ravel(), b.ravel()


def loss_surface(op: OperatorLike, resolution: int, clamp_epsilon: float = DEFAULT_CLAMP) -> np.ndarray:
    """``(resolution**2, 3)`` array of rows (a, b, expected loss)."""
    ident, fn = _resolve(op)
    a, b = uniform_centers(resolution)
    if ident is OperatorId.OPTIMAL:
        values = optimal_expected_kl_arrays(a, b)
    else:
        values = pointwise_loss(fn, a, b, clamp_epsilon)
    return np.column_stack([a, b, values])


SURFACE_QUANTITIES = ("estimate", "loss", "prior", "kappa", "Z")


def quantity_surface(
    quantity: str,
    resolution: int,
    op: OperatorLike | None = None,
    clamp_epsilon: float = DEFAULT_CLAMP,
) -> np.ndarray:
    """Rows (a, b, value) for one of :data:`SURFACE_QUANTITIES`.

    Singular prior values come back as ``inf``.
    """
    if quantity not in SURFACE_QUANTITIES:
        raise ValueError(f"unknown quantity {quantity!r}")
    needs_op = quantity in ("estimate", "loss")
    if needs_op != (op is not None):
        raise ValueError(f"quantity {quantity!r} {'requires' if needs_op else 'takes no'} operator")
    if quantity == "loss":
        return loss_surface(op, resolution, clamp_epsilon)

    a, b = uniform_centers(resolution)
    if quantity == "estimate":
        ident, fn = _resolve(op)
        values = optimal_estimate_arrays(a, b) if ident is OperatorId.OPTIMAL else fn(a, b)
    elif quantity == "prior":
        values = prior_density_arrays(a, b)
    else:
        Z, _, _, kz = coefficient_arrays(a, b)
        values = Z if quantity == "Z" else Z * kz
    return np.column_stack([a, b, np.broadcast_to(values, a.shape)])


def write_surface_csv(rows: np.ndarray, stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["a", "b", "value"])
    for a, b, v in rows:
        writer.writerow([f"{a:.6g}", f"{b:.6g}", f"{v:.6g}" if np.isfinite(v) else ""])
