"""Singularity-aligned midpoint quadrature over the unit square of marginals.

The marginal prior is singular along a = b and a + b = 1.  In the rotated
coordinates x = a + b, y = a - b those lines sit at x = 1 and y = 0, and
the square becomes the diamond |y| <= min(x, 2 - x), with
da db = dx dy / 2.

The bounding rectangle [0, 2] x [-1, 1] splits into four unit squares, one
per triangle of the diamond together with its mirror image across the
domain edge.  Each unit square carries the same non-uniform product grid:
the interval [0, 2] is divided by the 2n cuts 1 -/+ ((j + 1/2)/n)**alpha
into 2n + 1 cells, then scaled onto [0, 1].  For alpha < 1 the cells crowd
toward both ends, i.e. toward the singular lines and the domain corners.
Cells are kept or dropped whole according to whether their centre lies
strictly inside the square; nothing is clipped.  Some centres fall exactly
on the square's edges (a cell and its mirror image straddle an edge), so
membership is decided from cell indices rather than rounded coordinates.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from .prior import prior_density_arrays


class NonFiniteIntegrandError(ArithmeticError):
    """The integrand returned NaN or inf at a grid cell."""


@dataclass(frozen=True)
class GridSpec:
    n: int = 1000
    alpha: float = 0.5

    def __post_init__(self) -> None:
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"grid n must be an integer >= 2, got {self.n!r}")
        if not (0.0 < self.alpha <= 1.0):
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha!r}")


def grid_cuts(spec: GridSpec) -> np.ndarray:
    """The 2n cut positions in (0, 2), increasing and mirror-symmetric about 1."""
    offsets = ((np.arange(spec.n) + 0.5) / spec.n) ** spec.alpha
    return np.concatenate([1.0 - offsets[::-1], 1.0 + offsets])


def _unit_cells(spec: GridSpec):
    """Midpoints and widths of the 2n+1 cells of [0, 1]."""
    edges = np.concatenate([[0.0], grid_cuts(spec), [2.0]]) / 2.0
    return 0.5 * (edges[1:] + edges[:-1]), np.diff(edges)


@dataclass(frozen=True)
class QuadratureGrid:
    """Product grid in (x, y) restricted to the unit square in (a, b).

    Each axis holds two copies of the 2n + 1 unit cells, tagged by ``half``
    (0 for the first unit interval, 1 for the second) and cell ``index``.
    :meth:`blocks` streams the retained cells as ``(a, b, weight)`` arrays so
    that fine grids never have to be held in memory at once.
    """

    spec: GridSpec
    x_mid: np.ndarray
    x_width: np.ndarray
    y_mid: np.ndarray
    y_width: np.ndarray
    half: np.ndarray
    index: np.ndarray

    def _inside(self, hx, kx):
        """Exact strict-interior test for x cells (hx, kx) against all y cells.

        With x = hx + m_k and y = hy - 1 + m_l, and m_k + m_{2n-k} = 1, each
        edge of the square reduces to an integer comparison of k and l.
        """
        last = 2 * self.spec.n
        hy, ky = self.half, self.index
        hsum, hdiff = hx + hy, hx - hy
        ksum = kx + ky
        return (
            ((hsum != 0) | (ksum > last))  # x + y > 0
            & ((hsum != 2) | (ksum < last))  # x + y < 2
            & ((hdiff != -1) | (kx > ky))  # x - y > 0
            & ((hdiff != 1) | (kx < ky))  # x - y < 2
        )

    def blocks(self, columns: int = 64) -> Iterator[tuple[np.ndarray, np.ndarray, np.ndarray]]:
        for start in range(0, self.x_mid.size, columns):
            rows = slice(start, start + columns)
            xm = self.x_mid[rows, None]
            xw = self.x_width[rows, None]
            keep = self._inside(self.half[rows, None], self.index[rows, None])
            a = 0.5 * (xm + self.y_mid)
            b = 0.5 * (xm - self.y_mid)
            w = 0.5 * xw * self.y_width
            yield a[keep], b[keep], w[keep]

    @property
    def cells(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """All retained ``(center_a, center_b, weight)`` as flat arrays."""
        parts = list(self.blocks())
        return tuple(np.concatenate([p[i] for p in parts]) for i in range(3))

    @property
    def size(self) -> int:
        return sum(block[0].size for block in self.blocks())

    @property
    def total_weight(self) -> float:
        return math.fsum(float(np.sum(w)) for _, _, w in self.blocks())


def build_grid(spec: GridSpec) -> QuadratureGrid:
    mid, width = _unit_cells(spec)
    cells = mid.size
    return QuadratureGrid(
        spec=spec,
        x_mid=np.concatenate([mid, 1.0 + mid]),
        x_width=np.concatenate([width, width]),
        y_mid=np.concatenate([mid - 1.0, mid]),
        y_width=np.concatenate([width, width]),
        half=np.repeat([0, 1], cells),
        index=np.tile(np.arange(cells), 2),
    )


def integrate_marginal_average(
    f: Callable[[np.ndarray, np.ndarray], np.ndarray],
    grid: QuadratureGrid,
    *,
    workers: int = 1,
    columns: int = 64,
):
    """Approximate the integral of f(a, b) P(a, b) over the unit square.

    ``f`` is called on arrays of cell centres and must return an array of
    the same length, or a ``(k, len)`` stack to integrate k functions in one
    sweep (the result is then a length-k array).  Partial sums are combined
    with :func:`math.fsum` in a fixed order, so the result does not depend
    on ``workers``.
    """

    def block_sum(block):
        a, b, w = block
        values = np.asarray(f(a, b), dtype=float)
        bad = ~np.isfinite(values)
        if np.any(bad):
            idx = np.nonzero(bad)[-1][0]
            raise NonFiniteIntegrandError(
                f"integrand is not finite at cell centre a={a[idx]!r}, b={b[idx]!r}"
            )
        return (values * (w * prior_density_arrays(a, b))).sum(axis=-1)

    blocks = grid.blocks(columns)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            partials = list(pool.map(block_sum, blocks))
    else:
        partials = [block_sum(block) for block in blocks]

    stacked = np.array(partials)
    if stacked.ndim == 1:
        return math.fsum(stacked)
    return np.array([math.fsum(col) for col in stacked.T])
