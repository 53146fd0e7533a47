"""Non-informative density over marginal pairs (a, b).

Jeffreys' prior on the 2x2 joint table is Dirichlet(1/2, 1/2, 1/2, 1/2),
pi^-2 (theta11 theta10 theta01 theta00)^-1/2.  Changing variables to
(theta11, a, b) (unit Jacobian) and integrating theta11 over its Fréchet
interval leaves

    P(a, b) = pi^-2 integral (t (a-t) (b-t) (1+t-a-b))^-1/2 dt.

For b < a and a + b > 1 this is a complete elliptic integral,

    P(a, b) = 2/pi^2 (b(1-b))^-1/2 K(a(1-a) / (b(1-b))),

and the other three sectors follow from P(a, b) = P(b, a) and
P(a, b) = P(1-a, 1-b).  The density is infinite on the lines a = b and
a + b = 1 and undefined on the edges of the square; both are reported as
``inf``.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .core_bounds import DomainError, Marginals, feasible_interval
from .special import complete_K_from_complement

_TWO_OVER_PI2 = 2.0 / math.pi**2


def is_singular(m: Marginals) -> bool:
    a, b = m.a, m.b
    return a == b or a + b == 1.0 or a in (0.0, 1.0) or b in (0.0, 1.0)


def prior_density_arrays(a, b):
    """Vectorised :func:`prior_density`; singular points map to ``inf``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    a, b = np.broadcast_arrays(a, b)
    singular = (a == b) | (a + b == 1.0) | (a <= 0.0) | (a >= 1.0) | (b <= 0.0) | (b >= 1.0)

    reflect = a + b < 1.0
    a = np.where(reflect, 1.0 - a, a)
    b = np.where(reflect, 1.0 - b, b)
    big, small = np.maximum(a, b), np.minimum(a, b)
    vb = small * (1.0 - small)
    with np.errstate(divide="ignore", invalid="ignore"):
        # 1 - m = (big - small)(big + small - 1) / vb, formed without cancellation
        mc = (big - small) * (big + small - 1.0) / vb
        ok = ~singular & (mc > 0.0) & (vb > 0.0)
        k = complete_K_from_complement(np.where(ok, mc, 0.5))
        out = np.where(ok, _TWO_OVER_PI2 / np.sqrt(np.where(ok, vb, 1.0)) * k, np.inf)
    return out if out.ndim else float(out)


def prior_density(m: Marginals) -> float:
    """Closed-form marginal prior density at ``m``; ``math.inf`` on the
    singular set."""
    return float(prior_density_arrays(m.a, m.b))


@lru_cache(maxsize=8)
def _panel_rule(order: int):
    gx, gw = np.polynomial.legendre.leggauss(order)
    return 0.5 * (gx + 1.0), 0.5 * gw


def _graded_nodes(length: float, n_points: int, order: int = 16, ratio: float = 0.5):
    """Nodes and weights on [0, length], panels shrinking geometrically to 0."""
    panels = max(n_points // order, 1)
    edges = length * ratio ** np.arange(panels + 1)[::-1]
    edges[0] = 0.0
    u, w = _panel_rule(order)
    h = np.diff(edges)
    nodes = (edges[:-1, None] + h[:, None] * u).ravel()
    weights = (h[:, None] * w).ravel()
    return nodes, weights


def prior_density_bruteforce(m: Marginals, n_points: int = 1024) -> float:
    """Marginal prior by direct quadrature over theta11.

    The interval is split at its midpoint and each half is mapped by
    theta = end -/+ u^2, which turns both inverse-square-root endpoint
    singularities into bounded integrands; panels are graded toward the
    ends to resolve the near-singular factors close to a = b or a + b = 1.
    Independent of the elliptic-integral closed form.
    """
    if is_singular(m):
        raise DomainError(f"{m} lies on the singular set of the prior")
    a, b = m.a, m.b
    iv = feasible_interval(m)
    lo, hi = iv.lo, iv.hi
    half = math.sqrt(0.5 * (hi - lo))
    u, w = _graded_nodes(half, n_points // 2)
    u2 = u * u

    # integrand times the 2u Jacobian, with the vanishing factor cancelled
    def from_lo(s):
        t = lo + s
        if lo > 0.0:  # lo = a+b-1, the (1+t-a-b) factor equals s
            rest = t * (a - t) * (b - t)
        else:  # lo = 0, the t factor equals s
            rest = (a - t) * (b - t) * (1.0 + t - a - b)
        return 2.0 / np.sqrt(rest)

    def from_hi(s):
        t = hi - s
        other = b if a == hi else a
        rest = t * (other - t) * (1.0 + t - a - b)
        return 2.0 / np.sqrt(rest)

    total = np.dot(w, from_lo(u2)) + np.dot(w, from_hi(u2))
    if not math.isfinite(total):
        raise DomainError(f"brute-force prior quadrature did not converge at {m}")
    return float(total) / math.pi**2
