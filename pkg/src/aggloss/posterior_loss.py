"""Expected KL loss of an estimate of P(X∧Y) given only the marginals.

With theta11 distributed by the truncated arcsine density on its Fréchet
interval, the expected Bernoulli KL divergence KL(theta11 || x) is

    kappa/Z - (A/Z) ln x - (B/Z) ln(1 - x)

where Z normalises the density, A and B are the integrals of
sqrt(xi/(1-xi)) and sqrt((1-xi)/xi) over the interval, and kappa is the
(negative) integral of the Bernoulli negentropy against the unnormalised
density.  The minimiser is x* = A/(A+B), which is also the posterior
mean of theta11.

Everything is computed in the angle variable xi = sin^2 t, in which the
arcsine density is uniform: Z = 2 (t_hi - t_lo), A and B are elementary,
and kappa's integrand is smooth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core_bounds import (
    DegenerateIntervalError,
    DEGENERATE_WIDTH,
    DomainError,
    Marginals,
    arcsine_angles,
    feasible_interval,
    interval_arrays,
)

#: Gauss-Legendre nodes used for kappa after the smoothstep remap.
KAPPA_NODES = 32


@dataclass(frozen=True)
class LossCoefficients:
    Z: float
    A: float
    B: float
    kappa: float

    def expected_kl(self, x: float) -> float:
        return expected_kl_from_coefficients(self, x)


@lru_cache(maxsize=8)
def _kappa_rule(n: int):
    # smoothstep t = 3u^2 - 2u^3 flattens the x ln x behaviour at both ends
    gx, gw = np.polynomial.legendre.leggauss(n)
    u = 0.5 * (gx + 1.0)
    return 3.0 * u * u - 2.0 * u**3, 0.5 * gw * 6.0 * u * (1.0 - u)


def _negentropy_of_angle(t):
    s = np.sin(t) ** 2
    c = np.cos(t) ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        g = np.where(s > 0.0, s * np.log(s), 0.0) + np.where(c > 0.0, c * np.log(c), 0.0)
    return g


def _delta_minus_sin(d):
    d = np.asarray(d, dtype=float)
    d2 = d * d
    series = d * d2 / 6.0 * (1.0 - d2 / 20.0 * (1.0 - d2 / 42.0 * (1.0 - d2 / 72.0)))
    return np.where(np.abs(d) < 1e-2, series, d - np.sin(d))


def coefficient_arrays(a, b, nodes: int = KAPPA_NODES):
    """Vectorised ``(Z, A, B, kappa_over_Z)`` for arrays of marginals.

    ``kappa / Z`` is returned rather than ``kappa`` because it stays well
    scaled as the interval shrinks.  Degenerate intervals give ``Z = 0`` and
    NaN in the last slot; callers mask them.
    """
    t_lo, delta = arcsine_angles(a, b)
    total = 2.0 * t_lo + delta
    sin_d = np.sin(delta)
    base = _delta_minus_sin(delta)
    # A = Delta - cos(total) sin(Delta), split into non-negative parts
    A = base + 2.0 * np.sin(0.5 * total) ** 2 * sin_d
    B = base + 2.0 * np.cos(0.5 * total) ** 2 * sin_d
    Z = 2.0 * delta

    shape, weights = _kappa_rule(nodes)
    t = t_lo[..., None] + delta[..., None] * shape
    with np.errstate(invalid="ignore"):
        mean_negentropy = _negentropy_of_angle(t) @ weights
    mean_negentropy = np.where(delta > 0.0, mean_negentropy, np.nan)
    return Z, A, B, mean_negentropy


def _require_open_interval(m: Marginals):
    iv = feasible_interval(m)
    if iv.is_degenerate:
        raise DegenerateIntervalError(f"feasible interval of {m} has zero width")
    return iv


def normalization_Z(m: Marginals) -> float:
    """``2 asin(sqrt(hi)) - 2 asin(sqrt(lo))``."""
    _require_open_interval(m)
    _, delta = arcsine_angles(m.a, m.b)
    return 2.0 * float(delta)


def coefficients_AB(m: Marginals) -> tuple[float, float]:
    _require_open_interval(m)
    _, A, B, _ = coefficient_arrays(m.a, m.b)
    return float(A), float(B)


def kappa(m: Marginals, nodes: int = KAPPA_NODES) -> float:
    """Integral of (xi ln xi + (1-xi) ln(1-xi)) / sqrt(xi (1-xi)) over the
    Fréchet interval.  Never positive."""
    _require_open_interval(m)
    Z, _, _, kz = coefficient_arrays(m.a, m.b, nodes)
    return float(Z * kz)


def loss_coefficients(m: Marginals) -> LossCoefficients:
    _require_open_interval(m)
    Z, A, B, kz = coefficient_arrays(m.a, m.b)
    return LossCoefficients(float(Z), float(A), float(B), float(Z * kz))


def kl_bernoulli(p: float, q: float) -> float:
    """KL divergence between Bernoulli(p) and Bernoulli(q), with 0 ln 0 = 0."""
    if not (0.0 <= p <= 1.0 and 0.0 <= q <= 1.0):
        raise DomainError(f"kl_bernoulli needs probabilities, got p={p!r}, q={q!r}")
    total = 0.0
    if p > 0.0:
        if q == 0.0:
            raise DomainError("q = 0 while p > 0: divergence is infinite")
        total += p * math.log(p / q)
    if p < 1.0:
        if q == 1.0:
            raise DomainError("q = 1 while p < 1: divergence is infinite")
        total += (1.0 - p) * math.log((1.0 - p) / (1.0 - q))
    return max(total, 0.0)


def expected_kl_from_coefficients(c: LossCoefficients, x: float) -> float:
    if not (0.0 < x < 1.0):
        raise DomainError(f"estimate x={x!r} must lie strictly inside (0, 1)")
    return c.kappa / c.Z - (c.A / c.Z) * math.log(x) - (c.B / c.Z) * math.log1p(-x)


def expected_kl(m: Marginals, x: float) -> float:
    """Expected KL(theta11 || x) under the truncated arcsine posterior.

    For a forced joint (zero-width interval) this is just the KL divergence
    from the forced value.
    """
    if not (0.0 < x < 1.0):
        raise DomainError(f"estimate x={x!r} must lie strictly inside (0, 1)")
    iv = feasible_interval(m)
    if iv.is_degenerate:
        return 0.0 if x == iv.lo else kl_bernoulli(iv.lo, x)
    return expected_kl_from_coefficients(loss_coefficients(m), x)


def expected_kl_arrays(a, b, x, coefficients=None):
    """Vectorised expected KL for estimates ``x`` in (0, 1).

    Degenerate intervals fall back to the KL divergence from the forced value.
    """
    a, b, x = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (a, b, x)))
    Z, A, B, kz = coefficient_arrays(a, b) if coefficients is None else coefficients
    with np.errstate(divide="ignore", invalid="ignore"):
        loss = kz - (A / Z) * np.log(x) - (B / Z) * np.log1p(-x)
        lo, _, width, _, _ = interval_arrays(a, b)
        forced = width < DEGENERATE_WIDTH
        if np.any(forced):
            p = lo
            kl = np.where(p > 0.0, p * np.log(p / x), 0.0) + np.where(
                p < 1.0, (1.0 - p) * np.log((1.0 - p) / (1.0 - x)), 0.0
            )
            loss = np.where(forced, np.maximum(kl, 0.0), loss)
    return loss


def optimal_estimate(m: Marginals) -> float:
    """The minimiser A/(A+B) of the expected loss; the forced value if the
    interval is degenerate."""
    return float(optimal_estimate_arrays(m.a, m.b))


def optimal_estimate_arrays(a, b, coefficients=None):
    lo, hi, width, _, _ = interval_arrays(a, b)
    Z, A, _, _ = coefficient_arrays(a, b) if coefficients is None else coefficients
    with np.errstate(divide="ignore", invalid="ignore"):
        x = np.clip(A / Z, lo, hi)
    return np.where(width < DEGENERATE_WIDTH, lo, x)


def optimal_expected_kl(m: Marginals) -> float:
    """Expected loss at the optimal estimate, floored at 0."""
    return float(optimal_expected_kl_arrays(m.a, m.b))


def optimal_expected_kl_arrays(a, b, coefficients=None):
    _, _, width, _, _ = interval_arrays(a, b)
    Z, A, B, kz = coefficient_arrays(a, b) if coefficients is None else coefficients
    with np.errstate(divide="ignore", invalid="ignore"):
        pa, pb = A / Z, B / Z
        # (kappa - A ln A - B ln B + (A+B) ln(A+B)) / Z with A + B = Z
        loss = kz - np.where(pa > 0, pa * np.log(pa), 0.0) - np.where(pb > 0, pb * np.log(pb), 0.0)
    loss = np.where(width < DEGENERATE_WIDTH, 0.0, loss)
    return np.maximum(loss, 0.0)
