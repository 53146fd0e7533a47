"""Marginals, joint distributions over two Boolean variables, and the
Fréchet interval that a joint probability P(X∧Y) must lie in.

Given marginals a = P(X) and b = P(Y), the joint cell theta11 = P(X∧Y)
determines the rest of the 2x2 table::

    theta10 = a - theta11
    theta01 = b - theta11
    theta00 = 1 - a - b + theta11

and non-negativity of all four cells pins theta11 to
[max(a+b-1, 0), min(a, b)].  Restricted to that interval, Jeffreys'
prior for a Bernoulli parameter becomes a truncated arcsine density.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

#: Fréchet intervals narrower than this are treated as a forced joint.
DEGENERATE_WIDTH = 1e-12


class DomainError(ValueError):
    """An argument lies outside the domain of the function."""


class DegenerateIntervalError(DomainError):
    """The feasible interval for theta11 has (numerically) zero width."""


def _check_probability(name: str, value: float) -> float:
    value = float(value)
    if not (0.0 <= value <= 1.0):
        raise DomainError(f"{name}={value!r} is not a probability in [0, 1]")
    return value


@dataclass(frozen=True)
class Marginals:
    """The pair (a, b) = (P(X), P(Y)).  Validated on construction."""

    a: float
    b: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", _check_probability("a", self.a))
        object.__setattr__(self, "b", _check_probability("b", self.b))

    def swapped(self) -> Marginals:
        return Marginals(self.b, self.a)

    def reflected(self) -> Marginals:
        """The pair (1-a, 1-b)."""
        return Marginals(1.0 - self.a, 1.0 - self.b)

    def joint(self, theta11: float) -> JointDistribution:
        """The joint table implied by these marginals and a value of theta11."""
        return JointDistribution(theta11, self.a - theta11, self.b - theta11)


@dataclass(frozen=True)
class JointDistribution:
    """A point of the 3-simplex of 2x2 joint tables.

    ``theta00`` is derived, not stored.
    """

    theta11: float
    theta10: float
    theta01: float

    def __post_init__(self) -> None:
        cells = (self.theta11, self.theta10, self.theta01)
        if any(c < 0.0 for c in cells) or sum(cells) > 1.0 + 1e-15:
            raise DomainError(f"{cells!r} is not a point of the 3-simplex")

    @property
    def theta00(self) -> float:
        return 1.0 - self.theta11 - self.theta10 - self.theta01

    @property
    def marginals(self) -> Marginals:
        return Marginals(
            min(self.theta11 + self.theta10, 1.0),
            min(self.theta11 + self.theta01, 1.0),
        )


@dataclass(frozen=True)
class FeasibleInterval:
    """Fréchet bounds [lo, hi] on theta11."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.lo <= self.hi <= 1.0):
            raise DomainError(f"invalid interval [{self.lo!r}, {self.hi!r}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def is_degenerate(self) -> bool:
        return self.width < DEGENERATE_WIDTH

    def __contains__(self, theta11: float) -> bool:
        return self.lo <= theta11 <= self.hi


def feasible_interval(m: Marginals) -> FeasibleInterval:
    """Return ``(max(a+b-1, 0), min(a, b))`` for the marginals ``m``."""
    hi = min(m.a, m.b)
    # a + b - 1 can round past min(a, b) when the other marginal is 1
    return FeasibleInterval(min(max(m.a + m.b - 1.0, 0.0), hi), hi)


def interval_arrays(a, b):
    """Vectorised Fréchet bounds.

    Returns ``(lo, hi, width, one_minus_lo, one_minus_hi)``.  The width and
    the complements are formed directly from the marginals rather than by
    subtraction, so they stay accurate when the interval hugs 0 or 1.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    s = a + b
    upper = s > 1.0
    ca, cb = 1.0 - a, 1.0 - b
    hi = np.minimum(a, b)
    lo = np.minimum(np.where(upper, s - 1.0, 0.0), hi)
    width = np.where(upper, np.minimum(ca, cb), hi)
    one_minus_lo = np.where(upper, ca + cb, 1.0)
    one_minus_hi = np.maximum(ca, cb)
    return lo, hi, width, one_minus_lo, one_minus_hi


def arcsine_angles(a, b):
    """Angles t = arcsin(sqrt(theta)) of the interval ends.

    Returns ``(t_lo, delta)`` with ``delta = t_hi - t_lo``.  The normaliser of
    the truncated arcsine density is ``Z = 2 * delta``.
    """
    lo, hi, width, clo, chi = interval_arrays(a, b)
    t_lo = np.arctan2(np.sqrt(lo), np.sqrt(clo))
    # sin(t_hi - t_lo) = (hi - lo) / (sqrt(hi (1-lo)) + sqrt(lo (1-hi)))
    denom = np.sqrt(hi * clo) + np.sqrt(lo * chi)
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = np.where(denom > 0.0, width / denom, 0.0)
    delta = np.arcsin(np.clip(ratio, 0.0, 1.0))
    return t_lo, delta


def truncated_arcsine_pdf(theta11: float, m: Marginals) -> float:
    """Density of theta11 given the marginals, under Jeffreys' prior.

    ``(theta11 (1 - theta11))**-0.5 / Z`` on the open Fréchet interval.
    """
    iv = feasible_interval(m)
    if iv.is_degenerate:
        raise DegenerateIntervalError(f"feasible interval of {m} has zero width")
    if not (iv.lo < theta11 < iv.hi):
        raise DomainError(f"theta11={theta11!r} outside ({iv.lo}, {iv.hi})")
    _, delta = arcsine_angles(m.a, m.b)
    return 1.0 / (2.0 * float(delta) * math.sqrt(theta11 * (1.0 - theta11)))
