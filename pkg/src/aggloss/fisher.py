"""Information geometry of categorical distributions.

Coordinates are the first n-1 outcome probabilities; the last one is
implied.  In these coordinates the Fisher information matrix is
g_ij = delta_ij / theta_i + 1 / theta_n, its determinant is the product of
all n inverse probabilities, and Jeffreys' prior is Dirichlet(1/2, ..., 1/2).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .core_bounds import DomainError

#: Components at or below this are treated as lying on the simplex boundary.
INTERIOR_TOL = 1e-12
MAX_IID_OUTCOMES = 10**6


@dataclass(frozen=True)
class Categorical:
    """A categorical distribution on n outcomes, stored by its n-1 free
    coordinates."""

    theta: tuple[float, ...]

    def __init__(self, theta):
        object.__setattr__(self, "theta", tuple(float(t) for t in np.ravel(theta)))
        if not self.theta:
            raise DomainError("a categorical needs at least two outcomes")
        if any(t <= INTERIOR_TOL for t in self.theta) or self.theta_n <= INTERIOR_TOL:
            raise DomainError(f"{self.probabilities} is not in the interior of the simplex")

    @classmethod
    def from_probabilities(cls, p) -> Categorical:
        p = np.asarray(p, dtype=float)
        if abs(p.sum() - 1.0) > 1e-12:
            raise DomainError(f"probabilities sum to {p.sum()!r}, not 1")
        return cls(p[:-1])

    @property
    def n(self) -> int:
        return len(self.theta) + 1

    @property
    def theta_n(self) -> float:
        return 1.0 - math.fsum(self.theta)

    @property
    def probabilities(self) -> np.ndarray:
        return np.array(self.theta + (self.theta_n,))


def delta_divergence(p: Categorical, q: Categorical, delta: float) -> float:
    """(1 - sum_x p_x^delta q_x^(1-delta)) / (delta (1 - delta)).

    KL(p||q) is the delta -> 1 limit, reverse KL the delta -> 0 limit, and
    delta = 1/2 gives four times the squared Hellinger distance.
    """
    if p.n != q.n:
        raise DomainError(f"dimension mismatch: {p.n} vs {q.n} outcomes")
    if not (0.0 < delta < 1.0):
        raise DomainError(f"delta={delta!r} must lie in (0, 1)")
    pp, qq = p.probabilities, q.probabilities
    # 1 - sum p^d q^(1-d) = sum p (1 - (q/p)^(1-d)), which avoids cancellation
    terms = -pp * np.expm1((1.0 - delta) * np.log(qq / pp))
    return max(math.fsum(terms) / (delta * (1.0 - delta)), 0.0)


def fisher_matrix(c: Categorical) -> np.ndarray:
    inv = 1.0 / np.asarray(c.theta)
    return np.diag(inv) + 1.0 / c.theta_n


def fisher_determinant(c: Categorical) -> float:
    return float(np.prod(1.0 / c.probabilities))


def characteristic_determinant(c: Categorical, lam: float) -> float:
    """det(g - lam I) via the closed-form product over inverse probabilities.

    Raises at the poles lam = 1/theta_i, where the closed form is undefined.
    """
    inv = 1.0 / np.asarray(c.theta)
    gaps = inv - lam
    if np.any(np.abs(gaps) <= 1e-14 * np.maximum(1.0, inv)):
        raise DomainError(f"lambda={lam!r} coincides with an inverse probability")
    a_n = 1.0 / c.theta_n
    return float(np.prod(gaps) * (1.0 + a_n * np.sum(1.0 / gaps)))


def _scores(c: Categorical) -> np.ndarray:
    """Row x holds d/dtheta_i ln P(x | theta) for i = 1..n-1."""
    k = c.n - 1
    s = np.zeros((c.n, k))
    s[np.arange(k), np.arange(k)] = 1.0 / np.asarray(c.theta)
    s[k, :] = -1.0 / c.theta_n
    return s


def fisher_matrix_from_definition(c: Categorical) -> np.ndarray:
    """E[score score^T], summed explicitly over the n outcomes."""
    s = _scores(c)
    return (s.T * c.probabilities) @ s


def fisher_matrix_iid(c: Categorical, t: int) -> np.ndarray:
    """Fisher matrix of t IID draws, by enumerating all n**t outcome tuples."""
    if t < 1:
        raise ValueError(f"sample count must be positive, got {t!r}")
    if c.n**t > MAX_IID_OUTCOMES:
        raise ValueError(f"{c.n}**{t} outcome tuples exceed the enumeration limit")
    probs = c.probabilities
    s = _scores(c)
    tuples = np.array(list(itertools.product(range(c.n), repeat=t)))
    weight = np.prod(probs[tuples], axis=1)
    score = s[tuples].sum(axis=1)
    return (score.T * weight) @ score


def jeffreys_density_arrays(probabilities) -> np.ndarray:
    """Jeffreys density at each row of an ``(m, n)`` array of full
    probability vectors.  Rows are assumed to lie inside the simplex."""
    p = np.atleast_2d(np.asarray(probabilities, dtype=float))
    n = p.shape[-1]
    log_norm = math.lgamma(n / 2) - (n / 2) * math.log(math.pi)
    return np.exp(log_norm - 0.5 * np.sum(np.log(p), axis=-1))


def jeffreys_density(c: Categorical) -> float:
    """Normalised Jeffreys density Gamma(n/2) / pi^(n/2) * prod theta_x^(-1/2)."""
    return float(jeffreys_density_arrays(c.probabilities)[0])
