"""Aggregation operators f(a, b) estimating P(X∧Y) from P(X) and P(Y).

All operators are vectorised: they accept floats or numpy arrays.
"""

from __future__ import annotations

import enum
from typing import Callable

import numpy as np

from .core_bounds import Marginals
from .posterior_loss import optimal_estimate_arrays

Operator = Callable[[np.ndarray, np.ndarray], np.ndarray]


def product(a, b):
    return np.multiply(a, b)


def hamacher_zero(a, b):
    """Hamacher product with gamma = 0: ab / (a + b - ab), and 0 at (0, 0)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    num = a * b
    den = a + b - num
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(den > 0.0, num / np.where(den > 0.0, den, 1.0), 0.0)
    return out if out.ndim else float(out)


def minimum(a, b):
    return np.minimum(a, b)


def lukasiewicz(a, b):
    return np.maximum(np.add(a, b) - 1.0, 0.0)


def optimal(a, b):
    """A/(A+B): the minimiser of expected KL loss under Jeffreys' prior."""
    out = optimal_estimate_arrays(a, b)
    return out if np.ndim(out) else float(out)


class OperatorId(enum.Enum):
    OPTIMAL = "optimal"
    PRODUCT = "product"
    HAMACHER_ZERO = "hamacher0"
    MIN = "min"
    LUKASIEWICZ = "lukasiewicz"

    @property
    def function(self) -> Operator:
        return _FUNCTIONS[self]

    @property
    def label(self) -> str:
        return _LABELS[self]

    @classmethod
    def parse(cls, name: str) -> OperatorId:
        try:
            return cls(name.strip().lower())
        except ValueError:
            names = ", ".join(op.value for op in cls)
            raise ValueError(f"unknown operator {name!r}; choose from {names}") from None


_FUNCTIONS: dict[OperatorId, Operator] = {
    OperatorId.OPTIMAL: optimal,
    OperatorId.PRODUCT: product,
    OperatorId.HAMACHER_ZERO: hamacher_zero,
    OperatorId.MIN: minimum,
    OperatorId.LUKASIEWICZ: lukasiewicz,
}

_LABELS = {
    OperatorId.OPTIMAL: "Optimal",
    OperatorId.PRODUCT: "Product",
    OperatorId.HAMACHER_ZERO: "Hamacher (gamma=0)",
    OperatorId.MIN: "Min",
    OperatorId.LUKASIEWICZ: "Lukasiewicz",
}


def apply_operator(op: OperatorId | str, m: Marginals) -> float:
    if isinstance(op, str):
        op = OperatorId.parse(op)
    return float(op.function(m.a, m.b))
