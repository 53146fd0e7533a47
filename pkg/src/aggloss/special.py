"""Elliptic integrals of the first kind.

    K(phi, m) = integral_0^phi (1 - m sin^2 t)^(-1/2) dt

The complete integral K(m) = K(pi/2, m) is computed by the
arithmetic-geometric mean, K(m) = pi / (2 AGM(1, sqrt(1-m))); the incomplete
one by Carlson's symmetric form, K(phi, m) = sin(phi) R_F(cos^2 phi,
1 - m sin^2 phi, 1).  Both are vectorised over numpy arrays.

Near m = 1 the complete integral has a logarithmic singularity, and 1 - m
formed by subtraction loses digits.  :func:`complete_elliptic_K` therefore
accepts the complementary parameter directly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core_bounds import DomainError, Marginals, feasible_interval

#: Largest parameter the complete integral is evaluated at.
M_MAX = 1.0 - 1e-14

_AGM_TOL = 4.0 * np.finfo(float).eps
_RF_ERRTOL = 1e-3


@dataclass(frozen=True)
class EllipticArgs:
    phi: float
    m: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.phi <= math.pi / 2):
            raise DomainError(f"amplitude phi={self.phi!r} outside [0, pi/2]")
        if not (0.0 <= self.m <= 1.0):
            raise DomainError(f"parameter m={self.m!r} outside [0, 1]")
        if self.m * math.sin(self.phi) ** 2 >= 1.0:
            raise DomainError(f"m sin^2(phi) >= 1 for {self!r}")


def _agm(a, g):
    a = np.array(a, dtype=float, copy=True)
    g = np.array(g, dtype=float, copy=True)
    for _ in range(64):
        if np.all(np.abs(a - g) <= _AGM_TOL * a):
            break
        a, g = 0.5 * (a + g), np.sqrt(a * g)
    return 0.5 * (a + g)


def complete_elliptic_K(m=None, *, mc=None):
    """Complete elliptic integral of the first kind K(m).

    Parameters
    ----------
    m : float or array_like, optional
        Parameter in [0, 1).
    mc : float or array_like, optional
        Complementary parameter 1 - m.  Pass this instead of ``m`` when it
        is known more accurately than ``m`` itself.

    Raises
    ------
    DomainError
        If ``m >= 1`` (beyond :data:`M_MAX`) or ``m < 0``.
    """
    if (m is None) == (mc is None):
        raise TypeError("pass exactly one of m or mc")
    if mc is None:
        m_arr = np.asarray(m, dtype=float)
        mc_arr = 1.0 - m_arr
    else:
        mc_arr = np.asarray(mc, dtype=float)
        m_arr = 1.0 - mc_arr
    if np.any(m_arr < 0.0) or np.any(mc_arr > 1.0):
        raise DomainError("parameter m must be non-negative")
    if np.any(mc_arr < 1.0 - M_MAX):
        raise DomainError("complete elliptic integral requested at m >= 1 - 1e-14")
    out = complete_K_from_complement(mc_arr)
    return out if out.ndim else float(out)


def complete_K_from_complement(mc):
    """K as a function of 1 - m, without the M_MAX guard.  ``mc`` > 0."""
    mc = np.asarray(mc, dtype=float)
    return 0.5 * math.pi / _agm(np.ones_like(mc), np.sqrt(mc))


def carlson_rf(x, y, z):
    """Carlson's symmetric integral R_F(x, y, z) by duplication.

    Arguments must be non-negative with at most one of them zero.
    """
    x = np.array(x, dtype=float, copy=True)
    y = np.array(y, dtype=float, copy=True)
    z = np.array(z, dtype=float, copy=True)
    x, y, z = np.broadcast_arrays(x, y, z)
    x, y, z = x.copy(), y.copy(), z.copy()
    for _ in range(100):
        mu = (x + y + z) / 3.0
        dev = np.maximum.reduce([np.abs(mu - x), np.abs(mu - y), np.abs(mu - z)])
        if np.all(dev <= _RF_ERRTOL * mu):
            break
        sx, sy, sz = np.sqrt(x), np.sqrt(y), np.sqrt(z)
        lam = sx * (sy + sz) + sy * sz
        x, y, z = 0.25 * (x + lam), 0.25 * (y + lam), 0.25 * (z + lam)
    mu = (x + y + z) / 3.0
    dx, dy, dz = 1.0 - x / mu, 1.0 - y / mu, 1.0 - z / mu
    e2 = dx * dy - dz * dz
    e3 = dx * dy * dz
    series = (
        1.0
        - e2 / 10.0
        + e3 / 14.0
        + e2 * e2 / 24.0
        - 3.0 * e2 * e3 / 44.0
        - 5.0 * e2**3 / 208.0
        + 3.0 * e3 * e3 / 104.0
        + e2 * e2 * e3 / 16.0
    )
    out = series / np.sqrt(mu)
    return out if out.ndim else float(out)


def incomplete_elliptic_K(phi, m=None):
    """Incomplete elliptic integral of the first kind K(phi, m).

    ``phi`` in [0, pi/2], ``m`` in [0, 1]; ``m sin^2(phi)`` must stay below 1.
    Accepts an :class:`EllipticArgs` as the sole argument as well.
    """
    if isinstance(phi, EllipticArgs):
        phi, m = phi.phi, phi.m
    elif m is None:
        raise TypeError("parameter m is required unless an EllipticArgs is given")
    phi = np.asarray(phi, dtype=float)
    m = np.asarray(m, dtype=float)
    if np.any(phi < 0.0) or np.any(phi > math.pi / 2) or np.any(m < 0.0):
        raise DomainError("phi must lie in [0, pi/2] and m must be non-negative")
    s = np.sin(phi)
    c = np.cos(phi)
    delta = 1.0 - m * s * s
    if np.any(delta <= 0.0):
        raise DomainError("m sin^2(phi) >= 1")
    out = s * carlson_rf(c * c, delta, np.ones_like(delta))
    out = np.asarray(out)
    return out if out.ndim else float(out)


def antiderivative_I(x: float, m: Marginals) -> float:
    """Antiderivative in theta11 of the Jeffreys density over (theta11, a, b).

    For b < a and a + b > 1 and ``x`` in the Fréchet interval,
    ``d/dx I(x; a, b) = pi^-2 (x (a-x) (b-x) (1+x-a-b))^-1/2``.
    ``I`` vanishes at the upper bound x = b, so the definite integral over
    the interval is ``-I(a+b-1; a, b)``.
    """
    a, b = m.a, m.b
    if not (b < a and a + b > 1.0):
        raise DomainError(f"antiderivative requires b < a and a + b > 1, got {m}")
    iv = feasible_interval(m)
    if not (iv.lo <= x <= iv.hi):
        raise DomainError(f"x={x!r} outside [{iv.lo}, {iv.hi}]")
    vb = b * (1.0 - b)
    param = a * (1.0 - a) / vb
    # sin^2 and cos^2 of the amplitude share the denominator (1-a)(a-x); the
    # cosine numerator (a-b)(x-lo) is formed directly so the amplitude stays
    # accurate near x = lo, where asin(sqrt(ratio)) would lose half the digits
    sin_num = (1.0 - b) * (b - x)
    total = a + b
    # rounding error of a + b (Knuth's TwoSum), which matters when x - lo is tiny
    b_virtual = total - a
    total_err = (a - (total - b_virtual)) + (b - b_virtual)
    cos_num = max((a - b) * ((x - (total - 1.0)) - total_err), 0.0)
    denom = sin_num + cos_num
    s2, c2 = sin_num / denom, cos_num / denom
    # 1 - m sin^2 = (1 - m) + m cos^2
    mc = (a - b) * (a + b - 1.0) / vb
    k = math.sqrt(s2) * carlson_rf(c2, mc + param * c2, 1.0)
    return -2.0 / math.pi**2 / math.sqrt(vb) * k
