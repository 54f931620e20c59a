"""Bivariate Charlier polynomials on the lattice N x N.

Two independent evaluation routes are provided: a ladder recursion
(the workhorse, valid for all parameters) and an explicit terminating
Aomoto-Gel'fand hypergeometric sum (a verification oracle, only valid
for generic parameters).
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import SingularParameters

__all__ = [
    "ModelParams",
    "log_weight",
    "weight",
    "weight_table",
    "charlier2_table",
    "charlier2_ladder",
    "charlier2_explicit",
    "params_generic",
    "default_window",
    "generating_residual",
    "orthogonality_residual",
]

#: magnitude below which a u-coefficient denominator counts as singular
SINGULAR_TOL = 1e-9


@dataclass(frozen=True)
class ModelParams:
    """Parameters (alpha, beta, theta) of the model.

    omega and zeta are the two rotated translation amounts; every
    operator coefficient is built from these five numbers.
    """

    alpha: float
    beta: float
    theta: float = 0.0

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0):
            raise ValueError(
                f"alpha and beta must be positive, got {self.alpha}, {self.beta}"
            )

    @property
    def omega(self) -> float:
        return self.alpha * math.cos(self.theta) - self.beta * math.sin(self.theta)

    @property
    def zeta(self) -> float:
        return self.alpha * math.sin(self.theta) + self.beta * math.cos(self.theta)


def log_weight(x1, x2, params: ModelParams):
    """log of the product Poisson weight; accepts scalars or arrays."""
    a2 = params.alpha * params.alpha
    b2 = params.beta * params.beta
    return (
        -(a2 + b2)
        + 2.0 * np.asarray(x1) * math.log(params.alpha)
        + 2.0 * np.asarray(x2) * math.log(params.beta)
        - gammaln(np.asarray(x1) + 1.0)
        - gammaln(np.asarray(x2) + 1.0)
    )


def weight(x1: int, x2: int, params: ModelParams) -> float:
    """Product Poisson weight w(x1, x2), strictly positive."""
    return float(np.exp(log_weight(x1, x2, params)))


def weight_table(m1: int, m2: int, params: ModelParams) -> np.ndarray:
    """Weight on the full window [0..m1] x [0..m2] as an array."""
    x1 = np.arange(m1 + 1)[:, None]
    x2 = np.arange(m2 + 1)[None, :]
    return np.exp(log_weight(x1, x2, params))


@functools.lru_cache(maxsize=512)
def charlier2_table(n1: int, n2: int, m1: int, m2: int, params: ModelParams) -> np.ndarray:
    """C_{n1,n2} on the window [0..m1] x [0..m2] via the ladder recursion.

    Starting from C_{0,0} = 1, apply the first raising operator n1 times
    and the second n2 times, dividing out the accumulated sqrt factors.
    The raising operators only shift arguments *down* and every down
    shift carries an x coefficient, so the window is closed under the
    recursion and no values outside it are ever needed.

    The returned array is cached and must not be mutated by callers.
    """
    c, s = math.cos(params.theta), math.sin(params.theta)
    x1 = np.arange(m1 + 1, dtype=float)[:, None]
    x2 = np.arange(m2 + 1, dtype=float)[None, :]
    cur = np.ones((m1 + 1, m2 + 1))
    for k in range(n1):
        nxt = -params.omega * cur
        nxt[1:, :] += (x1[1:, :] / params.alpha) * c * cur[:-1, :]
        nxt[:, 1:] -= (x2[:, 1:] / params.beta) * s * cur[:, :-1]
        cur = nxt / math.sqrt(k + 1)
    for k in range(n2):
        nxt = -params.zeta * cur
        nxt[1:, :] += (x1[1:, :] / params.alpha) * s * cur[:-1, :]
        nxt[:, 1:] += (x2[:, 1:] / params.beta) * c * cur[:, :-1]
        cur = nxt / math.sqrt(k + 1)
    cur.setflags(write=False)
    return cur


def charlier2_ladder(n1: int, n2: int, x1: int, x2: int, params: ModelParams) -> float:
    """Pointwise C_{n1,n2}(x1, x2) by the ladder route.

    Tables are grown in power-of-two sizes so that repeated pointwise
    calls over a region hit the same cached table.
    """
    if min(n1, n2, x1, x2) < 0:
        raise ValueError("indices must be nonnegative")
    m1 = max(8, 1 << (x1.bit_length()))
    m2 = max(8, 1 << (x2.bit_length()))
    return float(charlier2_table(n1, n2, m1, m2, params)[x1, x2])


def _u_denominators(params: ModelParams) -> tuple[float, float, float, float]:
    a, b = params.alpha, params.beta
    c, s = math.cos(params.theta), math.sin(params.theta)
    return (
        a * a * c - a * b * s,
        a * a * s + a * b * c,
        b * b * s - a * b * c,
        b * b * c + a * b * s,
    )


def params_generic(params: ModelParams) -> bool:
    """True iff the explicit hypergeometric route is numerically safe:
    the prefactor amounts omega, zeta and all four u denominators are
    bounded away from zero.  theta = 0 is generic (two u coefficients
    are then exactly zero, which is well-defined)."""
    if abs(params.omega) <= SINGULAR_TOL or abs(params.zeta) <= SINGULAR_TOL:
        return False
    return all(abs(d) > SINGULAR_TOL for d in _u_denominators(params))


def _falling(arg: int, kmax: int) -> np.ndarray:
    """Pochhammer vector (-arg)_k for k = 0..kmax."""
    out = np.ones(kmax + 1)
    for k in range(1, kmax + 1):
        out[k] = out[k - 1] * (-arg + k - 1)
    return out


def charlier2_explicit(n1: int, n2: int, x1: int, x2: int, params: ModelParams) -> float:
    """C_{n1,n2}(x1, x2) by the explicit Aomoto-Gel'fand sum.

    A terminating quadruple sum over (rho, sigma, mu, nu) with
    rho + mu <= n1, sigma + nu <= n2, rho + sigma <= x1, mu + nu <= x2,
    times the prefactor (-1)^(n1+n2) omega^n1 zeta^n2 / sqrt(n1! n2!).
    Raises SingularParameters outside the generic parameter region.
    """
    if not params_generic(params):
        raise SingularParameters(
            f"explicit route undefined near omega/zeta = 0: {params}"
        )
    dens = _u_denominators(params)
    c, s = math.cos(params.theta), math.sin(params.theta)
    u11, u12, u21, u22 = -c / dens[0], -s / dens[1], -s / dens[2], -c / dens[3]

    # rho, mu <= n1; sigma, nu <= n2 (the x constraints only mask terms)
    rho = np.arange(n1 + 1)
    sig = np.arange(n2 + 1)
    mu = np.arange(n1 + 1)
    nu = np.arange(n2 + 1)
    R, S, M, V = np.meshgrid(rho, sig, mu, nu, indexing="ij", sparse=False)

    pn1 = _falling(n1, 2 * n1)
    pn2 = _falling(n2, 2 * n2)
    px1 = _falling(x1, n1 + n2)
    px2 = _falling(x2, n1 + n2)
    inv_fact = np.exp(-gammaln(np.arange(max(n1, n2) + 1) + 1.0))

    terms = (
        pn1[R + M]
        * pn2[S + V]
        * px1[R + S]
        * px2[M + V]
        * inv_fact[R] * inv_fact[S] * inv_fact[M] * inv_fact[V]
        * (u11 ** R) * (u12 ** S) * (u21 ** M) * (u22 ** V)
    )
    total = float(terms.sum())
    pref = (
        (-1.0) ** (n1 + n2)
        * params.omega**n1
        * params.zeta**n2
        / math.sqrt(math.factorial(n1) * math.factorial(n2))
    )
    return pref * total


def default_window(params: ModelParams, tail_tol: float = 1e-22) -> tuple[int, int]:
    """Window bounds past which the weight is below tail_tol on both axes."""
    from .univariate import weight_cutoff

    return weight_cutoff(params.alpha, tail_tol), weight_cutoff(params.beta, tail_tol)


def generating_residual(
    params: ModelParams,
    z1: float,
    z2: float,
    x1: int,
    x2: int,
    degree_cap: int = 30,
) -> float:
    """|closed-form generating function - truncated double series| at one
    lattice point.  Reliable for |z| <= 0.3 with degree_cap >= 30."""
    c, s = math.cos(params.theta), math.sin(params.theta)
    a, b = params.alpha, params.beta
    lhs = (
        math.exp(-z1 * params.omega - z2 * params.zeta)
        * (1.0 + z1 / a * c + z2 / a * s) ** x1
        * (1.0 - z1 / b * s + z2 / b * c) ** x2
    )
    rhs = 0.0
    for n1 in range(degree_cap + 1):
        for n2 in range(degree_cap + 1 - n1):
            coef = z1**n1 * z2**n2
            if coef == 0.0:
                continue
            rhs += (
                charlier2_ladder(n1, n2, x1, x2, params)
                * coef
                / math.sqrt(math.factorial(n1) * math.factorial(n2))
            )
    return abs(lhs - rhs)


def orthogonality_residual(
    params: ModelParams,
    n: tuple[int, int],
    m: tuple[int, int],
    window: tuple[int, int] | None = None,
) -> float:
    """|sum_x w C_n C_m - delta_nm| over a truncation window."""
    if window is None:
        window = default_window(params)
    m1, m2 = window
    w = weight_table(m1, m2, params)
    cn = charlier2_table(n[0], n[1], m1, m2, params)
    cm = charlier2_table(m[0], m[1], m1, m2, params)
    s = float((w * cn * cm).sum())
    return abs(s - (1.0 if n == m else 0.0))
