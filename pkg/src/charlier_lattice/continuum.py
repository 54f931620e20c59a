"""Continuum limit of the lattice model to the standard 2D oscillator.

Under the scaling x_i = sqrt(2) * scale * xt_i + scale^2 (with
alpha = beta = scale) the weighted lattice eigenfunctions converge to
Hermite-Gaussian oscillator wavefunctions, the Poisson weight to the
Gaussian, and the gauged discrete ladder operators to creation and
annihilation operators.  For theta != 0 the limiting Hermite product
lives in the rotated coordinates
xh1 = cos(theta) xt1 - sin(theta) xt2, xh2 = sin(theta) xt1 + cos(theta) xt2.

Discrete l2 sums match continuum L2 integrals after multiplying
amplitudes by sqrt(grid spacing) per axis; with spacing
1/(sqrt(2) * scale) on both axes the conversion factor for values is
sqrt(sqrt(2) alpha) * sqrt(sqrt(2) beta) = sqrt(2) * scale.

The factorization of the polynomials at theta = 0 into orthonormalized
univariate Charlier polynomials holds with constant exactly 1 (verified
numerically by fitting the ratio; see tests), so no extra constant
enters any of the limits below.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bivariate import ModelParams
from .operators import gauge_transform, lowering, raising
from .spectra import upsilon
from .univariate import hermite, poisson_weight

__all__ = [
    "ScalingMap",
    "oscillator_wavefunction",
    "continuum_ladder_target",
    "density_factor",
    "wavefunction_limit_error",
    "weight_limit_error",
    "ladder_limit_error",
    "fit_limit_constant",
]


@dataclass(frozen=True)
class ScalingMap:
    """Affine map between lattice coordinates and oscillator coordinates,
    x_i = sqrt(2) a_i xt_i + a_i^2 with a_1 = alpha, a_2 = beta."""

    alpha: float
    beta: float

    def to_lattice(self, xt1: float, xt2: float) -> tuple[float, float]:
        return (
            math.sqrt(2) * self.alpha * xt1 + self.alpha**2,
            math.sqrt(2) * self.beta * xt2 + self.beta**2,
        )

    def from_lattice(self, x1: float, x2: float) -> tuple[float, float]:
        return (
            (x1 - self.alpha**2) / (math.sqrt(2) * self.alpha),
            (x2 - self.beta**2) / (math.sqrt(2) * self.beta),
        )

    def lattice_window(self, half_width: float) -> tuple[range, range]:
        """Lattice points whose mapped coordinates fall within
        [-half_width, half_width] on each axis."""
        lo1, hi1 = (self.to_lattice(-half_width, -half_width),
                    self.to_lattice(half_width, half_width))
        r1 = range(max(0, math.ceil(lo1[0])), math.floor(hi1[0]) + 1)
        r2 = range(max(0, math.ceil(lo1[1])), math.floor(hi1[1]) + 1)
        return r1, r2


def oscillator_wavefunction(N: int, n: int, xt1: float, xt2: float) -> float:
    """2D oscillator eigenfunction: Gaussian times a product of Hermite
    polynomials of degrees n and N - n, L2-normalized."""
    if not 0 <= n <= N:
        raise ValueError(f"need 0 <= n <= N, got n={n}, N={N}")
    norm = 1.0 / math.sqrt(
        math.pi * 2.0**N * math.factorial(n) * math.factorial(N - n)
    )
    return (
        norm
        * math.exp(-(xt1 * xt1 + xt2 * xt2) / 2.0)
        * hermite(n, xt1)
        * hermite(N - n, xt2)
    )


def continuum_ladder_target(which: str, N: int, n: int):
    """Continuum image of a gauged discrete ladder operator applied to
    the (N, n) oscillator state, as a function of the rotated
    coordinates.

    The gauged operators tend to theta-rotated combinations of the
    axis creation/annihilation operators; rotating the coordinate frame
    by the same theta collapses each combination to a single rotated-
    frame ladder operator, whose action follows from the Hermite
    recurrences: raising multiplies by sqrt(degree + 1) and bumps the
    degree, lowering by sqrt(degree) and drops it.
    """
    if which == "raise1":
        return lambda xh1, xh2: math.sqrt(n + 1) * oscillator_wavefunction(
            N + 1, n + 1, xh1, xh2
        )
    if which == "raise2":
        return lambda xh1, xh2: math.sqrt(N - n + 1) * oscillator_wavefunction(
            N + 1, n, xh1, xh2
        )
    if which == "lower1":
        if n == 0:
            return lambda xh1, xh2: 0.0
        return lambda xh1, xh2: math.sqrt(n) * oscillator_wavefunction(
            N - 1, n - 1, xh1, xh2
        )
    if which == "lower2":
        if n == N:
            return lambda xh1, xh2: 0.0
        return lambda xh1, xh2: math.sqrt(N - n) * oscillator_wavefunction(
            N - 1, n, xh1, xh2
        )
    raise ValueError("which must be raise1, raise2, lower1 or lower2")


def density_factor(params: ModelParams) -> float:
    """Amplitude conversion from discrete l2 to continuum L2 density:
    sqrt of the inverse grid spacing per axis."""
    return math.sqrt(math.sqrt(2) * params.alpha) * math.sqrt(
        math.sqrt(2) * params.beta
    )


def _rotated(xt1: float, xt2: float, theta: float) -> tuple[float, float]:
    c, s = math.cos(theta), math.sin(theta)
    return c * xt1 - s * xt2, s * xt1 + c * xt2


def wavefunction_limit_error(
    N: int,
    n: int,
    scale: float,
    theta: float = 0.0,
    window: float = 2.0,
) -> float:
    """Sup over lattice points mapping into the window of the difference
    between the density-scaled weighted eigenfunction and the continuum
    oscillator state in the rotated coordinates."""
    params = ModelParams(scale, scale, theta)
    smap = ScalingMap(scale, scale)
    factor = density_factor(params)
    r1, r2 = smap.lattice_window(window)
    worst = 0.0
    for x1 in r1:
        for x2 in r2:
            xt1, xt2 = smap.from_lattice(x1, x2)
            xh1, xh2 = _rotated(xt1, xt2, theta)
            d = factor * upsilon(N, n, x1, x2, params)
            cont = oscillator_wavefunction(N, n, xh1, xh2)
            worst = max(worst, abs(d - cont))
    return worst


def weight_limit_error(scale: float, window: float = 2.0) -> float:
    """Sup over lattice points in the window of the difference between
    the density-scaled 1D Poisson weight and the Gaussian."""
    smap = ScalingMap(scale, scale)
    r1, _ = smap.lattice_window(window)
    worst = 0.0
    for x1 in r1:
        xt1 = smap.from_lattice(x1, 0.0)[0]
        d = math.sqrt(2) * scale * poisson_weight(x1, scale)
        cont = math.exp(-xt1 * xt1) / math.sqrt(math.pi)
        worst = max(worst, abs(d - cont))
    return worst


_GAUGED_OPS = {
    "raise1": lambda p: gauge_transform(raising(1, p), p),
    "raise2": lambda p: gauge_transform(raising(2, p), p),
    "lower1": lambda p: gauge_transform(lowering(1, p), p),
    "lower2": lambda p: gauge_transform(lowering(2, p), p),
}


def ladder_limit_error(
    which: str,
    N: int,
    n: int,
    scale: float,
    theta: float = 0.0,
    window: float = 2.0,
) -> float:
    """Sup discrepancy between a gauged discrete ladder operator applied
    to the weighted (N, n) eigenfunction (density-scaled) and its
    continuum ladder image."""
    if which not in _GAUGED_OPS:
        raise ValueError("which must be raise1, raise2, lower1 or lower2")
    params = ModelParams(scale, scale, theta)
    smap = ScalingMap(scale, scale)
    factor = density_factor(params)
    op = _GAUGED_OPS[which](params)
    f = op.apply(lambda x1, x2: upsilon(N, n, x1, x2, params))
    target = continuum_ladder_target(which, N, n)
    r1, r2 = smap.lattice_window(window)
    worst = 0.0
    for x1 in r1:
        for x2 in r2:
            xt1, xt2 = smap.from_lattice(x1, x2)
            xh1, xh2 = _rotated(xt1, xt2, theta)
            worst = max(worst, abs(factor * f(x1, x2) - target(xh1, xh2)))
    return worst


def fit_limit_constant(
    N: int, n: int, scale: float, theta: float = 0.0, window: float = 1.0
) -> float:
    """Least-squares constant relating the density-scaled discrete
    eigenfunction to the continuum one at the given scale; reported so
    the resolved normalization (it comes out 1) is on record."""
    params = ModelParams(scale, scale, theta)
    smap = ScalingMap(scale, scale)
    factor = density_factor(params)
    r1, r2 = smap.lattice_window(window)
    num = 0.0
    den = 0.0
    for x1 in r1:
        for x2 in r2:
            xt1, xt2 = smap.from_lattice(x1, x2)
            xh1, xh2 = _rotated(xt1, xt2, theta)
            d = factor * upsilon(N, n, x1, x2, params)
            cont = oscillator_wavefunction(N, n, xh1, xh2)
            num += d * cont
            den += cont * cont
    return num / den
