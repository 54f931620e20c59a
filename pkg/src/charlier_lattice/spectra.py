"""Energy eigenfunctions, degeneracy structure and matrix diagnostics.

The wavefunctions at energy N are the bivariate Charlier polynomials of
total degree N, relabelled by n = 0..N; their square-root-weighted
versions form an orthonormal family on the lattice.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bivariate import (
    ModelParams,
    charlier2_ladder,
    charlier2_table,
    default_window,
    log_weight,
)
from .errors import OutOfDomain
from .operators import LatticeOperator, gauge_transform, j_plus_minus

__all__ = [
    "TruncationSpec",
    "default_truncation",
    "phi",
    "upsilon",
    "upsilon_table",
    "gram_matrix",
    "DegeneracyReport",
    "degeneracy_report",
    "completeness_partial_sum",
    "truncated_matrix",
]


@dataclass(frozen=True)
class TruncationSpec:
    """Finite window [0..m1] x [0..m2] with the tail tolerance that
    justified it."""

    m1: int
    m2: int
    tail_tol: float = 1e-22


def default_truncation(params: ModelParams, tail_tol: float = 1e-22) -> TruncationSpec:
    m1, m2 = default_window(params, tail_tol)
    return TruncationSpec(m1, m2, tail_tol)


def phi(N: int, n: int, x1: int, x2: int, params: ModelParams) -> float:
    """Energy-N eigenfunction in the polynomial basis: the bivariate
    Charlier polynomial with degrees (n, N - n)."""
    if not 0 <= n <= N:
        raise ValueError(f"need 0 <= n <= N, got n={n}, N={N}")
    return charlier2_ladder(n, N - n, x1, x2, params)


def upsilon(N: int, n: int, x1: int, x2: int, params: ModelParams) -> float:
    """Square-root-weighted eigenfunction, normalized in plain l2."""
    half_log_w = 0.5 * float(log_weight(x1, x2, params))
    return float(np.exp(half_log_w)) * phi(N, n, x1, x2, params)


def upsilon_table(N: int, n: int, trunc: TruncationSpec, params: ModelParams) -> np.ndarray:
    """Weighted eigenfunction on the whole window as an array."""
    if not 0 <= n <= N:
        raise ValueError(f"need 0 <= n <= N, got n={n}, N={N}")
    x1 = np.arange(trunc.m1 + 1)[:, None]
    x2 = np.arange(trunc.m2 + 1)[None, :]
    sqrt_w = np.exp(0.5 * log_weight(x1, x2, params))
    return sqrt_w * charlier2_table(n, N - n, trunc.m1, trunc.m2, params)


def gram_matrix(N: int, params: ModelParams, trunc: TruncationSpec | None = None) -> np.ndarray:
    """Inner products of the N + 1 weighted eigenfunctions at energy N;
    should be the identity matrix."""
    if trunc is None:
        trunc = default_truncation(params)
    states = [upsilon_table(N, n, trunc, params) for n in range(N + 1)]
    g = np.empty((N + 1, N + 1))
    for i in range(N + 1):
        for j in range(i + 1):
            g[i, j] = g[j, i] = float((states[i] * states[j]).sum())
    return g


@dataclass
class DegeneracyReport:
    """Residuals of the checks on one fixed-energy multiplet."""

    N: int
    gram_residual: float
    energy_residual: float
    ladder_up_residual: float
    ladder_down_residual: float
    edge_residual: float
    details: dict = field(default_factory=dict)

    def max_residual(self) -> float:
        return max(
            self.gram_residual,
            self.energy_residual,
            self.ladder_up_residual,
            self.ladder_down_residual,
            self.edge_residual,
        )


def degeneracy_report(
    N: int,
    params: ModelParams,
    trunc: TruncationSpec | None = None,
    probe_window: tuple[int, int] = (8, 8),
) -> DegeneracyReport:
    """Verify the (N + 1)-fold multiplet at energy N: orthonormality,
    the energy eigenvalue, the raising/lowering chain inside the
    multiplet with its square-root coefficients, and annihilation at
    both ends of the chain."""
    from .operators import hamiltonian_explicit, max_abs_residual

    if trunc is None:
        trunc = default_truncation(params)
    g = gram_matrix(N, params, trunc)
    gram_res = float(np.abs(g - np.eye(N + 1)).max())

    h = hamiltonian_explicit(params)
    jp, jm = j_plus_minus(params)
    m1, m2 = probe_window
    energy_res = 0.0
    up_res = 0.0
    down_res = 0.0
    edge_res = 0.0
    for n in range(N + 1):
        f = lambda x1, x2, n=n: phi(N, n, x1, x2, params)
        energy_res = max(
            energy_res,
            max_abs_residual(h.apply(f), lambda x1, x2, n=n: N * phi(N, n, x1, x2, params), probe_window),
        )
        if n < N:
            coef = np.sqrt((n + 1) * (N - n))
            target = lambda x1, x2, n=n, c=coef: c * phi(N, n + 1, x1, x2, params)
            up_res = max(up_res, max_abs_residual(jp.apply(f), target, probe_window))
        else:
            edge_res = max(
                edge_res, max_abs_residual(jp.apply(f), lambda x1, x2: 0.0, probe_window)
            )
        if n > 0:
            coef = np.sqrt(n * (N - n + 1))
            target = lambda x1, x2, n=n, c=coef: c * phi(N, n - 1, x1, x2, params)
            down_res = max(down_res, max_abs_residual(jm.apply(f), target, probe_window))
        else:
            edge_res = max(
                edge_res, max_abs_residual(jm.apply(f), lambda x1, x2: 0.0, probe_window)
            )
    return DegeneracyReport(N, gram_res, energy_res, up_res, down_res, edge_res)


def completeness_partial_sum(
    x: tuple[int, int],
    xp: tuple[int, int],
    n_max: int,
    params: ModelParams,
) -> float:
    """Partial sum over energies N <= n_max of the completeness kernel
    at the lattice points x and x'.  Converges (slowly, no rate is
    claimed) to 1 for x = x' and 0 otherwise."""
    total = 0.0
    for N in range(n_max + 1):
        for n in range(N + 1):
            total += upsilon(N, n, x[0], x[1], params) * upsilon(N, n, xp[0], xp[1], params)
    return total


def truncated_matrix(
    op: LatticeOperator,
    trunc: TruncationSpec,
    params: ModelParams | None = None,
    gauged: bool = False,
    strict: bool = False,
) -> tuple[np.ndarray, list[int]]:
    """Matrix of op in the point basis of the window, with row index
    x1 * (m2 + 1) + x2.

    Stencil reads leaving the window through the upper edges are
    dropped (the weight there is below the tail tolerance); the indices
    of the affected rows are returned so callers can see where the
    truncation acts.  With strict=True such reads raise OutOfDomain
    instead.  Eigenvalues of the gauged Hamiltonian on a large window
    approximate 0, 1, 2, ... from below the tail; only low-lying ones
    should be trusted.
    """
    if gauged:
        if params is None:
            raise ValueError("gauged matrix needs model parameters")
        op = gauge_transform(op, params)
    m1, m2 = trunc.m1, trunc.m2
    size = (m1 + 1) * (m2 + 1)
    mat = np.zeros((size, size), dtype=complex)
    boundary_rows: list[int] = []
    for x1 in range(m1 + 1):
        for x2 in range(m2 + 1):
            row = x1 * (m2 + 1) + x2
            for (d1, d2), c in op.terms.items():
                cv = c(x1, x2)
                if cv == 0:
                    continue
                y1, y2 = x1 + d1, x2 + d2
                if y1 < 0 or y2 < 0:
                    raise OutOfDomain(
                        f"unguarded shift reads ({y1}, {y2}) below the lattice"
                    )
                if y1 > m1 or y2 > m2:
                    if strict:
                        raise OutOfDomain(
                            f"stencil read ({y1}, {y2}) exits the window"
                        )
                    boundary_rows.append(row)
                    continue
                mat[row, y1 * (m2 + 1) + y2] += cv
    if np.abs(mat.imag).max() == 0.0:
        mat = mat.real
    return mat, sorted(set(boundary_rows))
