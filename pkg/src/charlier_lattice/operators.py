"""Composable difference operators on lattice functions.

A lattice function is any callable f(x1, x2) -> complex defined on
N x N.  An operator is a finite stencil: a sum of terms
coeff(x1, x2) * shift-by-(d1, d2).  Sums, scalar multiples and
compositions of stencils are again stencils, so every identity of the
model (ladder actions, eigenvalue equations, su(2) table, Casimir,
gauge conjugation) can be checked pointwise and exactly, without any
truncation.

Boundary convention: a down shift is only ever read when its
coefficient is nonzero.  All operators of the model multiply their
down-shift terms by x1 or x2, so the lattice edge is annihilated by
the coefficient; an unguarded read below the lattice raises
OutOfDomain.
"""
from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .bivariate import ModelParams, log_weight
from .errors import OutOfDomain

Coeff = Callable[[int, int], complex]

__all__ = [
    "LatticeOperator",
    "stencil",
    "identity",
    "shift",
    "raising",
    "lowering",
    "eigen_op",
    "eigen_op_explicit",
    "cross_ops",
    "cross_ops_explicit",
    "hamiltonian",
    "hamiltonian_explicit",
    "su2_generators",
    "j_plus_minus",
    "casimir",
    "gauge_transform",
    "anisotropic_hamiltonian",
    "anisotropic_hamiltonian_explicit",
    "commutator",
    "random_probe",
    "max_abs_residual",
]


def _as_coeff(c) -> Coeff:
    if callable(c):
        return c
    return lambda x1, x2, _c=complex(c): _c


class LatticeOperator:
    """Finite difference operator sum_k c_k(x) T^(d_k)."""

    def __init__(self, terms: dict[tuple[int, int], Coeff]):
        self.terms = terms
        self.stencil_radius = max(
            (max(abs(d1), abs(d2)) for d1, d2 in terms), default=0
        )

    def apply(self, f: Callable) -> Callable:
        terms = self.terms

        def out(x1: int, x2: int):
            acc = 0.0 + 0.0j
            for (d1, d2), c in terms.items():
                cv = c(x1, x2)
                if cv == 0:
                    continue
                y1, y2 = x1 + d1, x2 + d2
                if y1 < 0 or y2 < 0:
                    raise OutOfDomain(
                        f"unguarded shift reads ({y1}, {y2}) below the lattice"
                    )
                acc += cv * f(y1, y2)
            return acc

        return out

    def __call__(self, f: Callable) -> Callable:
        return self.apply(f)

    def __add__(self, other: "LatticeOperator") -> "LatticeOperator":
        terms = dict(self.terms)
        for d, c in other.terms.items():
            if d in terms:
                c1, c2 = terms[d], c
                terms[d] = lambda x1, x2, a=c1, b=c2: a(x1, x2) + b(x1, x2)
            else:
                terms[d] = c
        return LatticeOperator(terms)

    def __sub__(self, other: "LatticeOperator") -> "LatticeOperator":
        return self + (-1.0) * other

    def __rmul__(self, scalar) -> "LatticeOperator":
        s = complex(scalar)
        return LatticeOperator(
            {d: (lambda x1, x2, c=c, s=s: s * c(x1, x2)) for d, c in self.terms.items()}
        )

    def __neg__(self) -> "LatticeOperator":
        return (-1.0) * self

    def __matmul__(self, other: "LatticeOperator") -> "LatticeOperator":
        """Operator composition self o other, expanded at stencil level:
        c_a(x) T^da c_b(x) T^db = c_a(x) c_b(x + da) T^(da+db).  The
        outer coefficient is checked first, so guarded boundary terms
        never evaluate the inner coefficient off-lattice."""
        out = LatticeOperator({})
        for da, ca in self.terms.items():
            for db, cb in other.terms.items():

                def comp(x1, x2, ca=ca, cb=cb, da=da):
                    cv = ca(x1, x2)
                    if cv == 0:
                        return 0.0
                    return cv * cb(x1 + da[0], x2 + da[1])

                out = out + LatticeOperator({(da[0] + db[0], da[1] + db[1]): comp})
        return out


def stencil(terms: dict[tuple[int, int], Coeff | complex]) -> LatticeOperator:
    return LatticeOperator({d: _as_coeff(c) for d, c in terms.items()})


def identity() -> LatticeOperator:
    return stencil({(0, 0): 1.0})


def shift(axis: int, direction: int) -> LatticeOperator:
    """Raw shift T^+/- along axis 1 or 2.  The down shift is unguarded;
    compose it with an x coefficient (as every model operator does)
    before applying near the boundary."""
    if axis not in (1, 2) or direction not in (1, -1):
        raise ValueError("axis must be 1 or 2, direction +1 or -1")
    d = (direction, 0) if axis == 1 else (0, direction)
    return stencil({d: 1.0})


def raising(i: int, params: ModelParams) -> LatticeOperator:
    """Raising operator for index n_i: sends C_{n1,n2} to
    sqrt(n_i + 1) times the polynomial with n_i raised by one."""
    c, s = math.cos(params.theta), math.sin(params.theta)
    a, b = params.alpha, params.beta
    if i == 1:
        return stencil(
            {
                (-1, 0): lambda x1, x2: x1 / a * c,
                (0, -1): lambda x1, x2: -x2 / b * s,
                (0, 0): -params.omega,
            }
        )
    if i == 2:
        return stencil(
            {
                (-1, 0): lambda x1, x2: x1 / a * s,
                (0, -1): lambda x1, x2: x2 / b * c,
                (0, 0): -params.zeta,
            }
        )
    raise ValueError("index must be 1 or 2")


def lowering(i: int, params: ModelParams) -> LatticeOperator:
    """Lowering operator for index n_i (annihilates C_{0,0})."""
    c, s = math.cos(params.theta), math.sin(params.theta)
    a, b = params.alpha, params.beta
    if i == 1:
        return stencil({(1, 0): a * c, (0, 1): -b * s, (0, 0): -params.omega})
    if i == 2:
        return stencil({(1, 0): a * s, (0, 1): b * c, (0, 0): -params.zeta})
    raise ValueError("index must be 1 or 2")


def eigen_op(i: int, params: ModelParams) -> LatticeOperator:
    """Y_i as the composition raising(i) o lowering(i); eigenvalue n_i
    on C_{n1,n2}."""
    return raising(i, params) @ lowering(i, params)


def eigen_op_explicit(i: int, params: ModelParams) -> LatticeOperator:
    """Y_i written out as a 9-point stencil (independent of eigen_op;
    used to cross-check the composition)."""
    c, s = math.cos(params.theta), math.sin(params.theta)
    a, b = params.alpha, params.beta
    om, ze = params.omega, params.zeta
    if i == 1:
        return stencil(
            {
                (-1, 1): lambda x1, x2: -x1 * b / a * c * s,
                (1, -1): lambda x1, x2: -x2 * a / b * c * s,
                (-1, 0): lambda x1, x2: -om * c * x1 / a,
                (1, 0): -om * c * a,
                (0, -1): lambda x1, x2: om * s * x2 / b,
                (0, 1): om * s * b,
                (0, 0): lambda x1, x2: x1 * c * c + x2 * s * s + om * om,
            }
        )
    if i == 2:
        return stencil(
            {
                (-1, 1): lambda x1, x2: x1 * b / a * c * s,
                (1, -1): lambda x1, x2: x2 * a / b * c * s,
                (-1, 0): lambda x1, x2: -ze * s * x1 / a,
                (1, 0): -ze * s * a,
                (0, -1): lambda x1, x2: -ze * c * x2 / b,
                (0, 1): -ze * c * b,
                (0, 0): lambda x1, x2: x1 * s * s + x2 * c * c + ze * ze,
            }
        )
    raise ValueError("index must be 1 or 2")


def cross_ops(params: ModelParams) -> tuple[LatticeOperator, LatticeOperator]:
    """The mixed products raising(1) o lowering(2) and raising(2) o
    lowering(1); they move one quantum between the two modes."""
    return (
        raising(1, params) @ lowering(2, params),
        raising(2, params) @ lowering(1, params),
    )


def cross_ops_explicit(params: ModelParams) -> tuple[LatticeOperator, LatticeOperator]:
    """Explicit 9-point stencils of the two mixed products."""
    c, s = math.cos(params.theta), math.sin(params.theta)
    a, b = params.alpha, params.beta
    om, ze = params.omega, params.zeta
    diag = lambda x1, x2: (x1 - x2) * s * c + om * ze
    op12 = stencil(
        {
            (-1, 1): lambda x1, x2: x1 * b / a * c * c,
            (1, -1): lambda x1, x2: -x2 * a / b * s * s,
            (-1, 0): lambda x1, x2: -x1 * ze / a * c,
            (1, 0): -a * om * s,
            (0, -1): lambda x1, x2: x2 * ze / b * s,
            (0, 1): -b * om * c,
            (0, 0): diag,
        }
    )
    op21 = stencil(
        {
            (-1, 1): lambda x1, x2: -x1 * b / a * s * s,
            (1, -1): lambda x1, x2: x2 * a / b * c * c,
            (-1, 0): lambda x1, x2: -x1 * om / a * s,
            (1, 0): -a * ze * c,
            (0, -1): lambda x1, x2: -x2 * om / b * c,
            (0, 1): b * ze * s,
            (0, 0): diag,
        }
    )
    return op12, op21


def hamiltonian(params: ModelParams) -> LatticeOperator:
    """H = Y_1 + Y_2 via the compositions."""
    return eigen_op(1, params) + eigen_op(2, params)


def hamiltonian_explicit(params: ModelParams) -> LatticeOperator:
    """H as its 5-point stencil.  The cross shifts cancel in Y_1 + Y_2
    and no coefficient involves theta: the stencil is the sum of two
    one-dimensional Charlier difference operators with parameters
    alpha^2 and beta^2."""
    a2 = params.alpha**2
    b2 = params.beta**2
    return stencil(
        {
            (-1, 0): lambda x1, x2: -x1,
            (1, 0): -a2,
            (0, -1): lambda x1, x2: -x2,
            (0, 1): -b2,
            (0, 0): lambda x1, x2: x1 + x2 + a2 + b2,
        }
    )


def su2_generators(params: ModelParams):
    """The three conserved quantities J_X, J_Y, J_Z built from the
    ladder operators (Schwinger-style).  J_Y carries a factor 1/(2i),
    so its coefficients are imaginary."""
    op12, op21 = cross_ops(params)
    jx = 0.5 * (op12 + op21)
    jy = (1.0 / 2j) * (op12 - op21)
    jz = 0.5 * (eigen_op(1, params) - eigen_op(2, params))
    return jx, jy, jz


def j_plus_minus(params: ModelParams) -> tuple[LatticeOperator, LatticeOperator]:
    """J+ = J_X + i J_Y and J- = J_X - i J_Y; within a fixed-energy
    multiplet these are the mixed products themselves."""
    jx, jy, _ = su2_generators(params)
    return jx + 1j * jy, jx - 1j * jy


def casimir(params: ModelParams) -> LatticeOperator:
    """J_X^2 + J_Y^2 + J_Z^2; equals (H/2)(H/2 + 1) on the lattice."""
    jx, jy, jz = su2_generators(params)
    return jx @ jx + jy @ jy + jz @ jz


def gauge_transform(op: LatticeOperator, params: ModelParams) -> LatticeOperator:
    """Conjugate op by the square root of the weight: w^(1/2) op w^(-1/2).

    Each stencil coefficient picks up sqrt(w(x) / w(x + d)), evaluated
    through the log weight so no tiny weights are ever divided.  The
    ratio diverges for down shifts at the boundary, but there the
    coefficient vanishes by the lattice convention and the term is
    dropped before the ratio is formed.
    """

    def gauged(c: Coeff, d: tuple[int, int]) -> Coeff:
        def g(x1, x2):
            cv = c(x1, x2)
            if cv == 0:
                return 0.0
            lw = log_weight(x1, x2, params) - log_weight(x1 + d[0], x2 + d[1], params)
            return cv * math.exp(0.5 * float(lw))

        return g

    return LatticeOperator({d: gauged(c, d) for d, c in op.terms.items()})


def anisotropic_hamiltonian(k1: float, k2: float, params: ModelParams) -> LatticeOperator:
    """k1 Y_1 + k2 Y_2, spectrum k1 n1 + k2 n2."""
    if k1 <= 0 or k2 <= 0:
        raise ValueError("frequencies k1, k2 must be positive")
    return k1 * eigen_op(1, params) + k2 * eigen_op(2, params)


def anisotropic_hamiltonian_explicit(
    k1: float, k2: float, params: ModelParams
) -> LatticeOperator:
    """Explicit 9-point stencil of the anisotropic Hamiltonian; for
    k1 != k2 the cross shifts survive and theta reappears."""
    c, s = math.cos(params.theta), math.sin(params.theta)
    a, b = params.alpha, params.beta
    om, ze = params.omega, params.zeta
    c1 = k1 * om * c + k2 * ze * s
    c2 = k1 * om * s - k2 * ze * c
    return stencil(
        {
            (-1, 1): lambda x1, x2: (k2 - k1) * x1 * b / a * c * s,
            (1, -1): lambda x1, x2: (k2 - k1) * x2 * a / b * c * s,
            (-1, 0): lambda x1, x2: -c1 * x1 / a,
            (1, 0): -c1 * a,
            (0, -1): lambda x1, x2: c2 * x2 / b,
            (0, 1): c2 * b,
            (0, 0): lambda x1, x2: k1 * (x1 * c * c + x2 * s * s + om * om)
            + k2 * (x1 * s * s + x2 * c * c + ze * ze),
        }
    )


def commutator(a: LatticeOperator, b: LatticeOperator) -> LatticeOperator:
    return a @ b - b @ a


def random_probe(seed: int, support: int = 12) -> Callable:
    """Finitely supported lattice function with fixed-seed complex
    coefficients on [0..support]^2; zero elsewhere.  Deterministic, so
    commutator checks are reproducible."""
    rng = np.random.default_rng(seed)
    table = rng.standard_normal((support + 1, support + 1)) + 1j * rng.standard_normal(
        (support + 1, support + 1)
    )

    def f(x1: int, x2: int):
        if 0 <= x1 <= support and 0 <= x2 <= support:
            return complex(table[x1, x2])
        return 0.0 + 0.0j

    return f


def max_abs_residual(f, g, window: tuple[int, int]) -> float:
    """Sup of |f - g| over the window [0..m1] x [0..m2]."""
    m1, m2 = window
    return max(
        abs(f(x1, x2) - g(x1, x2)) for x1 in range(m1 + 1) for x2 in range(m2 + 1)
    )
