"""Univariate Charlier and Hermite polynomials with their ladder operators.

The orthonormalized Charlier polynomials serve as the oracle for the
bivariate family (they are its theta=0 factorization) and as the target
of the continuum limit, via the Hermite polynomials.
"""
import math
from dataclasses import dataclass

__all__ = [
    "charlier_standard",
    "charlier_orthonormal",
    "hermite",
    "poisson_weight",
    "ladder_lower",
    "ladder_raise",
    "CheckReport",
    "univariate_ladder_check",
    "univariate_difference_check",
    "orthonormality_residual",
    "generating_residual",
    "weight_cutoff",
]


def charlier_standard(n: int, x: int, a: float) -> float:
    """Standard Charlier polynomial C_n(x, a) as a terminating 2F0 sum.

    The sum has min(n, x) + 1 nonzero terms; each term is built with a
    running product, so there is no truncation error beyond rounding.
    """
    if a <= 0:
        raise ValueError(f"Charlier parameter must be positive, got a={a}")
    if n < 0 or x < 0:
        raise ValueError("n and x must be nonnegative integers")
    total = 1.0
    term = 1.0
    for k in range(1, min(n, x) + 1):
        # (-n)_k (-x)_k / k! * (-1/a)^k, built incrementally
        term *= (-n + k - 1) * (-x + k - 1) / k * (-1.0 / a)
        total += term
    return total


def charlier_orthonormal(n: int, x: int, a: float) -> float:
    """Orthonormalized Charlier polynomial (-a)^n / sqrt(n!) * C_n(x, a^2)."""
    return (-a) ** n / math.sqrt(math.factorial(n)) * charlier_standard(n, x, a * a)


def hermite(n: int, x: float) -> float:
    """Physicists' Hermite polynomial H_n(x) by three-term recurrence."""
    if n == 0:
        return 1.0
    h_prev, h = 1.0, 2.0 * x
    for k in range(1, n):
        h_prev, h = h, 2.0 * x * h - 2.0 * k * h_prev
    return h


def poisson_weight(x: int, a: float) -> float:
    """Poisson orthogonality weight a^(2x) e^(-a^2) / x!, in log space."""
    return math.exp(2 * x * math.log(a) - a * a - math.lgamma(x + 1))


def ladder_lower(n: int, x: int, a: float) -> float:
    """Action of the lowering operator a (T+ - 1) on the orthonormalized
    polynomial of degree n, evaluated at x."""
    return a * (charlier_orthonormal(n, x + 1, a) - charlier_orthonormal(n, x, a))


def ladder_raise(n: int, x: int, a: float) -> float:
    """Action of the raising operator -a + (x/a) T- on the orthonormalized
    polynomial of degree n, evaluated at x.  The T- term carries an x
    coefficient, so x = 0 needs no value below the lattice."""
    out = -a * charlier_orthonormal(n, x, a)
    if x > 0:
        out += x / a * charlier_orthonormal(n, x - 1, a)
    return out


@dataclass
class CheckReport:
    """Max absolute residual of an identity check and where it occurred."""

    max_residual: float
    location: tuple
    note: str = ""

    def ok(self, tol: float) -> bool:
        return self.max_residual < tol


def univariate_ladder_check(n_max: int, x_max: int, a: float) -> CheckReport:
    """Verify the raising/lowering actions pointwise.

    Lowering must give sqrt(n) times the degree-(n-1) polynomial and
    raising sqrt(n+1) times the degree-(n+1) polynomial, for all
    n <= n_max, x <= x_max.  Valid in double precision for n_max <= 30,
    x_max <= 200.
    """
    worst = 0.0
    where = (0, 0, "lower")
    for n in range(n_max + 1):
        for x in range(x_max + 1):
            lo = ladder_lower(n, x, a)
            lo_target = math.sqrt(n) * charlier_orthonormal(n - 1, x, a) if n > 0 else 0.0
            hi = ladder_raise(n, x, a)
            hi_target = math.sqrt(n + 1) * charlier_orthonormal(n + 1, x, a)
            for tag, r in (("lower", abs(lo - lo_target)), ("raise", abs(hi - hi_target))):
                if r > worst:
                    worst, where = r, (n, x, tag)
    return CheckReport(worst, where)


def univariate_difference_check(n_max: int, x_max: int, a: float) -> CheckReport:
    """Verify the eigenvalue equation of the composed operator
    (raise o lower) C_n = n C_n pointwise.

    The composition expands to -a^2 T+ + (x + a^2) - x T-.  The note
    field reports the residual of the alternative diagonal (x^2 + a^2),
    which does NOT match the composition (off by x^2 - x); it is kept as
    a diagnostic so the mismatch is visible, not silently corrected.
    """
    worst = 0.0
    where = (0, 0)
    alt_worst = 0.0
    for n in range(n_max + 1):
        for x in range(x_max + 1):
            # raise applied to (lower C_n), i.e. the operator composition
            y = -a * ladder_lower(n, x, a)
            if x > 0:
                y += x / a * ladder_lower(n, x - 1, a)
            r = abs(y - n * charlier_orthonormal(n, x, a))
            if r > worst:
                worst, where = r, (n, x)
            # explicit stencil with diagonal (x^2 + a^2) instead of (x + a^2)
            alt = (
                -a * a * charlier_orthonormal(n, x + 1, a)
                + (x * x + a * a) * charlier_orthonormal(n, x, a)
                - (x * charlier_orthonormal(n, x - 1, a) if x > 0 else 0.0)
            )
            alt_worst = max(alt_worst, abs(alt - n * charlier_orthonormal(n, x, a)))
    note = (
        f"diagonal (x^2+a^2) variant max residual {alt_worst:.3e}; "
        "composition uses diagonal (x+a^2)"
    )
    return CheckReport(worst, where, note)


def weight_cutoff(a: float, tol: float = 1e-18) -> int:
    """Smallest X past which the Poisson weight stays below tol.

    The weight decays super-exponentially, so scanning until the weight
    drops below tol (past the mode at a^2) is a safe tail bound.
    """
    x = int(a * a) + 1
    while poisson_weight(x, a) >= tol:
        x += 1
    return x


def orthonormality_residual(n: int, m: int, a: float, x_max: int | None = None) -> float:
    """|sum_x w(x) Chat_n(x) Chat_m(x) - delta_nm| over a truncated window.

    Uses the weight *with* the e^(-a^2) normalization: that is the one
    that makes the n = m sum equal 1 (the plain a^(2x)/x! sum gives
    e^(a^2) for n = m = 0).

    Without an explicit x_max the sum is extended past the weight
    cutoff until the per-term contribution also drops below 1e-16: the
    polynomials grow with x, so the weight criterion alone is not
    enough at larger a.
    """
    s = 0.0
    x = 0
    while True:
        term = (
            poisson_weight(x, a)
            * charlier_orthonormal(n, x, a)
            * charlier_orthonormal(m, x, a)
        )
        s += term
        if x_max is not None:
            if x >= x_max:
                break
        elif x > a * a and poisson_weight(x, a) < 1e-18 and abs(term) < 1e-16:
            break
        x += 1
    return abs(s - (1.0 if n == m else 0.0))


def generating_residual(x: int, a: float, z: float, degree_cap: int = 40) -> float:
    """|e^(-az)(1 + z/a)^x - sum_n Chat_n(x) z^n / sqrt(n!)| truncated at
    degree_cap.  Accurate for |z| <= 0.3 or so with degree_cap >= 30."""
    lhs = math.exp(-a * z) * (1.0 + z / a) ** x
    rhs = sum(
        charlier_orthonormal(n, x, a) * z**n / math.sqrt(math.factorial(n))
        for n in range(degree_cap + 1)
    )
    return abs(lhs - rhs)
