import math

import numpy as np
import pytest

from charlier_lattice.bivariate import ModelParams, charlier2_ladder
from charlier_lattice.errors import OutOfDomain
from charlier_lattice.operators import (
    anisotropic_hamiltonian,
    anisotropic_hamiltonian_explicit,
    casimir,
    commutator,
    cross_ops,
    cross_ops_explicit,
    eigen_op,
    eigen_op_explicit,
    gauge_transform,
    hamiltonian,
    hamiltonian_explicit,
    identity,
    j_plus_minus,
    lowering,
    max_abs_residual,
    raising,
    random_probe,
    shift,
    stencil,
    su2_generators,
)

P = ModelParams(1.3, 0.8, 0.7)

# includes theta = 0 and an omega ~ 1e-6 set; composition-based
# operators must be well-behaved on all of them
PARAM_SETS = [
    P,
    ModelParams(1.2, 0.9, 0.4),
    ModelParams(1.1, 1.6, 0.0),
    ModelParams(2.0, 0.7, -0.9),
    ModelParams(1.0, 1.0, math.pi / 4 - 1e-6 / math.sqrt(2)),
]


def poly(n1, n2, params):
    return lambda x1, x2: charlier2_ladder(n1, n2, x1, x2, params)


def test_shift_semantics():
    f = random_probe(1)
    up = shift(1, +1)
    assert up.apply(lambda x1, x2: 1.0)(3, 5) == 1.0
    assert shift(1, -1).apply(f)(3, 2) == f(2, 2)
    with pytest.raises(OutOfDomain):
        shift(1, -1).apply(f)(0, 2)


def test_guarded_boundary_term():
    # x1 * T- is well-defined at the edge: the coefficient annihilates it
    f = random_probe(2)
    op = stencil({(-1, 0): lambda x1, x2: float(x1)})
    assert op.apply(f)(0, 4) == 0.0


def test_operator_linearity():
    rng = np.random.default_rng(11)
    ops = [raising(1, P), lowering(2, P), eigen_op(1, P), su2_generators(P)[1]]
    f, g = random_probe(3), random_probe(4)
    for op in ops:
        c = complex(rng.standard_normal(), rng.standard_normal())
        lhs = op.apply(lambda x1, x2: c * f(x1, x2) + g(x1, x2))
        rhs = lambda x1, x2: c * op.apply(f)(x1, x2) + op.apply(g)(x1, x2)
        assert max_abs_residual(lhs, rhs, (10, 10)) < 1e-12


def test_stencil_radius_bounds_reads():
    assert raising(1, P).stencil_radius == 1
    assert eigen_op(1, P).stencil_radius == 1
    assert commutator(*su2_generators(P)[:2]).stencil_radius <= 4


@pytest.mark.parametrize("params", PARAM_SETS)
def test_raising_lowering_actions(params):
    for n1 in range(4):
        for n2 in range(4 - n1):
            for i in (1, 2):
                dn = (1, 0) if i == 1 else (0, 1)
                up = raising(i, params).apply(poly(n1, n2, params))
                coef = math.sqrt((n1 if i == 1 else n2) + 1)
                tgt = poly(n1 + dn[0], n2 + dn[1], params)
                assert (
                    max_abs_residual(up, lambda a, b: coef * tgt(a, b), (10, 10))
                    < 1e-9
                )
                k = n1 if i == 1 else n2
                down = lowering(i, params).apply(poly(n1, n2, params))
                if k == 0:
                    assert max_abs_residual(down, lambda a, b: 0.0, (10, 10)) < 1e-9
                else:
                    lo = poly(n1 - dn[0], n2 - dn[1], params)
                    assert (
                        max_abs_residual(
                            down, lambda a, b: math.sqrt(k) * lo(a, b), (10, 10)
                        )
                        < 1e-9
                    )


@pytest.mark.parametrize("params", PARAM_SETS)
def test_eigen_op_eigenvalues(params):
    for n1, n2 in [(0, 2), (3, 2), (1, 4)]:
        f = poly(n1, n2, params)
        for i, ev in ((1, n1), (2, n2)):
            y = eigen_op(i, params).apply(f)
            assert max_abs_residual(y, lambda a, b: ev * f(a, b), (10, 10)) < 1e-9


@pytest.mark.parametrize("params", PARAM_SETS)
def test_composition_matches_explicit_stencils(params):
    probes = [random_probe(s) for s in range(5)]
    pairs = [
        (eigen_op(1, params), eigen_op_explicit(1, params)),
        (eigen_op(2, params), eigen_op_explicit(2, params)),
        (hamiltonian(params), hamiltonian_explicit(params)),
    ]
    pairs += list(zip(cross_ops(params), cross_ops_explicit(params)))
    for comp, expl in pairs:
        for f in probes:
            assert max_abs_residual(comp.apply(f), expl.apply(f), (12, 12)) < 1e-10


def test_cross_op_actions():
    op12, op21 = cross_ops(P)
    assert max_abs_residual(op12.apply(poly(2, 0, P)), lambda a, b: 0.0, (8, 8)) < 1e-9
    tgt = poly(2, 1, P)
    assert (
        max_abs_residual(op12.apply(poly(1, 2, P)), lambda a, b: 2.0 * tgt(a, b), (8, 8))
        < 1e-9
    )
    tgt21 = poly(0, 3, P)
    coef = math.sqrt(1 * 3)
    assert (
        max_abs_residual(
            op21.apply(poly(1, 2, P)), lambda a, b: coef * tgt21(a, b), (8, 8)
        )
        < 1e-9
    )


def test_hamiltonian_stencil_is_theta_free():
    pa = ModelParams(1.3, 0.8, 0.2)
    pb = ModelParams(1.3, 0.8, 1.1)
    f = random_probe(6)
    assert (
        max_abs_residual(
            hamiltonian_explicit(pa).apply(f), hamiltonian_explicit(pb).apply(f), (10, 10)
        )
        == 0.0
    )


def test_hamiltonian_ground_state():
    h = hamiltonian_explicit(P)
    assert max_abs_residual(h.apply(poly(0, 0, P)), lambda a, b: 0.0, (10, 10)) < 1e-12


@pytest.mark.parametrize("params", PARAM_SETS)
def test_su2_commutators(params):
    h = hamiltonian_explicit(params)
    jx, jy, jz = su2_generators(params)
    probes = [random_probe(s) for s in range(10)]
    for j in (jx, jy, jz):
        com = commutator(h, j)
        for f in probes:
            assert max_abs_residual(com.apply(f), lambda a, b: 0.0, (10, 10)) < 1e-9
    for a, b, c in ((jx, jy, jz), (jy, jz, jx), (jz, jx, jy)):
        com = commutator(a, b)
        tgt = 1j * c
        for f in probes:
            assert max_abs_residual(com.apply(f), tgt.apply(f), (10, 10)) < 1e-9


def test_casimir_identity():
    h = hamiltonian_explicit(P)
    cas = casimir(P)
    hh = 0.5 * h @ (0.5 * h + identity())
    for f in (random_probe(s) for s in range(10)):
        assert max_abs_residual(cas.apply(f), hh.apply(f), (10, 10)) < 1e-8


def test_boundary_safety_of_all_model_operators():
    ops = [
        raising(1, P), raising(2, P), lowering(1, P), lowering(2, P),
        eigen_op(1, P), eigen_op(2, P), hamiltonian(P),
        *su2_generators(P), casimir(P),
        anisotropic_hamiltonian(1.0, 2.0, P),
    ]
    f = random_probe(7)
    for op in ops:
        for x1, x2 in [(0, 0), (0, 5), (5, 0)]:
            v = op.apply(f)(x1, x2)
            assert np.isfinite(v.real) and np.isfinite(v.imag)


def test_gauge_of_identity_is_identity():
    g = gauge_transform(identity(), P)
    f = random_probe(8)
    assert max_abs_residual(g.apply(f), f, (10, 10)) < 1e-14


def test_gauged_ladder_closed_forms():
    c, s = math.cos(P.theta), math.sin(P.theta)
    closed = {
        "raise1": stencil(
            {
                (-1, 0): lambda x1, x2: c * math.sqrt(x1),
                (0, -1): lambda x1, x2: -s * math.sqrt(x2),
                (0, 0): -P.omega,
            }
        ),
        "raise2": stencil(
            {
                (-1, 0): lambda x1, x2: s * math.sqrt(x1),
                (0, -1): lambda x1, x2: c * math.sqrt(x2),
                (0, 0): -P.zeta,
            }
        ),
        "lower1": stencil(
            {
                (1, 0): lambda x1, x2: c * math.sqrt(x1 + 1),
                (0, 1): lambda x1, x2: -s * math.sqrt(x2 + 1),
                (0, 0): -P.omega,
            }
        ),
        "lower2": stencil(
            {
                (1, 0): lambda x1, x2: s * math.sqrt(x1 + 1),
                (0, 1): lambda x1, x2: c * math.sqrt(x2 + 1),
                (0, 0): -P.zeta,
            }
        ),
    }
    raw = {
        "raise1": raising(1, P),
        "raise2": raising(2, P),
        "lower1": lowering(1, P),
        "lower2": lowering(2, P),
    }
    probes = [random_probe(s) for s in range(3)]
    for name, op in raw.items():
        g = gauge_transform(op, P)
        for f in probes:
            assert max_abs_residual(g.apply(f), closed[name].apply(f), (10, 10)) < 1e-10


def test_gauged_lower2_down_shift_variant_is_wrong():
    # a variant of the gauged second lowering operator written with
    # down shifts does not reproduce the conjugation; the conjugation
    # (with up shifts, mirroring the first lowering operator) is the
    # ground truth
    c, s = math.cos(P.theta), math.sin(P.theta)
    wrong = stencil(
        {
            (-1, 0): lambda x1, x2: s * math.sqrt(x1 + 1) if x1 > 0 else 0.0,
            (0, -1): lambda x1, x2: c * math.sqrt(x2 + 1) if x2 > 0 else 0.0,
            (0, 0): -P.zeta,
        }
    )
    g = gauge_transform(lowering(2, P), P)
    f = random_probe(9)
    assert max_abs_residual(g.apply(f), wrong.apply(f), (10, 10)) > 1e-2


def test_gauged_number_operators_on_weighted_states():
    # conjugated raise o lower acting on sqrt(w) C gives the degree
    from charlier_lattice.bivariate import log_weight

    def weighted(n1, n2):
        def f(x1, x2):
            return math.exp(0.5 * float(log_weight(x1, x2, P))) * charlier2_ladder(
                n1, n2, x1, x2, P
            )

        return f

    for i, (n1, n2) in ((1, (2, 1)), (2, (1, 3))):
        g = gauge_transform(eigen_op(i, P), P)
        ev = n1 if i == 1 else n2
        f = weighted(n1, n2)
        assert max_abs_residual(g.apply(f), lambda a, b: ev * f(a, b), (8, 8)) < 1e-9


def test_anisotropic_reduces_to_hamiltonian():
    f = random_probe(10)
    assert (
        max_abs_residual(
            anisotropic_hamiltonian(1.0, 1.0, P).apply(f), hamiltonian(P).apply(f), (10, 10)
        )
        < 1e-12
    )


@pytest.mark.parametrize("k1,k2", [(1.0, 2.0), (2.0, 3.0)])
def test_anisotropic_eigenvalues(k1, k2):
    ht = anisotropic_hamiltonian(k1, k2, P)
    for n1 in range(5):
        for n2 in range(5 - n1):
            f = poly(n1, n2, P)
            ev = k1 * n1 + k2 * n2
            assert max_abs_residual(ht.apply(f), lambda a, b: ev * f(a, b), (8, 8)) < 1e-9


def test_anisotropic_explicit_stencil():
    probes = [random_probe(s) for s in range(5)]
    for params in PARAM_SETS:
        comp = anisotropic_hamiltonian(1.0, 2.0, params)
        expl = anisotropic_hamiltonian_explicit(1.0, 2.0, params)
        for f in probes:
            assert max_abs_residual(comp.apply(f), expl.apply(f), (10, 10)) < 1e-10


def test_anisotropic_cross_shift_coefficient():
    # for k1 != k2 and theta != 0 the mixed-shift term is present
    params = ModelParams(1.2, 0.9, 0.4)
    expl = anisotropic_hamiltonian_explicit(1.0, 2.0, params)
    coef = expl.terms[(-1, 1)](3, 2)
    expected = (2.0 - 1.0) * 3 * 0.9 / 1.2 * math.cos(0.4) * math.sin(0.4)
    assert coef == pytest.approx(expected)


def test_self_commutator_vanishes():
    jx = su2_generators(P)[0]
    f = random_probe(12)
    assert max_abs_residual(commutator(jx, jx).apply(f), lambda a, b: 0.0, (10, 10)) < 1e-12
