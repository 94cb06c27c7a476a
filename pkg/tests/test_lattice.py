"""Equations of motion, Hamiltonians, brackets and the RK4 integrator."""
import math

import numpy as np
import pytest

from dstlab.errors import NonFiniteState, ZeroXi
from dstlab.lattice import (LatticeState, Observable, Open, Periodic,
                            Quasiperiodic, coordinate, eom,
                            flow_consistency_residual, hamiltonian,
                            poisson_bracket, step_rk4)


def test_eom_periodic_hand_values():
    st = LatticeState((1.0, 2.0), (3.0, 4.0))
    d = eom(st, Periodic())
    assert d.dq == (-1.0, -15.0)
    assert d.dr == (5.0, 29.0)


def test_eom_open_hand_values():
    st = LatticeState((1.0, 2.0), (3.0, 4.0))
    d = eom(st, Open(0.0, 0.0))
    assert d.dq == (-1.0, -16.0)
    assert d.dr == (9.0, 29.0)


def test_eom_zero_momentum_is_shift():
    rng = np.random.default_rng(0)
    for n in (1, 3, 5):
        q = tuple(rng.uniform(-1, 1, n))
        st = LatticeState(q, (0.0,) * n)
        d = eom(st, Periodic())
        assert d.dr == (0.0,) * n
        assert d.dq == q[1:] + (q[0],)


def test_quasiperiodic_closure():
    st = LatticeState((1.0, 2.0), (3.0, 4.0))
    d = eom(st, Quasiperiodic(2.0))
    # q_3 = 2 q_1, r_0 = 2 r_2
    assert d.dq[1] == 2.0 * 1.0 - 16.0
    assert d.dr[0] == -8.0 + 9.0


def test_hamiltonian_hand_values():
    st = LatticeState((1.0, 2.0), (3.0, 4.0))
    assert hamiltonian(st, Periodic()) == -26.5
    # open chain: q2 r1 - (9 + 64)/2 + q1 th- + r2 th+
    assert hamiltonian(st, Open(1.0, 2.0)) == 6.0 - 36.5 + 9.0


def test_hamiltonian_zero_q():
    st = LatticeState((0.0, 0.0, 0.0), (1.0, -2.0, 0.5))
    assert hamiltonian(st, Periodic()) == 0.0
    assert hamiltonian(st, Open(0.3, 0.7)) == 0.5 * 0.7


@pytest.mark.parametrize("bc", [Periodic(), Quasiperiodic(2.0),
                                Quasiperiodic(0.5), Open(0.3, 0.7)])
def test_flow_consistency_all_regimes(bc):
    rng = np.random.default_rng(7)
    for n in range(1, 7):
        for _ in range(50):
            st = LatticeState(tuple(rng.uniform(-1, 1, n)),
                              tuple(rng.uniform(-1, 1, n)))
            assert flow_consistency_residual(st, bc) < 1e-6


def test_canonical_brackets():
    rng = np.random.default_rng(1)
    for n in (1, 2, 4, 6):
        st = LatticeState(tuple(rng.uniform(-1, 1, n)),
                          tuple(rng.uniform(-1, 1, n)))
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                delta = 1.0 if i == j else 0.0
                assert abs(poisson_bracket(coordinate("q", i), coordinate("r", j), st)
                           - delta) < 1e-9
                assert abs(poisson_bracket(coordinate("q", i), coordinate("q", j), st)) < 1e-9
                assert abs(poisson_bracket(coordinate("r", i), coordinate("r", j), st)) < 1e-9


def test_bracket_antisymmetry_same_stencil():
    rng = np.random.default_rng(5)
    st = LatticeState(tuple(rng.uniform(-1, 1, 3)), tuple(rng.uniform(-1, 1, 3)))
    h = Observable(lambda s: hamiltonian(s, Open(0.3, 0.7)), "H")
    g = Observable(lambda s: s.q[0] ** 2 * s.r[2] + s.r[0], "probe")
    assert abs(poisson_bracket(h, g, st) + poisson_bracket(g, h, st)) < 1e-12
    assert abs(poisson_bracket(h, h, st)) < 1e-12


def test_rk4_local_order():
    rng = np.random.default_rng(2)
    st = LatticeState(tuple(rng.uniform(-0.3, 0.3, 3)),
                      tuple(rng.uniform(-0.3, 0.3, 3)))
    bc = Periodic()
    d = eom(st, bc)
    errs = []
    for dt in (1e-2, 5e-3):
        s1 = step_rk4(st, bc, dt)
        lin = [abs(s1.q[i] - st.q[i] - dt * d.dq[i]) for i in range(3)]
        lin += [abs(s1.r[i] - st.r[i] - dt * d.dr[i]) for i in range(3)]
        errs.append(max(lin))
    # step minus Euler prediction is O(dt^2)
    assert errs[0] / errs[1] > 3.5


def test_rk4_linear_case_matrix_exponential():
    # r = 0 freezes r and the q-flow is the cyclic shift: q(t) = exp(tS) q(0)
    bc = Periodic()
    st = LatticeState((1.0, 0.0), (0.0, 0.0))
    t, dt = 0.5, 1e-3
    cur = st
    for _ in range(int(t / dt)):
        cur = step_rk4(cur, bc, dt)
    assert abs(cur.q[0] - math.cosh(t)) < 1e-10
    assert abs(cur.q[1] - math.sinh(t)) < 1e-10
    assert cur.r == (0.0, 0.0)


def test_rk4_blowup_raises():
    st = LatticeState((10.0, 10.0), (10.0, 10.0))
    bc = Periodic()
    with pytest.raises(NonFiniteState):
        cur = st
        for _ in range(10000):
            cur = step_rk4(cur, bc, 0.05)


def test_state_validation():
    with pytest.raises(ValueError):
        LatticeState((1.0,), (1.0, 2.0))
    with pytest.raises(NonFiniteState):
        LatticeState((float("nan"),), (0.0,))
    with pytest.raises(ZeroXi):
        Quasiperiodic(0.0)
    with pytest.raises(ValueError):
        step_rk4(LatticeState((1.0,), (1.0,)), Periodic(), 0.0)


def test_single_site_all_regimes():
    st = LatticeState((0.4,), (-0.2,))
    for bc in (Periodic(), Quasiperiodic(3.0), Open(0.1, 0.2)):
        d = eom(st, bc)
        assert len(d.dq) == 1
        assert flow_consistency_residual(st, bc) < 1e-6
    # periodic closure at N=1 reads q_2 = q_1, r_0 = r_1
    d = eom(st, Periodic())
    assert d.dq[0] == 0.4 - 0.4 ** 2 * (-0.2)


def test_complex_states_supported():
    st = LatticeState((0.1 + 0.2j, -0.3j), (0.05 - 0.1j, 0.2))
    for bc in (Periodic(), Quasiperiodic(2.0), Open(0.3, 0.7)):
        assert flow_consistency_residual(st, bc) < 1e-6


def test_non_finite_difference_quotient():
    from dstlab.errors import NonFiniteDerivative
    st = LatticeState((1.0,), (1.0,))
    bad = Observable(lambda s: float("inf") if s.q[0] > 1.0 else 0.0, "step")
    f = Observable(lambda s: s.r[0], "r")
    with pytest.raises(NonFiniteDerivative):
        poisson_bracket(bad, f, st)


def test_open_chain_equilibrium_is_elliptic():
    import numpy as np
    from dstlab.verify import (_flow_jacobian, _flow_vector, equilibrium_state,
                               initial_state)
    bc = Open(0.3, 0.7)
    z = equilibrium_state(6, bc)
    assert float(np.max(np.abs(_flow_vector(z, bc)))) < 1e-12
    eigs = np.linalg.eigvals(_flow_jacobian(z, bc))
    assert float(np.max(np.abs(eigs.real))) < 1e-5
    st = initial_state(6, bc, seed=42)
    assert st.n_sites == 6
