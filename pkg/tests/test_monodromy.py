"""Lax matrices, monodromy, boundary matrices and conserved generators."""
import numpy as np
import pytest

from dstlab._rat import rat
from dstlab.errors import WrongRegime, ZeroXi
from dstlab.lattice import LatticeState, Open, Periodic, Quasiperiodic, hamiltonian
from dstlab.monodromy import (adjugate_neg, boundary_C, boundary_K,
                              conserved_coeffs, generator, lax_L, lax_M,
                              lax_consistency_residual, monodromy,
                              monodromy_evolution_residual,
                              sklyanin_condition_residual)
from dstlab.poly import Poly


def _rand_state(rng, n, scale=1.0):
    return LatticeState(tuple(rng.uniform(-scale, scale, n)),
                        tuple(rng.uniform(-scale, scale, n)))


def test_lax_L_entries():
    st = LatticeState((1.0,), (2.0,))
    l = lax_L(st, 1)
    assert l.a11.c == [2.0, 1] and l.a12.c == [1.0]
    assert l.a21.c == [2.0] and l.a22.c == [1]
    vac = lax_L(LatticeState((0.0,), (0.0,)), 1)
    assert vac.a11.c == [0.0, 1] and vac.a12 == 0 and vac.a21 == 0
    rng = np.random.default_rng(0)
    for _ in range(5):
        st = _rand_state(rng, 2)
        assert lax_L(st, 2).det().c[1:] == [1.0]  # det = lambda
    with pytest.raises(IndexError):
        lax_L(st, 3)


def test_lax_M_closures():
    st = LatticeState((1.0, 2.0), (3.0, 4.0))
    w_end = lax_M(st, 3, Open(0.3, 0.7))
    assert w_end.a12.c == [0.7] and w_end.a21.c == [4.0]
    w_one = lax_M(st, 1, Open(0.3, 0.7))
    assert w_one.a12.c == [1.0] and w_one.a21.c == [0.3]
    per_end = lax_M(st, 3, Periodic())
    per_one = lax_M(st, 1, Periodic())
    assert per_end.a12.c == per_one.a12.c == [1.0]
    assert per_end.a21.c == per_one.a21.c == [4.0]
    for n in (1, 2, 3):
        assert lax_M(st, n, Periodic()).trace() == 0


def test_monodromy_single_site_and_det():
    st = LatticeState((0.7,), (-0.4,))
    t = monodromy(st)
    l = lax_L(st, 1)
    assert t.a11 == l.a11 and t.a12 == l.a12
    rng = np.random.default_rng(3)
    for n in range(1, 9):
        q = tuple(rat(int(k), 7) for k in rng.integers(-9, 9, n))
        r = tuple(rat(int(k), 5) for k in rng.integers(-9, 9, n))
        assert monodromy(LatticeState(q, r)).det().c == [0] * n + [1]


def test_monodromy_leading_structure():
    rng = np.random.default_rng(4)
    for n in (2, 3, 5):
        st = _rand_state(rng, n)
        t = monodromy(st)
        s_total = sum(q * r for q, r in zip(st.q, st.r))
        assert t.a11.coeff(n) == 1
        assert abs(t.a11.coeff(n - 1) - s_total) < 1e-12
        assert abs(t.a12.coeff(n - 1) - st.q[0]) < 1e-12
        assert abs(t.a21.coeff(n - 1) - st.r[-1]) < 1e-12


def test_adjugate_neg():
    st = LatticeState((0.9,), (0.4,))
    t = monodromy(st)
    adj = adjugate_neg(t)
    assert adj.a11 == 1 and adj.a12.c == [-0.9]
    assert adj.a21.c == [-0.4]
    assert adj.a22.c == [pytest.approx(0.36), -1]  # t11(-l) = -l + q r
    # T(l) adj(T)(l) = l^N I, with adj(T)(l) = adjugate_neg evaluated at -l
    rng = np.random.default_rng(8)
    for n in (1, 2, 4):
        t = monodromy(_rand_state(rng, n))
        back = adjugate_neg(t).map(Poly.flip)   # plain adjugate
        prod = t @ back
        assert max(abs(c) for c in (prod.a12.c + prod.a21.c) or [0]) < 1e-12
        assert max(abs(a - b) for a, b in zip(prod.a11.c, [0] * n + [1])) < 1e-12
    ident = adjugate_neg(Poly and monodromy(LatticeState((0.0,), (0.0,))))
    assert ident.a12 == 0 and ident.a21 == 0


def test_boundary_C():
    c = boundary_C(1.0)
    assert c.a11 == 1.0 and c.a22 == 1.0
    c4 = boundary_C(4.0)
    assert c4.a11 == 0.5 and c4.a22 == 2.0
    for xi in (0.3, 2.0, -1.5, 1 + 1j):
        c = boundary_C(xi)
        assert abs(c.a11 * c.a22 - 1) < 1e-14
    with pytest.raises(ZeroXi):
        boundary_C(0)


def test_boundary_K():
    km, kp = boundary_K(Open(0.4, -0.6))
    assert km.a11.c == [0.4] and km.a12.c == [0, 1] and km.a21 == 0
    assert kp.a21.c == [0, 1] and kp.a12 == 0
    assert km.eval(0.0).a11 == 0.4 and km.eval(0.0).a12 == 0.0
    with pytest.raises(WrongRegime):
        boundary_K(Periodic())


def test_generator_quasi_single_site():
    st = LatticeState((0.8,), (0.5,))
    xi = 4.0
    g = generator(st, Quasiperiodic(xi))
    # xi^(-1/2)(lambda + q r) + xi^(1/2)
    assert abs(g.coeff(1) - 0.5) < 1e-14
    assert abs(g.coeff(0) - (0.5 * 0.4 + 2.0)) < 1e-14


def test_generator_periodic_subleading_is_s():
    rng = np.random.default_rng(11)
    for n in (2, 4, 6):
        st = _rand_state(rng, n)
        g = generator(st, Periodic())
        s_total = sum(q * r for q, r in zip(st.q, st.r))
        assert abs(g.coeff(n - 1) - s_total) < 1e-12


def test_generator_open_single_site_frozen():
    q, r, thm, thp = 1.7, -0.6, 0.3, 0.9
    g = generator(LatticeState((q,), (r,)), Open(thm, thp))
    # degree 4, leading -1, only even powers:
    # -l^4 + l^2 (q^2 r^2 - 2 q th- - 2 r th+)
    assert g.degree == 4
    assert g.coeff(4) == -1
    assert g.coeff(3) == 0 and g.coeff(1) == 0 and g.coeff(0) == 0
    assert abs(g.coeff(2) - (q * q * r * r - 2 * q * thm - 2 * r * thp)) < 1e-12


def test_conserved_closed_forms_vs_coefficients():
    rng = np.random.default_rng(13)
    for n in (2, 3, 5):
        st = _rand_state(rng, n)
        xi = 4.0
        cs = conserved_coeffs(st, Quasiperiodic(xi))
        extra = 1.0 if n == 2 else 0.0
        assert abs(cs.coeffs[n - 2]
                   - (0.5 * cs.p2 + 2.0 * (cs.p2_prime + extra))) < 1e-12
        assert abs(cs.coeffs[n - 1] - 0.5 * cs.s_total) < 1e-12

        bc = Open(0.3, 0.7)
        cso = conserved_coeffs(st, bc)
        sign = -1 if n % 2 else 1
        h = cso.a2 - cso.s_total ** 2 / 2 + st.q[0] * 0.3 + st.r[-1] * 0.7
        assert abs(cso.coeffs[2 * n] - sign * 2 * h) < 1e-12


def test_conserved_vanish_on_vacuum():
    st = LatticeState((0.0, 0.0, 0.0), (0.0, 0.0, 0.0))
    cs = conserved_coeffs(st, Periodic())
    assert cs.s_total == 0 and cs.p2 == 0 and cs.p2_prime == 0
    # generator reduces to lambda^N + 1 (trace of diag(lambda, 1) products)
    g = generator(st, Periodic())
    assert g.c[0] == 1 and g.c[-1] == 1 and all(c == 0 for c in g.c[1:-1])


def test_hamiltonian_value_agreement():
    rng = np.random.default_rng(17)
    for bc in (Periodic(), Quasiperiodic(2.0), Open(0.3, 0.7)):
        for _ in range(100):
            n = int(rng.integers(1, 7))
            st = _rand_state(rng, n)
            cs = conserved_coeffs(st, bc)
            assert abs(cs.hamiltonian_value - hamiltonian(st, bc)) < 1e-10


@pytest.mark.parametrize("bc", [Periodic(), Quasiperiodic(2.0), Open(0.3, 0.7)])
def test_lax_residuals(bc):
    rng = np.random.default_rng(19)
    for n in range(1, 6):
        for _ in range(10):
            st = _rand_state(rng, n)
            assert max(lax_consistency_residual(st, bc, j)
                       for j in range(1, n + 1)) < 1e-12
            assert monodromy_evolution_residual(st, bc) < 1e-12


def test_lax_residual_negative_control():
    rng = np.random.default_rng(23)
    st = _rand_state(rng, 3)
    bc = Open(0.3, 0.7)
    assert lax_consistency_residual(st, bc, 3, boundary_shift=(0.0, 0.1)) > 1e-3
    assert lax_consistency_residual(st, bc, 1, boundary_shift=(0.1, 0.0)) > 1e-3
    # vacuum state: residual exactly zero
    vac = LatticeState((0.0, 0.0), (0.0, 0.0))
    assert lax_consistency_residual(vac, Periodic(), 1) == 0.0


def test_trace_conservation_structure():
    rng = np.random.default_rng(29)
    st = _rand_state(rng, 4)
    # periodic: d(tr T)/dt vanishes identically since M_{N+1} = M_1
    n = st.n_sites
    from dstlab.monodromy import _ldot, lax_M

    ls = [lax_L(st, k) for k in range(1, n + 1)]
    total = None
    for k in range(1, n + 1):
        term = _ldot(st, Periodic(), k)
        for m in range(k - 1, 0, -1):
            term = term @ ls[m - 1]
        for m in range(k + 1, n + 1):
            term = ls[m - 1] @ term
        total = term if total is None else total + term
    assert total.trace().max_abs() < 1e-12

    # quasiperiodic: the twisted trace is conserved via the C-exchange
    xi = 2.0
    c = boundary_C(xi)
    twisted = total.a11 * c.a11 + total.a22 * c.a22
    st_q = st
    total_q = None
    for k in range(1, n + 1):
        term = _ldot(st_q, Quasiperiodic(xi), k)
        for m in range(k - 1, 0, -1):
            term = term @ ls[m - 1]
        for m in range(k + 1, n + 1):
            term = ls[m - 1] @ term
        total_q = term if total_q is None else total_q + term
    twisted_q = total_q.a11 * c.a11 + total_q.a22 * c.a22
    assert twisted_q.max_abs() < 1e-12


def test_sklyanin_conditions():
    rng = np.random.default_rng(31)
    st = _rand_state(rng, 3)
    for lam in (0.7, -1.3, 2.0 + 0.5j):
        rp, rm, _ = sklyanin_condition_residual(Open(0.3, 0.7), st, lam)
        assert rp < 1e-13 and rm < 1e-13
        _, _, rc = sklyanin_condition_residual(Quasiperiodic(2.0), st, lam)
        assert rc < 1e-13
    # wiring q_{N+1} to theta_+ + 0.5 leaves a defect >= 0.5 |lambda|
    lam = 1.3
    rp, _, _ = sklyanin_condition_residual(Open(0.3, 0.7), st, lam,
                                           boundary_shift=(0.0, 0.5))
    assert rp >= 0.5 * abs(lam) - 1e-12
    with pytest.raises(WrongRegime):
        sklyanin_condition_residual(Periodic(), st, 1.0)


def test_generator_conserved_along_flow():
    from dstlab.verify import conservation_run, initial_state
    from dstlab.lattice import step_rk4
    for bc in (Periodic(), Quasiperiodic(2.0), Open(0.3, 0.7)):
        drift, _, _ = conservation_run(4, bc, dt=1e-3, t_final=2.0, seed=3)
        assert drift < 1e-10
        # energy drift along the same kind of run
        st = initial_state(6, bc, seed=3, t_final=10.0)
        h0 = hamiltonian(st, bc)
        worst = 0.0
        for k in range(10000):
            st = step_rk4(st, bc, 1e-3)
            if k % 500 == 0:
                worst = max(worst, abs(hamiltonian(st, bc) - h0) / max(1.0, abs(h0)))
        assert worst < 1e-8


def test_open_generator_poisson_commutes():
    # {tau(l), tau(m)} = 0 by finite differences, 20 random triples
    from dstlab.lattice import Observable, poisson_bracket
    rng = np.random.default_rng(37)
    bc = Open(0.3, 0.7)
    for _ in range(20):
        n = int(rng.integers(1, 5))
        st = _rand_state(rng, n, 0.8)
        lam, mu = rng.uniform(0.4, 1.5, 2)
        f = Observable(lambda s, x=lam: generator(s, bc)(x), "tau_l")
        g = Observable(lambda s, x=mu: generator(s, bc)(x), "tau_m")
        assert abs(poisson_bracket(f, g, st)) < 1e-6
