"""Lax matrices, monodromy, boundary matrices and conserved-quantity generators.

All polynomial-in-lambda objects are exact: products of Mat2[Poly] over the
state's scalar field (floats, complex, or rationals).  The monodromy ordering
is T = L_N ... L_1, the unique ordering for which the time derivative of T
telescopes to  M_{N+1} T - T M_1.

The open-chain generator is built inverse-free: since det T(lambda) =
lambda^N, the inverse T^{-1}(-lambda) is replaced by the adjugate
sigma2 T^t(-lambda) sigma2, which multiplies the generator by the harmless
scalar factor (-lambda)^N and shifts its degree to 2N+2.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass

from .errors import WrongRegime, ZeroXi
from .lattice import Open, Periodic, Quasiperiodic, eom, principal_sqrt
from .poly import Mat2, Poly, poly_mat

# Sample grid for floating-point residuals: 8 unit-circle points plus
# off-circle reals; avoids symmetry-induced accidental zeros.
LAMBDA_GRID = tuple(cmath.exp(2j * cmath.pi * k / 8) for k in range(8)) + (0.5, -0.5, 2.0, -2.0)


def lax_L(state, n):
    """Site Lax matrix [[lambda + q_n r_n, q_n], [r_n, 1]] (n is 1-based)."""
    if not 1 <= n <= state.n_sites:
        raise IndexError(f"site {n} out of range 1..{state.n_sites}")
    qn, rn = state.q[n - 1], state.r[n - 1]
    return poly_mat(Poly([qn * rn, 1]), qn, rn, 1)


def lax_M(state, n, bc):
    """Auxiliary matrix [[lambda/2, q_n], [r_{n-1}, -lambda/2]] for n = 1..N+1.

    Out-of-range q_{N+1} and r_0 are resolved by the boundary closure, so
    n = N+1 and n = 1 produce the end matrices of the open chain.
    """
    nn = state.n_sites
    if not 1 <= n <= nn + 1:
        raise IndexError(f"site {n} out of range 1..{nn + 1}")
    q_np1, r_0 = bc.closure(state.q, state.r)
    qn = state.q[n - 1] if n <= nn else q_np1
    rnm1 = state.r[n - 2] if n >= 2 else r_0
    half = Poly([0, 0.5])
    return poly_mat(half, qn, rnm1, -half)


def monodromy(state):
    """Ordered product T = L_N L_{N-1} ... L_1."""
    t = lax_L(state, state.n_sites)
    for n in range(state.n_sites - 1, 0, -1):
        t = t @ lax_L(state, n)
    return t


def adjugate_neg(t):
    """sigma2 T^t(-lambda) sigma2 = [[t22(-l), -t12(-l)], [-t21(-l), t11(-l)]].

    Equals det(T)(-lambda) * T^{-1}(-lambda); for the monodromy the determinant
    is (-lambda)^N.
    """
    return Mat2(t.a22.flip(), -t.a12.flip(), -t.a21.flip(), t.a11.flip())


def boundary_C(xi):
    """Quasiperiodic twist matrix diag(xi^(-1/2), xi^(1/2)), principal branch."""
    if xi == 0:
        raise ZeroXi("xi must be nonzero")
    s = principal_sqrt(xi)
    return Mat2.diag(1 / s, s)


def boundary_K(bc):
    """Open-chain reflection matrices (K_minus, K_plus)."""
    if not isinstance(bc, Open):
        raise WrongRegime("boundary_K needs the open regime")
    lam = Poly([0, 1])
    k_minus = poly_mat(bc.theta_minus, lam, 0, bc.theta_minus)
    k_plus = poly_mat(bc.theta_plus, 0, lam, bc.theta_plus)
    return k_minus, k_plus


def open_generator_matrix(state, bc):
    """T(lambda) K_-(lambda) adjugate_neg(T)(lambda): the dressed matrix
    up to the scalar (-lambda)^N."""
    k_minus, _ = boundary_K(bc)
    t = monodromy(state)
    return t @ k_minus @ adjugate_neg(t)


def generator(state, bc):
    """Polynomial generator of conserved quantities for the regime.

    periodic:      tr T(lambda)                        degree N
    quasiperiodic: tr[C(xi) T(lambda)]                 degree N
    open:          tr[K_+ T K_- sigma2 T^t(-l) sigma2] degree 2N+2
    """
    if isinstance(bc, Periodic):
        return monodromy(state).trace()
    if isinstance(bc, Quasiperiodic):
        t = monodromy(state)
        s = principal_sqrt(bc.xi)
        return t.a11 * (1 / s) + t.a22 * s
    if isinstance(bc, Open):
        _, k_plus = boundary_K(bc)
        return (k_plus @ open_generator_matrix(state, bc)).trace()
    raise WrongRegime(f"unknown boundary condition {bc!r}")


@dataclass(frozen=True)
class ConservedSet:
    regime: str
    coeffs: tuple
    s_total: complex
    p2: complex
    p2_prime: complex
    a2: complex
    hamiltonian_value: complex


def conserved_coeffs(state, bc):
    """Coefficient list of the generator plus the named closed-form invariants.

    hamiltonian_value is reassembled from the generator coefficients alone
    (small-N constant bookkeeping included), so agreement with
    lattice.hamiltonian is a genuine cross-check of the Lax construction.
    """
    q, r = state.q, state.r
    n = state.n_sites
    s = [q[i] * r[i] for i in range(n)]
    s_total = sum(s)
    pair = sum(s[i] * s[j] for i in range(n) for j in range(i + 1, n))
    hop = sum(q[i + 1] * r[i] for i in range(n - 1))
    p2 = hop + pair
    p2_prime = r[-1] * q[0]
    g = generator(state, bc)
    coeffs = tuple(g.c)
    if isinstance(bc, Periodic):
        if n == 1:
            st = g.coeff(0) - 1
            h = st - st * st / 2
        else:
            st = g.coeff(n - 1)
            h = g.coeff(n - 2) - (1 if n == 2 else 0) - st * st / 2
        return ConservedSet("periodic", coeffs, s_total, p2, p2_prime, p2, h)
    if isinstance(bc, Quasiperiodic):
        sq = principal_sqrt(bc.xi)
        if n == 1:
            st = sq * g.coeff(0) - bc.xi
            h = bc.xi * st - st * st / 2
        else:
            st = sq * g.coeff(n - 1)
            h = sq * g.coeff(n - 2) - (bc.xi if n == 2 else 0) - st * st / 2
        return ConservedSet("quasiperiodic", coeffs, s_total, p2, p2_prime, p2, h)
    if isinstance(bc, Open):
        sign = -1 if n % 2 else 1
        h = g.coeff(2 * n) / (2 * sign)
        return ConservedSet("open", coeffs, s_total, p2, p2_prime, p2, h)
    raise WrongRegime(f"unknown boundary condition {bc!r}")


def _ldot(state, bc, j):
    """d/dt of L_j assembled from the equations of motion (chain rule)."""
    d = eom(state, bc)
    qj, rj = state.q[j - 1], state.r[j - 1]
    dqj, drj = d.dq[j - 1], d.dr[j - 1]
    return poly_mat(dqj * rj + qj * drj, dqj, drj, 0)


def _shifted_bc(bc, boundary_shift):
    if boundary_shift == (0.0, 0.0) or not isinstance(bc, Open):
        return bc
    return Open(bc.theta_minus + boundary_shift[0], bc.theta_plus + boundary_shift[1])


def _mat_max_abs(m):
    return max(abs(e) for e in m.entries())


def lax_consistency_residual(state, bc, j, grid=LAMBDA_GRID, boundary_shift=(0.0, 0.0)):
    """Max over the lambda grid of || dL_j/dt - (M_{j+1} L_j - L_j M_j) ||.

    boundary_shift perturbs (theta_-, theta_+) in the auxiliary matrices only
    (negative control: a mismatch with the flow must be detected).
    """
    wbc = _shifted_bc(bc, boundary_shift)
    lhs = _ldot(state, bc, j)
    lj = lax_L(state, j)
    m_next = lax_M(state, j + 1, wbc)
    m_j = lax_M(state, j, wbc)
    defect = lhs - (m_next @ lj - lj @ m_j)
    return max(_mat_max_abs(defect.eval(lam)) for lam in grid)


def monodromy_evolution_residual(state, bc, boundary_shift=(0.0, 0.0)):
    """Coefficient max-norm of  sum_n L_N..L_{n+1} Ldot_n L_{n-1}..L_1
    minus  (M_{N+1} T - T M_1)  with closure-resolved end matrices."""
    n = state.n_sites
    wbc = _shifted_bc(bc, boundary_shift)
    ls = [lax_L(state, k) for k in range(1, n + 1)]
    total = None
    for k in range(1, n + 1):
        term = _ldot(state, bc, k)
        for m in range(k - 1, 0, -1):
            term = term @ ls[m - 1]
        for m in range(k + 1, n + 1):
            term = ls[m - 1] @ term
        total = term if total is None else total + term
    t = monodromy(state)
    rhs = lax_M(state, n + 1, wbc) @ t - t @ lax_M(state, 1, wbc)
    return (total - rhs).max_abs()


def sklyanin_condition_residual(bc, state, lam, boundary_shift=(0.0, 0.0)):
    """Boundary compatibility defects at a single lambda.

    Open:          (res_plus, res_minus, None) for
                   K_+(l) W_{N+1}(l) = W_{N+1}(-l) K_+(l)  and
                   W_1(l) K_-(l) = K_-(l) W_1(-l).
    Quasiperiodic: (None, None, res_C) for  C M_{N+1}(l) = M_1(l) C.
    """
    n = state.n_sites
    if isinstance(bc, Open):
        wbc = _shifted_bc(bc, boundary_shift)
        w_end = lax_M(state, n + 1, wbc).eval(lam)
        w_end_neg = lax_M(state, n + 1, wbc).eval(-lam)
        w_one = lax_M(state, 1, wbc).eval(lam)
        w_one_neg = lax_M(state, 1, wbc).eval(-lam)
        k_minus, k_plus = boundary_K(bc)
        km, kp = k_minus.eval(lam), k_plus.eval(lam)
        res_plus = _mat_max_abs(kp @ w_end - w_end_neg @ kp)
        res_minus = _mat_max_abs(w_one @ km - km @ w_one_neg)
        return res_plus, res_minus, None
    if isinstance(bc, Quasiperiodic):
        c = boundary_C(bc.xi)
        m_end = lax_M(state, n + 1, bc).eval(lam)
        m_one = lax_M(state, 1, bc).eval(lam)
        return None, None, _mat_max_abs(c @ m_end - m_one @ c)
    raise WrongRegime("sklyanin_condition_residual needs open or quasiperiodic")
