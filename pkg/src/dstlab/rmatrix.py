"""Numerical checks of the classical r-matrix Poisson algebras.

Brackets of matrix entries are taken by central finite differences of the
matrix-valued functions of the state (uniform machinery for the site Lax
matrix, the monodromy and the dressed open-chain matrix); the r-matrix side
is plain tensor algebra.  Tensor-leg ordering: a 4x4 matrix acts on
e1(x)e1, e1(x)e2, e2(x)e1, e2(x)e2, and the bracket table stores
{A_ij(lambda), B_kl(mu)} at row 2i+k, column 2j+l (0-based).
"""
from __future__ import annotations

import numpy as np

from .errors import CoincidingSpectralParams, WrongRegime, ZeroSpectralParam
from .lattice import DEFAULT_FD_STEP, LatticeState, Open
from .monodromy import adjugate_neg, boundary_K, lax_L, monodromy

PERM = np.array([[1, 0, 0, 0],
                 [0, 0, 1, 0],
                 [0, 1, 0, 0],
                 [0, 0, 0, 1]], dtype=complex)


def classical_r(lam, mu):
    """r(lambda, mu) = -P / (lambda - mu)."""
    if lam == mu:
        raise CoincidingSpectralParams("lambda == mu")
    return -PERM / (lam - mu)


def _mat_fn_grads(mat_fn, state, h_scale=DEFAULT_FD_STEP):
    """d(mat_fn)/dq_n and d(mat_fn)/dr_n, each shaped (N, 2, 2)."""
    q, r = list(state.q), list(state.r)
    n = len(q)
    out = []
    for arr in (q, r):
        grads = np.empty((n, 2, 2), dtype=complex)
        for i in range(n):
            h = h_scale * max(1.0, abs(arr[i]))
            old = arr[i]
            arr[i] = old + h
            mp = mat_fn(LatticeState(tuple(q), tuple(r)))
            arr[i] = old - h
            mm = mat_fn(LatticeState(tuple(q), tuple(r)))
            arr[i] = old
            grads[i] = (np.asarray(mp) - np.asarray(mm)) / (2 * h)
        out.append(grads)
    return out


def bracket_table(a_fn, b_fn, state, h_scale=DEFAULT_FD_STEP):
    """4x4 table of {A_ij, B_kl} at row (i,k), column (j,l)."""
    daq, dar = _mat_fn_grads(a_fn, state, h_scale)
    dbq, dbr = _mat_fn_grads(b_fn, state, h_scale)
    table = np.einsum("nij,nkl->ikjl", daq, dbr) - np.einsum("nij,nkl->ikjl", dar, dbq)
    return table.reshape(4, 4)


def _kron(a, b):
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def _mat2_eval(m, lam):
    e = m.eval(lam)
    return np.array([[complex(e.a11), complex(e.a12)],
                     [complex(e.a21), complex(e.a22)]])


def cism1_residual(state, lam, mu, level="monodromy", n=None, m=None,
                   h_scale=DEFAULT_FD_STEP):
    """Defect of the quadratic Poisson algebra {A(l) (x), A(m)} = [r, A(l) x A(m)].

    level="local" checks the site Lax matrices L_n, L_m (zero RHS for n != m);
    level="monodromy" checks the full monodromy matrix.
    """
    if lam == mu:
        raise CoincidingSpectralParams("lambda == mu")
    if level == "local":
        if n is None or m is None:
            raise ValueError("local level needs site indices n and m")
        a_fn = lambda s: _mat2_eval(lax_L(s, n), lam)
        b_fn = lambda s: _mat2_eval(lax_L(s, m), mu)
        lhs = bracket_table(a_fn, b_fn, state, h_scale)
        if n != m:
            rhs = np.zeros((4, 4), dtype=complex)
        else:
            r = classical_r(lam, mu)
            ab = _kron(a_fn(state), b_fn(state))
            rhs = r @ ab - ab @ r
        return float(np.max(np.abs(lhs - rhs)))
    if level == "monodromy":
        a_fn = lambda s: _mat2_eval(monodromy(s), lam)
        b_fn = lambda s: _mat2_eval(monodromy(s), mu)
        lhs = bracket_table(a_fn, b_fn, state, h_scale)
        r = classical_r(lam, mu)
        ab = _kron(a_fn(state), b_fn(state))
        rhs = r @ ab - ab @ r
        return float(np.max(np.abs(lhs - rhs)))
    raise ValueError(f"unknown level {level!r}")


def reflection_residual_K(k_fn, lam, mu, last_arg="lambda"):
    """Defect of the classical reflection equation for a state-independent K(lambda).

    [r(l-m), K(l) x K(m)] + K1(l) r(l+m) K2(m) - K2(m) r(l+m) K1(last)

    last_arg selects the spectral argument of the final K1 factor: "lambda"
    is the standard algebra (and the one the triangular boundary matrices
    satisfy); "mu" is also computable for comparison.
    """
    if lam == mu:
        raise CoincidingSpectralParams("lambda == mu")
    if lam == -mu:
        raise CoincidingSpectralParams("lambda == -mu")
    kl = np.asarray(k_fn(lam), dtype=complex)
    km = np.asarray(k_fn(mu), dtype=complex)
    klast = kl if last_arg == "lambda" else km
    i2 = np.eye(2)
    rm = classical_r(lam, mu)
    rp = -PERM / (lam + mu)
    kk = _kron(kl, km)
    expr = rm @ kk - kk @ rm + _kron(kl, i2) @ rp @ _kron(i2, km) \
        - _kron(i2, km) @ rp @ _kron(klast, i2)
    return float(np.max(np.abs(expr)))


def dressed_U(state, bc, lam):
    """U(lambda) = T(lambda) K_-(lambda) T^{-1}(-lambda), evaluated numerically.

    T^{-1}(-lambda) is restored from the adjugate by the scalar (-lambda)^N.
    """
    if not isinstance(bc, Open):
        raise WrongRegime("dressed_U needs the open regime")
    if lam == 0:
        raise ZeroSpectralParam("lambda == 0")
    n = state.n_sites
    t = monodromy(state)
    k_minus, _ = boundary_K(bc)
    u = _mat2_eval(t, lam) @ _mat2_eval(k_minus, lam) @ _mat2_eval(adjugate_neg(t), lam)
    return u / (-lam) ** n


def cism2_residual_U(state, bc, lam, mu, h_scale=DEFAULT_FD_STEP):
    """Defect of the reflection-type Poisson algebra for the dressed matrix U:

    {U1(l), U2(m)} = [r(l-m), U(l) x U(m)] + U1(l) r(l+m) U2(m)
                                           - U2(m) r(l+m) U1(l)
    """
    if lam in (mu, -mu):
        raise CoincidingSpectralParams("lambda in {mu, -mu}")
    if lam == 0 or mu == 0:
        raise ZeroSpectralParam("adjugate normalization needs lambda, mu != 0")
    a_fn = lambda s: dressed_U(s, bc, lam)
    b_fn = lambda s: dressed_U(s, bc, mu)
    lhs = bracket_table(a_fn, b_fn, state, h_scale)
    ul, um = a_fn(state), b_fn(state)
    i2 = np.eye(2)
    rm = classical_r(lam, mu)
    rp = -PERM / (lam + mu)
    uu = _kron(ul, um)
    u1 = _kron(ul, i2)
    u2 = _kron(i2, um)
    rhs = rm @ uu - uu @ rm + u1 @ rp @ u2 - u2 @ rp @ u1
    return float(np.max(np.abs(lhs - rhs)))
