"""Identity suites producing machine-readable verification reports.

Each record certifies one identity at concrete parameters:

    {identity_id, parameters, residual, tolerance, pass}

residual is a float for numeric checks and "exact-pass"/"exact-fail" for
rational-arithmetic checks.  Negative controls and threshold-exceed checks
store residual = threshold / observed with tolerance 1.0, so the invariant
pass <=> residual <= tolerance holds uniformly; the raw observation is kept
in parameters.  Reports are deterministic for a fixed (suite, seed,
tol_scale) and records are sorted by identity_id.
"""
from __future__ import annotations

import json
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import __version__
from ._rat import rat
from .errors import DstlabError
from .lattice import (LatticeState, Observable, Open, Periodic, Quasiperiodic,
                      coordinate, eom, flow_consistency_residual, hamiltonian,
                      poisson_bracket, step_rk4)
from .monodromy import (conserved_coeffs, generator, lax_consistency_residual,
                        monodromy, monodromy_evolution_residual,
                        sklyanin_condition_residual)


@dataclass
class Record:
    identity_id: str
    parameters: dict
    residual: object
    tolerance: object
    passed: bool

    def to_json(self):
        return {"identity_id": self.identity_id,
                "parameters": self.parameters,
                "residual": self.residual,
                "tolerance": self.tolerance,
                "pass": self.passed}


def _num(x):
    if isinstance(x, complex):
        return float(abs(x))
    return float(x)


def check(identity_id, residual, tolerance, **params):
    r = _num(residual)
    return Record(identity_id, params, r, float(tolerance), r <= tolerance)


def check_exceeds(identity_id, observed, threshold, **params):
    """Negative controls / order checks: pass iff observed >= threshold."""
    obs = _num(observed)
    ratio = float(threshold) / obs if obs > 0 else float("inf")
    params = dict(params)
    params["observed"] = obs
    params["threshold"] = float(threshold)
    return Record(identity_id, params, ratio, 1.0, ratio <= 1.0)


def check_exact(identity_id, ok, **params):
    return Record(identity_id, params, "exact-pass" if ok else "exact-fail",
                  "exact", bool(ok))


def _state(rng, n, scale=0.5, complex_=False):
    q = rng.uniform(-scale, scale, n)
    r = rng.uniform(-scale, scale, n)
    if complex_:
        q = q + 1j * rng.uniform(-scale, scale, n)
        r = r + 1j * rng.uniform(-scale, scale, n)
    return LatticeState(tuple(q), tuple(r))


def _regimes():
    return [("periodic", Periodic()),
            ("quasiperiodic", Quasiperiodic(2.0)),
            ("open", Open(0.3, 0.7))]


def _sub_rng(seed, tag):
    return np.random.default_rng((int(seed) << 16) ^ zlib.crc32(tag.encode()))


# ---------------------------------------------------------------------------
# classical suite
# ---------------------------------------------------------------------------

def suite_classical(seed=1, tol_scale=1.0, force=False):
    recs = []
    for label, bc in _regimes():
        rng = _sub_rng(seed, "flow-" + label)
        worst = 0.0
        for n in range(1, 7):
            for _ in range(8):
                worst = max(worst, flow_consistency_residual(_state(rng, n, 1.0), bc))
        recs.append(check(f"flow-consistency-{label}", worst, 1e-6 * tol_scale,
                          n_max=6, trials=8, seed=seed))

    rng = _sub_rng(seed, "brackets")
    worst_canon = worst_zero = worst_anti = 0.0
    for n in (1, 2, 4):
        st = _state(rng, n, 1.0)
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                qr = poisson_bracket(coordinate("q", i), coordinate("r", j), st)
                worst_canon = max(worst_canon, abs(qr - (1.0 if i == j else 0.0)))
                worst_zero = max(worst_zero,
                                 abs(poisson_bracket(coordinate("q", i), coordinate("q", j), st)),
                                 abs(poisson_bracket(coordinate("r", i), coordinate("r", j), st)))
        h_obs = Observable(lambda s: hamiltonian(s, Periodic()), "H")
        g_obs = Observable(lambda s: s.q[0] ** 2 * s.r[-1], "probe")
        worst_anti = max(worst_anti, abs(poisson_bracket(h_obs, g_obs, st)
                                         + poisson_bracket(g_obs, h_obs, st)))
    recs.append(check("bracket-canonical-pairs", worst_canon, 1e-9 * tol_scale, seed=seed))
    recs.append(check("bracket-coordinates-commute", worst_zero, 1e-9 * tol_scale, seed=seed))
    recs.append(check("bracket-antisymmetry", worst_anti, 1e-12 * tol_scale, seed=seed))

    for label, bc in _regimes():
        rng = _sub_rng(seed, "lax-" + label)
        worst_l = worst_m = 0.0
        for n in range(1, 6):
            for _ in range(5):
                st = _state(rng, n, 1.0)
                worst_l = max(worst_l, max(lax_consistency_residual(st, bc, j)
                                           for j in range(1, n + 1)))
                worst_m = max(worst_m, monodromy_evolution_residual(st, bc))
        recs.append(check(f"lax-compatibility-{label}", worst_l, 1e-12 * tol_scale,
                          n_max=5, seed=seed))
        recs.append(check(f"monodromy-evolution-{label}", worst_m, 1e-12 * tol_scale,
                          n_max=5, seed=seed))

    rng = _sub_rng(seed, "sklyanin")
    st = _state(rng, 4, 1.0)
    rp, rm, _ = sklyanin_condition_residual(Open(0.3, 0.7), st, 1.3)
    _, _, rc = sklyanin_condition_residual(Quasiperiodic(2.0), st, 0.8 + 0.3j)
    recs.append(check("boundary-exchange-plus", rp, 1e-13, seed=seed))
    recs.append(check("boundary-exchange-minus", rm, 1e-13, seed=seed))
    recs.append(check("boundary-exchange-twist", rc, 1e-13, seed=seed))
    rp_bad, _, _ = sklyanin_condition_residual(Open(0.3, 0.7), st, 1.3,
                                               boundary_shift=(0.0, 0.5))
    recs.append(check_exceeds("boundary-exchange-control", rp_bad, 1e-3, seed=seed))
    bad_lax = lax_consistency_residual(st, Open(0.3, 0.7), 4, boundary_shift=(0.0, 0.1))
    recs.append(check_exceeds("lax-compatibility-control", bad_lax, 1e-3, seed=seed))

    rng = _sub_rng(seed, "dets")
    ok = True
    for n in range(1, 9):
        q = tuple(rat(int(k), 7) for k in rng.integers(-9, 9, n))
        r = tuple(rat(int(k), 5) for k in rng.integers(-9, 9, n))
        d = monodromy(LatticeState(q, r)).det()
        ok = ok and d.c == [0] * n + [1]
    recs.append(check_exact("monodromy-determinant", ok, n_max=8, seed=seed))

    rng = _sub_rng(seed, "hcoeffs")
    worst = 0.0
    for label, bc in _regimes():
        for n in range(1, 7):
            for _ in range(17):
                st = _state(rng, n, 1.0)
                cs = conserved_coeffs(st, bc)
                worst = max(worst, abs(cs.hamiltonian_value - hamiltonian(st, bc)))
    recs.append(check("hamiltonian-from-coefficients", worst, 1e-10 * tol_scale,
                      trials=17, seed=seed))

    for label, bc in _regimes():
        drift, _, _ = conservation_run(6, bc, dt=1e-3, t_final=10.0, seed=seed)
        recs.append(check(f"generator-drift-{label}", drift, 1e-8 * tol_scale,
                          n=6, dt=1e-3, t_final=10.0, seed=seed))
    return recs


# Deterministic Newton seed for the elliptic equilibrium of the default
# open chain (N=6, theta = (0.3, 0.7)); all eigenvalues of the linearized
# flow there are purely imaginary, so noise around it stays bounded.
_OPEN_EQ_GUESS = [
    -2.2565 + 0.0j, 0.0 - 1.8566j, 1.5275 + 0.0j, 0.0 + 1.2568j,
    1.0341 + 0.0j, 0.0 - 0.8508j,
    0.0 - 0.3646j, -0.4432 + 0.0j, 0.0 + 0.5386j, -0.6547 + 0.0j,
    0.0 - 0.7957j, -0.9671 + 0.0j,
]


def _flow_vector(z, bc):
    d = eom(LatticeState.from_flat(list(z)), bc)
    return np.array(list(d.dq) + list(d.dr), dtype=complex)


def _flow_jacobian(z, bc, h=1e-7):
    m = len(z)
    jac = np.zeros((m, m), dtype=complex)
    for k in range(m):
        zp, zm = z.copy(), z.copy()
        zp[k] += h
        zm[k] -= h
        jac[:, k] = (_flow_vector(zp, bc) - _flow_vector(zm, bc)) / (2 * h)
    return jac


def _polish_equilibrium(z, bc, tol=1e-13, max_iter=60):
    z = np.asarray(z, dtype=complex).copy()
    for _ in range(max_iter):
        f = _flow_vector(z, bc)
        if np.max(np.abs(f)) < tol:
            return z
        z = z + np.linalg.solve(_flow_jacobian(z, bc), -f)
    return None


def equilibrium_state(n, bc, seed=0, spectral_tol=1e-5, trials=400):
    """A fixed point of the flow whose linearization is elliptic
    (all eigenvalues purely imaginary up to spectral_tol), or None."""
    if isinstance(bc, Open) and n == 6 and (bc.theta_minus, bc.theta_plus) == (0.3, 0.7):
        z = _polish_equilibrium(np.array(_OPEN_EQ_GUESS), bc)
        if z is not None:
            return z
    rng = np.random.default_rng(seed)
    best = None
    for _ in range(trials):
        guess = rng.uniform(0.3, 1.5, 2 * n) * np.exp(2j * np.pi * rng.uniform(0, 1, 2 * n))
        try:
            z = _polish_equilibrium(guess, bc, max_iter=100)
        except np.linalg.LinAlgError:
            continue
        if z is None or np.max(np.abs(z)) > 20:
            continue
        mre = float(np.max(np.abs(np.linalg.eigvals(_flow_jacobian(z, bc)).real)))
        if best is None or mre < best[0]:
            best = (mre, z)
        if mre < 1e-9:
            break
    if best and best[0] < spectral_tol:
        return best[1]
    return None


def initial_state(n, bc, seed, amplitude=None, t_final=10.0):
    """Regime-appropriate initial data for long conservation runs.

    The uniform mode of the ring grows like exp(|xi|^(1/N) t), so closed
    regimes get a seeded random state scaled to stay perturbative out to
    t_final.  The open chain is driven by its boundary couplings and blows
    up from any small state; there the run starts from a seeded perturbation
    of an elliptic equilibrium instead.
    """
    rng = _sub_rng(seed, "traj")
    if isinstance(bc, Open):
        z0 = equilibrium_state(n, bc, seed=seed)
        if z0 is None:
            raise DstlabError("no elliptic equilibrium found for this open chain")
        amp = 1e-3 if amplitude is None else amplitude
        noise = amp * (rng.uniform(-1, 1, 2 * n) + 1j * rng.uniform(-1, 1, 2 * n))
        return LatticeState.from_flat(list(z0 + noise))
    rate = abs(bc.xi) ** (1.0 / n) if isinstance(bc, Quasiperiodic) else 1.0
    scale = amplitude if amplitude is not None else 0.05 * float(np.exp(-rate * t_final))
    return _state(rng, n, scale)


def conservation_run(n, bc, dt, t_final, seed, sample_every=50, amplitude=None):
    """Integrate and track every generator coefficient; returns
    (max relative drift, times, coefficient history)."""
    st = initial_state(n, bc, seed, amplitude=amplitude, t_final=t_final)
    steps = int(round(t_final / dt))
    c0 = np.array(generator(st, bc).c, dtype=complex)
    drift = 0.0
    times = [0.0]
    history = [c0]
    for k in range(1, steps + 1):
        st = step_rk4(st, bc, dt)
        if k % sample_every == 0 or k == steps:
            c = np.array(generator(st, bc).c, dtype=complex)
            rel = np.max(np.abs(c - c0) / np.maximum(1.0, np.abs(c0)))
            drift = max(drift, float(rel))
            times.append(k * dt)
            history.append(c)
    return drift, times, history


# ---------------------------------------------------------------------------
# r-matrix suite
# ---------------------------------------------------------------------------

def suite_rmatrix(seed=1, tol_scale=1.0, force=False, inject_wrong_k=False):
    from .rmatrix import (cism1_residual, cism2_residual_U,
                          reflection_residual_K)
    recs = []
    rng = _sub_rng(seed, "cism1")
    worst_eq = worst_ne = 0.0
    for _ in range(5):
        st = _state(rng, 3, 1.0)
        worst_eq = max(worst_eq, cism1_residual(st, 0.7, -0.3, "local", 2, 2))
        worst_ne = max(worst_ne, cism1_residual(st, 0.7, -0.3, "local", 1, 3))
    recs.append(check("cism1-local", worst_eq, 1e-6 * tol_scale, n=3, seed=seed))
    recs.append(check("cism1-ultralocal", worst_ne, 1e-12, n=3, seed=seed))
    worst = 0.0
    for n in (1, 2, 3):
        for _ in range(7):
            st = _state(rng, n, 1.0)
            worst = max(worst, cism1_residual(st, 0.7, -0.3, "monodromy"))
    recs.append(check("cism1-monodromy", worst, 1e-5 * tol_scale, n_max=3,
                      trials=7, seed=seed))

    theta = 0.7
    if inject_wrong_k:
        km = lambda l: np.array([[theta, l], [l * l, theta]])
        kp = km
    else:
        km = lambda l: np.array([[theta, l], [0.0, theta]])
        kp = lambda l: np.array([[theta, 0.0], [l, theta]])
    pairs = [(0.9, 0.4), (1.3, -0.6), (2.1 + 0.3j, 0.5), (0.31, 1.9), (-1.2, 0.7)]
    recs.append(check("reflection-kminus",
                      max(reflection_residual_K(km, l, m) for l, m in pairs),
                      1e-12 * tol_scale, theta=theta, n_pairs=len(pairs)))
    recs.append(check("reflection-kplus",
                      max(reflection_residual_K(kp, l, m) for l, m in pairs),
                      1e-12 * tol_scale, theta=theta, n_pairs=len(pairs)))
    bad = lambda l: np.array([[theta, l], [l * l, theta]])
    recs.append(check_exceeds("reflection-control",
                              min(reflection_residual_K(bad, l, m) for l, m in pairs),
                              1e-3, theta=theta))
    recs.append(check_exceeds("reflection-printed-variant",
                              min(reflection_residual_K(km, l, m, last_arg="mu")
                                  for l, m in pairs) if not inject_wrong_k else 1.0,
                              1e-3, note="the mu-argument variant must not vanish"))

    bc = Open(0.3, 0.7)
    rng = _sub_rng(seed, "cism2")
    for n, tol in ((1, 1e-5), (2, 5e-5), (3, 1e-4)):
        worst = 0.0
        for _ in range(5):
            st = _state(rng, n, 0.8)
            worst = max(worst, cism2_residual_U(st, bc, 0.9, 0.4))
        recs.append(check(f"cism2-dressed-n{n}", worst, tol * tol_scale,
                          trials=5, seed=seed))

    # convergence order of the bracket stencil, on a cubic witness (the
    # lattice identities themselves are multilinear, hence stencil-exact)
    rng = _sub_rng(seed, "fdorder")
    st = _state(rng, 2, 1.0)
    f = Observable(lambda s: s.q[0] ** 3, "q1^3")
    g = Observable(lambda s: s.r[0], "r1")
    exact = 3.0 * st.q[0] ** 2
    e1 = abs(poisson_bracket(f, g, st, h_scale=1e-3) - exact)
    e2 = abs(poisson_bracket(f, g, st, h_scale=5e-4) - exact)
    order = float(np.log2(e1 / e2)) if e2 > 0 else 4.0
    recs.append(check_exceeds("bracket-stencil-order", order, 1.8,
                              h=1e-3, note="order from step halving on a cubic witness"))

    # scale stability: the identities are stencil-exact, so the residual is
    # roundoff noise; normalized by the identity's own magnitude it must stay
    # at machine level under simultaneous rescaling of (lambda, mu)
    from .monodromy import monodromy as _mono
    from .rmatrix import _kron, _mat2_eval, classical_r
    rng = _sub_rng(seed, "rescale")
    st = _state(rng, 2, 1.0)
    worst = 0.0
    norms = {}
    for c in (0.5, 1.0, 2.0):
        lam, mu = 0.7 * c, -0.3 * c
        res = cism1_residual(st, lam, mu, "monodromy")
        a = _mat2_eval(_mono(st), lam)
        b = _mat2_eval(_mono(st), mu)
        r = classical_r(lam, mu)
        rhs = r @ _kron(a, b) - _kron(a, b) @ r
        scale = max(1.0, float(np.max(np.abs(rhs))))
        norms[str(c)] = float(res / scale)
        worst = max(worst, res / scale)
    fitted_degree = float(np.log2(max(norms["2.0"], 1e-300) / max(norms["0.5"], 1e-300)) / 2)
    recs.append(check("rescale-stability", worst, 1e-9 * tol_scale,
                      normalized=norms, noise_degree=fitted_degree, seed=seed))
    return recs


# ---------------------------------------------------------------------------
# Bäcklund suite
# ---------------------------------------------------------------------------

def suite_backlund(seed=1, tol_scale=1.0, force=False):
    from .backlund import (BTParams, NewtonOptions, bt_generating_check,
                           bt_invariance_residual, bt_local_identity_residual,
                           bt_solve, bt_symplectic_residual,
                           jtilde_invariance_residual, v_dressing_residual)
    recs = []
    rng = _sub_rng(seed, "bt")

    def solvable_state(n):
        return LatticeState(
            tuple(rng.uniform(0.6, 1.4, n) + 1j * rng.uniform(-0.3, 0.3, n)),
            tuple(rng.uniform(0.6, 1.4, n) + 1j * rng.uniform(-0.3, 0.3, n)))

    worst_solve = worst_gen = worst_loc = worst_inv = worst_cl = 0.0
    for n in (1, 2, 3, 4):
        for sigma in (0.1, 0.3, 1.0):
            st = solvable_state(n)
            p = BTParams(sigma)
            r = bt_solve(st, p)
            worst_solve = max(worst_solve, r.newton_residual)
            worst_gen = max(worst_gen, bt_generating_check(st.q, st.r, r.y, r.Y, sigma))
            worst_loc = max(worst_loc,
                            max(bt_local_identity_residual(
                                st.q[i], st.r[i], r.y[i], r.y[(i + 1) % n],
                                st.r[i - 1] if i else st.r[n - 1], sigma)
                                for i in range(n)))
            ra, rb = bt_invariance_residual(st, r, p)
            worst_inv = max(worst_inv, ra, rb)
    recs.append(check("bt-newton-converged", worst_solve, 1e-11 * tol_scale,
                      n_max=4, sigmas=[0.1, 0.3, 1.0], seed=seed))
    recs.append(check("bt-generating-function", worst_gen, 1e-9 * tol_scale, seed=seed))
    recs.append(check("bt-local-exchange", worst_loc, 1e-9 * tol_scale, seed=seed))
    recs.append(check("bt-spectrum-invariance-periodic", worst_inv, 1e-8 * tol_scale,
                      seed=seed))

    st = solvable_state(2)
    pq = BTParams(0.3, Quasiperiodic(2.0))
    rq = bt_solve(st, pq)
    ra, rb = bt_invariance_residual(st, rq, pq)
    recs.append(check("bt-spectrum-invariance-twisted", max(ra, rb),
                      1e-8 * tol_scale, xi=2.0, seed=seed))

    st_r = LatticeState(tuple(rng.uniform(0.7, 1.4, 2)), tuple(rng.uniform(0.7, 1.4, 2)))
    recs.append(check("bt-symplectic-jacobian",
                      bt_symplectic_residual(st_r, BTParams(0.3)),
                      1e-5 * tol_scale, n=2, sigma=0.3, seed=seed))

    # closure-break negative control: end variable off the ring closure
    _, rb_bad = bt_invariance_residual(st, rq, pq, y_end=2.0 * rq.y[0] + 0.5)
    recs.append(check_exceeds("bt-closure-control", rb_bad, 1e-3, seed=seed))

    y1, x0, xn, sig = 0.7 + 0.2j, 1.1 - 0.3j, 0.9, 0.25
    rp, rm = v_dressing_residual(y1, 2.0 * y1, 2.0 * xn, xn, sig, 0.4, 0.8)
    recs.append(check("bt-dressing-plus", rp, 1e-10 * tol_scale, sigma=sig))
    recs.append(check("bt-dressing-minus", rm, 1e-10 * tol_scale, sigma=sig))
    rp_bad, _ = v_dressing_residual(y1, 2.0 * y1, 2.0 * xn, xn, sig, 0.4, 0.8,
                                    a_shift=1e-2)
    recs.append(check_exceeds("bt-dressing-control", rp_bad, 1e-3, a_shift=1e-2))
    recs.append(check("bt-dressed-generator",
                      jtilde_invariance_residual(st, rq, pq, 0.4, 0.8),
                      1e-8 * tol_scale, seed=seed))

    st3 = solvable_state(3)
    ys = [bt_solve(st3, BTParams(0.3, Periodic(),
                                 NewtonOptions(continuation_steps=k))).y
          for k in (10, 20, 40)]
    recs.append(check("bt-branch-stability",
                      max(max(abs(a - b) for a, b in zip(ys[0], yk)) for yk in ys[1:]),
                      1e-10 * tol_scale, steps=[10, 20, 40], seed=seed))

    r1 = bt_solve(st3, BTParams(0.3))
    r2 = bt_solve(r1.state(), BTParams(-0.3))
    recs.append(check("bt-composition-spectrum",
                      (generator(st3, Periodic()) - generator(r2.state(), Periodic())).max_abs(),
                      1e-7 * tol_scale, seed=seed))
    return recs


# ---------------------------------------------------------------------------
# quantum suite
# ---------------------------------------------------------------------------

def _xi_pairs(seed, xi_minus=None, xi_plus=None):
    rng = _sub_rng(seed, "xipairs")
    out = []
    for _ in range(2):
        a, b, c, d = (int(v) for v in rng.integers(1, 9, 4))
        out.append((rat(a, b), rat(c, d)))
    if xi_minus is not None or xi_plus is not None:
        out[0] = (rat(xi_minus if xi_minus is not None else out[0][0]),
                  rat(xi_plus if xi_plus is not None else out[0][1]))
    return out


def suite_quantum(seed=1, tol_scale=1.0, force=False, xi_minus=None, xi_plus=None):
    from .quantum import (QParams, abd_commutation_residual, hq_extract,
                          hq_classical_limit_residual, q_reflection_dressed,
                          q_reflection_minus, q_reflection_plus, rtt_residual,
                          tau_commutes)
    recs = []
    etas = [rat(1), rat(1, 2), rat(3)]
    pairs = _xi_pairs(seed, xi_minus, xi_plus)
    for ei, eta in enumerate(etas):
        for pi, (xm, xp) in enumerate(pairs):
            p = QParams(eta, xm, xp)
            tag = f"eta{ei}-xi{pi}"
            for n in (1, 2):
                ok, _ = rtt_residual(n, p)
                recs.append(check_exact(f"rtt-n{n}-{tag}", ok,
                                        eta=str(eta), xi_minus=str(xm), xi_plus=str(xp)))
                ok, _ = q_reflection_dressed(n, p)
                recs.append(check_exact(f"reflection-dressed-n{n}-{tag}", ok,
                                        eta=str(eta)))
            recs.append(check_exact(f"reflection-quantum-minus-{tag}",
                                    q_reflection_minus(p)[0], eta=str(eta)))
            for sh, nm in (((1, 1), "printed"), ((1, 2), "tau-matched"), ((0, 1), "bare")):
                recs.append(check_exact(f"reflection-quantum-plus-{nm}-{tag}",
                                        q_reflection_plus(p, shift=sh)[0],
                                        eta=str(eta), shift=f"{sh[0]}/{sh[1]}"))
            ok, _ = tau_commutes(1, p)
            recs.append(check_exact(f"tau-commutativity-n1-{tag}", ok, eta=str(eta)))
            abd = abd_commutation_residual(1, p)
            for k, (ok, _) in abd.items():
                recs.append(check_exact(f"exchange-{k}-n1-{tag}", ok, eta=str(eta)))

    p = QParams(rat(1), *pairs[0])
    for n in (1, 2, 3):
        h, rep = hq_extract(n, p)
        recs.append(check_exact(f"hamiltonian-extraction-n{n}",
                                rep["exact"] and rep["ordering"] == "qrqr",
                                ordering=str(rep["ordering"]),
                                constant_shift=str(rep["constant_shift"])))
    for n in (1, 2):
        bad = hq_classical_limit_residual(n, pairs[0][0], pairs[0][1])
        recs.append(check_exact(f"hamiltonian-classical-limit-n{n}", bad == 0,
                                mismatches=bad))

    # negative control: eta mismatch between the two exchange-relation sides
    from .quantum import _embed_first, _embed_second, _mat4_eq, _mat4_mul, _rbar, qmonodromy
    t = qmonodromy(1, p)
    t1 = _embed_first(t, 1, 0)
    t2 = _embed_second(t, 1, 1)
    lhs = _mat4_mul(_mat4_mul(_rbar(1, 1, -1, 0, 2 * p.eta), t1, 1), t2, 1)
    rhs = _mat4_mul(_mat4_mul(t2, t1, 1), _rbar(1, 1, -1, 0, p.eta), 1)
    ok, _ = _mat4_eq(lhs, rhs)
    recs.append(check_exact("rtt-control", not ok, note="mismatched eta must fail"))
    return recs


# ---------------------------------------------------------------------------
# Baxter suite
# ---------------------------------------------------------------------------

def suite_baxter(seed=1, tol_scale=1.0, force=False):
    from .baxter import (BetheConfig, QKernelParams, SovParams, bethe_remainder,
                         bethe_solve, eigen_membership_residual,
                         gauge_triangularize, lambda_degree_probe,
                         lambda_from_roots, sov_residual, tq_scalar_residual,
                         w_ratio_down, w_ratio_up)
    recs = []
    rng = _sub_rng(seed, "baxter")

    def rand_kernel(n, eta=1.0, xi=1.3):
        y1 = 0.9 + 0.3j
        mid = (rng.uniform(0.5, 1.5, n - 1) + 1j * rng.uniform(-0.4, 0.4, n - 1)
               if n > 1 else [])
        y = (y1, *mid, xi * y1)
        q = tuple(rng.uniform(-0.8, 0.8, n) + 1j * rng.uniform(-0.4, 0.4, n))
        sigma = rng.uniform(0.4, 1.4) + 1j * rng.uniform(-0.5, 0.5)
        return QKernelParams(sigma, eta, xi, y, q)

    worst_tq = worst_ur = worst_diag = 0.0
    for n in (1, 2, 3, 4):
        for _ in range(13):
            p = rand_kernel(n)
            res, _ = tq_scalar_residual(p)
            worst_tq = max(worst_tq, res)
            for i in range(n):
                ur, (top, bot) = gauge_triangularize(i, p)
                worst_ur = max(worst_ur, ur)
                worst_diag = max(worst_diag,
                                 abs(top - p.sigma * w_ratio_down(i, p) / p.eta),
                                 abs(bot - p.eta * w_ratio_up(i, p)))
    recs.append(check("tq-three-term-eta1", worst_tq, 1e-9 * tol_scale,
                      n_max=4, trials=13, seed=seed))
    recs.append(check("gauge-offdiagonal", worst_ur, 1e-12 * tol_scale, seed=seed))
    recs.append(check("gauge-diagonal-vs-kernel", worst_diag, 1e-10 * tol_scale,
                      seed=seed))

    p = rand_kernel(3, eta=0.7)
    res, corr = tq_scalar_residual(p)
    recs.append(check("tq-three-term-eta-corrected", res, 1e-9 * tol_scale,
                      eta=0.7, correction_down=abs(corr[0]), correction_up=abs(corr[1])))

    p2 = rand_kernel(2)
    ur_bad, _ = gauge_triangularize(0, p2, wrong_index=True)
    recs.append(check_exceeds("gauge-index-control", ur_bad, 1e-3, seed=seed))

    from .baxter import tq_exact_rational
    lhs, rhs = tq_exact_rational(rat(3, 2), rat(1), rat(2),
                                 (rat(1, 3), rat(4, 3)), (rat(-1, 2),))
    recs.append(check_exact("tq-exact-rational-n1", lhs == rhs))

    for n, m in ((2, 1), (3, 1), (2, 2)):
        cfg = bethe_solve(n, m, 1.0, 1.0, seed=seed)
        recs.append(check(f"bethe-residual-n{n}m{m}", cfg.residual, 1e-10 * tol_scale,
                          roots=[f"{z:.8f}" for z in cfg.roots]))
        recs.append(check(f"bethe-polynomiality-n{n}m{m}", bethe_remainder(cfg),
                          1e-8 * tol_scale))
        recs.append(check(f"bethe-degree-n{n}m{m}", lambda_degree_probe(cfg),
                          1e-8 * tol_scale))
        worst = max(eigen_membership_residual(cfg, s0) for s0 in (0.3, 1.7, -0.9))
        recs.append(check(f"bethe-membership-n{n}m{m}", worst, 1e-6 * tol_scale))
        if m == 1:
            recs.append(check(f"bethe-closed-form-n{n}m1",
                              abs(cfg.roots[0] ** n - 1.0), 1e-10 * tol_scale,
                              note="single-root closed form mu^N = xi"))

    bad = BetheConfig(2, 1, 1.0, 1.0, (1j,), 1.0)
    recs.append(check_exceeds("bethe-membership-control",
                              min(eigen_membership_residual(bad, s0)
                                  for s0 in (0.3, 1.7, -0.9)), 1e-3,
                              note="non-root candidate must fail membership"))

    vac = BetheConfig(2, 0, 1.0, 1.0, (), 0.0)
    recs.append(check("bethe-vacuum",
                      max(abs(lambda_from_roots(vac, s0) - (s0 ** 2 + 1.0))
                          for s0 in (0.45, 1.2)) +
                      eigen_membership_residual(vac, 0.45),
                      1e-12, note="empty configuration"))

    loose = bethe_solve(2, 2, 1.0, 1.0, seed=seed, tol=1e-6)
    tight = bethe_solve(2, 2, 1.0, 1.0, seed=seed, tol=1e-13)
    r_loose = max(bethe_remainder(loose), 1e-300)
    r_tight = max(bethe_remainder(tight), 1e-300)
    ratio = (r_tight / max(tight.residual, 1e-300)) / \
            max(r_loose / max(loose.residual, 1e-300), 1e-300)
    recs.append(check("tq-residual-tracks-solver", ratio, 100.0,
                      loose=float(r_loose), tight=float(r_tight)))

    sv = SovParams(1.0, 1.0, 1.0, lambda u: 1.0, lambda u: 1.0)
    recs.append(check("sov-pinned-value", abs(sov_residual(sv, 0.5) - (-1.0)), 1e-12,
                      note="regression value at u = eta/2"))
    # the two printed prefactor variants differ by 2 xi_+ Dm phi at this point
    recs.append(check("sov-variant-difference",
                      abs(sov_residual(sv, 0.5, variant="alt") - 1.0), 1e-12,
                      note="alt prefactor (2u - eta) pinned alongside"))
    return recs


SUITES = {
    "classical": suite_classical,
    "rmatrix": suite_rmatrix,
    "backlund": suite_backlund,
    "quantum": suite_quantum,
    "baxter": suite_baxter,
}


def run_suites(suite="all", seed=1, tol_scale=1.0, force=False, jobs=1,
               xi_minus=None, xi_plus=None):
    """Execute a suite (or all of them); returns the report dict."""
    names = list(SUITES) if suite == "all" else [suite]
    for nm in names:
        if nm not in SUITES:
            raise KeyError(nm)

    def call(nm):
        if nm == "quantum":
            return SUITES[nm](seed, tol_scale, force,
                              xi_minus=xi_minus, xi_plus=xi_plus)
        return SUITES[nm](seed, tol_scale, force)

    records = []
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            futs = [ex.submit(call, nm) for nm in names]
            for f in futs:
                records.extend(f.result())
    else:
        for nm in names:
            records.extend(call(nm))
    records.sort(key=lambda r: r.identity_id)
    n_pass = sum(1 for r in records if r.passed)
    return {
        "version": __version__,
        "suite": suite,
        "seed": int(seed),
        "tol_scale": float(tol_scale),
        "records": [r.to_json() for r in records],
        "summary": {"total": len(records), "passed": n_pass,
                    "failed": len(records) - n_pass},
    }


def report_to_json(report):
    return json.dumps(report, sort_keys=True, indent=2) + "\n"
