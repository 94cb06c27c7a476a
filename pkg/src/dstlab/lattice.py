"""Phase space, equations of motion and Hamiltonians of the discrete
self-trapping chain under periodic, quasiperiodic and open boundaries.

The chain variables (q_n, r_n) are independent canonical coordinates
(r is *not* constrained to be the conjugate of q), so real and complex
states are both supported.  The bulk flow is

    dq_n/dt = q_{n+1} - q_n^2 r_n,      dr_n/dt = -r_{n-1} + q_n r_n^2,

closed by (q_{N+1}, r_0) = (q_1, r_N) for the periodic ring, by
(xi q_1, xi r_N) for the quasiperiodic twist, and by the fixed couplings
(theta_+, theta_-) for the open chain.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import NonFiniteDerivative, NonFiniteState, WrongRegime, ZeroXi


def _is_finite(x):
    if isinstance(x, complex):
        return math.isfinite(x.real) and math.isfinite(x.imag)
    try:
        return math.isfinite(x)
    except TypeError:
        return True  # exact scalars (rationals) are always finite


@dataclass(frozen=True)
class Periodic:
    def closure(self, q, r):
        return q[0], r[-1]

    label = "periodic"


@dataclass(frozen=True)
class Quasiperiodic:
    xi: complex

    def __post_init__(self):
        if self.xi == 0:
            raise ZeroXi("quasiperiodic twist xi must be nonzero")

    def closure(self, q, r):
        return self.xi * q[0], self.xi * r[-1]

    label = "quasiperiodic"


@dataclass(frozen=True)
class Open:
    theta_minus: complex
    theta_plus: complex

    def closure(self, q, r):
        return self.theta_plus, self.theta_minus

    label = "open"


@dataclass(frozen=True)
class LatticeState:
    """Immutable phase-space point; q and r are length-N tuples."""

    q: tuple
    r: tuple

    def __post_init__(self):
        if len(self.q) != len(self.r) or len(self.q) < 1:
            raise ValueError("q and r must have equal positive length")
        # numpy scalars become plain Python numbers (IEEE overflow without warnings)
        def plain(v):
            return v.item() if hasattr(v, "item") else v
        object.__setattr__(self, "q", tuple(plain(v) for v in self.q))
        object.__setattr__(self, "r", tuple(plain(v) for v in self.r))
        if not all(_is_finite(x) for x in self.q + self.r):
            raise NonFiniteState("state entries must be finite")

    @property
    def n_sites(self):
        return len(self.q)

    def replace(self, q=None, r=None):
        return LatticeState(self.q if q is None else tuple(q),
                            self.r if r is None else tuple(r))

    def flat(self):
        return list(self.q) + list(self.r)

    @classmethod
    def from_flat(cls, z):
        n = len(z) // 2
        return cls(tuple(z[:n]), tuple(z[n:]))


@dataclass(frozen=True)
class Derivative:
    dq: tuple
    dr: tuple


class Observable:
    """Named scalar function of a LatticeState, differentiable nearby."""

    def __init__(self, fn, name="observable"):
        self.fn = fn
        self.name = name

    def __call__(self, state):
        return self.fn(state)


def coordinate(kind, i):
    """Observable picking q_i or r_i (1-based index)."""
    if kind == "q":
        return Observable(lambda s: s.q[i - 1], f"q_{i}")
    if kind == "r":
        return Observable(lambda s: s.r[i - 1], f"r_{i}")
    raise ValueError(kind)


def eom(state, bc):
    """Time derivative of (q, r) with the regime's closure."""
    q, r = state.q, state.r
    n = len(q)
    q_np1, r_0 = bc.closure(q, r)
    qe = q + (q_np1,)           # qe[i] = q_{i+1}, 1-based sites
    re = (r_0,) + r             # re[i] = r_i with re[0] = r_0
    dq = tuple(qe[i + 1] - q[i] * q[i] * r[i] for i in range(n))
    dr = tuple(-re[i] + q[i] * r[i] * r[i] for i in range(n))
    return Derivative(dq, dr)


def hamiltonian(state, bc):
    """Regime Hamiltonian generating `eom` through dq/dt = dH/dr, dr/dt = -dH/dq.

    The quasiperiodic form drops a constant overall xi^(-1/2) factor of the
    trace-generated expression; that factor only rescales time, and dropping
    it makes the flow match the twisted closure literally.
    """
    q, r = state.q, state.r
    n = len(q)
    hop = sum(q[i + 1] * r[i] for i in range(n - 1))
    quart = sum((q[i] * r[i]) ** 2 for i in range(n))
    if isinstance(bc, Periodic):
        return hop + q[0] * r[-1] - quart / 2
    if isinstance(bc, Quasiperiodic):
        return hop + bc.xi * r[-1] * q[0] - quart / 2
    if isinstance(bc, Open):
        return hop - quart / 2 + q[0] * bc.theta_minus + r[-1] * bc.theta_plus
    raise WrongRegime(f"unknown boundary condition {bc!r}")


DEFAULT_FD_STEP = 1e-5


def _grad(f, state, h_scale=DEFAULT_FD_STEP):
    """Central-difference gradient (df/dq_i, df/dr_i); step scales with |coordinate|."""
    q, r = list(state.q), list(state.r)
    n = len(q)
    gq, gr = [], []
    for arr, grad in ((q, gq), (r, gr)):
        for i in range(n):
            h = h_scale * max(1.0, abs(arr[i]))
            old = arr[i]
            arr[i] = old + h
            fp = f(LatticeState(tuple(q), tuple(r)))
            arr[i] = old - h
            fm = f(LatticeState(tuple(q), tuple(r)))
            arr[i] = old
            d = (fp - fm) / (2 * h)
            if not _is_finite(d):
                raise NonFiniteDerivative(f"non-finite difference quotient at site {i + 1}")
            grad.append(d)
    return gq, gr


def poisson_bracket(f, g, state, h_scale=DEFAULT_FD_STEP):
    """{f, g} = sum_n df/dq_n dg/dr_n - df/dr_n dg/dq_n by central differences."""
    fq, fr = _grad(f, state, h_scale)
    gq, gr = _grad(g, state, h_scale)
    return sum(fq[i] * gr[i] - fr[i] * gq[i] for i in range(len(fq)))


def flow_consistency_residual(state, bc, h_scale=DEFAULT_FD_STEP):
    """Max-norm gap between `eom` and the symplectic gradient of `hamiltonian`."""
    d = eom(state, bc)
    hq, hr = _grad(lambda s: hamiltonian(s, bc), state, h_scale)
    gaps = [abs(d.dq[i] - hr[i]) for i in range(len(hq))]
    gaps += [abs(d.dr[i] + hq[i]) for i in range(len(hq))]
    return max(gaps)


def step_rk4(state, bc, dt):
    """One classical RK4 step; raises NonFiniteState on blow-up."""
    if not dt > 0:
        raise ValueError("dt must be positive")
    z0 = state.flat()
    m = len(z0)

    def f(z):
        d = eom(LatticeState.from_flat(z), bc)
        return list(d.dq) + list(d.dr)

    k1 = f(z0)
    k2 = f([z0[i] + 0.5 * dt * k1[i] for i in range(m)])
    k3 = f([z0[i] + 0.5 * dt * k2[i] for i in range(m)])
    k4 = f([z0[i] + dt * k3[i] for i in range(m)])
    z1 = [z0[i] + dt / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]) for i in range(m)]
    if not all(_is_finite(x) for x in z1):
        raise NonFiniteState("trajectory blew up")
    return LatticeState.from_flat(z1)


def principal_sqrt(x):
    """Principal square root, complex when needed."""
    if isinstance(x, complex) or (isinstance(x, float) and x < 0):
        return cmath.sqrt(x)
    if isinstance(x, int) and x < 0:
        return cmath.sqrt(x)
    return math.sqrt(x)
