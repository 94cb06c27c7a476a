"""Normal-ordered Weyl-algebra engine over exact rationals.

An operator is a finite sum  sum c * prod_i q_i^{a_i} d_i^{b_i}  with the
canonical (anti-normal derivative) order fixed per site, so equality of
operators is equality of term maps.  The defining relation is
[d_i, q_j] = delta_ij; the lattice momentum is realized as r_i = -eta d_i,
giving [q_i, r_j] = eta delta_ij.

The term-product inner loop lives in a small kernel with two
implementations (compiled / pure Python) selected here at import.
"""
from __future__ import annotations

from ._rat import rat

try:  # compiled kernel, if the extension was built
    from . import _weylkernel as _kernel
except ImportError:  # pragma: no cover - depends on build environment
    from . import _weylkernel_py as _kernel

BACKEND = _kernel.BACKEND


def kernel_backend():
    """Name of the active term-product kernel ("cython" or "python")."""
    return BACKEND


class WeylOp:
    """Immutable normal-ordered operator on an n-site chain."""

    __slots__ = ("n", "terms")

    def __init__(self, n, terms=None):
        self.n = n
        t = dict(terms) if terms else {}
        _kernel.trim(t)
        self.terms = t

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, n):
        return cls(n)

    @classmethod
    def scalar(cls, n, c):
        if c == 0:
            return cls(n)
        return cls(n, {(0,) * (2 * n): c})

    @classmethod
    def identity(cls, n):
        return cls.scalar(n, 1)

    @classmethod
    def q(cls, n, i):
        key = [0] * (2 * n)
        key[i] = 1
        return cls(n, {tuple(key): 1})

    @classmethod
    def dq(cls, n, i):
        key = [0] * (2 * n)
        key[n + i] = 1
        return cls(n, {tuple(key): 1})

    @classmethod
    def r(cls, n, i, eta):
        """Momentum r_i = -eta d_i."""
        key = [0] * (2 * n)
        key[n + i] = 1
        return cls(n, {tuple(key): -rat(eta)})

    # -- predicates ----------------------------------------------------
    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, WeylOp):
            return self.n == other.n and self.terms == other.terms
        # comparison against a scalar (0, 1, rationals)
        if other == 0:
            return not self.terms
        return self.terms == {(0,) * (2 * self.n): other}

    def __hash__(self):
        raise TypeError("WeylOp is not hashable")

    # -- ring operations ------------------------------------------------
    def _check(self, other):
        if self.n != other.n:
            from .errors import SiteCountMismatch
            raise SiteCountMismatch(f"{self.n} vs {other.n} sites")

    def __add__(self, other):
        if not isinstance(other, WeylOp):
            other = WeylOp.scalar(self.n, other)
        self._check(other)
        out = dict(self.terms)
        _kernel.add_into(out, other.terms)
        return WeylOp(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return WeylOp(self.n, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, WeylOp):
            other = WeylOp.scalar(self.n, other)
        self._check(other)
        out = dict(self.terms)
        _kernel.add_into(out, other.terms, -1)
        return WeylOp(self.n, out)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, WeylOp):
            return WeylOp(self.n, {k: c * other for k, c in self.terms.items()})
        self._check(other)
        out = {}
        _kernel.mul_into(out, self.terms, other.terms, self.n)
        return WeylOp(self.n, out)

    def __rmul__(self, other):
        return WeylOp(self.n, {k: other * c for k, c in self.terms.items()})

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative operator power")
        out = WeylOp.identity(self.n)
        for _ in range(k):
            out = out * self
        return out

    # -- actions and views ----------------------------------------------
    def apply(self, poly):
        """Act on a commuting polynomial {exponent tuple: coeff}."""
        n = self.n
        out = {}
        for key, c in self.terms.items():
            a, b = key[:n], key[n:]
            for mono, pc in poly.items():
                if any(mono[i] < b[i] for i in range(n)):
                    continue
                w = pc * c
                for i in range(n):
                    for j in range(b[i]):
                        w *= mono[i] - j
                tgt = tuple(mono[i] - b[i] + a[i] for i in range(n))
                out[tgt] = out.get(tgt, 0) + w
        _kernel.trim(out)
        return out

    def scalar_part(self):
        """Coefficient of the identity term."""
        return self.terms.get((0,) * (2 * self.n), 0)

    def degree_shift_balanced(self):
        """True if every term raises and lowers total degree equally."""
        n = self.n
        return all(sum(k[:n]) == sum(k[n:]) for k in self.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for key in sorted(self.terms, key=lambda k: (sum(k), k)):
            c = self.terms[key]
            n = self.n
            facs = [str(c)]
            for i in range(n):
                if key[i]:
                    facs.append(f"q{i+1}" + (f"^{key[i]}" if key[i] > 1 else ""))
            for i in range(n):
                if key[n + i]:
                    facs.append(f"d{i+1}" + (f"^{key[n+i]}" if key[n+i] > 1 else ""))
            bits.append("*".join(facs))
        return " + ".join(bits)


def commutator(a, b):
    return a * b - b * a


def weyl_mul(a, b):
    """Exact normal-ordered product (function form of ``a * b``)."""
    return a * b
