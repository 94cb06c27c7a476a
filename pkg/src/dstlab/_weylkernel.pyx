# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled kernel for the normal-ordered Weyl-algebra product.

Mirrors _weylkernel_py exactly; coefficients stay arbitrary Python
objects (exact rationals), the win is in the loop and key plumbing.
"""
from itertools import product
from math import comb

BACKEND = "cython"

cdef dict _EXP_CACHE = {}


cdef object _falling(long a, long k):
    cdef long j
    out = 1
    for j in range(k):
        out *= a - j
    return out


cdef tuple _expansion(long b, long a):
    cdef tuple out
    key = (b, a)
    cached = _EXP_CACHE.get(key)
    if cached is not None:
        return <tuple> cached
    cdef long k, top
    top = a if a < b else b
    out = tuple((k, comb(b, k) * _falling(a, k)) for k in range(top + 1))
    _EXP_CACHE[key] = out
    return out


def mul_into(dict out, dict ta, dict tb, long n, factor=1):
    """Accumulate factor * ta * tb into the term dict `out`."""
    cdef long i, k, n2 = 2 * n
    cdef tuple ka, kb, key, exp
    cdef list need, base, ee
    cdef bint plain_factor = factor == 1
    for ka, ca in ta.items():
        for kb, cb in tb.items():
            c = ca * cb if plain_factor else ca * cb * factor
            need = []
            for i in range(n):
                if ka[n + i] and kb[i]:
                    need.append(i)
            if not need:
                key = tuple([ka[i] + kb[i] for i in range(n2)])
                prev = out.get(key)
                out[key] = c if prev is None else prev + c
                continue
            base = [ka[i] + kb[i] for i in range(n2)]
            if len(need) == 1:
                i = need[0]
                exp = _expansion(ka[n + i], kb[i])
                for k, w in exp:
                    coef = c * w
                    ee = base[:]
                    ee[i] -= k
                    ee[n + i] -= k
                    key = tuple(ee)
                    prev = out.get(key)
                    out[key] = coef if prev is None else prev + coef
                continue
            for combo in product(*[_expansion(ka[n + i], kb[i]) for i in need]):
                coef = c
                ee = base[:]
                for i, kw in zip(need, combo):
                    coef = coef * kw[1]
                    ee[i] -= kw[0]
                    ee[n + i] -= kw[0]
                key = tuple(ee)
                prev = out.get(key)
                out[key] = coef if prev is None else prev + coef
    return out


def add_into(dict out, dict t, factor=1):
    cdef tuple k
    if factor == 1:
        for k, c in t.items():
            prev = out.get(k)
            out[k] = c if prev is None else prev + c
    else:
        for k, c in t.items():
            cc = c * factor
            prev = out.get(k)
            out[k] = cc if prev is None else prev + cc
    return out


def trim(dict t):
    cdef list dead = [k for k, c in t.items() if c == 0]
    for k in dead:
        del t[k]
    return t
