"""Univariate factorization over F_p.

Dense polynomials are coefficient lists ``[a_0, a_1, ..., a_n]`` with a
nonzero last entry; ``[]`` is zero.  The pipeline is square-free
decomposition, distinct-degree splitting and Cantor-Zassenhaus
equal-degree splitting.  Splitting draws its random elements from a
Philox stream keyed by the input coefficients, so the output is
reproducible and independent of call history.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from .laurent import Exponent, LaurentPoly

Dense = list


def _trim(a: Dense) -> Dense:
    while a and a[-1] == 0:
        a.pop()
    return a


def deg(a: Dense) -> int:
    return len(a) - 1


def add(a: Dense, b: Dense, p: int) -> Dense:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % p
    return _trim(out)


def sub(a: Dense, b: Dense, p: int) -> Dense:
    return add(a, [(-c) % p for c in b], p)


def mul(a: Dense, b: Dense, p: int) -> Dense:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim([c % p for c in out])


def divmod_(a: Dense, b: Dense, p: int) -> tuple[Dense, Dense]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    q = [0] * max(len(a) - len(b) + 1, 0)
    inv = pow(b[-1], -1, p)
    db = deg(b)
    while len(r) - 1 >= db and r:
        c = r[-1] * inv % p
        k = len(r) - 1 - db
        q[k] = c
        for j, y in enumerate(b):
            r[k + j] = (r[k + j] - c * y) % p
        _trim(r)
    return _trim(q), r


def rem(a: Dense, b: Dense, p: int) -> Dense:
    return divmod_(a, b, p)[1]


def monic(a: Dense, p: int) -> Dense:
    if not a:
        return a
    inv = pow(a[-1], -1, p)
    return [c * inv % p for c in a]


def gcd(a: Dense, b: Dense, p: int) -> Dense:
    while b:
        a, b = b, rem(a, b, p)
    return monic(a, p)


def powmod(a: Dense, e: int, f: Dense, p: int) -> Dense:
    result = [1]
    base = rem(a, f, p)
    while e:
        if e & 1:
            result = rem(mul(result, base, p), f, p)
        e >>= 1
        if e:
            base = rem(mul(base, base, p), f, p)
    return result


def derivative(a: Dense, p: int) -> Dense:
    return _trim([i * c % p for i, c in enumerate(a)][1:])


def _pth_root(a: Dense, p: int) -> Dense:
    # a has only exponents divisible by p and a^(1/p) keeps coefficients
    return a[::p]


def sqf_list(f: Dense, p: int) -> list[tuple[Dense, int]]:
    """Square-free decomposition of a monic ``f`` as ``[(g_i, e_i)]``."""
    out: list[tuple[Dense, int]] = []

    def run(f: Dense, mult: int) -> None:
        if deg(f) < 1:
            return
        df = derivative(f, p)
        c = gcd(f, df, p)
        w = divmod_(f, c, p)[0]
        i = 1
        while deg(w) > 0:
            y = gcd(w, c, p)
            fac = divmod_(w, y, p)[0]
            if deg(fac) > 0:
                out.append((monic(fac, p), i * mult))
            i += 1
            w = y
            c = divmod_(c, y, p)[0]
        if deg(c) > 0:
            run(monic(_pth_root(c, p), p), mult * p)

    run(monic(f, p), 1)
    return out


def distinct_degree(f: Dense, p: int) -> list[tuple[Dense, int]]:
    """Split a monic square-free ``f`` into products of equal-degree irreducibles."""
    out = []
    x = [0, 1]
    h = x
    i = 1
    while deg(f) >= 2 * i:
        h = powmod(h, p, f, p)
        g = gcd(f, sub(h, x, p), p)
        if deg(g) > 0:
            out.append((g, i))
            f = divmod_(f, g, p)[0]
            h = rem(h, f, p)
        i += 1
    if deg(f) > 0:
        out.append((f, deg(f)))
    return out


def equal_degree(f: Dense, k: int, p: int, rng: np.random.Generator) -> list[Dense]:
    """Cantor-Zassenhaus splitting of ``f`` into its degree-``k`` irreducible factors."""
    n = deg(f)
    if n == k:
        return [f]
    while True:
        a = _trim([int(c) for c in rng.integers(0, p, size=n)])
        if deg(a) < 1:
            continue
        if p == 2:
            # trace map a + a^2 + ... + a^(2^(k-1))
            t = a
            b = a
            for _ in range(k - 1):
                t = rem(mul(t, t, p), f, p)
                b = add(b, t, p)
        else:
            b = sub(powmod(a, (p**k - 1) // 2, f, p), [1], p)
        g = gcd(f, b, p)
        if 0 < deg(g) < n:
            h = divmod_(f, g, p)[0]
            return equal_degree(g, k, p, rng) + equal_degree(h, k, p, rng)


def _seed(f: Dense, p: int) -> int:
    digest = hashlib.sha256(repr((p, list(f))).encode()).digest()
    return int.from_bytes(digest[:8], "little")


def factor_dense(f: Dense, p: int) -> tuple[int, list[tuple[Dense, int]]]:
    """Complete factorization ``f = unit * prod g^e`` with monic irreducible ``g``."""
    f = _trim(list(f))
    if not f:
        raise ValueError("cannot factor the zero polynomial")
    unit = f[-1]
    rng = np.random.Generator(np.random.Philox(key=_seed(f, p)))
    factors: list[tuple[Dense, int]] = []
    for g, e in sqf_list(f, p):
        for h, k in distinct_degree(g, p):
            for irr in equal_degree(h, k, p, rng):
                factors.append((irr, e))
    merged: dict[tuple, int] = {}
    for g, e in factors:
        merged[tuple(g)] = merged.get(tuple(g), 0) + e
    ordered = sorted(merged.items(), key=lambda t: (len(t[0]), t[0][::-1]))
    return unit, [(list(g), e) for g, e in ordered]


@dataclass(frozen=True)
class Factorization:
    """``unit * X^monomial * prod(f ** e)`` with monic, non-monomial factors."""

    unit: int
    factors: tuple = ()
    monomial: Exponent | None = None
    asserted: bool = False

    def product(self, p: int, d: int) -> LaurentPoly:
        mono = self.monomial if self.monomial is not None else (0,) * d
        out = LaurentPoly.monomial(p, d, mono, self.unit)
        for g, e in self.factors:
            out = out * g**e
        return out

    def distinct(self) -> list[LaurentPoly]:
        return [g for g, _ in self.factors]


def _to_dense(A: LaurentPoly, var: int) -> tuple[Dense, int]:
    lo, hi = A.exponent_range(var)
    out = [0] * (hi - lo + 1)
    for n, c in A.items():
        out[n[var - 1] - lo] = c
    return out, lo


def _from_dense(a: Dense, p: int, d: int, var: int, shift: int = 0) -> LaurentPoly:
    terms = {}
    for i, c in enumerate(a):
        if c:
            n = [0] * d
            n[var - 1] = i + shift
            terms[tuple(n)] = c
    return LaurentPoly(p, d, terms)


def univariate_factor(A: LaurentPoly) -> Factorization:
    """Irreducible factorization of a Laurent polynomial in a single variable.

    The lowest power of the variable is pulled out as a monomial unit, so
    every returned factor is monic with nonzero constant term.
    """
    if A.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    used = A.variables()
    if len(used) > 1:
        raise ValueError(f"polynomial is multivariate (uses x{sorted(used)})")
    p, d = A.p, A.d
    if not used:
        return Factorization(unit=A.coeff((0,) * d), monomial=(0,) * d)
    (var,) = used
    dense, low = _to_dense(A, var)
    mono = [0] * d
    mono[var - 1] = low
    unit, facs = factor_dense(dense, p)
    factors = tuple((_from_dense(g, p, d, var), e) for g, e in facs)
    result = Factorization(unit=unit, factors=factors, monomial=tuple(mono))
    if result.product(p, d) != A:
        raise ArithmeticError("factorization failed its product check")
    return result


def verify_factor_hint(A: LaurentPoly, hint: Factorization) -> Factorization:
    """Accept a user factorization of a multivariate polynomial after a product check.

    Irreducibility of the supplied factors is not checked; the result is
    marked ``asserted``.
    """
    if hint.product(A.p, A.d) != A:
        raise ValueError("factor hint does not multiply back to the polynomial")
    for g, _ in hint.factors:
        if g.is_monomial():
            raise ValueError(f"factor {g} is a monomial (a unit)")
    return Factorization(hint.unit, tuple(hint.factors), hint.monomial, asserted=True)

