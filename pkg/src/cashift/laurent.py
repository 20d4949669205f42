"""Laurent polynomials over a prime field F_p in d variables.

A polynomial is a finitely supported table ``exponent vector -> residue``.
Zero coefficients are never stored, so two polynomials are equal exactly
when their tables are.  Monomial ``X^n`` acts on configurations as the
translation ``T_n``; the Frobenius power ``A^(p^e)`` just scales every
exponent by ``p^e``.
"""

from __future__ import annotations

import math
import re
from typing import Iterable, Iterator, Mapping, Optional, Tuple

from .errors import ParseError

Exponent = Tuple[int, ...]
Shape = frozenset

MAX_PRIME = 1 << 16
MAX_DIM = 4


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def check_prime(p: int) -> int:
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"p={p!r} is not prime")
    if p >= MAX_PRIME:
        raise ValueError(f"p={p} exceeds the supported bound {MAX_PRIME}")
    return p


def check_dim(d: int) -> int:
    if not isinstance(d, int) or d < 1 or d > MAX_DIM:
        raise ValueError(f"dimension d={d!r} must satisfy 1 <= d <= {MAX_DIM}")
    return d


def vadd(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x + y for x, y in zip(a, b))


def vsub(a: Exponent, b: Exponent) -> Exponent:
    return tuple(x - y for x, y in zip(a, b))


def vscale(k: int, a: Exponent) -> Exponent:
    return tuple(k * x for x in a)


def _display_key(n: Exponent):
    # lexicographic on (|n_i|, n_i < 0) from the last axis: constant first,
    # time powers last, x before x^-1
    return tuple((abs(x), x < 0) for x in reversed(n))


class LaurentPoly:
    """Immutable element of F_p[X_1^{+-1}, ..., X_d^{+-1}]."""

    __slots__ = ("p", "d", "_terms", "_hash")

    def __init__(self, p: int, d: int, terms: Mapping[Exponent, int] | Iterable = ()):
        self.p = p
        self.d = d
        items = terms.items() if isinstance(terms, Mapping) else terms
        table: dict[Exponent, int] = {}
        for n, c in items:
            n = tuple(int(x) for x in n)
            if len(n) != d:
                raise ValueError(f"exponent {n} does not have length d={d}")
            c = (table.get(n, 0) + c) % p
            if c:
                table[n] = c
            else:
                table.pop(n, None)
        self._terms = table
        self._hash = None

    # construction helpers

    @classmethod
    def zero(cls, p: int, d: int) -> "LaurentPoly":
        return cls(p, d)

    @classmethod
    def constant(cls, p: int, d: int, c: int = 1) -> "LaurentPoly":
        return cls(p, d, {(0,) * d: c})

    @classmethod
    def one(cls, p: int, d: int) -> "LaurentPoly":
        return cls.constant(p, d, 1)

    @classmethod
    def monomial(cls, p: int, d: int, n: Exponent, c: int = 1) -> "LaurentPoly":
        return cls(p, d, {tuple(n): c})

    @classmethod
    def variable(cls, p: int, d: int, i: int) -> "LaurentPoly":
        """The indeterminate ``x_i`` (1-based index)."""
        n = [0] * d
        n[i - 1] = 1
        return cls(p, d, {tuple(n): 1})

    @classmethod
    def _raw(cls, p: int, d: int, table: dict) -> "LaurentPoly":
        obj = cls.__new__(cls)
        obj.p, obj.d, obj._terms, obj._hash = p, d, table, None
        return obj

    # inspection

    def terms(self) -> dict[Exponent, int]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[Exponent, int]]:
        return iter(sorted(self._terms.items()))

    def coeff(self, n: Exponent) -> int:
        return self._terms.get(tuple(n), 0)

    def support(self) -> frozenset:
        return frozenset(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def variables(self) -> set[int]:
        """1-based indices of variables occurring with nonzero exponent."""
        return {i + 1 for n in self._terms for i, x in enumerate(n) if x}

    def exponent_range(self, i: int) -> tuple[int, int]:
        """(min, max) exponent of the 1-based variable ``i``."""
        vals = [n[i - 1] for n in self._terms]
        return min(vals), max(vals)

    def evaluate_ones(self) -> int:
        return sum(self._terms.values()) % self.p

    # ring structure

    def _check(self, other: "LaurentPoly") -> None:
        if self.p != other.p or self.d != other.d:
            raise ValueError(
                f"mismatched rings: (p={self.p}, d={self.d}) vs (p={other.p}, d={other.d})"
            )

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            self._check(other)
            return other
        if isinstance(other, int):
            return LaurentPoly.constant(self.p, self.d, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        table = dict(self._terms)
        p = self.p
        for n, c in other._terms.items():
            v = (table.get(n, 0) + c) % p
            if v:
                table[n] = v
            else:
                table.pop(n, None)
        return LaurentPoly._raw(p, self.d, table)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        p = self.p
        return LaurentPoly._raw(p, self.d, {n: p - c for n, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.p
        table: dict[Exponent, int] = {}
        for n, a in self._terms.items():
            for m, b in other._terms.items():
                k = tuple(x + y for x, y in zip(n, m))
                table[k] = (table.get(k, 0) + a * b) % p
        return LaurentPoly._raw(p, self.d, {k: v for k, v in table.items() if v})

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "LaurentPoly":
        if e < 0:
            if self.is_monomial():
                return self.inverse_monomial() ** (-e)
            raise ValueError("negative power of a non-monomial")
        result = LaurentPoly.one(self.p, self.d)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def scale(self, c: int) -> "LaurentPoly":
        c %= self.p
        if not c:
            return LaurentPoly.zero(self.p, self.d)
        p = self.p
        return LaurentPoly._raw(p, self.d, {n: v * c % p for n, v in self._terms.items()})

    def shift(self, n: Exponent) -> "LaurentPoly":
        """Multiply by the monomial ``X^n``."""
        return LaurentPoly._raw(self.p, self.d, {vadd(m, n): c for m, c in self._terms.items()})

    def map_exponents(self, f) -> "LaurentPoly":
        """Apply an injective map to every exponent vector."""
        return LaurentPoly._raw(self.p, self.d, {tuple(f(n)): c for n, c in self._terms.items()})

    def inverse_monomial(self) -> "LaurentPoly":
        if not self.is_monomial():
            raise ValueError("only monomials are invertible here")
        (n, c), = self._terms.items()
        return LaurentPoly._raw(self.p, self.d, {vscale(-1, n): pow(c, -1, self.p)})

    def leading(self) -> tuple[Exponent, int]:
        """Lexicographically largest term."""
        n = max(self._terms)
        return n, self._terms[n]

    # equality / hashing / printing

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPoly.constant(self.p, self.d, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.p == other.p and self.d == other.d and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.p, self.d, frozenset(self._terms.items())))
        return self._hash

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"LaurentPoly({format_poly(self)!r}, p={self.p}, d={self.d})"


# ---------------------------------------------------------------- text format

_TOKEN = re.compile(r"(?P<int>\d+)|(?P<var>[xX](?P<idx>\d+))|(?P<op>[-+*^{}])")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        if m.group("int") is not None:
            tokens.append(("int", m.group("int"), pos))
        elif m.group("var") is not None:
            tokens.append(("var", m.group("idx"), pos))
        else:
            tokens.append((m.group("op"), m.group("op"), pos))
        pos = m.end()
    tokens.append(("end", "", n))
    return tokens


def parse_poly(text: str, p: int, d: int) -> LaurentPoly:
    """Parse ``poly := term (('+'|'-') term)*`` into a reduced Laurent polynomial.

    Terms are ``[coeff ['*']] factor*`` with ``factor := x<i> ['^' signed-int]``.
    A leading sign, ``*`` between factors and ``^{-1}`` braces are tolerated.
    """
    check_prime(p)
    check_dim(d)
    tokens = _tokenize(text)
    i = 0

    def peek():
        return tokens[i]

    def take(kind):
        nonlocal i
        tok = tokens[i]
        if tok[0] != kind:
            want = "end of input" if kind == "end" else repr(kind)
            got = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ParseError(f"expected {want}, got {got}", tok[2])
        i += 1
        return tok

    def exponent() -> int:
        braced = peek()[0] == "{"
        if braced:
            take("{")
        sign = 1
        if peek()[0] in ("+", "-"):
            sign = -1 if take(peek()[0])[0] == "-" else 1
        value = sign * int(take("int")[1])
        if braced:
            take("}")
        return value

    def term() -> tuple[Exponent, int]:
        coeff = 1
        expo = [0] * d
        seen = False
        if peek()[0] == "int":
            coeff = int(take("int")[1])
            seen = True
            if peek()[0] == "*":
                take("*")
                if peek()[0] != "var":
                    raise ParseError("expected a variable after '*'", peek()[2])
        while peek()[0] == "var":
            _, idx, pos = take("var")
            k = int(idx)
            if k < 1 or k > d:
                raise ParseError(f"variable x{k} out of range for d={d}", pos)
            e = 1
            if peek()[0] == "^":
                take("^")
                e = exponent()
            expo[k - 1] += e
            seen = True
            if peek()[0] == "*" and tokens[i + 1][0] == "var":
                take("*")
        if not seen:
            tok = peek()
            got = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ParseError(f"expected a term, got {got}", tok[2])
        return tuple(expo), coeff

    table: list[tuple[Exponent, int]] = []
    sign = 1
    if peek()[0] in ("+", "-"):
        sign = -1 if take(peek()[0])[0] == "-" else 1
    n, c = term()
    table.append((n, sign * c))
    while peek()[0] in ("+", "-"):
        sign = -1 if take(peek()[0])[0] == "-" else 1
        n, c = term()
        table.append((n, sign * c))
    take("end")
    return LaurentPoly(p, d, table)


def _format_term(n: Exponent, c: int) -> str:
    factors = []
    for i, e in enumerate(n, start=1):
        if e == 1:
            factors.append(f"x{i}")
        elif e:
            factors.append(f"x{i}^{e}")
    if not factors:
        return str(c)
    body = "".join(factors)
    return body if c == 1 else f"{c}*{body}"


def format_poly(A: LaurentPoly) -> str:
    if A.is_zero():
        return "0"
    return "+".join(_format_term(n, c) for n, c in sorted(A._terms.items(), key=lambda t: _display_key(t[0])))


# ------------------------------------------------------------- shape calculus


def shape(A: LaurentPoly) -> frozenset:
    """Exponent vectors of the monomials occurring in ``A``."""
    if A.is_zero():
        raise ValueError("the zero polynomial has no shape")
    return A.support()


def primitive_translate(S: Iterable[Exponent]) -> tuple[frozenset, Exponent]:
    """Translate ``S`` so its lexicographically smallest point sits at the origin."""
    S = frozenset(tuple(n) for n in S)
    if not S:
        raise ValueError("empty shape")
    origin = min(S)
    return frozenset(vsub(n, origin) for n in S), origin


def scale_shape(S: Iterable[Exponent], k: int) -> frozenset:
    return frozenset(vscale(k, n) for n in S)


def frobenius_power(A: LaurentPoly, e: int) -> LaurentPoly:
    """``A ** (p ** e)``, computed by scaling exponents (c^p = c in F_p)."""
    if e < 0:
        raise ValueError("Frobenius exponent must be >= 0")
    q = A.p**e
    return LaurentPoly._raw(A.p, A.d, {vscale(q, n): c for n, c in A._terms.items()})


def collinear_support(A: LaurentPoly) -> Optional[tuple[Exponent, int]]:
    """Detect ``A = X^a * B(X^(step*m))`` for a primitive direction ``m``.

    Returns ``(m, step)`` with ``m`` primitive and its first nonzero entry
    positive, or ``None`` when the support is not collinear (or is a point).
    """
    if A.is_zero():
        raise ValueError("zero polynomial")
    pts = sorted(A.support())
    if len(pts) < 2:
        return None
    base = pts[0]
    diffs = [vsub(n, base) for n in pts[1:]]
    v = diffs[0]
    g = math.gcd(*v)
    m = tuple(x // g for x in v)
    lead = next(x for x in m if x)
    if lead < 0:
        m = vscale(-1, m)
    k = next(i for i, x in enumerate(m) if x)
    step = 0
    for w in diffs:
        t, r = divmod(w[k], m[k])
        if r or vscale(t, m) != w:
            return None
        step = math.gcd(step, t)
    return m, step


def divide_exact(A: LaurentPoly, B: LaurentPoly) -> Optional[LaurentPoly]:
    """Quotient ``A / B`` in the Laurent ring, or ``None`` if ``B`` does not divide ``A``.

    Both are shifted to polynomials not divisible by any variable; then
    single-divisor lex division has remainder zero iff divisibility holds.
    """
    A._check(B)
    if B.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if A.is_zero():
        return A
    d, p = A.d, A.p
    a0 = tuple(min(n[i] for n in A._terms) for i in range(d))
    b0 = tuple(min(n[i] for n in B._terms) for i in range(d))
    rem = {vsub(n, a0): c for n, c in A._terms.items()}
    div = {vsub(n, b0): c for n, c in B._terms.items()}
    lead = max(div)
    inv = pow(div[lead], -1, p)
    quot: dict[Exponent, int] = {}
    while rem:
        top = max(rem)
        q = vsub(top, lead)
        if min(q) < 0:
            return None
        c = rem[top] * inv % p
        quot[q] = c
        for n, b in div.items():
            k = vadd(n, q)
            v = (rem.get(k, 0) - c * b) % p
            if v:
                rem[k] = v
            else:
                rem.pop(k, None)
    return LaurentPoly._raw(p, d, quot).shift(vsub(a0, b0))
