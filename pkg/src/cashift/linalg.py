"""Row reduction over F_p.

Rows are lists of residues.  For p = 2 the work happens on int bitsets
(bit j is column j), which is what keeps window languages and box kernels
cheap.  Echelon form is fully reduced, pivots are the first nonzero column
of each row, and rows come back sorted by pivot, so the basis of a row
space is canonical.
"""

from __future__ import annotations

from typing import Sequence


def _pack(row: Sequence[int]) -> int:
    v = 0
    for j, x in enumerate(row):
        if x & 1:
            v |= 1 << j
    return v


def _unpack(v: int, ncols: int) -> list[int]:
    return [(v >> j) & 1 for j in range(ncols)]


def _rref_bits(rows: list[int]) -> list[tuple[int, int]]:
    basis: dict[int, int] = {}
    for v in rows:
        for piv, b in basis.items():
            if (v >> piv) & 1:
                v ^= b
        if not v:
            continue
        piv = (v & -v).bit_length() - 1
        for k in basis:
            if (basis[k] >> piv) & 1:
                basis[k] ^= v
        basis[piv] = v
    return sorted(basis.items())


def _rref_lists(rows: list[list[int]], ncols: int, p: int) -> list[tuple[int, list[int]]]:
    basis: dict[int, list[int]] = {}
    for row in rows:
        v = [x % p for x in row]
        for piv, b in basis.items():
            c = v[piv]
            if c:
                v = [(x - c * y) % p for x, y in zip(v, b)]
        piv = next((j for j, x in enumerate(v) if x), None)
        if piv is None:
            continue
        inv = pow(v[piv], -1, p)
        v = [x * inv % p for x in v]
        for k, b in basis.items():
            c = b[piv]
            if c:
                basis[k] = [(x - c * y) % p for x, y in zip(b, v)]
        basis[piv] = v
    return sorted(basis.items())


def rref(rows: Sequence[Sequence[int]], ncols: int, p: int) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon basis of the row space and its pivot columns."""
    if p == 2:
        red = _rref_bits([_pack(r) for r in rows])
        return [_unpack(v, ncols) for _, v in red], [k for k, _ in red]
    red = _rref_lists([list(r) for r in rows], ncols, p)
    return [v for _, v in red], [k for k, _ in red]


def rank(rows: Sequence[Sequence[int]], ncols: int, p: int) -> int:
    return len(rref(rows, ncols, p)[1])


def reduce(vec: Sequence[int], basis: Sequence[Sequence[int]], pivots: Sequence[int], p: int) -> list[int]:
    """Residual of ``vec`` after eliminating against an RREF basis."""
    v = [x % p for x in vec]
    for b, piv in zip(basis, pivots):
        c = v[piv]
        if c:
            v = [(x - c * y) % p for x, y in zip(v, b)]
    return v


def coordinates(vec: Sequence[int], basis: Sequence[Sequence[int]], pivots: Sequence[int], p: int):
    """Coefficients of ``vec`` in the RREF basis, or ``None`` if outside the span."""
    if any(reduce(vec, basis, pivots, p)):
        return None
    return [vec[piv] % p for piv in pivots]


def nullspace(rows: Sequence[Sequence[int]], ncols: int, p: int) -> list[list[int]]:
    """Basis of ``{x : A x = 0}`` (one vector per free column, in column order)."""
    basis, pivots = rref(rows, ncols, p)
    pivset = set(pivots)
    out = []
    for free in range(ncols):
        if free in pivset:
            continue
        x = [0] * ncols
        x[free] = 1
        for b, piv in zip(basis, pivots):
            x[piv] = (-b[free]) % p
        out.append(x)
    return out


def nullspace_bits(rows: Sequence[int], ncols: int) -> list[int]:
    """GF(2) kernel with rows and result vectors given as int bitsets."""
    red = _rref_bits(list(rows))
    pivset = {k for k, _ in red}
    out = []
    for free in range(ncols):
        if free in pivset:
            continue
        x = 1 << free
        for piv, b in red:
            if (b >> free) & 1:
                x |= 1 << piv
        out.append(x)
    return out
