"""Linear cellular automaton shifts ``P = X_d - Phi`` and the ideal ``<P>``."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .errors import NotCAFormError
from .laurent import (
    Exponent,
    LaurentPoly,
    check_dim,
    check_prime,
    collinear_support,
    divide_exact,
    frobenius_power,
    parse_poly,
    shape,
    vadd,
    vscale,
)


@dataclass(frozen=True)
class CAShift:
    """The shift space annihilated by ``X_d - phi``, with ``phi`` free of ``X_d``."""

    p: int
    d: int
    phi: LaurentPoly

    def __post_init__(self):
        check_prime(self.p)
        check_dim(self.d)
        if self.d < 2:
            raise ValueError("a CA shift needs d >= 2 (one time axis)")
        if self.phi.p != self.p or self.phi.d != self.d:
            raise ValueError("phi lives in a different ring")
        if any(n[-1] for n in self.phi.support()):
            raise ValueError(f"phi={self.phi} involves the time variable x{self.d}")
        if len(self.phi) < 2:
            raise ValueError("phi must have at least two nonzero terms")

    @classmethod
    def from_text(cls, phi: str, p: int, d: int = 2) -> "CAShift":
        return cls(p, d, parse_poly(phi, p, d))

    @property
    def time_unit(self) -> Exponent:
        return (0,) * (self.d - 1) + (1,)

    @property
    def P(self) -> LaurentPoly:
        return LaurentPoly.monomial(self.p, self.d, self.time_unit) - self.phi

    def shape(self) -> frozenset:
        return shape(self.P)

    def phi_shape(self) -> frozenset:
        return shape(self.phi)

    def phi_power(self, k: int) -> LaurentPoly:
        return _phi_power(self.phi, k)

    def __str__(self) -> str:
        return f"x{self.d}-({self.phi}) over F_{self.p}"


@lru_cache(maxsize=4096)
def _phi_power(phi: LaurentPoly, k: int) -> LaurentPoly:
    # p-adic digits: phi^k = prod_i frob(phi^(k_i), i)
    if k < 0:
        raise ValueError("negative time depth")
    p = phi.p
    out = LaurentPoly.one(p, phi.d)
    e = 0
    while k:
        k, digit = divmod(k, p)
        if digit:
            out = out * frobenius_power(_small_power(phi, digit), e)
        e += 1
    return out


@lru_cache(maxsize=1024)
def _small_power(phi: LaurentPoly, k: int) -> LaurentPoly:
    return phi**k


@dataclass(frozen=True)
class CATransform:
    """``A -> unit * X^shift * (A composed with the axis inversions)``."""

    inverted_axes: tuple[int, ...]
    unit: int
    shift: Exponent

    def _invert(self, A: LaurentPoly) -> LaurentPoly:
        axes = {i - 1 for i in self.inverted_axes}
        return A.map_exponents(lambda n: tuple(-x if i in axes else x for i, x in enumerate(n)))

    def apply(self, A: LaurentPoly) -> LaurentPoly:
        return self._invert(A).shift(self.shift).scale(self.unit)

    def undo(self, P: LaurentPoly) -> LaurentPoly:
        back = P.scale(pow(self.unit, -1, P.p)).shift(vscale(-1, self.shift))
        return self._invert(back)

    def describe(self) -> str:
        if not self.inverted_axes:
            return "identity"
        axes = ", ".join(str(i) for i in self.inverted_axes)
        return f"invert axis {axes}" if len(self.inverted_axes) == 1 else f"invert axes {axes}"


def ca_normalize(A: LaurentPoly) -> tuple[CAShift, CATransform]:
    """Find axis inversions and a unit ``u X^m`` bringing ``A`` to ``X_d - Phi``.

    Masks are tried by number of inverted axes, then lexicographically, so
    the identity wins whenever it works.
    """
    if A.is_zero():
        raise NotCAFormError("the zero polynomial is not of CA form")
    p, d = A.p, A.d
    check_dim(d)
    if d < 2:
        raise NotCAFormError("CA form needs d >= 2")
    short_phi = None
    masks = sorted(
        (axes for r in range(d + 1) for axes in itertools.combinations(range(1, d + 1), r)),
        key=lambda axes: (len(axes), axes),
    )
    for axes in masks:
        inv = CATransform(axes, 1, (0,) * d)._invert(A)
        times = sorted({n[-1] for n in inv.support()})
        if len(times) != 2 or times[1] != times[0] + 1:
            continue
        top = [n for n in inv.support() if n[-1] == times[1]]
        if len(top) != 1:
            continue
        (lead,) = top
        unit = pow(inv.coeff(lead), -1, p)
        shift = vadd(vscale(-1, lead), (0,) * (d - 1) + (1,))
        transform = CATransform(axes, unit, shift)
        image = transform.apply(A)
        phi = LaurentPoly.monomial(p, d, (0,) * (d - 1) + (1,)) - image
        if len(phi) < 2:
            short_phi = phi
            continue
        return CAShift(p, d, phi), transform
    if short_phi is not None:
        raise NotCAFormError(f"normal form has Phi={short_phi} with fewer than two terms")
    raise NotCAFormError(f"{A} is not X_d - Phi up to axis inversion and a monomial unit")


def substitute_time(Q: LaurentPoly, ca: CAShift, k: Optional[int] = None) -> tuple[LaurentPoly, int]:
    """Return ``(U, k)`` with ``X_d^k Q = U`` modulo ``<P>`` and ``U`` free of ``X_d``.

    ``k`` defaults to the least power clearing negative time exponents.
    """
    if Q.p != ca.p or Q.d != ca.d:
        raise ValueError("polynomial and CA shift live in different rings")
    if Q.is_zero():
        return Q, k or 0
    least = max(0, -Q.exponent_range(ca.d)[0])
    if k is None:
        k = least
    elif k < least:
        raise ValueError(f"k={k} does not clear the negative time powers of {Q}")
    layers: dict[int, dict] = {}
    for n, c in Q.items():
        layers.setdefault(n[-1] + k, {})[n[:-1] + (0,)] = c
    U = LaurentPoly.zero(ca.p, ca.d)
    for t, table in layers.items():
        U = U + LaurentPoly(ca.p, ca.d, table) * ca.phi_power(t)
    return U, k


def ideal_member(Q: LaurentPoly, ca: CAShift) -> bool:
    """``Q in <X_d - Phi>``: clear negative time powers, substitute ``X_d <- Phi``."""
    return substitute_time(Q, ca)[0].is_zero()


def canonical_residue(R: LaurentPoly, ca: CAShift) -> LaurentPoly:
    """Unique representative ``U * X_d^-k`` of ``R mod <P>`` with ``k`` minimal.

    ``U`` is free of the time variable, and ``Phi`` does not divide ``U`` when
    ``k > 0``; two polynomials are congruent iff these representatives agree.
    """
    U, k = substitute_time(R, ca)
    if U.is_zero():
        return U
    while k > 0:
        q = divide_exact(U, ca.phi)
        if q is None:
            break
        U, k = q, k - 1
    return U.shift((0,) * (ca.d - 1) + (-k,))


def constant_points(ca: CAShift) -> list[int]:
    """Residues ``c`` whose constant configuration ``(c)`` lies in the shift."""
    if ca.P.evaluate_ones() == 0:
        return list(range(ca.p))
    return [0]


def collinear_direction(ca: CAShift) -> Optional[tuple[Exponent, int]]:
    return collinear_support(ca.P)
