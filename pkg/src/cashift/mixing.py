"""Exact mixing diagnostics along dilated primitive sets.

For events ``A_0..A_k`` and offsets ``n_0..n_k`` the joint event at dilation
``m`` is ``T_(-m n_0) A_0 & ... & T_(-m n_k) A_k``; the cylinder ``A`` on a
window ``S`` moves to the window ``S - m n``.  Joint and product measures
are exact powers of ``p``, so convergence shows up as eventual equality.
Emptiness at the dilations ``m = p^j`` is a hard non-mixing witness.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .ca import CAShift
from .laurent import Exponent, LaurentPoly, primitive_translate, shape, vscale
from .shift import (
    DEFAULT_CELL_BUDGET,
    Configuration,
    Event,
    MeasureValue,
    cylinder_measure,
)


def single_cell(value: int, d: int) -> Configuration:
    """Cylinder ``{c_0 = value}``."""
    return Configuration.from_mapping({(0,) * d: value})


def primitive_set(offsets: Sequence[Exponent]) -> list[Exponent]:
    offsets = [tuple(n) for n in offsets]
    if not offsets:
        raise ValueError("empty offset set")
    if len(set(offsets)) != len(offsets):
        raise ValueError("offsets must be distinct")
    if (0,) * len(offsets[0]) not in offsets:
        raise ValueError("a primitive set must contain the origin")
    return offsets


def default_dilations(p: int, mmax: int = 16) -> list[int]:
    powers = []
    q = p
    while q <= mmax:
        powers.append(q)
        q *= p
    return sorted(set(range(2, 17)) | set(powers))


@dataclass
class DilationEntry:
    m: int
    joint: MeasureValue
    product: MeasureValue

    @property
    def equal(self) -> bool:
        return self.joint == self.product

    def to_json(self) -> dict:
        return {"m": self.m, "joint": self.joint.to_json(), "product": self.product.to_json(),
                "equal": self.equal}


@dataclass
class DilationReport:
    offsets: list
    events: list
    individual: list
    entries: list = field(default_factory=list)

    @property
    def product(self) -> MeasureValue:
        out = MeasureValue.ppower(self.individual[0].p, 0)
        for mu in self.individual:
            out = out * mu
        return out

    def to_json(self) -> dict:
        return {
            "offsets": [list(n) for n in self.offsets],
            "events": [
                {"cells": [list(c) for c in ev.window.cells], "values": list(ev.values)}
                for ev in self.events
            ],
            "individual": [mu.to_json() for mu in self.individual],
            "entries": [e.to_json() for e in self.entries],
        }


def joint_measure(ca: CAShift, base: Sequence[Configuration], offsets: Sequence[Exponent], m: int,
                  cell_budget: int = DEFAULT_CELL_BUDGET) -> MeasureValue:
    events = [Event(cfg, vscale(-m, n)) for cfg, n in zip(base, offsets)]
    return cylinder_measure(ca, events, cell_budget)


def mixing_scan(ca: CAShift, base: Sequence[Configuration], offsets: Sequence[Exponent],
                dilations: Sequence[int], cell_budget: int = DEFAULT_CELL_BUDGET) -> DilationReport:
    """Joint versus product measure of the dilated events, one entry per ``m``."""
    if len(base) != len(offsets):
        raise ValueError("need exactly one event per offset")
    offsets = [tuple(n) for n in offsets]
    if len(set(offsets)) != len(offsets):
        raise ValueError("offsets must be distinct")
    individual = [cylinder_measure(ca, [cfg], cell_budget) for cfg in base]
    report = DilationReport(offsets, list(base), individual)
    product = report.product
    for m in dilations:
        report.entries.append(DilationEntry(m, joint_measure(ca, base, offsets, m, cell_budget), product))
    return report


@dataclass
class CertificateReport:
    multiplier: LaurentPoly
    annihilator: LaurentPoly
    offsets: list
    origin: Exponent
    product: MeasureValue
    measures: list

    @property
    def verdict(self) -> str:
        hit = not self.product.is_zero and all(mu.is_zero for _, mu in self.measures)
        return "non-mixing-witnessed" if hit else "not-witnessed"

    def to_json(self) -> dict:
        return {
            "multiplier": str(self.multiplier),
            "Q": str(self.annihilator),
            "shape": [list(n) for n in self.offsets],
            "origin": list(self.origin),
            "product": self.product.to_json(),
            "dilations": [{"j": j, "m": self.annihilator.p**j, "joint": mu.to_json()}
                          for j, mu in self.measures],
            "verdict": self.verdict,
        }


def certificate_events(offsets: Sequence[Exponent], d: int) -> list[Configuration]:
    """Value 1 at the origin offset, value 0 at every other offset."""
    return [single_cell(1 if not any(n) else 0, d) for n in offsets]


def nonmixing_certificate(ca: CAShift, R: LaurentPoly, jmax: int,
                          cell_budget: int = DEFAULT_CELL_BUDGET) -> CertificateReport:
    """Witness that the shape of ``Q = R P`` is non-mixing at dilations ``p^0 .. p^jmax``.

    A point with ``x_0 = 1`` and zeros at ``-p^j n`` for the other shape
    points has ``(Q^(p^j) x)_0 != 0``, so the joint event must be empty.
    """
    if R.is_zero():
        raise ValueError("multiplier must be nonzero")
    Q = R * ca.P
    S, origin = primitive_translate(shape(Q))
    offsets = sorted(S)
    base = certificate_events(offsets, ca.d)
    product = MeasureValue.ppower(ca.p, 0)
    for cfg in base:
        product = product * cylinder_measure(ca, [cfg], cell_budget)
    measures = [(j, joint_measure(ca, base, offsets, ca.p**j, cell_budget)) for j in range(jmax + 1)]
    return CertificateReport(R, Q, offsets, origin, product, measures)


@dataclass
class HorizontalReport:
    scan: DilationReport
    m0: Optional[int]

    @property
    def passed(self) -> bool:
        return self.m0 is not None

    def to_json(self) -> dict:
        return {"m0": self.m0, "passed": self.passed, "product": self.scan.product.to_json(),
                "scan": self.scan.to_json()}


def horizontal_mixing_check(ca: CAShift, offsets: Sequence[Exponent], base: Optional[Sequence[Configuration]] = None,
                            mmax: int = 64, cell_budget: int = DEFAULT_CELL_BUDGET) -> HorizontalReport:
    """Scan ``m = 1..mmax`` for an offset set lying in the layer ``n_d = 0``.

    ``m0`` is the least dilation from which joint equals product for every
    tested ``m >= m0``; ``None`` when the last tested dilation still differs.
    Default events are single-cell cylinders with value 1.
    """
    offsets = primitive_set(offsets)
    if any(n[-1] for n in offsets):
        raise ValueError("every offset must have final coordinate 0")
    if base is None:
        base = [single_cell(1, ca.d) for _ in offsets]
    # m = 1..mmax already contains every p-power <= mmax
    dilations = list(range(1, mmax + 1))
    scan = mixing_scan(ca, base, offsets, dilations, cell_budget)
    m0 = None
    for entry in reversed(scan.entries):
        if not entry.equal:
            break
        m0 = entry.m
    return HorizontalReport(scan, m0)

